#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "hallbridge/algdef.hpp"
#include "hallbridge/modcat.hpp"

using namespace hallbridge;

namespace {

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(HB_DATA_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AlgebraData load(const std::string& name) {
  return AlgebraData::path_basis(load_presentation(read_data(name)));
}

}  // namespace

TEST_CASE("load A2 presentation") {
  QuiverPresentation p = load_presentation(read_data("a2_f2.json"));
  CHECK(p.field.q == 2);
  CHECK(p.num_vertices() == 2);
  CHECK(p.num_arrows() == 1);
  CHECK(p.relations.empty());
  CHECK(p.dim_cap == 12);
}

TEST_CASE("load two-cycle presentation") {
  QuiverPresentation p = load_presentation(read_data("twocycle_f2.json"));
  CHECK(p.num_arrows() == 2);
  CHECK(p.relations.size() == 1);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(load_presentation("not json"), ParseError);
  CHECK_THROWS_AS(load_presentation(R"({"q":2,"vertices":["1"],"arrows":[],"bogus":1})"),
                  ParseError);
  CHECK_THROWS_AS(load_presentation(R"({"q":4,"vertices":["1"],"arrows":[]})"), ParseError);
  // relation on a single arrow is not admissible
  CHECK_THROWS_AS(
      load_presentation(
          R"({"q":2,"vertices":["1"],"arrows":[{"name":"x","from":"1","to":"1"}],
              "relations":[[{"coef":1,"path":["x"]}]]})"),
      NotAdmissible);
  CHECK_THROWS_AS(
      load_presentation(
          R"({"q":2,"vertices":["1"],"arrows":[{"name":"x","from":"1","to":"1"}],
              "relations":[[{"coef":1,"path":["x","y"]}]]})"),
      UnknownVertexOrArrow);
  CHECK_THROWS_AS(
      load_presentation(R"({"q":2,"vertices":["1"],"arrows":[{"name":"x","from":"1","to":"2"}]})"),
      UnknownVertexOrArrow);
  CHECK_THROWS_AS(
      load_presentation(
          R"({"q":2,"vertices":["1","2"],"arrows":[{"name":"x","from":"1","to":"2"},
              {"name":"y","from":"1","to":"2"}],
              "relations":[[{"coef":1,"path":["x","y"]}]]})"),
      NotAdmissible);  // x then y is not composable
}

TEST_CASE("A2 path basis") {
  AlgebraData a = load("a2_f2.json");
  CHECK(a.dim() == 3);  // e1, e2, a
  CHECK(a.trivial_path_index(0) >= 0);
  CHECK(a.trivial_path_index(1) >= 0);
  CHECK(a.cartan_column(0) == std::vector<long long>{1, 1});
  CHECK(a.cartan_column(1) == std::vector<long long>{0, 1});
}

TEST_CASE("two-cycle path basis") {
  AlgebraData a = load("twocycle_f2.json");
  CHECK(a.dim() == 5);  // e1, e2, alpha, beta, beta.alpha
  // The killed path alpha.beta must not be a basis element.
  Path p;
  p.src = 0;
  p.tgt = 0;
  p.arrows = {0, 1};
  CHECK(a.basis_index(p) < 0);
  CHECK(a.reduce_path(p).empty());
}

TEST_CASE("one loop with no relation is infinite dimensional") {
  CHECK_THROWS_AS(load("loop_f2.json"), NotFiniteDimensional);
}

TEST_CASE("canonical algebra of type (2,2,2)") {
  AlgebraData a = load("canonical222_f2.json");
  // 5 trivial paths + 6 arrows + 2 surviving arm composites.
  CHECK(a.dim() == 13);
  // X2^2 reduces to X0^2 - lambda X1^2 (= X0^2 + X1^2 over F_2).
  Path p;
  p.src = 0;
  p.tgt = 4;
  p.arrows = {4, 5};
  CHECK(a.basis_index(p) < 0);
  CHECK(a.reduce_path(p).size() == 2);
}

TEST_CASE("standard modules over A2") {
  AlgebraData a = load("a2_f2.json");
  Representation s1 = standard_module(a, 0, StandardKind::kSimple);
  CHECK(s1.dims == std::vector<int>{1, 0});
  Representation p1 = standard_module(a, 0, StandardKind::kProjective);
  CHECK(p1.dims == std::vector<int>{1, 1});
  CHECK(p1.mats[0].at(0, 0) == 1);
  Representation p2 = standard_module(a, 1, StandardKind::kProjective);
  CHECK(p2.dims == std::vector<int>{0, 1});
  CHECK_THROWS_AS(standard_module(a, 2, StandardKind::kSimple), UnknownVertexOrArrow);
}

TEST_CASE("two-cycle projectives") {
  AlgebraData a = load("twocycle_f2.json");
  CHECK(a.projective(1).dims == std::vector<int>{1, 2});
  CHECK(a.projective(0).dims == std::vector<int>{1, 1});
}

TEST_CASE("projectives satisfy the relations and sum to dim B") {
  for (const char* name : {"a2_f2.json", "twocycle_f2.json", "threevertex_f2.json",
                           "canonical222_f2.json"}) {
    AlgebraData a = load(name);
    int total = 0;
    for (int v = 0; v < a.num_vertices(); ++v) {
      Representation p = a.projective(v);
      CHECK_NOTHROW(validate_representation(a, p));
      total += p.total_dim();
      // top of P(v), as the quotient by the radical, is S(v)
      Representation top = quotient_representation(a, p, radical_subspace(a, p));
      CHECK(is_isomorphic(a, top, a.simple(v), Budgets{}));
    }
    CHECK(total == a.dim());
  }
}

TEST_CASE("fingerprint is stable") {
  CHECK(fnv64_hex("") == "cbf29ce484222325");
  CHECK(fnv64_hex("abc") != fnv64_hex("abd"));
}
