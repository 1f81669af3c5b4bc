#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "hallbridge/hall.hpp"

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

TEST_CASE("twisted Hall products over A2/F_2") {
  AlgebraData a = load("a2_f2.json");
  HallContext ctx(a, 2, Budgets{});
  ModuleClassId s1 = ctx.mstore().id_of(a.simple(0));
  ModuleClassId s2 = ctx.mstore().id_of(a.simple(1));
  ModuleClassId p1 = ctx.mstore().id_of(a.projective(0));
  ModuleClassId split = ctx.mstore().id_of(direct_sum(a.simple(0), a.simple(1)));

  SUBCASE("[S1] * [S2] = t^{-1}([S1+S2] + [P(1)])") {
    HallElem prod = ctx.hall_mul(ctx.hall_basis(s1), ctx.hall_basis(s2));
    REQUIRE(prod.terms.size() == 2);
    CHECK(prod.terms.at(split) == tpow(2, -1));
    CHECK(prod.terms.at(p1) == tpow(2, -1));
  }
  SUBCASE("[S2] * [S1] = [S1+S2]") {
    HallElem prod = ctx.hall_mul(ctx.hall_basis(s2), ctx.hall_basis(s1));
    REQUIRE(prod.terms.size() == 1);
    CHECK(prod.terms.at(split) == ctx.tone());
  }
  SUBCASE("unit") {
    HallElem x = ctx.hall_basis(p1);
    CHECK(ctx.hall_mul(ctx.hall_unit(), x) == x);
    CHECK(ctx.hall_mul(x, ctx.hall_unit()) == x);
  }
  SUBCASE("products leaving the bound raise") {
    CHECK_THROWS_AS(ctx.hall_mul(ctx.hall_basis(p1), ctx.hall_basis(p1)), BoundExceeded);
  }
}

TEST_CASE("twisted Hall products over A2/F_3") {
  AlgebraData a = load("a2_f3.json");
  HallContext ctx(a, 2, Budgets{});
  ModuleClassId s1 = ctx.mstore().id_of(a.simple(0));
  ModuleClassId s2 = ctx.mstore().id_of(a.simple(1));
  ModuleClassId p1 = ctx.mstore().id_of(a.projective(0));
  ModuleClassId split = ctx.mstore().id_of(direct_sum(a.simple(0), a.simple(1)));
  // Ext^1(S1, S2) has 3 elements: the zero class splits, the two nonsplit
  // cocycles both give P(1).
  HallElem prod = ctx.hall_mul(ctx.hall_basis(s1), ctx.hall_basis(s2));
  REQUIRE(prod.terms.size() == 2);
  CHECK(prod.terms.at(split) == tpow(3, -1));
  CHECK(prod.terms.at(p1) == tpow(3, -1) * TCoeff::integer(3, 2));
}

TEST_CASE("normalize_dh") {
  AlgebraData a = load("a2_f2.json");
  HallContext ctx(a, 2, Budgets{});
  std::vector<long long> z(2, 0);
  Representation s1 = a.simple(0);
  SUBCASE("acyclic-free input rewrites to itself") {
    Complex2 ca = c_of_module(a, s1);
    DHElem e = ctx.normalize_dh(z, z, ca, ctx.tone());
    REQUIRE(e.terms.size() == 1);
    const DHKey& k = e.terms.begin()->first;
    CHECK(k.alpha == z);
    CHECK(k.beta == z);
    CHECK(k.m == ctx.cstore().id_of(ca));
    CHECK(e.terms.begin()->second == ctx.tone());
  }
  SUBCASE("K_P rewrites to the K_{P-hat} prefix") {
    Complex2 kp = k_acyclic(a, {0}, AcyclicKind::kPlus);
    DHElem e = ctx.normalize_dh(z, z, kp, ctx.tone());
    REQUIRE(e.terms.size() == 1);
    const DHKey& k = e.terms.begin()->first;
    CHECK(k.alpha == std::vector<long long>{1, 1});  // class of P(1)
    CHECK(k.beta == z);
    CHECK(k.m == ctx.cstore().id_of(zero_complex2(a)));
    CHECK(e.terms.begin()->second == ctx.tone());
  }
  SUBCASE("padded complex rewrites with the twist t^{<R1-R0, A>}") {
    // R0 = P(1), R1 = P(2): factor t^{<(0,1)-(1,1), (1,0)>} = t^{<(-1,0),(1,0)>} = t^{-1}
    Complex2 padded = c_of_module_padded(a, s1, {0}, {1});
    DHElem e = ctx.normalize_dh(z, z, padded, ctx.tone());
    REQUIRE(e.terms.size() == 1);
    const DHKey& k = e.terms.begin()->first;
    CHECK(k.alpha == std::vector<long long>{1, 1});
    CHECK(k.beta == std::vector<long long>{0, 1});
    CHECK(k.m == ctx.cstore().id_of(c_of_module(a, s1)));
    CHECK(e.terms.begin()->second == tpow(2, -1));
  }
}

TEST_CASE("E_A") {
  AlgebraData a = load("a2_f2.json");
  HallContext ctx(a, 2, Budgets{});
  SUBCASE("zero module maps to the unit") {
    CHECK(ctx.e_of_module(zero_representation(a)) == ctx.dh_unit());
  }
  SUBCASE("projective module") {
    DHElem e = ctx.e_of_module(a.projective(0));
    REQUIRE(e.terms.size() == 1);
    const DHKey& k = e.terms.begin()->first;
    CHECK(k.alpha == std::vector<long long>{0, 0});
    CHECK(k.beta == std::vector<long long>{0, 0});
    CHECK(e.terms.begin()->second == ctx.tone());
  }
  SUBCASE("S1 over A2") {
    DHElem e = ctx.e_of_module(a.simple(0));
    REQUIRE(e.terms.size() == 1);
    const DHKey& k = e.terms.begin()->first;
    CHECK(k.alpha == std::vector<long long>{0, -1});  // P2 - P1 = -class of P(2)
    CHECK(k.beta == std::vector<long long>{0, 0});
    CHECK(k.m == ctx.cstore().id_of(c_of_module(a, a.simple(0))));
    CHECK(e.terms.begin()->second == ctx.tone());  // t^{<S2, S1>} = t^0
  }
}

TEST_CASE("dh_mul") {
  AlgebraData a = load("a2_f2.json");
  HallContext ctx(a, 2, Budgets{});
  std::vector<long long> z(2, 0);
  SUBCASE("unit key is a two-sided identity") {
    DHElem u = ctx.dh_unit();
    DHElem e = ctx.e_of_module(a.simple(0));
    CHECK(ctx.dh_mul(u, e) == e);
    CHECK(ctx.dh_mul(e, u) == e);
  }
  SUBCASE("[K_P] * [K*_P] lands on the key (P, P, 0)") {
    DHElem kp = ctx.normalize_dh(z, z, k_acyclic(a, {0}, AcyclicKind::kPlus), ctx.tone());
    DHElem kps = ctx.normalize_dh(z, z, k_acyclic(a, {0}, AcyclicKind::kStar), ctx.tone());
    DHElem prod = ctx.dh_mul(kp, kps);
    REQUIRE(prod.terms.size() == 1);
    const DHKey& k = prod.terms.begin()->first;
    CHECK(k.alpha == std::vector<long long>{1, 1});
    CHECK(k.beta == std::vector<long long>{1, 1});
    CHECK(k.m == ctx.cstore().id_of(zero_complex2(a)));
    CHECK(prod.terms.begin()->second == ctx.tone());
  }
  SUBCASE("K-commutation: K_alpha m = t^{(alpha, m)} m K_alpha") {
    for (int v : {0, 1}) {
      DHElem kp = ctx.normalize_dh(z, z, k_acyclic(a, {v}, AcyclicKind::kPlus), ctx.tone());
      for (int w : {0, 1}) {
        Complex2 ca = c_of_module(a, a.simple(w));
        DHElem m;
        dh_add_term(m, DHKey{z, z, ctx.cstore().id_of(ca)}, ctx.tone());
        long long pairing = ctx.euler().sym(proj_sum_kclass(a, {v}), ca.kclass);
        CHECK(ctx.dh_mul(kp, m) == dh_scale(ctx.dh_mul(m, kp), tpow(ctx.q(), pairing)));
      }
    }
  }
}

TEST_CASE("the embedding is multiplicative on the worked A2/F_2 example") {
  AlgebraData a = load("a2_f2.json");
  HallContext ctx(a, 2, Budgets{});
  ModuleClassId s1 = ctx.mstore().id_of(a.simple(0));
  ModuleClassId s2 = ctx.mstore().id_of(a.simple(1));
  SUBCASE("i_plus of the unit") { CHECK(ctx.i_plus(ctx.hall_unit()) == ctx.dh_unit()); }
  SUBCASE("linearity") {
    HallElem x = hall_scale(ctx.hall_basis(s1), TCoeff(2, mpq_class(3, 2), 1));
    CHECK(ctx.i_plus(x) == dh_scale(ctx.e_of_class(s1), TCoeff(2, mpq_class(3, 2), 1)));
  }
  SUBCASE("homomorphism on [S1] * [S2] and [S2] * [S1]") {
    for (auto [x, y] : {std::pair{s1, s2}, std::pair{s2, s1}}) {
      DHElem lhs = ctx.i_plus(ctx.hall_mul(ctx.hall_basis(x), ctx.hall_basis(y)));
      DHElem rhs = ctx.dh_mul(ctx.e_of_class(x), ctx.e_of_class(y));
      CHECK(lhs == rhs);
    }
  }
  SUBCASE("the [S2] * [S1] image is E_{S1+S2}, whose coefficient is t") {
    DHElem lhs = ctx.i_plus(ctx.hall_mul(ctx.hall_basis(s2), ctx.hall_basis(s1)));
    DHElem expect = ctx.e_of_class(ctx.mstore().id_of(direct_sum(a.simple(0), a.simple(1))));
    CHECK(lhs == expect);
    REQUIRE(expect.terms.size() == 1);
    CHECK(expect.terms.begin()->second == TCoeff::t(2));  // t^{<S2, S1 + S2>}
  }
}

TEST_CASE("shift_dh") {
  AlgebraData a = load("a2_f2.json");
  HallContext ctx(a, 2, Budgets{});
  SUBCASE("involution fixing the unit") {
    CHECK(ctx.shift_dh(ctx.dh_unit()) == ctx.dh_unit());
    DHElem e = ctx.e_of_class(ctx.mstore().id_of(a.simple(0)));
    CHECK(ctx.shift_dh(ctx.shift_dh(e)) == e);
  }
  SUBCASE("F_A has the transposed prefix over the shifted complex") {
    Representation s1 = a.simple(0);
    DHElem f = ctx.shift_dh(ctx.e_of_module(s1));
    REQUIRE(f.terms.size() == 1);
    const DHKey& k = f.terms.begin()->first;
    CHECK(k.alpha == std::vector<long long>{0, 0});
    CHECK(k.beta == std::vector<long long>{0, -1});
    CHECK(k.m == ctx.cstore().id_of(shift(a, c_of_module(a, s1))));
  }
}

TEST_CASE("reduce_dh") {
  AlgebraData a = load("a2_f2.json");
  HallContext ctx(a, 2, Budgets{});
  std::vector<long long> z(2, 0);
  SUBCASE("K_P * K*_P reduces to the unit key") {
    DHElem kp = ctx.normalize_dh(z, z, k_acyclic(a, {0}, AcyclicKind::kPlus), ctx.tone());
    DHElem kps = ctx.normalize_dh(z, z, k_acyclic(a, {0}, AcyclicKind::kStar), ctx.tone());
    DHRedElem red = ctx.reduce_dh(ctx.dh_mul(kp, kps));
    CHECK(red == ctx.reduce_dh(ctx.dh_unit()));
  }
  SUBCASE("reduce(E_{S1}) folds the prefix") {
    DHRedElem red = ctx.reduce_dh(ctx.e_of_module(a.simple(0)));
    REQUIRE(red.terms.size() == 1);
    CHECK(red.terms.begin()->first.gamma == std::vector<long long>{0, -1});
  }
  SUBCASE("reduction is multiplicative on the worked pairs") {
    ModuleClassId s1 = ctx.mstore().id_of(a.simple(0));
    ModuleClassId s2 = ctx.mstore().id_of(a.simple(1));
    DHRedElem lhs = ctx.reduce_dh(ctx.i_plus(ctx.hall_mul(ctx.hall_basis(s1), ctx.hall_basis(s2))));
    DHRedElem rhs = ctx.dhred_mul(ctx.reduce_dh(ctx.e_of_class(s1)),
                                  ctx.reduce_dh(ctx.e_of_class(s2)));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("linear independence") {
  AlgebraData a = load("a2_f2.json");
  HallContext ctx(a, 2, Budgets{});
  std::vector<DHElem> es;
  for (const ModuleClassId& id : ctx.mstore().enumerate_modules(2))
    es.push_back(ctx.e_of_class(id));
  CHECK(linear_independence_check(es));
  std::vector<DHRedElem> reds;
  for (const DHElem& e : es) reds.push_back(ctx.reduce_dh(e));
  CHECK(linear_independence_check(reds));
  SUBCASE("a repeated element is dependent") {
    es.push_back(es.front());
    CHECK(!linear_independence_check(es));
  }
  SUBCASE("a scalar multiple is dependent") {
    std::vector<DHElem> two = {es[1], dh_scale(es[1], TCoeff::t(2))};
    CHECK(!linear_independence_check(two));
  }
}

TEST_CASE("untwisted Hall product is associative on all triples within the bound") {
  for (const char* name : {"a2_f2.json", "twocycle_f2.json"}) {
    AlgebraData a = load(name);
    const int bound = 2;
    ModuleStore store(a, Budgets{});
    std::vector<ModuleClassId> ids = store.enumerate_modules(bound);
    const unsigned q = a.field().q;
    // Untwisted structure constants from Def-style counts.
    auto mul = [&](const std::map<ModuleClassId, mpq_class>& x,
                   const std::map<ModuleClassId, mpq_class>& y) {
      std::map<ModuleClassId, mpq_class> r;
      for (const auto& [ai, ac] : x)
        for (const auto& [ci, cc] : y) {
          Representation A = store.representative(ai), C = store.representative(ci);
          REQUIRE(A.total_dim() + C.total_dim() <= bound);
          mpq_class hom(1);
          for (int e = 0; e < hom_dim(a, A, C); ++e) hom *= static_cast<long>(q);
          for (const auto& [bi, count] : ext1_with_middles(a, store, A, C))
            r[bi] += ac * cc * mpq_class(static_cast<long>(count)) / hom;
        }
      return r;
    };
    for (const ModuleClassId& x : ids)
      for (const ModuleClassId& y : ids)
        for (const ModuleClassId& z : ids) {
          int total = store.representative(x).total_dim() + store.representative(y).total_dim() +
                      store.representative(z).total_dim();
          if (total > bound) continue;
          std::map<ModuleClassId, mpq_class> bx{{x, 1}}, by{{y, 1}}, bz{{z, 1}};
          CHECK(mul(mul(bx, by), bz) == mul(bx, mul(by, bz)));
        }
  }
}

TEST_CASE("distinct classes have distinct E_A keys") {
  AlgebraData a = load("twocycle_f2.json");
  HallContext ctx(a, 3, Budgets{});
  std::set<DHKey> keys;
  std::vector<ModuleClassId> ids = ctx.mstore().enumerate_modules(3);
  for (const ModuleClassId& id : ids) {
    DHElem e = ctx.e_of_class(id);
    REQUIRE(e.terms.size() == 1);
    keys.insert(e.terms.begin()->first);
  }
  CHECK(keys.size() == ids.size());
}

TEST_CASE("dh associativity smoke test") {
  AlgebraData a = load("a2_f2.json");
  HallContext ctx(a, 3, Budgets{});
  std::vector<long long> z(2, 0);
  std::vector<DHElem> keys;
  keys.push_back(ctx.e_of_class(ctx.mstore().id_of(a.simple(0))));
  keys.push_back(ctx.e_of_class(ctx.mstore().id_of(a.simple(1))));
  DHElem kp;
  dh_add_term(kp, DHKey{std::vector<long long>{1, 0}, std::vector<long long>{0, -1},
                        ctx.cstore().id_of(shift(a, c_of_module(a, a.simple(1))))},
              ctx.tone());
  keys.push_back(kp);
  for (const DHElem& x : keys)
    for (const DHElem& y : keys)
      for (const DHElem& w : keys)
        CHECK(ctx.dh_mul(ctx.dh_mul(x, y), w) == ctx.dh_mul(x, ctx.dh_mul(y, w)));
}
