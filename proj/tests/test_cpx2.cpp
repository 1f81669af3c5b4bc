#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "hallbridge/cpx2.hpp"

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

Budgets bud() { return Budgets{}; }

}  // namespace

TEST_CASE("acyclic complexes K_P and K*_P") {
  AlgebraData a = load("a2_f2.json");
  Complex2 kp = k_acyclic(a, {0}, AcyclicKind::kPlus);
  CHECK(kp.M1.dims == std::vector<int>{1, 1});
  CHECK(kp.d1[0] == Mat::identity(a.field(), 1));
  CHECK(kp.d0[0].is_zero());
  auto [h0, h1] = homology(a, kp);
  CHECK(h0.total_dim() == 0);
  CHECK(h1.total_dim() == 0);
  Complex2 kstar0 = k_acyclic(a, {}, AcyclicKind::kStar);
  CHECK(kstar0.is_zero());
}

TEST_CASE("shift is an involution and sends K_P to K*_P") {
  for (const char* name : {"a2_f2.json", "a2_f3.json"}) {
    AlgebraData a = load(name);
    Complex2 kp = k_acyclic(a, {0}, AcyclicKind::kPlus);
    Complex2 ks = k_acyclic(a, {0}, AcyclicKind::kStar);
    CHECK(is_isomorphic_c2(a, shift(a, kp), ks, bud()));
    Complex2 ca = c_of_module(a, a.projective(0));
    CHECK(shift(a, shift(a, ca)).encode() == ca.encode());
    CHECK(shift(a, zero_complex2(a)).is_zero());
  }
}

TEST_CASE("C_A for a projective and for S1") {
  AlgebraData a = load("a2_f2.json");
  CHECK(c_of_module(a, zero_representation(a)).is_zero());
  Complex2 cp = c_of_module(a, a.projective(0));
  CHECK(cp.items1.empty());
  CHECK(cp.items0 == std::vector<int>{0});
  CHECK(cp.d1[0].is_zero());
  CHECK(cp.d0[0].is_zero());
  Complex2 cs1 = c_of_module(a, a.simple(0));
  CHECK(cs1.items1 == std::vector<int>{1});
  CHECK(cs1.items0 == std::vector<int>{0});
  CHECK(cs1.d0[0].is_zero());
  CHECK(cs1.d0[1].is_zero());
  CHECK(!cs1.d1[1].is_zero());  // the radical inclusion P(2) -> P(1) at vertex 2
}

TEST_CASE("homology and K-class of C_A recover A") {
  for (const char* name : {"a2_f2.json", "twocycle_f2.json", "threevertex_f2.json"}) {
    AlgebraData a = load(name);
    ModuleStore store(a, bud());
    for (const ModuleClassId& id : store.enumerate_modules(2)) {
      Representation A = store.representative(id);
      Complex2 ca = c_of_module(a, A);
      CHECK(ca.kclass == dim_vector(A));
      auto [h0, h1] = homology(a, ca);
      CHECK(h1.total_dim() == 0);
      CHECK(store.id_of(h0) == id);
    }
  }
}

TEST_CASE("padded complexes") {
  AlgebraData a = load("a2_f2.json");
  Representation s1 = a.simple(0);
  SUBCASE("trivial padding gives C_A") {
    Complex2 plain = c_of_module(a, s1);
    Complex2 padded = c_of_module_padded(a, s1, {}, {});
    CHECK(plain.encode() == padded.encode());
  }
  SUBCASE("padding by R0 = P(1) adds a K summand") {
    Complex2 padded = c_of_module_padded(a, s1, {0}, {});
    Complex2 expect =
        direct_sum_complex(a, c_of_module(a, s1), k_acyclic(a, {0}, AcyclicKind::kPlus));
    CHECK(is_isomorphic_c2(a, padded, expect, bud()));
  }
  SUBCASE("homology unchanged by padding") {
    ModuleStore store(a, bud());
    Complex2 padded = c_of_module_padded(a, s1, {0, 1}, {1});
    auto [h0, h1] = homology(a, padded);
    CHECK(store.id_of(h0) == store.id_of(s1));
    CHECK(h1.total_dim() == 0);
  }
}

TEST_CASE("chain map counts") {
  AlgebraData a = load("a2_f2.json");
  Representation s1 = a.simple(0);
  SUBCASE("Hom_C2(C_S1, C_S1) = 2 over F_2") {
    Complex2 c = c_of_module(a, s1);
    CHECK(hom_count_c2(a, c, c) == 2);
  }
  SUBCASE("Hom from zero complex") {
    CHECK(hom_count_c2(a, zero_complex2(a), c_of_module(a, s1)) == 1);
  }
  SUBCASE("Hom_C2(K_P, K_P) = |Hom(P, P)|") {
    for (int v : {0, 1}) {
      Complex2 kp = k_acyclic(a, {v}, AcyclicKind::kPlus);
      CHECK(hom_dim_c2(a, kp, kp) == hom_dim(a, a.projective(v), a.projective(v)));
    }
  }
}

TEST_CASE("Ext^1 in C_2 with middles") {
  AlgebraData a = load("a2_f2.json");
  ModuleStore store(a, bud());
  ComplexStore cstore(a, store);
  Representation s1 = a.simple(0), s2 = a.simple(1);
  SUBCASE("|Ext^1_C2(C_S1, C_S2)| = |Ext^1(S1, S2)| = 2 at q = 2") {
    Complex2 c1 = c_of_module(a, s1), c2 = c_of_module(a, s2);
    auto tally = ext1_with_middles_c2(a, cstore, c1, c2);
    long long total = 0;
    for (auto& [id, n] : tally) total += n;
    CHECK(total == 2);
    CHECK(ext1_dim_c2(a, c1, c2) == 1);
    // One middle is split, the other is K_{P(2)} + C_{P(1)}.
    CHECK(tally.size() == 2);
    Complex2 split = direct_sum_complex(a, c2, c1);
    CHECK(tally.count(cstore.id_of(split)) == 1);
    Complex2 nonsplit = direct_sum_complex(a, k_acyclic(a, {1}, AcyclicKind::kPlus),
                                           c_of_module(a, a.projective(0)));
    CHECK(tally.count(cstore.id_of(nonsplit)) == 1);
  }
  SUBCASE("Ext^1(M, 0) = {M: 1}") {
    Complex2 c1 = c_of_module(a, s1);
    auto tally = ext1_with_middles_c2(a, cstore, c1, zero_complex2(a));
    REQUIRE(tally.size() == 1);
    CHECK(tally.begin()->first == cstore.id_of(c1));
    CHECK(tally.begin()->second == 1);
  }
  SUBCASE("extensions of acyclics are acyclic") {
    Complex2 kp = k_acyclic(a, {0}, AcyclicKind::kPlus);
    auto tally = ext1_with_middles_c2(a, cstore, kp, kp);
    for (auto& [id, n] : tally) {
      auto [h0, h1] = homology(a, cstore.representative(id));
      CHECK(h0.total_dim() == 0);
      CHECK(h1.total_dim() == 0);
    }
  }
}

TEST_CASE("middles of C_A extensions have module homology") {
  // Every extension middle of C_{A1} by C_{A2} has H1 = 0 and H0 isomorphic
  // to an extension middle of A1 by A2.
  for (const char* name : {"a2_f2.json", "twocycle_f2.json"}) {
    AlgebraData a = load(name);
    ModuleStore store(a, bud());
    ComplexStore cstore(a, store);
    std::vector<ModuleClassId> ids = store.enumerate_modules(2);
    for (const ModuleClassId& x : ids)
      for (const ModuleClassId& y : ids) {
        Representation A1 = store.representative(x), A2 = store.representative(y);
        auto module_tally = ext1_with_middles(a, store, A1, A2);
        auto cpx_tally =
            ext1_with_middles_c2(a, cstore, c_of_module(a, A1), c_of_module(a, A2));
        for (const auto& [mid, n] : cpx_tally) {
          auto [h0, h1] = homology(a, cstore.representative(mid));
          CHECK(h1.total_dim() == 0);
          CHECK(module_tally.count(store.id_of(h0)) == 1);
        }
      }
  }
}

TEST_CASE("stripping acyclic summands") {
  AlgebraData a = load("a2_f2.json");
  SUBCASE("K_P + K*_Q strips completely") {
    Complex2 x = direct_sum_complex(a, k_acyclic(a, {0, 1}, AcyclicKind::kPlus),
                                    k_acyclic(a, {1}, AcyclicKind::kStar));
    StripResult s = strip_acyclics(a, x);
    CHECK(s.p_items == std::vector<int>{0, 1});
    CHECK(s.q_items == std::vector<int>{1});
    CHECK(s.core.is_zero());
  }
  SUBCASE("C_A from a minimal resolution is already stripped") {
    ModuleStore store(a, bud());
    for (const ModuleClassId& id : store.enumerate_modules(2)) {
      StripResult s = strip_acyclics(a, c_of_module(a, store.representative(id)));
      CHECK(s.p_items.empty());
      CHECK(s.q_items.empty());
    }
  }
  SUBCASE("padded complex strips to (R0, R1, C_A)") {
    Representation s1 = a.simple(0);
    StripResult s = strip_acyclics(a, c_of_module_padded(a, s1, {0}, {1}));
    CHECK(s.p_items == std::vector<int>{0});
    CHECK(s.q_items == std::vector<int>{1});
    CHECK(is_isomorphic_c2(a, s.core, c_of_module(a, s1), bud()));
  }
  SUBCASE("strip commutes with shuffling summand order") {
    Representation s1 = a.simple(0);
    Complex2 x = direct_sum_complex(a, k_acyclic(a, {0}, AcyclicKind::kPlus),
                                    direct_sum_complex(a, c_of_module(a, s1),
                                                       k_acyclic(a, {1}, AcyclicKind::kStar)));
    Complex2 y = direct_sum_complex(a, k_acyclic(a, {1}, AcyclicKind::kStar),
                                    direct_sum_complex(a, k_acyclic(a, {0}, AcyclicKind::kPlus),
                                                       c_of_module(a, s1)));
    StripResult sx = strip_acyclics(a, x);
    StripResult sy = strip_acyclics(a, y);
    CHECK(sx.p_items == sy.p_items);
    CHECK(sx.q_items == sy.q_items);
    CHECK(is_isomorphic_c2(a, sx.core, sy.core, bud()));
  }
  SUBCASE("strip of the shift swaps the roles of P and Q") {
    Representation s1 = a.simple(0);
    Complex2 x = direct_sum_complex(a, k_acyclic(a, {0}, AcyclicKind::kPlus),
                                    c_of_module_padded(a, s1, {}, {1}));
    StripResult s = strip_acyclics(a, x);
    StripResult ss = strip_acyclics(a, shift(a, x));
    CHECK(s.p_items == ss.q_items);
    CHECK(s.q_items == ss.p_items);
  }
}

TEST_CASE("complex isomorphism") {
  AlgebraData a = load("a2_f2.json");
  Representation s1 = a.simple(0);
  Complex2 kp = k_acyclic(a, {0}, AcyclicKind::kPlus);
  SUBCASE("reflexive") { CHECK(is_isomorphic_c2(a, kp, kp, bud())); }
  SUBCASE("K_P vs K*_P differ") {
    CHECK(!is_isomorphic_c2(a, kp, k_acyclic(a, {0}, AcyclicKind::kStar), bud()));
  }
  SUBCASE("padded vs explicit sum") {
    Complex2 x = direct_sum_complex(a, c_of_module(a, s1), kp);
    CHECK(is_isomorphic_c2(a, x, c_of_module_padded(a, s1, {0}, {}), bud()));
  }
  SUBCASE("C_{S1 + S2} vs C_{S1} + C_{S2}") {
    Complex2 x = c_of_module(a, direct_sum(s1, a.simple(1)));
    Complex2 y = direct_sum_complex(a, c_of_module(a, s1), c_of_module(a, a.simple(1)));
    CHECK(is_isomorphic_c2(a, x, y, bud()));
  }
  SUBCASE("different homology means non-isomorphic") {
    CHECK(!is_isomorphic_c2(a, c_of_module(a, s1), c_of_module(a, a.simple(1)), bud()));
    CHECK(!is_isomorphic_c2(a, c_of_module(a, s1), shift(a, c_of_module(a, s1)), bud()));
  }
}

TEST_CASE("canonical complex ids") {
  AlgebraData a = load("a2_f2.json");
  ModuleStore store(a, bud());
  ComplexStore cstore(a, store);
  Representation s1 = a.simple(0), s2 = a.simple(1);
  SUBCASE("isomorphic complexes share an id") {
    CHECK(cstore.id_of(c_of_module(a, direct_sum(s1, s2))) ==
          cstore.id_of(direct_sum_complex(a, c_of_module(a, s2), c_of_module(a, s1))));
    CHECK(cstore.id_of(k_acyclic(a, {0}, AcyclicKind::kPlus)) !=
          cstore.id_of(k_acyclic(a, {0}, AcyclicKind::kStar)));
  }
  SUBCASE("representatives reproduce their id") {
    Complex2 x = direct_sum_complex(a, k_acyclic(a, {1}, AcyclicKind::kPlus),
                                    c_of_module(a, direct_sum(s1, s1)));
    Complex2ClassId id = cstore.id_of(x);
    CHECK(cstore.id_of(cstore.representative(id)) == id);
  }
  SUBCASE("zero complex id") {
    CHECK(cstore.id_of(zero_complex2(a)) ==
          cstore.id_of(direct_sum_complex(a, zero_complex2(a), zero_complex2(a))));
  }
}

TEST_CASE("a core outside the module family still gets consistent ids") {
  // Over the two-cycle algebra, P(2) with differential "right multiplication
  // by beta.alpha" is a radical 2-periodic complex that is not of the form
  // C_{H0} + C*_{H1}; its component dimensions are too small for that.
  AlgebraData a = load("twocycle_f2.json");
  ModuleStore store(a, bud());
  ComplexStore cstore(a, store);
  const Field f = a.field();
  Representation p2 = a.projective(1);
  // Map P(2) -> P(2), e2 -> beta.alpha.
  std::vector<Mat> d1, d0;
  for (int v = 0; v < 2; ++v) {
    Mat m(f, p2.dims[v], p2.dims[v]);
    d0.push_back(m);
  }
  // Vertex 2 coordinates of P(2) are (e2, beta.alpha); vertex 1 is (beta).
  Mat m1(f, 1, 1);  // beta -> beta.alpha.beta = 0
  Mat m2(f, 2, 2);
  m2.set(1, 0, 1);  // e2 -> beta.alpha; beta.alpha -> 0
  d1 = {m1, m2};
  Complex2 x = make_complex2(a, {1}, {1}, d1, d0);
  StripResult s = strip_acyclics(a, x);
  CHECK(s.p_items.empty());
  CHECK(s.q_items.empty());
  auto [h0, h1] = homology(a, x);
  CHECK(h0.total_dim() == 2);
  CHECK(h1.total_dim() == 2);
  // Identity of the class is stable under a change of basis.
  Complex2ClassId id = cstore.id_of(x);
  Mat u(f, 2, 2);  // an automorphism of P(2) at vertex 2: e2 -> e2 + beta.alpha
  u.set(0, 0, 1);
  u.set(1, 0, 1);
  u.set(1, 1, 1);
  std::vector<Mat> d1b = {d1[0], u * d1[1] * u.inverse()};
  std::vector<Mat> d0b = d0;
  Complex2 y = make_complex2(a, {1}, {1}, d1b, d0b);
  CHECK(cstore.id_of(y) == id);
  CHECK(cstore.id_of(shift(a, x)) != id);
  CHECK(is_isomorphic_c2(a, x, y, bud()));
  CHECK(!is_isomorphic_c2(a, x, shift(a, x), bud()));
}

TEST_CASE("every constructed complex squares to zero") {
  // make_complex2 validates d.d = 0; build an assortment and rely on the
  // constructor check.
  AlgebraData a = load("threevertex_f2.json");
  ModuleStore store(a, bud());
  ComplexStore cstore(a, store);
  for (const ModuleClassId& id : store.enumerate_modules(2)) {
    Complex2 ca = c_of_module(a, store.representative(id));
    CHECK_NOTHROW(shift(a, ca));
    CHECK_NOTHROW(direct_sum_complex(a, ca, ca));
  }
}
