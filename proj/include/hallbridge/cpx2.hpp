#ifndef HALLBRIDGE_CPX2_HPP
#define HALLBRIDGE_CPX2_HPP

// 2-periodic complexes of projectives: construction (K_P, K*_P, C_A, padded
// variants), shift, homology, chain-map spaces, Ext^1 with middles via
// homotopy cosets, acyclic-summand stripping, isomorphism testing, and
// canonical class ids.

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "hallbridge/modcat.hpp"

namespace hallbridge {

// A complex with projective components, kept as explicit direct sums of
// standard projectives (ordered summand lists).
struct Complex2 {
  std::vector<int> items1, items0;  // standard-projective summand vertices
  Representation M1, M0;
  std::vector<Mat> d1, d0;  // vertexwise: d1: M1 -> M0, d0: M0 -> M1
  std::vector<long long> kclass;  // dim_vector(M0) - dim_vector(M1)

  int total_dim() const { return M1.total_dim() + M0.total_dim(); }
  bool is_zero() const { return total_dim() == 0; }
  std::string encode() const;
};

// Components may be arbitrary representations here; used for subcomplex work
// inside the isomorphism decision.
struct RawComplex {
  Representation C1, C0;
  std::vector<Mat> d1, d0;
  int total_dim() const { return C1.total_dim() + C0.total_dim(); }
  bool is_zero() const { return total_dim() == 0; }
};
RawComplex to_raw(const Complex2& x);

Complex2 make_complex2(const AlgebraData& a, std::vector<int> items1, std::vector<int> items0,
                       std::vector<Mat> d1, std::vector<Mat> d0);
Complex2 zero_complex2(const AlgebraData& a);
Complex2 shift(const AlgebraData& a, const Complex2& x);
Complex2 direct_sum_complex(const AlgebraData& a, const Complex2& x, const Complex2& y);

enum class AcyclicKind { kPlus, kStar };  // K_P vs K*_P
Complex2 k_acyclic(const AlgebraData& a, const std::vector<int>& items, AcyclicKind kind);

// C_A from the minimal resolution: P1 <=> P0 + P2, d1 = (a1, 0)^T, d0 = (0, a2).
Complex2 c_of_module(const AlgebraData& a, const Representation& A);
// The padded variant: components R0 + P1 + R1 and R0 + P0 + R1 + P2 with the
// identity blocks on R0 (degree 1 -> 0) and R1 (degree 0 -> 1).
Complex2 c_of_module_padded(const AlgebraData& a, const Representation& A,
                            const std::vector<int>& r0_items, const std::vector<int>& r1_items);

// (H0, H1) = (ker d0 / im d1, ker d1 / im d0).
std::pair<Representation, Representation> homology(const AlgebraData& a, const RawComplex& x);
std::pair<Representation, Representation> homology(const AlgebraData& a, const Complex2& x);

// Chain maps x -> y: pairs (s1, s0) of module maps with s0 d1 = d1' s1 and
// s1 d0 = d0' s0.
struct ChainMapBasis {
  int dim = 0;
  std::vector<std::pair<std::vector<Mat>, std::vector<Mat>>> maps;  // (s1 mats, s0 mats)
};
ChainMapBasis chain_maps(const AlgebraData& a, const RawComplex& x, const RawComplex& y);
int hom_dim_c2(const AlgebraData& a, const Complex2& x, const Complex2& y);
long long hom_count_c2(const AlgebraData& a, const Complex2& x, const Complex2& y);

// Result of stripping all acyclic direct summands: x = K_P + K*_Q + core.
struct StripResult {
  std::vector<int> p_items, q_items;  // summands of P and Q (sorted)
  Complex2 core;                      // no acyclic direct summand
};
StripResult strip_acyclics(const AlgebraData& a, const Complex2& x);

// True iff some chain map pair is vertexwise invertible in both degrees.
bool is_isomorphic_c2(const AlgebraData& a, const Complex2& x, const Complex2& y,
                      const Budgets& bud);

class Complex2ClassId {
 public:
  Complex2ClassId() = default;
  explicit Complex2ClassId(std::string bytes) : bytes_(std::move(bytes)) {}
  const std::string& bytes() const { return bytes_; }
  std::string hex() const;
  bool operator<(const Complex2ClassId& o) const { return bytes_ < o.bytes_; }
  bool operator==(const Complex2ClassId& o) const { return bytes_ == o.bytes_; }
  bool operator!=(const Complex2ClassId& o) const { return bytes_ != o.bytes_; }

 private:
  std::string bytes_;
};

// Canonical ids for complexes.  The encoding is a pure function of the
// isomorphism class for complexes in the module family (stripped acyclic
// multiplicities plus the homology pair, verified against C_{H0} + C*_{H1});
// cores outside that family carry the same invariants plus a store-scoped
// sequence number, matched against earlier cores by the full isomorphism
// test.
class ComplexStore {
 public:
  ComplexStore(const AlgebraData& a, ModuleStore& mstore)
      : a_(a), mstore_(mstore) {}

  const AlgebraData& algebra() const { return a_; }
  ModuleStore& module_store() { return mstore_; }
  const Budgets& budgets() const { return mstore_.budgets(); }

  Complex2ClassId id_of(const Complex2& x);
  Complex2 representative(const Complex2ClassId& id) const;

 private:
  const AlgebraData& a_;
  ModuleStore& mstore_;
  mutable std::mutex mu_;
  std::map<std::string, Complex2ClassId> by_encoding_;
  std::map<std::string, Complex2> reps_;
  // Out-of-family cores grouped by their invariant prefix, in registration
  // order.
  std::map<std::string, std::vector<Complex2>> exotic_;
};

// Ext^1(x, y) in C_2(P), tallied by middle class.  Chain maps x -> y* are
// enumerated as coset representatives of the null-homotopic subspace; each
// representative contributes the middle with components (y1 + x1, y0 + x0)
// and upper-triangular differentials.  Sum of tallies = |Hom_K2(x, y*)|.
std::map<Complex2ClassId, long long> ext1_with_middles_c2(const AlgebraData& a,
                                                          ComplexStore& cstore, const Complex2& x,
                                                          const Complex2& y);

// dim_k of Ext^1_{C_2}(x, y) = dim Z - dim B for the spaces above.
int ext1_dim_c2(const AlgebraData& a, const Complex2& x, const Complex2& y);

}  // namespace hallbridge

#endif
