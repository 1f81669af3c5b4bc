#ifndef HALLBRIDGE_HALL_HPP
#define HALLBRIDGE_HALL_HPP

// The algebra layer: twisted Hall algebra of mod B, the twisted Hall algebra
// of 2-periodic complexes, the localized algebra DH in normal form
// K_alpha * K*_beta * [M] (M with no acyclic summand), the reduced algebra,
// the elements E_A, and the embeddings.

#include <map>
#include <mutex>
#include <set>
#include <vector>

#include "hallbridge/cpx2.hpp"

namespace hallbridge {

struct HallElem {
  std::map<ModuleClassId, TCoeff> terms;
  bool operator==(const HallElem& o) const { return terms == o.terms; }
};

// Normal-form basis key K_alpha * K*_beta * [M].
struct DHKey {
  std::vector<long long> alpha, beta;
  Complex2ClassId m;
  bool operator<(const DHKey& o) const {
    if (alpha != o.alpha) return alpha < o.alpha;
    if (beta != o.beta) return beta < o.beta;
    return m < o.m;
  }
  bool operator==(const DHKey& o) const {
    return alpha == o.alpha && beta == o.beta && m == o.m;
  }
};

struct DHElem {
  std::map<DHKey, TCoeff> terms;
  bool operator==(const DHElem& o) const { return terms == o.terms; }
};

// Reduced key K_gamma * [M] (K*_alpha identified with K_{-alpha}).
struct DHRedKey {
  std::vector<long long> gamma;
  Complex2ClassId m;
  bool operator<(const DHRedKey& o) const {
    if (gamma != o.gamma) return gamma < o.gamma;
    return m < o.m;
  }
  bool operator==(const DHRedKey& o) const { return gamma == o.gamma && m == o.m; }
};

struct DHRedElem {
  std::map<DHRedKey, TCoeff> terms;
  bool operator==(const DHRedElem& o) const { return terms == o.terms; }
};

// Element of H_tw(C_2(P)) supported on complex classes.
using CpxElem = std::map<Complex2ClassId, TCoeff>;

// Bundles the algebra, the class stores, the Euler form, and the enumeration
// bound; memoizes structure constants.
class HallContext {
 public:
  HallContext(const AlgebraData& a, int max_total_dim, Budgets bud);

  const AlgebraData& algebra() const { return a_; }
  ModuleStore& mstore() { return mstore_; }
  ComplexStore& cstore() { return cstore_; }
  const EulerForm& euler() const { return euler_; }
  int bound() const { return bound_; }
  unsigned q() const { return a_.field().q; }
  int gldim() const { return gldim_; }

  TCoeff tzero() const { return TCoeff::zero(q()); }
  TCoeff tone() const { return TCoeff::one(q()); }

  // ---- twisted Hall algebra of mod B ----
  HallElem hall_unit();
  HallElem hall_basis(const ModuleClassId& id) const;
  HallElem hall_mul(const HallElem& x, const HallElem& y);
  int class_total_dim(const ModuleClassId& id);

  // ---- twisted Hall algebra of C_2(P), by class ids ----
  CpxElem cpx_basis(const Complex2ClassId& id) const;
  CpxElem cpx_hall_mul(const Complex2ClassId& mid, const Complex2ClassId& nid);
  CpxElem cpx_hall_mul(const CpxElem& x, const CpxElem& y);

  // ---- DH(A) in normal form ----
  DHElem dh_unit();
  DHElem normalize_dh(const std::vector<long long>& alpha, const std::vector<long long>& beta,
                      const Complex2& X, const TCoeff& c);
  DHElem dh_mul(const DHElem& x, const DHElem& y);
  DHElem e_of_module(const Representation& A);
  DHElem e_of_class(const ModuleClassId& id);
  DHElem i_plus(const HallElem& x);
  DHElem shift_dh(const DHElem& x);
  DHRedElem reduce_dh(const DHElem& x);
  DHRedElem dhred_mul(const DHRedElem& x, const DHRedElem& y);

 private:
  struct HallTerm {
    ModuleClassId middle;
    mpq_class coeff;  // |Ext^1(A,C)_B| / |Hom(A,C)|
  };
  const std::vector<HallTerm>& structure_constants(const ModuleClassId& a_id,
                                                   const ModuleClassId& c_id);

  const AlgebraData& a_;
  Budgets bud_;
  int bound_;
  int gldim_;
  ModuleStore mstore_;
  ComplexStore cstore_;
  EulerForm euler_;
  std::mutex memo_mu_;
  std::map<std::pair<std::string, std::string>, std::vector<HallTerm>> hall_memo_;
  std::map<std::pair<std::string, std::string>, CpxElem> cpx_memo_;
  std::map<std::string, DHElem> e_memo_;
  std::map<std::string, int> dim_memo_;
};

// Elementwise operations.
void hall_add_term(HallElem& x, const ModuleClassId& id, const TCoeff& c);
void dh_add_term(DHElem& x, const DHKey& key, const TCoeff& c);
void dhred_add_term(DHRedElem& x, const DHRedKey& key, const TCoeff& c);
void cpx_add_term(CpxElem& x, const Complex2ClassId& id, const TCoeff& c);
HallElem hall_scale(const HallElem& x, const TCoeff& c);
DHElem dh_scale(const DHElem& x, const TCoeff& c);
CpxElem cpx_scale(const CpxElem& x, const TCoeff& c);
DHElem dh_add(const DHElem& x, const DHElem& y);

// Row reduction over the field Q(t)/(t^2 - q): true iff the elements are
// linearly independent.
bool linear_independence_check(const std::vector<DHElem>& elems);
bool linear_independence_check(const std::vector<DHRedElem>& elems);

}  // namespace hallbridge

#endif
