#ifndef HALLBRIDGE_MODCAT_HPP
#define HALLBRIDGE_MODCAT_HPP

// The module-category engine: Hom/Aut/Ext over mod B, isomorphism classes
// with canonical ids, minimal projective resolutions, the Euler form, and
// extension middles.  All counts are exact; searches carry explicit budgets.

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hallbridge/algdef.hpp"

namespace hallbridge {

struct Budgets {
  long long search = 1'000'000;    // cap on q^dim enumerations (iso search, Aut, Ext cosets)
  long long raw_enum = 10'000'000; // cap on raw representation tuples per cell
};

// q^e, guarded against exceeding `cap` (returns cap+1 once it would).
long long pow_capped(unsigned q, int e, long long cap);

// ---- basic representation operations ----

bool satisfies_relations(const AlgebraData& a, const Representation& r);
void validate_representation(const AlgebraData& a, const Representation& r);
Representation zero_representation(const AlgebraData& a);
Representation direct_sum(const Representation& x, const Representation& y);
Mat path_action(const AlgebraData& a, const Representation& r, const Path& p);

// A subspace tuple: one column-basis matrix per vertex.
using SubspaceTuple = std::vector<Mat>;

Representation subrepresentation(const AlgebraData& a, const Representation& r,
                                 const SubspaceTuple& basis);
// Quotient by an arrow-closed subspace tuple; optionally returns the
// vertexwise projection matrices.
Representation quotient_representation(const AlgebraData& a, const Representation& r,
                                       const SubspaceTuple& sub, std::vector<Mat>* proj = nullptr);
SubspaceTuple radical_subspace(const AlgebraData& a, const Representation& r);
std::vector<int> top_dims(const AlgebraData& a, const Representation& r);

// ---- Hom spaces, isomorphism, automorphisms ----

struct HomBasis {
  int dim = 0;
  std::vector<std::vector<Mat>> maps;  // each element: one Mat per vertex (B_v x A_v)
};
HomBasis hom_basis(const AlgebraData& a, const Representation& A, const Representation& B);
int hom_dim(const AlgebraData& a, const Representation& A, const Representation& B);

bool is_isomorphic(const AlgebraData& a, const Representation& A, const Representation& B,
                   const Budgets& bud);
long long aut_order(const AlgebraData& a, const Representation& A, const Budgets& bud);

// ---- canonical isomorphism-class ids ----

// Canonical byte encoding of the lexicographically least representation in
// the isomorphism class; equal ids iff isomorphic.
class ModuleClassId {
 public:
  ModuleClassId() = default;
  explicit ModuleClassId(std::string bytes) : bytes_(std::move(bytes)) {}
  const std::string& bytes() const { return bytes_; }
  std::string hex() const;
  bool operator<(const ModuleClassId& o) const { return bytes_ < o.bytes_; }
  bool operator==(const ModuleClassId& o) const { return bytes_ == o.bytes_; }
  bool operator!=(const ModuleClassId& o) const { return bytes_ != o.bytes_; }

 private:
  std::string bytes_;
};

// Per-algebra content-addressed store of class representatives.  Thread-safe;
// ids are pure functions of the isomorphism class, so concurrent insertion
// cannot race on the winner.
class ModuleStore {
 public:
  ModuleStore(const AlgebraData& a, Budgets bud) : a_(a), bud_(bud) {}

  const AlgebraData& algebra() const { return a_; }
  const Budgets& budgets() const { return bud_; }

  ModuleClassId id_of(const Representation& r);
  Representation representative(const ModuleClassId& id) const;
  // All classes with total dimension <= bound, zero module included,
  // ordered by (total dim, id bytes).
  std::vector<ModuleClassId> enumerate_modules(int max_total_dim);

 private:
  struct Cell {
    bool partitioned = false;
    std::vector<ModuleClassId> classes;
  };
  ModuleClassId id_of_locked(const Representation& r);
  void partition_cell(const std::vector<int>& dims);
  long long cell_raw_count(const std::vector<int>& dims) const;

  const AlgebraData& a_;
  Budgets bud_;
  mutable std::mutex mu_;
  std::map<std::string, ModuleClassId> by_encoding_;
  std::map<std::string, Representation> reps_;
  std::map<std::vector<int>, Cell> cells_;
};

// Iterate all raw representations with the given dimension vector that
// satisfy the relations, in ascending encoding order.
void for_each_raw_representation(const AlgebraData& a, const std::vector<int>& dims,
                                 const std::function<void(const Representation&)>& fn);

// ---- resolutions, Euler form, Ext ----

struct Resolution {
  // Ordered summand lists (vertex indices, ascending) and their realizations.
  std::vector<int> p0_items, p1_items, p2_items;
  Representation P0, P1, P2;
  std::vector<Mat> a0, a1, a2;  // vertexwise maps P0->A, P1->P0, P2->P1
  bool minimal = true;
  int length() const { return !P2.is_zero() ? 2 : (!P1.is_zero() ? 1 : 0); }
};

Representation realize_proj_sum(const AlgebraData& a, const std::vector<int>& items);
std::vector<long long> proj_sum_kclass(const AlgebraData& a, const std::vector<int>& items);

// Coordinate layout of a realized direct sum of standard projectives: for
// summand s and the k-th basis path of P(vertex(s)), the (vertex, offset)
// of that coordinate inside the sum.
struct ProjLayout {
  std::vector<std::vector<std::pair<int, int>>> coord;
  std::vector<int> vertex;
};
ProjLayout proj_layout(const AlgebraData& a, const std::vector<int>& items);

Resolution minimal_resolution(const AlgebraData& a, const Representation& A);

// Runs minimal resolutions of all simples; returns the global dimension
// (<= 2) or throws GlobalDimensionExceeded.
int certify_gldim2(const AlgebraData& a);

struct EulerForm {
  std::vector<std::vector<long long>> e;  // e[i][j] = <S_i, S_j>
  long long pair(const std::vector<long long>& x, const std::vector<long long>& y) const;
  long long sym(const std::vector<long long>& x, const std::vector<long long>& y) const {
    return pair(x, y) + pair(y, x);
  }
};
EulerForm euler_form(const AlgebraData& a);

std::vector<long long> dim_vector(const Representation& r);

struct ExtDims {
  int hom = 0, ext1 = 0, ext2 = 0;
};
ExtDims ext_dims(const AlgebraData& a, const Representation& A, const Representation& B);

// Ext^1(A, C) tallied by middle-term class: enumerates one cocycle per
// extension class (coset representatives of the coboundary subspace), builds
// each middle as the pushout of 0 -> Omega -> P0 -> A -> 0 along Omega -> C,
// and classifies it.  Sum of tallies = |Ext^1(A, C)|.
std::map<ModuleClassId, long long> ext1_with_middles(const AlgebraData& a, ModuleStore& store,
                                                     const Representation& A,
                                                     const Representation& C);

// Independent oracle: number of subrepresentations U of B with U iso C and
// B/U iso A, by exhaustive subspace enumeration.
long long hall_number_oracle(const AlgebraData& a, const Representation& A,
                             const Representation& B, const Representation& C,
                             const Budgets& bud);

}  // namespace hallbridge

#endif
