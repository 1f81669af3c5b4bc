#ifndef HALLBRIDGE_ALGDEF_HPP
#define HALLBRIDGE_ALGDEF_HPP

// A finite-dimensional algebra presented as a quiver with relations: input
// parsing, a path basis of kQ/I, and the standard (projective / simple)
// modules realized as quiver representations.
//
// Conventions, fixed once and used everywhere:
//   * a path [a, b] means "a then b", so target(a) = source(b);
//   * a representation assigns arrow x: u -> v a matrix V_u -> V_v acting on
//     column vectors, so the path [a, b] acts by M_b * M_a;
//   * projective P(i) has basis the residue classes of paths with source i,
//     with arrows acting by right-composition.

#include <map>
#include <string>
#include <vector>

#include "hallbridge/ffalg.hpp"

namespace hallbridge {

struct ArrowDef {
  std::string name;
  int src = 0, tgt = 0;
};

// One term of a relation: coef * (composable arrow-index sequence).
struct RelTerm {
  unsigned coef = 0;
  std::vector<int> arrows;
};
using Relation = std::vector<RelTerm>;

struct QuiverPresentation {
  Field field;
  std::vector<std::string> vertices;
  std::vector<ArrowDef> arrows;
  std::vector<Relation> relations;
  int dim_cap = 12;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_arrows() const { return static_cast<int>(arrows.size()); }
};

// Parse and validate the JSON input schema.  Unknown keys are rejected.
QuiverPresentation load_presentation(const std::string& text);

// FNV-1a 64-bit hex digest; used to fingerprint input files in reports.
std::string fnv64_hex(const std::string& data);

// A path in the quiver, stored as its arrow-index sequence (empty = trivial
// path at src == tgt).  Ordered by (length, lexicographic on arrows).
struct Path {
  int src = 0, tgt = 0;
  std::vector<int> arrows;

  int length() const { return static_cast<int>(arrows.size()); }
  bool operator==(const Path& o) const {
    return src == o.src && tgt == o.tgt && arrows == o.arrows;
  }
  bool operator<(const Path& o) const {
    if (arrows.size() != o.arrows.size()) return arrows.size() < o.arrows.size();
    if (arrows != o.arrows) return arrows < o.arrows;
    if (src != o.src) return src < o.src;
    return tgt < o.tgt;
  }
};

// Sparse element of the path algebra: basis-path index -> coefficient.
using AlgCombo = std::vector<std::pair<int, unsigned>>;

// A quiver representation: one vector space per vertex, one matrix per arrow.
struct Representation {
  Field field;
  std::vector<int> dims;
  std::vector<Mat> mats;

  int total_dim() const {
    int s = 0;
    for (int d : dims) s += d;
    return s;
  }
  bool is_zero() const { return total_dim() == 0; }
  std::string encode() const;
  bool operator==(const Representation& o) const { return dims == o.dims && mats == o.mats; }
};

// The algebra B = kQ/I with a concrete basis of residue classes of paths.
// Built by path_basis(); immutable afterwards.
class AlgebraData {
 public:
  static AlgebraData path_basis(const QuiverPresentation& pres);

  const QuiverPresentation& pres() const { return pres_; }
  Field field() const { return pres_.field; }
  int num_vertices() const { return pres_.num_vertices(); }
  int num_arrows() const { return pres_.num_arrows(); }
  int dim() const { return static_cast<int>(basis_.size()); }

  const std::vector<Path>& basis() const { return basis_; }
  const Path& basis_path(int i) const { return basis_[i]; }
  int basis_index(const Path& p) const;
  int trivial_path_index(int vertex) const { return trivial_[vertex]; }
  int arrow_basis_index(int arrow) const { return arrow_basis_[arrow]; }
  const std::vector<int>& basis_with_source(int v) const { return by_source_[v]; }

  // Product of two basis classes, as a combo of basis classes.
  const AlgCombo& mul_basis(int i, int j) const { return mul_table_[i * dim() + j]; }
  // Reduce an arbitrary composable path to a combo of basis classes.
  AlgCombo reduce_path(const Path& p) const;

  // cartan_column(i) = dimension vector of P(i) over the vertices.
  std::vector<long long> cartan_column(int i) const;

  Representation projective(int vertex) const;
  Representation simple(int vertex) const;

 private:
  AlgebraData() = default;

  QuiverPresentation pres_;
  std::vector<Path> basis_;                 // sorted by (length, lex)
  std::map<Path, int> basis_lookup_;
  std::vector<int> trivial_;                // vertex -> basis index of e_v
  std::vector<int> arrow_basis_;            // arrow -> basis index
  std::vector<std::vector<int>> by_source_; // vertex -> basis indices
  // Groebner reducers for the relation ideal, leading term first, monic.
  struct GPoly {
    std::vector<std::pair<Path, unsigned>> terms;
  };
  std::vector<GPoly> gb_;
  std::vector<AlgCombo> mul_table_;  // dim x dim, filled once at build time

  friend class GroebnerEngine;
};

// standard_modules per kind; thin wrappers over AlgebraData.
enum class StandardKind { kProjective, kSimple };
Representation standard_module(const AlgebraData& a, int vertex, StandardKind kind);

}  // namespace hallbridge

#endif
