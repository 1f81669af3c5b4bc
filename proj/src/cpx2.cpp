#include "hallbridge/cpx2.hpp"

#include <algorithm>
#include <cassert>
#include <random>

namespace hallbridge {

namespace {

// Assemble a block matrix from a grid of optional blocks (nullptr = zero).
Mat block_matrix(Field f, const std::vector<int>& row_dims, const std::vector<int>& col_dims,
                 const std::vector<std::vector<const Mat*>>& blocks) {
  int rows = 0, cols = 0;
  for (int r : row_dims) rows += r;
  for (int c : col_dims) cols += c;
  Mat m(f, rows, cols);
  int roff = 0;
  for (size_t i = 0; i < row_dims.size(); ++i) {
    int coff = 0;
    for (size_t j = 0; j < col_dims.size(); ++j) {
      const Mat* b = blocks[i][j];
      if (b) {
        for (int r = 0; r < b->rows(); ++r)
          for (int c = 0; c < b->cols(); ++c) m.set(roff + r, coff + c, b->at(r, c));
      }
      coff += col_dims[j];
    }
    roff += row_dims[i];
  }
  return m;
}

bool is_module_map(const AlgebraData& a, const Representation& src, const Representation& tgt,
                   const std::vector<Mat>& phi) {
  for (int x = 0; x < a.num_arrows(); ++x) {
    const ArrowDef& d = a.pres().arrows[x];
    if (!(phi[d.tgt] * src.mats[x] == tgt.mats[x] * phi[d.src])) return false;
  }
  return true;
}

}  // namespace

std::string Complex2::encode() const {
  std::string out;
  out.push_back(static_cast<char>(items1.size()));
  for (int v : items1) out.push_back(static_cast<char>(v));
  out.push_back(static_cast<char>(items0.size()));
  for (int v : items0) out.push_back(static_cast<char>(v));
  for (const Mat& m : d1) m.encode(out);
  for (const Mat& m : d0) m.encode(out);
  return out;
}

RawComplex to_raw(const Complex2& x) { return RawComplex{x.M1, x.M0, x.d1, x.d0}; }

Complex2 make_complex2(const AlgebraData& a, std::vector<int> items1, std::vector<int> items0,
                       std::vector<Mat> d1, std::vector<Mat> d0) {
  Complex2 c;
  c.items1 = std::move(items1);
  c.items0 = std::move(items0);
  c.M1 = realize_proj_sum(a, c.items1);
  c.M0 = realize_proj_sum(a, c.items0);
  c.d1 = std::move(d1);
  c.d0 = std::move(d0);
  for (int v = 0; v < a.num_vertices(); ++v) {
    if (c.d1[v].rows() != c.M0.dims[v] || c.d1[v].cols() != c.M1.dims[v] ||
        c.d0[v].rows() != c.M1.dims[v] || c.d0[v].cols() != c.M0.dims[v])
      throw Error("complex differential shape mismatch");
    if (!(c.d0[v] * c.d1[v]).is_zero() || !(c.d1[v] * c.d0[v]).is_zero())
      throw Error("complex differentials do not square to zero");
  }
  if (!is_module_map(a, c.M1, c.M0, c.d1) || !is_module_map(a, c.M0, c.M1, c.d0))
    throw Error("complex differentials are not module maps");
  std::vector<long long> k0 = dim_vector(c.M0), k1 = dim_vector(c.M1);
  for (int v = 0; v < a.num_vertices(); ++v) c.kclass.push_back(k0[v] - k1[v]);
  return c;
}

Complex2 zero_complex2(const AlgebraData& a) {
  std::vector<Mat> z;
  for (int v = 0; v < a.num_vertices(); ++v) z.push_back(Mat(a.field(), 0, 0));
  return make_complex2(a, {}, {}, z, z);
}

Complex2 shift(const AlgebraData& a, const Complex2& x) {
  std::vector<Mat> nd1, nd0;
  for (int v = 0; v < a.num_vertices(); ++v) {
    nd1.push_back(x.d0[v].negated());
    nd0.push_back(x.d1[v].negated());
  }
  return make_complex2(a, x.items0, x.items1, std::move(nd1), std::move(nd0));
}

Complex2 direct_sum_complex(const AlgebraData& a, const Complex2& x, const Complex2& y) {
  std::vector<int> i1 = x.items1, i0 = x.items0;
  i1.insert(i1.end(), y.items1.begin(), y.items1.end());
  i0.insert(i0.end(), y.items0.begin(), y.items0.end());
  std::vector<Mat> d1, d0;
  for (int v = 0; v < a.num_vertices(); ++v) {
    d1.push_back(Mat::diag_sum(x.d1[v], y.d1[v]));
    d0.push_back(Mat::diag_sum(x.d0[v], y.d0[v]));
  }
  return make_complex2(a, std::move(i1), std::move(i0), std::move(d1), std::move(d0));
}

Complex2 k_acyclic(const AlgebraData& a, const std::vector<int>& items, AcyclicKind kind) {
  Representation P = realize_proj_sum(a, items);
  std::vector<Mat> id, zero;
  for (int v = 0; v < a.num_vertices(); ++v) {
    id.push_back(Mat::identity(a.field(), P.dims[v]));
    zero.push_back(Mat(a.field(), P.dims[v], P.dims[v]));
  }
  if (kind == AcyclicKind::kPlus) return make_complex2(a, items, items, id, zero);
  return make_complex2(a, items, items, zero, id);
}

Complex2 c_of_module(const AlgebraData& a, const Representation& A) {
  Resolution res = minimal_resolution(a, A);
  std::vector<int> items0 = res.p0_items;
  items0.insert(items0.end(), res.p2_items.begin(), res.p2_items.end());
  std::vector<Mat> d1, d0;
  const Field f = a.field();
  for (int v = 0; v < a.num_vertices(); ++v) {
    int n0 = res.P0.dims[v], n1 = res.P1.dims[v], n2 = res.P2.dims[v];
    d1.push_back(block_matrix(f, {n0, n2}, {n1}, {{&res.a1[v]}, {nullptr}}));
    d0.push_back(block_matrix(f, {n1}, {n0, n2}, {{nullptr, &res.a2[v]}}));
  }
  return make_complex2(a, res.p1_items, items0, std::move(d1), std::move(d0));
}

Complex2 c_of_module_padded(const AlgebraData& a, const Representation& A,
                            const std::vector<int>& r0_items, const std::vector<int>& r1_items) {
  Resolution res = minimal_resolution(a, A);
  Representation R0 = realize_proj_sum(a, r0_items);
  Representation R1 = realize_proj_sum(a, r1_items);
  const Field f = a.field();
  // M1 = R0 + P1 + R1, M0 = R0 + P0 + R1 + P2.
  std::vector<int> items1 = r0_items;
  items1.insert(items1.end(), res.p1_items.begin(), res.p1_items.end());
  items1.insert(items1.end(), r1_items.begin(), r1_items.end());
  std::vector<int> items0 = r0_items;
  items0.insert(items0.end(), res.p0_items.begin(), res.p0_items.end());
  items0.insert(items0.end(), r1_items.begin(), r1_items.end());
  items0.insert(items0.end(), res.p2_items.begin(), res.p2_items.end());
  std::vector<Mat> d1, d0;
  for (int v = 0; v < a.num_vertices(); ++v) {
    int m0 = R0.dims[v], m1 = res.P1.dims[v], mr1 = R1.dims[v];
    int n0 = res.P0.dims[v], n2 = res.P2.dims[v];
    Mat idr0 = Mat::identity(f, m0);
    Mat idr1 = Mat::identity(f, mr1);
    d1.push_back(block_matrix(f, {m0, n0, mr1, n2}, {m0, m1, mr1},
                              {{&idr0, nullptr, nullptr},
                               {nullptr, &res.a1[v], nullptr},
                               {nullptr, nullptr, nullptr},
                               {nullptr, nullptr, nullptr}}));
    d0.push_back(block_matrix(f, {m0, m1, mr1}, {m0, n0, mr1, n2},
                              {{nullptr, nullptr, nullptr, nullptr},
                               {nullptr, nullptr, nullptr, &res.a2[v]},
                               {nullptr, nullptr, &idr1, nullptr}}));
  }
  return make_complex2(a, std::move(items1), std::move(items0), std::move(d1), std::move(d0));
}

std::pair<Representation, Representation> homology(const AlgebraData& a, const RawComplex& x) {
  auto sub_quotient = [&](const Representation& amb, const std::vector<Mat>& din,
                          const std::vector<Mat>& dout) {
    // ker(dout) / im(din), both inside amb.
    SubspaceTuple ker(amb.dims.size());
    for (size_t v = 0; v < amb.dims.size(); ++v) ker[v] = dout[v].nullspace();
    Representation K = subrepresentation(a, amb, ker);
    SubspaceTuple img(amb.dims.size());
    for (size_t v = 0; v < amb.dims.size(); ++v) {
      auto coords = solve(ker[v], din[v]);
      if (!coords) throw Error("internal: image not inside kernel");
      img[v] = coords->column_basis();
    }
    return quotient_representation(a, K, img);
  };
  Representation h0 = sub_quotient(x.C0, x.d1, x.d0);
  Representation h1 = sub_quotient(x.C1, x.d0, x.d1);
  return {h0, h1};
}

std::pair<Representation, Representation> homology(const AlgebraData& a, const Complex2& x) {
  return homology(a, to_raw(x));
}

// ---------------------------------------------------------------------------
// Linear systems over map pairs
// ---------------------------------------------------------------------------

namespace {

// Unknowns are a list of matrix blocks; equations are sums of L * X_b * R.
class LinSystem {
 public:
  explicit LinSystem(Field f) : f_(f) {}

  int add_block(int rows, int cols) {
    shapes_.push_back({rows, cols});
    offsets_.push_back(total_);
    total_ += rows * cols;
    return static_cast<int>(shapes_.size()) - 1;
  }

  struct EqGroup {
    int base = 0, rows = 0, cols = 0;
  };
  EqGroup eq_group(int rows, int cols) {
    EqGroup g{static_cast<int>(eqs_.size()), rows, cols};
    eqs_.resize(eqs_.size() + static_cast<size_t>(rows) * cols, std::vector<unsigned>(total_, 0));
    return g;
  }

  // Adds (-1)^negate * L * X_block * R to the group's equations.
  void add_term(const EqGroup& g, const Mat& L, int block, const Mat& R, bool negate) {
    auto [br, bc] = shapes_[block];
    int off = offsets_[block];
    for (int i = 0; i < g.rows; ++i)
      for (int j = 0; j < g.cols; ++j) {
        std::vector<unsigned>& row = eqs_[g.base + static_cast<size_t>(i) * g.cols + j];
        for (int k = 0; k < br; ++k) {
          unsigned lik = L.at(i, k);
          if (lik == 0) continue;
          for (int l = 0; l < bc; ++l) {
            unsigned c = f_.mul(lik, R.at(l, j));
            if (c == 0) continue;
            if (negate) c = f_.neg(c);
            int idx = off + k * bc + l;
            row[idx] = f_.add(row[idx], c);
          }
        }
      }
  }

  Mat nullspace() const {
    Mat sys(f_, static_cast<int>(eqs_.size()), total_);
    for (size_t r = 0; r < eqs_.size(); ++r)
      for (int c = 0; c < total_; ++c) sys.set(static_cast<int>(r), c, eqs_[r][c]);
    return sys.nullspace();
  }

  Mat unpack(const Mat& solutions, int block, int col) const {
    auto [br, bc] = shapes_[block];
    int off = offsets_[block];
    Mat m(f_, br, bc);
    for (int i = 0; i < br; ++i)
      for (int j = 0; j < bc; ++j) m.set(i, j, solutions.at(off + i * bc + j, col));
    return m;
  }

  int pack_index(int block, int i, int j) const {
    return offsets_[block] + i * shapes_[block].second + j;
  }
  int total() const { return total_; }

 private:
  Field f_;
  std::vector<std::pair<int, int>> shapes_;
  std::vector<int> offsets_;
  int total_ = 0;
  std::vector<std::vector<unsigned>> eqs_;
};

// Add module-map equations for blocks `blk` mapping src -> tgt.
void add_intertwiner_eqs(LinSystem& sys, const AlgebraData& a, const Representation& src,
                         const Representation& tgt, const std::vector<int>& blk) {
  for (int x = 0; x < a.num_arrows(); ++x) {
    const ArrowDef& d = a.pres().arrows[x];
    auto g = sys.eq_group(tgt.dims[d.tgt], src.dims[d.src]);
    // phi_tgt * src_x - tgt_x * phi_src = 0
    sys.add_term(g, Mat::identity(a.field(), tgt.dims[d.tgt]), blk[d.tgt], src.mats[x], false);
    sys.add_term(g, tgt.mats[x], blk[d.src], Mat::identity(a.field(), src.dims[d.src]), true);
  }
}

struct ShiftChainSpace {
  LinSystem sys;
  std::vector<int> f1_blk, f0_blk;
  Mat zbasis;  // nullspace: chain maps x -> y*
};

// Chain maps x -> y^*: pairs (f1: x1 -> y0, f0: x0 -> y1) with
// d0' f1 + f0 d1 = 0 and d1' f0 + f1 d0 = 0.
ShiftChainSpace shift_chain_space(const AlgebraData& a, const Complex2& x, const Complex2& y) {
  const Field f = a.field();
  const int nv = a.num_vertices();
  ShiftChainSpace out{LinSystem(f), {}, {}, Mat()};
  LinSystem& sys = out.sys;
  for (int v = 0; v < nv; ++v) out.f1_blk.push_back(sys.add_block(y.M0.dims[v], x.M1.dims[v]));
  for (int v = 0; v < nv; ++v) out.f0_blk.push_back(sys.add_block(y.M1.dims[v], x.M0.dims[v]));
  add_intertwiner_eqs(sys, a, x.M1, y.M0, out.f1_blk);
  add_intertwiner_eqs(sys, a, x.M0, y.M1, out.f0_blk);
  for (int v = 0; v < nv; ++v) {
    auto g1 = sys.eq_group(y.M1.dims[v], x.M1.dims[v]);
    sys.add_term(g1, y.d0[v], out.f1_blk[v], Mat::identity(f, x.M1.dims[v]), false);
    sys.add_term(g1, Mat::identity(f, y.M1.dims[v]), out.f0_blk[v], x.d1[v], false);
    auto g2 = sys.eq_group(y.M0.dims[v], x.M0.dims[v]);
    sys.add_term(g2, y.d1[v], out.f0_blk[v], Mat::identity(f, x.M0.dims[v]), false);
    sys.add_term(g2, Mat::identity(f, y.M0.dims[v]), out.f1_blk[v], x.d0[v], false);
  }
  out.zbasis = sys.nullspace();
  return out;
}

// Null-homotopic chain maps x -> y^*: images of (h0: x0 -> y0, h1: x1 -> y1)
// under f1 = h0 d1 - d1' h1, f0 = h1 d0 - d0' h0, as packed vectors.
Mat shift_boundaries(const AlgebraData& a, const Complex2& x, const Complex2& y,
                     const ShiftChainSpace& space) {
  const Field f = a.field();
  const int nv = a.num_vertices();
  HomBasis h0s = hom_basis(a, x.M0, y.M0);
  HomBasis h1s = hom_basis(a, x.M1, y.M1);
  int nparams = h0s.dim + h1s.dim;
  Mat vecs(f, space.sys.total(), nparams);
  auto pack = [&](int col, const std::vector<Mat>& f1, const std::vector<Mat>& f0) {
    for (int v = 0; v < nv; ++v) {
      for (int i = 0; i < f1[v].rows(); ++i)
        for (int j = 0; j < f1[v].cols(); ++j)
          vecs.set(space.sys.pack_index(space.f1_blk[v], i, j), col, f1[v].at(i, j));
      for (int i = 0; i < f0[v].rows(); ++i)
        for (int j = 0; j < f0[v].cols(); ++j)
          vecs.set(space.sys.pack_index(space.f0_blk[v], i, j), col, f0[v].at(i, j));
    }
  };
  int col = 0;
  for (int k = 0; k < h0s.dim; ++k, ++col) {
    std::vector<Mat> f1, f0;
    for (int v = 0; v < nv; ++v) {
      f1.push_back(h0s.maps[k][v] * x.d1[v]);
      f0.push_back((y.d0[v] * h0s.maps[k][v]).negated());
    }
    pack(col, f1, f0);
  }
  for (int k = 0; k < h1s.dim; ++k, ++col) {
    std::vector<Mat> f1, f0;
    for (int v = 0; v < nv; ++v) {
      f1.push_back((y.d1[v] * h1s.maps[k][v]).negated());
      f0.push_back(h1s.maps[k][v] * x.d0[v]);
    }
    pack(col, f1, f0);
  }
  return vecs.column_basis();
}

}  // namespace

ChainMapBasis chain_maps(const AlgebraData& a, const RawComplex& x, const RawComplex& y) {
  const Field f = a.field();
  const int nv = a.num_vertices();
  LinSystem sys(f);
  std::vector<int> s1_blk, s0_blk;
  for (int v = 0; v < nv; ++v) s1_blk.push_back(sys.add_block(y.C1.dims[v], x.C1.dims[v]));
  for (int v = 0; v < nv; ++v) s0_blk.push_back(sys.add_block(y.C0.dims[v], x.C0.dims[v]));
  add_intertwiner_eqs(sys, a, x.C1, y.C1, s1_blk);
  add_intertwiner_eqs(sys, a, x.C0, y.C0, s0_blk);
  for (int v = 0; v < nv; ++v) {
    // s0 d1 = d1' s1
    auto g1 = sys.eq_group(y.C0.dims[v], x.C1.dims[v]);
    sys.add_term(g1, Mat::identity(f, y.C0.dims[v]), s0_blk[v], x.d1[v], false);
    sys.add_term(g1, y.d1[v], s1_blk[v], Mat::identity(f, x.C1.dims[v]), true);
    // s1 d0 = d0' s0
    auto g2 = sys.eq_group(y.C1.dims[v], x.C0.dims[v]);
    sys.add_term(g2, Mat::identity(f, y.C1.dims[v]), s1_blk[v], x.d0[v], false);
    sys.add_term(g2, y.d0[v], s0_blk[v], Mat::identity(f, x.C0.dims[v]), true);
  }
  Mat null = sys.nullspace();
  ChainMapBasis out;
  out.dim = null.cols();
  for (int c = 0; c < null.cols(); ++c) {
    std::vector<Mat> s1, s0;
    for (int v = 0; v < nv; ++v) s1.push_back(sys.unpack(null, s1_blk[v], c));
    for (int v = 0; v < nv; ++v) s0.push_back(sys.unpack(null, s0_blk[v], c));
    out.maps.push_back({std::move(s1), std::move(s0)});
  }
  return out;
}

int hom_dim_c2(const AlgebraData& a, const Complex2& x, const Complex2& y) {
  return chain_maps(a, to_raw(x), to_raw(y)).dim;
}

long long hom_count_c2(const AlgebraData& a, const Complex2& x, const Complex2& y) {
  int d = hom_dim_c2(a, x, y);
  long long r = 1;
  for (int i = 0; i < d; ++i) {
    if (r > (1ll << 60) / a.field().q) throw Error("hom count exceeds 2^60; use hom_dim_c2");
    r *= a.field().q;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Path-matrix calculus and acyclic stripping
// ---------------------------------------------------------------------------

namespace {

using Combo = AlgCombo;  // basis-index -> coefficient, sorted

Combo combo_add(Field f, const Combo& x, const Combo& y) {
  Combo out;
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j >= y.size() || (i < x.size() && x[i].first < y[j].first)) out.push_back(x[i++]);
    else if (i >= x.size() || y[j].first < x[i].first) out.push_back(y[j++]);
    else {
      unsigned c = f.add(x[i].second, y[j].second);
      if (c != 0) out.push_back({x[i].first, c});
      ++i; ++j;
    }
  }
  return out;
}

Combo combo_scale(Field f, const Combo& x, unsigned c) {
  Combo out;
  if (c == 0) return out;
  for (auto& [i, v] : x) out.push_back({i, f.mul(v, c)});
  return out;
}

// Algebra product z * y (paths of z, then paths of y).
Combo combo_mul(const AlgebraData& a, const Combo& z, const Combo& y) {
  Field f = a.field();
  Combo out;
  for (auto& [zi, zc] : z)
    for (auto& [yi, yc] : y) {
      unsigned c = f.mul(zc, yc);
      if (c == 0) continue;
      out = combo_add(f, out, combo_scale(f, a.mul_basis(zi, yi), c));
    }
  return out;
}

// Coefficient of the trivial path e_v inside a combo (0 when absent).
unsigned trivial_coeff(const AlgebraData& a, const Combo& x, int v) {
  int e = a.trivial_path_index(v);
  for (auto& [i, c] : x)
    if (i == e) return c;
  return 0;
}

// Inverse of a unit in the local ring e_v B e_v.
Combo local_inverse(const AlgebraData& a, const Combo& p, int v) {
  Field f = a.field();
  std::vector<int> loop_basis;
  for (int b : a.basis_with_source(v))
    if (a.basis_path(b).tgt == v) loop_basis.push_back(b);
  int n = static_cast<int>(loop_basis.size());
  std::map<int, int> pos;
  for (int i = 0; i < n; ++i) pos[loop_basis[i]] = i;
  // Left multiplication by p on e_v B e_v.
  Mat L(f, n, n);
  for (int j = 0; j < n; ++j) {
    Combo col = combo_mul(a, p, {{loop_basis[j], 1}});
    for (auto& [i, c] : col) L.set(pos.at(i), j, c);
  }
  Mat rhs(f, n, 1);
  rhs.set(pos.at(a.trivial_path_index(v)), 0, 1);
  auto x = solve(L, rhs);
  if (!x) throw Error("internal: endomorphism not invertible");
  Combo inv;
  for (int i = 0; i < n; ++i)
    if (x->at(i, 0) != 0) inv.push_back({loop_basis[i], x->at(i, 0)});
  std::sort(inv.begin(), inv.end());
  // Two-sided in a local ring; check both compositions anyway.
  Combo e = {{a.trivial_path_index(v), 1}};
  if (combo_mul(a, p, inv) != e || combo_mul(a, inv, p) != e)
    throw Error("internal: one-sided local inverse");
  return inv;
}

// Matrix of path combos: entry (r, c) is a map P(cols[c]) -> P(rows[r]),
// i.e. a combination of basis paths rows[r] -> cols[c].
struct PathMat {
  std::vector<int> rows, cols;  // summand vertices
  std::vector<Combo> e;         // row major

  Combo& at(int r, int c) { return e[static_cast<size_t>(r) * cols.size() + c]; }
  const Combo& at(int r, int c) const { return e[static_cast<size_t>(r) * cols.size() + c]; }
};

// Reverse layout: for each vertex, the (summand, basis-path) of each
// coordinate of the realized sum.
std::vector<std::vector<std::pair<int, int>>> reverse_layout(const AlgebraData& a,
                                                             const std::vector<int>& items) {
  ProjLayout L = proj_layout(a, items);
  std::vector<std::vector<std::pair<int, int>>> rev(a.num_vertices());
  for (size_t s = 0; s < items.size(); ++s) {
    const std::vector<int>& paths = a.basis_with_source(items[s]);
    for (size_t k = 0; k < paths.size(); ++k) {
      auto [w, off] = L.coord[s][k];
      if (static_cast<int>(rev[w].size()) <= off) rev[w].resize(off + 1);
      rev[w][off] = {static_cast<int>(s), paths[k]};
    }
  }
  return rev;
}

PathMat linmaps_to_pathmat(const AlgebraData& a, const std::vector<int>& src_items,
                           const std::vector<int>& tgt_items, const std::vector<Mat>& maps) {
  PathMat pm;
  pm.rows = tgt_items;
  pm.cols = src_items;
  pm.e.assign(pm.rows.size() * pm.cols.size(), {});
  ProjLayout Ls = proj_layout(a, src_items);
  auto rev_t = reverse_layout(a, tgt_items);
  for (size_t c = 0; c < src_items.size(); ++c) {
    int u = src_items[c];
    auto [w, off] = Ls.coord[c][0];  // generator coordinate (trivial path)
    for (int i = 0; i < maps[u].rows(); ++i) {
      unsigned coef = maps[u].at(i, off);
      if (coef == 0) continue;
      auto [r, path_idx] = rev_t[u][i];
      pm.at(static_cast<int>(r), static_cast<int>(c)).push_back({path_idx, coef});
    }
  }
  for (Combo& cb : pm.e) std::sort(cb.begin(), cb.end());
  return pm;
}

std::vector<Mat> pathmat_to_linmaps(const AlgebraData& a, const PathMat& pm) {
  const Field f = a.field();
  Representation src = realize_proj_sum(a, pm.cols);
  Representation tgt = realize_proj_sum(a, pm.rows);
  ProjLayout Ls = proj_layout(a, pm.cols);
  ProjLayout Lt = proj_layout(a, pm.rows);
  std::vector<Mat> maps;
  for (int v = 0; v < a.num_vertices(); ++v) maps.push_back(Mat(f, tgt.dims[v], src.dims[v]));
  for (size_t c = 0; c < pm.cols.size(); ++c) {
    const std::vector<int>& paths = a.basis_with_source(pm.cols[c]);
    for (size_t k = 0; k < paths.size(); ++k) {
      auto [w, off] = Ls.coord[c][k];
      // Image of this source coordinate: sum over target summands of
      // entry(r, c) * path.
      for (size_t r = 0; r < pm.rows.size(); ++r) {
        const Combo& entry = pm.at(static_cast<int>(r), static_cast<int>(c));
        if (entry.empty()) continue;
        Combo img = combo_mul(a, entry, {{paths[k], 1}});
        for (auto& [bidx, coef] : img) {
          // Locate (r, bidx) in the target layout.
          const std::vector<int>& tpaths = a.basis_with_source(pm.rows[r]);
          auto it = std::find(tpaths.begin(), tpaths.end(), bidx);
          auto [tw, toff] = Lt.coord[r][it - tpaths.begin()];
          maps[tw].set(toff, off, f.add(maps[tw].at(toff, off), coef));
        }
      }
    }
  }
  return maps;
}

// One Gaussian peel on the pivot-side matrix A (mirroring ops onto B).
// A: rows = one degree's summands, cols = the other's; B is the opposite
// differential (rows = A's cols, cols = A's rows).  Returns the pivot
// position or (-1, -1).
std::pair<int, int> find_unit(const AlgebraData& a, const PathMat& A) {
  for (size_t r = 0; r < A.rows.size(); ++r)
    for (size_t c = 0; c < A.cols.size(); ++c)
      if (A.rows[r] == A.cols[c] &&
          trivial_coeff(a, A.at(static_cast<int>(r), static_cast<int>(c)), A.rows[r]) != 0)
        return {static_cast<int>(r), static_cast<int>(c)};
  return {-1, -1};
}

void peel_at(const AlgebraData& a, PathMat& A, PathMat& B, int r, int c, int* peeled_vertex) {
  const Field f = a.field();
  const int v = A.rows[r];
  const int nr = static_cast<int>(A.rows.size());
  const int nc = static_cast<int>(A.cols.size());
  Combo pinv = local_inverse(a, A.at(r, c), v);
  // Normalize pivot to the trivial path: A col c *= pinv; mirror B row c.
  Combo p = A.at(r, c);
  for (int i = 0; i < nr; ++i) A.at(i, c) = combo_mul(a, A.at(i, c), pinv);
  for (int j = 0; j < nr; ++j) B.at(c, j) = combo_mul(a, p, B.at(c, j));
  // Clear column c: row r' += h * row r with h = -A(r', c); mirror on B col r.
  for (int rp = 0; rp < nr; ++rp) {
    if (rp == r || A.at(rp, c).empty()) continue;
    Combo h = combo_scale(f, A.at(rp, c), f.neg(1));
    for (int j = 0; j < nc; ++j)
      A.at(rp, j) = combo_add(f, A.at(rp, j), combo_mul(a, h, A.at(r, j)));
    for (int i = 0; i < nc; ++i)
      B.at(i, r) = combo_add(f, B.at(i, r), combo_scale(f, combo_mul(a, B.at(i, rp), h), f.neg(1)));
  }
  // Clear row r: col c' += col c * m with m = -A(r, c'); mirror on B row c.
  for (int cp = 0; cp < nc; ++cp) {
    if (cp == c || A.at(r, cp).empty()) continue;
    Combo m = combo_scale(f, A.at(r, cp), f.neg(1));
    for (int i = 0; i < nr; ++i)
      A.at(i, cp) = combo_add(f, A.at(i, cp), combo_mul(a, A.at(i, c), m));
    for (int j = 0; j < nr; ++j)
      B.at(c, j) = combo_add(f, B.at(c, j), combo_scale(f, combo_mul(a, m, B.at(cp, j)), f.neg(1)));
  }
  // dd = 0 forces the matching row/column of B to vanish.
  for (int j = 0; j < nr; ++j)
    if (!B.at(c, j).empty()) throw Error("internal: peel left residue in B row");
  for (int i = 0; i < nc; ++i)
    if (!B.at(i, r).empty()) throw Error("internal: peel left residue in B column");
  *peeled_vertex = v;
  // Drop row r, col c from A; row c, col r from B.
  PathMat A2, B2;
  for (int i = 0; i < nr; ++i)
    if (i != r) A2.rows.push_back(A.rows[i]);
  for (int j = 0; j < nc; ++j)
    if (j != c) A2.cols.push_back(A.cols[j]);
  B2.rows = A2.cols;
  B2.cols = A2.rows;
  A2.e.assign(A2.rows.size() * A2.cols.size(), {});
  B2.e.assign(B2.rows.size() * B2.cols.size(), {});
  for (int i = 0, i2 = 0; i < nr; ++i) {
    if (i == r) continue;
    for (int j = 0, j2 = 0; j < nc; ++j) {
      if (j == c) continue;
      A2.at(i2, j2) = A.at(i, j);
      ++j2;
    }
    ++i2;
  }
  for (int i = 0, i2 = 0; i < nc; ++i) {
    if (i == c) continue;
    for (int j = 0, j2 = 0; j < nr; ++j) {
      if (j == r) continue;
      B2.at(i2, j2) = B.at(i, j);
      ++j2;
    }
    ++i2;
  }
  A = std::move(A2);
  B = std::move(B2);
}

}  // namespace

StripResult strip_acyclics(const AlgebraData& a, const Complex2& x) {
  PathMat D1 = linmaps_to_pathmat(a, x.items1, x.items0, x.d1);
  PathMat D0 = linmaps_to_pathmat(a, x.items0, x.items1, x.d0);
  StripResult out;
  while (true) {
    auto [r1, c1] = find_unit(a, D1);
    if (r1 >= 0) {
      int v = 0;
      peel_at(a, D1, D0, r1, c1, &v);
      out.p_items.push_back(v);
      continue;
    }
    auto [r0, c0] = find_unit(a, D0);
    if (r0 >= 0) {
      int v = 0;
      peel_at(a, D0, D1, r0, c0, &v);
      out.q_items.push_back(v);
      continue;
    }
    break;
  }
  std::sort(out.p_items.begin(), out.p_items.end());
  std::sort(out.q_items.begin(), out.q_items.end());
  out.core = make_complex2(a, D1.cols, D1.rows, pathmat_to_linmaps(a, D1),
                           pathmat_to_linmaps(a, D0));
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism of complexes by certified summand cancellation
// ---------------------------------------------------------------------------

namespace {

// A chain endomorphism / chain map as matrices per (degree, vertex).
struct ChainPair {
  std::vector<Mat> s1, s0;
};

ChainPair compose(const ChainPair& g, const ChainPair& f) {
  ChainPair r;
  for (size_t v = 0; v < f.s1.size(); ++v) {
    r.s1.push_back(g.s1[v] * f.s1[v]);
    r.s0.push_back(g.s0[v] * f.s0[v]);
  }
  return r;
}

bool is_zero_pair(const ChainPair& p) {
  for (const Mat& m : p.s1)
    if (!m.is_zero()) return false;
  for (const Mat& m : p.s0)
    if (!m.is_zero()) return false;
  return true;
}

bool is_nilpotent(const ChainPair& e) {
  // Powers act blockwise; nilpotency is blockwise nilpotency.
  for (const std::vector<Mat>* side : {&e.s1, &e.s0})
    for (const Mat& m : *side) {
      Mat p = m;
      for (int i = 0; i < m.rows(); ++i) p = p * m;  // p = m^{rows+1}
      if (!p.is_zero()) return false;
    }
  return true;
}

std::string encode_pair(const ChainPair& p) {
  std::string s;
  for (const Mat& m : p.s1) m.encode(s);
  for (const Mat& m : p.s0) m.encode(s);
  return s;
}

ChainPair from_basis(const ChainMapBasis& basis, const std::vector<unsigned>& coeffs, Field f) {
  ChainPair r;
  const auto& [t1, t0] = basis.maps[0];
  for (size_t v = 0; v < t1.size(); ++v) {
    r.s1.push_back(Mat(f, t1[v].rows(), t1[v].cols()));
    r.s0.push_back(Mat(f, t0[v].rows(), t0[v].cols()));
  }
  for (int k = 0; k < basis.dim; ++k) {
    if (coeffs[k] == 0) continue;
    for (size_t v = 0; v < r.s1.size(); ++v) {
      r.s1[v] = r.s1[v] + basis.maps[k].first[v].scaled(coeffs[k]);
      r.s0[v] = r.s0[v] + basis.maps[k].second[v].scaled(coeffs[k]);
    }
  }
  return r;
}

// Span of a set of chain pairs, as packed row vectors; returns an
// echelonized basis (as pairs).
std::vector<ChainPair> pair_span(Field f, const std::vector<ChainPair>& gens) {
  if (gens.empty()) return {};
  int total = 0;
  for (const Mat& m : gens[0].s1) total += m.rows() * m.cols();
  for (const Mat& m : gens[0].s0) total += m.rows() * m.cols();
  Mat rows(f, static_cast<int>(gens.size()), total);
  for (size_t g = 0; g < gens.size(); ++g) {
    int idx = 0;
    for (const std::vector<Mat>* side : {&gens[g].s1, &gens[g].s0})
      for (const Mat& m : *side)
        for (int i = 0; i < m.rows(); ++i)
          for (int j = 0; j < m.cols(); ++j) rows.set(static_cast<int>(g), idx++, m.at(i, j));
  }
  std::vector<int> piv = rows.rref();
  std::vector<ChainPair> out;
  for (size_t r = 0; r < piv.size(); ++r) {
    ChainPair p;
    int idx = 0;
    for (const std::vector<Mat>* side : {&gens[0].s1, &gens[0].s0}) {
      std::vector<Mat>& dst = (side == &gens[0].s1) ? p.s1 : p.s0;
      for (const Mat& m : *side) {
        Mat b(f, m.rows(), m.cols());
        for (int i = 0; i < m.rows(); ++i)
          for (int j = 0; j < m.cols(); ++j) b.set(i, j, rows.at(static_cast<int>(r), idx++));
        dst.push_back(std::move(b));
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

RawComplex sub_raw_complex(const AlgebraData& a, const RawComplex& x, const SubspaceTuple& b1,
                           const SubspaceTuple& b0) {
  RawComplex s;
  s.C1 = subrepresentation(a, x.C1, b1);
  s.C0 = subrepresentation(a, x.C0, b0);
  for (size_t v = 0; v < x.C1.dims.size(); ++v) {
    auto c1 = solve(b0[v], x.d1[v] * b1[v]);
    auto c0 = solve(b1[v], x.d0[v] * b0[v]);
    if (!c1 || !c0) throw Error("internal: subcomplex not closed");
    s.d1.push_back(*c1);
    s.d0.push_back(*c0);
  }
  return s;
}

bool iso_raw(const AlgebraData& a, const RawComplex& x, const RawComplex& y, const Budgets& bud,
             int depth = 0);

// Split the common summand witnessed by e = g o f (non-nilpotent) off both x
// and y, and recurse on the complements.
bool cancel_and_recurse(const AlgebraData& a, const RawComplex& x, const RawComplex& y,
                        const ChainPair& f_map, const ChainPair& g_map, const Budgets& bud,
                        int depth) {
  const Field f = a.field();
  const int nv = a.num_vertices();
  ChainPair e = compose(g_map, f_map);
  // Fitting power: square until ranks stabilize.
  ChainPair eN = e;
  for (int iter = 0; iter < 12; ++iter) {
    ChainPair e2 = compose(eN, eN);
    bool stable = true;
    for (int v = 0; v < nv; ++v)
      if (e2.s1[v].rank() != eN.s1[v].rank() || e2.s0[v].rank() != eN.s0[v].rank()) stable = false;
    eN = e2;
    if (stable && iter > 0) break;
  }
  SubspaceTuple w1(nv), w0(nv), k1(nv), k0(nv);
  for (int v = 0; v < nv; ++v) {
    w1[v] = eN.s1[v].column_basis();
    w0[v] = eN.s0[v].column_basis();
    k1[v] = eN.s1[v].nullspace();
    k0[v] = eN.s0[v].nullspace();
    if (w1[v].cols() + k1[v].cols() != x.C1.dims[v] || w0[v].cols() + k0[v].cols() != x.C0.dims[v])
      throw Error("internal: Fitting decomposition failed");
  }
  // rho o phi = id_W with phi = f o iota, rho = S^{-1} T^{-1} pi g.
  auto block_maps = [&](const SubspaceTuple& w, const std::vector<Mat>& es,
                        const std::vector<Mat>& eNs, const std::vector<Mat>& fs,
                        const std::vector<Mat>& gs, std::vector<Mat>& phi,
                        std::vector<Mat>& rho) {
    for (int v = 0; v < nv; ++v) {
      auto S = solve(w[v], es[v] * w[v]);
      auto T = solve(w[v], eNs[v] * w[v]);
      auto Pi = solve(w[v], eNs[v]);
      if (!S || !T || !Pi) throw Error("internal: Fitting coordinates");
      phi.push_back(fs[v] * w[v]);
      rho.push_back(S->inverse() * (T->inverse() * (*Pi * gs[v])));
    }
  };
  ChainPair phi, rho;
  block_maps(w1, e.s1, eN.s1, f_map.s1, g_map.s1, phi.s1, rho.s1);
  block_maps(w0, e.s0, eN.s0, f_map.s0, g_map.s0, phi.s0, rho.s0);
  // epsilon = phi o rho is an idempotent on y whose image is the summand.
  SubspaceTuple v1(nv), v0(nv);
  for (int v = 0; v < nv; ++v) {
    Mat eps1 = phi.s1[v] * rho.s1[v];
    Mat eps0 = phi.s0[v] * rho.s0[v];
    if (!(eps1 * eps1 == eps1) || !(eps0 * eps0 == eps0))
      throw Error("internal: cancellation idempotent");
    if (!(rho.s1[v] * phi.s1[v] == Mat::identity(f, w1[v].cols())) ||
        !(rho.s0[v] * phi.s0[v] == Mat::identity(f, w0[v].cols())))
      throw Error("internal: cancellation retraction");
    v1[v] = eps1.nullspace();
    v0[v] = eps0.nullspace();
  }
  RawComplex xr = sub_raw_complex(a, x, k1, k0);
  RawComplex yr = sub_raw_complex(a, y, v1, v0);
  return iso_raw(a, xr, yr, bud, depth + 1);
}

bool iso_raw(const AlgebraData& a, const RawComplex& x, const RawComplex& y, const Budgets& bud,
             int depth) {
  if (depth > 64) throw Error("internal: iso recursion depth");
  if (x.C1.dims != y.C1.dims || x.C0.dims != y.C0.dims) return false;
  if (x.total_dim() == 0) return true;
  ChainMapBasis xy = chain_maps(a, x, y);
  if (xy.dim == 0) return false;
  ChainMapBasis yx = chain_maps(a, y, x);
  if (yx.dim == 0) return false;

  // Ideal of End(x) spanned by compositions through y; its stable power is
  // nonzero iff x and y share a nonzero direct summand.
  std::vector<ChainPair> fs, gs;
  for (int i = 0; i < xy.dim; ++i)
    fs.push_back(ChainPair{xy.maps[i].first, xy.maps[i].second});
  for (int j = 0; j < yx.dim; ++j)
    gs.push_back(ChainPair{yx.maps[j].first, yx.maps[j].second});
  std::vector<ChainPair> gens;
  for (const ChainPair& g : gs)
    for (const ChainPair& f : fs) gens.push_back(compose(g, f));
  std::vector<ChainPair> ideal = pair_span(a.field(), gens);
  while (!ideal.empty()) {
    std::vector<ChainPair> sq;
    for (const ChainPair& u : ideal)
      for (const ChainPair& v : ideal) sq.push_back(compose(u, v));
    std::vector<ChainPair> next = pair_span(a.field(), sq);
    if (next.size() == ideal.size()) break;
    ideal = std::move(next);
  }
  if (ideal.empty()) return false;

  // A shared summand exists; find a single witness pair (f, g) with g o f
  // non-nilpotent.
  for (const ChainPair& g : gs)
    for (const ChainPair& f : fs)
      if (!is_nilpotent(compose(g, f))) return cancel_and_recurse(a, x, y, f, g, bud, depth);
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull + depth);
  const unsigned q = a.field().q;
  for (long long trial = 0; trial < bud.search; ++trial) {
    std::vector<unsigned> cf(xy.dim), cg(yx.dim);
    for (int i = 0; i < xy.dim; ++i) cf[i] = static_cast<unsigned>(rng() % q);
    for (int j = 0; j < yx.dim; ++j) cg[j] = static_cast<unsigned>(rng() % q);
    ChainPair f = from_basis(xy, cf, a.field());
    ChainPair g = from_basis(yx, cg, a.field());
    ChainPair e = compose(g, f);
    if (!is_zero_pair(e) && !is_nilpotent(e)) return cancel_and_recurse(a, x, y, f, g, bud, depth);
  }
  throw SearchBudgetExceeded("witness pair for shared complex summand");
}

}  // namespace

bool is_isomorphic_c2(const AlgebraData& a, const Complex2& x, const Complex2& y,
                      const Budgets& bud) {
  std::vector<int> xi1 = x.items1, yi1 = y.items1, xi0 = x.items0, yi0 = y.items0;
  std::sort(xi1.begin(), xi1.end());
  std::sort(yi1.begin(), yi1.end());
  std::sort(xi0.begin(), xi0.end());
  std::sort(yi0.begin(), yi0.end());
  if (xi1 != yi1 || xi0 != yi0) return false;
  return iso_raw(a, to_raw(x), to_raw(y), bud);
}

// ---------------------------------------------------------------------------
// Canonical complex ids
// ---------------------------------------------------------------------------

std::string Complex2ClassId::hex() const {
  static const char* hexd = "0123456789abcdef";
  std::string out;
  for (unsigned char c : bytes_) {
    out.push_back(hexd[c >> 4]);
    out.push_back(hexd[c & 0xf]);
  }
  return out;
}

namespace {

void append_u32(std::string& s, size_t v) {
  for (int k = 3; k >= 0; --k) s.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

std::string mult_bytes(const AlgebraData& a, const std::vector<int>& items) {
  std::vector<int> mults(a.num_vertices(), 0);
  for (int v : items) ++mults[v];
  std::string s;
  for (int m : mults) s.push_back(static_cast<char>(m));
  return s;
}

}  // namespace

Complex2ClassId ComplexStore::id_of(const Complex2& x) {
  std::lock_guard<std::mutex> lock(mu_);
  std::string enc = x.encode();
  auto it = by_encoding_.find(enc);
  if (it != by_encoding_.end()) return it->second;

  StripResult s = strip_acyclics(a_, x);
  auto [h0, h1] = homology(a_, s.core);
  ModuleClassId id0 = mstore_.id_of(h0);
  ModuleClassId id1 = mstore_.id_of(h1);
  Complex2 expected = direct_sum_complex(
      a_, c_of_module(a_, mstore_.representative(id0)),
      shift(a_, c_of_module(a_, mstore_.representative(id1))));

  std::string bytes;
  bool in_family = s.core.M1.dims == expected.M1.dims && s.core.M0.dims == expected.M0.dims &&
                   iso_raw(a_, to_raw(s.core), to_raw(expected), mstore_.budgets());
  Complex2 core_rep = s.core;
  if (in_family) {
    bytes.push_back(1);
    bytes += mult_bytes(a_, s.p_items);
    bytes += mult_bytes(a_, s.q_items);
    append_u32(bytes, id0.bytes().size());
    bytes += id0.bytes();
    bytes += id1.bytes();
    core_rep = expected;
  } else {
    // Outside the module family: same invariants plus a sequence number,
    // matched against previously registered cores by the isomorphism test.
    // TODO: a true normal form for radical 2-periodic complexes (canonical
    // representative under Aut(M1) x Aut(M0)) would make these ids stable
    // across processes, not just per store.
    std::string prefix;
    prefix.push_back(2);
    prefix += mult_bytes(a_, s.p_items);
    prefix += mult_bytes(a_, s.q_items);
    prefix += mult_bytes(a_, s.core.items1);
    prefix += mult_bytes(a_, s.core.items0);
    append_u32(prefix, id0.bytes().size());
    prefix += id0.bytes();
    append_u32(prefix, id1.bytes().size());
    prefix += id1.bytes();
    std::vector<Complex2>& group = exotic_[prefix];
    size_t seq = group.size();
    for (size_t i = 0; i < group.size(); ++i)
      if (iso_raw(a_, to_raw(s.core), to_raw(group[i]), mstore_.budgets())) {
        seq = i;
        break;
      }
    if (seq == group.size()) {
      group.push_back(s.core);
    } else {
      core_rep = group[seq];
    }
    bytes = prefix;
    append_u32(bytes, seq);
  }
  // Canonical representative: K_P + K*_Q + core, in that order.
  Complex2 rep = core_rep;
  if (!s.q_items.empty())
    rep = direct_sum_complex(a_, k_acyclic(a_, s.q_items, AcyclicKind::kStar), rep);
  if (!s.p_items.empty())
    rep = direct_sum_complex(a_, k_acyclic(a_, s.p_items, AcyclicKind::kPlus), rep);
  Complex2ClassId id(bytes);
  by_encoding_[enc] = id;
  by_encoding_[rep.encode()] = id;
  if (!reps_.count(bytes)) reps_[bytes] = rep;
  return id;
}

Complex2 ComplexStore::representative(const Complex2ClassId& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = reps_.find(id.bytes());
  if (it == reps_.end()) throw Error("unknown complex class id");
  return it->second;
}

// ---------------------------------------------------------------------------
// Ext^1 with middles in C_2(P)
// ---------------------------------------------------------------------------

int ext1_dim_c2(const AlgebraData& a, const Complex2& x, const Complex2& y) {
  ShiftChainSpace space = shift_chain_space(a, x, y);
  Mat bnd = shift_boundaries(a, x, y, space);
  return space.zbasis.cols() - bnd.cols();
}

std::map<Complex2ClassId, long long> ext1_with_middles_c2(const AlgebraData& a,
                                                          ComplexStore& cstore, const Complex2& x,
                                                          const Complex2& y) {
  const Field f = a.field();
  const int nv = a.num_vertices();
  const Budgets& bud = cstore.budgets();
  ShiftChainSpace space = shift_chain_space(a, x, y);
  Mat bnd = shift_boundaries(a, x, y, space);
  // Complement of the boundary space inside the cocycle space.
  Mat acc = bnd;
  std::vector<int> complement;
  for (int c = 0; c < space.zbasis.cols(); ++c) {
    Mat cand = Mat::hstack(acc, space.zbasis.submatrix(0, space.zbasis.rows(), c, 1));
    if (cand.rank() > acc.rank()) {
      acc = cand;
      complement.push_back(c);
    }
  }
  int r = static_cast<int>(complement.size());
  if (pow_capped(f.q, r, bud.search) > bud.search)
    throw SearchBudgetExceeded("Ext^1 middle enumeration over q^" + std::to_string(r));

  std::vector<int> items1 = y.items1, items0 = y.items0;
  items1.insert(items1.end(), x.items1.begin(), x.items1.end());
  items0.insert(items0.end(), x.items0.begin(), x.items0.end());

  std::map<Complex2ClassId, long long> tally;
  std::vector<unsigned> lambda(r, 0);
  long long total = 0;
  while (true) {
    Mat coords(f, space.sys.total(), 1);
    for (int i = 0; i < r; ++i)
      if (lambda[i] != 0)
        for (int k = 0; k < space.sys.total(); ++k)
          coords.set(k, 0, f.add(coords.at(k, 0), f.mul(lambda[i], space.zbasis.at(k, complement[i]))));
    std::vector<Mat> d1, d0;
    for (int v = 0; v < nv; ++v) {
      Mat f1 = space.sys.unpack(coords, space.f1_blk[v], 0);
      Mat f0 = space.sys.unpack(coords, space.f0_blk[v], 0);
      d1.push_back(block_matrix(f, {y.M0.dims[v], x.M0.dims[v]}, {y.M1.dims[v], x.M1.dims[v]},
                                {{&y.d1[v], &f1}, {nullptr, &x.d1[v]}}));
      d0.push_back(block_matrix(f, {y.M1.dims[v], x.M1.dims[v]}, {y.M0.dims[v], x.M0.dims[v]},
                                {{&y.d0[v], &f0}, {nullptr, &x.d0[v]}}));
    }
    Complex2 mid = make_complex2(a, items1, items0, std::move(d1), std::move(d0));
    ++tally[cstore.id_of(mid)];
    ++total;

    int i = r - 1;
    while (i >= 0 && lambda[i] == f.q - 1) lambda[i--] = 0;
    if (i < 0) break;
    ++lambda[i];
  }
  long long expected = 1;
  for (int i = 0; i < r; ++i) expected *= f.q;
  if (total != expected) throw Error("internal: Ext^1 coset enumeration incomplete");
  return tally;
}

}  // namespace hallbridge
