#include "hallbridge/modcat.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace hallbridge {

long long pow_capped(unsigned q, int e, long long cap) {
  long long r = 1;
  for (int i = 0; i < e; ++i) {
    r *= q;
    if (r > cap) return cap + 1;
  }
  return r;
}

bool satisfies_relations(const AlgebraData& a, const Representation& r) {
  for (const Relation& rel : a.pres().relations) {
    // All terms of a (possibly split) relation share endpoints per component;
    // evaluate the full sum componentwise.
    std::map<std::pair<int, int>, Mat> sums;
    for (const RelTerm& t : rel) {
      Path p;
      p.src = a.pres().arrows[t.arrows.front()].src;
      p.tgt = a.pres().arrows[t.arrows.back()].tgt;
      p.arrows = t.arrows;
      Mat m = path_action(a, r, p).scaled(t.coef);
      auto key = std::make_pair(p.src, p.tgt);
      auto it = sums.find(key);
      if (it == sums.end())
        sums.emplace(key, m);
      else
        it->second = it->second + m;
    }
    for (const auto& [key, m] : sums)
      if (!m.is_zero()) return false;
  }
  return true;
}

void validate_representation(const AlgebraData& a, const Representation& r) {
  if (static_cast<int>(r.dims.size()) != a.num_vertices() ||
      static_cast<int>(r.mats.size()) != a.num_arrows())
    throw Error("representation shape does not match the algebra");
  for (int x = 0; x < a.num_arrows(); ++x) {
    const ArrowDef& d = a.pres().arrows[x];
    if (r.mats[x].rows() != r.dims[d.tgt] || r.mats[x].cols() != r.dims[d.src])
      throw Error("arrow matrix shape mismatch");
  }
  if (!satisfies_relations(a, r)) throw Error("representation violates the relations");
}

Representation zero_representation(const AlgebraData& a) {
  Representation r;
  r.field = a.field();
  r.dims.assign(a.num_vertices(), 0);
  for (int x = 0; x < a.num_arrows(); ++x) r.mats.push_back(Mat(a.field(), 0, 0));
  return r;
}

Representation direct_sum(const Representation& x, const Representation& y) {
  Representation r;
  r.field = x.field;
  r.dims.resize(x.dims.size());
  for (size_t v = 0; v < x.dims.size(); ++v) r.dims[v] = x.dims[v] + y.dims[v];
  for (size_t i = 0; i < x.mats.size(); ++i) r.mats.push_back(Mat::diag_sum(x.mats[i], y.mats[i]));
  return r;
}

Mat path_action(const AlgebraData&, const Representation& r, const Path& p) {
  Mat m = Mat::identity(r.field, r.dims[p.src]);
  for (int x : p.arrows) m = r.mats[x] * m;
  return m;
}

Representation subrepresentation(const AlgebraData& a, const Representation& r,
                                 const SubspaceTuple& basis) {
  Representation s;
  s.field = r.field;
  s.dims.resize(r.dims.size());
  for (size_t v = 0; v < r.dims.size(); ++v) s.dims[v] = basis[v].cols();
  for (int x = 0; x < a.num_arrows(); ++x) {
    const ArrowDef& d = a.pres().arrows[x];
    auto coords = solve(basis[d.tgt], r.mats[x] * basis[d.src]);
    if (!coords) throw Error("subspace tuple not closed under arrows");
    s.mats.push_back(*coords);
  }
  return s;
}

Representation quotient_representation(const AlgebraData& a, const Representation& r,
                                       const SubspaceTuple& sub, std::vector<Mat>* proj) {
  const Field f = r.field;
  const int nv = a.num_vertices();
  std::vector<Mat> pi(nv), sigma(nv);
  for (int v = 0; v < nv; ++v) {
    int n = r.dims[v], k = sub[v].cols();
    // Complete sub[v] to a basis with standard vectors, then invert.
    Mat T = sub[v];
    Mat probe = T;
    for (int e = 0; e < n && T.cols() < n; ++e) {
      Mat col(f, n, 1);
      col.set(e, 0, 1);
      Mat cand = Mat::hstack(probe, col);
      if (cand.rank() > probe.rank()) {
        probe = cand;
        T = Mat::hstack(T, col);
      }
    }
    if (T.cols() != n) throw Error("subspace completion failed");
    Mat Tinv = T.inverse();
    pi[v] = Tinv.submatrix(k, n - k, 0, n);       // quotient coordinates
    sigma[v] = T.submatrix(0, n, k, n - k);       // section
  }
  Representation qr;
  qr.field = f;
  qr.dims.resize(nv);
  for (int v = 0; v < nv; ++v) qr.dims[v] = r.dims[v] - sub[v].cols();
  for (int x = 0; x < a.num_arrows(); ++x) {
    const ArrowDef& d = a.pres().arrows[x];
    qr.mats.push_back(pi[d.tgt] * (r.mats[x] * sigma[d.src]));
  }
  if (proj) *proj = pi;
  return qr;
}

SubspaceTuple radical_subspace(const AlgebraData& a, const Representation& r) {
  SubspaceTuple rad(a.num_vertices());
  for (int v = 0; v < a.num_vertices(); ++v) {
    Mat acc(r.field, r.dims[v], 0);
    for (int x = 0; x < a.num_arrows(); ++x)
      if (a.pres().arrows[x].tgt == v) acc = Mat::hstack(acc, r.mats[x]);
    rad[v] = acc.column_basis();
  }
  return rad;
}

std::vector<int> top_dims(const AlgebraData& a, const Representation& r) {
  SubspaceTuple rad = radical_subspace(a, r);
  std::vector<int> t(a.num_vertices());
  for (int v = 0; v < a.num_vertices(); ++v) t[v] = r.dims[v] - rad[v].cols();
  return t;
}

// ---------------------------------------------------------------------------
// Hom / iso / aut
// ---------------------------------------------------------------------------

HomBasis hom_basis(const AlgebraData& a, const Representation& A, const Representation& B) {
  const Field f = A.field;
  const int nv = a.num_vertices();
  // Unknowns: entries of phi_v (B_v x A_v), vertex blocks in order.
  std::vector<int> offset(nv + 1, 0);
  for (int v = 0; v < nv; ++v) offset[v + 1] = offset[v] + B.dims[v] * A.dims[v];
  int unknowns = offset[nv];

  int eqs = 0;
  for (int x = 0; x < a.num_arrows(); ++x) {
    const ArrowDef& d = a.pres().arrows[x];
    eqs += B.dims[d.tgt] * A.dims[d.src];
  }
  Mat sys(f, eqs, unknowns);
  int row = 0;
  for (int x = 0; x < a.num_arrows(); ++x) {
    const ArrowDef& d = a.pres().arrows[x];
    const Mat& Ax = A.mats[x];
    const Mat& Bx = B.mats[x];
    // phi_tgt * Ax - Bx * phi_src = 0, entrywise at (i, j).
    for (int i = 0; i < B.dims[d.tgt]; ++i)
      for (int j = 0; j < A.dims[d.src]; ++j) {
        for (int k = 0; k < A.dims[d.tgt]; ++k)
          sys.set(row, offset[d.tgt] + i * A.dims[d.tgt] + k,
                  f.add(sys.at(row, offset[d.tgt] + i * A.dims[d.tgt] + k), Ax.at(k, j)));
        for (int k = 0; k < B.dims[d.src]; ++k)
          sys.set(row, offset[d.src] + k * A.dims[d.src] + j,
                  f.sub(sys.at(row, offset[d.src] + k * A.dims[d.src] + j), Bx.at(i, k)));
        ++row;
      }
  }
  Mat null = sys.nullspace();
  HomBasis hb;
  hb.dim = null.cols();
  for (int c = 0; c < null.cols(); ++c) {
    std::vector<Mat> maps;
    for (int v = 0; v < nv; ++v) {
      Mat m(f, B.dims[v], A.dims[v]);
      for (int i = 0; i < B.dims[v]; ++i)
        for (int j = 0; j < A.dims[v]; ++j) m.set(i, j, null.at(offset[v] + i * A.dims[v] + j, c));
      maps.push_back(std::move(m));
    }
    hb.maps.push_back(std::move(maps));
  }
  return hb;
}

int hom_dim(const AlgebraData& a, const Representation& A, const Representation& B) {
  return hom_basis(a, A, B).dim;
}

namespace {

// Enumerate coefficient vectors over F_q of length n, ascending slot order,
// invoking fn on each nonzero vector.  Returns false if fn returned true
// (early exit).
bool enumerate_vectors(unsigned q, int n, const std::function<bool(const std::vector<unsigned>&)>& fn) {
  std::vector<unsigned> c(n, 0);
  while (true) {
    int i = n - 1;
    while (i >= 0 && c[i] == q - 1) c[i--] = 0;
    if (i < 0) return true;
    ++c[i];
    if (fn(c)) return false;
  }
}

std::vector<Mat> combine_maps(const HomBasis& hb, const std::vector<unsigned>& coeffs, Field f,
                              const Representation& A, const Representation& B) {
  std::vector<Mat> phi;
  for (size_t v = 0; v < A.dims.size(); ++v) phi.push_back(Mat(f, B.dims[v], A.dims[v]));
  for (int i = 0; i < hb.dim; ++i) {
    if (coeffs[i] == 0) continue;
    for (size_t v = 0; v < A.dims.size(); ++v)
      phi[v] = phi[v] + hb.maps[i][v].scaled(coeffs[i]);
  }
  return phi;
}

}  // namespace

bool is_isomorphic(const AlgebraData& a, const Representation& A, const Representation& B,
                   const Budgets& bud) {
  if (A.dims != B.dims) return false;
  if (A.encode() == B.encode()) return true;
  HomBasis ab = hom_basis(a, A, B);
  // Iso invariants: Hom dims both ways must match.
  if (hom_dim(a, B, A) != ab.dim) return false;
  if (pow_capped(a.field().q, ab.dim, bud.search) > bud.search)
    throw SearchBudgetExceeded("isomorphism search over q^" + std::to_string(ab.dim));
  bool found = false;
  enumerate_vectors(a.field().q, ab.dim, [&](const std::vector<unsigned>& c) {
    std::vector<Mat> phi = combine_maps(ab, c, a.field(), A, B);
    for (size_t v = 0; v < A.dims.size(); ++v)
      if (!phi[v].is_invertible()) return false;
    found = true;
    return true;
  });
  return found;
}

long long aut_order(const AlgebraData& a, const Representation& A, const Budgets& bud) {
  HomBasis end = hom_basis(a, A, A);
  if (pow_capped(a.field().q, end.dim, bud.search) > bud.search)
    throw SearchBudgetExceeded("Aut enumeration over q^" + std::to_string(end.dim));
  long long count = 0;
  enumerate_vectors(a.field().q, end.dim, [&](const std::vector<unsigned>& c) {
    std::vector<Mat> phi = combine_maps(end, c, a.field(), A, A);
    for (size_t v = 0; v < A.dims.size(); ++v)
      if (!phi[v].is_invertible()) return false;
    ++count;
    return false;
  });
  // The zero vector was skipped; it is invertible only for the zero module.
  if (A.is_zero()) count = 1;
  return count;
}

// ---------------------------------------------------------------------------
// Canonical class ids and the per-algebra store
// ---------------------------------------------------------------------------

std::string ModuleClassId::hex() const {
  static const char* hexd = "0123456789abcdef";
  std::string out;
  for (unsigned char c : bytes_) {
    out.push_back(hexd[c >> 4]);
    out.push_back(hexd[c & 0xf]);
  }
  return out;
}

void for_each_raw_representation(const AlgebraData& a, const std::vector<int>& dims,
                                 const std::function<void(const Representation&)>& fn) {
  Representation r;
  r.field = a.field();
  r.dims = dims;
  std::vector<std::pair<int, std::pair<int, int>>> slots;  // (arrow, (row, col))
  for (int x = 0; x < a.num_arrows(); ++x) {
    const ArrowDef& d = a.pres().arrows[x];
    r.mats.push_back(Mat(a.field(), dims[d.tgt], dims[d.src]));
    for (int i = 0; i < dims[d.tgt]; ++i)
      for (int j = 0; j < dims[d.src]; ++j) slots.push_back({x, {i, j}});
  }
  const unsigned q = a.field().q;
  // Odometer with the last slot fastest: encodings come out ascending.
  while (true) {
    if (satisfies_relations(a, r)) fn(r);
    int i = static_cast<int>(slots.size()) - 1;
    while (i >= 0) {
      auto [x, rc] = slots[i];
      unsigned v = r.mats[x].at(rc.first, rc.second);
      if (v + 1 < q) {
        r.mats[x].set(rc.first, rc.second, v + 1);
        break;
      }
      r.mats[x].set(rc.first, rc.second, 0);
      --i;
    }
    if (i < 0) break;
  }
}

long long ModuleStore::cell_raw_count(const std::vector<int>& dims) const {
  int entries = 0;
  for (int x = 0; x < a_.num_arrows(); ++x) {
    const ArrowDef& d = a_.pres().arrows[x];
    entries += dims[d.tgt] * dims[d.src];
  }
  return pow_capped(a_.field().q, entries, bud_.raw_enum);
}

void ModuleStore::partition_cell(const std::vector<int>& dims) {
  Cell& cell = cells_[dims];
  if (cell.partitioned) return;
  if (cell_raw_count(dims) > bud_.raw_enum)
    throw SearchBudgetExceeded("raw enumeration of dimension vector cell");
  std::vector<Representation> reps;
  for_each_raw_representation(a_, dims, [&](const Representation& r) {
    std::string enc = r.encode();
    if (by_encoding_.count(enc)) return;
    for (const Representation& rep : reps)
      if (is_isomorphic(a_, rep, r, bud_)) {
        by_encoding_[enc] = by_encoding_.at(rep.encode());
        return;
      }
    // First member of its class in ascending encoding order: canonical.
    ModuleClassId id(enc);
    by_encoding_[enc] = id;
    reps_[enc] = r;
    cell.classes.push_back(id);
    reps.push_back(r);
  });
  cell.partitioned = true;
}

ModuleClassId ModuleStore::id_of(const Representation& r) {
  std::lock_guard<std::mutex> lock(mu_);
  return id_of_locked(r);
}

ModuleClassId ModuleStore::id_of_locked(const Representation& r) {
  std::string enc = r.encode();
  auto it = by_encoding_.find(enc);
  if (it != by_encoding_.end()) return it->second;
  auto cit = cells_.find(r.dims);
  if (cit != cells_.end() && cit->second.partitioned) {
    for (const ModuleClassId& id : cit->second.classes)
      if (is_isomorphic(a_, reps_.at(id.bytes()), r, bud_)) {
        by_encoding_[enc] = id;
        return id;
      }
    throw Error("internal: representation missing from partitioned cell");
  }
  // Stream the cell in ascending encoding order; the first isomorphic raw
  // representation is the canonical representative.
  if (cell_raw_count(r.dims) > bud_.raw_enum)
    throw SearchBudgetExceeded("canonical id scan of dimension vector cell");
  std::optional<ModuleClassId> found;
  for_each_raw_representation(a_, r.dims, [&](const Representation& cand) {
    if (found) return;
    if (is_isomorphic(a_, cand, r, bud_)) {
      ModuleClassId id(cand.encode());
      by_encoding_[enc] = id;
      by_encoding_[id.bytes()] = id;
      reps_[id.bytes()] = cand;
      found = id;
    }
  });
  if (!found) throw Error("internal: no raw representation isomorphic to input");
  return *found;
}

Representation ModuleStore::representative(const ModuleClassId& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = reps_.find(id.bytes());
  if (it == reps_.end()) throw Error("unknown module class id");
  return it->second;
}

std::vector<ModuleClassId> ModuleStore::enumerate_modules(int max_total_dim) {
  std::lock_guard<std::mutex> lock(mu_);
  const int nv = a_.num_vertices();
  std::vector<std::vector<int>> cells;
  std::vector<int> dims(nv, 0);
  // All dimension vectors with total <= bound, lexicographic.
  std::function<void(int, int)> rec = [&](int v, int left) {
    if (v == nv) {
      cells.push_back(dims);
      return;
    }
    for (int d = 0; d <= left; ++d) {
      dims[v] = d;
      rec(v + 1, left - d);
    }
    dims[v] = 0;
  };
  rec(0, max_total_dim);

  std::vector<std::pair<std::pair<int, std::string>, ModuleClassId>> out;
  for (const auto& cell_dims : cells) {
    partition_cell(cell_dims);
    int total = 0;
    for (int d : cell_dims) total += d;
    for (const ModuleClassId& id : cells_[cell_dims].classes)
      out.push_back({{total, id.bytes()}, id});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<ModuleClassId> ids;
  for (auto& [key, id] : out) ids.push_back(id);
  return ids;
}

// ---------------------------------------------------------------------------
// Resolutions and the Euler form
// ---------------------------------------------------------------------------

Representation realize_proj_sum(const AlgebraData& a, const std::vector<int>& items) {
  Representation r = zero_representation(a);
  for (int v : items) r = direct_sum(r, a.projective(v));
  return r;
}

std::vector<long long> proj_sum_kclass(const AlgebraData& a, const std::vector<int>& items) {
  std::vector<long long> k(a.num_vertices(), 0);
  for (int v : items) {
    std::vector<long long> col = a.cartan_column(v);
    for (int i = 0; i < a.num_vertices(); ++i) k[i] += col[i];
  }
  return k;
}

ProjLayout proj_layout(const AlgebraData& a, const std::vector<int>& items) {
  ProjLayout L;
  std::vector<int> filled(a.num_vertices(), 0);
  for (int v : items) {
    std::vector<std::pair<int, int>> coords;
    std::vector<int> local(a.num_vertices(), 0);
    for (int b : a.basis_with_source(v)) {
      int w = a.basis_path(b).tgt;
      coords.push_back({w, filled[w] + local[w]});
      ++local[w];
    }
    for (int w = 0; w < a.num_vertices(); ++w) filled[w] += local[w];
    L.coord.push_back(std::move(coords));
    L.vertex.push_back(v);
  }
  return L;
}

namespace {

// Projective cover of A: summand list, realization, and the cover map.
struct Cover {
  std::vector<int> items;
  Representation P;
  std::vector<Mat> map;  // vertexwise A_v x P_v
};

Cover projective_cover(const AlgebraData& a, const Representation& A) {
  const Field f = A.field;
  const int nv = a.num_vertices();
  SubspaceTuple rad = radical_subspace(a, A);
  Cover c;
  std::vector<std::vector<Mat>> generators(nv);  // chosen top lifts per vertex
  for (int v = 0; v < nv; ++v) {
    Mat probe = rad[v];
    for (int e = 0; e < A.dims[v]; ++e) {
      Mat col(f, A.dims[v], 1);
      col.set(e, 0, 1);
      Mat cand = Mat::hstack(probe, col);
      if (cand.rank() > probe.rank()) {
        probe = cand;
        generators[v].push_back(col);
        c.items.push_back(v);
      }
    }
  }
  std::sort(c.items.begin(), c.items.end());
  c.P = realize_proj_sum(a, c.items);
  ProjLayout L = proj_layout(a, c.items);
  for (int v = 0; v < nv; ++v) c.map.push_back(Mat(f, A.dims[v], c.P.dims[v]));
  std::vector<int> used(nv, 0);
  for (size_t s = 0; s < c.items.size(); ++s) {
    int v = c.items[s];
    const Mat& gen = generators[v][used[v]++];
    const std::vector<int>& paths = a.basis_with_source(v);
    for (size_t k = 0; k < paths.size(); ++k) {
      const Path& p = a.basis_path(paths[k]);
      Mat img = path_action(a, A, p) * gen;  // column in A_{p.tgt}
      auto [w, off] = L.coord[s][k];
      for (int i = 0; i < A.dims[w]; ++i) c.map[w].set(i, off, img.at(i, 0));
    }
  }
  return c;
}

SubspaceTuple kernel_tuple(const std::vector<Mat>& map, const Representation& src) {
  SubspaceTuple ker(src.dims.size());
  for (size_t v = 0; v < src.dims.size(); ++v) ker[v] = map[v].nullspace();
  return ker;
}

bool lands_in_radical(const AlgebraData& a, const std::vector<Mat>& map,
                      const Representation& target) {
  SubspaceTuple rad = radical_subspace(a, target);
  for (size_t v = 0; v < target.dims.size(); ++v)
    if (!solve(rad[v], map[v])) return false;
  return true;
}

}  // namespace

Resolution minimal_resolution(const AlgebraData& a, const Representation& A) {
  validate_representation(a, A);
  const Field f = A.field;
  Resolution res;
  if (A.is_zero()) {
    res.P0 = res.P1 = res.P2 = zero_representation(a);
    for (int v = 0; v < a.num_vertices(); ++v) {
      res.a0.push_back(Mat(f, 0, 0));
      res.a1.push_back(Mat(f, 0, 0));
      res.a2.push_back(Mat(f, 0, 0));
    }
    return res;
  }
  Cover c0 = projective_cover(a, A);
  res.p0_items = c0.items;
  res.P0 = c0.P;
  res.a0 = c0.map;
  for (int v = 0; v < a.num_vertices(); ++v)
    if (res.a0[v].rank() != A.dims[v]) throw Error("internal: cover not surjective");

  SubspaceTuple k1 = kernel_tuple(res.a0, res.P0);
  Representation K1 = subrepresentation(a, res.P0, k1);
  Cover c1 = projective_cover(a, K1);
  res.p1_items = c1.items;
  res.P1 = c1.P;
  for (int v = 0; v < a.num_vertices(); ++v) res.a1.push_back(k1[v] * c1.map[v]);

  SubspaceTuple k2 = kernel_tuple(c1.map, res.P1);
  Representation K2 = subrepresentation(a, res.P1, k2);
  Cover c2 = projective_cover(a, K2);
  if (c2.P.total_dim() != K2.total_dim())
    throw GlobalDimensionExceeded("second syzygy of a module of dimension " +
                                  std::to_string(A.total_dim()) + " is not projective");
  res.p2_items = c2.items;
  res.P2 = c2.P;
  for (int v = 0; v < a.num_vertices(); ++v) res.a2.push_back(k2[v] * c2.map[v]);

  res.minimal = lands_in_radical(a, res.a1, res.P0) && lands_in_radical(a, res.a2, res.P1);
  if (!res.minimal) throw Error("internal: constructed resolution is not minimal");
  return res;
}

int certify_gldim2(const AlgebraData& a) {
  int gldim = 0;
  for (int v = 0; v < a.num_vertices(); ++v)
    gldim = std::max(gldim, minimal_resolution(a, a.simple(v)).length());
  return gldim;
}

long long EulerForm::pair(const std::vector<long long>& x, const std::vector<long long>& y) const {
  long long s = 0;
  for (size_t i = 0; i < e.size(); ++i)
    for (size_t j = 0; j < e.size(); ++j) s += x[i] * e[i][j] * y[j];
  return s;
}

EulerForm euler_form(const AlgebraData& a) {
  certify_gldim2(a);
  const int nv = a.num_vertices();
  EulerForm ef;
  ef.e.assign(nv, std::vector<long long>(nv, 0));
  for (int i = 0; i < nv; ++i) {
    Resolution res = minimal_resolution(a, a.simple(i));
    for (int v : res.p0_items) ef.e[i][v] += 1;
    for (int v : res.p1_items) ef.e[i][v] -= 1;
    for (int v : res.p2_items) ef.e[i][v] += 1;
  }
  return ef;
}

std::vector<long long> dim_vector(const Representation& r) {
  return std::vector<long long>(r.dims.begin(), r.dims.end());
}

// ---------------------------------------------------------------------------
// Ext via the resolution
// ---------------------------------------------------------------------------

namespace {

// Hom(P, B) in generator coordinates for P realized from `items`: one block
// per summand, block s of size dim B_{vertex(s)}.
struct ProjHom {
  std::vector<int> offset;  // summand -> coordinate offset
  int dim = 0;
};

ProjHom proj_hom_coords(const AlgebraData&, const std::vector<int>& items,
                        const Representation& B) {
  ProjHom ph;
  for (int v : items) {
    ph.offset.push_back(ph.dim);
    ph.dim += B.dims[v];
  }
  return ph;
}

// Realize a coordinate vector as the vertexwise matrices of the map P -> B.
std::vector<Mat> realize_proj_hom(const AlgebraData& a, const std::vector<int>& items,
                                  const ProjLayout& L, const Representation& B,
                                  const ProjHom& ph, const std::vector<unsigned>& coords,
                                  const Representation& P) {
  const Field f = B.field;
  std::vector<Mat> phi;
  for (size_t v = 0; v < B.dims.size(); ++v) phi.push_back(Mat(f, B.dims[v], P.dims[v]));
  for (size_t s = 0; s < items.size(); ++s) {
    int v = items[s];
    Mat gen(f, B.dims[v], 1);
    for (int i = 0; i < B.dims[v]; ++i) gen.set(i, 0, coords[ph.offset[s] + i]);
    const std::vector<int>& paths = a.basis_with_source(v);
    for (size_t k = 0; k < paths.size(); ++k) {
      const Path& p = a.basis_path(paths[k]);
      Mat img = path_action(a, B, p) * gen;
      auto [w, off] = L.coord[s][k];
      for (int i = 0; i < B.dims[w]; ++i) phi[w].set(i, off, img.at(i, 0));
    }
  }
  return phi;
}

// Matrix of precomposition Hom(P, B) -> Hom(P', B) by g: P' -> P, in
// generator coordinates.
Mat precompose_matrix(const AlgebraData& a, const std::vector<int>& items, const ProjLayout& L,
                      const std::vector<int>& items_src, const std::vector<Mat>& g,
                      const Representation& P, const Representation& B) {
  const Field f = B.field;
  ProjHom ph = proj_hom_coords(a, items, B);
  ProjHom ph_src = proj_hom_coords(a, items_src, B);
  Mat m(f, ph_src.dim, ph.dim);
  // Column by column: unit coordinate -> map P -> B -> restrict to generators
  // of P'.
  ProjLayout L_src = proj_layout(a, items_src);
  for (int col = 0; col < ph.dim; ++col) {
    std::vector<unsigned> coords(ph.dim, 0);
    coords[col] = 1;
    std::vector<Mat> phi = realize_proj_hom(a, items, L, B, ph, coords, P);
    // psi = phi o g; read generator images of psi.
    for (size_t s = 0; s < items_src.size(); ++s) {
      int v = items_src[s];
      auto [w, off] = L_src.coord[s][0];  // trivial path coordinate
      // generator of summand s sits at vertex v == w, offset off.
      Mat gen_img(f, B.dims[v], 1);
      for (int i = 0; i < B.dims[v]; ++i) {
        unsigned acc = 0;
        for (int c = 0; c < phi[v].cols(); ++c)
          acc = f.add(acc, f.mul(phi[v].at(i, c), g[v].at(c, off)));
        gen_img.set(i, 0, acc);
      }
      for (int i = 0; i < B.dims[v]; ++i) m.set(ph_src.offset[s] + i, col, gen_img.at(i, 0));
    }
  }
  return m;
}

}  // namespace

ExtDims ext_dims(const AlgebraData& a, const Representation& A, const Representation& B) {
  ExtDims d;
  d.hom = hom_dim(a, A, B);
  Resolution res = minimal_resolution(a, A);
  ProjLayout L0 = proj_layout(a, res.p0_items);
  ProjLayout L1 = proj_layout(a, res.p1_items);
  Mat a1star = precompose_matrix(a, res.p0_items, L0, res.p1_items, res.a1, res.P0, B);
  Mat a2star = precompose_matrix(a, res.p1_items, L1, res.p2_items, res.a2, res.P1, B);
  int z1 = a2star.nullspace().cols();
  d.ext1 = z1 - a1star.rank();
  d.ext2 = a2star.rows() - a2star.rank();
  return d;
}

std::map<ModuleClassId, long long> ext1_with_middles(const AlgebraData& a, ModuleStore& store,
                                                     const Representation& A,
                                                     const Representation& C) {
  const Field f = a.field();
  const Budgets& bud = store.budgets();
  Resolution res = minimal_resolution(a, A);
  ProjLayout L0 = proj_layout(a, res.p0_items);
  ProjLayout L1 = proj_layout(a, res.p1_items);
  ProjHom ph1 = proj_hom_coords(a, res.p1_items, C);
  Mat a1star = precompose_matrix(a, res.p0_items, L0, res.p1_items, res.a1, res.P0, C);
  Mat a2star = precompose_matrix(a, res.p1_items, L1, res.p2_items, res.a2, res.P1, C);

  // Cocycles modulo coboundaries: extend the image of a1star to a basis of
  // ker a2star; the added vectors parameterize extension classes.
  Mat zbasis = a2star.nullspace();
  Mat bnd = a1star.column_basis();
  Mat acc = bnd;
  std::vector<int> complement;
  for (int c = 0; c < zbasis.cols(); ++c) {
    Mat cand = Mat::hstack(acc, zbasis.submatrix(0, zbasis.rows(), c, 1));
    if (cand.rank() > acc.rank()) {
      acc = cand;
      complement.push_back(c);
    }
  }
  int r = static_cast<int>(complement.size());
  if (pow_capped(f.q, r, bud.search) > bud.search)
    throw SearchBudgetExceeded("Ext^1 coset enumeration over q^" + std::to_string(r));

  // Omega = im a1 with chosen preimages for the pushout.
  const int nv = a.num_vertices();
  SubspaceTuple omega(nv);
  std::vector<Mat> preimage(nv);
  for (int v = 0; v < nv; ++v) {
    omega[v] = res.a1[v].column_basis();
    auto x = solve(res.a1[v], omega[v]);
    if (!x) throw Error("internal: omega preimage");
    preimage[v] = *x;
  }

  std::map<ModuleClassId, long long> tally;
  std::vector<unsigned> lambda(r, 0);
  while (true) {
    // xi = sum lambda_i * complement_i, in Hom(P1, C) coordinates.
    std::vector<unsigned> coords(ph1.dim, 0);
    for (int i = 0; i < r; ++i) {
      if (lambda[i] == 0) continue;
      for (int k = 0; k < ph1.dim; ++k)
        coords[k] = f.add(coords[k], f.mul(lambda[i], zbasis.at(k, complement[i])));
    }
    std::vector<Mat> xi = realize_proj_hom(a, res.p1_items, L1, C, ph1, coords, res.P1);

    // Pushout of 0 -> Omega -> P0 -> A -> 0 along xi': Omega -> C.
    Representation CP = direct_sum(C, res.P0);
    SubspaceTuple graph(nv);
    for (int v = 0; v < nv; ++v) {
      Mat xi_omega = xi[v] * preimage[v];  // xi'(basis of Omega_v)
      graph[v] = Mat::vstack(xi_omega, omega[v].negated());
    }
    Representation mid = quotient_representation(a, CP, graph);
    if (mid.total_dim() != C.total_dim() + A.total_dim())
      throw Error("internal: pushout dimension mismatch");
    ++tally[store.id_of(mid)];

    int i = r - 1;
    while (i >= 0 && lambda[i] == f.q - 1) lambda[i--] = 0;
    if (i < 0) break;
    ++lambda[i];
  }
  return tally;
}

// ---------------------------------------------------------------------------
// Hall number oracle by subspace enumeration
// ---------------------------------------------------------------------------

namespace {

// Enumerate all d-dimensional subspaces of F_q^n as column-basis matrices
// (transposed RREF), ascending.
void for_each_subspace(Field f, int n, int d, const std::function<void(const Mat&)>& fn) {
  if (d == 0) {
    fn(Mat(f, n, 0));
    return;
  }
  if (d > n) return;
  std::vector<int> pivots(d);
  std::function<void(int, int)> choose = [&](int pos, int from) {
    if (pos == d) {
      // Free entries: (i, j) with j > pivots[i], j not a pivot.
      std::vector<std::pair<int, int>> free_slots;
      std::vector<bool> is_pivot(n, false);
      for (int p : pivots) is_pivot[p] = true;
      for (int i = 0; i < d; ++i)
        for (int j = pivots[i] + 1; j < n; ++j)
          if (!is_pivot[j]) free_slots.push_back({i, j});
      Mat rref(f, d, n);
      for (int i = 0; i < d; ++i) rref.set(i, pivots[i], 1);
      std::vector<unsigned> vals(free_slots.size(), 0);
      while (true) {
        for (size_t k = 0; k < free_slots.size(); ++k)
          rref.set(free_slots[k].first, free_slots[k].second, vals[k]);
        fn(rref.transposed());
        int i = static_cast<int>(vals.size()) - 1;
        while (i >= 0 && vals[i] == f.q - 1) vals[i--] = 0;
        if (i < 0) break;
        ++vals[i];
      }
      return;
    }
    for (int j = from; j <= n - (d - pos); ++j) {
      pivots[pos] = j;
      choose(pos + 1, j + 1);
    }
  };
  choose(0, 0);
  return;
}

long long subspace_count(Field f, int n, int d) {
  // Gaussian binomial [n choose d]_q, built up one factor at a time.
  if (d < 0 || d > n) return 0;
  auto qpow = [&](int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= f.q;
    return r;
  };
  long long result = 1;
  for (int i = 0; i < d; ++i) result = result * (qpow(n - i) - 1) / (qpow(i + 1) - 1);
  return result;
}

}  // namespace

long long hall_number_oracle(const AlgebraData& a, const Representation& A,
                             const Representation& B, const Representation& C,
                             const Budgets& bud) {
  const int nv = a.num_vertices();
  for (int v = 0; v < nv; ++v)
    if (A.dims[v] + C.dims[v] != B.dims[v]) return 0;
  long long total = 1;
  for (int v = 0; v < nv; ++v) {
    total *= subspace_count(a.field(), B.dims[v], C.dims[v]);
    if (total > bud.raw_enum)
      throw SearchBudgetExceeded("subspace enumeration for the Hall-number oracle");
  }
  long long count = 0;
  std::vector<Mat> chosen(nv, Mat(a.field(), 0, 0));
  std::function<void(int)> rec = [&](int v) {
    if (v == nv) {
      SubspaceTuple tuple(chosen.begin(), chosen.end());
      for (int x = 0; x < a.num_arrows(); ++x) {
        const ArrowDef& d = a.pres().arrows[x];
        if (!solve(tuple[d.tgt], B.mats[x] * tuple[d.src])) return;  // not closed
      }
      Representation U = subrepresentation(a, B, tuple);
      if (!is_isomorphic(a, U, C, bud)) return;
      Representation Q = quotient_representation(a, B, tuple);
      if (!is_isomorphic(a, Q, A, bud)) return;
      ++count;
      return;
    }
    for_each_subspace(a.field(), B.dims[v], C.dims[v], [&](const Mat& basis) {
      chosen[v] = basis;
      rec(v + 1);
    });
  };
  rec(0);
  return count;
}

}  // namespace hallbridge
