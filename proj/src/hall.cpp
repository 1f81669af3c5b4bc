#include "hallbridge/hall.hpp"

#include <algorithm>

namespace hallbridge {

namespace {

std::vector<long long> vec_add(const std::vector<long long>& x, const std::vector<long long>& y) {
  std::vector<long long> r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

std::vector<long long> vec_sub(const std::vector<long long>& x, const std::vector<long long>& y) {
  std::vector<long long> r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

std::vector<long long> vec_neg(const std::vector<long long>& x) {
  std::vector<long long> r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = -x[i];
  return r;
}

}  // namespace

void hall_add_term(HallElem& x, const ModuleClassId& id, const TCoeff& c) {
  if (c.is_zero()) return;
  auto it = x.terms.find(id);
  if (it == x.terms.end()) {
    x.terms.emplace(id, c);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) x.terms.erase(it);
  }
}

void dh_add_term(DHElem& x, const DHKey& key, const TCoeff& c) {
  if (c.is_zero()) return;
  auto it = x.terms.find(key);
  if (it == x.terms.end()) {
    x.terms.emplace(key, c);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) x.terms.erase(it);
  }
}

void dhred_add_term(DHRedElem& x, const DHRedKey& key, const TCoeff& c) {
  if (c.is_zero()) return;
  auto it = x.terms.find(key);
  if (it == x.terms.end()) {
    x.terms.emplace(key, c);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) x.terms.erase(it);
  }
}

void cpx_add_term(CpxElem& x, const Complex2ClassId& id, const TCoeff& c) {
  if (c.is_zero()) return;
  auto it = x.find(id);
  if (it == x.end()) {
    x.emplace(id, c);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) x.erase(it);
  }
}

HallElem hall_scale(const HallElem& x, const TCoeff& c) {
  HallElem r;
  for (const auto& [id, v] : x.terms) hall_add_term(r, id, v * c);
  return r;
}

DHElem dh_scale(const DHElem& x, const TCoeff& c) {
  DHElem r;
  for (const auto& [k, v] : x.terms) dh_add_term(r, k, v * c);
  return r;
}

CpxElem cpx_scale(const CpxElem& x, const TCoeff& c) {
  CpxElem r;
  for (const auto& [k, v] : x) cpx_add_term(r, k, v * c);
  return r;
}

DHElem dh_add(const DHElem& x, const DHElem& y) {
  DHElem r = x;
  for (const auto& [k, v] : y.terms) dh_add_term(r, k, v);
  return r;
}

HallContext::HallContext(const AlgebraData& a, int max_total_dim, Budgets bud)
    : a_(a),
      bud_(bud),
      bound_(max_total_dim),
      gldim_(certify_gldim2(a)),
      mstore_(a, bud),
      cstore_(a, mstore_),
      euler_(euler_form(a)) {}

int HallContext::class_total_dim(const ModuleClassId& id) {
  std::lock_guard<std::mutex> lock(memo_mu_);
  auto it = dim_memo_.find(id.bytes());
  if (it != dim_memo_.end()) return it->second;
  int d = mstore_.representative(id).total_dim();
  dim_memo_[id.bytes()] = d;
  return d;
}

HallElem HallContext::hall_unit() {
  HallElem e;
  hall_add_term(e, mstore_.id_of(zero_representation(a_)), tone());
  return e;
}

HallElem HallContext::hall_basis(const ModuleClassId& id) const {
  HallElem e;
  e.terms.emplace(id, TCoeff::one(a_.field().q));
  return e;
}

const std::vector<HallContext::HallTerm>& HallContext::structure_constants(
    const ModuleClassId& a_id, const ModuleClassId& c_id) {
  {
    std::lock_guard<std::mutex> lock(memo_mu_);
    auto it = hall_memo_.find({a_id.bytes(), c_id.bytes()});
    if (it != hall_memo_.end()) return it->second;
  }
  Representation A = mstore_.representative(a_id);
  Representation C = mstore_.representative(c_id);
  std::map<ModuleClassId, long long> tallies = ext1_with_middles(a_, mstore_, A, C);
  int h = hom_dim(a_, A, C);
  mpq_class qh(1);
  for (int i = 0; i < h; ++i) qh *= static_cast<long>(q());
  std::vector<HallTerm> terms;
  for (const auto& [mid, count] : tallies) terms.push_back({mid, mpq_class(static_cast<long>(count)) / qh});
  std::lock_guard<std::mutex> lock(memo_mu_);
  return hall_memo_.emplace(std::make_pair(a_id.bytes(), c_id.bytes()), std::move(terms))
      .first->second;
}

HallElem HallContext::hall_mul(const HallElem& x, const HallElem& y) {
  HallElem r;
  for (const auto& [aid, ac] : x.terms)
    for (const auto& [cid, cc] : y.terms) {
      if (class_total_dim(aid) + class_total_dim(cid) > bound_)
        throw BoundExceeded("Hall product middle of dimension " +
                            std::to_string(class_total_dim(aid) + class_total_dim(cid)) +
                            " leaves the enumerated universe (bound " + std::to_string(bound_) +
                            ")");
      std::vector<long long> ahat = dim_vector(mstore_.representative(aid));
      std::vector<long long> chat = dim_vector(mstore_.representative(cid));
      TCoeff tw = tpow(q(), euler_.pair(ahat, chat));
      TCoeff scale = ac * cc * tw;
      for (const HallTerm& term : structure_constants(aid, cid))
        hall_add_term(r, term.middle, scale * TCoeff(q(), term.coeff, 0));
    }
  return r;
}

CpxElem HallContext::cpx_basis(const Complex2ClassId& id) const {
  CpxElem e;
  e.emplace(id, TCoeff::one(a_.field().q));
  return e;
}

CpxElem HallContext::cpx_hall_mul(const Complex2ClassId& mid, const Complex2ClassId& nid) {
  {
    std::lock_guard<std::mutex> lock(memo_mu_);
    auto it = cpx_memo_.find({mid.bytes(), nid.bytes()});
    if (it != cpx_memo_.end()) return it->second;
  }
  Complex2 M = cstore_.representative(mid);
  Complex2 N = cstore_.representative(nid);
  long long tw_exp = euler_.pair(dim_vector(M.M0), dim_vector(N.M0)) +
                     euler_.pair(dim_vector(M.M1), dim_vector(N.M1));
  int h = hom_dim_c2(a_, M, N);
  mpq_class qh(1);
  for (int i = 0; i < h; ++i) qh *= static_cast<long>(q());
  std::map<Complex2ClassId, long long> tallies = ext1_with_middles_c2(a_, cstore_, M, N);
  CpxElem r;
  TCoeff tw = tpow(q(), tw_exp);
  for (const auto& [xid, count] : tallies)
    cpx_add_term(r, xid, tw * TCoeff(q(), mpq_class(static_cast<long>(count)) / qh, 0));
  std::lock_guard<std::mutex> lock(memo_mu_);
  return cpx_memo_.emplace(std::make_pair(mid.bytes(), nid.bytes()), std::move(r)).first->second;
}

CpxElem HallContext::cpx_hall_mul(const CpxElem& x, const CpxElem& y) {
  CpxElem r;
  for (const auto& [mid, mc] : x)
    for (const auto& [nid, nc] : y) {
      CpxElem prod = cpx_hall_mul(mid, nid);
      for (const auto& [xid, c] : prod) cpx_add_term(r, xid, c * mc * nc);
    }
  return r;
}

DHElem HallContext::dh_unit() {
  DHElem e;
  std::vector<long long> zero(a_.num_vertices(), 0);
  dh_add_term(e, DHKey{zero, zero, cstore_.id_of(zero_complex2(a_))}, tone());
  return e;
}

DHElem HallContext::normalize_dh(const std::vector<long long>& alpha,
                                 const std::vector<long long>& beta, const Complex2& X,
                                 const TCoeff& c) {
  StripResult s = strip_acyclics(a_, X);
  std::vector<long long> phat = proj_sum_kclass(a_, s.p_items);
  std::vector<long long> qhat = proj_sum_kclass(a_, s.q_items);
  // [K_P + K*_Q + Y] = t^{<Qhat - Phat, Yhat>} K_P * K*_Q * [Y]
  TCoeff factor = tpow(q(), euler_.pair(vec_sub(qhat, phat), s.core.kclass));
  DHElem r;
  dh_add_term(r, DHKey{vec_add(alpha, phat), vec_add(beta, qhat), cstore_.id_of(s.core)},
              c * factor);
  return r;
}

DHElem HallContext::dh_mul(const DHElem& x, const DHElem& y) {
  DHElem r;
  for (const auto& [xk, xc] : x.terms) {
    Complex2 M = cstore_.representative(xk.m);
    for (const auto& [yk, yc] : y.terms) {
      // Move K_gamma K*_delta across [M]: Eq. (2) gives
      // [M] K_gamma = t^{-(gamma, Mhat)} K_gamma [M] and
      // [M] K*_delta = t^{(delta, Mhat)} K*_delta [M].
      long long exp = euler_.sym(yk.beta, M.kclass) - euler_.sym(yk.alpha, M.kclass);
      TCoeff scale = xc * yc * tpow(q(), exp);
      std::vector<long long> alpha = vec_add(xk.alpha, yk.alpha);
      std::vector<long long> beta = vec_add(xk.beta, yk.beta);
      CpxElem prod = cpx_hall_mul(xk.m, yk.m);
      for (const auto& [xid, c] : prod) {
        DHElem norm = normalize_dh(alpha, beta, cstore_.representative(xid), scale * c);
        for (const auto& [k, v] : norm.terms) dh_add_term(r, k, v);
      }
    }
  }
  return r;
}

DHElem HallContext::e_of_module(const Representation& A) {
  Resolution res = minimal_resolution(a_, A);
  std::vector<long long> p1 = proj_sum_kclass(a_, res.p1_items);
  std::vector<long long> p2 = proj_sum_kclass(a_, res.p2_items);
  std::vector<long long> ahat = dim_vector(A);
  long long exp = euler_.pair(vec_sub(p1, vec_add(p2, p2)), ahat);
  Complex2 ca = c_of_module(a_, A);
  StripResult s = strip_acyclics(a_, ca);
  if (!s.p_items.empty() || !s.q_items.empty())
    throw Error("internal: C_A of a minimal resolution has an acyclic summand");
  DHElem r;
  dh_add_term(r, DHKey{vec_sub(p2, p1), vec_neg(p2), cstore_.id_of(ca)}, tpow(q(), exp));
  return r;
}

DHElem HallContext::e_of_class(const ModuleClassId& id) {
  {
    std::lock_guard<std::mutex> lock(memo_mu_);
    auto it = e_memo_.find(id.bytes());
    if (it != e_memo_.end()) return it->second;
  }
  DHElem e = e_of_module(mstore_.representative(id));
  std::lock_guard<std::mutex> lock(memo_mu_);
  return e_memo_.emplace(id.bytes(), std::move(e)).first->second;
}

DHElem HallContext::i_plus(const HallElem& x) {
  DHElem r;
  for (const auto& [id, c] : x.terms) {
    DHElem e = dh_scale(e_of_class(id), c);
    for (const auto& [k, v] : e.terms) dh_add_term(r, k, v);
  }
  return r;
}

DHElem HallContext::shift_dh(const DHElem& x) {
  DHElem r;
  for (const auto& [k, c] : x.terms) {
    Complex2 m = cstore_.representative(k.m);
    dh_add_term(r, DHKey{k.beta, k.alpha, cstore_.id_of(shift(a_, m))}, c);
  }
  return r;
}

DHRedElem HallContext::reduce_dh(const DHElem& x) {
  DHRedElem r;
  for (const auto& [k, c] : x.terms)
    dhred_add_term(r, DHRedKey{vec_sub(k.alpha, k.beta), k.m}, c);
  return r;
}

DHRedElem HallContext::dhred_mul(const DHRedElem& x, const DHRedElem& y) {
  std::vector<long long> zero(a_.num_vertices(), 0);
  DHElem xl, yl;
  for (const auto& [k, c] : x.terms) dh_add_term(xl, DHKey{k.gamma, zero, k.m}, c);
  for (const auto& [k, c] : y.terms) dh_add_term(yl, DHKey{k.gamma, zero, k.m}, c);
  return reduce_dh(dh_mul(xl, yl));
}

// ---------------------------------------------------------------------------
// Linear independence over Q(t)
// ---------------------------------------------------------------------------

namespace {

template <typename Elem, typename KeyFn>
bool independence(const std::vector<Elem>& elems, KeyFn key_str, unsigned q) {
  if (elems.empty()) return true;
  std::set<std::string> keys;
  for (const auto& e : elems)
    for (const auto& [k, c] : e.terms) keys.insert(key_str(k));
  std::vector<std::string> cols(keys.begin(), keys.end());
  std::map<std::string, size_t> col_of;
  for (size_t i = 0; i < cols.size(); ++i) col_of[cols[i]] = i;

  std::vector<std::vector<TCoeff>> rows;
  for (const auto& e : elems) {
    std::vector<TCoeff> row(cols.size(), TCoeff::zero(q));
    for (const auto& [k, c] : e.terms) row[col_of.at(key_str(k))] = c;
    rows.push_back(std::move(row));
  }
  // Gaussian elimination over the field Q[t]/(t^2 - q).
  size_t rank = 0;
  for (size_t col = 0; col < cols.size() && rank < rows.size(); ++col) {
    size_t sel = rank;
    while (sel < rows.size() && rows[sel][col].is_zero()) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    TCoeff inv = rows[rank][col].inverse();
    for (size_t j = col; j < cols.size(); ++j) rows[rank][j] = rows[rank][j] * inv;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][col].is_zero()) continue;
      TCoeff f = rows[i][col];
      for (size_t j = col; j < cols.size(); ++j)
        rows[i][j] = rows[i][j] - f * rows[rank][j];
    }
    ++rank;
  }
  return rank == elems.size();
}

std::string vec_str(const std::vector<long long>& v) {
  std::string s;
  for (long long x : v) s += std::to_string(x) + ",";
  return s;
}

}  // namespace

bool linear_independence_check(const std::vector<DHElem>& elems) {
  if (elems.empty()) return true;
  unsigned q = 2;
  for (const auto& e : elems)
    if (!e.terms.empty()) q = e.terms.begin()->second.q();
  return independence(elems, [](const DHKey& k) {
    return vec_str(k.alpha) + "|" + vec_str(k.beta) + "|" + k.m.hex();
  }, q);
}

bool linear_independence_check(const std::vector<DHRedElem>& elems) {
  if (elems.empty()) return true;
  unsigned q = 2;
  for (const auto& e : elems)
    if (!e.terms.empty()) q = e.terms.begin()->second.q();
  return independence(elems, [](const DHRedKey& k) { return vec_str(k.gamma) + "|" + k.m.hex(); },
                      q);
}

}  // namespace hallbridge
