#include "hallbridge/verify.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace hallbridge {

using nlohmann::json;

namespace {

void parallel_for(long long n, int workers, const std::function<void(long long)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (long long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long long> next(0);
  std::vector<std::thread> pool;
  auto worker = [&]() {
    while (true) {
      long long i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

std::string vec_to_string(const std::vector<long long>& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

std::string dh_to_string(const DHElem& x) {
  if (x.terms.empty()) return "0";
  std::string s;
  for (const auto& [k, c] : x.terms) {
    if (!s.empty()) s += " + ";
    s += "(" + c.str() + ")*K" + vec_to_string(k.alpha) + "*K^*" + vec_to_string(k.beta) + "*[" +
         k.m.hex().substr(0, 16) + "]";
  }
  return s;
}

std::string red_to_string(const DHRedElem& x) {
  if (x.terms.empty()) return "0";
  std::string s;
  for (const auto& [k, c] : x.terms) {
    if (!s.empty()) s += " + ";
    s += "(" + c.str() + ")*K" + vec_to_string(k.gamma) + "*[" + k.m.hex().substr(0, 16) + "]";
  }
  return s;
}

std::string cpx_to_string(const CpxElem& x) {
  if (x.empty()) return "0";
  std::string s;
  for (const auto& [k, c] : x) {
    if (!s.empty()) s += " + ";
    s += "(" + c.str() + ")*[" + k.hex().substr(0, 16) + "]";
  }
  return s;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct CheckContext {
  HallContext& ctx;
  std::vector<ModuleClassId> ids;
  int workers = 1;
  unsigned long long seed = 0;
};

// Deterministic gather: tasks report failures into fixed slots.  Exceptions
// may not escape worker threads, so they are funneled and rethrown after the
// join.
CheckOutcome run_pairwise(const std::string& name, CheckContext& cc, long long n,
                          const std::function<std::string(long long)>& task) {
  Timer timer;
  CheckOutcome out;
  out.name = name;
  out.pairs_tested = n;
  std::vector<std::string> fails(n);
  enum class Abort { kNone, kBudget, kBound, kOther };
  std::atomic<Abort> abort_kind(Abort::kNone);
  std::string abort_msg;
  std::mutex abort_mu;
  auto record = [&](Abort kind, const char* what) {
    std::lock_guard<std::mutex> lock(abort_mu);
    if (abort_kind.load() == Abort::kNone) {
      abort_kind = kind;
      abort_msg = what;
    }
  };
  parallel_for(n, cc.workers, [&](long long i) {
    if (abort_kind.load() != Abort::kNone) return;
    try {
      fails[i] = task(i);
    } catch (const SearchBudgetExceeded& e) {
      record(Abort::kBudget, e.what());
    } catch (const BoundExceeded& e) {
      record(Abort::kBound, e.what());
    } catch (const std::exception& e) {
      record(Abort::kOther, e.what());
    }
  });
  switch (abort_kind.load()) {
    case Abort::kBudget: throw SearchBudgetExceeded(name + ": " + abort_msg);
    case Abort::kBound: throw BoundExceeded(name + ": " + abort_msg);
    case Abort::kOther: throw Error(name + ": " + abort_msg);
    case Abort::kNone: break;
  }
  for (auto& f : fails)
    if (!f.empty()) out.failures.push_back(std::move(f));
  out.seconds = timer.seconds();
  return out;
}

std::vector<std::pair<int, int>> in_bound_pairs(HallContext& ctx,
                                                const std::vector<ModuleClassId>& ids) {
  std::vector<std::pair<int, int>> pairs;
  for (size_t i = 0; i < ids.size(); ++i)
    for (size_t j = 0; j < ids.size(); ++j)
      if (ctx.class_total_dim(ids[i]) + ctx.class_total_dim(ids[j]) <= ctx.bound())
        pairs.push_back({static_cast<int>(i), static_cast<int>(j)});
  return pairs;
}

// ---- individual checks ----

CheckOutcome check_structural(CheckContext& cc) {
  HallContext& ctx = cc.ctx;
  const AlgebraData& a = ctx.algebra();
  long long n = static_cast<long long>(cc.ids.size());
  long long total = n + n * n;
  Timer timer;
  CheckOutcome out = run_pairwise("structural", cc, total, [&](long long t) -> std::string {
    if (t < n) {
      const ModuleClassId& id = cc.ids[t];
      Representation A = ctx.mstore().representative(id);
      Complex2 ca = c_of_module(a, A);
      auto [h0, h1] = homology(a, ca);
      if (ctx.mstore().id_of(h0) != id)
        return "H0(C_A) differs from A for class " + id.hex().substr(0, 16);
      if (h1.total_dim() != 0) return "H1(C_A) nonzero for class " + id.hex().substr(0, 16);
      if (ca.kclass != dim_vector(A))
        return "kclass(C_A) differs from class of A for " + id.hex().substr(0, 16);
      StripResult s = strip_acyclics(a, ca);
      if (!s.p_items.empty() || !s.q_items.empty())
        return "C_A from a minimal resolution has an acyclic summand for " + id.hex().substr(0, 16);
      return "";
    }
    long long p = t - n;
    const ModuleClassId& ia = cc.ids[p / n];
    const ModuleClassId& ib = cc.ids[p % n];
    Representation A = ctx.mstore().representative(ia);
    Representation B = ctx.mstore().representative(ib);
    ExtDims d = ext_dims(a, A, B);
    long long lhs = ctx.euler().pair(dim_vector(A), dim_vector(B));
    long long rhs = d.hom - d.ext1 + d.ext2;
    if (lhs != rhs)
      return "Euler form disagrees with hom-ext dimensions on (" + ia.hex().substr(0, 16) + ", " +
             ib.hex().substr(0, 16) + "): " + std::to_string(lhs) + " vs " + std::to_string(rhs);
    return "";
  });
  out.seconds = timer.seconds();
  return out;
}

CheckOutcome check_main(CheckContext& cc) {
  HallContext& ctx = cc.ctx;
  auto pairs = in_bound_pairs(ctx, cc.ids);
  Timer timer;
  CheckOutcome out =
      run_pairwise("main", cc, static_cast<long long>(pairs.size()), [&](long long t) -> std::string {
        auto [i, j] = pairs[t];
        HallElem prod = ctx.hall_mul(ctx.hall_basis(cc.ids[i]), ctx.hall_basis(cc.ids[j]));
        DHElem lhs = ctx.i_plus(prod);
        DHElem rhs = ctx.dh_mul(ctx.e_of_class(cc.ids[i]), ctx.e_of_class(cc.ids[j]));
        if (!(lhs == rhs))
          return "I+ not multiplicative on (" + cc.ids[i].hex().substr(0, 16) + ", " +
                 cc.ids[j].hex().substr(0, 16) + "): lhs = " + dh_to_string(lhs) +
                 " ; rhs = " + dh_to_string(rhs);
        // Shifted variant: F_A = E_A^* also gives a homomorphism.
        DHElem lshift = ctx.shift_dh(lhs);
        DHElem rshift = ctx.dh_mul(ctx.shift_dh(ctx.e_of_class(cc.ids[i])),
                                   ctx.shift_dh(ctx.e_of_class(cc.ids[j])));
        if (!(lshift == rshift))
          return "I- not multiplicative on (" + cc.ids[i].hex().substr(0, 16) + ", " +
                 cc.ids[j].hex().substr(0, 16) + "): lhs = " + dh_to_string(lshift) +
                 " ; rhs = " + dh_to_string(rshift);
        return "";
      });
  // Injectivity side: the E_A are linearly independent.
  std::vector<DHElem> images;
  for (const ModuleClassId& id : cc.ids) images.push_back(ctx.e_of_class(id));
  ++out.pairs_tested;
  if (!linear_independence_check(images))
    out.failures.push_back("the E_A over the enumerated classes are linearly dependent");
  out.seconds = timer.seconds();
  return out;
}

CheckOutcome check_reduced(CheckContext& cc) {
  HallContext& ctx = cc.ctx;
  auto pairs = in_bound_pairs(ctx, cc.ids);
  Timer timer;
  CheckOutcome out = run_pairwise(
      "reduced", cc, static_cast<long long>(pairs.size()), [&](long long t) -> std::string {
        auto [i, j] = pairs[t];
        HallElem prod = ctx.hall_mul(ctx.hall_basis(cc.ids[i]), ctx.hall_basis(cc.ids[j]));
        DHRedElem lhs = ctx.reduce_dh(ctx.i_plus(prod));
        DHRedElem rhs = ctx.dhred_mul(ctx.reduce_dh(ctx.e_of_class(cc.ids[i])),
                                      ctx.reduce_dh(ctx.e_of_class(cc.ids[j])));
        if (!(lhs == rhs))
          return "reduced embedding not multiplicative on (" + cc.ids[i].hex().substr(0, 16) +
                 ", " + cc.ids[j].hex().substr(0, 16) + "): lhs = " + red_to_string(lhs) +
                 " ; rhs = " + red_to_string(rhs);
        // The shifted embedding also descends to the reduced algebra.
        DHRedElem lshift = ctx.reduce_dh(ctx.shift_dh(ctx.i_plus(prod)));
        DHRedElem rshift =
            ctx.dhred_mul(ctx.reduce_dh(ctx.shift_dh(ctx.e_of_class(cc.ids[i]))),
                          ctx.reduce_dh(ctx.shift_dh(ctx.e_of_class(cc.ids[j]))));
        if (!(lshift == rshift))
          return "reduced shifted embedding not multiplicative on (" +
                 cc.ids[i].hex().substr(0, 16) + ", " + cc.ids[j].hex().substr(0, 16) +
                 "): lhs = " + red_to_string(lshift) + " ; rhs = " + red_to_string(rshift);
        return "";
      });
  std::vector<DHRedElem> images;
  for (const ModuleClassId& id : cc.ids) images.push_back(ctx.reduce_dh(ctx.e_of_class(id)));
  ++out.pairs_tested;
  if (!linear_independence_check(images))
    out.failures.push_back("the reduced E_A over the enumerated classes are linearly dependent");
  out.seconds = timer.seconds();
  return out;
}

CheckOutcome check_phi(CheckContext& cc) {
  HallContext& ctx = cc.ctx;
  const AlgebraData& a = ctx.algebra();
  long long n = static_cast<long long>(cc.ids.size());
  return run_pairwise("phi", cc, n * n, [&](long long t) -> std::string {
    Representation A = ctx.mstore().representative(cc.ids[t / n]);
    Representation B = ctx.mstore().representative(cc.ids[t % n]);
    Resolution ra = minimal_resolution(a, A);
    Resolution rb = minimal_resolution(a, B);
    int lhs = hom_dim_c2(a, c_of_module(a, A), c_of_module(a, B));
    int rhs = hom_dim(a, A, B) + hom_dim(a, ra.P2, rb.P0) + hom_dim(a, ra.P1, rb.P2) +
              hom_dim(a, ra.P0, rb.P1) - hom_dim(a, ra.P0, rb.P2);
    if (lhs != rhs)
      return "Hom_{C2} cardinality formula fails on (" + cc.ids[t / n].hex().substr(0, 16) + ", " +
             cc.ids[t % n].hex().substr(0, 16) + "): q^" + std::to_string(lhs) + " vs q^" +
             std::to_string(rhs);
    return "";
  });
}

CheckOutcome check_extiso(CheckContext& cc) {
  HallContext& ctx = cc.ctx;
  const AlgebraData& a = ctx.algebra();
  long long n = static_cast<long long>(cc.ids.size());
  return run_pairwise("extiso", cc, n * n, [&](long long t) -> std::string {
    Representation A = ctx.mstore().representative(cc.ids[t / n]);
    Representation B = ctx.mstore().representative(cc.ids[t % n]);
    int lhs = ext1_dim_c2(a, c_of_module(a, A), c_of_module(a, B));
    int rhs = ext_dims(a, A, B).ext1;
    if (lhs != rhs)
      return "Ext^1 comparison fails on (" + cc.ids[t / n].hex().substr(0, 16) + ", " +
             cc.ids[t % n].hex().substr(0, 16) + "): q^" + std::to_string(lhs) + " vs q^" +
             std::to_string(rhs);
    return "";
  });
}

// Sums of standard projectives with total dimension <= cap, as summand lists.
std::vector<std::vector<int>> small_projective_sums(const AlgebraData& a, int cap) {
  std::vector<int> pdims;
  for (int v = 0; v < a.num_vertices(); ++v) {
    std::vector<long long> col = a.cartan_column(v);
    long long d = 0;
    for (long long x : col) d += x;
    pdims.push_back(static_cast<int>(d));
  }
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int v, int left) {
    if (v == a.num_vertices()) {
      out.push_back(cur);
      return;
    }
    rec(v + 1, left);
    int added = 0;
    while (left - added >= pdims[v]) {
      added += pdims[v];
      cur.push_back(v);
      rec(v + 1, left - added);
    }
    while (added > 0) {
      cur.pop_back();
      added -= pdims[v];
    }
  };
  rec(0, cap);
  return out;
}

CheckOutcome check_epad(CheckContext& cc) {
  HallContext& ctx = cc.ctx;
  const AlgebraData& a = ctx.algebra();
  std::vector<std::vector<int>> sums = small_projective_sums(a, 2);
  std::vector<std::pair<std::vector<int>, std::vector<int>>> paddings;
  for (const auto& r0 : sums)
    for (const auto& r1 : sums) {
      int d0 = realize_proj_sum(a, r0).total_dim();
      int d1 = realize_proj_sum(a, r1).total_dim();
      if (d0 + d1 <= 2) paddings.push_back({r0, r1});
    }
  long long n = static_cast<long long>(cc.ids.size()) * paddings.size();
  return run_pairwise("epad", cc, n, [&](long long t) -> std::string {
    const ModuleClassId& id = cc.ids[t / paddings.size()];
    const auto& [r0, r1] = paddings[t % paddings.size()];
    Representation A = ctx.mstore().representative(id);
    Resolution res = minimal_resolution(a, A);
    std::vector<long long> p1 = proj_sum_kclass(a, res.p1_items);
    std::vector<long long> p2 = proj_sum_kclass(a, res.p2_items);
    std::vector<long long> h0 = proj_sum_kclass(a, r0);
    std::vector<long long> h1 = proj_sum_kclass(a, r1);
    std::vector<long long> ahat = dim_vector(A);
    // E'_A = t^{<p1 + r0 + r1 - 2(p2 + r1), A>} K_{p2 + r1 - p1 - r0 - r1} *
    //        K*_{-p2 - r1} * [C'_A]
    std::vector<long long> alpha(ahat.size()), beta(ahat.size()), expvec(ahat.size());
    for (size_t v = 0; v < ahat.size(); ++v) {
      alpha[v] = p2[v] - p1[v] - h0[v];
      beta[v] = -p2[v] - h1[v];
      expvec[v] = p1[v] + h0[v] - h1[v] - 2 * p2[v];
    }
    Complex2 padded = c_of_module_padded(a, A, r0, r1);
    DHElem eprime =
        ctx.normalize_dh(alpha, beta, padded, tpow(ctx.q(), ctx.euler().pair(expvec, ahat)));
    DHElem e = ctx.e_of_class(id);
    if (!(eprime == e))
      return "padded E_A differs for class " + id.hex().substr(0, 16) + " with padding (" +
             std::to_string(r0.size()) + "," + std::to_string(r1.size()) +
             " summands): got " + dh_to_string(eprime) + " ; expected " + dh_to_string(e);
    return "";
  });
}

CheckOutcome check_relations(CheckContext& cc) {
  HallContext& ctx = cc.ctx;
  const AlgebraData& a = ctx.algebra();
  // The enumerated acyclic-free complexes: C_A and C_A* over the class list.
  struct MEntry {
    Complex2ClassId id;
    std::vector<long long> kclass;
  };
  std::vector<MEntry> ms;
  for (const ModuleClassId& mid : cc.ids) {
    Complex2 ca = c_of_module(a, ctx.mstore().representative(mid));
    ms.push_back({ctx.cstore().id_of(ca), ca.kclass});
    Complex2 cas = shift(a, ca);
    ms.push_back({ctx.cstore().id_of(cas), cas.kclass});
  }
  const int nv = a.num_vertices();
  long long n_pm = static_cast<long long>(nv) * ms.size();
  long long n_pq = static_cast<long long>(nv) * nv;
  return run_pairwise("relations", cc, n_pm + n_pq, [&](long long t) -> std::string {
    if (t < n_pm) {
      int v = static_cast<int>(t / ms.size());
      const MEntry& m = ms[t % ms.size()];
      std::vector<int> items{v};
      std::vector<long long> phat = proj_sum_kclass(a, items);
      Complex2 kp = k_acyclic(a, items, AcyclicKind::kPlus);
      Complex2 kps = k_acyclic(a, items, AcyclicKind::kStar);
      Complex2ClassId kp_id = ctx.cstore().id_of(kp);
      Complex2ClassId kps_id = ctx.cstore().id_of(kps);
      Complex2 mrep = ctx.cstore().representative(m.id);
      Complex2ClassId sum_p = ctx.cstore().id_of(direct_sum_complex(a, kp, mrep));
      Complex2ClassId sum_ps = ctx.cstore().id_of(direct_sum_complex(a, kps, mrep));
      long long fwd = ctx.euler().pair(phat, m.kclass);
      long long bwd = ctx.euler().pair(m.kclass, phat);
      long long sym = fwd + bwd;

      // (1) [K_P][M] = t^{<P,M>}[K_P + M];  [M][K_P] = t^{-<M,P>}[K_P + M]
      CpxElem l1 = ctx.cpx_hall_mul(kp_id, m.id);
      CpxElem r1 = cpx_scale(ctx.cpx_basis(sum_p), tpow(ctx.q(), fwd));
      if (!(l1 == r1))
        return "relation (1a) fails at P(" + std::to_string(v) + "), [" +
               m.id.hex().substr(0, 16) + "]: " + cpx_to_string(l1) + " vs " + cpx_to_string(r1);
      CpxElem l1b = ctx.cpx_hall_mul(m.id, kp_id);
      CpxElem r1b = cpx_scale(ctx.cpx_basis(sum_p), tpow(ctx.q(), -bwd));
      if (!(l1b == r1b))
        return "relation (1b) fails at P(" + std::to_string(v) + "), [" +
               m.id.hex().substr(0, 16) + "]: " + cpx_to_string(l1b) + " vs " + cpx_to_string(r1b);
      // (2) commutation with the symmetrized twist
      CpxElem r2 = cpx_scale(l1b, tpow(ctx.q(), sym));
      if (!(l1 == r2))
        return "relation (2a) fails at P(" + std::to_string(v) + "), [" +
               m.id.hex().substr(0, 16) + "]";
      CpxElem l2b = ctx.cpx_hall_mul(kps_id, m.id);
      CpxElem r2b = cpx_scale(ctx.cpx_hall_mul(m.id, kps_id), tpow(ctx.q(), -sym));
      if (!(l2b == r2b))
        return "relation (2b) fails at P(" + std::to_string(v) + "), [" +
               m.id.hex().substr(0, 16) + "]";
      // (4) the K* forms
      CpxElem l4 = ctx.cpx_hall_mul(kps_id, m.id);
      CpxElem r4 = cpx_scale(ctx.cpx_basis(sum_ps), tpow(ctx.q(), -fwd));
      if (!(l4 == r4))
        return "relation (4a) fails at P(" + std::to_string(v) + "), [" +
               m.id.hex().substr(0, 16) + "]: " + cpx_to_string(l4) + " vs " + cpx_to_string(r4);
      CpxElem l4b = ctx.cpx_hall_mul(m.id, kps_id);
      CpxElem r4b = cpx_scale(ctx.cpx_basis(sum_ps), tpow(ctx.q(), bwd));
      if (!(l4b == r4b))
        return "relation (4b) fails at P(" + std::to_string(v) + "), [" +
               m.id.hex().substr(0, 16) + "]: " + cpx_to_string(l4b) + " vs " + cpx_to_string(r4b);
      return "";
    }
    long long s = t - n_pm;
    int v = static_cast<int>(s / nv);
    int w = static_cast<int>(s % nv);
    Complex2 kp = k_acyclic(a, {v}, AcyclicKind::kPlus);
    Complex2 kq = k_acyclic(a, {w}, AcyclicKind::kPlus);
    Complex2 kqs = k_acyclic(a, {w}, AcyclicKind::kStar);
    // (3) [K_P][K_Q] = [K_P + K_Q], [K_P][K*_Q] = [K_P + K*_Q]
    CpxElem l3 = ctx.cpx_hall_mul(ctx.cstore().id_of(kp), ctx.cstore().id_of(kq));
    CpxElem r3 = ctx.cpx_basis(ctx.cstore().id_of(direct_sum_complex(a, kp, kq)));
    if (!(l3 == r3))
      return "relation (3a) fails at P(" + std::to_string(v) + "), P(" + std::to_string(w) + ")";
    CpxElem l3b = ctx.cpx_hall_mul(ctx.cstore().id_of(kp), ctx.cstore().id_of(kqs));
    CpxElem r3b = ctx.cpx_basis(ctx.cstore().id_of(direct_sum_complex(a, kp, kqs)));
    if (!(l3b == r3b))
      return "relation (3b) fails at P(" + std::to_string(v) + "), P(" + std::to_string(w) + ")";
    return "";
  });
}

CheckOutcome check_rp(CheckContext& cc) {
  HallContext& ctx = cc.ctx;
  const AlgebraData& a = ctx.algebra();
  auto pairs = in_bound_pairs(ctx, cc.ids);
  return run_pairwise("rp", cc, static_cast<long long>(pairs.size()), [&](long long t) -> std::string {
    auto [i, j] = pairs[t];
    Representation A = ctx.mstore().representative(cc.ids[i]);
    Representation C = ctx.mstore().representative(cc.ids[j]);
    std::map<ModuleClassId, long long> tallies = ext1_with_middles(a, ctx.mstore(), A, C);
    int h = hom_dim(a, A, C);
    long long aut_a = aut_order(a, A, ctx.mstore().budgets());
    long long aut_c = aut_order(a, C, ctx.mstore().budgets());
    std::vector<long long> want = dim_vector(A);
    std::vector<long long> cv = dim_vector(C);
    for (size_t k = 0; k < want.size(); ++k) want[k] += cv[k];
    for (const ModuleClassId& bid : cc.ids) {
      Representation B = ctx.mstore().representative(bid);
      if (dim_vector(B) != want) continue;
      long long tally = 0;
      auto it = tallies.find(bid);
      if (it != tallies.end()) tally = it->second;
      long long g = hall_number_oracle(a, A, B, C, ctx.mstore().budgets());
      mpq_class qh(1);
      for (int e = 0; e < h; ++e) qh *= static_cast<long>(ctx.q());
      mpq_class rhs = mpq_class(static_cast<long>(tally)) *
                      static_cast<long>(aut_order(a, B, ctx.mstore().budgets())) /
                      (qh * static_cast<long>(aut_a) * static_cast<long>(aut_c));
      if (rhs.get_den() != 1 || rhs.get_num() != static_cast<long>(g))
        return "Riedtmann-Peng relation fails on (" + cc.ids[i].hex().substr(0, 16) + ", " +
               bid.hex().substr(0, 16) + ", " + cc.ids[j].hex().substr(0, 16) + "): oracle " +
               std::to_string(g) + " vs " + rhs.get_str();
    }
    return "";
  });
}

CheckOutcome check_assoc(CheckContext& cc) {
  HallContext& ctx = cc.ctx;
  const AlgebraData& a = ctx.algebra();
  const int kTriples = 200;
  std::vector<std::tuple<int, int, int>> valid;
  for (size_t i = 0; i < cc.ids.size(); ++i)
    for (size_t j = 0; j < cc.ids.size(); ++j)
      for (size_t k = 0; k < cc.ids.size(); ++k)
        if (ctx.class_total_dim(cc.ids[i]) + ctx.class_total_dim(cc.ids[j]) +
                ctx.class_total_dim(cc.ids[k]) <=
            ctx.bound())
          valid.push_back({static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)});
  std::mt19937_64 rng(cc.seed);
  std::vector<std::tuple<int, int, int>> sample;
  for (int t = 0; t < kTriples && !valid.empty(); ++t)
    sample.push_back(valid[rng() % valid.size()]);
  // DH triples: normal-form keys with small prefixes over the same classes.
  struct DHTriple {
    DHKey x, y, z;
  };
  std::vector<DHTriple> dh_samples;
  const int nv = a.num_vertices();
  auto random_key = [&](int class_idx) {
    DHKey key;
    key.alpha.resize(nv);
    key.beta.resize(nv);
    for (int v = 0; v < nv; ++v) {
      key.alpha[v] = static_cast<long long>(rng() % 3) - 1;
      key.beta[v] = static_cast<long long>(rng() % 3) - 1;
    }
    Complex2 ca = c_of_module(a, ctx.mstore().representative(cc.ids[class_idx]));
    key.m = ctx.cstore().id_of((rng() % 2) ? ca : shift(a, ca));
    return key;
  };
  for (const auto& [i, j, k] : sample) dh_samples.push_back({random_key(i), random_key(j), random_key(k)});

  long long n = static_cast<long long>(sample.size());
  return run_pairwise("assoc", cc, 2 * n, [&](long long t) -> std::string {
    if (t < n) {
      auto [i, j, k] = sample[t];
      HallElem x = ctx.hall_basis(cc.ids[i]);
      HallElem y = ctx.hall_basis(cc.ids[j]);
      HallElem z = ctx.hall_basis(cc.ids[k]);
      HallElem lhs = ctx.hall_mul(ctx.hall_mul(x, y), z);
      HallElem rhs = ctx.hall_mul(x, ctx.hall_mul(y, z));
      if (!(lhs == rhs))
        return "Hall product not associative on sampled triple " + std::to_string(t);
      return "";
    }
    const DHTriple& tr = dh_samples[t - n];
    DHElem x, y, z;
    dh_add_term(x, tr.x, ctx.tone());
    dh_add_term(y, tr.y, ctx.tone());
    dh_add_term(z, tr.z, ctx.tone());
    DHElem lhs = ctx.dh_mul(ctx.dh_mul(x, y), z);
    DHElem rhs = ctx.dh_mul(x, ctx.dh_mul(y, z));
    if (!(lhs == rhs))
      return "DH product not associative on sampled triple " + std::to_string(t - n) + ": lhs = " +
             dh_to_string(lhs) + " ; rhs = " + dh_to_string(rhs);
    return "";
  });
}

}  // namespace

const std::vector<std::string>& verify_check_names() {
  static const std::vector<std::string> names = {"structural", "main",      "reduced",
                                                 "phi",        "extiso",    "epad",
                                                 "relations",  "rp",        "assoc"};
  return names;
}

bool VerifyReport::passed() const {
  for (const CheckOutcome& c : checks)
    if (!c.failures.empty()) return false;
  return true;
}

std::string VerifyReport::to_json() const {
  json j;
  j["algebra_fingerprint"] = algebra_fingerprint;
  j["q"] = q;
  j["bound"] = bound;
  j["gldim"] = gldim;
  j["budget"] = budget;
  j["workers"] = workers;
  j["seed"] = seed;
  j["checks"] = json::array();
  for (const CheckOutcome& c : checks) {
    json jc;
    jc["name"] = c.name;
    jc["pairs_tested"] = c.pairs_tested;
    jc["failures"] = c.failures;
    jc["seconds"] = c.seconds;
    j["checks"].push_back(jc);
  }
  return j.dump(2) + "\n";
}

VerifyRun run_verify(const std::string& input_text, const VerifyOptions& opts) {
  VerifyRun run;
  VerifyReport& rep = run.report;
  rep.algebra_fingerprint = fnv64_hex(input_text);
  rep.bound = opts.max_total_dim;
  rep.budget = opts.budgets.search;
  rep.workers = opts.workers;
  rep.seed = opts.seed;

  std::set<std::string> selected = opts.checks;
  if (selected.empty())
    selected.insert(verify_check_names().begin(), verify_check_names().end());
  selected.insert("structural");
  for (const std::string& name : selected) {
    bool known = false;
    for (const std::string& k : verify_check_names()) known = known || k == name;
    if (!known) {
      rep.checks.push_back({"options", 0, {"unknown check name \"" + name + "\""}, 0.0});
      run.exit_code = 2;
      return run;
    }
  }

  try {
    QuiverPresentation pres = load_presentation(input_text);
    rep.q = pres.field.q;
    AlgebraData a = AlgebraData::path_basis(pres);
    HallContext ctx(a, opts.max_total_dim, opts.budgets);
    rep.gldim = ctx.gldim();
    CheckContext cc{ctx, ctx.mstore().enumerate_modules(opts.max_total_dim), opts.workers,
                    opts.seed};
    for (const std::string& name : verify_check_names()) {
      if (!selected.count(name)) continue;
      if (name == "structural") rep.checks.push_back(check_structural(cc));
      else if (name == "main") rep.checks.push_back(check_main(cc));
      else if (name == "reduced") rep.checks.push_back(check_reduced(cc));
      else if (name == "phi") rep.checks.push_back(check_phi(cc));
      else if (name == "extiso") rep.checks.push_back(check_extiso(cc));
      else if (name == "epad") rep.checks.push_back(check_epad(cc));
      else if (name == "relations") rep.checks.push_back(check_relations(cc));
      else if (name == "rp") rep.checks.push_back(check_rp(cc));
      else if (name == "assoc") rep.checks.push_back(check_assoc(cc));
    }
    run.exit_code = rep.passed() ? 0 : 1;
  } catch (const GlobalDimensionExceeded& e) {
    rep.checks.push_back({"gldim", 1, {e.what()}, 0.0});
    run.exit_code = 2;
  } catch (const SearchBudgetExceeded& e) {
    rep.checks.push_back({"budget", 0, {e.what()}, 0.0});
    run.exit_code = 2;
  } catch (const BoundExceeded& e) {
    rep.checks.push_back({"bound", 0, {e.what()}, 0.0});
    run.exit_code = 2;
  } catch (const Error& e) {
    rep.checks.push_back({"validation", 0, {e.what()}, 0.0});
    run.exit_code = 2;
  }
  return run;
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

namespace {

json tcoeff_json(const TCoeff& c) {
  json j;
  if (!c.a().get_num().fits_slong_p() || !c.a().get_den().fits_slong_p() ||
      !c.b().get_num().fits_slong_p() || !c.b().get_den().fits_slong_p())
    throw Error("coefficient too large for the table serialization");
  j["a_num"] = c.a().get_num().get_si();
  j["a_den"] = c.a().get_den().get_si();
  j["b_num"] = c.b().get_num().get_si();
  j["b_den"] = c.b().get_den().get_si();
  return j;
}

json class_dictionary(HallContext& ctx, const std::vector<ModuleClassId>& ids) {
  json j = json::array();
  for (const ModuleClassId& id : ids) {
    json e;
    e["id"] = id.hex();
    e["dim_vector"] = dim_vector(ctx.mstore().representative(id));
    j.push_back(e);
  }
  return j;
}

}  // namespace

std::string hall_table_json(const std::string& input_text, int max_total_dim, Budgets bud) {
  QuiverPresentation pres = load_presentation(input_text);
  AlgebraData a = AlgebraData::path_basis(pres);
  HallContext ctx(a, max_total_dim, bud);
  std::vector<ModuleClassId> ids = ctx.mstore().enumerate_modules(max_total_dim);
  json j;
  j["algebra_fingerprint"] = fnv64_hex(input_text);
  j["q"] = pres.field.q;
  j["bound"] = max_total_dim;
  j["which"] = "hall";
  j["classes"] = class_dictionary(ctx, ids);
  j["entries"] = json::array();
  for (const ModuleClassId& left : ids)
    for (const ModuleClassId& right : ids) {
      if (ctx.class_total_dim(left) + ctx.class_total_dim(right) > max_total_dim) continue;
      HallElem prod = ctx.hall_mul(ctx.hall_basis(left), ctx.hall_basis(right));
      json e;
      e["left"] = left.hex();
      e["right"] = right.hex();
      e["terms"] = json::array();
      for (const auto& [id, c] : prod.terms) {
        json t;
        t["key"] = id.hex();
        t["coeff"] = tcoeff_json(c);
        e["terms"].push_back(t);
      }
      j["entries"].push_back(e);
    }
  return j.dump(2) + "\n";
}

std::string dh_table_json(const std::string& input_text, int max_total_dim, Budgets bud) {
  QuiverPresentation pres = load_presentation(input_text);
  AlgebraData a = AlgebraData::path_basis(pres);
  HallContext ctx(a, max_total_dim, bud);
  std::vector<ModuleClassId> ids = ctx.mstore().enumerate_modules(max_total_dim);
  json j;
  j["algebra_fingerprint"] = fnv64_hex(input_text);
  j["q"] = pres.field.q;
  j["bound"] = max_total_dim;
  j["which"] = "dh";
  j["classes"] = class_dictionary(ctx, ids);
  j["entries"] = json::array();
  for (const ModuleClassId& left : ids)
    for (const ModuleClassId& right : ids) {
      if (ctx.class_total_dim(left) + ctx.class_total_dim(right) > max_total_dim) continue;
      DHElem prod = ctx.dh_mul(ctx.e_of_class(left), ctx.e_of_class(right));
      json e;
      e["left"] = left.hex();
      e["right"] = right.hex();
      e["terms"] = json::array();
      for (const auto& [key, c] : prod.terms) {
        json t;
        t["key"]["alpha"] = key.alpha;
        t["key"]["beta"] = key.beta;
        t["key"]["m"] = key.m.hex();
        t["coeff"] = tcoeff_json(c);
        e["terms"].push_back(t);
      }
      j["entries"].push_back(e);
    }
  return j.dump(2) + "\n";
}

std::string enumerate_json(const std::string& input_text, int max_total_dim, Budgets bud) {
  QuiverPresentation pres = load_presentation(input_text);
  AlgebraData a = AlgebraData::path_basis(pres);
  HallContext ctx(a, max_total_dim, bud);
  std::vector<ModuleClassId> ids = ctx.mstore().enumerate_modules(max_total_dim);
  json j;
  j["algebra_fingerprint"] = fnv64_hex(input_text);
  j["q"] = pres.field.q;
  j["bound"] = max_total_dim;
  j["class_count"] = ids.size();
  j["classes"] = class_dictionary(ctx, ids);
  return j.dump(2) + "\n";
}

}  // namespace hallbridge
