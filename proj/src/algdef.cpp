#include "hallbridge/algdef.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include <json.hpp>

namespace hallbridge {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ParseError("unknown key \"" + it.key() + "\" in " + where);
}

}  // namespace

std::string fnv64_hex(const std::string& data) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static const char* hexd = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hexd[h & 0xf];
    h >>= 4;
  }
  return out;
}

QuiverPresentation load_presentation(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw ParseError("top level must be an object");
  reject_unknown_keys(j, {"q", "vertices", "arrows", "relations", "dim_cap"}, "top level");
  if (!j.contains("q") || !j["q"].is_number_integer()) throw ParseError("missing integer \"q\"");
  if (!j.contains("vertices") || !j["vertices"].is_array()) throw ParseError("missing \"vertices\"");
  if (!j.contains("arrows") || !j["arrows"].is_array()) throw ParseError("missing \"arrows\"");

  QuiverPresentation p;
  p.field = Field(j["q"].get<unsigned>());

  std::map<std::string, int> vertex_index;
  for (const auto& v : j["vertices"]) {
    if (!v.is_string()) throw ParseError("vertex names must be strings");
    std::string name = v.get<std::string>();
    if (vertex_index.count(name)) throw ParseError("duplicate vertex \"" + name + "\"");
    vertex_index[name] = static_cast<int>(p.vertices.size());
    p.vertices.push_back(name);
  }
  if (p.vertices.empty()) throw ParseError("need at least one vertex");

  std::map<std::string, int> arrow_index;
  for (const auto& a : j["arrows"]) {
    if (!a.is_object()) throw ParseError("arrows must be objects");
    reject_unknown_keys(a, {"name", "from", "to"}, "arrow");
    for (const char* key : {"name", "from", "to"})
      if (!a.contains(key) || !a[key].is_string())
        throw ParseError(std::string("arrow needs string \"") + key + "\"");
    ArrowDef d;
    d.name = a["name"].get<std::string>();
    if (arrow_index.count(d.name)) throw ParseError("duplicate arrow \"" + d.name + "\"");
    auto su = vertex_index.find(a["from"].get<std::string>());
    auto tu = vertex_index.find(a["to"].get<std::string>());
    if (su == vertex_index.end() || tu == vertex_index.end())
      throw UnknownVertexOrArrow("arrow \"" + d.name + "\" references an unknown vertex");
    d.src = su->second;
    d.tgt = tu->second;
    arrow_index[d.name] = static_cast<int>(p.arrows.size());
    p.arrows.push_back(d);
  }

  if (j.contains("relations")) {
    if (!j["relations"].is_array()) throw ParseError("\"relations\" must be an array");
    for (const auto& rel : j["relations"]) {
      if (!rel.is_array() || rel.empty()) throw ParseError("each relation must be a nonempty array");
      Relation r;
      for (const auto& term : rel) {
        if (!term.is_object()) throw ParseError("relation terms must be objects");
        reject_unknown_keys(term, {"coef", "path"}, "relation term");
        if (!term.contains("coef") || !term["coef"].is_number_integer())
          throw ParseError("relation term needs integer \"coef\"");
        if (!term.contains("path") || !term["path"].is_array())
          throw ParseError("relation term needs array \"path\"");
        RelTerm t;
        t.coef = p.field.reduce(term["coef"].get<long long>());
        if (t.coef == 0) throw NotAdmissible("relation term has zero coefficient");
        for (const auto& an : term["path"]) {
          if (!an.is_string()) throw ParseError("path entries must be arrow names");
          auto it = arrow_index.find(an.get<std::string>());
          if (it == arrow_index.end())
            throw UnknownVertexOrArrow("relation uses unknown arrow \"" + an.get<std::string>() + "\"");
          t.arrows.push_back(it->second);
        }
        if (t.arrows.size() < 2)
          throw NotAdmissible("relation path of length " + std::to_string(t.arrows.size()) +
                              " (admissible relations have length >= 2)");
        for (size_t i = 0; i + 1 < t.arrows.size(); ++i)
          if (p.arrows[t.arrows[i]].tgt != p.arrows[t.arrows[i + 1]].src)
            throw NotAdmissible("relation path is not composable");
        r.push_back(std::move(t));
      }
      p.relations.push_back(std::move(r));
    }
  }

  if (j.contains("dim_cap")) {
    if (!j["dim_cap"].is_number_integer() || j["dim_cap"].get<int>() <= 0)
      throw ParseError("\"dim_cap\" must be a positive integer");
    p.dim_cap = j["dim_cap"].get<int>();
  }
  return p;
}

std::string Representation::encode() const {
  std::string out;
  out.push_back(static_cast<char>(dims.size()));
  for (int d : dims) out.push_back(static_cast<char>(d));
  for (const Mat& m : mats) m.encode(out);
  return out;
}

// ---------------------------------------------------------------------------
// Path basis via noncommutative Groebner completion in the path algebra.
// Order: length, then lex on the arrow sequence.  For monomial relations the
// generators are already complete; inhomogeneous admissible relations
// (canonical algebras with unequal arm lengths) need the overlap closure.
// ---------------------------------------------------------------------------

class GroebnerEngine {
 public:
  using GPoly = AlgebraData::GPoly;

  GroebnerEngine(const QuiverPresentation& pres) : pres_(pres), f_(pres.field) {}

  void adopt(std::vector<GPoly> gb) { gb_ = std::move(gb); }

  std::vector<GPoly> complete() {
    for (const Relation& rel : pres_.relations) add_generator(to_poly(rel));
    bool changed = true;
    int rounds = 0;
    while (changed) {
      changed = false;
      if (++rounds > kMaxRounds)
        throw SearchBudgetExceeded("relation-ideal completion did not stabilize");
      size_t n = gb_.size();
      for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k)
          for (GPoly& s : overlaps(gb_[i], gb_[k])) {
            reduce(s);
            if (!s.terms.empty()) {
              make_monic(s);
              gb_.push_back(s);
              changed = true;
            }
          }
    }
    return gb_;
  }

  void reduce(GPoly& p) const {
    bool again = true;
    while (again) {
      again = false;
      for (size_t ti = 0; ti < p.terms.size(); ++ti) {
        const Path& path = p.terms[ti].first;
        for (const GPoly& g : gb_) {
          int pos = find_subword(path, g.terms[0].first);
          if (pos < 0) continue;
          subtract_multiple(p, g, path, pos, p.terms[ti].second);
          again = true;
          break;
        }
        if (again) break;
      }
    }
  }

 private:
  static constexpr int kMaxRounds = 64;

  GPoly to_poly(const Relation& rel) const {
    GPoly g;
    for (const RelTerm& t : rel) {
      Path p;
      p.src = pres_.arrows[t.arrows.front()].src;
      p.tgt = pres_.arrows[t.arrows.back()].tgt;
      p.arrows = t.arrows;
      add_term(g, p, t.coef);
    }
    sort_terms(g);
    return g;
  }

  void add_generator(GPoly g) {
    // Mixed-endpoint sums split into their (src,tgt) components; multiplying
    // by the trivial-path idempotents shows the components generate the same
    // two-sided ideal.
    std::map<std::pair<int, int>, GPoly> parts;
    for (auto& t : g.terms) parts[{t.first.src, t.first.tgt}].terms.push_back(t);
    for (auto& [key, part] : parts) {
      sort_terms(part);
      reduce(part);
      if (!part.terms.empty()) {
        make_monic(part);
        gb_.push_back(part);
      }
    }
  }

  static void add_term(GPoly& g, const Path& p, unsigned c) { g.terms.push_back({p, c}); }

  void sort_terms(GPoly& g) const {
    std::sort(g.terms.begin(), g.terms.end(),
              [](const auto& a, const auto& b) { return b.first < a.first; });
    // merge equal paths
    GPoly out;
    for (auto& t : g.terms) {
      if (!out.terms.empty() && out.terms.back().first == t.first)
        out.terms.back().second = f_.add(out.terms.back().second, t.second);
      else
        out.terms.push_back(t);
    }
    out.terms.erase(std::remove_if(out.terms.begin(), out.terms.end(),
                                   [](const auto& t) { return t.second == 0; }),
                    out.terms.end());
    g = std::move(out);
  }

  void make_monic(GPoly& g) const {
    unsigned c = f_.inv(g.terms[0].second);
    for (auto& t : g.terms) t.second = f_.mul(t.second, c);
  }

  // Position of needle's arrow word inside hay's, or -1.
  static int find_subword(const Path& hay, const Path& needle) {
    if (needle.arrows.size() > hay.arrows.size()) return -1;
    for (size_t i = 0; i + needle.arrows.size() <= hay.arrows.size(); ++i)
      if (std::equal(needle.arrows.begin(), needle.arrows.end(), hay.arrows.begin() + i))
        return static_cast<int>(i);
    return -1;
  }

  // p -= c * u * g * v where u, v frame the occurrence of lt(g) in `path` at
  // `pos`.  g is monic.
  void subtract_multiple(GPoly& p, const GPoly& g, Path path, int pos, unsigned c) const {
    size_t glen = g.terms[0].first.arrows.size();
    std::vector<int> u(path.arrows.begin(), path.arrows.begin() + pos);
    std::vector<int> v(path.arrows.begin() + pos + glen, path.arrows.end());
    for (const auto& [gp, gc] : g.terms) {
      Path np;
      np.arrows = u;
      np.arrows.insert(np.arrows.end(), gp.arrows.begin(), gp.arrows.end());
      np.arrows.insert(np.arrows.end(), v.begin(), v.end());
      np.src = path.src;
      np.tgt = path.tgt;
      add_term(p, np, f_.sub(0, f_.mul(c, gc)));
    }
    sort_terms(p);
  }

  std::vector<GPoly> overlaps(const GPoly& g1, const GPoly& g2) const {
    std::vector<GPoly> out;
    const Path& w1 = g1.terms[0].first;
    const Path& w2 = g2.terms[0].first;
    // suffix of w1 = prefix of w2 (proper, nonempty)
    for (size_t len = 1; len < w1.arrows.size() && len < w2.arrows.size(); ++len) {
      if (!std::equal(w2.arrows.begin(), w2.arrows.begin() + len,
                      w1.arrows.end() - len))
        continue;
      // S = g1 * c  -  a * g2, where w1 = a.b, w2 = b.c
      std::vector<int> a(w1.arrows.begin(), w1.arrows.end() - len);
      std::vector<int> c(w2.arrows.begin() + len, w2.arrows.end());
      GPoly s;
      for (const auto& [gp, gc] : g1.terms) {
        Path np;
        np.arrows = gp.arrows;
        np.arrows.insert(np.arrows.end(), c.begin(), c.end());
        np.src = w1.src;
        np.tgt = w2.tgt;
        add_term(s, np, gc);
      }
      for (const auto& [gp, gc] : g2.terms) {
        Path np;
        np.arrows = a;
        np.arrows.insert(np.arrows.end(), gp.arrows.begin(), gp.arrows.end());
        np.src = w1.src;
        np.tgt = w2.tgt;
        add_term(s, np, f_.sub(0, gc));
      }
      sort_terms(s);
      out.push_back(std::move(s));
    }
    // w2 a proper subword of w1
    if (w2.arrows.size() < w1.arrows.size()) {
      int pos = find_subword(w1, w2);
      if (pos >= 0) {
        GPoly s = g1;
        subtract_multiple(s, g2, w1, pos, g1.terms[0].second);
        out.push_back(std::move(s));
      }
    }
    return out;
  }

  const QuiverPresentation& pres_;
  Field f_;
  std::vector<GPoly> gb_;
};

AlgebraData AlgebraData::path_basis(const QuiverPresentation& pres) {
  AlgebraData a;
  a.pres_ = pres;
  GroebnerEngine engine(pres);
  a.gb_ = engine.complete();

  const int nv = pres.num_vertices();
  auto reducible = [&](const Path& p) {
    for (const GPoly& g : a.gb_) {
      const Path& lt = g.terms[0].first;
      if (lt.arrows.size() > p.arrows.size()) continue;
      for (size_t i = 0; i + lt.arrows.size() <= p.arrows.size(); ++i)
        if (std::equal(lt.arrows.begin(), lt.arrows.end(), p.arrows.begin() + i)) return true;
    }
    return false;
  };

  // Grow irreducible paths length by length; a length-(L+1) irreducible path
  // extends a length-L one, so an empty layer ends the search.
  std::vector<Path> layer;
  for (int v = 0; v < nv; ++v) {
    Path e;
    e.src = e.tgt = v;
    a.basis_.push_back(e);
    layer.push_back(e);
  }
  for (int len = 1; !layer.empty(); ++len) {
    if (len > pres.dim_cap)
      throw NotFiniteDimensional("basis paths still appear at length " +
                                 std::to_string(pres.dim_cap));
    std::vector<Path> next;
    for (const Path& p : layer)
      for (int x = 0; x < pres.num_arrows(); ++x) {
        if (pres.arrows[x].src != p.tgt) continue;
        Path np = p;
        np.arrows.push_back(x);
        np.tgt = pres.arrows[x].tgt;
        if (!reducible(np)) next.push_back(np);
      }
    std::sort(next.begin(), next.end());
    a.basis_.insert(a.basis_.end(), next.begin(), next.end());
    layer = std::move(next);
  }

  std::sort(a.basis_.begin(), a.basis_.end());
  for (int i = 0; i < a.dim(); ++i) a.basis_lookup_[a.basis_[i]] = i;
  a.trivial_.assign(nv, -1);
  a.by_source_.assign(nv, {});
  a.arrow_basis_.assign(pres.num_arrows(), -1);
  for (int i = 0; i < a.dim(); ++i) {
    const Path& p = a.basis_[i];
    if (p.length() == 0) a.trivial_[p.src] = i;
    if (p.length() == 1) a.arrow_basis_[p.arrows[0]] = i;
    a.by_source_[p.src].push_back(i);
  }

  // Full multiplication table.
  a.mul_table_.assign(static_cast<size_t>(a.dim()) * a.dim(), {});
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      const Path& pi = a.basis_[i];
      const Path& pj = a.basis_[j];
      if (pi.tgt != pj.src) continue;
      Path prod;
      prod.src = pi.src;
      prod.tgt = pj.tgt;
      prod.arrows = pi.arrows;
      prod.arrows.insert(prod.arrows.end(), pj.arrows.begin(), pj.arrows.end());
      a.mul_table_[static_cast<size_t>(i) * a.dim() + j] = a.reduce_path(prod);
    }
  return a;
}

AlgCombo AlgebraData::reduce_path(const Path& p) const {
  GroebnerEngine::GPoly poly;
  poly.terms.push_back({p, 1});
  GroebnerEngine engine(pres_);
  engine.adopt(gb_);
  engine.reduce(poly);
  AlgCombo out;
  for (const auto& [path, c] : poly.terms) {
    int idx = basis_index(path);
    if (idx < 0) throw Error("internal: reduced path not in basis");
    out.push_back({idx, c});
  }
  std::sort(out.begin(), out.end());
  return out;
}

int AlgebraData::basis_index(const Path& p) const {
  auto it = basis_lookup_.find(p);
  return it == basis_lookup_.end() ? -1 : it->second;
}

std::vector<long long> AlgebraData::cartan_column(int i) const {
  std::vector<long long> col(num_vertices(), 0);
  for (int b : by_source_[i]) ++col[basis_[b].tgt];
  return col;
}

Representation AlgebraData::projective(int vertex) const {
  const int nv = num_vertices();
  Representation r;
  r.field = field();
  r.dims.assign(nv, 0);
  // Position of each basis path inside its vertex block, in global order.
  std::map<int, int> pos;
  for (int b : by_source_[vertex]) pos[b] = r.dims[basis_[b].tgt]++;
  r.mats.reserve(num_arrows());
  for (int x = 0; x < num_arrows(); ++x) {
    int u = pres_.arrows[x].src, v = pres_.arrows[x].tgt;
    Mat m(field(), r.dims[v], r.dims[u]);
    for (int b : by_source_[vertex]) {
      if (basis_[b].tgt != u) continue;
      for (const auto& [target, coef] : mul_basis(b, arrow_basis_[x]))
        m.set(pos.at(target), pos.at(b), coef);
    }
    r.mats.push_back(std::move(m));
  }
  return r;
}

Representation AlgebraData::simple(int vertex) const {
  Representation r;
  r.field = field();
  r.dims.assign(num_vertices(), 0);
  r.dims[vertex] = 1;
  for (int x = 0; x < num_arrows(); ++x) {
    const ArrowDef& d = pres_.arrows[x];
    r.mats.push_back(Mat(field(), r.dims[d.tgt], r.dims[d.src]));
  }
  return r;
}

Representation standard_module(const AlgebraData& a, int vertex, StandardKind kind) {
  if (vertex < 0 || vertex >= a.num_vertices())
    throw UnknownVertexOrArrow("vertex index " + std::to_string(vertex));
  return kind == StandardKind::kProjective ? a.projective(vertex) : a.simple(vertex);
}

}  // namespace hallbridge
