#include "rvdom/domain.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace rvdom {

// ---------------------------------------------------------------------------
// Poset
// ---------------------------------------------------------------------------

Poset Poset::make(std::vector<std::string> names,
                  std::vector<std::pair<std::string, std::string>> hasse_edges,
                  const std::string& bottom) {
  Poset p;
  p.names_ = std::move(names);
  std::map<std::string, int> index;
  for (int i = 0; i < p.size(); ++i) {
    if (index.count(p.names_[i])) fail(errc::domain_violation, "duplicate name " + p.names_[i]);
    index[p.names_[i]] = i;
  }
  auto idx = [&](const std::string& n) {
    auto it = index.find(n);
    if (it == index.end()) fail(errc::domain_violation, "unknown element " + n);
    return it->second;
  };
  p.bottom_ = idx(bottom);
  int n = p.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (auto& [lo, hi] : hasse_edges) adj[idx(lo)][idx(hi)] = true;
  // transitive-reflexive closure; a strict cycle makes some pair mutually
  // reachable, caught below
  p.leq_ = adj;
  for (int i = 0; i < n; ++i) p.leq_[i][i] = true;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (p.leq_[i][k])
        for (int j = 0; j < n; ++j)
          if (p.leq_[k][j]) p.leq_[i][j] = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && p.leq_[i][j] && p.leq_[j][i])
        fail(errc::domain_violation, "cyclic order: " + p.names_[i] + " and " + p.names_[j]);
  for (int i = 0; i < n; ++i)
    if (!p.leq_[p.bottom_][i])
      fail(errc::domain_violation, "bottom not below " + p.names_[i]);
  // bounded completeness: every bounded pair needs a least upper bound
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      std::vector<int> uppers;
      for (int u = 0; u < n; ++u)
        if (p.leq_[a][u] && p.leq_[b][u]) uppers.push_back(u);
      if (uppers.empty()) continue;
      int least = -1;
      for (int u : uppers) {
        bool le_all = true;
        for (int v : uppers)
          if (!p.leq_[u][v]) le_all = false;
        if (le_all) least = u;
      }
      if (least < 0)
        fail(errc::domain_violation,
             "not bounded complete: {" + p.names_[a] + "," + p.names_[b] + "} has no lub");
    }
  return p;
}

Poset Poset::parse(const std::string& text) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> edges;
  std::string bottom;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "elem" || kw == "elems") {
      std::string n;
      while (ls >> n) names.push_back(n);
    } else if (kw == "edge") {
      std::string lo, hi;
      if (!(ls >> lo >> hi)) fail(errc::parse_error, "edge needs two names");
      edges.emplace_back(lo, hi);
    } else if (kw == "bottom") {
      if (!(ls >> bottom)) fail(errc::parse_error, "bottom needs a name");
    } else {
      fail(errc::parse_error, "unknown poset directive " + kw);
    }
  }
  if (bottom.empty()) fail(errc::parse_error, "poset description lacks a bottom line");
  return make(std::move(names), std::move(edges), bottom);
}

int Poset::index(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (names_[i] == name) return i;
  return -1;
}

std::optional<int> Poset::join(int a, int b) const {
  int n = size();
  std::vector<int> uppers;
  for (int u = 0; u < n; ++u)
    if (leq_[a][u] && leq_[b][u]) uppers.push_back(u);
  if (uppers.empty()) return std::nullopt;
  for (int u : uppers) {
    bool le_all = true;
    for (int v : uppers)
      if (!leq_[u][v]) le_all = false;
    if (le_all) return u;
  }
  return std::nullopt;  // unreachable for validated posets
}

int Poset::inf(int a, int b) const {
  int n = size();
  int best = bottom_;
  for (int z = 0; z < n; ++z)
    if (leq_[z][a] && leq_[z][b] && leq_[best][z]) best = z;
  // best is the fold of joins over lower bounds; validated posets make the
  // set of common lower bounds directed, so a maximum exists
  for (int z = 0; z < n; ++z)
    if (leq_[z][a] && leq_[z][b] && !leq_[z][best])
      fail(errc::domain_violation, "no greatest lower bound");
  return best;
}

// ---------------------------------------------------------------------------
// DomainHandle
// ---------------------------------------------------------------------------

DomainHandle DomainHandle::finite_poset(Poset p) {
  auto n = std::make_shared<Node>();
  n->kind = DomainKind::finite_poset;
  n->poset = std::make_shared<const Poset>(std::move(p));
  return DomainHandle(n);
}

DomainHandle DomainHandle::interval_real() {
  auto n = std::make_shared<Node>();
  n->kind = DomainKind::interval_real;
  return DomainHandle(n);
}

DomainHandle DomainHandle::interval_unit() {
  auto n = std::make_shared<Node>();
  n->kind = DomainKind::interval_unit;
  return DomainHandle(n);
}

DomainHandle DomainHandle::product(DomainHandle left, DomainHandle right) {
  auto n = std::make_shared<Node>();
  n->kind = DomainKind::product;
  n->left = left.node_;
  n->right = right.node_;
  return DomainHandle(n);
}

bool DomainHandle::operator==(const DomainHandle& o) const {
  if (node_ == o.node_) return true;
  if (node_->kind != o.node_->kind) return false;
  switch (node_->kind) {
    case DomainKind::finite_poset: return *node_->poset == *o.node_->poset;
    case DomainKind::interval_real:
    case DomainKind::interval_unit: return true;
    case DomainKind::product: return left() == o.left() && right() == o.right();
  }
  return false;
}

std::string DomainHandle::str() const {
  switch (kind()) {
    case DomainKind::finite_poset: return "poset<" + std::to_string(poset().size()) + ">";
    case DomainKind::interval_real: return "ireal";
    case DomainKind::interval_unit: return "iunit";
    case DomainKind::product: return "(" + left().str() + " x " + right().str() + ")";
  }
  return "?";
}

namespace {

DomainHandle parse_spec_at(const std::string& s, size_t& i);

void skip_ws(const std::string& s, size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

DomainHandle parse_spec_at(const std::string& s, size_t& i) {
  skip_ws(s, i);
  if (i < s.size() && s[i] == '(') {
    ++i;
    DomainHandle l = parse_spec_at(s, i);
    skip_ws(s, i);
    if (i >= s.size() || s[i] != 'x') fail(errc::parse_error, "expected 'x' in product spec");
    ++i;
    DomainHandle r = parse_spec_at(s, i);
    skip_ws(s, i);
    if (i >= s.size() || s[i] != ')') fail(errc::parse_error, "expected ')' in product spec");
    ++i;
    return DomainHandle::product(l, r);
  }
  size_t start = i;
  while (i < s.size() && s[i] != ' ' && s[i] != ')' && s[i] != 'x') ++i;
  std::string word = s.substr(start, i - start);
  if (word == "ireal") return DomainHandle::interval_real();
  if (word == "iunit") return DomainHandle::interval_unit();
  if (word.rfind("poset:", 0) == 0) {
    std::ifstream f(word.substr(6));
    if (!f) fail(errc::parse_error, "cannot open poset file " + word.substr(6));
    std::stringstream ss;
    ss << f.rdbuf();
    return DomainHandle::finite_poset(Poset::parse(ss.str()));
  }
  fail(errc::parse_error, "bad domain spec '" + word + "'");
}

}  // namespace

DomainHandle DomainHandle::parse_spec(const std::string& spec) {
  size_t i = 0;
  DomainHandle d = parse_spec_at(spec, i);
  skip_ws(spec, i);
  if (i != spec.size()) fail(errc::parse_error, "trailing input in domain spec");
  return d;
}

// ---------------------------------------------------------------------------
// Element
// ---------------------------------------------------------------------------

Element Element::poset_elem(std::string name) {
  Element e;
  e.v_ = std::move(name);
  return e;
}

Element Element::interval(DyInterval iv) {
  Element e;
  e.v_ = std::optional<DyInterval>(std::move(iv));
  return e;
}

Element Element::interval_bottom() {
  Element e;
  e.v_ = std::optional<DyInterval>(std::nullopt);
  return e;
}

Element Element::pair(Element first, Element second) {
  Element e;
  e.v_ = std::make_shared<const PairData>(PairData{std::move(first), std::move(second)});
  return e;
}

const Element& Element::first() const {
  return std::get<std::shared_ptr<const PairData>>(v_)->first;
}
const Element& Element::second() const {
  return std::get<std::shared_ptr<const PairData>>(v_)->second;
}

bool Element::operator==(const Element& o) const {
  if (v_.index() != o.v_.index()) return false;
  if (is_poset()) return poset_name() == o.poset_name();
  if (is_interval()) return ival() == o.ival();
  return first() == o.first() && second() == o.second();
}

bool Element::operator<(const Element& o) const {
  if (v_.index() != o.v_.index()) return v_.index() < o.v_.index();
  if (is_poset()) return poset_name() < o.poset_name();
  if (is_interval()) {
    const auto& a = ival();
    const auto& b = o.ival();
    if (!a || !b) return !a && b;  // bottom sorts first
    if (a->lo != b->lo) return a->lo < b->lo;
    return a->hi < b->hi;
  }
  if (first() == o.first()) return second() < o.second();
  return first() < o.first();
}

std::string Element::str() const {
  if (is_poset()) return poset_name();
  if (is_interval()) return ival() ? ival()->str() : "bot";
  return "(" + first().str() + "," + second().str() + ")";
}

namespace {

std::optional<Element> parse_element_at(const std::string& s, size_t& i, const DomainHandle& dom);

std::optional<Element> parse_element_at(const std::string& s, size_t& i, const DomainHandle& dom) {
  skip_ws(s, i);
  if (i >= s.size()) return std::nullopt;
  if (dom.kind() == DomainKind::product) {
    if (s[i] != '(') return std::nullopt;
    ++i;
    auto l = parse_element_at(s, i, dom.left());
    skip_ws(s, i);
    if (!l || i >= s.size() || s[i] != ',') return std::nullopt;
    ++i;
    auto r = parse_element_at(s, i, dom.right());
    skip_ws(s, i);
    if (!r || i >= s.size() || s[i] != ')') return std::nullopt;
    ++i;
    return Element::pair(std::move(*l), std::move(*r));
  }
  if (dom.kind() == DomainKind::finite_poset) {
    size_t start = i;
    while (i < s.size() && (isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    if (i == start) return std::nullopt;
    std::string name = s.substr(start, i - start);
    if (dom.poset().index(name) < 0) return std::nullopt;
    return Element::poset_elem(name);
  }
  // interval domains
  if (s.compare(i, 3, "bot") == 0) {
    i += 3;
    return Element::interval_bottom();
  }
  if (s[i] != '[') return std::nullopt;
  size_t close = s.find(']', i);
  if (close == std::string::npos) return std::nullopt;
  auto iv = DyInterval::parse(s.substr(i, close - i + 1));
  if (!iv) return std::nullopt;
  i = close + 1;
  return Element::interval(std::move(*iv));
}

}  // namespace

std::optional<Element> Element::parse(const std::string& text, const DomainHandle& dom) {
  size_t i = 0;
  auto e = parse_element_at(text, i, dom);
  if (!e) return std::nullopt;
  skip_ws(text, i);
  if (i != text.size()) return std::nullopt;
  return canon_element(dom, *e);
}

// ---------------------------------------------------------------------------
// Domain operations
// ---------------------------------------------------------------------------

static const DyInterval kUnit{Dyadic(0), Dyadic(1)};

Element canon_element(const DomainHandle& D, const Element& e) {
  switch (D.kind()) {
    case DomainKind::finite_poset:
      if (!e.is_poset() || D.poset().index(e.poset_name()) < 0)
        fail(errc::element_domain_mismatch, e.str() + " not in " + D.str());
      return e;
    case DomainKind::interval_real:
      if (!e.is_interval()) fail(errc::element_domain_mismatch, e.str() + " not in ireal");
      return e;
    case DomainKind::interval_unit: {
      if (!e.is_interval()) fail(errc::element_domain_mismatch, e.str() + " not in iunit");
      if (!e.ival()) return Element::interval(kUnit);
      const DyInterval& iv = *e.ival();
      if (iv.lo.sign() < 0 || Dyadic(1) < iv.hi)
        fail(errc::element_domain_mismatch, iv.str() + " outside [0,1]");
      return e;
    }
    case DomainKind::product: {
      if (!e.is_pair()) fail(errc::element_domain_mismatch, e.str() + " not a pair");
      return Element::pair(canon_element(D.left(), e.first()),
                           canon_element(D.right(), e.second()));
    }
  }
  fail(errc::element_domain_mismatch, "bad domain");
}

Element bottom_element(const DomainHandle& D) {
  switch (D.kind()) {
    case DomainKind::finite_poset: return Element::poset_elem(D.poset().name(D.poset().bottom()));
    case DomainKind::interval_real: return Element::interval_bottom();
    case DomainKind::interval_unit: return Element::interval(kUnit);
    case DomainKind::product:
      return Element::pair(bottom_element(D.left()), bottom_element(D.right()));
  }
  fail(errc::element_domain_mismatch, "bad domain");
}

bool below(const DomainHandle& D, const Element& a, const Element& b) {
  switch (D.kind()) {
    case DomainKind::finite_poset: {
      const Poset& p = D.poset();
      int ia = p.index(a.poset_name()), ib = p.index(b.poset_name());
      if (ia < 0 || ib < 0) fail(errc::element_domain_mismatch, "element not in poset");
      return p.leq(ia, ib);
    }
    case DomainKind::interval_real: {
      if (!a.ival()) return true;
      if (!b.ival()) return false;
      return a.ival()->contains(*b.ival());
    }
    case DomainKind::interval_unit: return a.ival()->contains(*b.ival());
    case DomainKind::product:
      return below(D.left(), a.first(), b.first()) && below(D.right(), a.second(), b.second());
  }
  fail(errc::element_domain_mismatch, "bad domain");
}

bool way_below(const DomainHandle& D, const Element& a, const Element& b) {
  switch (D.kind()) {
    case DomainKind::finite_poset: return below(D, a, b);
    case DomainKind::interval_real: {
      if (!a.ival()) return true;
      if (!b.ival()) return false;
      return a.ival()->lo < b.ival()->lo && b.ival()->hi < a.ival()->hi;
    }
    case DomainKind::interval_unit: {
      const DyInterval& x = *a.ival();
      const DyInterval& y = *b.ival();
      bool lo_ok = x.lo < y.lo || x.lo.is_zero();
      bool hi_ok = y.hi < x.hi || x.hi == Dyadic(1);
      return lo_ok && hi_ok;
    }
    case DomainKind::product:
      return way_below(D.left(), a.first(), b.first()) &&
             way_below(D.right(), a.second(), b.second());
  }
  fail(errc::element_domain_mismatch, "bad domain");
}

std::optional<Element> join(const DomainHandle& D, const Element& a, const Element& b) {
  switch (D.kind()) {
    case DomainKind::finite_poset: {
      const Poset& p = D.poset();
      auto j = p.join(p.index(a.poset_name()), p.index(b.poset_name()));
      if (!j) return std::nullopt;
      return Element::poset_elem(p.name(*j));
    }
    case DomainKind::interval_real: {
      if (!a.ival()) return b;
      if (!b.ival()) return a;
      Dyadic lo = max(a.ival()->lo, b.ival()->lo);
      Dyadic hi = min(a.ival()->hi, b.ival()->hi);
      if (hi < lo) return std::nullopt;
      return Element::interval(DyInterval(lo, hi));
    }
    case DomainKind::interval_unit: {
      Dyadic lo = max(a.ival()->lo, b.ival()->lo);
      Dyadic hi = min(a.ival()->hi, b.ival()->hi);
      if (hi < lo) return std::nullopt;
      return Element::interval(DyInterval(lo, hi));
    }
    case DomainKind::product: {
      auto l = join(D.left(), a.first(), b.first());
      auto r = join(D.right(), a.second(), b.second());
      if (!l || !r) return std::nullopt;
      return Element::pair(std::move(*l), std::move(*r));
    }
  }
  fail(errc::element_domain_mismatch, "bad domain");
}

Element inf2(const DomainHandle& D, const Element& a, const Element& b) {
  const Element xs[2] = {a, b};
  return inf(D, xs);
}

Element inf(const DomainHandle& D, std::span<const Element> xs) {
  if (xs.empty()) fail(errc::precondition_failed, "inf of empty list");
  switch (D.kind()) {
    case DomainKind::finite_poset: {
      const Poset& p = D.poset();
      int acc = p.index(xs[0].poset_name());
      for (size_t i = 1; i < xs.size(); ++i) acc = p.inf(acc, p.index(xs[i].poset_name()));
      return Element::poset_elem(p.name(acc));
    }
    case DomainKind::interval_real: {
      Dyadic lo, hi;
      bool first = true;
      for (const Element& e : xs) {
        if (!e.ival()) return Element::interval_bottom();
        if (first) {
          lo = e.ival()->lo;
          hi = e.ival()->hi;
          first = false;
        } else {
          lo = min(lo, e.ival()->lo);
          hi = max(hi, e.ival()->hi);
        }
      }
      return Element::interval(DyInterval(lo, hi));
    }
    case DomainKind::interval_unit: {
      Dyadic lo = xs[0].ival()->lo, hi = xs[0].ival()->hi;
      for (size_t i = 1; i < xs.size(); ++i) {
        lo = min(lo, xs[i].ival()->lo);
        hi = max(hi, xs[i].ival()->hi);
      }
      return Element::interval(DyInterval(lo, hi));
    }
    case DomainKind::product: {
      std::vector<Element> ls, rs;
      ls.reserve(xs.size());
      rs.reserve(xs.size());
      for (const Element& e : xs) {
        ls.push_back(e.first());
        rs.push_back(e.second());
      }
      return Element::pair(inf(D.left(), ls), inf(D.right(), rs));
    }
  }
  fail(errc::element_domain_mismatch, "bad domain");
}

std::vector<Element> basis_enum(const DomainHandle& D, unsigned level) {
  std::vector<Element> out;
  switch (D.kind()) {
    case DomainKind::finite_poset:
      for (int i = 0; i < D.poset().size(); ++i) out.push_back(Element::poset_elem(D.poset().name(i)));
      return out;
    case DomainKind::interval_unit: {
      long n = 1L << level;
      for (long i = 0; i <= n; ++i)
        for (long j = i; j <= n; ++j)
          out.push_back(Element::interval(
              DyInterval(Dyadic(i, 0).ldexp(-(long)level), Dyadic(j, 0).ldexp(-(long)level))));
      return out;
    }
    case DomainKind::interval_real: {
      out.push_back(Element::interval_bottom());
      long n = 1L << level;
      long lo = -n * n, hi = n * n;  // endpoints i/2^level in [-2^level, 2^level]
      for (long i = lo; i <= hi; ++i)
        for (long j = i; j <= hi; ++j)
          out.push_back(Element::interval(
              DyInterval(Dyadic(i, 0).ldexp(-(long)level), Dyadic(j, 0).ldexp(-(long)level))));
      return out;
    }
    case DomainKind::product: {
      auto ls = basis_enum(D.left(), level);
      auto rs = basis_enum(D.right(), level);
      for (const Element& l : ls)
        for (const Element& r : rs) out.push_back(Element::pair(l, r));
      return out;
    }
  }
  fail(errc::element_domain_mismatch, "bad domain");
}

}  // namespace rvdom
