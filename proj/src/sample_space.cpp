#include "rvdom/sample_space.hpp"

#include <algorithm>
#include <set>

#include "rvdom/errors.hpp"

namespace rvdom {

const char* space_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::cantor: return "cantor";
    case SpaceKind::cantor_zero: return "cantor0";
    case SpaceKind::unit_closed: return "unit";
    case SpaceKind::unit_open: return "unit0";
  }
  return "?";
}

std::optional<SpaceKind> parse_space(const std::string& s) {
  if (s == "cantor") return SpaceKind::cantor;
  if (s == "cantor0") return SpaceKind::cantor_zero;
  if (s == "unit") return SpaceKind::unit_closed;
  if (s == "unit0") return SpaceKind::unit_open;
  return std::nullopt;
}

BasicOpen BasicOpen::empty(SpaceKind kind) { return BasicOpen(kind); }

BasicOpen BasicOpen::whole(SpaceKind kind) {
  if (is_cantor_kind(kind)) return cylinders(kind, {""});
  return intervals(kind, {{Dyadic(0), Dyadic(1)}});
}

BasicOpen BasicOpen::cylinders(SpaceKind kind, std::vector<std::string> in) {
  if (!is_cantor_kind(kind)) fail(errc::kind_mismatch, "cylinders on a unit space");
  for (const std::string& c : in)
    for (char ch : c)
      if (ch != '0' && ch != '1') fail(errc::bad_digit, "cylinder digit '" + std::string(1, ch) + "'");
  std::set<std::string> s(in.begin(), in.end());
  // antichain: drop anything with a proper prefix present
  for (auto it = s.begin(); it != s.end();) {
    bool covered = false;
    for (size_t len = 0; len < it->size() && !covered; ++len)
      if (s.count(it->substr(0, len))) covered = true;
    it = covered ? s.erase(it) : std::next(it);
  }
  // merge sibling pairs to a fixpoint
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = s.begin(); it != s.end(); ++it) {
      if (it->empty() || it->back() != '0') continue;
      std::string sib = *it;
      sib.back() = '1';
      if (s.count(sib)) {
        std::string parent = it->substr(0, it->size() - 1);
        s.erase(*it);
        s.erase(sib);
        s.insert(parent);
        changed = true;
        break;
      }
    }
  }
  BasicOpen o(kind);
  o.cyls_.assign(s.begin(), s.end());
  return o;
}

BasicOpen BasicOpen::intervals(SpaceKind kind, std::vector<std::pair<Dyadic, Dyadic>> in) {
  if (!is_unit_kind(kind)) fail(errc::kind_mismatch, "intervals on a Cantor space");
  std::vector<std::pair<Dyadic, Dyadic>> ivs;
  for (auto& [lo, hi] : in) {
    if (lo.sign() < 0 || Dyadic(1) < hi) fail(errc::domain_violation, "interval outside [0,1]");
    if (lo < hi) ivs.emplace_back(lo, hi);
  }
  std::sort(ivs.begin(), ivs.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second < b.second;
  });
  BasicOpen o(kind);
  for (auto& iv : ivs) {
    if (!o.ivs_.empty() && iv.first <= o.ivs_.back().second)
      o.ivs_.back().second = max(o.ivs_.back().second, iv.second);
    else
      o.ivs_.push_back(iv);
  }
  return o;
}

BasicOpen BasicOpen::cell(SpaceKind kind, unsigned depth, unsigned long index) {
  if (is_cantor_kind(kind)) {
    std::string w(depth, '0');
    for (unsigned b = 0; b < depth; ++b)
      if (index & (1UL << (depth - 1 - b))) w[b] = '1';
    return cylinders(kind, {w});
  }
  return intervals(kind, {{Dyadic(static_cast<long>(index), depth),
                           Dyadic(static_cast<long>(index) + 1, depth)}});
}

Dyadic BasicOpen::measure() const {
  Dyadic m(0);
  for (const std::string& c : cyls_) m += Dyadic::pow2(-static_cast<long>(c.size()));
  for (const auto& [lo, hi] : ivs_) m += hi - lo;
  return m;
}

std::string BasicOpen::str() const {
  if (is_empty()) return "empty";
  std::string out;
  for (const std::string& c : cyls_) {
    if (!out.empty()) out += "+";
    out += "cyl:" + (c.empty() ? std::string("eps") : c);
  }
  for (const auto& [lo, hi] : ivs_) {
    if (!out.empty()) out += "+";
    out += "(" + lo.str() + "," + hi.str() + ")";
  }
  return out;
}

std::optional<BasicOpen> BasicOpen::parse(const std::string& s, SpaceKind kind) {
  if (s == "empty") return empty(kind);
  std::vector<std::string> cyls;
  std::vector<std::pair<Dyadic, Dyadic>> ivs;
  size_t i = 0;
  while (i < s.size()) {
    size_t plus = s.find('+', i);
    std::string part = s.substr(i, plus == std::string::npos ? std::string::npos : plus - i);
    if (part.rfind("cyl:", 0) == 0) {
      std::string w = part.substr(4);
      if (w == "eps") w = "";
      for (char c : w)
        if (c != '0' && c != '1') return std::nullopt;
      cyls.push_back(w);
    } else if (!part.empty() && part.front() == '(' && part.back() == ')') {
      size_t comma = part.find(',');
      if (comma == std::string::npos) return std::nullopt;
      auto lo = Dyadic::parse(part.substr(1, comma - 1));
      auto hi = Dyadic::parse(part.substr(comma + 1, part.size() - comma - 2));
      if (!lo || !hi) return std::nullopt;
      ivs.emplace_back(*lo, *hi);
    } else {
      return std::nullopt;
    }
    if (plus == std::string::npos) break;
    i = plus + 1;
  }
  if (!cyls.empty() && !ivs.empty()) return std::nullopt;
  if (is_cantor_kind(kind)) {
    if (!ivs.empty()) return std::nullopt;
    return cylinders(kind, std::move(cyls));
  }
  if (!cyls.empty()) return std::nullopt;
  return intervals(kind, std::move(ivs));
}

namespace {

// maximal cylinders under `prefix` not covered by the antichain `cover`
void cantor_complement_rec(const std::string& prefix, const std::vector<std::string>& cover,
                           std::vector<std::string>& out) {
  for (const std::string& w : cover)
    if (w.size() <= prefix.size() && prefix.compare(0, w.size(), w) == 0) return;  // covered
  bool any_below = false;
  for (const std::string& w : cover)
    if (w.size() > prefix.size() && w.compare(0, prefix.size(), prefix) == 0) any_below = true;
  if (!any_below) {
    out.push_back(prefix);
    return;
  }
  cantor_complement_rec(prefix + "0", cover, out);
  cantor_complement_rec(prefix + "1", cover, out);
}

}  // namespace

BasicOpen boolean(BoolOp op, const BasicOpen& A, const BasicOpen& B) {
  if (A.kind() != B.kind()) fail(errc::kind_mismatch, "boolean on different space kinds");
  SpaceKind k = A.kind();
  if (is_cantor_kind(k)) {
    switch (op) {
      case BoolOp::union_: {
        std::vector<std::string> all = A.cyls();
        all.insert(all.end(), B.cyls().begin(), B.cyls().end());
        return BasicOpen::cylinders(k, std::move(all));
      }
      case BoolOp::intersect: {
        std::vector<std::string> out;
        for (const std::string& u : A.cyls())
          for (const std::string& v : B.cyls()) {
            const std::string& shorter = u.size() <= v.size() ? u : v;
            const std::string& longer = u.size() <= v.size() ? v : u;
            if (longer.compare(0, shorter.size(), shorter) == 0) out.push_back(longer);
          }
        return BasicOpen::cylinders(k, std::move(out));
      }
      case BoolOp::complement_interior: {
        std::vector<std::string> out;
        cantor_complement_rec("", A.cyls(), out);
        return BasicOpen::cylinders(k, std::move(out));
      }
    }
  }
  switch (op) {
    case BoolOp::union_: {
      auto all = A.ivals();
      all.insert(all.end(), B.ivals().begin(), B.ivals().end());
      return BasicOpen::intervals(k, std::move(all));
    }
    case BoolOp::intersect: {
      std::vector<std::pair<Dyadic, Dyadic>> out;
      for (const auto& [a1, b1] : A.ivals())
        for (const auto& [a2, b2] : B.ivals()) {
          Dyadic lo = max(a1, a2), hi = min(b1, b2);
          if (lo < hi) out.emplace_back(lo, hi);
        }
      return BasicOpen::intervals(k, std::move(out));
    }
    case BoolOp::complement_interior: {
      std::vector<std::pair<Dyadic, Dyadic>> out;
      Dyadic cur(0);
      for (const auto& [lo, hi] : A.ivals()) {
        if (cur < lo) out.emplace_back(cur, lo);
        cur = hi;
      }
      if (cur < Dyadic(1)) out.emplace_back(cur, Dyadic(1));
      return BasicOpen::intervals(k, std::move(out));
    }
  }
  fail(errc::kind_mismatch, "bad boolean op");
}

bool open_way_below(const BasicOpen& U, const BasicOpen& V) {
  if (U.kind() != V.kind()) fail(errc::kind_mismatch, "way_below on different space kinds");
  if (U.kind() == SpaceKind::cantor_zero)
    fail(errc::unsupported, "no way-below criterion for the Cantor-zero open lattice");
  if (U.kind() == SpaceKind::cantor) {
    // clopens are compact: U << V iff U is a subset of V
    for (const std::string& u : U.cyls()) {
      bool covered = false;
      for (const std::string& v : V.cyls())
        if (v.size() <= u.size() && u.compare(0, v.size(), v) == 0) covered = true;
      if (!covered) return false;
    }
    return true;
  }
  // unit kinds: the closure [a,b] of each component must avoid 0 and 1 and
  // land strictly inside one component of V
  for (const auto& [a, b] : U.ivals()) {
    bool inside = false;
    for (const auto& [c, d] : V.ivals())
      if (c < a && b < d) inside = true;
    if (!inside) return false;
  }
  return true;
}

std::pair<std::string, std::string> split_indices(const std::string& s) {
  std::string even, odd;
  for (size_t i = 0; i < s.size(); ++i) (i % 2 == 0 ? even : odd) += s[i];
  return {even, odd};
}

}  // namespace rvdom
