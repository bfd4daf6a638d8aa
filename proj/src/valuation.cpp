#include "rvdom/valuation.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

#include "rvdom/maxflow.hpp"

namespace rvdom {

// ---------------------------------------------------------------------------
// SimpleValuation
// ---------------------------------------------------------------------------

SimpleValuation SimpleValuation::make(DomainHandle domain,
                                      std::vector<std::pair<Dyadic, Element>> atoms) {
  std::map<Element, Dyadic> merged;
  for (auto& [w, e] : atoms) {
    if (w.sign() < 0) fail(errc::precondition_failed, "negative weight " + w.str());
    if (w.is_zero()) continue;
    Element c = canon_element(domain, e);
    auto [it, fresh] = merged.emplace(std::move(c), w);
    if (!fresh) it->second += w;
  }
  Dyadic total(0);
  for (auto& [e, w] : merged) total += w;
  if (total != Dyadic(1))
    fail(errc::precondition_failed, "weights sum to " + total.str() + ", expected 1");
  std::vector<std::pair<Dyadic, Element>> out;
  out.reserve(merged.size());
  for (auto& [e, w] : merged) out.emplace_back(w, e);
  return SimpleValuation(std::move(domain), std::move(out));
}

SimpleValuation SimpleValuation::point(DomainHandle domain, Element e) {
  std::vector<std::pair<Dyadic, Element>> atoms;
  atoms.emplace_back(Dyadic(1), std::move(e));
  return make(std::move(domain), std::move(atoms));
}

int SimpleValuation::bottom_atom() const {
  Element bot = bottom_element(domain_);
  for (size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i].second == bot) return static_cast<int>(i);
  return -1;
}

bool SimpleValuation::operator==(const SimpleValuation& o) const {
  return domain_ == o.domain_ && atoms_ == o.atoms_;
}

std::string SimpleValuation::str() const {
  std::string out;
  for (const auto& [w, e] : atoms_) {
    if (!out.empty()) out += " + ";
    out += w.str() + "*delta(" + e.str() + ")";
  }
  return out;
}

std::optional<SimpleValuation> SimpleValuation::parse(const std::string& s,
                                                      const DomainHandle& dom) {
  std::vector<std::pair<Dyadic, Element>> atoms;
  size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  };
  while (true) {
    skip();
    size_t star = s.find("*delta(", i);
    if (star == std::string::npos) return std::nullopt;
    auto w = Dyadic::parse(s.substr(i, star - i));
    if (!w) return std::nullopt;
    size_t open = star + 7, depth = 1, j = open;
    while (j < s.size() && depth > 0) {
      if (s[j] == '(') ++depth;
      if (s[j] == ')') --depth;
      ++j;
    }
    if (depth != 0) return std::nullopt;
    auto e = Element::parse(s.substr(open, j - 1 - open), dom);
    if (!e) return std::nullopt;
    atoms.emplace_back(*w, *e);
    i = j;
    skip();
    if (i == s.size()) break;
    if (s[i] != '+') return std::nullopt;
    ++i;
  }
  try {
    return make(dom, std::move(atoms));
  } catch (const error&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Flow
// ---------------------------------------------------------------------------

Dyadic Flow::row_sum(int i) const {
  Dyadic s(0);
  for (const auto& [ij, t] : entries)
    if (ij.first == i) s += t;
  return s;
}

Dyadic Flow::col_sum(int j) const {
  Dyadic s(0);
  for (const auto& [ij, t] : entries)
    if (ij.second == j) s += t;
  return s;
}

std::string Flow::str(const SimpleValuation& alpha, const SimpleValuation& beta) const {
  std::string out;
  for (const auto& [ij, t] : entries) {
    if (!out.empty()) out += "; ";
    out += "t(" + alpha.atoms()[ij.first].second.str() + " -> " +
           beta.atoms()[ij.second].second.str() + ") = " + t.str();
  }
  return out;
}

void validate_flow(const SimpleValuation& alpha, const SimpleValuation& beta, const Flow& flow,
                   bool way_below_edges, int bottom_row) {
  const DomainHandle& D = alpha.domain();
  for (const auto& [ij, t] : flow.entries) {
    auto [i, j] = ij;
    if (i < 0 || j < 0 || i >= static_cast<int>(alpha.size()) ||
        j >= static_cast<int>(beta.size()))
      fail(errc::precondition_failed, "flow index out of range");
    if (t.sign() <= 0 || Dyadic(1) < t)
      fail(errc::precondition_failed, "flow entry outside (0,1]");
    const Element& c = alpha.atoms()[i].second;
    const Element& d = beta.atoms()[j].second;
    bool ok = way_below_edges ? way_below(D, c, d) : below(D, c, d);
    if (!ok)
      fail(errc::precondition_failed,
           "flow edge " + c.str() + " -> " + d.str() + " violates the order");
  }
  for (size_t i = 0; i < alpha.size(); ++i)
    if (flow.row_sum(static_cast<int>(i)) != alpha.atoms()[i].first)
      fail(errc::precondition_failed, "row sum mismatch at atom " + std::to_string(i));
  for (size_t j = 0; j < beta.size(); ++j)
    if (flow.col_sum(static_cast<int>(j)) != beta.atoms()[j].first)
      fail(errc::precondition_failed, "column sum mismatch at atom " + std::to_string(j));
  if (bottom_row >= 0)
    for (size_t j = 0; j < beta.size(); ++j)
      if (!flow.entries.count({bottom_row, static_cast<int>(j)}))
        fail(errc::precondition_failed, "bottom row not strictly positive");
}

// ---------------------------------------------------------------------------
// Order decisions via exact transportation feasibility
// ---------------------------------------------------------------------------

namespace {

unsigned common_denominator_exp(const SimpleValuation& a, const SimpleValuation& b) {
  unsigned N = 0;
  for (const auto& [w, e] : a.atoms()) N = std::max(N, w.exp());
  for (const auto& [w, e] : b.atoms()) N = std::max(N, w.exp());
  return N;
}

long long scaled_weight(const Dyadic& w, unsigned N) {
  return static_cast<long long>(BigInt(w.num() << (N - w.exp())));
}

}  // namespace

OrderResult val_leq(const SimpleValuation& alpha, const SimpleValuation& beta) {
  if (!(alpha.domain() == beta.domain()))
    fail(errc::domain_mismatch, "valuations on different domains");
  const DomainHandle& D = alpha.domain();
  int m = static_cast<int>(alpha.size()), n = static_cast<int>(beta.size());
  unsigned N = common_denominator_exp(alpha, beta);
  if (N > 60) fail(errc::precondition_failed, "weight denominators beyond 2^60");
  long long total = 1LL << N;

  MaxFlow mf(m + n + 2);
  int src = m + n, snk = m + n + 1;
  for (int i = 0; i < m; ++i) mf.add_edge(src, i, scaled_weight(alpha.atoms()[i].first, N));
  for (int j = 0; j < n; ++j) mf.add_edge(m + j, snk, scaled_weight(beta.atoms()[j].first, N));
  std::map<std::pair<int, int>, int> edge_ids;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (below(D, alpha.atoms()[i].second, beta.atoms()[j].second))
        edge_ids[{i, j}] = mf.add_edge(i, m + j, total);
  if (mf.run(src, snk) != total) return {};

  Flow flow;
  for (const auto& [ij, id] : edge_ids) {
    long long f = mf.flow_on(id);
    if (f > 0) flow.entries[ij] = Dyadic(f, N);
  }
  return {true, std::move(flow)};
}

OrderResult val_way_below(const SimpleValuation& alpha, const SimpleValuation& beta) {
  if (!(alpha.domain() == beta.domain()))
    fail(errc::domain_mismatch, "valuations on different domains");
  const DomainHandle& D = alpha.domain();
  int i0 = alpha.bottom_atom();
  if (i0 < 0) return {};
  int m = static_cast<int>(alpha.size()), n = static_cast<int>(beta.size());
  unsigned N = common_denominator_exp(alpha, beta);
  // one extra unit of flow is forced through every (i0, j) edge; the padded
  // scale keeps the lower bound small enough to preserve feasibility
  unsigned pad = std::bit_width(static_cast<unsigned>(n));
  unsigned Np = N + pad;
  if (Np > 60) fail(errc::precondition_failed, "weight denominators beyond 2^60");
  long long total = 1LL << Np;

  MaxFlow mf(m + n + 2);
  int src = m + n, snk = m + n + 1;
  for (int i = 0; i < m; ++i) {
    long long cap = scaled_weight(alpha.atoms()[i].first, Np);
    if (i == i0) cap -= n;
    mf.add_edge(src, i, cap);
  }
  for (int j = 0; j < n; ++j)
    mf.add_edge(m + j, snk, scaled_weight(beta.atoms()[j].first, Np) - 1);
  std::map<std::pair<int, int>, int> edge_ids;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (way_below(D, alpha.atoms()[i].second, beta.atoms()[j].second))
        edge_ids[{i, j}] = mf.add_edge(i, m + j, total);
  if (mf.run(src, snk) != total - n) return {};

  Flow flow;
  for (const auto& [ij, id] : edge_ids) {
    long long f = mf.flow_on(id) + (ij.first == i0 ? 1 : 0);
    if (f > 0) flow.entries[ij] = Dyadic(f, Np);
  }
  return {true, std::move(flow)};
}

bool val_way_below_subset_test(const SimpleValuation& sigma, const SimpleValuation& beta) {
  if (!(sigma.domain() == beta.domain()))
    fail(errc::domain_mismatch, "valuations on different domains");
  const DomainHandle& D = sigma.domain();
  int i0 = sigma.bottom_atom();
  if (i0 < 0) return false;
  std::vector<int> rest;
  for (int i = 0; i < static_cast<int>(sigma.size()); ++i)
    if (i != i0) rest.push_back(i);
  if (rest.size() > 20) fail(errc::unsupported, "subset test beyond 20 non-bottom atoms");
  if (beta.size() > 63) fail(errc::unsupported, "subset test beyond 63 target atoms");
  // hit_j = set of beta atoms way-above sigma's j-th non-bottom atom
  std::vector<unsigned long long> hit(rest.size(), 0);
  for (size_t j = 0; j < rest.size(); ++j)
    for (size_t i = 0; i < beta.size(); ++i)
      if (way_below(D, sigma.atoms()[rest[j]].second, beta.atoms()[i].second))
        hit[j] |= 1ULL << i;
  for (unsigned long long mask = 1; mask < (1ULL << rest.size()); ++mask) {
    Dyadic lhs(0);
    unsigned long long covered = 0;
    for (size_t j = 0; j < rest.size(); ++j)
      if (mask & (1ULL << j)) {
        lhs += sigma.atoms()[rest[j]].first;
        covered |= hit[j];
      }
    Dyadic rhs(0);
    for (size_t i = 0; i < beta.size(); ++i)
      if (covered & (1ULL << i)) rhs += beta.atoms()[i].first;
    if (!(lhs < rhs)) return false;
  }
  return true;
}

Dyadic mass_on_open(const SimpleValuation& alpha, std::span<const Element> gens, Exec exec) {
  const DomainHandle& D = alpha.domain();
  size_t n = alpha.size();
  size_t nchunk = (exec == Exec::parallel && n > 128) ? 64 : 1;
  std::vector<Dyadic> partial(nchunk);
  parallel_for(exec, nchunk, [&](size_t c) {
    size_t lo = n * c / nchunk, hi = n * (c + 1) / nchunk;
    Dyadic s(0);
    for (size_t i = lo; i < hi; ++i) {
      for (const Element& b : gens)
        if (way_below(D, b, alpha.atoms()[i].second)) {
          s += alpha.atoms()[i].first;
          break;
        }
    }
    partial[c] = std::move(s);
  });
  Dyadic out(0);
  for (const Dyadic& s : partial) out += s;
  return out;
}

std::vector<Dyadic> lower_bounds(std::span<const SimpleValuation> chain,
                                 std::span<const Element> gens, bool validate_chain) {
  if (validate_chain)
    for (size_t k = 1; k < chain.size(); ++k)
      if (!val_leq(chain[k - 1], chain[k]).holds)
        fail(errc::chain_not_increasing, "stage " + std::to_string(k));
  std::vector<Dyadic> out;
  out.reserve(chain.size());
  for (const SimpleValuation& a : chain) out.push_back(mass_on_open(a, gens));
  return out;
}

std::vector<DyInterval> bayes_bounds(std::span<const SimpleValuation> chain,
                                     std::span<const Element> U, std::span<const Element> V,
                                     std::span<const Element> V_ext,
                                     std::span<const Element> UV_ext, const BayesOptions& opts) {
  if (chain.empty()) return {};
  const DomainHandle& D = chain.front().domain();
  if (opts.validate_chain)
    for (size_t k = 1; k < chain.size(); ++k)
      if (!val_leq(chain[k - 1], chain[k]).holds)
        fail(errc::chain_not_increasing, "stage " + std::to_string(k));
  // up-set opens intersect via joins of their generators
  std::vector<Element> UV;
  for (const Element& b : U)
    for (const Element& c : V)
      if (auto j = join(D, b, c)) UV.push_back(std::move(*j));

  std::vector<DyInterval> out;
  bool any_V_mass = false;
  for (const SimpleValuation& a : chain) {
    Dyadic L_UV = mass_on_open(a, UV, opts.exec);
    Dyadic L_V = mass_on_open(a, V, opts.exec);
    Dyadic ubar_V = Dyadic(1) - mass_on_open(a, V_ext, opts.exec);
    if (ubar_V.sign() <= 0)
      fail(errc::degenerate_conditioning, "prob(V) = 0 by exterior mass");
    if (L_V.sign() > 0) any_V_mass = true;
    Dyadic lo = div_down(L_UV, ubar_V, opts.precision);
    if (lo.sign() < 0) lo = Dyadic(0);
    Dyadic hi(1);
    if (!UV_ext.empty() && L_V.sign() > 0) {
      Dyadic ubar_UV = Dyadic(1) - mass_on_open(a, UV_ext, opts.exec);
      if (ubar_UV.sign() < 0) ubar_UV = Dyadic(0);
      hi = min(Dyadic(1), div_up(ubar_UV, L_V, opts.precision));
    }
    out.emplace_back(min(lo, hi), hi);
  }
  if (!any_V_mass) fail(errc::degenerate_conditioning, "all lower bounds of prob(V) are 0");
  return out;
}

}  // namespace rvdom
