#include "rvdom/rv_monad.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace rvdom {

namespace {

std::string bits_of(unsigned long i, unsigned width) {
  std::string w(width, '0');
  for (unsigned b = 0; b < width; ++b)
    if (i & (1UL << (width - 1 - b))) w[b] = '1';
  return w;
}

// cells of the depth-d partition with positive-measure overlap with iv
std::pair<unsigned long, unsigned long> overlap_range(const DyInterval& iv, unsigned d) {
  Dyadic a = iv.lo.ldexp(d), b = iv.hi.ldexp(d);
  BigInt first = a.floor();
  BigInt last = b.is_integer() ? BigInt(b.num() - 1) : b.floor();
  if (first < 0) first = 0;
  BigInt maxc = (BigInt(1) << d) - 1;
  if (last > maxc) last = maxc;
  if (last < first) last = first;
  return {static_cast<unsigned long>(first), static_cast<unsigned long>(last)};
}

std::string quat_prefix_of(unsigned long i, unsigned out_depth, unsigned qd) {
  unsigned long code = i >> (out_depth - 2 * qd);
  std::string w(qd, '0');
  for (unsigned k = 0; k < qd; ++k) {
    w[qd - 1 - k] = static_cast<char>('0' + (code & 3));
    code >>= 2;
  }
  return w;
}

}  // namespace

NestedStepRV NestedStepRV::from_cells(SpaceKind space, DomainHandle codomain, unsigned depth,
                                      std::vector<StepRV> cells) {
  if (cells.size() != (1UL << depth))
    fail(errc::precondition_failed, "nested cell list length must be 2^depth");
  for (const StepRV& r : cells) {
    if (r.space() != space) fail(errc::space_mismatch, "inner RV on a different space");
    if (!(r.codomain() == codomain)) fail(errc::domain_mismatch, "inner RV codomain differs");
  }
  while (depth > 0) {
    bool mergeable = true;
    for (size_t i = 0; i < cells.size(); i += 2)
      if (!(cells[i] == cells[i + 1])) {
        mergeable = false;
        break;
      }
    if (!mergeable) break;
    std::vector<StepRV> half;
    for (size_t i = 0; i < cells.size(); i += 2) half.push_back(cells[i]);
    cells = std::move(half);
    --depth;
  }
  return NestedStepRV(space, std::move(codomain), depth, std::move(cells));
}

NestedStepRV NestedStepRV::constant(SpaceKind space, const StepRV& inner) {
  return from_cells(space, inner.codomain(), 0, {inner});
}

StepRV NestedStepRV::eval_bits(const std::string& prefix) const {
  if (prefix.size() >= depth_) {
    unsigned long idx = 0;
    for (unsigned b = 0; b < depth_; ++b) idx = idx * 2 + (prefix[b] - '0');
    return cells_[idx];
  }
  unsigned long base = 0;
  for (char c : prefix) base = base * 2 + (c - '0');
  unsigned shift = depth_ - static_cast<unsigned>(prefix.size());
  std::span<const StepRV> range(cells_.data() + (base << shift), 1UL << shift);
  return rv_inf(range);
}

StepRV eta(SpaceKind space, const DomainHandle& codomain, const Element& d) {
  return StepRV::constant(space, codomain, d);
}

StepRV mu(const NestedStepRV& r, unsigned out_depth, Exec exec) {
  if (out_depth > 26) fail(errc::depth_overflow, "mu output depth beyond 2^26 cells");
  const DomainHandle& D = r.codomain();
  std::vector<Element> cells(1UL << out_depth, bottom_element(D));
  if (is_cantor_kind(r.space())) {
    parallel_for(exec, cells.size(), [&](size_t i) {
      auto [even, odd] = split_indices(bits_of(i, out_depth));
      if (even.size() >= r.depth()) {
        unsigned long oc = 0;
        for (unsigned b = 0; b < r.depth(); ++b) oc = oc * 2 + (even[b] - '0');
        cells[i] = r.cells()[oc].eval_bits(odd);
      } else {
        unsigned long base = 0;
        for (char c : even) base = base * 2 + (c - '0');
        unsigned shift = r.depth() - static_cast<unsigned>(even.size());
        std::vector<Element> vals;
        for (unsigned long oc = base << shift; oc < (base + 1) << shift; ++oc)
          vals.push_back(r.cells()[oc].eval_bits(odd));
        cells[i] = inf(D, vals);
      }
    });
  } else {
    unsigned qd = out_depth / 2;
    parallel_for(exec, cells.size(), [&](size_t i) {
      auto [x, y] = hilbert_cell(quat_prefix_of(i, out_depth, qd));
      auto [o0, o1] = overlap_range(x, r.depth());
      std::vector<Element> vals;
      for (unsigned long oc = o0; oc <= o1; ++oc) {
        const StepRV& inner = r.cells()[oc];
        auto [i0, i1] = overlap_range(y, inner.depth());
        for (unsigned long ic = i0; ic <= i1; ++ic) vals.push_back(inner.cells()[ic]);
      }
      cells[i] = inf(D, vals);
    });
  }
  return StepRV::from_cells(r.space(), D, out_depth, std::move(cells));
}

StepRV kleisli(const std::map<Element, StepRV>& f, const StepRV& r, unsigned out_depth) {
  std::vector<StepRV> inner;
  inner.reserve(r.cell_count());
  for (const Element& v : r.cells()) {
    auto it = f.find(v);
    if (it == f.end()) fail(errc::missing_mapping, "no mapping for value " + v.str());
    inner.push_back(it->second);
  }
  SpaceKind space = r.space();
  DomainHandle cod = inner.front().codomain();
  return mu(NestedStepRV::from_cells(space, cod, r.depth(), std::move(inner)), out_depth);
}

StepRV rmap(const std::map<Element, Element>& f, const StepRV& r) {
  const DomainHandle& D = r.codomain();
  std::vector<Element> values;
  for (const Element& v : r.cells())
    if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
  for (const Element& v : values)
    if (!f.count(v)) fail(errc::missing_mapping, "no mapping for value " + v.str());
  for (const Element& u : values)
    for (const Element& v : values)
      if (below(D, u, v) && !below(D, f.at(u), f.at(v)))
        fail(errc::non_monotone_map, u.str() + " below " + v.str() + " but images are not");
  std::vector<Element> cells;
  cells.reserve(r.cell_count());
  for (const Element& v : r.cells()) cells.push_back(f.at(v));
  return StepRV::from_cells(r.space(), D, r.depth(), std::move(cells));
}

StepRV strength(const DomainHandle& d_dom, const Element& d, const StepRV& s) {
  DomainHandle prod = DomainHandle::product(d_dom, s.codomain());
  Element dc = canon_element(d_dom, d);
  std::vector<Element> cells;
  cells.reserve(s.cell_count());
  for (const Element& v : s.cells()) cells.push_back(Element::pair(dc, v));
  return StepRV::from_cells(s.space(), prod, s.depth(), std::move(cells));
}

StepRV costrength(const StepRV& r, const DomainHandle& e_dom, const Element& e) {
  DomainHandle prod = DomainHandle::product(r.codomain(), e_dom);
  Element ec = canon_element(e_dom, e);
  std::vector<Element> cells;
  cells.reserve(r.cell_count());
  for (const Element& v : r.cells()) cells.push_back(Element::pair(v, ec));
  return StepRV::from_cells(r.space(), prod, r.depth(), std::move(cells));
}

std::pair<Dyadic, Dyadic> basic_eq_sides(const NestedStepRV& r, std::span<const Element> gens) {
  const DomainHandle& D = r.codomain();
  // per outer cell: the inner measure of O
  std::vector<Dyadic> q;
  q.reserve(r.cells().size());
  for (const StepRV& inner : r.cells()) {
    long hits = 0;
    for (const Element& v : inner.cells()) {
      for (const Element& b : gens)
        if (way_below(D, b, v)) {
          ++hits;
          break;
        }
    }
    q.push_back(Dyadic(hits, inner.depth()));
  }
  Dyadic outer_mass(1, r.depth());
  // LHS: weighted sum over outer cells
  Dyadic lhs(0);
  for (const Dyadic& m : q) lhs += outer_mass * m;
  // RHS: step integral over thresholds of nu(r^-1 [q -> O])
  std::vector<Dyadic> ts = q;
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  Dyadic rhs(0), prev(0);
  for (const Dyadic& t : ts) {
    if (t.sign() <= 0) continue;
    Dyadic above(0);
    for (const Dyadic& m : q)
      if (t <= m) above += outer_mass;
    rhs += (t - prev) * above;
    prev = t;
  }
  return {lhs, rhs};
}

// ---------------------------------------------------------------------------
// Law checks
// ---------------------------------------------------------------------------

namespace {

Element random_element(std::mt19937_64& rng, const DomainHandle& D) {
  if (D.kind() == DomainKind::finite_poset) {
    std::uniform_int_distribution<int> pick(0, D.poset().size() - 1);
    return Element::poset_elem(D.poset().name(pick(rng)));
  }
  if (D.kind() == DomainKind::product)
    return Element::pair(random_element(rng, D.left()), random_element(rng, D.right()));
  std::uniform_int_distribution<int> g(0, 8);
  int a = g(rng), b = g(rng);
  if (b < a) std::swap(a, b);
  if (D.kind() == DomainKind::interval_real && a == b)
    return Element::interval_bottom();
  return Element::interval(DyInterval(Dyadic(a, 3), Dyadic(b, 3)));
}

StepRV random_rv(std::mt19937_64& rng, SpaceKind space, const DomainHandle& D,
                 unsigned max_depth) {
  std::uniform_int_distribution<unsigned> dpick(0, max_depth);
  unsigned d = dpick(rng);
  std::vector<Element> cells;
  for (unsigned long i = 0; i < (1UL << d); ++i) cells.push_back(random_element(rng, D));
  return StepRV::from_cells(space, D, d, std::move(cells));
}

NestedStepRV random_nested(std::mt19937_64& rng, SpaceKind space, const DomainHandle& D,
                           unsigned max_depth) {
  std::uniform_int_distribution<unsigned> dpick(0, max_depth);
  unsigned d = dpick(rng);
  std::vector<StepRV> cells;
  for (unsigned long i = 0; i < (1UL << d); ++i)
    cells.push_back(random_rv(rng, space, D, max_depth));
  return NestedStepRV::from_cells(space, D, d, std::move(cells));
}

unsigned max_inner_depth(const NestedStepRV& r) {
  unsigned d = 0;
  for (const StepRV& c : r.cells()) d = std::max(d, c.depth());
  return d;
}

// mu at the RD level: collapses the two outer layers of a triple nesting,
// leaving step-RV values.
NestedStepRV mu_rd(const std::vector<NestedStepRV>& rr, unsigned rr_depth, SpaceKind space,
                   const DomainHandle& D, unsigned out_depth) {
  std::vector<StepRV> cells;
  cells.reserve(1UL << out_depth);
  for (unsigned long i = 0; i < (1UL << out_depth); ++i) {
    std::vector<StepRV> vals;
    if (is_cantor_kind(space)) {
      auto [even, odd] = split_indices(bits_of(i, out_depth));
      unsigned long base = 0;
      unsigned take = std::min<unsigned>(rr_depth, even.size());
      for (unsigned b = 0; b < take; ++b) base = base * 2 + (even[b] - '0');
      unsigned shift = rr_depth - take;
      for (unsigned long oc = base << shift; oc < (base + 1) << shift; ++oc)
        vals.push_back(rr[oc].eval_bits(odd));
    } else {
      unsigned qd = out_depth / 2;
      auto [x, y] = hilbert_cell(quat_prefix_of(i, out_depth, qd));
      auto [o0, o1] = overlap_range(x, rr_depth);
      for (unsigned long oc = o0; oc <= o1; ++oc) {
        const NestedStepRV& mid = rr[oc];
        auto [m0, m1] = overlap_range(y, mid.depth());
        for (unsigned long mc = m0; mc <= m1; ++mc) vals.push_back(mid.cells()[mc]);
      }
    }
    cells.push_back(rv_inf(vals));
  }
  return NestedStepRV::from_cells(space, D, out_depth, std::move(cells));
}

PairingKind pairing_of(SpaceKind space) {
  return is_cantor_kind(space) ? PairingKind::interleave : PairingKind::hilbert;
}

}  // namespace

std::string LawReport::str() const {
  std::ostringstream os;
  os << "samples=" << samples << " unit_const_fail=" << unit_const_fail
     << " unit_cellwise_fail=" << unit_cellwise_fail << " assoc_fail=" << assoc_fail
     << " naturality_fail=" << naturality_fail << " basic_eq_fail=" << basic_eq_fail;
  for (const std::string& f : failures) os << "\n  " << f;
  return os.str();
}

LawReport check_laws(unsigned samples, SpaceKind space, const DomainHandle& D,
                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LawReport rep;
  rep.samples = samples;
  auto note = [&](const std::string& what, unsigned& counter) {
    ++counter;
    if (rep.failures.size() < 10) rep.failures.push_back(what);
  };
  for (unsigned t = 0; t < samples; ++t) {
    StepRV r = random_rv(rng, space, D, 2);
    unsigned out = 2 * std::max(1u, r.depth());

    // mu(eta_R r) ~ r, pointwise r o h2
    StepRV m1 = mu(NestedStepRV::constant(space, r), out);
    if (!(rv_T(m1) == rv_T(r))) note("unit law (constant nesting) at sample " + std::to_string(t),
                                     rep.unit_const_fail);
    if (!(m1 == rv_precompose(r, {pairing_of(space), PairingRole::h2})))
      note("pointwise r o h2 at sample " + std::to_string(t), rep.unit_const_fail);

    // mu(R eta r) ~ r, pointwise r o h1
    std::vector<StepRV> etas;
    for (const Element& v : r.cells()) etas.push_back(eta(space, D, v));
    StepRV m2 = mu(NestedStepRV::from_cells(space, D, r.depth(), std::move(etas)), out);
    if (!(rv_T(m2) == rv_T(r)))
      note("unit law (cellwise eta) at sample " + std::to_string(t), rep.unit_cellwise_fail);
    if (!(m2 == rv_precompose(r, {pairing_of(space), PairingRole::h1})))
      note("pointwise r o h1 at sample " + std::to_string(t), rep.unit_cellwise_fail);

    // naturality: T(Rf(mu r)) = T(mu(RRf r)) for f = inf with a fixed element
    NestedStepRV nested = random_nested(rng, space, D, 2);
    Element anchor = random_element(rng, D);
    unsigned outn = 2 * std::max(std::max(1u, nested.depth()), max_inner_depth(nested));
    StepRV mun = mu(nested, outn);
    std::map<Element, Element> f;
    for (const Element& v : mun.cells())
      if (!f.count(v)) f[v] = inf2(D, v, anchor);
    StepRV lhs = rmap(f, mun);
    std::vector<StepRV> mapped;
    for (const StepRV& inner : nested.cells()) {
      std::map<Element, Element> g;
      for (const Element& v : inner.cells())
        if (!g.count(v)) g[v] = inf2(D, v, anchor);
      mapped.push_back(rmap(g, inner));
    }
    StepRV rhs = mu(NestedStepRV::from_cells(space, D, nested.depth(), std::move(mapped)), outn);
    if (!(rv_T(lhs) == rv_T(rhs))) note("naturality at sample " + std::to_string(t),
                                        rep.naturality_fail);

    // basic integral identity on the nested instance
    std::vector<Element> gens{random_element(rng, D)};
    auto [l, rr] = basic_eq_sides(nested, gens);
    if (!(l == rr)) note("basic-eq at sample " + std::to_string(t), rep.basic_eq_fail);

    // associativity on a quarter of the samples (triple nestings are costly)
    if (t % 4 == 0) {
      std::uniform_int_distribution<unsigned> dpick(0, 1);
      unsigned d2 = dpick(rng);
      std::vector<NestedStepRV> rr2;
      for (unsigned long i = 0; i < (1UL << d2); ++i)
        rr2.push_back(random_nested(rng, space, D, 1));
      unsigned dmid = 0, dinner = 0;
      for (const NestedStepRV& nn : rr2) {
        dmid = std::max(dmid, nn.depth());
        dinner = std::max(dinner, max_inner_depth(nn));
      }
      unsigned out1 = 2 * std::max(1u, std::max(d2, dmid));
      unsigned outA = 2 * std::max(out1, dinner);
      NestedStepRV s1 = mu_rd(rr2, d2, space, D, out1);
      StepRV a = mu(s1, outA);
      unsigned out2 = 2 * std::max(1u, std::max(dmid, dinner));
      std::vector<StepRV> collapsed;
      for (const NestedStepRV& nn : rr2) collapsed.push_back(mu(nn, out2));
      NestedStepRV s2 = NestedStepRV::from_cells(space, D, d2, std::move(collapsed));
      StepRV b = mu(s2, 2 * std::max(std::max(1u, d2), out2));
      if (!(rv_T(a) == rv_T(b))) note("associativity at sample " + std::to_string(t),
                                      rep.assoc_fail);
    }
  }
  return rep;
}

}  // namespace rvdom
