#include "rvdom/randvar.hpp"

#include <algorithm>
#include <map>

#include "json.hpp"

namespace rvdom {

namespace {

unsigned long cell_count_at(unsigned depth) { return 1UL << depth; }

// cylinder/interval granularity of a basic open
unsigned open_depth(const BasicOpen& o) {
  unsigned d = 0;
  for (const std::string& c : o.cyls()) d = std::max<unsigned>(d, c.size());
  for (const auto& [lo, hi] : o.ivals()) d = std::max({d, lo.exp(), hi.exp()});
  return d;
}

// cell index range [first, last) covered by the open at the given depth
std::vector<std::pair<unsigned long, unsigned long>> cover_ranges(const BasicOpen& o,
                                                                  unsigned depth) {
  std::vector<std::pair<unsigned long, unsigned long>> out;
  for (const std::string& c : o.cyls()) {
    unsigned long base = 0;
    for (char b : c) base = base * 2 + (b - '0');
    unsigned shift = depth - static_cast<unsigned>(c.size());
    out.emplace_back(base << shift, (base + 1) << shift);
  }
  for (const auto& [lo, hi] : o.ivals()) {
    BigInt l = lo.ldexp(depth).floor();
    BigInt h = hi.ldexp(depth).floor();
    // open interval (lo,hi): cells with lo <= i/2^d and (i+1)/2^d <= hi
    out.emplace_back(static_cast<unsigned long>(l), static_cast<unsigned long>(h));
  }
  return out;
}

}  // namespace

void StepRV::normalize() {
  while (depth_ > 0) {
    bool mergeable = true;
    for (size_t i = 0; i < cells_.size(); i += 2)
      if (!(cells_[i] == cells_[i + 1])) {
        mergeable = false;
        break;
      }
    if (!mergeable) break;
    std::vector<Element> half;
    half.reserve(cells_.size() / 2);
    for (size_t i = 0; i < cells_.size(); i += 2) half.push_back(cells_[i]);
    cells_ = std::move(half);
    --depth_;
  }
}

StepRV StepRV::from_cells(SpaceKind space, DomainHandle codomain, unsigned depth,
                          std::vector<Element> cells) {
  if (cells.size() != cell_count_at(depth))
    fail(errc::precondition_failed, "cell list length must be 2^depth");
  for (Element& e : cells) e = canon_element(codomain, e);
  StepRV r(space, std::move(codomain), depth, std::move(cells));
  r.normalize();
  return r;
}

StepRV StepRV::constant(SpaceKind space, DomainHandle codomain, Element value) {
  std::vector<Element> one{std::move(value)};
  return from_cells(space, std::move(codomain), 0, std::move(one));
}

StepRV StepRV::make(SpaceKind space, DomainHandle codomain,
                    std::span<const std::pair<BasicOpen, Element>> assignments) {
  unsigned depth = 0;
  for (const auto& [open, e] : assignments) {
    if (open.kind() != space) fail(errc::space_mismatch, "assignment on a different space");
    depth = std::max(depth, open_depth(open));
  }
  std::vector<Element> cells(cell_count_at(depth), bottom_element(codomain));
  for (const auto& [open, e] : assignments) {
    Element v = canon_element(codomain, e);
    for (auto [first, last] : cover_ranges(open, depth))
      for (unsigned long i = first; i < last; ++i) {
        auto j = join(codomain, cells[i], v);
        if (!j)
          fail(errc::unbounded_join,
               "values " + cells[i].str() + " and " + v.str() + " have no upper bound");
        cells[i] = std::move(*j);
      }
  }
  return from_cells(space, std::move(codomain), depth, std::move(cells));
}

Element StepRV::eval_bits(const std::string& prefix) const {
  if (!is_cantor_kind(space_)) fail(errc::point_outside_space, "bit string on a unit space");
  for (char c : prefix)
    if (c != '0' && c != '1') fail(errc::bad_digit, "bit '" + std::string(1, c) + "'");
  if (prefix.size() >= depth_) {
    unsigned long idx = 0;
    for (unsigned b = 0; b < depth_; ++b) idx = idx * 2 + (prefix[b] - '0');
    return cells_[idx];
  }
  unsigned long base = 0;
  for (char c : prefix) base = base * 2 + (c - '0');
  unsigned shift = depth_ - static_cast<unsigned>(prefix.size());
  std::span<const Element> range(cells_.data() + (base << shift), 1UL << shift);
  return inf(codomain_, range);
}

Element StepRV::eval_point(const Dyadic& x) const {
  if (!is_unit_kind(space_)) fail(errc::point_outside_space, "dyadic point on a Cantor space");
  bool interior_only = space_ == SpaceKind::unit_open;
  if (x.sign() < 0 || Dyadic(1) < x || (interior_only && (x.is_zero() || x == Dyadic(1))))
    fail(errc::point_outside_space, x.str() + " outside the sample space");
  Dyadic scaled = x.ldexp(depth_);
  if (scaled.is_integer()) {
    unsigned long m = static_cast<unsigned long>(scaled.num());
    if (m == 0) return cells_.front();
    if (m == cell_count_at(depth_)) return cells_.back();
    return inf2(codomain_, cells_[m - 1], cells_[m]);
  }
  return cells_[static_cast<unsigned long>(scaled.floor())];
}

StepRV StepRV::refined(unsigned new_depth) const {
  if (new_depth < depth_) fail(errc::precondition_failed, "refined() cannot reduce depth");
  if (new_depth == depth_) return *this;
  unsigned long rep = 1UL << (new_depth - depth_);
  std::vector<Element> cells;
  cells.reserve(cell_count_at(new_depth));
  for (const Element& e : cells_)
    for (unsigned long k = 0; k < rep; ++k) cells.push_back(e);
  return StepRV(space_, codomain_, new_depth, std::move(cells));
}

std::string StepRV::str() const {
  nlohmann::json j;
  j["space"] = space_name(space_);
  j["depth"] = depth_;
  nlohmann::json cells = nlohmann::json::array();
  for (const Element& e : cells_) cells.push_back(e.str());
  j["cells"] = std::move(cells);
  return j.dump();
}

std::optional<StepRV> StepRV::parse(const std::string& text, const DomainHandle& codomain) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.contains("space") || !j.contains("depth") || !j.contains("cells"))
    return std::nullopt;
  auto sk = parse_space(j["space"].get<std::string>());
  if (!sk) return std::nullopt;
  unsigned depth = j["depth"].get<unsigned>();
  std::vector<Element> cells;
  for (const auto& c : j["cells"]) {
    auto e = Element::parse(c.get<std::string>(), codomain);
    if (!e) return std::nullopt;
    cells.push_back(std::move(*e));
  }
  if (cells.size() != cell_count_at(depth)) return std::nullopt;
  return from_cells(*sk, codomain, depth, std::move(cells));
}

SimpleValuation rv_T(const StepRV& r) {
  std::map<Element, long> counts;
  for (const Element& e : r.cells()) counts[e] += 1;
  std::vector<std::pair<Dyadic, Element>> atoms;
  for (auto& [e, c] : counts) atoms.emplace_back(Dyadic(c, r.depth()), e);
  return SimpleValuation::make(r.codomain(), std::move(atoms));
}

namespace {

void check_same_frame(const StepRV& r, const StepRV& s) {
  if (r.space() != s.space()) fail(errc::space_mismatch, "step RVs on different spaces");
  if (!(r.codomain() == s.codomain())) fail(errc::domain_mismatch, "different codomains");
}

}  // namespace

bool rv_leq(const StepRV& r, const StepRV& s) {
  check_same_frame(r, s);
  unsigned d = std::max(r.depth(), s.depth());
  StepRV a = r.refined(d), b = s.refined(d);
  for (size_t i = 0; i < a.cell_count(); ++i)
    if (!below(r.codomain(), a.cells()[i], b.cells()[i])) return false;
  return true;
}

bool rv_way_below(const StepRV& r, const StepRV& s) {
  check_same_frame(r, s);
  if (r.space() == SpaceKind::cantor_zero)
    fail(errc::unsupported, "no way-below criterion on the Cantor-zero space");
  const DomainHandle& D = r.codomain();
  unsigned d = std::max(r.depth(), s.depth());
  StepRV a = r.refined(d), b = s.refined(d);
  size_t n = a.cell_count();
  if (r.space() == SpaceKind::cantor) {
    for (size_t i = 0; i < n; ++i)
      if (!way_below(D, a.cells()[i], b.cells()[i])) return false;
    return true;
  }
  Element bot = bottom_element(D);
  if (r.space() == SpaceKind::unit_open)
    if (!(a.cells().front() == bot) || !(a.cells().back() == bot)) return false;
  for (size_t i = 0; i < n; ++i) {
    const Element& v = a.cells()[i];
    if (v == bot) continue;
    // closure criterion: v must be way below s on the cell and both neighbours
    if (!way_below(D, v, b.cells()[i])) return false;
    if (i > 0 && !way_below(D, v, b.cells()[i - 1])) return false;
    if (i + 1 < n && !way_below(D, v, b.cells()[i + 1])) return false;
  }
  return true;
}

bool rv_equiv(const StepRV& r, const StepRV& s) {
  if (!(r.codomain() == s.codomain())) fail(errc::domain_mismatch, "different codomains");
  return rv_T(r) == rv_T(s);
}

StepRV rv_refine_up(const StepRV& r1, const SimpleValuation& alpha2) {
  SimpleValuation t1 = rv_T(r1);
  OrderResult ord = val_leq(t1, alpha2);
  if (!ord.holds) fail(errc::precondition_failed, "T(r1) is not below alpha2");
  const Flow& flow = *ord.flow;
  unsigned d = r1.depth();
  for (const auto& [ij, t] : flow.entries) d = std::max(d, t.exp());
  if (d > 26) fail(errc::depth_overflow, "refinement depth beyond 2^26 cells");
  StepRV base = r1.refined(d);
  // cells of each value class of r1, in index order
  std::map<Element, std::vector<size_t>> classes;
  for (size_t i = 0; i < base.cell_count(); ++i) classes[base.cells()[i]].push_back(i);
  std::vector<Element> cells = base.cells();
  for (size_t ci = 0; ci < t1.size(); ++ci) {
    const std::vector<size_t>& slots = classes[t1.atoms()[ci].second];
    size_t next = 0;
    for (size_t j = 0; j < alpha2.size(); ++j) {
      auto it = flow.entries.find({static_cast<int>(ci), static_cast<int>(j)});
      if (it == flow.entries.end()) continue;
      unsigned long take = static_cast<unsigned long>(it->second.ldexp(d).num());
      for (unsigned long k = 0; k < take; ++k) cells[slots[next++]] = alpha2.atoms()[j].second;
    }
  }
  return StepRV::from_cells(r1.space(), r1.codomain(), d, std::move(cells));
}

std::pair<StepRV, Flow> rv_restrict_down(const StepRV& r2, const SimpleValuation& alpha1) {
  SimpleValuation t2 = rv_T(r2);
  OrderResult ord = val_leq(alpha1, t2);
  if (!ord.holds) fail(errc::precondition_failed, "alpha1 is not below T(r2)");
  const Flow& flow = *ord.flow;
  unsigned d = r2.depth();
  for (const auto& [ij, t] : flow.entries) d = std::max(d, t.exp());
  if (d > 26) fail(errc::depth_overflow, "restriction depth beyond 2^26 cells");
  StepRV base = r2.refined(d);
  std::map<Element, std::vector<size_t>> classes;
  for (size_t i = 0; i < base.cell_count(); ++i) classes[base.cells()[i]].push_back(i);
  std::vector<Element> cells = base.cells();
  for (size_t j = 0; j < t2.size(); ++j) {
    const std::vector<size_t>& slots = classes[t2.atoms()[j].second];
    size_t next = 0;
    for (size_t i = 0; i < alpha1.size(); ++i) {
      auto it = flow.entries.find({static_cast<int>(i), static_cast<int>(j)});
      if (it == flow.entries.end()) continue;
      unsigned long take = static_cast<unsigned long>(it->second.ldexp(d).num());
      for (unsigned long k = 0; k < take; ++k) cells[slots[next++]] = alpha1.atoms()[i].second;
    }
  }
  StepRV r1 = StepRV::from_cells(r2.space(), r2.codomain(), d, std::move(cells));
  // measured co-occurrence flow (the lemma's formula)
  StepRV a = r1.refined(d), b = base;
  std::map<std::pair<Element, Element>, long> meas;
  for (size_t i = 0; i < a.cell_count(); ++i) meas[{a.cells()[i], b.cells()[i]}] += 1;
  Flow measured;
  for (size_t i = 0; i < alpha1.size(); ++i)
    for (size_t j = 0; j < t2.size(); ++j) {
      auto it = meas.find({alpha1.atoms()[i].second, t2.atoms()[j].second});
      if (it != meas.end() && it->second > 0)
        measured.entries[{static_cast<int>(i), static_cast<int>(j)}] = Dyadic(it->second, d);
    }
  return {std::move(r1), std::move(measured)};
}

std::vector<StepRV> rv_chain_from_valuations(std::span<const SimpleValuation> alphas,
                                             SpaceKind space) {
  std::vector<StepRV> out;
  if (alphas.empty()) return out;
  for (size_t k = 1; k < alphas.size(); ++k)
    if (!val_leq(alphas[k - 1], alphas[k]).holds)
      fail(errc::chain_not_increasing, "stage " + std::to_string(k));
  // base case: disjoint basic opens with the prescribed masses, in atom order
  const SimpleValuation& a0 = alphas.front();
  unsigned d = 0;
  for (const auto& [w, e] : a0.atoms()) d = std::max(d, w.exp());
  std::vector<Element> cells;
  cells.reserve(1UL << d);
  for (const auto& [w, e] : a0.atoms()) {
    unsigned long take = static_cast<unsigned long>(w.ldexp(d).num());
    for (unsigned long k = 0; k < take; ++k) cells.push_back(e);
  }
  out.push_back(StepRV::from_cells(space, a0.domain(), d, std::move(cells)));
  for (size_t k = 1; k < alphas.size(); ++k) out.push_back(rv_refine_up(out.back(), alphas[k]));
  return out;
}

StepRV rv_approx_degree(const StepRV& r, unsigned n) {
  if (n > r.depth()) fail(errc::precondition_failed, "approximation degree above the depth");
  unsigned long block = 1UL << (r.depth() - n);
  std::vector<Element> cells;
  cells.reserve(1UL << n);
  for (unsigned long i = 0; i < (1UL << n); ++i) {
    std::span<const Element> range(r.cells().data() + i * block, block);
    cells.push_back(inf(r.codomain(), range));
  }
  return StepRV::from_cells(r.space(), r.codomain(), n, std::move(cells));
}

bool rv_member_q_open(const StepRV& r, const Dyadic& q, std::span<const Element> gens) {
  if (q.sign() < 0 || Dyadic(1) < q) fail(errc::bad_probability, q.str());
  Dyadic mass(0);
  for (const Element& cell : r.cells()) {
    for (const Element& b : gens)
      if (way_below(r.codomain(), b, cell)) {
        mass += Dyadic(1, r.depth());
        break;
      }
  }
  return q < mass;
}

StepRV rv_precompose(const StepRV& r, PairingDescriptor h, unsigned max_depth) {
  if (h.role == PairingRole::full_h)
    fail(errc::precondition_failed, "precompose needs role h1 or h2");
  unsigned out_depth = 2 * r.depth();
  if (out_depth > max_depth) fail(errc::depth_overflow, "precompose doubles the depth");
  if (h.kind == PairingKind::interleave) {
    if (!is_cantor_kind(r.space()))
      fail(errc::space_mismatch, "interleave pairing lives on Cantor kinds");
    std::vector<Element> cells;
    cells.reserve(1UL << out_depth);
    std::string w(out_depth, '0');
    for (unsigned long i = 0; i < (1UL << out_depth); ++i) {
      for (unsigned b = 0; b < out_depth; ++b)
        w[b] = (i >> (out_depth - 1 - b)) & 1 ? '1' : '0';
      auto [even, odd] = split_indices(w);
      cells.push_back(r.eval_bits(h.role == PairingRole::h1 ? even : odd));
    }
    return StepRV::from_cells(r.space(), r.codomain(), out_depth, std::move(cells));
  }
  if (!is_unit_kind(r.space()))
    fail(errc::space_mismatch, "the Hilbert pairing lives on unit kinds");
  // quaternary depth = r.depth(): each quat cell projects onto exactly one
  // r-cell, so the composition is exact up to a null set
  unsigned qd = r.depth();
  std::vector<Element> cells;
  cells.reserve(1UL << out_depth);
  std::string w(qd, '0');
  for (unsigned long i = 0; i < (1UL << out_depth); ++i) {
    unsigned long c = i;
    for (unsigned k = 0; k < qd; ++k) {
      w[qd - 1 - k] = static_cast<char>('0' + (c & 3));
      c >>= 2;
    }
    auto [x, y] = hilbert_cell(w);
    const DyInterval& range = h.role == PairingRole::h1 ? x : y;
    unsigned long cell_idx = static_cast<unsigned long>(range.lo.ldexp(r.depth()).floor());
    cells.push_back(r.cells()[cell_idx]);
  }
  return StepRV::from_cells(r.space(), r.codomain(), out_depth, std::move(cells));
}

StepRV rv_precompose_bitperm(const StepRV& r, std::span<const unsigned> perm,
                             unsigned max_depth) {
  if (!is_cantor_kind(r.space())) fail(errc::space_mismatch, "bit permutations act on Cantor kinds");
  std::vector<bool> seen(perm.size(), false);
  for (unsigned p : perm) {
    if (p >= perm.size() || seen[p]) fail(errc::precondition_failed, "not a permutation");
    seen[p] = true;
  }
  unsigned d = std::max<unsigned>(r.depth(), perm.size());
  if (d > max_depth) fail(errc::depth_overflow, "permutation depth too large");
  std::vector<Element> cells;
  cells.reserve(1UL << d);
  std::string w(d, '0'), u(d, '0');
  for (unsigned long i = 0; i < (1UL << d); ++i) {
    for (unsigned b = 0; b < d; ++b) w[b] = (i >> (d - 1 - b)) & 1 ? '1' : '0';
    for (unsigned b = 0; b < d; ++b) u[b] = b < perm.size() ? w[perm[b]] : w[b];
    cells.push_back(r.eval_bits(u));
  }
  return StepRV::from_cells(r.space(), r.codomain(), d, std::move(cells));
}

std::vector<size_t> rv_equiv_witness(const StepRV& r, const StepRV& s) {
  if (!is_cantor_kind(r.space()) || !is_cantor_kind(s.space()))
    fail(errc::space_mismatch, "equivalence witnesses live on Cantor space");
  if (!rv_equiv(r, s)) fail(errc::not_equivalent, "step RVs are not equivalent");
  unsigned d = std::max(r.depth(), s.depth());
  StepRV a = r.refined(d), b = s.refined(d);
  std::map<Element, std::vector<size_t>> cells_a, cells_b;
  for (size_t i = 0; i < a.cell_count(); ++i) {
    cells_a[a.cells()[i]].push_back(i);
    cells_b[b.cells()[i]].push_back(i);
  }
  std::vector<size_t> perm(a.cell_count());
  for (auto& [v, as] : cells_a) {
    const std::vector<size_t>& bs = cells_b[v];
    // equal valuations give equal class sizes
    for (size_t k = 0; k < as.size(); ++k) perm[as[k]] = bs[k];
  }
  return perm;
}

StepRV rv_apply_cellperm(const StepRV& s, std::span<const size_t> perm) {
  if (perm.size() != s.cell_count())
    fail(errc::precondition_failed, "permutation size must match the cell count");
  std::vector<Element> cells;
  cells.reserve(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) cells.push_back(s.cells()[perm[i]]);
  return StepRV::from_cells(s.space(), s.codomain(), s.depth(), std::move(cells));
}

StepRV rv_inf(std::span<const StepRV> rs) {
  if (rs.empty()) fail(errc::precondition_failed, "inf of no step RVs");
  unsigned d = 0;
  for (const StepRV& r : rs) {
    check_same_frame(rs.front(), r);
    d = std::max(d, r.depth());
  }
  std::vector<StepRV> refined;
  for (const StepRV& r : rs) refined.push_back(r.refined(d));
  std::vector<Element> cells;
  cells.reserve(1UL << d);
  std::vector<Element> column(rs.size(), bottom_element(rs.front().codomain()));
  for (unsigned long i = 0; i < (1UL << d); ++i) {
    for (size_t k = 0; k < refined.size(); ++k) column[k] = refined[k].cells()[i];
    cells.push_back(inf(rs.front().codomain(), column));
  }
  return StepRV::from_cells(rs.front().space(), rs.front().codomain(), d, std::move(cells));
}

}  // namespace rvdom
