#include "rvdom/expectation.hpp"

#include <algorithm>

namespace rvdom {

std::string PosInterval::str() const {
  return "[" + lo.str() + "," + (hi ? hi->str() : "unbounded") + ")";
}

std::string ExpectResult::str() const {
  if (hi) return "[" + lo.str() + "," + hi->str() + "]";
  return "[" + lo.str() + ",unbounded)";
}

StepFunctional StepFunctional::make(DomainHandle domain,
                                    std::vector<std::pair<Element, DyInterval>> pieces) {
  for (auto& [gen, val] : pieces) {
    gen = canon_element(domain, gen);
    if (val.lo.sign() < 0)
      fail(errc::ill_formed_functional, "piece value " + val.str() + " below IR+");
  }
  return StepFunctional(std::move(domain), std::move(pieces));
}

PosInterval StepFunctional::eval(const Element& d) const {
  bool any = false;
  Dyadic lo(0), hi(0);
  for (const auto& [gen, val] : pieces_) {
    if (!way_below(domain_, gen, d)) continue;
    if (!any) {
      lo = val.lo;
      hi = val.hi;
      any = true;
    } else {
      lo = max(lo, val.lo);
      hi = min(hi, val.hi);
    }
  }
  if (!any) return {Dyadic(0), std::nullopt};
  if (hi < lo)
    fail(errc::ill_formed_functional, "pieces conflict at " + d.str() + " (empty join)");
  return {lo, hi};
}

bool StepFunctional::piecewise_below(const StepFunctional& g, const StepFunctional& gp) {
  if (g.pieces_.size() != gp.pieces_.size()) return false;
  for (size_t i = 0; i < g.pieces_.size(); ++i) {
    if (!(g.pieces_[i].first == gp.pieces_[i].first)) return false;
    if (!g.pieces_[i].second.contains(gp.pieces_[i].second)) return false;
  }
  return true;
}

ExpectResult expect(const StepRV& r, const StepFunctional& g, Exec exec) {
  if (!(r.codomain() == g.domain())) fail(errc::domain_mismatch, "functional on another domain");
  SimpleValuation t = rv_T(r);
  size_t n = t.size();
  size_t nchunk = (exec == Exec::parallel && n > 64) ? 16 : 1;
  std::vector<Dyadic> lo_part(nchunk), hi_part(nchunk);
  std::vector<char> unbounded_part(nchunk, 0);
  parallel_for(exec, nchunk, [&](size_t c) {
    size_t a = n * c / nchunk, b = n * (c + 1) / nchunk;
    Dyadic lo(0), hi(0);
    bool unb = false;
    for (size_t i = a; i < b; ++i) {
      const auto& [w, d] = t.atoms()[i];
      PosInterval gv = g.eval(d);
      lo += w * gv.lo;
      if (gv.hi)
        hi += w * *gv.hi;
      else
        unb = true;
    }
    lo_part[c] = std::move(lo);
    hi_part[c] = std::move(hi);
    unbounded_part[c] = unb;
  });
  ExpectResult out{Dyadic(0), Dyadic(0)};
  bool unb = false;
  for (size_t c = 0; c < nchunk; ++c) {
    out.lo += lo_part[c];
    *out.hi += hi_part[c];
    unb = unb || unbounded_part[c];
  }
  if (unb) out.hi = std::nullopt;
  return out;
}

Dyadic monte_carlo(const StepRV& r, const StepFunctional& g,
                   const std::map<Element, Dyadic>& picks) {
  SimpleValuation t = rv_T(r);
  Dyadic sum(0);
  for (const auto& [w, d] : t.atoms()) {
    auto it = picks.find(d);
    if (it == picks.end()) fail(errc::missing_mapping, "no pick for value " + d.str());
    PosInterval gv = g.eval(d);
    if (it->second < gv.lo || (gv.hi && *gv.hi < it->second))
      fail(errc::pick_outside_interval,
           it->second.str() + " outside " + gv.str() + " at " + d.str());
    sum += w * it->second;
  }
  return sum;
}

DyInterval fubini(const SimpleValuation& beta, const SimpleValuation& gamma,
                  const std::map<std::pair<Element, Element>, DyInterval>& f) {
  auto cell = [&](const Element& d, const Element& e) -> const DyInterval& {
    auto it = f.find({d, e});
    if (it == f.end())
      fail(errc::missing_grid_value, "f undefined at (" + d.str() + "," + e.str() + ")");
    return it->second;
  };
  // joint order
  Dyadic lo1(0), hi1(0);
  for (const auto& [b, d] : beta.atoms())
    for (const auto& [c, e] : gamma.atoms()) {
      const DyInterval& v = cell(d, e);
      lo1 += b * c * v.lo;
      hi1 += b * c * v.hi;
    }
  // rows first
  Dyadic lo2(0), hi2(0);
  for (const auto& [b, d] : beta.atoms()) {
    Dyadic rl(0), rh(0);
    for (const auto& [c, e] : gamma.atoms()) {
      const DyInterval& v = cell(d, e);
      rl += c * v.lo;
      rh += c * v.hi;
    }
    lo2 += b * rl;
    hi2 += b * rh;
  }
  // columns first
  Dyadic lo3(0), hi3(0);
  for (const auto& [c, e] : gamma.atoms()) {
    Dyadic cl(0), ch(0);
    for (const auto& [b, d] : beta.atoms()) {
      const DyInterval& v = cell(d, e);
      cl += b * v.lo;
      ch += b * v.hi;
    }
    lo3 += c * cl;
    hi3 += c * ch;
  }
  if (!(lo1 == lo2 && lo2 == lo3 && hi1 == hi2 && hi2 == hi3))
    fail(errc::precondition_failed, "summation orders disagree");
  return DyInterval(lo1, hi1);
}

}  // namespace rvdom
