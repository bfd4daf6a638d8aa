#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rvdom/randvar.hpp"

namespace rvdom {

// A value of the non-negative interval domain IR+; an absent upper end is
// the domain's bottom side [lo, infinity).
struct PosInterval {
  Dyadic lo;
  std::optional<Dyadic> hi;

  bool operator==(const PosInterval& o) const { return lo == o.lo && hi == o.hi; }
  std::string str() const;
};

// Step functional g = sup of value * chi(upper set of generator), a step
// function from the domain into IR+.
class StepFunctional {
public:
  static StepFunctional make(DomainHandle domain,
                             std::vector<std::pair<Element, DyInterval>> pieces);

  const DomainHandle& domain() const { return domain_; }
  const std::vector<std::pair<Element, DyInterval>>& pieces() const { return pieces_; }

  // Join (interval intersection) of the piece values whose generator is way
  // below d; bottom of IR+ when no piece applies.
  PosInterval eval(const Element& d) const;

  // g below g' piecewise: same generators, values in reverse inclusion.
  static bool piecewise_below(const StepFunctional& g, const StepFunctional& gp);

private:
  StepFunctional(DomainHandle d, std::vector<std::pair<Element, DyInterval>> p)
      : domain_(std::move(d)), pieces_(std::move(p)) {}
  DomainHandle domain_;
  std::vector<std::pair<Element, DyInterval>> pieces_;
};

struct ExpectResult {
  Dyadic lo;
  std::optional<Dyadic> hi;  // absent when some positive-mass value is unbounded above

  bool operator==(const ExpectResult& o) const { return lo == o.lo && hi == o.hi; }
  DyInterval capped(const Dyadic& cap) const { return DyInterval(lo, hi ? *hi : cap); }
  std::string str() const;
};

// E(r, g): the pair of Lebesgue integrals of g-, g+ against the push-forward
// of r, computed atom-wise.
ExpectResult expect(const StepRV& r, const StepFunctional& g, Exec exec = Exec::serial);

// Scalar sum with one pick per value of r; every pick must lie inside the
// corresponding g-interval, which places the sum inside expect(r, g).
Dyadic monte_carlo(const StepRV& r, const StepFunctional& g,
                   const std::map<Element, Dyadic>& picks);

// Double integral of f against the product of two simple valuations; the
// three summation orders of the change-of-order proposition are computed and
// must agree exactly.
DyInterval fubini(const SimpleValuation& beta, const SimpleValuation& gamma,
                  const std::map<std::pair<Element, Element>, DyInterval>& f);

}  // namespace rvdom
