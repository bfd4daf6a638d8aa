#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rvdom/randvar.hpp"

namespace rvdom {

// A random variable of random variables: a depth-m partition whose cells
// hold step RVs over the same space into the same codomain.
class NestedStepRV {
public:
  static NestedStepRV from_cells(SpaceKind space, DomainHandle codomain, unsigned depth,
                                 std::vector<StepRV> cells);
  static NestedStepRV constant(SpaceKind space, const StepRV& inner);

  SpaceKind space() const { return space_; }
  const DomainHandle& codomain() const { return codomain_; }
  unsigned depth() const { return depth_; }
  const std::vector<StepRV>& cells() const { return cells_; }

  // Inf of the inner RVs over all completions of a bit prefix.
  StepRV eval_bits(const std::string& prefix) const;

private:
  NestedStepRV(SpaceKind s, DomainHandle d, unsigned dep, std::vector<StepRV> c)
      : space_(s), codomain_(std::move(d)), depth_(dep), cells_(std::move(c)) {}
  SpaceKind space_;
  DomainHandle codomain_;
  unsigned depth_;
  std::vector<StepRV> cells_;
};

// Monad unit: the constant random variable.
StepRV eta(SpaceKind space, const DomainHandle& codomain, const Element& d);

// Monad multiplication at a fixed output depth: each output cell takes the
// inf of r(x)(y) over the pairing image of the cell. For the interleave
// pairing the result is exact once out_depth reaches twice the larger of the
// outer/inner depths; below that it is the depth-bounded lower envelope.
StepRV mu(const NestedStepRV& r, unsigned out_depth, Exec exec = Exec::serial);

// Kleisli extension f'(r) = mu(map f over r's cells).
StepRV kleisli(const std::map<Element, StepRV>& f, const StepRV& r, unsigned out_depth);

// Functorial action on a finite (validated monotone) value map.
StepRV rmap(const std::map<Element, Element>& f, const StepRV& r);

// Tensorial strength t(d, s) = <eta(d), s> and its dual.
StepRV strength(const DomainHandle& d_dom, const Element& d, const StepRV& s);
StepRV costrength(const StepRV& r, const DomainHandle& e_dom, const Element& e);

// Both sides of the basic integral identity
//   int_Omega nu((r(w))^-1 O) dw  =  int_0^1 nu(r^-1 [q -> O]) dq
// computed as exact dyadic sums along independent routes.
std::pair<Dyadic, Dyadic> basic_eq_sides(const NestedStepRV& r, std::span<const Element> gens);

struct LawReport {
  unsigned samples = 0;
  unsigned unit_const_fail = 0;   // T(mu(eta_R r)) = T(r); pointwise r o h2
  unsigned unit_cellwise_fail = 0;  // T(mu(R eta r)) = T(r); pointwise r o h1
  unsigned assoc_fail = 0;        // T(mu o mu_R) = T(mu o R mu)
  unsigned naturality_fail = 0;   // T(Rf(mu r)) = T(mu(RRf r))
  unsigned basic_eq_fail = 0;     // integral identity
  std::vector<std::string> failures;

  bool ok() const {
    return unit_const_fail + unit_cellwise_fail + assoc_fail + naturality_fail + basic_eq_fail ==
           0;
  }
  std::string str() const;
};

// Randomized executable check of the monad laws up to T-equality on the
// given space (interleave pairing on Cantor kinds, Hilbert on unit kinds).
LawReport check_laws(unsigned samples, SpaceKind space, const DomainHandle& D,
                     std::uint64_t seed);

}  // namespace rvdom
