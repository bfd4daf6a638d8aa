#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rvdom/pairing.hpp"
#include "rvdom/sample_space.hpp"
#include "rvdom/valuation.hpp"

namespace rvdom {

// Canonical step-function random variable: a full dyadic partition of the
// sample space at some depth with one codomain element per cell. Values at
// interior boundary points of the unit kinds are not stored; they are the
// infima of the adjacent cell values.
class StepRV {
public:
  static StepRV from_cells(SpaceKind space, DomainHandle codomain, unsigned depth,
                           std::vector<Element> cells);
  static StepRV constant(SpaceKind space, DomainHandle codomain, Element value);
  // Joins overlapping assignments; uncovered cells stay bottom.
  static StepRV make(SpaceKind space, DomainHandle codomain,
                     std::span<const std::pair<BasicOpen, Element>> assignments);

  SpaceKind space() const { return space_; }
  unsigned depth() const { return depth_; }
  const DomainHandle& codomain() const { return codomain_; }
  const std::vector<Element>& cells() const { return cells_; }
  size_t cell_count() const { return cells_.size(); }

  // Cantor evaluation at a bit-string prefix: the inf over all completions.
  Element eval_bits(const std::string& prefix) const;
  // Unit evaluation at a dyadic point; grid points take the inf of the
  // adjacent cells.
  Element eval_point(const Dyadic& x) const;

  // Same function represented at a deeper partition.
  StepRV refined(unsigned new_depth) const;

  bool operator==(const StepRV& o) const {
    return space_ == o.space_ && depth_ == o.depth_ && codomain_ == o.codomain_ &&
           cells_ == o.cells_;
  }

  std::string str() const;  // single-line JSON; round-trips bit-exactly
  static std::optional<StepRV> parse(const std::string& text, const DomainHandle& codomain);

private:
  StepRV(SpaceKind s, DomainHandle d, unsigned dep, std::vector<Element> c)
      : space_(s), codomain_(std::move(d)), depth_(dep), cells_(std::move(c)) {}
  void normalize();
  SpaceKind space_;
  DomainHandle codomain_;
  unsigned depth_;
  std::vector<Element> cells_;
};

// Push-forward valuation nu o r^-1 (Lemma: sum of cell masses per value).
SimpleValuation rv_T(const StepRV& r);

bool rv_leq(const StepRV& r, const StepRV& s);
// Cantor: cell-wise way-below. Unit kinds: each non-bottom cell value must be
// way below s on the cell and its neighbours (closure criterion); on the open
// interval the extreme cells of r must additionally be bottom.
bool rv_way_below(const StepRV& r, const StepRV& s);

// Equality of push-forwards; spaces may differ, codomains must agree.
bool rv_equiv(const StepRV& r, const StepRV& s);

// Given T(r1) below alpha2 (witnessed by a flow), produce r2 above r1 with
// T(r2) = alpha2 by splitting each value class along the flow.
StepRV rv_refine_up(const StepRV& r1, const SimpleValuation& alpha2);

// Given alpha1 below T(r2), produce r1 below r2 with T(r1) = alpha1; the
// returned flow is the measured co-occurrence  nu{r1 = c_i and r2 = d_j}.
std::pair<StepRV, Flow> rv_restrict_down(const StepRV& r2, const SimpleValuation& alpha1);

// Increasing chain of step RVs realizing an increasing chain of valuations.
std::vector<StepRV> rv_chain_from_valuations(std::span<const SimpleValuation> alphas,
                                             SpaceKind space);

// Depth-n approximation: each length-n cell takes the inf of r over it.
StepRV rv_approx_degree(const StepRV& r, unsigned n);

// Membership in the subbasic R-open [q -> O]: nu(r^-1(O)) > q for O the
// union of upper sets of the listed generators.
bool rv_member_q_open(const StepRV& r, const Dyadic& q, std::span<const Element> gens);

// r o h for a coordinate projection of the space's pairing (exact; the
// result deepens to 2x the input depth).
StepRV rv_precompose(const StepRV& r, PairingDescriptor h, unsigned max_depth = 26);
// r o h for a permutation of the first k bit positions (Cantor kinds).
StepRV rv_precompose_bitperm(const StepRV& r, std::span<const unsigned> perm,
                             unsigned max_depth = 26);

// For equivalent Cantor step RVs: a permutation h of depth-N cells with
// r = s o h, returned as the cell index map.
std::vector<size_t> rv_equiv_witness(const StepRV& r, const StepRV& s);
// Apply a cell permutation: result cell i holds s's cell perm[i].
StepRV rv_apply_cellperm(const StepRV& s, std::span<const size_t> perm);

// Pointwise inf of finitely many step RVs over one space and codomain.
StepRV rv_inf(std::span<const StepRV> rs);

}  // namespace rvdom
