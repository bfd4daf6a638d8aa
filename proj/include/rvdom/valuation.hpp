#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rvdom/domain.hpp"
#include "rvdom/parallel.hpp"

namespace rvdom {

// Normalised simple valuation: sum of w_i * delta(e_i) with positive dyadic
// weights summing to one and pairwise distinct elements, kept sorted.
class SimpleValuation {
public:
  static SimpleValuation make(DomainHandle domain, std::vector<std::pair<Dyadic, Element>> atoms);
  static SimpleValuation point(DomainHandle domain, Element e);

  const DomainHandle& domain() const { return domain_; }
  const std::vector<std::pair<Dyadic, Element>>& atoms() const { return atoms_; }
  size_t size() const { return atoms_.size(); }

  // Index of the bottom atom, or -1.
  int bottom_atom() const;

  bool operator==(const SimpleValuation& o) const;

  std::string str() const;
  static std::optional<SimpleValuation> parse(const std::string& s, const DomainHandle& dom);

private:
  SimpleValuation(DomainHandle d, std::vector<std::pair<Dyadic, Element>> a)
      : domain_(std::move(d)), atoms_(std::move(a)) {}
  DomainHandle domain_;
  std::vector<std::pair<Dyadic, Element>> atoms_;
};

// Mass transport witnessing an order relation between two simple valuations.
struct Flow {
  std::map<std::pair<int, int>, Dyadic> entries;  // (i,j) -> t_ij, only t_ij > 0

  Dyadic row_sum(int i) const;
  Dyadic col_sum(int j) const;
  std::string str(const SimpleValuation& alpha, const SimpleValuation& beta) const;
};

// Throws unless the flow has exact marginals and its support satisfies
// edge_ok; when bottom_row >= 0 every (bottom_row, j) entry must be present.
void validate_flow(const SimpleValuation& alpha, const SimpleValuation& beta, const Flow& flow,
                   bool way_below_edges, int bottom_row = -1);

struct OrderResult {
  bool holds = false;
  std::optional<Flow> flow;  // present iff holds
};

// Splitting lemma: alpha below beta iff a flow with support on pairs
// c_i below d_j exists.
OrderResult val_leq(const SimpleValuation& alpha, const SimpleValuation& beta);

// Way-below splitting lemma: additionally requires a bottom atom of alpha
// whose flow row is strictly positive everywhere, and way-below edges.
OrderResult val_way_below(const SimpleValuation& alpha, const SimpleValuation& beta);

// Subset criterion: sigma has a bottom atom and every non-empty subset J of
// the remaining atoms satisfies sum_J p_j < beta(union of up-sets of d_j).
bool val_way_below_subset_test(const SimpleValuation& sigma, const SimpleValuation& beta);

// Mass of the open set  union of upper sets of the listed basis elements.
Dyadic mass_on_open(const SimpleValuation& alpha, std::span<const Element> gens,
                    Exec exec = Exec::serial);

// Stage-wise lower bounds of the limit mass along an increasing chain.
std::vector<Dyadic> lower_bounds(std::span<const SimpleValuation> chain,
                                 std::span<const Element> gens, bool validate_chain = true);

struct BayesOptions {
  bool validate_chain = true;
  unsigned precision = 64;  // rounding grid for the ratio bounds
  Exec exec = Exec::serial;
};

// Stage-wise enclosures of the conditional probability p(U|V); exteriors are
// caller-supplied per the computability theorem's hypotheses.
std::vector<DyInterval> bayes_bounds(std::span<const SimpleValuation> chain,
                                     std::span<const Element> U, std::span<const Element> V,
                                     std::span<const Element> V_ext,
                                     std::span<const Element> UV_ext,  // may be empty
                                     const BayesOptions& opts = {});

}  // namespace rvdom
