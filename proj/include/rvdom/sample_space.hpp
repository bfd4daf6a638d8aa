#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rvdom/dyadic.hpp"

namespace rvdom {

// The four sample spaces: Cantor space, its no-trailing-zeros subspace,
// the closed unit interval and the open unit interval.
enum class SpaceKind { cantor, cantor_zero, unit_closed, unit_open };

inline bool is_cantor_kind(SpaceKind k) {
  return k == SpaceKind::cantor || k == SpaceKind::cantor_zero;
}
inline bool is_unit_kind(SpaceKind k) { return !is_cantor_kind(k); }

const char* space_name(SpaceKind k);
std::optional<SpaceKind> parse_space(const std::string& s);

// Finite union of cylinders (Cantor kinds) or of open dyadic intervals
// (unit kinds), kept canonical: cylinders form a fully merged antichain;
// intervals are disjoint, sorted and merged across touching endpoints.
class BasicOpen {
public:
  static BasicOpen empty(SpaceKind kind);
  static BasicOpen whole(SpaceKind kind);
  static BasicOpen cylinders(SpaceKind kind, std::vector<std::string> cyls);
  static BasicOpen intervals(SpaceKind kind, std::vector<std::pair<Dyadic, Dyadic>> ivs);
  // The depth-`depth` cell number `index`: a cylinder or open dyadic interval.
  static BasicOpen cell(SpaceKind kind, unsigned depth, unsigned long index);

  SpaceKind kind() const { return kind_; }
  bool is_empty() const { return cyls_.empty() && ivs_.empty(); }
  const std::vector<std::string>& cyls() const { return cyls_; }
  const std::vector<std::pair<Dyadic, Dyadic>>& ivals() const { return ivs_; }

  Dyadic measure() const;

  bool operator==(const BasicOpen& o) const {
    return kind_ == o.kind_ && cyls_ == o.cyls_ && ivs_ == o.ivs_;
  }

  std::string str() const;
  static std::optional<BasicOpen> parse(const std::string& s, SpaceKind kind);

private:
  explicit BasicOpen(SpaceKind k) : kind_(k) {}
  SpaceKind kind_;
  std::vector<std::string> cyls_;
  std::vector<std::pair<Dyadic, Dyadic>> ivs_;
};

enum class BoolOp { union_, intersect, complement_interior };

BasicOpen boolean(BoolOp op, const BasicOpen& A, const BasicOpen& B);
inline BasicOpen complement_interior(const BasicOpen& A) {
  return boolean(BoolOp::complement_interior, A, A);
}

// Way-below on the open-set lattice. Cantor: subset of clopens. Unit kinds:
// closure containment, where the closure (taken in R) must stay clear of
// 0 and 1. CantorZero has no usable criterion and is rejected.
bool open_way_below(const BasicOpen& U, const BasicOpen& V);

// Even/odd position split of a bit string: even_i = s_2i, odd_i = s_2i+1.
std::pair<std::string, std::string> split_indices(const std::string& s);

}  // namespace rvdom
