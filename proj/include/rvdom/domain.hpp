#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rvdom/dyadic.hpp"
#include "rvdom/errors.hpp"

namespace rvdom {

// Finite bounded-complete poset with named elements. Construction validates
// acyclicity of the Hasse relation, that bottom lies below everything, and
// that every bounded pair has a least upper bound.
class Poset {
public:
  static Poset make(std::vector<std::string> names,
                    std::vector<std::pair<std::string, std::string>> hasse_edges,
                    const std::string& bottom);
  // Line-oriented description: "elem NAME...", "edge LOWER UPPER",
  // "bottom NAME", '#' comments.
  static Poset parse(const std::string& text);

  int size() const { return static_cast<int>(names_.size()); }
  int bottom() const { return bottom_; }
  const std::string& name(int i) const { return names_[i]; }
  int index(const std::string& name) const;  // -1 when absent
  bool leq(int a, int b) const { return leq_[a][b]; }
  std::optional<int> join(int a, int b) const;
  int inf(int a, int b) const;

  bool operator==(const Poset& o) const {
    return names_ == o.names_ && leq_ == o.leq_ && bottom_ == o.bottom_;
  }

private:
  std::vector<std::string> names_;
  std::vector<std::vector<bool>> leq_;  // reflexive-transitive closure
  int bottom_ = -1;
};

enum class DomainKind { finite_poset, interval_real, interval_unit, product };

// Immutable handle to a bounded-complete domain: a finite poset, the interval
// domain over R or [0,1], or a binary product of domains.
class DomainHandle {
public:
  static DomainHandle finite_poset(Poset p);
  static DomainHandle interval_real();
  static DomainHandle interval_unit();
  static DomainHandle product(DomainHandle left, DomainHandle right);

  DomainKind kind() const { return node_->kind; }
  const Poset& poset() const { return *node_->poset; }
  DomainHandle left() const { return DomainHandle(node_->left); }
  DomainHandle right() const { return DomainHandle(node_->right); }

  bool operator==(const DomainHandle& o) const;
  std::string str() const;
  // "ireal" | "iunit" | "poset:FILE" | "(D x D)"
  static DomainHandle parse_spec(const std::string& spec);

private:
  struct Node {
    DomainKind kind;
    std::shared_ptr<const Poset> poset;
    std::shared_ptr<const Node> left, right;
  };
  explicit DomainHandle(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// An element of some DomainHandle. Interval nullopt is the bottom of the
// real interval domain (the whole line); on the unit domain bottom is kept
// canonically as the explicit interval [0,1].
class Element {
public:
  struct PairData;

  static Element poset_elem(std::string name);
  static Element interval(DyInterval iv);
  static Element interval_bottom();
  static Element pair(Element first, Element second);

  bool is_poset() const { return std::holds_alternative<std::string>(v_); }
  bool is_interval() const { return std::holds_alternative<std::optional<DyInterval>>(v_); }
  bool is_pair() const { return std::holds_alternative<std::shared_ptr<const PairData>>(v_); }

  const std::string& poset_name() const { return std::get<std::string>(v_); }
  const std::optional<DyInterval>& ival() const {
    return std::get<std::optional<DyInterval>>(v_);
  }
  const Element& first() const;
  const Element& second() const;

  bool operator==(const Element& o) const;
  bool operator<(const Element& o) const;  // arbitrary total order for canonical sorting

  std::string str() const;
  static std::optional<Element> parse(const std::string& text, const DomainHandle& dom);

private:
  std::variant<std::string, std::optional<DyInterval>, std::shared_ptr<const PairData>> v_;
};

struct Element::PairData {
  Element first, second;
};

// Validates shape and brings an element to canonical form for the domain
// (unit-domain bottom becomes [0,1]; unit intervals must lie inside [0,1]).
Element canon_element(const DomainHandle& D, const Element& e);
Element bottom_element(const DomainHandle& D);

bool below(const DomainHandle& D, const Element& a, const Element& b);
bool way_below(const DomainHandle& D, const Element& a, const Element& b);
// nullopt signals an unbounded pair.
std::optional<Element> join(const DomainHandle& D, const Element& a, const Element& b);
Element inf(const DomainHandle& D, std::span<const Element> xs);
Element inf2(const DomainHandle& D, const Element& a, const Element& b);
std::vector<Element> basis_enum(const DomainHandle& D, unsigned level);

}  // namespace rvdom
