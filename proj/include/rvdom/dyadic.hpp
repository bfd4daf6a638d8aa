#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "rvdom/errors.hpp"

namespace rvdom {

using BigInt = boost::multiprecision::cpp_int;

// Exact binary rational m / 2^e. Canonical form: e == 0 or m odd.
class Dyadic {
public:
  Dyadic() : num_(0), exp_(0) {}
  Dyadic(long v) : num_(v), exp_(0) {}
  explicit Dyadic(BigInt v) : num_(std::move(v)), exp_(0) {}
  Dyadic(BigInt num, unsigned exp) : num_(std::move(num)), exp_(exp) { normalize(); }

  const BigInt& num() const { return num_; }
  unsigned exp() const { return exp_; }

  int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return exp_ == 0; }

  Dyadic operator-() const { return Dyadic(-num_, exp_); }
  Dyadic operator+(const Dyadic& o) const;
  Dyadic operator-(const Dyadic& o) const;
  Dyadic operator*(const Dyadic& o) const;
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
  Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

  std::strong_ordering operator<=>(const Dyadic& o) const;
  bool operator==(const Dyadic& o) const { return num_ == o.num_ && exp_ == o.exp_; }

  // Exact scaling by 2^k (k may be negative).
  Dyadic ldexp(long k) const;

  // Largest multiple of 2^-p that is <= value / smallest >= value.
  Dyadic floor_to(unsigned p) const;
  Dyadic ceil_to(unsigned p) const;
  // Integer floor.
  BigInt floor() const;

  // value = m/2^n printed as "m" when n == 0, else "m/2^n".
  std::string str() const;
  // Decimal rendering (exact, dyadics have finite decimal expansions).
  std::string decimal() const;

  // Accepts "m", "m/2^n", "m/d" with d a power of two, and exact decimals
  // such as "0.25". Returns nullopt on malformed or non-dyadic input.
  static std::optional<Dyadic> parse(const std::string& s);

  static Dyadic pow2(long k) { return Dyadic(1).ldexp(k); }

private:
  void normalize();
  BigInt num_;
  unsigned exp_;
};

std::ostream& operator<<(std::ostream& os, const Dyadic& d);

inline Dyadic abs(const Dyadic& d) { return d.sign() < 0 ? -d : d; }
inline const Dyadic& min(const Dyadic& a, const Dyadic& b) { return b < a ? b : a; }
inline const Dyadic& max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

// Directed rational division a/b at scale 2^-p. b != 0.
Dyadic div_down(const Dyadic& a, const Dyadic& b, unsigned p);
Dyadic div_up(const Dyadic& a, const Dyadic& b, unsigned p);
// Exact a/b if the quotient is dyadic.
std::optional<Dyadic> div_exact(const Dyadic& a, const Dyadic& b);

// Compact interval with dyadic endpoints, lo <= hi.
struct DyInterval {
  Dyadic lo, hi;

  DyInterval() = default;
  DyInterval(Dyadic l, Dyadic h) : lo(std::move(l)), hi(std::move(h)) {
    if (hi < lo) fail(errc::domain_violation, "interval with lo > hi");
  }
  static DyInterval point(const Dyadic& d) { return DyInterval(d, d); }

  Dyadic width() const { return hi - lo; }
  bool contains(const Dyadic& x) const { return lo <= x && x <= hi; }
  bool contains(const DyInterval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool is_point() const { return lo == hi; }

  bool operator==(const DyInterval& o) const { return lo == o.lo && hi == o.hi; }

  std::string str() const;
  static std::optional<DyInterval> parse(const std::string& s);
};

std::ostream& operator<<(std::ostream& os, const DyInterval& i);

enum class IvalOp { add, sub, mul, div, min, max };
enum class ElemFn { sqrt, ln, exp, cos2pi, pow };

// Exact endpoint arithmetic; div rounds outward at 2^-prec when the
// quotient endpoints are not dyadic (0 must not lie in J).
DyInterval ival_arith(IvalOp op, const DyInterval& I, const DyInterval& J, unsigned prec = 64);

// Outward-rounded enclosures of elementary functions. The result contains
// the true image and exceeds its width by at most 2^-prec. pow_a is used
// only for ElemFn::pow (inputs restricted to [0,1] there).
DyInterval ival_elem(ElemFn fn, const DyInterval& I, unsigned prec, const Dyadic& pow_a = Dyadic(0));

// Scalar enclosures (width <= 2^-prec); the building blocks of ival_elem.
DyInterval sqrt_enclosure(const Dyadic& x, unsigned prec);
DyInterval ln_enclosure(const Dyadic& x, unsigned prec);
DyInterval exp_enclosure(const Dyadic& x, unsigned prec);
DyInterval cos2pi_enclosure(const Dyadic& x, unsigned prec);
DyInterval pow_enclosure(const Dyadic& x, const Dyadic& a, unsigned prec);
DyInterval pi_enclosure(unsigned prec);
DyInterval ln2_enclosure(unsigned prec);

}  // namespace rvdom
