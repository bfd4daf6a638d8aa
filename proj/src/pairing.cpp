#include "rvdom/pairing.hpp"

#include "rvdom/errors.hpp"
#include "rvdom/sample_space.hpp"

namespace rvdom {

std::string interleave(const std::string& x, const std::string& y) {
  if (x.size() != y.size() && x.size() != y.size() + 1)
    fail(errc::length_mismatch, "interleave needs |x| in {|y|, |y|+1}");
  std::string w;
  w.reserve(x.size() + y.size());
  for (size_t i = 0; i < x.size(); ++i) {
    w += x[i];
    if (i < y.size()) w += y[i];
  }
  return w;
}

std::pair<std::string, std::string> deinterleave(const std::string& w) {
  return split_indices(w);
}

AffineMap2 AffineMap2::identity() {
  return {Dyadic(1), Dyadic(0), Dyadic(0), Dyadic(1), Dyadic(0), Dyadic(0)};
}

AffineMap2 AffineMap2::hilbert_map(int digit) {
  const Dyadic h(1, 1), z(0), one(1);
  switch (digit) {
    case 0: return {z, h, h, z, z, z};
    case 1: return {h, z, z, h, z, h};
    case 2: return {h, z, z, h, h, h};
    case 3: return {z, -h, -h, z, one, h};
  }
  fail(errc::bad_digit, "quaternary digit must be 0..3");
}

AffineMap2 AffineMap2::then_inside(const AffineMap2& g) const {
  // (this o g)(v) = M_this (M_g v + b_g) + b_this
  return {m00 * g.m00 + m01 * g.m10, m00 * g.m01 + m01 * g.m11,
          m10 * g.m00 + m11 * g.m10, m10 * g.m01 + m11 * g.m11,
          m00 * g.b0 + m01 * g.b1 + b0, m10 * g.b0 + m11 * g.b1 + b1};
}

std::pair<DyInterval, DyInterval> AffineMap2::image_of_unit_square() const {
  auto row = [](const Dyadic& a, const Dyadic& b, const Dyadic& off) {
    Dyadic lo = off, hi = off;
    (a.sign() < 0 ? lo : hi) += a;
    (b.sign() < 0 ? lo : hi) += b;
    return DyInterval(lo, hi);
  };
  return {row(m00, m01, b0), row(m10, m11, b1)};
}

std::pair<DyInterval, DyInterval> hilbert_cell(const std::string& quat_digits) {
  AffineMap2 m = AffineMap2::identity();
  for (char c : quat_digits) {
    if (c < '0' || c > '3') fail(errc::bad_digit, "quaternary digit '" + std::string(1, c) + "'");
    m = m.then_inside(AffineMap2::hilbert_map(c - '0'));
  }
  return m.image_of_unit_square();
}

std::pair<DyInterval, DyInterval> hilbert_point(const std::string& quat_prefix) {
  return hilbert_cell(quat_prefix);
}

std::vector<std::string> hilbert_preimage(const DyInterval& xr, const DyInterval& yr, unsigned i) {
  for (const Dyadic& c : {xr.lo, xr.hi, yr.lo, yr.hi}) {
    if (c.exp() > i) fail(errc::misaligned, c.str() + " not on the 2^-" + std::to_string(i) + " grid");
    if (c.sign() < 0 || Dyadic(1) < c) fail(errc::misaligned, "rectangle outside the unit square");
  }
  std::vector<std::string> out;
  std::string w(i, '0');
  unsigned long total = 1UL << (2 * i);
  for (unsigned long code = 0; code < total; ++code) {
    unsigned long c = code;
    for (unsigned k = 0; k < i; ++k) {
      w[i - 1 - k] = static_cast<char>('0' + (c & 3));
      c >>= 2;
    }
    auto [cx, cy] = hilbert_cell(w);
    if (xr.contains(cx) && yr.contains(cy)) out.push_back(w);
  }
  return out;
}

std::string interval_to_prefix(const DyInterval& iv, unsigned max_len) {
  for (unsigned L = max_len;; --L) {
    Dyadic scaled = iv.lo.ldexp(L);
    BigInt m = scaled.floor();
    if (m == (BigInt(1) << L)) --m;  // lo == 1 sits in the last cylinder
    if (iv.hi <= Dyadic(m + 1, 0).ldexp(-static_cast<long>(L))) {
      std::string p(L, '0');
      for (unsigned k = 0; k < L; ++k)
        if (boost::multiprecision::bit_test(m, L - 1 - k)) p[k] = '1';
      return p;
    }
    if (L == 0) return "";
  }
}

std::string project(PairingRole role, PairingKind kind, const std::string& prefix) {
  if (role == PairingRole::full_h)
    fail(errc::precondition_failed, "projection needs role h1 or h2");
  if (kind == PairingKind::interleave) {
    auto [even, odd] = split_indices(prefix);
    return role == PairingRole::h1 ? even : odd;
  }
  auto [x, y] = hilbert_point(prefix);
  return interval_to_prefix(role == PairingRole::h1 ? x : y,
                            static_cast<unsigned>(prefix.size()));
}

}  // namespace rvdom
