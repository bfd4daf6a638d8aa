#include "rvdom/dyadic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

namespace rvdom {

namespace {

// cpp_int division truncates toward zero; these round toward -inf / +inf.
BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

BigInt ceil_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if (a % b != 0 && ((a < 0) == (b < 0))) ++q;
  return q;
}

BigInt pow2i(unsigned k) { return BigInt(1) << k; }

bool is_pow2(const BigInt& v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

void Dyadic::normalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  unsigned tz = boost::multiprecision::lsb(boost::multiprecision::abs(num_));
  unsigned drop = std::min<unsigned>(tz, exp_);
  if (drop > 0) {
    num_ >>= drop;
    exp_ -= drop;
  }
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
  unsigned e = std::max(exp_, o.exp_);
  return Dyadic(num_ * pow2i(e - exp_) + o.num_ * pow2i(e - o.exp_), e);
}

Dyadic Dyadic::operator-(const Dyadic& o) const {
  unsigned e = std::max(exp_, o.exp_);
  return Dyadic(num_ * pow2i(e - exp_) - o.num_ * pow2i(e - o.exp_), e);
}

Dyadic Dyadic::operator*(const Dyadic& o) const { return Dyadic(num_ * o.num_, exp_ + o.exp_); }

std::strong_ordering Dyadic::operator<=>(const Dyadic& o) const {
  unsigned e = std::max(exp_, o.exp_);
  BigInt l = num_ * pow2i(e - exp_);
  BigInt r = o.num_ * pow2i(e - o.exp_);
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Dyadic Dyadic::ldexp(long k) const {
  if (num_ == 0 || k == 0) return *this;
  if (k > 0) {
    unsigned kk = static_cast<unsigned>(k);
    if (exp_ >= kk) return Dyadic(num_, exp_ - kk);
    return Dyadic(num_ << (kk - exp_), 0);
  }
  return Dyadic(num_, exp_ + static_cast<unsigned>(-k));
}

Dyadic Dyadic::floor_to(unsigned p) const {
  if (exp_ <= p) return *this;
  return Dyadic(floor_div(num_, pow2i(exp_ - p)), p);
}

Dyadic Dyadic::ceil_to(unsigned p) const {
  if (exp_ <= p) return *this;
  return Dyadic(ceil_div(num_, pow2i(exp_ - p)), p);
}

BigInt Dyadic::floor() const { return floor_to(0).num(); }

std::string Dyadic::str() const {
  std::ostringstream os;
  os << num_;
  if (exp_ != 0) os << "/2^" << exp_;
  return os.str();
}

std::string Dyadic::decimal() const {
  if (exp_ == 0) {
    std::ostringstream os;
    os << num_;
    return os.str();
  }
  BigInt five = 1;
  for (unsigned i = 0; i < exp_; ++i) five *= 5;
  BigInt scaled = num_ * five;  // value = scaled / 10^exp_
  bool neg = scaled < 0;
  std::ostringstream os;
  os << boost::multiprecision::abs(scaled);
  std::string digits = os.str();
  if (digits.size() <= exp_) digits.insert(0, exp_ + 1 - digits.size(), '0');
  digits.insert(digits.size() - exp_, ".");
  return (neg ? "-" : "") + digits;
}

std::optional<Dyadic> Dyadic::parse(const std::string& s) {
  if (s.empty()) return std::nullopt;
  size_t i = 0;
  bool neg = false;
  if (s[i] == '-' || s[i] == '+') {
    neg = s[i] == '-';
    ++i;
  }
  auto digits = [&](BigInt& out) -> bool {
    size_t start = i;
    out = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
      out = out * 10 + (s[i] - '0');
      ++i;
    }
    return i > start;
  };
  BigInt whole;
  if (!digits(whole)) return std::nullopt;
  if (i == s.size()) return Dyadic(neg ? -whole : whole, 0);
  if (s[i] == '.') {
    ++i;
    size_t fs = i;
    BigInt frac;
    if (!digits(frac) || i != s.size()) return std::nullopt;
    unsigned L = static_cast<unsigned>(i - fs);
    BigInt ten = 1;
    for (unsigned k = 0; k < L; ++k) ten *= 10;
    BigInt num = whole * ten + frac;
    BigInt five = 1;
    for (unsigned k = 0; k < L; ++k) five *= 5;
    if (num % five != 0) return std::nullopt;  // not a dyadic rational
    num /= five;
    return Dyadic(neg ? -num : num, L);
  }
  if (s[i] != '/') return std::nullopt;
  ++i;
  if (i + 1 < s.size() && s[i] == '2' && s[i + 1] == '^') {
    i += 2;
    BigInt e;
    if (!digits(e) || i != s.size() || e > 1000000) return std::nullopt;
    return Dyadic(neg ? -whole : whole, static_cast<unsigned>(e));
  }
  BigInt den;
  if (!digits(den) || i != s.size() || !is_pow2(den)) return std::nullopt;
  return Dyadic(neg ? -whole : whole, boost::multiprecision::lsb(den));
}

std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.str(); }

Dyadic div_down(const Dyadic& a, const Dyadic& b, unsigned p) {
  if (b.is_zero()) fail(errc::domain_violation, "division by zero");
  // a/b = (a.num * 2^(b.exp)) / (b.num * 2^(a.exp)); scale to 2^-p grid.
  BigInt num = a.num() * pow2i(b.exp() + p);
  BigInt den = b.num() * pow2i(a.exp());
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Dyadic(floor_div(num, den), p);
}

Dyadic div_up(const Dyadic& a, const Dyadic& b, unsigned p) {
  if (b.is_zero()) fail(errc::domain_violation, "division by zero");
  BigInt num = a.num() * pow2i(b.exp() + p);
  BigInt den = b.num() * pow2i(a.exp());
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Dyadic(ceil_div(num, den), p);
}

std::optional<Dyadic> div_exact(const Dyadic& a, const Dyadic& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return Dyadic(0);
  BigInt num = a.num();
  BigInt den = b.num();
  bool neg = (num < 0) != (den < 0);
  num = boost::multiprecision::abs(num);
  den = boost::multiprecision::abs(den);
  BigInt g = boost::multiprecision::gcd(num, den);
  num /= g;
  den /= g;
  if (!is_pow2(den)) return std::nullopt;
  long shift = static_cast<long>(b.exp()) - static_cast<long>(a.exp()) -
               static_cast<long>(boost::multiprecision::lsb(den));
  return Dyadic(neg ? -num : num, 0).ldexp(shift);
}

std::string DyInterval::str() const { return "[" + lo.str() + "," + hi.str() + "]"; }

std::optional<DyInterval> DyInterval::parse(const std::string& s) {
  if (s.size() < 5 || s.front() != '[' || s.back() != ']') return std::nullopt;
  size_t comma = s.find(',');
  if (comma == std::string::npos) return std::nullopt;
  auto lo = Dyadic::parse(s.substr(1, comma - 1));
  auto hi = Dyadic::parse(s.substr(comma + 1, s.size() - comma - 2));
  if (!lo || !hi || *hi < *lo) return std::nullopt;
  return DyInterval(*lo, *hi);
}

std::ostream& operator<<(std::ostream& os, const DyInterval& i) { return os << i.str(); }

DyInterval ival_arith(IvalOp op, const DyInterval& I, const DyInterval& J, unsigned prec) {
  switch (op) {
    case IvalOp::add: return DyInterval(I.lo + J.lo, I.hi + J.hi);
    case IvalOp::sub: return DyInterval(I.lo - J.hi, I.hi - J.lo);
    case IvalOp::mul: {
      Dyadic c[4] = {I.lo * J.lo, I.lo * J.hi, I.hi * J.lo, I.hi * J.hi};
      return DyInterval(std::min({c[0], c[1], c[2], c[3]}), std::max({c[0], c[1], c[2], c[3]}));
    }
    case IvalOp::div: {
      if (J.lo.sign() <= 0 && J.hi.sign() >= 0)
        fail(errc::division_by_interval_containing_zero, "0 in divisor " + J.str());
      Dyadic lo, hi;
      bool first = true;
      for (const Dyadic* a : {&I.lo, &I.hi})
        for (const Dyadic* b : {&J.lo, &J.hi}) {
          Dyadic qd = div_down(*a, *b, prec), qu = div_up(*a, *b, prec);
          if (first) {
            lo = qd;
            hi = qu;
            first = false;
          } else {
            lo = min(lo, qd);
            hi = max(hi, qu);
          }
        }
      return DyInterval(lo, hi);
    }
    case IvalOp::min: return DyInterval(min(I.lo, J.lo), min(I.hi, J.hi));
    case IvalOp::max: return DyInterval(max(I.lo, J.lo), max(I.hi, J.hi));
  }
  fail(errc::domain_violation, "bad interval op");
}

// ---------------------------------------------------------------------------
// Series-based enclosures. All intermediate work is done on integers scaled
// by 2^S with directed rounding; S grows with the requested precision so
// results at finer precisions are nested within coarser ones.
// ---------------------------------------------------------------------------

namespace {

struct Scaled {
  BigInt lo, hi;  // value in [lo/2^S, hi/2^S]
};

// atan(1/q) for integer q >= 2, alternating series, K terms.
Scaled atan_inv(unsigned q, unsigned K, unsigned S) {
  BigInt qq = BigInt(q) * q;
  BigInt qpow = q;  // q^(2k+1)
  BigInt sdown = 0, sup = 0;
  BigInt one = pow2i(S);
  for (unsigned k = 0; k < K; ++k) {
    BigInt den = qpow * (2 * k + 1);
    BigInt tdown = floor_div(one, den), tup = ceil_div(one, den);
    if (k % 2 == 0) {
      sdown += tdown;
      sup += tup;
    } else {
      sdown -= tup;
      sup -= tdown;
    }
    qpow *= qq;
  }
  BigInt trem = ceil_div(one, qpow * (2 * K + 1));
  return {sdown - trem, sup + trem};
}

Scaled scaled_pi(unsigned S) {
  Scaled a5 = atan_inv(5, S / 4 + 4, S);
  Scaled a239 = atan_inv(239, S / 15 + 4, S);
  return {16 * a5.lo - 4 * a239.hi, 16 * a5.hi - 4 * a239.lo};
}

// atanh(zn/zd) for 0 <= zn/zd < 1/2, positive-term series.
Scaled scaled_atanh(const BigInt& zn, const BigInt& zd, unsigned S) {
  BigInt one = pow2i(S);
  BigInt npow = zn, dpow = zd;
  BigInt sdown = 0, sup = 0;
  BigInt zn2 = zn * zn, zd2 = zd * zd;
  unsigned k = 0;
  BigInt tup;
  for (;;) {
    BigInt num = one * npow;
    BigInt den = dpow * (2 * k + 1);
    BigInt tdown = floor_div(num, den);
    tup = ceil_div(num, den);
    sdown += tdown;
    sup += tup;
    if (tup <= 1 && k >= 1) break;
    npow *= zn2;
    dpow *= zd2;
    ++k;
    if (k > 8 * S + 64) break;  // z < 1/2 makes this unreachable
  }
  // remainder < t_K * z^2/(1-z^2) <= t_K/3 for z <= 1/2; t_K <= tup+1 scaled
  return {sdown, sup + tup + 1};
}

Scaled scaled_ln2(unsigned S) {
  Scaled at = scaled_atanh(1, 3, S);
  return {2 * at.lo, 2 * at.hi};
}

std::mutex cache_mu;
std::map<unsigned, Scaled> pi_cache, ln2_cache;

Scaled cached_pi(unsigned S) {
  std::lock_guard<std::mutex> g(cache_mu);
  auto it = pi_cache.find(S);
  if (it == pi_cache.end()) it = pi_cache.emplace(S, scaled_pi(S)).first;
  return it->second;
}

Scaled cached_ln2(unsigned S) {
  std::lock_guard<std::mutex> g(cache_mu);
  auto it = ln2_cache.find(S);
  if (it == ln2_cache.end()) it = ln2_cache.emplace(S, scaled_ln2(S)).first;
  return it->second;
}

// exp(f) for dyadic 0 <= f <= 1, positive-term series.
Scaled scaled_exp_frac(const Dyadic& f, unsigned S) {
  BigInt one = pow2i(S);
  BigInt sdown = 0, sup = 0;
  // t_k = f^k / k! scaled; f = mf/2^ef
  BigInt num = one;  // one * mf^k
  BigInt den = 1;    // 2^(k*ef) * k!
  BigInt two_ef = pow2i(f.exp());
  unsigned k = 0;
  BigInt tup;
  for (;;) {
    BigInt tdown = floor_div(num, den);
    tup = ceil_div(num, den);
    sdown += tdown;
    sup += tup;
    if (tup <= 1 && k >= 2) break;
    ++k;
    num *= f.num();
    den *= two_ef * k;
    if (k > 8 * S + 64) break;
  }
  // remainder <= 2 * t_K for f <= 1
  return {sdown, sup + 2 * (tup + 1)};
}

Scaled scaled_mul_pos(const Scaled& a, const Scaled& b, unsigned S) {
  return {floor_div(a.lo * b.lo, pow2i(S)), ceil_div(a.hi * b.hi, pow2i(S))};
}

// v^n for scaled v with 0 < lo <= hi, n >= 1.
Scaled scaled_pow_pos(const Scaled& v, unsigned n, unsigned S) {
  Scaled r = v;
  for (unsigned i = 1; i < n; ++i) r = scaled_mul_pos(r, v, S);
  return r;
}

Scaled scaled_recip_pos(const Scaled& v, unsigned S) {
  BigInt sq = pow2i(2 * S);
  return {floor_div(sq, v.hi), ceil_div(sq, v.lo)};
}

DyInterval from_scaled(const Scaled& s, unsigned S) {
  return DyInterval(Dyadic(s.lo, S), Dyadic(s.hi, S));
}

// cos(theta) for dyadic 0 <= theta <= 1.6, alternating series.
Scaled scaled_cos(const Dyadic& theta, unsigned S) {
  BigInt one = pow2i(S);
  BigInt sdown = 0, sup = 0;
  BigInt num = one;  // one * mt^(2k)
  BigInt den = 1;    // 2^(2k*et) * (2k)!
  BigInt mt2 = theta.num() * theta.num();
  BigInt two_et2 = pow2i(2 * theta.exp());
  unsigned k = 0;
  BigInt tup;
  for (;;) {
    BigInt tdown = floor_div(num, den);
    tup = ceil_div(num, den);
    if (k % 2 == 0) {
      sdown += tdown;
      sup += tup;
    } else {
      sdown -= tup;
      sup -= tdown;
    }
    if (tup <= 1 && k >= 2) break;
    ++k;
    num *= mt2;
    den *= two_et2 * (2 * k - 1) * (2 * k);
    if (k > 8 * S + 64) break;
  }
  return {sdown - (tup + 1), sup + (tup + 1)};
}

}  // namespace

DyInterval pi_enclosure(unsigned prec) { return from_scaled(cached_pi(prec + 16), prec + 16); }

DyInterval ln2_enclosure(unsigned prec) { return from_scaled(cached_ln2(prec + 16), prec + 16); }

DyInterval sqrt_enclosure(const Dyadic& x, unsigned prec) {
  if (x.sign() < 0) fail(errc::domain_violation, "sqrt of negative " + x.str());
  if (x.is_zero()) return DyInterval::point(Dyadic(0));
  unsigned P = std::max(prec + 2, (x.exp() + 1) / 2 + 1);
  BigInt n = x.num() * pow2i(2 * P - x.exp());
  BigInt k = boost::multiprecision::sqrt(n);
  if (k * k == n) return DyInterval::point(Dyadic(k, P));
  return DyInterval(Dyadic(k, P), Dyadic(k + 1, P));
}

DyInterval ln_enclosure(const Dyadic& x, unsigned prec) {
  if (x.sign() <= 0) fail(errc::domain_violation, "ln of non-positive " + x.str());
  unsigned S = prec + 16;
  BigInt m = x.num();
  unsigned bl = boost::multiprecision::msb(m);
  long shift = static_cast<long>(bl) - static_cast<long>(x.exp());
  Scaled l2 = cached_ln2(S);
  Scaled base{0, 0};
  if (m != pow2i(bl)) {
    // u = m/2^bl in (1,2); ln u = 2*atanh((m-2^bl)/(m+2^bl))
    Scaled at = scaled_atanh(m - pow2i(bl), m + pow2i(bl), S);
    base = {2 * at.lo, 2 * at.hi};
  }
  if (shift >= 0) {
    base.lo += shift * l2.lo;
    base.hi += shift * l2.hi;
  } else {
    base.lo += shift * l2.hi;
    base.hi += shift * l2.lo;
  }
  return from_scaled(base, S);
}

DyInterval exp_enclosure(const Dyadic& x, unsigned prec) {
  BigInt nfloor = x.floor();
  if (boost::multiprecision::abs(nfloor) > 1u << 20)
    fail(errc::domain_violation, "exp argument too large: " + x.str());
  long n = static_cast<long>(nfloor);
  // value bits grow like 1.45*n for n > 0; pad the working scale accordingly
  unsigned S = prec + 16 + (n > 0 ? static_cast<unsigned>(2 * n + 4) : 0);
  Dyadic f = x - Dyadic(n);
  Scaled ef = scaled_exp_frac(f, S);
  if (n == 0) return from_scaled(ef, S);
  Scaled e1 = scaled_exp_frac(Dyadic(1), S);
  Scaled en = scaled_pow_pos(e1, static_cast<unsigned>(n > 0 ? n : -n), S);
  if (n < 0) en = scaled_recip_pos(en, S);
  return from_scaled(scaled_mul_pos(en, ef, S), S);
}

DyInterval cos2pi_enclosure(const Dyadic& x, unsigned prec) {
  Dyadic r = x - Dyadic(x.floor());  // reduce mod 1
  bool negate = false;
  if (Dyadic(1, 1) < r) r = Dyadic(1) - r;
  if (Dyadic(1, 2) < r) {
    r = Dyadic(1, 1) - r;
    negate = true;
  }
  unsigned S = prec + 16;
  Scaled pi = cached_pi(S);
  // theta = 2*pi*r in [0, pi/2]
  BigInt tl = floor_div(2 * r.num() * pi.lo, pow2i(r.exp()));
  BigInt th = ceil_div(2 * r.num() * pi.hi, pow2i(r.exp()));
  Scaled clo = scaled_cos(Dyadic(th, S), S);
  Scaled chi = scaled_cos(Dyadic(tl, S), S);
  Scaled res{clo.lo, chi.hi};
  if (negate) res = {-chi.hi, -clo.lo};
  DyInterval out = from_scaled(res, S);
  // cos image is within [-1,1]; intersecting is sound and keeps bounds tight
  return DyInterval(max(out.lo, Dyadic(-1)), min(out.hi, Dyadic(1)));
}

DyInterval pow_enclosure(const Dyadic& x, const Dyadic& a, unsigned prec) {
  if (x.sign() < 0 || Dyadic(1) < x) fail(errc::domain_violation, "pow base outside [0,1]");
  if (a.is_zero() || x == Dyadic(1)) return DyInterval::point(Dyadic(1));
  if (x.is_zero()) {
    if (a.sign() > 0) return DyInterval::point(Dyadic(0));
    fail(errc::domain_violation, "0^a with a < 0");
  }
  if (a.is_integer()) {
    BigInt n = a.num();
    bool neg = n < 0;
    unsigned un = static_cast<unsigned>(boost::multiprecision::abs(n));
    Dyadic v(1);
    for (unsigned i = 0; i < un; ++i) v *= x;
    if (!neg) return DyInterval::point(v);
    return DyInterval(div_down(Dyadic(1), v, prec + 2), div_up(Dyadic(1), v, prec + 2));
  }
  // general case: exp(a * ln x)
  DyInterval lnx0 = ln_enclosure(x, prec + 8);
  Dyadic t0 = max(abs(lnx0.lo * a), abs(lnx0.hi * a));
  unsigned amp = static_cast<unsigned>(2 * t0.floor() + 4);  // |result| <= e^|t|
  unsigned abits = boost::multiprecision::msb(boost::multiprecision::abs(a.num()) + 1) + 2;
  unsigned q = prec + 10 + amp + abits;
  DyInterval lnx = ln_enclosure(x, q);
  DyInterval t = ival_arith(IvalOp::mul, lnx, DyInterval::point(a));
  return DyInterval(exp_enclosure(t.lo, prec + 2).lo, exp_enclosure(t.hi, prec + 2).hi);
}

DyInterval ival_elem(ElemFn fn, const DyInterval& I, unsigned prec, const Dyadic& pow_a) {
  switch (fn) {
    case ElemFn::sqrt:
      return DyInterval(sqrt_enclosure(I.lo, prec + 1).lo, sqrt_enclosure(I.hi, prec + 1).hi);
    case ElemFn::ln:
      return DyInterval(ln_enclosure(I.lo, prec + 1).lo, ln_enclosure(I.hi, prec + 1).hi);
    case ElemFn::exp:
      return DyInterval(exp_enclosure(I.lo, prec + 1).lo, exp_enclosure(I.hi, prec + 1).hi);
    case ElemFn::cos2pi: {
      if (Dyadic(1) <= I.width()) return DyInterval(Dyadic(-1), Dyadic(1));
      DyInterval a = cos2pi_enclosure(I.lo, prec + 1);
      DyInterval b = cos2pi_enclosure(I.hi, prec + 1);
      Dyadic lo = min(a.lo, b.lo), hi = max(a.hi, b.hi);
      // critical points: cos2pi attains 1 at integers, -1 at half-integers
      Dyadic fl = Dyadic(I.lo.floor());
      if (I.contains(fl) || I.contains(fl + Dyadic(1))) hi = Dyadic(1);
      Dyadic hf = fl + Dyadic(1, 1);
      if (I.contains(hf) || I.contains(hf + Dyadic(1)) || I.contains(hf - Dyadic(1)))
        lo = Dyadic(-1);
      return DyInterval(lo, hi);
    }
    case ElemFn::pow: {
      if (I.lo.sign() < 0 || Dyadic(1) < I.hi) fail(errc::domain_violation, "pow on " + I.str());
      if (pow_a.sign() >= 0)
        return DyInterval(pow_enclosure(I.lo, pow_a, prec + 1).lo,
                          pow_enclosure(I.hi, pow_a, prec + 1).hi);
      return DyInterval(pow_enclosure(I.hi, pow_a, prec + 1).lo,
                        pow_enclosure(I.lo, pow_a, prec + 1).hi);
    }
  }
  fail(errc::domain_violation, "bad elem fn");
}

}  // namespace rvdom
