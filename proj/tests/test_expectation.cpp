#include "doctest.h"

#include <random>

#include "rvdom/expectation.hpp"

using namespace rvdom;

namespace {

std::mt19937_64 rng(2718);

DomainHandle ireal() { return DomainHandle::interval_real(); }
Element rel(const std::string& s) { return *Element::parse(s, ireal()); }

// uniform depth-n step RV on [0,1] viewed inside IR
StepRV uniform_rv(unsigned n) {
  std::vector<Element> cells;
  for (unsigned long i = 0; i < (1UL << n); ++i)
    cells.push_back(Element::interval(DyInterval(Dyadic(i, n), Dyadic(i + 1, n))));
  return StepRV::from_cells(SpaceKind::unit_closed, ireal(), n, std::move(cells));
}

// multi-scale enclosure of x^2: at every level l <= n a piece per cell with
// generator one cell wider on each side and value the hull of x^2 over it;
// hull values make overlapping pieces consistent on any input
StepFunctional square_functional(unsigned n) {
  std::vector<std::pair<Element, DyInterval>> pieces;
  for (unsigned l = 0; l <= n; ++l) {
    for (long j = 0; j < (1L << l); ++j) {
      Element gen = Element::interval(DyInterval(Dyadic(j - 1, l), Dyadic(j + 2, l)));
      Dyadic lo = j >= 1 ? Dyadic((j - 1) * (j - 1), 2 * l) : Dyadic(0);
      DyInterval val(lo, Dyadic((j + 2) * (j + 2), 2 * l));
      pieces.emplace_back(gen, val);
    }
  }
  return StepFunctional::make(ireal(), std::move(pieces));
}

// independent oracle: Lebesgue integral of the simple function g- (or g+)
// against T(r), via level sets and mass_on_open
Dyadic level_set_integral(const StepRV& r, const StepFunctional& g, bool upper) {
  SimpleValuation t = rv_T(r);
  // distinct finite values of g-/g+ at the atoms (upper must be bounded here)
  std::vector<Dyadic> levels;
  std::vector<Dyadic> at_atom;
  for (const auto& [w, d] : t.atoms()) {
    PosInterval gv = g.eval(d);
    Dyadic v = upper ? *gv.hi : gv.lo;
    at_atom.push_back(v);
    levels.push_back(v);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  Dyadic total(0), prev(0);
  for (const Dyadic& v : levels) {
    if (v.sign() <= 0) continue;
    Dyadic mass(0);
    for (size_t i = 0; i < t.size(); ++i)
      if (v <= at_atom[i]) mass += t.atoms()[i].first;
    total += (v - prev) * mass;
    prev = v;
  }
  return total;
}

}  // namespace

TEST_CASE("expect of a constant functional is the constant") {
  StepRV r = uniform_rv(3);
  StepFunctional g = StepFunctional::make(
      ireal(), {{Element::interval_bottom(), DyInterval(Dyadic(5), Dyadic(5))}});
  ExpectResult e = expect(r, g);
  CHECK(e.lo == Dyadic(5));
  REQUIRE(e.hi.has_value());
  CHECK(*e.hi == Dyadic(5));
}

TEST_CASE("expect encloses the integral of x^2 with shrinking width") {
  ExpectResult prev{Dyadic(0), std::nullopt};
  for (unsigned n = 1; n <= 8; ++n) {
    StepRV r = uniform_rv(n);
    StepFunctional g = square_functional(n);
    ExpectResult e = expect(r, g);
    REQUIRE(e.hi.has_value());
    // contains 1/3: 3*lo <= 1 <= 3*hi
    CHECK(e.lo * Dyadic(3) <= Dyadic(1));
    CHECK(Dyadic(1) <= *e.hi * Dyadic(3));
    CHECK(*e.hi - e.lo <= Dyadic(4) * Dyadic::pow2(-(long)n));
    if (n > 1) {
      CHECK(prev.lo <= e.lo);
      CHECK(*e.hi <= *prev.hi);
    }
    prev = e;
    // both ends equal the level-set Lebesgue integrals (independent route)
    CHECK(e.lo == level_set_integral(r, g, false));
    CHECK(*e.hi == level_set_integral(r, g, true));
  }
}

TEST_CASE("bottom cells surface the unbounded flag") {
  DomainHandle D = ireal();
  StepRV r = StepRV::from_cells(SpaceKind::cantor, D, 1, {rel("[1,2]"), rel("bot")});
  StepFunctional g = StepFunctional::make(
      D, {{rel("[0,3]"), DyInterval(Dyadic(1), Dyadic(1))}});
  ExpectResult e = expect(r, g);
  CHECK(e.lo == Dyadic(1, 1));  // the [1,2] half contributes 1/2 * 1
  CHECK_FALSE(e.hi.has_value());
  CHECK(e.capped(Dyadic(100)).hi == Dyadic(100));
}

TEST_CASE("expect is monotone in both arguments") {
  {
    StepRV rp = uniform_rv(5);
    StepRV coarse = rv_approx_degree(rp, 3);
    REQUIRE(rv_leq(coarse, rp));
    StepFunctional g = square_functional(3);
    ExpectResult a = expect(coarse, g);
    ExpectResult b = expect(rp, g);
    REQUIRE(a.hi.has_value());
    REQUIRE(b.hi.has_value());
    CHECK(a.lo <= b.lo);
    CHECK(*b.hi <= *a.hi);
  }
  // narrower piece values give a narrower expectation
  StepRV r = uniform_rv(3);
  std::vector<std::pair<Element, DyInterval>> wide, narrow;
  for (long j = 0; j < 8; ++j) {
    Element gen = Element::interval(DyInterval(Dyadic(j - 1, 3), Dyadic(j + 2, 3)));
    wide.emplace_back(gen, DyInterval(Dyadic(0), Dyadic(4)));
    narrow.emplace_back(gen, DyInterval(Dyadic(1), Dyadic(2)));
  }
  StepFunctional gw = StepFunctional::make(ireal(), wide);
  StepFunctional gn = StepFunctional::make(ireal(), narrow);
  REQUIRE(StepFunctional::piecewise_below(gw, gn));
  ExpectResult ew = expect(r, gw);
  ExpectResult en = expect(r, gn);
  CHECK(ew.lo <= en.lo);
  CHECK(*en.hi <= *ew.hi);
}

TEST_CASE("expectation chain along degree approximations is nested") {
  StepRV r = uniform_rv(6);
  StepFunctional g = square_functional(4);
  ExpectResult prev = expect(rv_approx_degree(r, 0), g);
  for (unsigned k = 1; k <= 6; ++k) {
    ExpectResult cur = expect(rv_approx_degree(r, k), g);
    REQUIRE(cur.hi.has_value());
    CHECK(prev.lo <= cur.lo);
    if (prev.hi) CHECK(*cur.hi <= *prev.hi);
    prev = cur;
  }
}

TEST_CASE("monte carlo sums stay inside the expectation") {
  StepRV r = uniform_rv(4);
  StepFunctional g = square_functional(4);
  ExpectResult e = expect(r, g);
  SimpleValuation t = rv_T(r);
  for (int trial = 0; trial < 50; ++trial) {
    std::map<Element, Dyadic> picks;
    for (const auto& [w, d] : t.atoms()) {
      PosInterval gv = g.eval(d);
      std::uniform_int_distribution<int> mid(0, 4);
      Dyadic u(mid(rng), 2);
      picks.emplace(d, gv.lo + u * (*gv.hi - gv.lo));
    }
    Dyadic s = monte_carlo(r, g, picks);
    CHECK(e.lo <= s);
    CHECK(s <= *e.hi);
  }
  // midpoint picks for a degenerate eta
  DomainHandle D = ireal();
  StepRV point = StepRV::constant(SpaceKind::cantor, D, rel("[1,2]"));
  StepFunctional gp =
      StepFunctional::make(D, {{rel("[0,3]"), DyInterval(Dyadic(2), Dyadic(4))}});
  std::map<Element, Dyadic> pick{{rel("[1,2]"), Dyadic(3)}};
  CHECK(monte_carlo(point, gp, pick) == Dyadic(3));
  std::map<Element, Dyadic> outside{{rel("[1,2]"), Dyadic(5)}};
  CHECK_THROWS_AS(monte_carlo(point, gp, outside), error);
}

TEST_CASE("fubini double integral") {
  DomainHandle D = ireal();
  auto beta = SimpleValuation::parse("1/2*delta([0,1]) + 1/2*delta([2,3])", D);
  auto gamma = SimpleValuation::parse("1/4*delta([0,1]) + 3/4*delta([4,5])", D);
  REQUIRE(beta.has_value());
  REQUIRE(gamma.has_value());

  std::map<std::pair<Element, Element>, DyInterval> fconst;
  for (const auto& [b, d] : beta->atoms())
    for (const auto& [c, e] : gamma->atoms())
      fconst.emplace(std::make_pair(d, e), DyInterval(Dyadic(1), Dyadic(1)));
  CHECK(fubini(*beta, *gamma, fconst) == DyInterval(Dyadic(1), Dyadic(1)));

  // 2x2 weighted average of distinct grid values
  std::map<std::pair<Element, Element>, DyInterval> f;
  Dyadic v(0);
  for (const auto& [b, d] : beta->atoms())
    for (const auto& [c, e] : gamma->atoms()) {
      v += Dyadic(1);
      f.emplace(std::make_pair(d, e), DyInterval(v, v + Dyadic(1)));
    }
  DyInterval got = fubini(*beta, *gamma, f);
  // hand sum: 1/8*[1,2] + 3/8*[2,3] + 1/8*[3,4] + 3/8*[4,5]
  Dyadic lo = Dyadic(1, 3) * Dyadic(1) + Dyadic(3, 3) * Dyadic(2) + Dyadic(1, 3) * Dyadic(3) +
              Dyadic(3, 3) * Dyadic(4);
  CHECK(got == DyInterval(lo, lo + Dyadic(1)));

  std::map<std::pair<Element, Element>, DyInterval> missing;
  CHECK_THROWS_AS(fubini(*beta, *gamma, missing), error);
}

TEST_CASE("expect parallel kernel matches serial") {
  StepRV r = uniform_rv(8);
  StepFunctional g = square_functional(8);
  CHECK(expect(r, g, Exec::serial) == expect(r, g, Exec::parallel));
}
