#include "doctest.h"

#include <bit>
#include <random>

#include "generators.hpp"
#include "rvdom/randvar.hpp"

using namespace rvdom;
using namespace rvdom::testgen;

namespace {

std::mt19937_64 rng(1357);

DomainHandle ireal() { return DomainHandle::interval_real(); }
DomainHandle iunit() { return DomainHandle::interval_unit(); }

Element rel(const std::string& s) { return *Element::parse(s, ireal()); }
Element uel(const std::string& s) { return *Element::parse(s, iunit()); }

StepRV random_rv(const DomainHandle& D, SpaceKind space, unsigned max_depth = 3) {
  std::uniform_int_distribution<unsigned> dpick(0, max_depth);
  unsigned d = dpick(rng);
  std::vector<Element> cells;
  for (unsigned long i = 0; i < (1UL << d); ++i) {
    if (D.kind() == DomainKind::finite_poset)
      cells.push_back(random_poset_element(rng, D));
    else {
      std::uniform_int_distribution<int> g(0, 8);
      int a = g(rng), b = g(rng);
      if (b < a) std::swap(a, b);
      cells.push_back(Element::interval(DyInterval(Dyadic(a, 3), Dyadic(b, 3))));
    }
  }
  return StepRV::from_cells(space, D, d, std::move(cells));
}

// r way below s on the open unit interval, built cell-wise from hulls
std::pair<StepRV, StepRV> random_unitopen_waybelow_pair(unsigned depth) {
  DomainHandle D = iunit();
  StepRV s = random_rv(D, SpaceKind::unit_open, depth).refined(depth);
  size_t n = s.cell_count();
  std::vector<Element> rcells(n, bottom_element(D));
  std::uniform_int_distribution<int> coin(0, 3);
  for (size_t i = 1; i + 1 < n; ++i) {
    if (coin(rng) == 0) continue;  // keep some bottoms
    std::vector<Element> window{s.cells()[i]};
    if (i > 0) window.push_back(s.cells()[i - 1]);
    if (i + 1 < n) window.push_back(s.cells()[i + 1]);
    Element hull = inf(D, window);
    Dyadic margin(1, 6);
    Dyadic lo = max(Dyadic(0), hull.ival()->lo - margin);
    Dyadic hi = min(Dyadic(1), hull.ival()->hi + margin);
    rcells[i] = Element::interval(DyInterval(lo, hi));
  }
  StepRV r = StepRV::from_cells(SpaceKind::unit_open, D, depth, std::move(rcells));
  return {r, s};
}

}  // namespace

TEST_CASE("rv_make joins overlapping assignments") {
  DomainHandle D = ireal();
  std::vector<std::pair<BasicOpen, Element>> one{
      {BasicOpen::cylinders(SpaceKind::cantor, {"0"}), rel("[1,2]")}};
  StepRV r = StepRV::make(SpaceKind::cantor, D, one);
  CHECK(r.depth() == 1);
  CHECK(r.cells()[0] == rel("[1,2]"));
  CHECK(r.cells()[1] == rel("bot"));

  std::vector<std::pair<BasicOpen, Element>> two{
      {BasicOpen::cylinders(SpaceKind::cantor, {"0"}), rel("[0,2]")},
      {BasicOpen::cylinders(SpaceKind::cantor, {"00"}), rel("[1,3]")}};
  StepRV r2 = StepRV::make(SpaceKind::cantor, D, two);
  CHECK(r2.depth() == 2);
  CHECK(r2.cells()[0] == rel("[1,2]"));  // join = intersection
  CHECK(r2.cells()[1] == rel("[0,2]"));

  std::vector<std::pair<BasicOpen, Element>> bad{
      {BasicOpen::cylinders(SpaceKind::cantor, {"0"}), rel("[0,1]")},
      {BasicOpen::cylinders(SpaceKind::cantor, {"01"}), rel("[2,3]")}};
  CHECK_THROWS_AS(StepRV::make(SpaceKind::cantor, D, bad), error);

  std::vector<std::pair<BasicOpen, Element>> uiv{
      {BasicOpen::intervals(SpaceKind::unit_closed, {{Dyadic(0), Dyadic(1, 1)}}), rel("[0,1]")}};
  StepRV ru = StepRV::make(SpaceKind::unit_closed, D, uiv);
  CHECK(ru.depth() == 1);
  CHECK(ru.cells()[0] == rel("[0,1]"));
}

TEST_CASE("evaluation with boundary and subtree semantics") {
  DomainHandle D = ireal();
  StepRV c = StepRV::constant(SpaceKind::cantor, D, rel("[1,1]"));
  CHECK(c.eval_bits("0101") == rel("[1,1]"));
  CHECK(c.eval_bits("") == rel("[1,1]"));

  StepRV u = StepRV::from_cells(SpaceKind::unit_closed, D, 1, {rel("[0,1]"), rel("[2,3]")});
  CHECK(u.eval_point(Dyadic(1, 1)) == rel("[0,3]"));  // inf of the neighbours
  CHECK(u.eval_point(Dyadic(1, 2)) == rel("[0,1]"));
  CHECK(u.eval_point(Dyadic(0)) == rel("[0,1]"));
  CHECK(u.eval_point(Dyadic(1)) == rel("[2,3]"));

  StepRV deep = StepRV::from_cells(SpaceKind::cantor, D, 2,
                                   {rel("[0,1]"), rel("[2,3]"), rel("[5,6]"), rel("[5,6]")});
  CHECK(deep.eval_bits("0") == rel("[0,3]"));  // inf over the subtree
  CHECK(deep.eval_bits("10") == rel("[5,6]"));

  StepRV uo = StepRV::from_cells(SpaceKind::unit_open, D, 1, {rel("bot"), rel("[0,1]")});
  CHECK_THROWS_AS(uo.eval_point(Dyadic(0)), error);
  CHECK_THROWS_AS(u.eval_point(Dyadic(2)), error);
}

TEST_CASE("rv_T sums cell masses per value") {
  DomainHandle D = ireal();
  CHECK(rv_T(StepRV::constant(SpaceKind::cantor, D, rel("[1,2]"))) ==
        SimpleValuation::point(D, rel("[1,2]")));
  StepRV r = StepRV::from_cells(SpaceKind::cantor, D, 1, {rel("[0,1]"), rel("[2,3]")});
  SimpleValuation t = rv_T(r);
  CHECK(t.size() == 2);
  CHECK(t.atoms()[0].first == Dyadic(1, 1));

  StepRV r2 = StepRV::from_cells(SpaceKind::cantor, D, 2,
                                 {rel("[0,1]"), rel("[0,1]"), rel("[2,3]"), rel("bot")});
  SimpleValuation t2 = rv_T(r2);
  auto expect = SimpleValuation::parse("1/2*delta([0,1]) + 1/4*delta([2,3]) + 1/4*delta(bot)", D);
  CHECK(t2 == *expect);
}

TEST_CASE("rv_leq and rv_way_below") {
  DomainHandle D = ireal();
  StepRV bot = StepRV::constant(SpaceKind::cantor, D, rel("bot"));
  StepRV r = StepRV::from_cells(SpaceKind::cantor, D, 1, {rel("bot"), rel("[0,1]")});
  StepRV s = StepRV::from_cells(SpaceKind::cantor, D, 1, {rel("[0,1]"), rel("[1/4,1/2]")});
  CHECK(rv_leq(r, r));
  CHECK(rv_leq(bot, s));
  CHECK(rv_way_below(r, s));
  CHECK_FALSE(rv_way_below(s, r));
  CHECK_FALSE(rv_leq(s, r));

  // different depths refine to a common partition
  CHECK(rv_leq(r, s.refined(3)));

  // a non-bottom extreme cell kills way-below on the open interval
  StepRV uo = StepRV::from_cells(SpaceKind::unit_open, D, 1, {rel("[0,1]"), rel("bot")});
  StepRV uo2 = StepRV::constant(SpaceKind::unit_open, D, rel("[1/4,1/2]"));
  CHECK_FALSE(rv_way_below(uo, uo2));

  // UnitClosed allows constant-over-constant way-below (the paper's
  // counterexample to preservation)
  StepRV cd = StepRV::constant(SpaceKind::unit_closed, D, rel("[0,2]"));
  StepRV cd2 = StepRV::constant(SpaceKind::unit_closed, D, rel("[1/2,1]"));
  CHECK(rv_way_below(cd, cd2));
  CHECK_FALSE(val_way_below(rv_T(cd), rv_T(cd2)).holds);

  CHECK_THROWS_AS(rv_way_below(StepRV::constant(SpaceKind::cantor_zero, D, rel("bot")),
                               StepRV::constant(SpaceKind::cantor_zero, D, rel("bot"))),
                  error);
}

TEST_CASE("rv_equiv ignores arrangement and space") {
  DomainHandle D = ireal();
  StepRV r = StepRV::from_cells(SpaceKind::cantor, D, 1, {rel("[0,1]"), rel("[2,3]")});
  StepRV rs = StepRV::from_cells(SpaceKind::cantor, D, 1, {rel("[2,3]"), rel("[0,1]")});
  CHECK(rv_equiv(r, rs));
  StepRV u = StepRV::from_cells(SpaceKind::unit_closed, D, 1, {rel("[0,1]"), rel("[2,3]")});
  CHECK(rv_equiv(r, u));
  StepRV nd = StepRV::from_cells(SpaceKind::cantor, D, 1, {rel("[0,1]"), rel("bot")});
  CHECK_FALSE(rv_equiv(r, nd));
}

TEST_CASE("rv_refine_up realizes the target valuation above r1") {
  DomainHandle D = ireal();
  StepRV r1 = StepRV::from_cells(SpaceKind::cantor, D, 1, {rel("bot"), rel("[0,2]")});
  SimpleValuation self = rv_T(r1);
  StepRV same = rv_refine_up(r1, self);
  CHECK(rv_equiv(same, r1));
  CHECK(rv_leq(r1, same));

  auto a2 = SimpleValuation::parse(
      "1/4*delta([0,1]) + 1/4*delta([1,2]) + 1/4*delta([1/2,3/2]) + 1/4*delta(bot)", D);
  REQUIRE(a2.has_value());
  REQUIRE(val_leq(self, *a2).holds);
  StepRV r2 = rv_refine_up(r1, *a2);
  CHECK(rv_T(r2) == *a2);  // exact round trip
  CHECK(rv_leq(r1, r2));

  auto bad = SimpleValuation::parse("1*delta([5,6])", D);
  CHECK_THROWS_AS(rv_refine_up(r1, *bad), error);
}

TEST_CASE("rv_restrict_down returns the measured co-occurrence flow") {
  DomainHandle D = ireal();
  StepRV r2 = StepRV::from_cells(SpaceKind::cantor, D, 2,
                                 {rel("[0,1]"), rel("[0,1]"), rel("[2,3]"), rel("[4,5]")});
  SimpleValuation t2 = rv_T(r2);

  auto [same, diag] = rv_restrict_down(r2, t2);
  CHECK(same == r2.refined(same.depth()));
  for (const auto& [ij, t] : diag.entries) CHECK(ij.first == ij.second);

  auto bot_val = SimpleValuation::point(D, rel("bot"));
  auto [rb, fb] = rv_restrict_down(r2, bot_val);
  CHECK(rv_T(rb) == bot_val);
  for (size_t j = 0; j < t2.size(); ++j)
    CHECK(fb.entries.at({0, static_cast<int>(j)}) == t2.atoms()[j].first);

  // random instances validate marginals and ordering
  for (int t = 0; t < 120; ++t) {
    DomainHandle P = DomainHandle::finite_poset(random_poset(rng));
    StepRV s = random_rv(P, SpaceKind::cantor);
    SimpleValuation alpha = random_valuation_below(rng, P, rv_T(s));
    auto [r1, flow] = rv_restrict_down(s, alpha);
    CHECK(rv_leq(r1, s));
    CHECK(rv_T(r1) == alpha);
    validate_flow(alpha, rv_T(s), flow, false);
  }
}

TEST_CASE("rv_chain_from_valuations") {
  DomainHandle D = iunit();
  // uniform dyadic refinements of the unit interval
  auto uniform = [&](unsigned depth) {
    std::vector<std::pair<Dyadic, Element>> atoms;
    for (unsigned long i = 0; i < (1UL << depth); ++i)
      atoms.emplace_back(Dyadic(1, depth),
                         Element::interval(DyInterval(Dyadic(i, depth), Dyadic(i + 1, depth))));
    return SimpleValuation::make(D, std::move(atoms));
  };
  std::vector<SimpleValuation> alphas;
  for (unsigned d = 0; d <= 4; ++d) alphas.push_back(uniform(d));
  auto chain = rv_chain_from_valuations(alphas, SpaceKind::unit_closed);
  REQUIRE(chain.size() == alphas.size());
  for (size_t k = 0; k < chain.size(); ++k) CHECK(rv_T(chain[k]) == alphas[k]);
  for (size_t k = 1; k < chain.size(); ++k) CHECK(rv_leq(chain[k - 1], chain[k]));

  std::vector<SimpleValuation> bad{alphas[2], alphas[0]};
  CHECK_THROWS_AS(rv_chain_from_valuations(bad, SpaceKind::unit_closed), error);

  auto single = rv_chain_from_valuations(std::vector<SimpleValuation>{alphas[2]},
                                         SpaceKind::cantor);
  CHECK(rv_T(single[0]) == alphas[2]);
}

TEST_CASE("rv_approx_degree") {
  DomainHandle D = ireal();
  StepRV r = StepRV::from_cells(SpaceKind::cantor, D, 1, {rel("[0,1]"), rel("[2,3]")});
  CHECK(rv_approx_degree(r, 1) == r);
  CHECK(rv_approx_degree(r, 0) == StepRV::constant(SpaceKind::cantor, D, rel("[0,3]")));

  for (int t = 0; t < 100; ++t) {
    StepRV s = random_rv(ireal(), SpaceKind::cantor, 4);
    StepRV prev = rv_approx_degree(s, 0);
    for (unsigned n = 1; n <= s.depth(); ++n) {
      StepRV cur = rv_approx_degree(s, n);
      CHECK(rv_leq(prev, cur));
      CHECK(val_leq(rv_T(prev), rv_T(cur)).holds);
      prev = cur;
    }
    CHECK(prev == s);  // degree = depth reproduces r
  }
}

TEST_CASE("rv_member_q_open") {
  DomainHandle D = ireal();
  StepRV bot = StepRV::constant(SpaceKind::cantor, D, rel("bot"));
  std::vector<Element> gen{rel("[0,4]")};
  CHECK_FALSE(rv_member_q_open(bot, Dyadic(0), gen));

  StepRV r = StepRV::from_cells(SpaceKind::cantor, D, 1, {rel("[1,2]"), rel("bot")});
  CHECK(rv_member_q_open(r, Dyadic(1, 2), gen));       // mass 1/2 > 1/4
  CHECK_FALSE(rv_member_q_open(r, Dyadic(1, 1), gen)); // mass 1/2, strict
  CHECK_FALSE(rv_member_q_open(r, Dyadic(1), gen));    // [1 -> O] is empty
}

TEST_CASE("rv_precompose preserves the push-forward") {
  DomainHandle D = ireal();
  for (int t = 0; t < 60; ++t) {
    StepRV r = random_rv(D, SpaceKind::cantor, 3);
    StepRV h1 = rv_precompose(r, {PairingKind::interleave, PairingRole::h1});
    StepRV h2 = rv_precompose(r, {PairingKind::interleave, PairingRole::h2});
    CHECK(rv_equiv(r, h1));
    CHECK(rv_equiv(r, h2));
  }
  for (int t = 0; t < 40; ++t) {
    StepRV r = random_rv(D, SpaceKind::unit_open, 3);
    StepRV h1 = rv_precompose(r, {PairingKind::hilbert, PairingRole::h1});
    StepRV h2 = rv_precompose(r, {PairingKind::hilbert, PairingRole::h2});
    CHECK(rv_equiv(r, h1));
    CHECK(rv_equiv(r, h2));
  }
  // identity bit permutation is the identity after canonicalization
  StepRV r = random_rv(D, SpaceKind::cantor, 3);
  std::vector<unsigned> id{0, 1, 2};
  CHECK(rv_precompose_bitperm(r, id) == r);
  // swapping the first two bit positions permutes cells, T unchanged
  std::vector<unsigned> swap01{1, 0};
  StepRV sw = rv_precompose_bitperm(r, swap01);
  CHECK(rv_equiv(r, sw));
}

TEST_CASE("rv_equiv_witness reconstructs r as s o h") {
  DomainHandle D = ireal();
  StepRV r = StepRV::from_cells(SpaceKind::cantor, D, 1, {rel("[0,1]"), rel("[2,3]")});
  StepRV s = StepRV::from_cells(SpaceKind::cantor, D, 1, {rel("[2,3]"), rel("[0,1]")});
  auto wit = rv_equiv_witness(r, s);
  CHECK(wit == std::vector<size_t>{1, 0});
  CHECK(rv_apply_cellperm(s, wit) == r);
  CHECK(rv_equiv_witness(r, r) == std::vector<size_t>{0, 1});

  for (int t = 0; t < 80; ++t) {
    StepRV a = random_rv(D, SpaceKind::cantor, 3);
    // shuffle cells at a common depth to build an equivalent partner
    StepRV deep = a.refined(3);
    std::vector<Element> cells = deep.cells();
    std::shuffle(cells.begin(), cells.end(), rng);
    StepRV b = StepRV::from_cells(SpaceKind::cantor, D, 3, std::move(cells));
    auto h = rv_equiv_witness(a, b);
    unsigned wd = static_cast<unsigned>(std::countr_zero(h.size()));
    StepRV back = rv_apply_cellperm(b.refined(wd), h);
    CHECK(back == a);
  }
  StepRV nd = StepRV::constant(SpaceKind::cantor, D, rel("bot"));
  CHECK_THROWS_AS(rv_equiv_witness(r, nd), error);
}

TEST_CASE("T is monotone and preserves way-below on the open unit interval") {
  for (int t = 0; t < 200; ++t) {
    DomainHandle P = DomainHandle::finite_poset(random_poset(rng));
    StepRV s = random_rv(P, SpaceKind::cantor);
    SimpleValuation alpha = random_valuation_below(rng, P, rv_T(s));
    auto [r, flow] = rv_restrict_down(s, alpha);
    CHECK(val_leq(rv_T(r), rv_T(s)).holds);
  }
  int hits = 0;
  for (int t = 0; t < 200; ++t) {
    auto [r, s] = random_unitopen_waybelow_pair(3);
    if (!rv_way_below(r, s)) continue;
    ++hits;
    CHECK(val_way_below(rv_T(r), rv_T(s)).holds);
  }
  CHECK(hits > 100);
}

TEST_CASE("T sends up-sets of bottom-margin step functions onto up-sets") {
  // constructive sampling of T[up(b)] = up(T(b)): refine b upward along a
  // valuation strictly above T(b) and check membership both ways
  for (int t = 0; t < 60; ++t) {
    auto [b, s] = random_unitopen_waybelow_pair(2);
    SimpleValuation tb = rv_T(b);
    SimpleValuation ts = rv_T(s);
    if (!rv_way_below(b, s)) continue;
    // any valuation way above T(b) is hit by something way above b
    REQUIRE(val_way_below(tb, ts).holds);
    StepRV witness = rv_refine_up(b, ts);
    CHECK(rv_T(witness) == ts);
    CHECK(rv_leq(b, witness));
  }
}

TEST_CASE("step RV text round trip") {
  DomainHandle D = ireal();
  for (int t = 0; t < 50; ++t) {
    StepRV r = random_rv(D, SpaceKind::unit_open, 3);
    auto back = StepRV::parse(r.str(), D);
    REQUIRE(back.has_value());
    CHECK(*back == r);
  }
}
