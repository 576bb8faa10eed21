#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <numeric>

using namespace rotkit;
using support::R;

namespace {

std::vector<Rational> samples(std::mt19937_64& rng, int count) {
  std::uniform_int_distribution<long> num(-2000, 2000);
  std::vector<Rational> out;
  for (int i = 0; i < count; ++i) out.push_back(ratio(num(rng), 997));
  return out;
}

// Sample points plus every knot and branching coordinate in [-1, 2].
std::vector<Rational> probe_points(std::mt19937_64& rng, const PLLift& lift, const BranchData& branches) {
  std::vector<Rational> pts = samples(rng, 200);
  for (const auto& x : lift.knot_positions(Rational(-1), Rational(2))) pts.push_back(x);
  for (const auto& [z, parts] : branches) {
    for (long k = -1; k <= 1; ++k) pts.push_back(z + k);
  }
  return pts;
}

bool same_function(const PLLift& a, const PLLift& b) { return support::le_everywhere(a, b) && support::le_everywhere(b, a); }

// Knot values consistent with a nondecreasing degree-one function.
bool monotone_degree_one(const PLLift& f) {
  const auto& ks = f.knots();
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i].left > ks[i].value || ks[i].value > ks[i].right) return false;
    if (i + 1 < ks.size() && ks[i].right > ks[i + 1].left) return false;
  }
  for (const auto& x : {R("0"), R("1/3"), R("5/7"), R("-2/9")}) {
    if (f(x + 1) != f(x) + 1) return false;
  }
  return true;
}

PLLift random_continuous_lift(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 4), pos(1, 11), val(-12, 12);
  std::set<int> xs;
  int k = count(rng);
  while (static_cast<int>(xs.size()) < k) xs.insert(pos(rng));
  Rational y0 = ratio(val(rng), 12);
  std::vector<std::pair<Rational, Rational>> pts{{Rational(0), y0}};
  for (int x : xs) pts.push_back({ratio(x, 12), ratio(val(rng), 12)});
  pts.push_back({Rational(1), y0 + 1});
  return PLLift::from_points(pts);
}

struct Envelope {
  std::string name;
  PLLift lift;
  BranchData branches;
};

std::vector<Envelope> fixture_envelopes() {
  std::vector<Envelope> out;
  for (const auto& name : support::fixture_names()) {
    auto m = support::load(name);
    out.push_back({name, m.map.circle_restriction(), m.map.branch_value_ranges()});
  }
  return out;
}

// A hump whose envelopes have rotation numbers 0 and 1/2.
PLLift hump() { return PLLift::from_points({{R("0"), R("1/4")}, {R("1/4"), R("1")}, {R("1/2"), R("1/4")}, {R("1"), R("5/4")}}); }

}  // namespace

TEST_CASE("envelopes match the direct window extremes") {
  std::mt19937_64 rng(41);
  for (const auto& env : fixture_envelopes()) {
    PLLift up = upper_map(env.lift, env.branches), low = lower_map(env.lift, env.branches);
    for (const auto& x : probe_points(rng, env.lift, env.branches)) {
      CAPTURE(env.name);
      CAPTURE(x.get_str());
      CHECK(up(x) == support::brute_upper(env.lift, env.branches, x));
      CHECK(low(x) == support::brute_lower(env.lift, env.branches, x));
    }
  }
}

TEST_CASE("envelopes bracket r o F and are monotone of degree one") {
  std::mt19937_64 rng(42);
  for (const auto& env : fixture_envelopes()) {
    PLLift up = upper_map(env.lift, env.branches), low = lower_map(env.lift, env.branches);
    CAPTURE(env.name);
    CHECK(up.is_nondecreasing());
    CHECK(low.is_nondecreasing());
    CHECK(up.is_degree_one());
    CHECK(low.is_degree_one());
    CHECK(monotone_degree_one(up));
    CHECK(monotone_degree_one(low));
    for (const auto& x : samples(rng, 1000)) {
      CHECK(low(x) <= env.lift(x));
      CHECK(env.lift(x) <= up(x));
    }
  }
}

TEST_CASE("envelope examples") {
  SUBCASE("monotone lift without branches is its own envelope") {
    PLLift l = PLLift::from_points({{R("0"), R("0")}, {R("1/3"), R("1/2")}, {R("1"), R("1")}});
    CHECK(same_function(upper_map(l, {}), l));
    CHECK(same_function(lower_map(l, {}), l));
  }
  SUBCASE("local maximum is flattened") {
    PLLift l = PLLift::from_points({{R("0"), R("0")}, {R("1/4"), R("1/2")}, {R("1/2"), R("1/4")}, {R("1"), R("1")}});
    PLLift expected_up =
        PLLift::from_points({{R("0"), R("0")}, {R("1/4"), R("1/2")}, {R("2/3"), R("1/2")}, {R("1"), R("1")}});
    CHECK(same_function(upper_map(l, {}), expected_up));
    PLLift expected_low =
        PLLift::from_points({{R("0"), R("0")}, {R("1/8"), R("1/4")}, {R("1/2"), R("1/4")}, {R("1"), R("1")}});
    CHECK(same_function(lower_map(l, {}), expected_low));
  }
  SUBCASE("branch above the running maximum forces a jump") {
    auto m = support::load("ex-1-8");
    PLLift up = upper_map(m.map.circle_restriction(), m.map.branch_value_ranges());
    CHECK(up(R("1/2")) == R("3/2"));
    CHECK(up.left_limit(R("1/2")) == R("1/2"));
    CHECK(up(R("1")) == R("3/2"));
    PLLift low = lower_map(m.map.circle_restriction(), m.map.branch_value_ranges());
    CHECK(low(R("1/2")) == R("-1/2"));
    CHECK(low.right_limit(R("1/2")) == R("1/2"));
    CHECK(low(R("0")) == R("-1/2"));
  }
}

TEST_CASE("combedness") {
  auto f4 = support::load("fig-4-combed");
  PLLift l4 = f4.map.circle_restriction();
  BranchData b4 = f4.map.branch_value_ranges();
  REQUIRE(b4.size() == 1);
  CHECK(is_combed_at(l4, b4, b4.begin()->first) == Combedness::combed);
  CHECK(is_combed_at(l4, b4, R("1/7")) == Combedness::combed);
  CHECK(check_combed(l4, b4).combed);

  auto ex = support::load("ex-1-8");
  CHECK(is_combed_at(ex.map.circle_restriction(), ex.map.branch_value_ranges(), R("1/2")) == Combedness::neither);

  auto nc = support::load("non-combed");
  auto ncc = check_combed(nc.map.circle_restriction(), nc.map.branch_value_ranges());
  CHECK_FALSE(ncc.combed);
  REQUIRE(ncc.points.size() == 1);
  CHECK(ncc.points[0].second == Combedness::right_only);

  auto m62 = support::load("example-6-2");
  CHECK(is_combed_at(m62.map.circle_restriction(), m62.map.branch_value_ranges(), R("1/2")) == Combedness::left_only);
  auto m61 = support::load("example-6-1");
  CHECK(is_combed_at(m61.map.circle_restriction(), m61.map.branch_value_ranges(), R("1/3")) == Combedness::neither);
  CHECK(std::string(combedness_name(Combedness::left_only)) == "left_only");
}

TEST_CASE("water family endpoints, order and Lipschitz bound") {
  for (const auto& env : fixture_envelopes()) {
    WaterFamily fam(env.lift, env.branches);
    CAPTURE(env.name);
    CHECK(fam.mu_max() >= 0);
    CHECK(same_function(fam.at(Rational(0)), fam.lower()));
    if (fam.certified()) CHECK(same_function(fam.at(fam.mu_max()), fam.upper()));
    std::vector<Rational> grid;
    for (int i = 0; i < 16; ++i) grid.push_back(fam.mu_max() * ratio(i, 15));
    std::vector<PLLift> members;
    for (const auto& mu : grid) members.push_back(fam.at(mu));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = i; j < grid.size(); ++j) {
        Rational gap = grid[j] - grid[i];
        CHECK(support::le_everywhere(members[i], members[j]));
        CHECK(support::le_everywhere(members[j], members[i].plus(gap)));
        CHECK(support::sup_gap(members[i], members[j]) <= gap);
      }
    }
  }
  auto nc = support::load("non-combed");
  CHECK_FALSE(WaterFamily(nc.map.circle_restriction(), nc.map.branch_value_ranges()).certified());
}

TEST_CASE("water family keeps the flat pieces of the lift") {
  std::vector<std::pair<PLLift, BranchData>> cases;
  auto f4 = support::load("fig-4-combed");
  cases.push_back({f4.map.circle_restriction(), f4.map.branch_value_ranges()});
  cases.push_back({hump(), {}});
  cases.push_back({PLLift::from_points({{R("0"), R("0")}, {R("1/4"), R("1/2")}, {R("3/4"), R("1/2")}, {R("1"), R("1")}}), {}});
  for (const auto& [lift, branches] : cases) {
    WaterFamily fam(lift, branches);
    REQUIRE(fam.certified());
    for (int i = 0; i <= 4; ++i) {
      PLLift f = fam.at(fam.mu_max() * ratio(i, 4));
      for (const auto& seg : lift.segments(Rational(0), Rational(1))) {
        if (seg.y0 != seg.y1) continue;
        Rational level = f(seg.x0 + (seg.x1 - seg.x0) / 2);
        for (const auto& piece : f.segments(seg.x0, seg.x1)) {
          CHECK(piece.y0 == level);
          CHECK(piece.y1 == level);
        }
      }
    }
  }
}

TEST_CASE("rotation numbers along the water family are ordered") {
  for (const auto& env : fixture_envelopes()) {
    WaterFamily fam(env.lift, env.branches);
    std::vector<RhoResult> rhos;
    for (int i = 0; i < 16; ++i) rhos.push_back(rho_nondecreasing(fam.at(fam.mu_max() * ratio(i, 15)), 64, 8));
    RhoResult low = rho_nondecreasing(fam.lower(), 64, 8), up = rho_nondecreasing(fam.upper(), 64, 8);
    CAPTURE(env.name);
    for (std::size_t i = 0; i < rhos.size(); ++i) {
      CHECK(low.lo <= rhos[i].hi);
      CHECK(rhos[i].lo <= up.hi);
      if (i > 0) CHECK(rhos[i - 1].lo <= rhos[i].hi);
    }
  }
}

TEST_CASE("upper envelope is 1-Lipschitz in the lift") {
  std::mt19937_64 rng(43);
  for (const auto& env : fixture_envelopes()) {
    for (int trial = 0; trial < 10; ++trial) {
      PLLift a = random_continuous_lift(rng), b = random_continuous_lift(rng);
      Rational d = support::sup_gap(a, b);
      PLLift ua = upper_map(a, env.branches), ub = upper_map(b, env.branches);
      CHECK(support::le_everywhere(ua, ub.plus(d)));
      CHECK(support::le_everywhere(ub, ua.plus(d)));
      PLLift la = lower_map(a, env.branches), lb = lower_map(b, env.branches);
      CHECK(support::le_everywhere(la, lb.plus(d)));
      CHECK(support::le_everywhere(lb, la.plus(d)));
    }
  }
}

TEST_CASE("rotation numbers of monotone lifts") {
  PLLift rot = PLLift::translation(R("3/7"));
  CHECK(rho_exact(rot, 12) == R("3/7"));
  CHECK(compare_rho(rot, 3, 7) == 0);
  CHECK(compare_rho(rot, 1, 2) == -1);
  CHECK(compare_rho(rot, 2, 5) == 1);
  RhoResult r = rho_nondecreasing(rot, 64, 12);
  CHECK(r.exact);
  CHECK(r.value == R("3/7"));
  for (int n : {16, 64, 256}) {
    RhoResult enc = rho_enclosure(rot, n);
    CHECK(enc.hi - enc.lo == ratio(2, n));
    CHECK(enc.lo <= R("3/7"));
    CHECK(R("3/7") <= enc.hi);
  }
  CHECK_FALSE(rho_exact(PLLift::translation(R("5/13")), 12).has_value());
  PLLift bumpy = PLLift::from_points({{R("0"), R("0")}, {R("1/2"), R("1")}, {R("3/4"), R("1/2")}, {R("1"), R("1")}});
  CHECK_THROWS_AS(rho_enclosure(bumpy, 8), Error);

  auto m61 = support::load("example-6-1");
  PLLift low = lower_map(m61.map.circle_restriction(), m61.map.branch_value_ranges());
  RhoResult enc = rho_enclosure(low, 64);
  CHECK(enc.hi - enc.lo == ratio(2, 64));
  auto exact = rho_exact(low, 8);
  REQUIRE(exact.has_value());
  CHECK(enc.lo <= *exact);
  CHECK(*exact <= enc.hi);
}

TEST_CASE("exact rotation numbers agree with periodic orbits") {
  std::mt19937_64 rng(44);
  int compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    PLLift g = support::random_monotone_lift(rng, trial % 3 == 0);
    REQUIRE(g.is_nondecreasing());
    REQUIRE(g.is_degree_one());
    auto orbit = support::orbit_rotation(g, 400);
    auto exact = rho_exact(g, 12);
    if (orbit && orbit->get_den() <= 12) {
      REQUIRE(exact.has_value());
      CHECK(*exact == *orbit);
      ++compared;
    }
    if (exact && orbit) CHECK(*exact == *orbit);
    // Enclosure endpoints from direct iteration.
    Rational x = 0;
    for (int k = 0; k < 16; ++k) x = g(x);
    RhoResult enc = rho_enclosure(g, 16);
    CHECK(enc.lo == (x - 1) / 16);
    CHECK(enc.hi == (x + 1) / 16);
  }
  CHECK(compared > 10);
}

TEST_CASE("combed rotation interval") {
  auto f4 = support::load("fig-4-combed");
  CombedRotation cr = rotation_interval_combed(f4.map);
  RotationInterval loops = rotation_set(f4.map);
  REQUIRE(cr.lower.exact);
  REQUIRE(cr.upper.exact);
  CHECK(cr.lower.value == loops.min);
  CHECK(cr.upper.value == loops.max);

  try {
    rotation_interval_combed(support::load("non-combed").map);
    FAIL("expected NotCombed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotCombed);
  }

  CombedRotation h = rotation_interval_combed(hump(), {});
  CHECK(h.lower.value == 0);
  CHECK(h.upper.value == R("1/2"));
  CombedRotation rigid = rotation_interval_combed(PLLift::translation(R("2/5")), {});
  CHECK(rigid.lower.value == R("2/5"));
  CHECK(rigid.upper.value == R("2/5"));
  CombedRotation id = rotation_interval_combed(support::load("circle-identity").map);
  CHECK(id.lower.value == 0);
  CHECK(id.upper.value == 0);
}

TEST_CASE("interior period set") {
  CHECK(m_set(R("1/3"), R("1/3"), 50).empty());
  std::set<int> unit;
  for (int n = 2; n <= 10; ++n) unit.insert(n);
  CHECK(m_set(Rational(0), Rational(1), 10) == unit);
  std::mt19937_64 rng(45);
  std::uniform_int_distribution<long> num(-30, 30);
  for (int trial = 0; trial < 100; ++trial) {
    Rational a = ratio(num(rng), 17), b = ratio(num(rng), 13);
    if (b < a) std::swap(a, b);
    auto got = m_set(a, b, 40);
    for (int n = 1; n <= 40; ++n) {
      bool expected = false;
      for (long k = to_ll(floor_of(a * n)) - 1; k <= to_ll(ceil_of(b * n)) + 1; ++k) {
        expected = expected || (a < ratio(k, n) && ratio(k, n) < b);
      }
      CHECK(got.count(n) == (expected ? 1u : 0u));
      if (a < b && Rational(n) > 1 / (b - a)) CHECK(got.count(n) == 1);
    }
  }
}

TEST_CASE("period set of a combed map agrees with loop search") {
  auto f4 = support::load("fig-4-combed");
  CombedPeriods cp = periods_combed(f4.map, 12);
  CHECK(cp.a == 0);
  CHECK(cp.b == 1);
  CHECK(cp.complete);
  std::set<int> searched;
  for (long q = 1; q <= 12; ++q) {
    for (long p = 0; p <= q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      auto res = periods_for_rotation(f4.map, p, q, 12);
      searched.insert(res.periods.begin(), res.periods.end());
    }
  }
  CHECK(cp.periods == searched);
  for (int n = 2; n <= 12; n += 2) CHECK(cp.periods.count(n));

  CombedPeriods id = periods_combed(support::load("circle-identity").map, 12);
  CHECK(id.interior.empty());
  CHECK(id.periods == std::set<int>{1});
  CHECK_THROWS_AS(periods_combed(support::load("non-combed").map, 12), Error);
}
