#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace rotkit;
using support::R;

namespace {

// First repeat of the orbit modulo integer translation, found by pairwise comparison.
std::optional<Rational> brute_rho(const MarkovMap& map, const Point& x, int horizon) {
  const auto& g = map.graph();
  std::vector<Point> orbit{g.canonical(x)};
  for (int j = 1; j <= horizon; ++j) {
    orbit.push_back(map.evaluate(orbit.back()));
    for (int i = 0; i < j; ++i) {
      Rational drift = g.retract(orbit[j]) - g.retract(orbit[i]);
      if (drift.get_den() != 1) continue;
      long k = to_ll(drift.get_num());
      if (g.same_point(orbit[j], g.translate(orbit[i], k))) return ratio(k, j - i);
    }
  }
  return std::nullopt;
}

std::vector<Point> spine_grid(const LiftedGraph& g, long den) {
  std::vector<Point> out;
  for (long i = 0; i < den; ++i) out.push_back(g.spine_point(ratio(i, den)));
  return out;
}

}  // namespace

TEST_CASE("branch and spine points of the hull example") {
  auto m = support::load("ex-1-8");
  OrbitOptions opts;
  opts.horizon = 50;
  auto a = rotation_estimate(m.map, m.points.at("a"), opts);
  auto b = rotation_estimate(m.map, m.points.at("b"), opts);
  REQUIRE(a.rho.has_value());
  REQUIRE(b.rho.has_value());
  CHECK(*a.rho == -1);
  CHECK(*b.rho == 1);
  CHECK(a.certification == "exact");
  for (const auto& p : spine_grid(m.map.graph(), 12)) {
    auto st = rotation_estimate(m.map, p, opts);
    REQUIRE(st.rho.has_value());
    CHECK(*st.rho == 0);
  }
}

TEST_CASE("periods of named points") {
  auto m61 = support::load("example-6-1");
  auto e = rotation_estimate(m61.map, m61.points.at("e"));
  REQUIRE(e.period.has_value());
  CHECK(*e.period == std::make_pair(1, 0L));

  auto m62 = support::load("example-6-2");
  auto e2 = rotation_estimate(m62.map, m62.points.at("e"));
  REQUIRE(e2.period.has_value());
  CHECK(*e2.period == std::make_pair(1, 1L));
  auto c = rotation_estimate(m62.map, m62.points.at("c"));
  REQUIRE(c.period.has_value());
  CHECK(*c.period == std::make_pair(3, 0L));
  CHECK(*c.rho == 0);

  // 25/174 has period 2 and shift 1.
  auto half = rotation_estimate(m61.map, m61.map.graph().spine_point(R("25/174")));
  REQUIRE(half.period.has_value());
  CHECK(*half.period == std::make_pair(2, 1L));
  CHECK(*half.rho == R("1/2"));
}

TEST_CASE("exact values agree with pairwise search") {
  std::mt19937_64 rng(61);
  for (const auto& name : support::fixture_names()) {
    auto m = support::load(name);
    const auto& g = m.map.graph();
    RotationInterval rot = rotation_set(m.map);
    std::uniform_int_distribution<int> edge(0, g.edge_count() - 1), t(0, 24);
    for (int i = 0; i < 40; ++i) {
      Point p = g.canonical(Point{edge(rng), ratio(t(rng), 24), 0});
      OrbitOptions opts;
      opts.horizon = 60;
      auto st = rotation_estimate(m.map, p, opts);
      auto oracle = brute_rho(m.map, p, 60);
      CAPTURE(name);
      CHECK(st.rho.has_value() == oracle.has_value());
      if (!st.rho || !oracle) continue;
      CHECK(*st.rho == *oracle);
      CHECK(rot.min <= *st.rho);
      CHECK(*st.rho <= rot.max);
      if (st.period) CHECK(g.same_point(st.orbit[st.period->first], g.translate(st.start, st.period->second)));
    }
  }
}

TEST_CASE("samples respect the displacement bound") {
  std::mt19937_64 rng(62);
  for (const auto& name : support::fixture_names()) {
    auto m = support::load(name);
    const auto& g = m.map.graph();
    Rational bound = m.map.displacement_bound();
    std::uniform_int_distribution<int> edge(0, g.edge_count() - 1), t(0, 97);
    for (int i = 0; i < 10; ++i) {
      Point p = g.canonical(Point{edge(rng), ratio(t(rng), 97), 0});
      auto st = rotation_estimate(m.map, p);
      REQUIRE(st.samples.size() == 200);
      for (const auto& s : st.samples) CHECK(abs_of(s) <= bound);
      CHECK(st.lower <= st.upper);
    }
  }
}

TEST_CASE("estimates are invariant under integer translation") {
  std::mt19937_64 rng(63);
  std::uniform_int_distribution<long> shift(-4, 4);
  for (const auto& name : support::fixture_names()) {
    auto m = support::load(name);
    const auto& g = m.map.graph();
    std::uniform_int_distribution<int> edge(0, g.edge_count() - 1), t(0, 31);
    for (int i = 0; i < 10; ++i) {
      Point p = g.canonical(Point{edge(rng), ratio(t(rng), 31), 0});
      OrbitOptions opts;
      opts.horizon = 40;
      auto a = rotation_estimate(m.map, p, opts);
      auto b = rotation_estimate(m.map, g.translate(p, shift(rng)), opts);
      CHECK(a.samples == b.samples);
      CHECK(a.rho == b.rho);
      CHECK(a.period == b.period);
    }
  }
}

TEST_CASE("dyadic fallback encloses the true value") {
  auto m = support::load("example-6-1");
  const auto& g = m.map.graph();
  OrbitOptions opts;
  opts.horizon = 40;
  opts.max_denominator_bits = 2;
  for (const auto& [x, rho] : std::vector<std::pair<Rational, Rational>>{{R("5/54"), R("0")}, {R("25/174"), R("1/2")}}) {
    auto st = rotation_estimate(m.map, g.spine_point(x), opts);
    CHECK(st.inexact);
    CHECK(st.certification == "enclosure");
    CHECK(st.lower <= rho);
    CHECK(rho <= st.upper);
  }
}

TEST_CASE("degenerate horizons") {
  auto m = support::load("example-6-1");
  OrbitOptions opts;
  opts.horizon = 0;
  auto st = rotation_estimate(m.map, m.points.at("a"), opts);
  CHECK(st.samples.empty());
  CHECK(st.orbit.size() == 1);
  CHECK(st.certification == "empirical");
  opts.horizon = -1;
  CHECK_THROWS_AS(rotation_estimate(m.map, m.points.at("a"), opts), Error);
}

TEST_CASE("sampling flags points outside the spine hull") {
  auto m = support::load("ex-1-8");
  std::vector<Point> pts = spine_grid(m.map.graph(), 8);
  pts.push_back(m.points.at("a"));
  pts.push_back(m.points.at("b"));
  OrbitOptions opts;
  opts.horizon = 50;
  auto sample = rotation_set_sample(m.map, pts, opts);
  REQUIRE(sample.spine_lo.has_value());
  CHECK(*sample.spine_lo == 0);
  CHECK(*sample.spine_hi == 0);
  CHECK(sample.hull_lo == -1);
  CHECK(sample.hull_hi == 1);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(sample.entries[i].on_spine);
    CHECK_FALSE(sample.entries[i].outside_spine_hull);
  }
  CHECK_FALSE(sample.entries[8].on_spine);
  CHECK(sample.entries[8].outside_spine_hull);
  CHECK(sample.entries[9].outside_spine_hull);
}

TEST_CASE("spine samples of the first worked example stay in its rotation set") {
  auto m = support::load("example-6-1");
  std::mt19937_64 rng(64);
  std::vector<Point> pts;
  for (int i = 0; i < 50; ++i) pts.push_back(m.map.graph().spine_point(support::random_rational(rng, R("0"), R("1"), 1009)));
  auto sample = rotation_set_sample(m.map, pts);
  REQUIRE(sample.spine_lo.has_value());
  // Tail extremes of an empirical run can overshoot by at most bound / (horizon / 2).
  Rational slack = m.map.displacement_bound() / 100;
  CHECK(*sample.spine_lo >= R("-1/2") - slack);
  CHECK(*sample.spine_hi <= R("1/2") + slack);
  for (const auto& e : sample.entries) {
    if (e.stats.rho) CHECK(abs_of(*e.stats.rho) <= R("1/2"));
  }
}
