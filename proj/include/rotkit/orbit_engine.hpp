#pragma once

#include "rotkit/markov_map.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rotkit {

struct OrbitOptions {
  int horizon = 200;
  // Above this many bits in a local parameter's denominator, iterate on dyadic
  // approximations and track the error instead (0 = never).
  int max_denominator_bits = 0;
};

struct OrbitStats {
  Point start;
  int horizon = 0;
  std::vector<Point> orbit;       // F^k(x), k = 0..horizon (canonical)
  std::vector<Rational> samples;  // (r(F^k x) - r(x)) / k, k = 1..horizon
  Rational lower, upper;          // tail extremes, or the exact value
  std::optional<std::pair<int, long>> period;  // minimal q with F^q(x) = x + p
  std::optional<std::pair<int, long>> eventual;  // preperiodic cycle (length, shift)
  std::optional<Rational> rho;    // exact when a (pre)period was detected
  bool inexact = false;           // dyadic fallback was used
  Rational error_bound;           // on r-values, inexact mode only
  std::string certification;      // exact | enclosure | empirical
};

OrbitStats rotation_estimate(const MarkovMap& map, const Point& x, const OrbitOptions& options = {});

struct SampleEntry {
  OrbitStats stats;
  bool on_spine = false;
  bool outside_spine_hull = false;
};

struct RotationSample {
  std::vector<SampleEntry> entries;
  Rational hull_lo, hull_hi;              // over all points
  std::optional<Rational> spine_lo, spine_hi;  // over spine points
};

RotationSample rotation_set_sample(const MarkovMap& map, const std::vector<Point>& points,
                                   const OrbitOptions& options = {});

}  // namespace rotkit
