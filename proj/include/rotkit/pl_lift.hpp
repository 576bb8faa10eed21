#pragma once

#include "rotkit/rational.hpp"

#include <map>
#include <utility>
#include <vector>

namespace rotkit {

// One breakpoint of a piecewise-linear lift; left/right are one-sided limits.
struct Knot {
  Rational x;
  Rational left;
  Rational value;
  Rational right;
};

struct Segment {
  Rational x0, y0, x1, y1;  // open piece between two knots, endpoints as limits
};

// Piecewise-linear degree-one lift with exact rational knots on [0,1],
// possibly with jumps. Extended to the real line by L(x+1) = L(x) + 1.
class PLLift {
 public:
  PLLift();  // identity
  static PLLift from_points(const std::vector<std::pair<Rational, Rational>>& points);
  static PLLift from_knots(std::vector<Knot> knots);
  static PLLift translation(const Rational& c);

  const std::vector<Knot>& knots() const { return knots_; }
  std::vector<std::pair<Rational, Rational>> breakpoints() const;

  Rational operator()(const Rational& x) const;
  Rational left_limit(const Rational& x) const;
  Rational right_limit(const Rational& x) const;

  bool is_continuous() const;
  bool is_nondecreasing() const;
  bool is_degree_one() const;

  PLLift plus(const Rational& c) const;
  PLLift reflect() const;  // x -> -L(-x)
  PLLift simplified() const;

  // sup over [x-1, x] of the lift and of the spike values placed at z + k.
  PLLift running_max(const std::map<Rational, Rational>& spikes = {}) const;
  // inf over [x, x+1], mirror of running_max.
  PLLift running_min(const std::map<Rational, Rational>& spikes = {}) const;

  static PLLift pointwise_min(const PLLift& a, const PLLift& b);
  static PLLift pointwise_max(const PLLift& a, const PLLift& b);
  // outer after inner; exact one-sided limits for monotone or continuous inputs.
  static PLLift compose(const PLLift& outer, const PLLift& inner);
  static Rational sup_distance(const PLLift& a, const PLLift& b);

  // Linear pieces covering [lo, hi] (lo < hi); knots inside contribute their
  // one-sided limits as segment endpoints.
  std::vector<Segment> segments(const Rational& lo, const Rational& hi) const;
  // Knot positions (all shifts) inside [lo, hi].
  std::vector<Rational> knot_positions(const Rational& lo, const Rational& hi) const;

  bool operator==(const PLLift& other) const;

 private:
  explicit PLLift(std::vector<Knot> knots);
  std::size_t locate(const Rational& frac) const;  // index i with x_i <= frac < x_{i+1}
  PLLift refined(const std::vector<Rational>& extra) const;

  std::vector<Knot> knots_;
};

}  // namespace rotkit
