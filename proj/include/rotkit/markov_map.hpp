#pragma once

#include "rotkit/lifted_graph.hpp"
#include "rotkit/pl_lift.hpp"

#include <map>
#include <vector>

namespace rotkit {

struct ChainEntry {
  int edge = 0;
  long shift = 0;
  int orientation = 1;
};

struct Interval {
  Rational lo, hi;
  bool operator==(const Interval&) const = default;
};

// Sorted, pairwise disjoint closed intervals.
using IntervalUnion = std::vector<Interval>;
IntervalUnion normalize(IntervalUnion parts);

// Affine restriction of the map to one chain entry: local parameter t on the
// source edge within [t0, t1] goes to alpha * t + beta on the entry's edge.
struct AffineBranch {
  int source = 0;
  int entry = 0;
  Rational t0, t1;
  Rational alpha, beta;
  int target = 0;
  long shift = 0;
};

class MarkovMap {
 public:
  MarkovMap() = default;
  MarkovMap(LiftedGraph graph, std::vector<std::vector<ChainEntry>> chains);

  const LiftedGraph& graph() const { return graph_; }
  const std::vector<std::vector<ChainEntry>>& chains() const { return chains_; }
  const Rational& chain_length(int edge) const { return chain_length_[edge]; }
  Rational slope(int edge) const { return chain_length_[edge] / graph_.edges()[edge].length; }
  const AffineBranch& branch(int edge, int entry) const { return branches_[edge][entry]; }

  LiftedNode node_image(const LiftedNode& n) const;
  Point evaluate(const Point& p) const;
  // Orbit x, F(x), ..., F^n(x) (n + 1 points).
  std::vector<Point> iterate(const Point& p, int n) const;
  Point power(const Point& p, int n) const;

  PLLift circle_restriction() const;
  // r o F^n on the spine, built from the n-th image pieces of every spine edge.
  PLLift power_restriction(int n) const;
  std::map<Rational, IntervalUnion> branch_value_ranges() const;
  // max |r(F(x)) - r(x)| over the whole space.
  Rational displacement_bound() const;

 private:
  LiftedGraph graph_;
  std::vector<std::vector<ChainEntry>> chains_;
  std::vector<Rational> chain_length_;
  std::vector<std::vector<Rational>> cumulative_;  // chain prefix lengths
  std::vector<std::vector<AffineBranch>> branches_;
  std::vector<LiftedNode> node_image_;
};

}  // namespace rotkit
