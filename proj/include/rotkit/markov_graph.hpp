#pragma once

#include "rotkit/digraph.hpp"
#include "rotkit/markov_map.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rotkit {

// Nodes are the edges of the lifted graph; arrow i comes from chain entry
// arrow_entry[i] = (source edge, entry index) and carries the entry shift.
struct MarkovGraph {
  LabeledDigraph digraph;
  std::vector<std::pair<int, int>> arrow_entry;
  std::vector<std::string> node_names;
};

MarkovGraph build_markov_graph(const MarkovMap& map);
std::string markov_graph_dot(const MarkovGraph& graph);

struct ComponentRotation {
  std::vector<int> nodes;
  Rational min, max;
  Loop min_witness, max_witness;
};

struct RotationInterval {
  Rational min, max;
  Loop min_witness, max_witness;  // arrows of the graph the interval was computed on
  bool transitive = false;
  bool hull = false;  // true when assembled from several strongly connected components
  std::vector<ComponentRotation> components;
  std::string caveat;
};

struct TransitivityReport {
  bool transitive = false;
  bool strongly_connected = false;
  bool single_cycle = false;
  std::vector<std::vector<int>> components;
};

TransitivityReport check_transitive(const MarkovGraph& graph);
TransitivityReport check_transitive(const MarkovMap& map);

// Throws NoLoop when the graph has no cycle.
RotationInterval rotation_set(const MarkovGraph& graph);
RotationInterval rotation_set(const MarkovMap& map);
// (1/n) times the cycle-mean interval of the n-step graph on spine edges.
RotationInterval rotation_set_of_power(const MarkovMap& map, int n);

std::vector<Loop> enumerate_elementary_loops(const MarkovGraph& graph, int max_nodes = 20);

struct PeriodWitness {
  Loop loop;  // empty for witnesses taken from a periodic node orbit
  Point point;
  int period = 0;  // q: minimal n with F^n(x) in x + Z
  long shift = 0;  // p with F^q(x) = x + p
  bool boundary = false;  // orbit meets a partition endpoint
  bool node_orbit = false;
  bool twist = false;  // orbit mod 1 lies in the spine and F is strictly increasing on it
};

struct PeriodSearchOptions {
  long budget = 1000000;  // loop-search expansions
};

struct PeriodResult {
  long p = 0;
  long q = 1;
  int n_max = 0;
  std::set<int> periods;
  std::map<int, PeriodWitness> witnesses;
  bool complete = true;  // false when the budget ran out; periods are then a verified subset
  long expansions = 0;
};

// Periodic points of F realizing the loop; nullopt when the loop is not realized.
std::optional<PeriodWitness> loop_witness(const MarkovMap& map, const MarkovGraph& graph, const Loop& loop);
// Exact re-check: F^q(x) = x + p and no smaller d has F^d(x) in x + Z.
bool verify_witness(const MarkovMap& map, const PeriodWitness& witness);
// The orbit mod 1 of x (period mod 1 = `period`) lies in the spine and F restricted to it is strictly increasing.
bool is_twist_orbit(const MarkovMap& map, const Point& x, int period);
// Minimal d <= limit with F^d(x) in x + Z, and the matching shift.
std::optional<std::pair<int, long>> minimal_period(const MarkovMap& map, const Point& x, int limit);

PeriodResult periods_for_rotation(const MarkovMap& map, long p, long q, int n_max,
                                  const PeriodSearchOptions& options = {});

struct Itinerary {
  std::vector<int> arrows;
  long start_shift = 0;  // n(x)
  long weight = 0;
  Rational estimate;  // weight / n
};

Itinerary itinerary(const MarkovMap& map, const MarkovGraph& graph, const Point& x, int n);

}  // namespace rotkit
