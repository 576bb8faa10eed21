#pragma once

#include "rotkit/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace rotkit {

struct Arrow {
  int from = 0;
  int to = 0;
  long label = 0;
};

struct LabeledDigraph {
  int node_count = 0;
  std::vector<Arrow> arrows;
};

// Cyclic sequence of arrow indices.
struct Loop {
  std::vector<int> arrows;
  int length() const { return static_cast<int>(arrows.size()); }
  long weight = 0;
  Rational mean() const { return ratio(weight, length()); }
};

struct CycleMean {
  Rational value;
  Loop witness;  // elementary loop attaining the value
};

// Components in order of their smallest node; nodes sorted inside each.
std::vector<std::vector<int>> strongly_connected_components(const LabeledDigraph& g);
LabeledDigraph induced_subgraph(const LabeledDigraph& g, const std::vector<int>& nodes,
                                std::vector<int>* arrow_map = nullptr);

// Exact minimum / maximum cycle mean (Karp) with a witness loop; nullopt when acyclic.
std::optional<CycleMean> min_cycle_mean(const LabeledDigraph& g);
std::optional<CycleMean> max_cycle_mean(const LabeledDigraph& g);

// All elementary loops, each once up to rotation (Johnson's circuit search with
// parallel arrows expanded). Throws TooLarge beyond the bounds.
std::vector<Loop> elementary_loops(const LabeledDigraph& g, int max_nodes = 20,
                                   std::size_t max_loops = 2000000);

}  // namespace rotkit
