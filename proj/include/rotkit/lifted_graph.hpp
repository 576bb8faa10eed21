#pragma once

#include "rotkit/errors.hpp"
#include "rotkit/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rotkit {

struct NodeSpec {
  std::string id;
  std::optional<Rational> spine_coord;
};

struct EdgeSpec {
  std::string id;
  std::string from;
  std::string to;
  Rational length;
  bool on_spine = false;
};

struct Violation {
  ErrorKind kind;
  std::string message;
};

struct ValidationReport {
  bool ok() const { return violations.empty(); }
  std::vector<Violation> violations;
  std::vector<Rational> branching_points;  // sorted, in (0,1)
};

// A node of the lifted space: fundamental-domain node plus a copy index.
// Canonical form never uses the node at spine coordinate 1.
struct LiftedNode {
  int node = 0;
  long shift = 0;
  bool operator==(const LiftedNode&) const = default;
  auto operator<=>(const LiftedNode&) const = default;
};

// Location on an edge: t is the local parameter from the tail (0) to the head (1).
struct Point {
  int edge = 0;
  Rational t;
  long shift = 0;
};

struct PathStep {
  int edge = 0;
  int orientation = 1;  // +1 tail to head, -1 head to tail
  long shift = 0;
};

struct GraphPath {
  std::vector<PathStep> steps;
};

struct OffSpineComponent {
  int attach_node = 0;
  std::vector<int> edges;
  std::vector<int> nodes;  // includes the attachment node
};

class LiftedGraph {
 public:
  LiftedGraph() = default;
  // Throws Error with the first violation found by validate().
  LiftedGraph(std::vector<NodeSpec> nodes, std::vector<EdgeSpec> edges);

  static ValidationReport validate(const std::vector<NodeSpec>& nodes,
                                   const std::vector<EdgeSpec>& edges);

  const std::vector<NodeSpec>& nodes() const { return nodes_; }
  const std::vector<EdgeSpec>& edges() const { return edges_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int node_index(const std::string& id) const;  // -1 when absent
  int edge_index(const std::string& id) const;
  int tail(int edge) const { return tails_[edge]; }
  int head(int edge) const { return heads_[edge]; }
  bool is_spine_edge(int edge) const { return edges_[edge].on_spine; }
  bool is_spine_node(int node) const { return nodes_[node].spine_coord.has_value(); }
  int zero_node() const { return zero_node_; }
  int one_node() const { return one_node_; }
  const std::vector<int>& spine_order() const { return spine_order_; }
  const std::vector<OffSpineComponent>& components() const { return components_; }
  int component_of_edge(int edge) const { return edge_component_[edge]; }
  const std::vector<Rational>& branching_points() const { return branching_points_; }

  LiftedNode canonical(int node, long shift) const;
  LiftedNode edge_tail(int edge, long shift) const { return canonical(tails_[edge], shift); }
  LiftedNode edge_head(int edge, long shift) const { return canonical(heads_[edge], shift); }
  Rational node_position(const LiftedNode& n) const;  // retraction of a node

  // Point at a lifted node, expressed on the lowest-index incident edge.
  Point point_at(const LiftedNode& n) const;
  Point canonical(const Point& p) const;
  bool same_point(const Point& a, const Point& b) const;
  // Lifted node for a point sitting exactly at a node, if any.
  std::optional<LiftedNode> node_of(const Point& p) const;
  // Component index for off-spine points, -1 for spine points.
  int component_of(const Point& p) const;
  // Spine point with real coordinate x.
  Point spine_point(const Rational& x) const;

  Rational retract(const Point& p) const;
  Point translate(const Point& p, long k) const;
  Rational distance(const Point& p, const Point& q) const;
  GraphPath straighten_path(const GraphPath& path) const;

  LiftedNode step_start(const PathStep& s) const;
  LiftedNode step_end(const PathStep& s) const;

  std::string to_dot() const;

 private:
  struct Incidence {
    int edge;
    int end;  // 0 tail, 1 head
    long offset;
  };
  Rational distance_to_attach(const Point& p) const;
  Rational intra_component_distance(int comp, const Point& a, const Point& b) const;

  std::vector<NodeSpec> nodes_;
  std::vector<EdgeSpec> edges_;
  std::vector<int> tails_;
  std::vector<int> heads_;
  int zero_node_ = -1;
  int one_node_ = -1;
  std::vector<int> spine_order_;
  std::vector<OffSpineComponent> components_;
  std::vector<int> edge_component_;
  std::vector<int> node_component_;  // -1 for spine nodes
  std::vector<Rational> branching_points_;
  std::vector<std::vector<Incidence>> incidence_;
};

}  // namespace rotkit
