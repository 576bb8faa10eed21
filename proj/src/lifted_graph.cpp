#include "rotkit/lifted_graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace rotkit {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::string dot_id(const std::string& id) {
  bool plain = !id.empty() && !std::isdigit(static_cast<unsigned char>(id[0]));
  for (char c : id) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') plain = false;
  }
  return plain ? id : "\"" + id + "\"";
}

}  // namespace

ValidationReport LiftedGraph::validate(const std::vector<NodeSpec>& nodes,
                                       const std::vector<EdgeSpec>& edges) {
  ValidationReport rep;
  auto fail = [&](ErrorKind k, const std::string& msg) { rep.violations.push_back({k, msg}); };

  std::map<std::string, int> node_idx;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (!node_idx.emplace(nodes[i].id, i).second) fail(ErrorKind::InvalidInput, "duplicate node id '" + nodes[i].id + "'");
    if (nodes[i].spine_coord && (*nodes[i].spine_coord < 0 || *nodes[i].spine_coord > 1)) {
      fail(ErrorKind::SpineNotTiled, "node '" + nodes[i].id + "' has spine coordinate outside [0,1]");
    }
  }
  std::set<std::string> edge_ids;
  std::vector<int> tails(edges.size(), -1), heads(edges.size(), -1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& ed = edges[e];
    if (!edge_ids.insert(ed.id).second) fail(ErrorKind::InvalidInput, "duplicate edge id '" + ed.id + "'");
    auto a = node_idx.find(ed.from), b = node_idx.find(ed.to);
    if (a == node_idx.end() || b == node_idx.end()) {
      fail(ErrorKind::InvalidInput, "edge '" + ed.id + "' references an unknown node");
      continue;
    }
    tails[e] = a->second;
    heads[e] = b->second;
    if (ed.length <= 0) fail(ErrorKind::InvalidInput, "edge '" + ed.id + "' must have positive length");
    if (tails[e] == heads[e]) fail(ErrorKind::InvalidInput, "edge '" + ed.id + "' is a self-loop; subdivide it");
  }
  if (!rep.ok()) return rep;

  int zero = -1, one = -1;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (!nodes[i].spine_coord) continue;
    if (*nodes[i].spine_coord == 0) {
      if (zero >= 0) fail(ErrorKind::SpineNotTiled, "two nodes at spine coordinate 0");
      zero = i;
    } else if (*nodes[i].spine_coord == 1) {
      if (one >= 0) fail(ErrorKind::SpineNotTiled, "two nodes at spine coordinate 1");
      one = i;
    }
  }
  if (zero < 0 || one < 0) {
    fail(ErrorKind::SpineNotTiled, "spine needs nodes at coordinates 0 and 1");
    return rep;
  }

  // Spine tiling.
  std::vector<int> spine;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& ed = edges[e];
    const auto& ct = nodes[tails[e]].spine_coord;
    const auto& ch = nodes[heads[e]].spine_coord;
    if (ed.on_spine) {
      if (!ct || !ch) {
        fail(ErrorKind::SpineNotTiled, "spine edge '" + ed.id + "' has an endpoint off the spine");
        continue;
      }
      if (!(*ct < *ch)) {
        fail(ErrorKind::SpineNotTiled, "spine edge '" + ed.id + "' must run in increasing coordinate");
        continue;
      }
      if (ed.length != *ch - *ct) {
        fail(ErrorKind::SpineNotTiled, "spine edge '" + ed.id + "' length differs from its coordinate span");
      }
      spine.push_back(static_cast<int>(e));
    } else if (ct && ch) {
      fail(ErrorKind::MultiAttachComponent, "off-spine edge '" + ed.id + "' joins two spine nodes");
    }
  }
  std::sort(spine.begin(), spine.end(), [&](int a, int b) {
    return *nodes[tails[a]].spine_coord < *nodes[tails[b]].spine_coord;
  });
  Rational cursor = 0;
  std::set<int> spine_nodes_used;
  for (int e : spine) {
    const Rational& ct = *nodes[tails[e]].spine_coord;
    if (ct != cursor) {
      fail(ErrorKind::SpineNotTiled, "spine gap or overlap at coordinate " + to_string(cursor));
      break;
    }
    cursor = *nodes[heads[e]].spine_coord;
    spine_nodes_used.insert(tails[e]);
    spine_nodes_used.insert(heads[e]);
  }
  if (rep.ok() && cursor != 1) fail(ErrorKind::SpineNotTiled, "spine does not reach coordinate 1");
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (nodes[i].spine_coord && !spine_nodes_used.count(i)) {
      fail(ErrorKind::SpineNotTiled, "spine node '" + nodes[i].id + "' is not on a spine edge");
    }
  }

  // Off-spine components.
  UnionFind uf(static_cast<int>(nodes.size()));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].on_spine) continue;
    int a = tails[e], b = heads[e];
    if (!nodes[a].spine_coord && !nodes[b].spine_coord) uf.unite(a, b);
  }
  std::map<int, std::set<int>> attach_of;  // root -> spine nodes touched
  std::set<int> roots;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].on_spine) continue;
    int a = tails[e], b = heads[e];
    int off = nodes[a].spine_coord ? b : a;
    int other = nodes[a].spine_coord ? a : (nodes[b].spine_coord ? b : -1);
    int root = uf.find(off);
    roots.insert(root);
    if (other >= 0) attach_of[root].insert(other);
  }
  std::set<Rational> branch;
  for (int root : roots) {
    const auto& at = attach_of[root];
    if (at.size() > 1) {
      fail(ErrorKind::MultiAttachComponent, "component containing node '" + nodes[root].id + "' meets the spine more than once");
    } else if (at.empty()) {
      fail(ErrorKind::Disconnected, "component containing node '" + nodes[root].id + "' never meets the spine");
    } else {
      int z = *at.begin();
      if (z == zero || z == one) {
        fail(ErrorKind::AttachAtZero, "component containing node '" + nodes[root].id + "' attaches at coordinate 0");
      } else {
        branch.insert(*nodes[z].spine_coord);
      }
    }
  }
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (nodes[i].spine_coord) continue;
    bool touched = false;
    for (std::size_t e = 0; e < edges.size(); ++e) touched |= (tails[e] == i || heads[e] == i);
    if (!touched) fail(ErrorKind::Disconnected, "node '" + nodes[i].id + "' has no incident edge");
  }
  rep.branching_points.assign(branch.begin(), branch.end());
  return rep;
}

LiftedGraph::LiftedGraph(std::vector<NodeSpec> nodes, std::vector<EdgeSpec> edges) {
  ValidationReport rep = validate(nodes, edges);
  if (!rep.ok()) throw Error(rep.violations.front().kind, rep.violations.front().message);
  nodes_ = std::move(nodes);
  edges_ = std::move(edges);
  const int n = node_count(), m = edge_count();
  for (int e = 0; e < m; ++e) {
    tails_.push_back(node_index(edges_[e].from));
    heads_.push_back(node_index(edges_[e].to));
  }
  for (int i = 0; i < n; ++i) {
    if (nodes_[i].spine_coord && *nodes_[i].spine_coord == 0) zero_node_ = i;
    if (nodes_[i].spine_coord && *nodes_[i].spine_coord == 1) one_node_ = i;
  }
  for (int e = 0; e < m; ++e) {
    if (edges_[e].on_spine) spine_order_.push_back(e);
  }
  std::sort(spine_order_.begin(), spine_order_.end(), [&](int a, int b) {
    return *nodes_[tails_[a]].spine_coord < *nodes_[tails_[b]].spine_coord;
  });

  UnionFind uf(n);
  for (int e = 0; e < m; ++e) {
    if (!edges_[e].on_spine && !is_spine_node(tails_[e]) && !is_spine_node(heads_[e])) uf.unite(tails_[e], heads_[e]);
  }
  edge_component_.assign(m, -1);
  node_component_.assign(n, -1);
  std::map<int, int> root_to_comp;
  for (int e = 0; e < m; ++e) {
    if (edges_[e].on_spine) continue;
    int off = is_spine_node(tails_[e]) ? heads_[e] : tails_[e];
    int root = uf.find(off);
    auto it = root_to_comp.find(root);
    if (it == root_to_comp.end()) {
      it = root_to_comp.emplace(root, static_cast<int>(components_.size())).first;
      components_.push_back({});
    }
    auto& comp = components_[it->second];
    comp.edges.push_back(e);
    edge_component_[e] = it->second;
    for (int v : {tails_[e], heads_[e]}) {
      if (is_spine_node(v)) comp.attach_node = v;
      else node_component_[v] = it->second;
      if (std::find(comp.nodes.begin(), comp.nodes.end(), v) == comp.nodes.end()) comp.nodes.push_back(v);
    }
  }
  for (auto& comp : components_) std::sort(comp.nodes.begin(), comp.nodes.end());
  branching_points_ = rep.branching_points;

  incidence_.assign(n, {});
  for (int e = 0; e < m; ++e) {
    LiftedNode t = canonical(tails_[e], 0), h = canonical(heads_[e], 0);
    incidence_[t.node].push_back({e, 0, t.shift});
    incidence_[h.node].push_back({e, 1, h.shift});
  }
  for (auto& inc : incidence_) {
    std::sort(inc.begin(), inc.end(), [](const Incidence& a, const Incidence& b) {
      return std::tie(a.edge, a.end) < std::tie(b.edge, b.end);
    });
  }
}

int LiftedGraph::node_index(const std::string& id) const {
  for (int i = 0; i < node_count(); ++i) {
    if (nodes_[i].id == id) return i;
  }
  return -1;
}

int LiftedGraph::edge_index(const std::string& id) const {
  for (int i = 0; i < edge_count(); ++i) {
    if (edges_[i].id == id) return i;
  }
  return -1;
}

LiftedNode LiftedGraph::canonical(int node, long shift) const {
  if (node == one_node_) return {zero_node_, shift + 1};
  return {node, shift};
}

Rational LiftedGraph::node_position(const LiftedNode& n) const {
  if (is_spine_node(n.node)) return *nodes_[n.node].spine_coord + n.shift;
  int comp = node_component_[n.node];
  return *nodes_[components_[comp].attach_node].spine_coord + n.shift;
}

Point LiftedGraph::point_at(const LiftedNode& n) const {
  LiftedNode c = canonical(n.node, n.shift);
  const Incidence& inc = incidence_[c.node].front();
  return Point{inc.edge, Rational(inc.end), c.shift - inc.offset};
}

std::optional<LiftedNode> LiftedGraph::node_of(const Point& p) const {
  if (p.t == 0) return edge_tail(p.edge, p.shift);
  if (p.t == 1) return edge_head(p.edge, p.shift);
  return std::nullopt;
}

Point LiftedGraph::canonical(const Point& p) const {
  Point out = p;
  out.t.canonicalize();
  if (auto n = node_of(out)) return point_at(*n);
  return out;
}

bool LiftedGraph::same_point(const Point& a, const Point& b) const {
  Point ca = canonical(a), cb = canonical(b);
  return ca.edge == cb.edge && ca.t == cb.t && ca.shift == cb.shift;
}

int LiftedGraph::component_of(const Point& p) const {
  if (auto n = node_of(p)) return node_component_[n->node];
  return edge_component_[p.edge];
}

Point LiftedGraph::spine_point(const Rational& x) const {
  Integer k = floor_of(x);
  Rational f = x - Rational(k);
  for (int e : spine_order_) {
    const Rational& c0 = *nodes_[tails_[e]].spine_coord;
    const Rational& c1 = *nodes_[heads_[e]].spine_coord;
    if (c0 <= f && f < c1) {
      Rational t = (f - c0) / (c1 - c0);
      return canonical(Point{e, t, to_ll(k)});
    }
  }
  throw Error(ErrorKind::InvalidInput, "spine coordinate not covered: " + to_string(x));
}

Rational LiftedGraph::retract(const Point& p) const {
  const int e = p.edge;
  if (edges_[e].on_spine) {
    const Rational& c0 = *nodes_[tails_[e]].spine_coord;
    const Rational& c1 = *nodes_[heads_[e]].spine_coord;
    return c0 + p.t * (c1 - c0) + p.shift;
  }
  int comp = edge_component_[e];
  return *nodes_[components_[comp].attach_node].spine_coord + p.shift;
}

Point LiftedGraph::translate(const Point& p, long k) const {
  return Point{p.edge, p.t, p.shift + k};
}

Rational LiftedGraph::intra_component_distance(int comp, const Point& a, const Point& b) const {
  const auto& c = components_[comp];
  std::map<int, Rational> dist;
  std::set<int> done;
  auto relax = [&](int v, const Rational& d) {
    auto it = dist.find(v);
    if (it == dist.end() || d < it->second) dist[v] = d;
  };
  auto seed = [&](const Point& p, auto&& sink) {
    if (auto n = node_of(p)) {
      sink(n->node, Rational(0));
    } else {
      const Rational& len = edges_[p.edge].length;
      sink(tails_[p.edge], p.t * len);
      sink(heads_[p.edge], (1 - p.t) * len);
    }
  };
  seed(a, relax);
  while (true) {
    int best = -1;
    for (auto& [v, d] : dist) {
      if (!done.count(v) && (best < 0 || d < dist[best])) best = v;
    }
    if (best < 0) break;
    done.insert(best);
    for (int e : c.edges) {
      int other = tails_[e] == best ? heads_[e] : (heads_[e] == best ? tails_[e] : -1);
      if (other >= 0) relax(other, dist[best] + edges_[e].length);
    }
  }
  std::optional<Rational> result;
  auto take = [&](int v, const Rational& extra) {
    auto it = dist.find(v);
    if (it == dist.end()) return;
    Rational d = it->second + extra;
    if (!result || d < *result) result = d;
  };
  seed(b, take);
  if (!node_of(a) && !node_of(b) && a.edge == b.edge) {
    Rational d = abs_of(a.t - b.t) * edges_[a.edge].length;
    if (!result || d < *result) result = d;
  }
  return result.value_or(Rational(0));
}

Rational LiftedGraph::distance_to_attach(const Point& p) const {
  int comp = component_of(p);
  if (comp < 0) return 0;
  Point attach = point_at(canonical(components_[comp].attach_node, 0));
  return intra_component_distance(comp, p, attach);
}

Rational LiftedGraph::distance(const Point& p, const Point& q) const {
  Point a = canonical(p), b = canonical(q);
  int ca = component_of(a), cb = component_of(b);
  if (ca >= 0 && ca == cb && a.shift == b.shift) return intra_component_distance(ca, a, b);
  return distance_to_attach(a) + abs_of(retract(a) - retract(b)) + distance_to_attach(b);
}

LiftedNode LiftedGraph::step_start(const PathStep& s) const {
  return s.orientation > 0 ? edge_tail(s.edge, s.shift) : edge_head(s.edge, s.shift);
}

LiftedNode LiftedGraph::step_end(const PathStep& s) const {
  return s.orientation > 0 ? edge_head(s.edge, s.shift) : edge_tail(s.edge, s.shift);
}

GraphPath LiftedGraph::straighten_path(const GraphPath& path) const {
  if (path.steps.empty()) throw Error(ErrorKind::NotEscaping, "empty path");
  std::vector<LiftedNode> seq{step_start(path.steps.front())};
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    if (i > 0 && step_start(path.steps[i]) != seq.back()) {
      throw Error(ErrorKind::InvalidInput, "path steps " + std::to_string(i - 1) + " and " + std::to_string(i) + " do not share an endpoint");
    }
    seq.push_back(step_end(path.steps[i]));
  }
  const std::size_t k = seq.size() - 1;
  if (!is_spine_node(seq[k].node)) throw Error(ErrorKind::NotEscaping, "path does not end on the spine");
  const Rational end_r = node_position(seq[k]);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(node_position(seq[i]) < end_r)) {
      throw Error(ErrorKind::NotEscaping, "path end is not strictly right of every earlier point");
    }
  }

  GraphPath out;
  std::size_t first_spine = 0;
  while (!is_spine_node(seq[first_spine].node)) ++first_spine;
  // Off-spine prefix: jump to the last visit of the current node, then move on.
  std::size_t i = 0;
  while (i < first_spine) {
    std::size_t j = i;
    for (std::size_t s = i; s <= first_spine; ++s) {
      if (seq[s] == seq[i]) j = s;
    }
    out.steps.push_back(path.steps[j]);
    i = j + 1;
  }
  Rational best = node_position(seq[first_spine]);
  for (std::size_t s = first_spine; s < k; ++s) {
    const PathStep& st = path.steps[s];
    if (!edges_[st.edge].on_spine) continue;
    Rational from = node_position(seq[s]), to = node_position(seq[s + 1]);
    if (from == best && to > best) {
      out.steps.push_back(st);
      best = to;
    }
  }
  return out;
}

std::string LiftedGraph::to_dot() const {
  std::ostringstream os;
  os << "graph domain {\n";
  for (const auto& nd : nodes_) {
    os << "  " << dot_id(nd.id);
    if (nd.spine_coord) os << " [shape=box, xlabel=\"" << to_string(*nd.spine_coord) << "\"]";
    os << ";\n";
  }
  for (int e = 0; e < edge_count(); ++e) {
    os << "  " << dot_id(nodes_[tails_[e]].id) << " -- " << dot_id(nodes_[heads_[e]].id)
       << " [label=" << dot_id(edges_[e].id) << (edges_[e].on_spine ? ", style=bold" : "") << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace rotkit
