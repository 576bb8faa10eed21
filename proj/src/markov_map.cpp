#include "rotkit/markov_map.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace rotkit {

IntervalUnion normalize(IntervalUnion parts) {
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  IntervalUnion out;
  for (auto& p : parts) {
    if (!out.empty() && p.lo <= out.back().hi) {
      out.back().hi = max_of(out.back().hi, p.hi);
    } else {
      out.push_back(p);
    }
  }
  return out;
}

MarkovMap::MarkovMap(LiftedGraph graph, std::vector<std::vector<ChainEntry>> chains)
    : graph_(std::move(graph)), chains_(std::move(chains)) {
  const auto& g = graph_;
  const int m = g.edge_count();
  if (static_cast<int>(chains_.size()) != m) {
    throw Error(ErrorKind::InvalidMap, "need exactly one image chain per edge");
  }
  std::vector<std::optional<LiftedNode>> image(g.node_count());
  auto record = [&](int node, const LiftedNode& img) {
    LiftedNode c = g.canonical(node, 0);
    LiftedNode base{img.node, img.shift - c.shift};
    auto& slot = image[c.node];
    if (slot && *slot != base) {
      throw Error(ErrorKind::InvalidMap, "image of node '" + g.nodes()[c.node].id + "' is inconsistent between incident edges");
    }
    slot = base;
  };
  chain_length_.resize(m);
  cumulative_.resize(m);
  branches_.resize(m);
  for (int e = 0; e < m; ++e) {
    const auto& chain = chains_[e];
    const std::string& name = g.edges()[e].id;
    if (chain.empty()) throw Error(ErrorKind::InvalidMap, "edge '" + name + "' has an empty chain (constant pieces are not supported)");
    std::set<LiftedNode> visited;
    std::set<std::pair<int, long>> used;
    Rational total = 0;
    cumulative_[e].push_back(0);
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const auto& c = chain[i];
      if (c.edge < 0 || c.edge >= m) throw Error(ErrorKind::InvalidMap, "chain of '" + name + "' references an unknown edge");
      if (c.orientation != 1 && c.orientation != -1) throw Error(ErrorKind::InvalidMap, "orientation must be + or -");
      PathStep step{c.edge, c.orientation, c.shift};
      if (i > 0) {
        const auto& p = chain[i - 1];
        if (g.step_end({p.edge, p.orientation, p.shift}) != g.step_start(step)) {
          throw Error(ErrorKind::InvalidMap, "chain of '" + name + "' is not a path at entry " + std::to_string(i));
        }
      } else {
        visited.insert(g.step_start(step));
      }
      if (!used.insert({c.edge, c.shift}).second || !visited.insert(g.step_end(step)).second) {
        throw Error(ErrorKind::InvalidMap, "chain of '" + name + "' is not an interval (revisits a point)");
      }
      total += g.edges()[c.edge].length;
      cumulative_[e].push_back(total);
    }
    chain_length_[e] = total;
    const auto& first = chain.front();
    const auto& last = chain.back();
    record(g.tail(e), g.step_start({first.edge, first.orientation, first.shift}));
    record(g.head(e), g.step_end({last.edge, last.orientation, last.shift}));
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const auto& c = chain[i];
      const Rational& len = g.edges()[c.edge].length;
      AffineBranch b;
      b.source = e;
      b.entry = static_cast<int>(i);
      b.t0 = cumulative_[e][i] / total;
      b.t1 = cumulative_[e][i + 1] / total;
      b.target = c.edge;
      b.shift = c.shift;
      if (c.orientation > 0) {
        b.alpha = total / len;
        b.beta = -cumulative_[e][i] / len;
      } else {
        b.alpha = -total / len;
        b.beta = 1 + cumulative_[e][i] / len;
      }
      branches_[e].push_back(b);
    }
  }
  node_image_.resize(g.node_count());
  for (int v = 0; v < g.node_count(); ++v) {
    if (v == g.one_node()) continue;
    if (!image[v]) throw Error(ErrorKind::InvalidMap, "node '" + g.nodes()[v].id + "' has no image");
    node_image_[v] = *image[v];
  }
}

LiftedNode MarkovMap::node_image(const LiftedNode& n) const {
  LiftedNode c = graph_.canonical(n.node, n.shift);
  const LiftedNode& base = node_image_[c.node];
  return {base.node, base.shift + c.shift};
}

Point MarkovMap::evaluate(const Point& p) const {
  Point c = graph_.canonical(p);
  const auto& bs = branches_[c.edge];
  for (const auto& b : bs) {
    if (b.t0 <= c.t && c.t <= b.t1) {
      return graph_.canonical(Point{b.target, b.alpha * c.t + b.beta, b.shift + c.shift});
    }
  }
  throw Error(ErrorKind::InvalidInput, "point parameter outside [0,1]");
}

std::vector<Point> MarkovMap::iterate(const Point& p, int n) const {
  std::vector<Point> out{graph_.canonical(p)};
  for (int i = 0; i < n; ++i) out.push_back(evaluate(out.back()));
  return out;
}

Point MarkovMap::power(const Point& p, int n) const {
  Point x = graph_.canonical(p);
  for (int i = 0; i < n; ++i) x = evaluate(x);
  return x;
}

PLLift MarkovMap::circle_restriction() const { return power_restriction(1); }

PLLift MarkovMap::power_restriction(int n) const {
  struct Piece {
    Rational t_lo, t_hi;
    int edge;
    Rational a, b;  // parameter on `edge` is a * t + b
    long shift;
  };
  std::vector<std::pair<Rational, Rational>> pts;
  for (int e : graph_.spine_order()) {
    std::vector<Piece> pieces{{0, 1, e, 1, 0, 0}};
    for (int step = 0; step < n; ++step) {
      std::vector<Piece> next;
      for (const auto& pc : pieces) {
        Rational u0 = pc.a * pc.t_lo + pc.b, u1 = pc.a * pc.t_hi + pc.b;
        Rational ulo = min_of(u0, u1), uhi = max_of(u0, u1);
        for (const auto& br : branches_[pc.edge]) {
          Rational lo = max_of(ulo, br.t0), hi = min_of(uhi, br.t1);
          if (!(lo < hi)) continue;
          Rational ta = (lo - pc.b) / pc.a, tb = (hi - pc.b) / pc.a;
          next.push_back({min_of(ta, tb), max_of(ta, tb), br.target, br.alpha * pc.a, br.alpha * pc.b + br.beta,
                          pc.shift + br.shift});
        }
      }
      pieces = std::move(next);
    }
    const Rational& c0 = *graph_.nodes()[graph_.tail(e)].spine_coord;
    const Rational& c1 = *graph_.nodes()[graph_.head(e)].spine_coord;
    for (const auto& pc : pieces) {
      for (const Rational& t : {pc.t_lo, pc.t_hi}) {
        Rational x = c0 + t * (c1 - c0);
        Rational y = graph_.retract(Point{pc.edge, pc.a * t + pc.b, pc.shift});
        pts.emplace_back(x, y);
      }
    }
  }
  return PLLift::from_points(pts).simplified();
}

std::map<Rational, IntervalUnion> MarkovMap::branch_value_ranges() const {
  std::map<Rational, IntervalUnion> raw;
  const auto& g = graph_;
  for (const auto& comp : g.components()) {
    const Rational& z = *g.nodes()[comp.attach_node].spine_coord;
    auto& parts = raw[z];
    for (int e : comp.edges) {
      for (const auto& c : chains_[e]) {
        Rational a = g.retract(Point{c.edge, 0, c.shift});
        Rational b = g.retract(Point{c.edge, 1, c.shift});
        parts.push_back({min_of(a, b), max_of(a, b)});
      }
    }
  }
  std::map<Rational, IntervalUnion> out;
  for (auto& [z, parts] : raw) out[z] = normalize(std::move(parts));
  return out;
}

Rational MarkovMap::displacement_bound() const {
  Rational best = 0;
  for (int e = 0; e < graph_.edge_count(); ++e) {
    for (const auto& b : branches_[e]) {
      for (const Rational& t : {b.t0, b.t1}) {
        Rational src = graph_.retract(Point{e, t, 0});
        Rational dst = graph_.retract(Point{b.target, b.alpha * t + b.beta, b.shift});
        best = max_of(best, abs_of(dst - src));
      }
    }
  }
  return best;
}

}  // namespace rotkit
