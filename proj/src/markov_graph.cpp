#include "rotkit/markov_graph.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <sstream>

namespace rotkit {

namespace {

std::string dot_name(const std::string& id) {
  bool plain = !id.empty() && !std::isdigit(static_cast<unsigned char>(id[0]));
  for (char c : id) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') plain = false;
  }
  return plain ? id : "\"" + id + "\"";
}

Loop remap(const Loop& loop, const std::vector<int>& arrow_map) {
  Loop out;
  out.weight = loop.weight;
  for (int a : loop.arrows) out.arrows.push_back(arrow_map[a]);
  return out;
}

struct BudgetExhausted {};

}  // namespace

MarkovGraph build_markov_graph(const MarkovMap& map) {
  MarkovGraph g;
  const auto& lg = map.graph();
  g.digraph.node_count = lg.edge_count();
  for (int e = 0; e < lg.edge_count(); ++e) {
    g.node_names.push_back(lg.edges()[e].id);
    const auto& chain = map.chains()[e];
    for (std::size_t k = 0; k < chain.size(); ++k) {
      g.digraph.arrows.push_back({e, chain[k].edge, chain[k].shift});
      g.arrow_entry.push_back({e, static_cast<int>(k)});
    }
  }
  return g;
}

std::string markov_graph_dot(const MarkovGraph& graph) {
  std::ostringstream os;
  os << "digraph markov {\n";
  for (const auto& name : graph.node_names) os << "  " << dot_name(name) << ";\n";
  for (const auto& a : graph.digraph.arrows) {
    os << "  " << dot_name(graph.node_names[a.from]) << " -> " << dot_name(graph.node_names[a.to])
       << " [label=" << a.label << "];\n";
  }
  os << "}\n";
  return os.str();
}

TransitivityReport check_transitive(const MarkovGraph& graph) {
  TransitivityReport rep;
  rep.components = strongly_connected_components(graph.digraph);
  rep.strongly_connected = rep.components.size() == 1;
  if (rep.strongly_connected) {
    std::vector<int> out_degree(graph.digraph.node_count, 0);
    for (const auto& a : graph.digraph.arrows) ++out_degree[a.from];
    rep.single_cycle = std::all_of(out_degree.begin(), out_degree.end(), [](int d) { return d == 1; });
  }
  rep.transitive = rep.strongly_connected && !rep.single_cycle;
  return rep;
}

TransitivityReport check_transitive(const MarkovMap& map) { return check_transitive(build_markov_graph(map)); }

RotationInterval rotation_set(const MarkovGraph& graph) {
  RotationInterval out;
  TransitivityReport tr = check_transitive(graph);
  out.transitive = tr.transitive;
  bool first = true;
  for (const auto& comp : tr.components) {
    std::vector<int> arrow_map;
    LabeledDigraph sub = induced_subgraph(graph.digraph, comp, &arrow_map);
    auto lo = min_cycle_mean(sub);
    if (!lo) continue;
    auto hi = max_cycle_mean(sub);
    ComponentRotation cr{comp, lo->value, hi->value, remap(lo->witness, arrow_map), remap(hi->witness, arrow_map)};
    if (first || cr.min < out.min) {
      out.min = cr.min;
      out.min_witness = cr.min_witness;
    }
    if (first || cr.max > out.max) {
      out.max = cr.max;
      out.max_witness = cr.max_witness;
    }
    first = false;
    out.components.push_back(std::move(cr));
  }
  if (first) throw Error(ErrorKind::NoLoop, "Markov graph is acyclic; no periodic behavior");
  out.hull = out.components.size() > 1;
  if (out.hull) {
    out.caveat = "hull over strongly connected components; the map is not transitive, so the interval need not be the rotation set";
  } else if (!out.transitive) {
    out.caveat = "map is not transitive";
  }
  return out;
}

RotationInterval rotation_set(const MarkovMap& map) { return rotation_set(build_markov_graph(map)); }

RotationInterval rotation_set_of_power(const MarkovMap& map, int n) {
  if (n < 1) throw Error(ErrorKind::PreconditionViolated, "power must be positive");
  MarkovGraph g = build_markov_graph(map);
  const auto& lg = map.graph();
  std::vector<int> spine = lg.spine_order();
  std::sort(spine.begin(), spine.end());
  std::vector<int> local(lg.edge_count(), -1);
  for (std::size_t i = 0; i < spine.size(); ++i) local[spine[i]] = static_cast<int>(i);
  LabeledDigraph power;
  power.node_count = static_cast<int>(spine.size());
  const int V = g.digraph.node_count;
  using Range = std::optional<std::pair<long, long>>;
  for (int s : spine) {
    std::vector<Range> cur(V);
    cur[s] = std::make_pair(0L, 0L);
    for (int step = 0; step < n; ++step) {
      std::vector<Range> next(V);
      for (const auto& a : g.digraph.arrows) {
        if (!cur[a.from]) continue;
        long lo = cur[a.from]->first + a.label, hi = cur[a.from]->second + a.label;
        auto& slot = next[a.to];
        if (!slot) slot = std::make_pair(lo, hi);
        else slot = std::make_pair(std::min(slot->first, lo), std::max(slot->second, hi));
      }
      cur = std::move(next);
    }
    for (int v : spine) {
      if (!cur[v]) continue;
      power.arrows.push_back({local[s], local[v], cur[v]->first});
      if (cur[v]->second != cur[v]->first) power.arrows.push_back({local[s], local[v], cur[v]->second});
    }
  }
  auto lo = min_cycle_mean(power);
  if (!lo) throw Error(ErrorKind::NoLoop, "no spine loop for this power");
  auto hi = max_cycle_mean(power);
  RotationInterval out;
  out.min = lo->value / n;
  out.max = hi->value / n;
  out.min_witness = lo->witness;
  out.max_witness = hi->witness;
  out.transitive = check_transitive(g).transitive;
  return out;
}

std::vector<Loop> enumerate_elementary_loops(const MarkovGraph& graph, int max_nodes) {
  return elementary_loops(graph.digraph, max_nodes);
}

std::optional<std::pair<int, long>> minimal_period(const MarkovMap& map, const Point& x, int limit) {
  const auto& lg = map.graph();
  Point start = lg.canonical(x);
  Point cur = start;
  for (int d = 1; d <= limit; ++d) {
    cur = map.evaluate(cur);
    if (cur.edge == start.edge && cur.t == start.t) return std::make_pair(d, cur.shift - start.shift);
  }
  return std::nullopt;
}

bool verify_witness(const MarkovMap& map, const PeriodWitness& w) {
  const auto& lg = map.graph();
  Point img = map.power(w.point, w.period);
  if (!lg.same_point(img, lg.translate(w.point, w.shift))) return false;
  auto mp = minimal_period(map, w.point, w.period);
  return mp && mp->first == w.period && mp->second == w.shift;
}

std::optional<PeriodWitness> loop_witness(const MarkovMap& map, const MarkovGraph& graph, const Loop& loop) {
  const int L = loop.length();
  if (L == 0) return std::nullopt;
  std::vector<const AffineBranch*> br;
  for (int a : loop.arrows) {
    auto [e, k] = graph.arrow_entry[a];
    br.push_back(&map.branch(e, k));
  }
  for (int i = 0; i < L; ++i) {
    if (br[i]->target != br[(i + 1) % L]->source) return std::nullopt;
  }
  // Pull [0,1] back along the loop.
  Rational lo = 0, hi = 1;
  for (int i = L - 1; i >= 0; --i) {
    const auto& b = *br[i];
    Rational u = (lo - b.beta) / b.alpha, v = (hi - b.beta) / b.alpha;
    lo = max_of(min_of(u, v), b.t0);
    hi = min_of(max_of(u, v), b.t1);
    if (lo > hi) return std::nullopt;
  }
  Rational A = 1, B = 0;
  for (const auto* b : br) {
    A = b->alpha * A;
    B = b->alpha * B + b->beta;
  }
  Rational t;
  if (A != 1) {
    t = B / (1 - A);
  } else if (B == 0) {
    t = (lo + hi) / 2;
  } else {
    return std::nullopt;
  }
  if (t < lo || t > hi) return std::nullopt;
  const auto& lg = map.graph();
  PeriodWitness w;
  w.loop = loop;
  w.point = lg.canonical(Point{br[0]->source, t, 0});
  auto mp = minimal_period(map, w.point, L);
  if (!mp) return std::nullopt;
  w.period = mp->first;
  w.shift = mp->second;
  Point cur = w.point;
  for (int i = 0; i < w.period; ++i) {
    if (lg.node_of(cur)) w.boundary = true;
    cur = map.evaluate(cur);
  }
  w.twist = is_twist_orbit(map, w.point, w.period);
  return w;
}

bool is_twist_orbit(const MarkovMap& map, const Point& x, int period) {
  if (period < 1) throw Error(ErrorKind::PreconditionViolated, "period must be positive");
  const auto& lg = map.graph();
  // (y, F(y)) for the orbit points moved into [0, 1).
  std::vector<std::pair<Rational, Rational>> pairs;
  Point cur = lg.canonical(x);
  for (int i = 0; i < period; ++i) {
    if (lg.component_of(cur) != -1) return false;
    Point next = map.evaluate(cur);
    Rational r = lg.retract(cur);
    Rational k(floor_of(r));
    pairs.push_back({r - k, lg.retract(next) - k});
    cur = next;
  }
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
    if (!(pairs[i].first < pairs[i + 1].first) || !(pairs[i].second < pairs[i + 1].second)) return false;
  }
  return pairs.back().second < pairs.front().second + 1;
}

PeriodResult periods_for_rotation(const MarkovMap& map, long p, long q, int n_max,
                                  const PeriodSearchOptions& options) {
  if (q <= 0) throw Error(ErrorKind::PreconditionViolated, "q must be positive");
  if (std::gcd(p < 0 ? -p : p, q) != 1) {
    throw Error(ErrorKind::NotCoprime, std::to_string(p) + "/" + std::to_string(q) + " is not coprime");
  }
  if (n_max < q) throw Error(ErrorKind::PreconditionViolated, "n_max must be at least q");
  PeriodResult res;
  res.p = p;
  res.q = q;
  res.n_max = n_max;
  const auto& lg = map.graph();
  MarkovGraph g = build_markov_graph(map);
  const auto& arrows = g.digraph.arrows;
  const int V = g.digraph.node_count;

  // Periodic partition endpoints, computed directly.
  std::map<int, PeriodWitness> node_witness;
  for (int v = 0; v < lg.node_count(); ++v) {
    if (v == lg.one_node()) continue;
    LiftedNode start{v, 0};
    LiftedNode cur = start;
    for (int k = 1; k <= lg.node_count(); ++k) {
      cur = map.node_image(cur);
      if (cur.node == v) {
        long s = cur.shift;
        if (s * q == p * k && k <= n_max && !node_witness.count(k)) {
          PeriodWitness w;
          w.point = lg.point_at(start);
          w.period = k;
          w.shift = s;
          w.boundary = true;
          w.node_orbit = true;
          w.twist = is_twist_orbit(map, w.point, k);
          node_witness[k] = w;
        }
        break;
      }
    }
  }

  long max_abs = 0;
  for (const auto& a : arrows) max_abs = std::max(max_abs, a.label < 0 ? -a.label : a.label);
  const long offset = static_cast<long>(n_max) * max_abs;
  const std::size_t width = static_cast<std::size_t>(2 * offset + 1);

  std::vector<std::vector<int>> out_arrows(V);
  for (std::size_t i = 0; i < arrows.size(); ++i) out_arrows[arrows[i].from].push_back(static_cast<int>(i));

  // reach[s][len][v][w + offset]: a walk v -> s of length len and weight w through nodes >= s.
  std::vector<std::vector<std::vector<std::vector<char>>>> reach(V);
  auto reach_for = [&](int s) -> const std::vector<std::vector<std::vector<char>>>& {
    auto& R = reach[s];
    if (!R.empty()) return R;
    R.assign(n_max + 1, std::vector<std::vector<char>>(V, std::vector<char>(width, 0)));
    R[0][s][offset] = 1;
    for (int len = 1; len <= n_max; ++len) {
      for (int v = s; v < V; ++v) {
        auto& row = R[len][v];
        for (int ai : out_arrows[v]) {
          const auto& a = arrows[ai];
          if (a.to < s) continue;
          const auto& prev = R[len - 1][a.to];
          for (std::size_t w = 0; w < width; ++w) {
            if (!prev[w]) continue;
            long nw = static_cast<long>(w) + a.label;
            if (nw >= 0 && nw < static_cast<long>(width)) row[nw] = 1;
          }
        }
      }
    }
    return R;
  };

  auto canonical_primitive = [](const std::vector<int>& seq) {
    const std::size_t L = seq.size();
    for (std::size_t r = 1; r < L; ++r) {
      for (std::size_t i = 0; i < L; ++i) {
        int a = seq[(i + r) % L], b = seq[i];
        if (a < b) return false;
        if (a > b) break;
        if (i + 1 == L) return false;  // equal rotation: not primitive
      }
    }
    return true;
  };

  try {
    for (int L = static_cast<int>(q); L <= n_max; L += static_cast<int>(q)) {
      const long n = L / q;
      const long W = n * p;
      if (auto it = node_witness.find(L); it != node_witness.end()) {
        res.periods.insert(L);
        res.witnesses[L] = it->second;
        continue;
      }
      if (W + offset < 0 || W + offset >= static_cast<long>(width)) continue;
      std::optional<PeriodWitness> found;
      std::vector<int> path;
      for (int s = 0; s < V && !found; ++s) {
        const auto& R = reach_for(s);
        if (!R[L][s][W + offset]) continue;
        std::function<void(int, long)> dfs = [&](int v, long w) {
          if (found) return;
          if (++res.expansions > options.budget) throw BudgetExhausted{};
          const int remaining = L - static_cast<int>(path.size());
          if (remaining == 0) {
            if (v != s || w != W || !canonical_primitive(path)) return;
            Loop loop;
            loop.arrows = path;
            loop.weight = w;
            auto wit = loop_witness(map, g, loop);
            if (wit && wit->period == L && wit->shift == W) found = wit;
            return;
          }
          for (int ai : out_arrows[v]) {
            const auto& a = arrows[ai];
            if (a.to < s) continue;
            long need = W - (w + a.label) + offset;
            if (need < 0 || need >= static_cast<long>(width) || !R[remaining - 1][a.to][need]) continue;
            path.push_back(ai);
            dfs(a.to, w + a.label);
            path.pop_back();
            if (found) return;
          }
        };
        dfs(s, 0);
      }
      if (found) {
        res.periods.insert(L);
        res.witnesses[L] = *found;
      }
    }
  } catch (const BudgetExhausted&) {
    res.complete = false;
  }
  return res;
}

Itinerary itinerary(const MarkovMap& map, const MarkovGraph& graph, const Point& x, int n) {
  const auto& lg = map.graph();
  Itinerary out;
  Point cur = lg.canonical(x);
  out.start_shift = cur.shift;
  std::map<std::pair<int, int>, int> arrow_id;
  for (std::size_t i = 0; i < graph.arrow_entry.size(); ++i) arrow_id[graph.arrow_entry[i]] = static_cast<int>(i);
  for (int step = 0; step < n; ++step) {
    const auto& chain = map.chains()[cur.edge];
    bool moved = false;
    for (std::size_t k = 0; k < chain.size(); ++k) {
      const auto& b = map.branch(cur.edge, static_cast<int>(k));
      if (cur.t < b.t0 || cur.t > b.t1) continue;
      out.arrows.push_back(arrow_id[{cur.edge, static_cast<int>(k)}]);
      out.weight += b.shift;
      cur = Point{b.target, b.alpha * cur.t + b.beta, cur.shift + b.shift};
      moved = true;
      break;
    }
    if (!moved) throw Error(ErrorKind::InvalidInput, "point parameter outside [0,1]");
  }
  out.estimate = n > 0 ? ratio(out.weight, n) : Rational(0);
  return out;
}

}  // namespace rotkit
