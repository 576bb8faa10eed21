#include "rotkit/digraph.hpp"

#include "rotkit/errors.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace rotkit {

std::vector<std::vector<int>> strongly_connected_components(const LabeledDigraph& g) {
  const int n = g.node_count;
  std::vector<std::vector<int>> out(n);
  for (const auto& a : g.arrows) out[a.from].push_back(a.to);
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<char> on_stack(n, 0);
  std::vector<std::vector<int>> comps;
  int counter = 0;
  // Iterative Tarjan.
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<std::pair<int, std::size_t>> work{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!work.empty()) {
      auto& [v, pos] = work.back();
      if (pos < out[v].size()) {
        int w = out[v][pos++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          work.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        int done = v;
        work.pop_back();
        if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
        if (low[done] == index[done]) {
          std::vector<int> comp;
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp.push_back(w);
            if (w == done) break;
          }
          std::sort(comp.begin(), comp.end());
          comps.push_back(std::move(comp));
        }
      }
    }
  }
  std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return comps;
}

LabeledDigraph induced_subgraph(const LabeledDigraph& g, const std::vector<int>& nodes, std::vector<int>* arrow_map) {
  std::map<int, int> local;
  for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = static_cast<int>(i);
  LabeledDigraph sub;
  sub.node_count = static_cast<int>(nodes.size());
  if (arrow_map) arrow_map->clear();
  for (std::size_t i = 0; i < g.arrows.size(); ++i) {
    const auto& a = g.arrows[i];
    auto f = local.find(a.from), t = local.find(a.to);
    if (f == local.end() || t == local.end()) continue;
    sub.arrows.push_back({f->second, t->second, a.label});
    if (arrow_map) arrow_map->push_back(static_cast<int>(i));
  }
  return sub;
}

namespace {

constexpr long kUnreached = std::numeric_limits<long>::max();

// Cycle of arrows all satisfying pot[from] + w'(a) == pot[to], found by DFS.
Loop tight_cycle(const LabeledDigraph& g, const std::vector<long>& scaled) {
  const int n = g.node_count;
  std::vector<long> pot(n, 0);
  for (int round = 0; round <= n; ++round) {
    bool changed = false;
    for (std::size_t i = 0; i < g.arrows.size(); ++i) {
      const auto& a = g.arrows[i];
      if (pot[a.from] + scaled[i] < pot[a.to]) {
        pot[a.to] = pot[a.from] + scaled[i];
        changed = true;
      }
    }
    if (!changed) break;
  }
  std::vector<std::vector<int>> tight(n);
  for (std::size_t i = 0; i < g.arrows.size(); ++i) {
    const auto& a = g.arrows[i];
    if (pot[a.from] + scaled[i] == pot[a.to]) tight[a.from].push_back(static_cast<int>(i));
  }
  std::vector<int> color(n, 0), via(n, -1);
  for (int root = 0; root < n; ++root) {
    if (color[root]) continue;
    std::vector<std::pair<int, std::size_t>> work{{root, 0}};
    color[root] = 1;
    while (!work.empty()) {
      auto& [v, pos] = work.back();
      if (pos < tight[v].size()) {
        int ai = tight[v][pos++];
        int w = g.arrows[ai].to;
        if (color[w] == 0) {
          color[w] = 1;
          via[w] = ai;
          work.push_back({w, 0});
        } else if (color[w] == 1) {
          Loop loop;
          std::vector<int> rev{ai};
          for (int x = v; x != w; x = g.arrows[via[x]].from) rev.push_back(via[x]);
          loop.arrows.assign(rev.rbegin(), rev.rend());
          for (int id : loop.arrows) loop.weight += g.arrows[id].label;
          return loop;
        }
      } else {
        color[v] = 2;
        work.pop_back();
      }
    }
  }
  throw Error(ErrorKind::NoLoop, "no tight cycle found");
}

std::optional<CycleMean> karp_min(const LabeledDigraph& g) {
  const int n = g.node_count;
  if (n == 0) return std::nullopt;
  std::vector<std::vector<long>> d(n + 1, std::vector<long>(n, kUnreached));
  for (int v = 0; v < n; ++v) d[0][v] = 0;
  for (int k = 1; k <= n; ++k) {
    for (const auto& a : g.arrows) {
      if (d[k - 1][a.from] == kUnreached) continue;
      long cand = d[k - 1][a.from] + a.label;
      if (cand < d[k][a.to]) d[k][a.to] = cand;
    }
  }
  std::optional<Rational> best;
  for (int v = 0; v < n; ++v) {
    if (d[n][v] == kUnreached) continue;
    std::optional<Rational> worst;
    for (int k = 0; k < n; ++k) {
      if (d[k][v] == kUnreached) continue;
      Rational val = ratio(d[n][v] - d[k][v], n - k);
      if (!worst || val > *worst) worst = val;
    }
    if (worst && (!best || *worst < *best)) best = worst;
  }
  if (!best) return std::nullopt;
  best->canonicalize();
  const long p = to_ll(best->get_num());
  const long q = to_ll(best->get_den());
  std::vector<long> scaled;
  for (const auto& a : g.arrows) scaled.push_back(q * a.label - p);
  return CycleMean{*best, tight_cycle(g, scaled)};
}

}  // namespace

std::optional<CycleMean> min_cycle_mean(const LabeledDigraph& g) { return karp_min(g); }

std::optional<CycleMean> max_cycle_mean(const LabeledDigraph& g) {
  LabeledDigraph neg = g;
  for (auto& a : neg.arrows) a.label = -a.label;
  auto r = karp_min(neg);
  if (!r) return std::nullopt;
  r->value = -r->value;
  r->witness.weight = -r->witness.weight;
  return r;
}

std::vector<Loop> elementary_loops(const LabeledDigraph& g, int max_nodes, std::size_t max_loops) {
  const int n = g.node_count;
  if (n > max_nodes) {
    throw Error(ErrorKind::TooLarge, "graph has " + std::to_string(n) + " nodes; loop enumeration bound is " + std::to_string(max_nodes));
  }
  // Parallel arrows grouped per (from, to).
  std::map<std::pair<int, int>, std::vector<int>> parallel;
  for (std::size_t i = 0; i < g.arrows.size(); ++i) parallel[{g.arrows[i].from, g.arrows[i].to}].push_back(static_cast<int>(i));
  std::vector<Loop> result;

  auto emit = [&](const std::vector<int>& cycle) {
    std::vector<const std::vector<int>*> hops;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      hops.push_back(&parallel[{cycle[i], cycle[(i + 1) % cycle.size()]}]);
    }
    std::vector<std::size_t> choice(hops.size(), 0);
    while (true) {
      Loop loop;
      for (std::size_t i = 0; i < hops.size(); ++i) {
        int ai = (*hops[i])[choice[i]];
        loop.arrows.push_back(ai);
        loop.weight += g.arrows[ai].label;
      }
      result.push_back(std::move(loop));
      if (result.size() > max_loops) throw Error(ErrorKind::TooLarge, "more than " + std::to_string(max_loops) + " elementary loops");
      std::size_t i = 0;
      while (i < hops.size() && ++choice[i] == hops[i]->size()) choice[i++] = 0;
      if (i == hops.size()) break;
    }
  };

  for (int s = 0; s < n; ++s) {
    std::vector<int> allowed;
    for (int v = s; v < n; ++v) allowed.push_back(v);
    LabeledDigraph sub = induced_subgraph(g, allowed);
    auto comps = strongly_connected_components(sub);
    std::set<int> comp_of_s;
    for (const auto& c : comps) {
      if (c.front() == 0) {
        for (int v : c) comp_of_s.insert(v + s);
      }
    }
    std::vector<std::vector<int>> adj(n);
    std::set<std::pair<int, int>> seen;
    for (const auto& a : g.arrows) {
      if (comp_of_s.count(a.from) && comp_of_s.count(a.to) && seen.insert({a.from, a.to}).second) adj[a.from].push_back(a.to);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    std::vector<char> blocked(n, 0);
    std::vector<std::set<int>> blocked_by(n);
    std::vector<int> path;
    std::function<void(int)> unblock = [&](int u) {
      blocked[u] = 0;
      auto pending = std::move(blocked_by[u]);
      blocked_by[u].clear();
      for (int w : pending) {
        if (blocked[w]) unblock(w);
      }
    };
    std::function<bool(int)> circuit = [&](int v) {
      bool found = false;
      path.push_back(v);
      blocked[v] = 1;
      for (int w : adj[v]) {
        if (w == s) {
          emit(path);
          found = true;
        } else if (!blocked[w]) {
          if (circuit(w)) found = true;
        }
      }
      if (found) {
        unblock(v);
      } else {
        for (int w : adj[v]) blocked_by[w].insert(v);
      }
      path.pop_back();
      return found;
    };
    if (comp_of_s.count(s)) circuit(s);
  }
  return result;
}

}  // namespace rotkit
