#pragma once

// Shared helpers and independent oracles for the C++ test suites.

#include "rotkit/circle_lift.hpp"
#include "rotkit/covering_arith.hpp"
#include "rotkit/digraph.hpp"
#include "rotkit/markov_graph.hpp"
#include "rotkit/model_io.hpp"
#include "rotkit/orbit_engine.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace support {

using rotkit::Integer;
using rotkit::PLLift;
using rotkit::Rational;

inline Rational R(const std::string& s) { return rotkit::parse_rational(s); }

inline std::string fixture_path(const std::string& name) { return std::string(ROTKIT_FIXTURE_DIR) + "/" + name + ".json"; }

inline rotkit::Model load(const std::string& name) { return rotkit::load_model(fixture_path(name)); }

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"example-6-1", "example-6-2", "ex-1-8", "fig-4-combed", "non-combed",
                                              "circle-identity"};
  return names;
}

inline std::set<int> multiples(int q, int from_n, int n_max) {
  std::set<int> out;
  for (int n = from_n; n * q <= n_max; ++n) out.insert(n * q);
  return out;
}

// Uniform rational in [lo, hi) with the given denominator.
inline Rational random_rational(std::mt19937_64& rng, const Rational& lo, const Rational& hi, long den) {
  Rational span = (hi - lo) * den;
  long steps = std::max(1L, rotkit::to_ll(rotkit::floor_of(span)));
  std::uniform_int_distribution<long> pick(0, steps - 1);
  Rational out = lo + rotkit::ratio(pick(rng), den);
  out.canonicalize();
  return out;
}

// ---- envelope oracle: extremes over a closed window by direct enumeration ----

inline std::vector<Rational> window_points(const PLLift& lift, const Rational& lo, const Rational& hi) {
  std::vector<Rational> pts{lo, hi};
  for (const auto& x : lift.knot_positions(lo, hi)) pts.push_back(x);
  return pts;
}

inline Rational brute_upper(const PLLift& lift, const rotkit::BranchData& branches, const Rational& x) {
  Rational best = lift(x);
  for (const auto& p : window_points(lift, x - 1, x)) {
    best = rotkit::max_of(best, lift.left_limit(p));
    best = rotkit::max_of(best, lift(p));
    best = rotkit::max_of(best, lift.right_limit(p));
  }
  for (const auto& [z, parts] : branches) {
    for (long k = rotkit::to_ll(rotkit::floor_of(x)) - 2; k <= rotkit::to_ll(rotkit::floor_of(x)) + 1; ++k) {
      Rational at = z + k;
      if (x - 1 <= at && at <= x) best = rotkit::max_of(best, parts.back().hi + k);
    }
  }
  return best;
}

inline Rational brute_lower(const PLLift& lift, const rotkit::BranchData& branches, const Rational& x) {
  Rational best = lift(x);
  for (const auto& p : window_points(lift, x, x + 1)) {
    best = rotkit::min_of(best, lift.left_limit(p));
    best = rotkit::min_of(best, lift(p));
    best = rotkit::min_of(best, lift.right_limit(p));
  }
  for (const auto& [z, parts] : branches) {
    for (long k = rotkit::to_ll(rotkit::floor_of(x)) - 1; k <= rotkit::to_ll(rotkit::floor_of(x)) + 2; ++k) {
      Rational at = z + k;
      if (x <= at && at <= x + 1) best = rotkit::min_of(best, parts.front().lo + k);
    }
  }
  return best;
}

// a <= b everywhere, one-sided limits included; exact because both are linear between merged knots.
inline bool le_everywhere(const PLLift& a, const PLLift& b) {
  std::set<Rational> xs;
  for (const auto& k : a.knots()) xs.insert(k.x);
  for (const auto& k : b.knots()) xs.insert(k.x);
  for (const auto& x : xs) {
    if (a.left_limit(x) > b.left_limit(x) || a(x) > b(x) || a.right_limit(x) > b.right_limit(x)) return false;
  }
  return true;
}

// ---- loop-count oracle: closed walks by dynamic programming, primitive loops by Moebius inversion ----

inline int moebius(int n) {
  int result = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      result = -result;
    }
  }
  if (n > 1) result = -result;
  return result;
}

class LoopCounter {
 public:
  LoopCounter(const rotkit::LabeledDigraph& g, int max_length) : max_length_(max_length) {
    long max_abs = 0;
    for (const auto& a : g.arrows) max_abs = std::max(max_abs, a.label < 0 ? -a.label : a.label);
    offset_ = max_abs * max_length;
    const std::size_t width = static_cast<std::size_t>(2 * offset_ + 1);
    closed_.assign(max_length + 1, std::vector<Integer>(width, 0));
    for (int s = 0; s < g.node_count; ++s) {
      std::vector<std::vector<Integer>> cur(g.node_count, std::vector<Integer>(width, 0));
      cur[s][offset_] = 1;
      for (int len = 1; len <= max_length; ++len) {
        std::vector<std::vector<Integer>> next(g.node_count, std::vector<Integer>(width, 0));
        for (const auto& a : g.arrows) {
          for (std::size_t w = 0; w < width; ++w) {
            if (cur[a.from][w] == 0) continue;
            long nw = static_cast<long>(w) + a.label;
            if (nw >= 0 && nw < static_cast<long>(width)) next[a.to][nw] += cur[a.from][w];
          }
        }
        cur = std::move(next);
        for (std::size_t w = 0; w < width; ++w) closed_[len][w] += cur[s][w];
      }
    }
  }

  Integer closed_walks(int length, long weight) const {
    long idx = weight + offset_;
    if (length < 1 || length > max_length_ || idx < 0 || idx >= static_cast<long>(closed_[0].size())) return 0;
    return closed_[length][idx];
  }

  // Loops that are not powers of shorter loops, counted up to rotation.
  Integer primitive_loops(int length, long weight) const {
    Integer total = 0;
    for (int d = 1; d <= length; ++d) {
      if (length % d || weight % d) continue;
      int mu = moebius(d);
      if (mu) total += mu * closed_walks(length / d, weight / d);
    }
    return total / length;
  }

 private:
  int max_length_;
  long offset_;
  std::vector<std::vector<Integer>> closed_;
};

// ---- random data ----

inline rotkit::LabeledDigraph random_digraph(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nodes(1, 8), label(-3, 3);
  rotkit::LabeledDigraph g;
  g.node_count = nodes(rng);
  std::uniform_int_distribution<int> pick(0, g.node_count - 1);
  std::uniform_int_distribution<int> count(1, 2 * g.node_count + 2);
  int arrows = count(rng);
  for (int i = 0; i < arrows; ++i) g.arrows.push_back({pick(rng), pick(rng), label(rng)});
  return g;
}

// Nondecreasing degree-one lift with plateaus; jumps when `with_jumps`.
inline PLLift random_monotone_lift(std::mt19937_64& rng, bool with_jumps) {
  std::uniform_int_distribution<int> knot_count(1, 5), pos(1, 23), coin(0, 2);
  std::set<int> xs;
  int k = knot_count(rng);
  while (static_cast<int>(xs.size()) < k) xs.insert(pos(rng));
  std::vector<Rational> positions{0};
  for (int x : xs) positions.push_back(rotkit::ratio(x, 24));
  positions.push_back(1);
  // Split the unit rise into nonnegative pieces: rises on pieces and jumps at knots.
  const int slots = static_cast<int>(positions.size()) * 2;
  std::vector<int> weight(slots, 0);
  std::uniform_int_distribution<int> w(0, 4);
  int total = 0;
  for (int i = 0; i < slots; ++i) {
    bool jump_slot = i % 2 == 1;
    if (jump_slot && !with_jumps) continue;
    if (coin(rng) == 0) continue;  // plateau or no jump
    weight[i] = w(rng);
    total += weight[i];
  }
  if (total == 0) {
    weight[0] = 1;
    total = 1;
  }
  std::uniform_int_distribution<int> base(0, 11);
  Rational y = rotkit::ratio(base(rng), 12);
  std::vector<rotkit::Knot> knots;
  for (std::size_t i = 0; i + 1 < positions.size(); ++i) {
    Rational left = y;
    Rational jump = rotkit::ratio(weight[2 * i + 1], total);
    // value sits inside the jump
    Rational value = left + jump / 2;
    Rational right = left + jump;
    if (i == 0) {
      left = y;
      value = y;
      right = y;
    }
    knots.push_back({positions[i], left, value, right});
    y = right + rotkit::ratio(weight[2 * i], total);
  }
  // Close up with degree one; the jump at 0 is carried by the knot at 1 and 0.
  rotkit::Knot first = knots.front();
  Rational end_left = y;
  Rational need = first.value + 1;
  if (end_left > need) end_left = need;
  knots.front().left = end_left - 1;
  rotkit::Knot last{1, end_left, need, need};
  knots.push_back(last);
  for (auto& kn : knots) {
    kn.left.canonicalize();
    kn.value.canonicalize();
    kn.right.canonicalize();
  }
  return PLLift::from_knots(knots);
}

// Rotation number from an exactly repeating orbit x_j = x_i + m, if seen within `steps`.
inline std::optional<Rational> orbit_rotation(const PLLift& map, int steps) {
  std::map<Rational, std::pair<int, Integer>> seen;
  Rational x = 0;
  for (int k = 0; k <= steps; ++k) {
    Integer fl = rotkit::floor_of(x);
    Rational frac = x - Rational(fl);
    auto [it, fresh] = seen.try_emplace(frac, k, fl);
    if (!fresh) {
      Rational rho(Rational(fl - it->second.second) / (k - it->second.first));
      rho.canonicalize();
      return rho;
    }
    x = map(x);
  }
  return std::nullopt;
}

// Direct checker for conditions (a)(b)(c), written independently of the library's.
inline bool valid_decomposition(long N, long m, const std::vector<long>& parts) {
  if (parts.empty()) return false;
  long sum = 0;
  std::vector<long> prefixes;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] < N) return false;
    sum += parts[i];
    if (i + 1 < parts.size()) prefixes.push_back(sum);
  }
  if (sum != m) return false;
  for (long d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    bool ok = false;
    for (long s : prefixes) ok = ok || s % d == 0;
    if (!ok) return false;
  }
  return true;
}

// Basic spine intervals [c_i, c_{i+1}] of a model.
inline std::vector<rotkit::Interval> spine_intervals(const rotkit::MarkovMap& map) {
  const auto& g = map.graph();
  std::vector<rotkit::Interval> out;
  for (int e : g.spine_order()) {
    out.push_back({*g.nodes()[g.tail(e)].spine_coord, *g.nodes()[g.head(e)].spine_coord});
  }
  return out;
}

// Sup distance between two PL lifts, attained at a knot or a one-sided limit there.
inline Rational sup_gap(const PLLift& a, const PLLift& b) {
  Rational best = 0;
  std::set<Rational> xs;
  for (const auto& k : a.knots()) xs.insert(k.x);
  for (const auto& k : b.knots()) xs.insert(k.x);
  for (const auto& x : xs) {
    best = rotkit::max_of(best, rotkit::abs_of(a.left_limit(x) - b.left_limit(x)));
    best = rotkit::max_of(best, rotkit::abs_of(a(x) - b(x)));
    best = rotkit::max_of(best, rotkit::abs_of(a.right_limit(x) - b.right_limit(x)));
  }
  return best;
}

// ---- covering chains ----

struct CoverEdge {
  std::size_t from, to;
  int power;
  long shift;
};

// Positive coverings between basic spine intervals by r o F^n - p, n in {1, 2}, |p| <= 2.
inline std::vector<CoverEdge> cover_edges(const rotkit::MarkovMap& map, const std::vector<rotkit::Interval>& intervals) {
  std::vector<CoverEdge> out;
  for (int n = 1; n <= 2; ++n) {
    PLLift lift = map.power_restriction(n);
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      for (std::size_t j = 0; j < intervals.size(); ++j) {
        for (long p = -2; p <= 2; ++p) {
          if (rotkit::positively_covers(lift.plus(Rational(-p)), intervals[i], intervals[j]).covers) out.push_back({i, j, n, p});
        }
      }
    }
  }
  return out;
}

// Random closed walk in the covering graph, at most `max_len` steps.
inline std::optional<std::vector<rotkit::ChainStep>> random_chain(std::mt19937_64& rng,
                                                                  const std::vector<rotkit::Interval>& intervals,
                                                                  const std::vector<CoverEdge>& edges, int max_len) {
  if (edges.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick_start(0, edges.size() - 1);
  const CoverEdge& first = edges[pick_start(rng)];
  std::vector<rotkit::ChainStep> chain{{intervals[first.from], first.power, first.shift}};
  std::size_t at = first.to;
  for (int len = 1; len <= max_len; ++len) {
    if (at == first.from) return chain;
    std::vector<const CoverEdge*> next;
    for (const auto& e : edges) {
      if (e.from == at) next.push_back(&e);
    }
    if (next.empty()) return std::nullopt;
    const CoverEdge* e = next[std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng)];
    chain.push_back({intervals[e->from], e->power, e->shift});
    at = e->to;
  }
  return std::nullopt;
}

// F^{m_i}(x) lies over I_i + p_i at every step and F^{m_k}(x) = x + p_k, by plain iteration.
inline bool orbit_follows(const rotkit::MarkovMap& map, const std::vector<rotkit::ChainStep>& chain,
                          const rotkit::ChainWitness& w) {
  const auto& g = map.graph();
  rotkit::Point start = g.spine_point(w.x), cur = start;
  long shift = 0, power = 0;
  for (const auto& step : chain) {
    Rational r = g.retract(cur) - shift;
    if (g.component_of(cur) != -1 || r < step.interval.lo || r > step.interval.hi) return false;
    cur = map.power(cur, step.power);
    shift += step.shift;
    power += step.power;
  }
  return power == w.total_power && shift == w.total_shift && g.same_point(cur, g.translate(start, shift));
}

// ---- period witnesses ----

// Independent re-check of a witness by plain iteration.
inline bool recheck(const rotkit::MarkovMap& map, const rotkit::PeriodWitness& w) {
  const auto& g = map.graph();
  auto orbit = map.iterate(w.point, w.period);
  if (!g.same_point(orbit.back(), g.translate(w.point, w.shift))) return false;
  for (int d = 1; d < w.period; ++d) {
    Rational drift = g.retract(orbit[d]) - g.retract(w.point);
    if (drift.get_den() == 1 && g.same_point(orbit[d], g.translate(w.point, rotkit::to_ll(drift.get_num())))) return false;
  }
  return true;
}

inline std::pair<Rational, Rational> brute_means(const std::vector<rotkit::Loop>& loops) {
  Rational lo = loops.front().mean(), hi = lo;
  for (const auto& l : loops) {
    lo = rotkit::min_of(lo, l.mean());
    hi = rotkit::max_of(hi, l.mean());
  }
  return {lo, hi};
}

}  // namespace support
