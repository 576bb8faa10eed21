#include "rotkit/covering_arith.hpp"

#include "rotkit/markov_graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace rotkit {

namespace {

bool crosses(const Rational& y0, const Rational& y1, const Rational& level) {
  return (y0 <= level && level <= y1) || (y1 <= level && level <= y0);
}

Rational crossing(const Segment& s, const Rational& level) {
  return s.x0 + (level - s.y0) * (s.x1 - s.x0) / (s.y1 - s.y0);
}

std::vector<Segment> pieces(const PLLift& map, const Rational& lo, const Rational& hi) {
  if (lo < hi) return map.segments(lo, hi);
  Rational v = map(lo);
  return {Segment{lo, v, hi, v}};
}

}  // namespace

std::optional<Rational> first_level_point(const PLLift& map, const Rational& lo, const Rational& hi,
                                          const Rational& level) {
  for (const auto& s : pieces(map, lo, hi)) {
    if (s.y0 == level) return s.x0;
    if (s.y0 != s.y1 && crosses(s.y0, s.y1, level)) return crossing(s, level);
  }
  return std::nullopt;
}

std::optional<Rational> last_level_point(const PLLift& map, const Rational& lo, const Rational& hi,
                                         const Rational& level) {
  auto segs = pieces(map, lo, hi);
  for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
    if (it->y1 == level) return it->x1;
    if (it->y0 != it->y1 && crosses(it->y0, it->y1, level)) return crossing(*it, level);
  }
  return std::nullopt;
}

CoverWitness positively_covers(const PLLift& map, const Interval& source, const Interval& target) {
  CoverWitness w;
  std::optional<Rational> x;
  for (const auto& s : pieces(map, source.lo, source.hi)) {
    if (s.y0 <= target.lo) {
      x = s.x0;
      break;
    }
    if (s.y1 <= target.lo) {
      x = crossing(s, target.lo);
      break;
    }
  }
  if (!x) return w;
  // Highest value on [x, max I]; pieces are linear so knots and ends suffice.
  std::optional<Rational> best_x, best_y;
  auto consider = [&](const Rational& t, const Rational& v) {
    if (!best_y || v > *best_y) {
      best_x = t;
      best_y = v;
    }
  };
  for (const auto& s : pieces(map, *x, source.hi)) {
    consider(s.x0, s.y0);
    consider(s.x1, s.y1);
  }
  if (*best_y < target.hi) return w;
  w.covers = true;
  w.x = *x;
  w.y = *best_x;
  return w;
}

CoverWitness positively_covers(const MarkovMap& map, const Interval& source, const Interval& target, int power,
                               long shift) {
  return positively_covers(map.power_restriction(power).plus(Rational(-shift)), source, target);
}

ChainWitness chain_periodic_witness(const std::vector<PLLift>& lifts, const std::vector<ChainStep>& chain) {
  const std::size_t k = chain.size();
  if (k == 0 || lifts.size() != k) throw Error(ErrorKind::ChainBroken, "chain must be non-empty with one lift per step");
  std::vector<PLLift> g;
  for (std::size_t i = 0; i < k; ++i) {
    const Interval& I = chain[i].interval;
    if (!(I.lo < I.hi)) throw Error(ErrorKind::ChainBroken, "step " + std::to_string(i) + " has a degenerate interval");
    g.push_back(lifts[i].plus(Rational(-chain[i].shift)));
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!positively_covers(g[i], chain[i].interval, chain[(i + 1) % k].interval).covers) {
      throw Error(ErrorKind::ChainBroken, "step " + std::to_string(i) + " does not positively cover the next interval");
    }
  }
  // Pull the target back step by step so that each map sends the current
  // interval into the next one, endpoints onto endpoints.
  Interval target = chain[0].interval;
  std::vector<Interval> refined(k);
  for (std::size_t step = k; step-- > 0;) {
    CoverWitness cw = positively_covers(g[step], chain[step].interval, target);
    if (!cw.covers) throw Error(ErrorKind::ChainBroken, "refinement lost the covering at step " + std::to_string(step));
    auto x0 = last_level_point(g[step], cw.x, cw.y, target.lo);
    if (!x0) throw Error(ErrorKind::ChainBroken, "no preimage of the lower end at step " + std::to_string(step));
    auto y0 = first_level_point(g[step], *x0, cw.y, target.hi);
    if (!y0) throw Error(ErrorKind::ChainBroken, "no preimage of the upper end at step " + std::to_string(step));
    refined[step] = {*x0, *y0};
    target = refined[step];
  }
  PLLift loop = g[0];
  for (std::size_t i = 1; i < k; ++i) loop = PLLift::compose(g[i], loop);
  // loop(t) - t is <= 0 at the left end and >= 0 at the right end.
  const Interval& dom = refined[0];
  std::optional<Rational> fixed;
  for (const auto& s : pieces(loop, dom.lo, dom.hi)) {
    Rational d0 = s.y0 - s.x0, d1 = s.y1 - s.x1;
    if (d0 == 0) {
      fixed = s.x0;
      break;
    }
    if ((d0 < 0 && d1 >= 0) || (d0 > 0 && d1 <= 0)) {
      fixed = s.x0 + d0 * (s.x1 - s.x0) / (d0 - d1);
      break;
    }
  }
  if (!fixed) throw Error(ErrorKind::ChainBroken, "no fixed point of the composed chain map");
  ChainWitness w;
  w.x = *fixed;
  Rational t = *fixed;
  for (std::size_t i = 0; i < k; ++i) {
    if (t < chain[i].interval.lo || t > chain[i].interval.hi) {
      throw Error(ErrorKind::ChainBroken, "orbit leaves interval " + std::to_string(i));
    }
    w.visits.push_back(t);
    w.total_power += chain[i].power;
    w.total_shift += chain[i].shift;
    t = g[i](t);
  }
  if (t != *fixed) throw Error(ErrorKind::ChainBroken, "composed chain map does not fix the witness");
  return w;
}

ChainWitness chain_periodic_witness(const MarkovMap& map, const std::vector<ChainStep>& chain) {
  std::map<int, PLLift> cache;
  std::vector<PLLift> lifts;
  for (const auto& step : chain) {
    if (step.power < 1) throw Error(ErrorKind::ChainBroken, "step powers must be positive");
    auto it = cache.find(step.power);
    if (it == cache.end()) it = cache.emplace(step.power, map.power_restriction(step.power)).first;
    lifts.push_back(it->second);
  }
  ChainWitness w = chain_periodic_witness(lifts, chain);
  // Exact re-check along the true orbit.
  const auto& lg = map.graph();
  const Point start = lg.spine_point(w.x);
  Point cur = start;
  long shift = 0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (lg.component_of(cur) != -1) throw Error(ErrorKind::ChainBroken, "orbit is off the spine at step " + std::to_string(i));
    Rational r = lg.retract(cur) - shift;
    if (r != w.visits[i]) throw Error(ErrorKind::ChainBroken, "orbit disagrees with the spine lift at step " + std::to_string(i));
    cur = map.power(cur, chain[i].power);
    shift += chain[i].shift;
  }
  if (!lg.same_point(cur, lg.translate(start, shift))) {
    throw Error(ErrorKind::ChainBroken, "witness does not return to x + " + std::to_string(shift));
  }
  return w;
}

namespace {

// x in [x0, x1] maps affinely onto the local parameter t0..t1 of `edge`.
struct Cell {
  Rational x0, x1, t0, t1;
  int edge = 0;
  long shift = 0;
};

Rational lerp(const Rational& a, const Rational& b, const Rational& s) { return a + s * (b - a); }

Cell sub_cell(const Cell& c, const Rational& s0, const Rational& s1) {
  return Cell{lerp(c.x0, c.x1, s0), lerp(c.x0, c.x1, s1), lerp(c.t0, c.t1, s0), lerp(c.t0, c.t1, s1), c.edge, c.shift};
}

// Parts of the cell sent onto the spine with r-value in [lo, hi].
void restrict_cell(const LiftedGraph& g, const Cell& c, const Rational& lo, const Rational& hi, std::vector<Cell>& out) {
  auto keep_point = [&](const Rational& s) {
    Cell p = sub_cell(c, s, s);
    Point pt = g.canonical(Point{p.edge, p.t0, p.shift});
    if (g.component_of(pt) != -1) return;
    Rational r = g.retract(pt);
    if (lo <= r && r <= hi) out.push_back(p);
  };
  if (c.t0 == c.t1) {
    keep_point(Rational(0));
    return;
  }
  if (!g.is_spine_edge(c.edge)) {
    // Only end nodes of a branch edge can be spine points.
    for (const Rational& t : {Rational(0), Rational(1)}) {
      Rational s = (t - c.t0) / (c.t1 - c.t0);
      if (0 <= s && s <= 1) keep_point(s);
    }
    return;
  }
  Rational r0 = g.retract(Point{c.edge, c.t0, c.shift}), r1 = g.retract(Point{c.edge, c.t1, c.shift});
  Rational s0 = (lo - r0) / (r1 - r0), s1 = (hi - r0) / (r1 - r0);
  if (s1 < s0) std::swap(s0, s1);
  if (s0 < 0) s0 = 0;
  if (s1 > 1) s1 = 1;
  if (s0 <= s1) out.push_back(sub_cell(c, s0, s1));
}

void advance_cell(const MarkovMap& map, const Cell& c, std::vector<Cell>& out) {
  Rational tlo = min_of(c.t0, c.t1), thi = max_of(c.t0, c.t1);
  for (std::size_t k = 0; k < map.chains()[c.edge].size(); ++k) {
    const AffineBranch& b = map.branch(c.edge, static_cast<int>(k));
    Rational from = max_of(tlo, b.t0), to = min_of(thi, b.t1);
    if (to < from) continue;
    Cell piece = c;
    if (c.t0 != c.t1) {
      Rational s0 = (from - c.t0) / (c.t1 - c.t0), s1 = (to - c.t0) / (c.t1 - c.t0);
      piece = sub_cell(c, s0, s1);
    }
    out.push_back(Cell{piece.x0, piece.x1, b.alpha * piece.t0 + b.beta, b.alpha * piece.t1 + b.beta, b.target,
                       c.shift + b.shift});
  }
}

}  // namespace

IntervalUnion follow_set(const MarkovMap& map, const std::vector<ChainStep>& chain) {
  if (chain.empty()) throw Error(ErrorKind::PreconditionViolated, "empty chain");
  const auto& g = map.graph();
  const Interval& first = chain.front().interval;
  std::vector<Cell> cells;
  for (long k = to_ll(floor_of(first.lo)) - 1; k <= to_ll(ceil_of(first.hi)); ++k) {
    for (int e : g.spine_order()) {
      Cell whole{g.retract(Point{e, Rational(0), k}), g.retract(Point{e, Rational(1), k}), Rational(0), Rational(1), e, k};
      restrict_cell(g, whole, first.lo, first.hi, cells);
    }
  }
  long shift = 0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (chain[i].power < 1) throw Error(ErrorKind::PreconditionViolated, "step powers must be positive");
    for (int n = 0; n < chain[i].power; ++n) {
      std::vector<Cell> next;
      for (const auto& c : cells) advance_cell(map, c, next);
      cells = std::move(next);
    }
    shift += chain[i].shift;
    const Interval& target = chain[(i + 1) % chain.size()].interval;
    std::vector<Cell> kept;
    for (const auto& c : cells) restrict_cell(g, c, target.lo + shift, target.hi + shift, kept);
    cells = std::move(kept);
  }
  IntervalUnion out;
  for (const auto& c : cells) out.push_back({min_of(c.x0, c.x1), max_of(c.x0, c.x1)});
  return normalize(out);
}

std::optional<EscapeIndex> escape_index(const MarkovMap& map, const Point& low, const Point& high,
                                        const Rational& alpha, const Rational& beta, int horizon) {
  const auto& g = map.graph();
  if (alpha > beta) throw Error(ErrorKind::PreconditionViolated, "escape_index needs alpha <= beta");
  if (horizon < 1) throw Error(ErrorKind::PreconditionViolated, "horizon must be positive");
  if (g.component_of(low) != -1 || g.component_of(high) != -1) {
    throw Error(ErrorKind::PreconditionViolated, "escape points must lie on the spine");
  }
  const Rational r_low = g.retract(low), r_high = g.retract(high);
  Point a = g.canonical(low), b = g.canonical(high);
  int index = 1;
  for (int n = 1; n <= horizon; ++n) {
    a = map.evaluate(a);
    b = map.evaluate(b);
    bool below = g.retract(a) <= r_low + alpha * n - 1;
    bool above = g.retract(b) >= r_high + beta * n + 1;
    if (!(below && above)) index = n + 1;
  }
  if (index > horizon) return std::nullopt;
  EscapeIndex out{index, horizon, false};
  auto low_period = minimal_period(map, low, horizon), high_period = minimal_period(map, high, horizon);
  if (low_period && high_period) {
    out.certified = ratio(low_period->second, low_period->first) < alpha &&
                    ratio(high_period->second, high_period->first) > beta &&
                    index + std::max(low_period->first, high_period->first) - 1 <= horizon;
  }
  return out;
}

long chi(const Rational& t) {
  if (t < 0) throw Error(ErrorKind::PreconditionViolated, "chi needs t >= 0");
  if (t <= 1) return 1;
  long c = to_ll(ceil_of(t));
  return std::max(c * c, 51 * c);
}

std::vector<long> prime_factors(long m) {
  std::vector<long> out;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      out.push_back(p);
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) out.push_back(m);
  std::sort(out.rbegin(), out.rend());
  return out;
}

Decomposition decompose(long N, long m) {
  if (N < 1) throw Error(ErrorKind::PreconditionViolated, "N must be positive");
  if (m < chi(Rational(N))) {
    throw Error(ErrorKind::PreconditionViolated, "m = " + std::to_string(m) + " is below chi(" + std::to_string(N) + ")");
  }
  Decomposition d{N, m, {}};
  if (N == 1) {
    d.parts.assign(static_cast<std::size_t>(m), 1);
    return d;
  }
  std::vector<long> primes = prime_factors(m);  // p_1 > p_2 > ...
  std::vector<long> divs;                       // d_i = m / p_i, ascending
  for (long p : primes) divs.push_back(m / p);
  std::size_t small = 0;  // primes with p^2 N > m
  while (small < primes.size() && primes[small] * primes[small] * N > m) ++small;
  long prefix = 0;
  for (std::size_t i = small; i < divs.size(); ++i) {
    d.parts.push_back(divs[i] - prefix);
    prefix = divs[i];
  }
  for (std::size_t i = 0; i < small; ++i) {
    long dv = divs[i];
    long pad = ((-(prefix + N)) % dv + dv) % dv;
    d.parts.push_back(N + pad);
    prefix += N + pad;
  }
  d.parts.push_back(m - prefix);
  return d;
}

std::string check_decomposition(const Decomposition& d) {
  if (d.parts.empty()) return "no parts";
  long sum = 0;
  for (long n : d.parts) {
    if (n < d.N) return "part " + std::to_string(n) + " below N";
    sum += n;
  }
  if (sum != d.m) return "parts sum to " + std::to_string(sum);
  std::vector<long> prefixes;
  long acc = 0;
  for (std::size_t i = 0; i + 1 < d.parts.size(); ++i) prefixes.push_back(acc += d.parts[i]);
  for (long div = 1; div < d.m; ++div) {
    if (d.m % div) continue;
    bool hit = std::any_of(prefixes.begin(), prefixes.end(), [&](long s) { return s % div == 0; });
    if (!hit) return "divisor " + std::to_string(div) + " divides no proper prefix sum";
  }
  return "";
}

std::optional<Decomposition> decompose_brute_force(long N, long m) {
  if (m < N) return std::nullopt;
  std::vector<long> divs;
  for (long p : prime_factors(m)) divs.push_back(m / p);
  std::vector<long> picks(divs.size());
  std::optional<Decomposition> found;
  std::function<void(std::size_t)> choose = [&](std::size_t i) {
    if (found) return;
    if (i == divs.size()) {
      std::set<long> cuts(picks.begin(), picks.end());
      Decomposition d{N, m, {}};
      long prev = 0;
      for (long c : cuts) {
        d.parts.push_back(c - prev);
        prev = c;
      }
      d.parts.push_back(m - prev);
      if (check_decomposition(d).empty()) found = d;
      return;
    }
    for (long c = divs[i]; c <= m - N; c += divs[i]) {
      if (c < N) continue;
      picks[i] = c;
      choose(i + 1);
    }
  };
  choose(0);
  return found;
}

std::optional<std::pair<long, long>> divisor_fraction(long N, const Rational& a, const Rational& b, long n) {
  if (!(a < b)) throw Error(ErrorKind::PreconditionViolated, "divisor_fraction needs a < b");
  for (long q = std::max(N, 1L); q <= n; ++q) {
    if (n % q) continue;
    long lo = to_ll(ceil_of(a * q)), hi = to_ll(floor_of(b * q));
    for (long p = lo; p <= hi; ++p) {
      if (std::gcd(p < 0 ? -p : p, q) == 1) return std::make_pair(p, q);
    }
  }
  return std::nullopt;
}

}  // namespace rotkit
