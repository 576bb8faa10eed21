#include "rotkit/orbit_engine.hpp"

#include <map>

namespace rotkit {

namespace {

std::size_t denominator_bits(const Rational& t) { return mpz_sizeinbase(t.get_den_mpz_t(), 2); }

Rational dyadic_floor(const Rational& t, int bits) {
  Integer scale = 1;
  scale <<= bits;
  Integer num = floor_of(t * Rational(scale));
  Rational out(num, scale);
  out.canonicalize();
  return out;
}

}  // namespace

OrbitStats rotation_estimate(const MarkovMap& map, const Point& x, const OrbitOptions& options) {
  if (options.horizon < 0) throw Error(ErrorKind::PreconditionViolated, "horizon must be nonnegative");
  const auto& lg = map.graph();
  OrbitStats st;
  st.start = lg.canonical(x);
  st.horizon = options.horizon;
  st.orbit.push_back(st.start);
  const Rational r0 = lg.retract(st.start);
  Rational lambda_max = 0;
  for (int e = 0; e < lg.edge_count(); ++e) lambda_max = max_of(lambda_max, map.slope(e));
  std::map<std::pair<int, Rational>, std::pair<int, long>> seen;
  seen[{st.start.edge, st.start.t}] = {0, st.start.shift};
  Point cur = st.start;
  for (int k = 1; k <= options.horizon; ++k) {
    cur = map.evaluate(cur);
    if (st.inexact) st.error_bound *= lambda_max;
    if (options.max_denominator_bits > 0 && denominator_bits(cur.t) > static_cast<std::size_t>(options.max_denominator_bits)) {
      Rational rounded = dyadic_floor(cur.t, options.max_denominator_bits);
      st.error_bound += (cur.t - rounded) * lg.edges()[cur.edge].length;
      cur = lg.canonical(Point{cur.edge, rounded, cur.shift});
      st.inexact = true;
    }
    st.orbit.push_back(cur);
    st.samples.push_back((lg.retract(cur) - r0) / k);
    if (st.inexact || st.eventual) continue;
    auto [it, fresh] = seen.try_emplace({cur.edge, cur.t}, k, cur.shift);
    if (!fresh) {
      int len = k - it->second.first;
      long shift = cur.shift - it->second.second;
      st.eventual = std::make_pair(len, shift);
      if (it->second.first == 0) st.period = st.eventual;
      st.rho = ratio(shift, len);
      st.rho->canonicalize();
    }
  }
  if (st.rho) {
    st.lower = st.upper = *st.rho;
    st.certification = "exact";
    return st;
  }
  if (st.samples.empty()) {
    st.certification = "empirical";
    return st;
  }
  const std::size_t n = st.samples.size();
  const std::size_t from = (n - 1) / 2;  // tail k in [ceil(n/2), n]
  st.lower = st.upper = st.samples[from];
  for (std::size_t i = from; i < n; ++i) {
    st.lower = min_of(st.lower, st.samples[i]);
    st.upper = max_of(st.upper, st.samples[i]);
  }
  if (st.inexact) {
    Rational widen = st.error_bound / static_cast<long>(from + 1);
    st.lower -= widen;
    st.upper += widen;
    st.certification = "enclosure";
  } else {
    st.certification = "empirical";
  }
  return st;
}

RotationSample rotation_set_sample(const MarkovMap& map, const std::vector<Point>& points, const OrbitOptions& options) {
  const auto& lg = map.graph();
  RotationSample out;
  bool first = true;
  for (const auto& p : points) {
    SampleEntry e;
    e.stats = rotation_estimate(map, p, options);
    e.on_spine = lg.component_of(e.stats.start) == -1;
    if (first || e.stats.lower < out.hull_lo) out.hull_lo = e.stats.lower;
    if (first || e.stats.upper > out.hull_hi) out.hull_hi = e.stats.upper;
    first = false;
    if (e.on_spine) {
      if (!out.spine_lo || e.stats.lower < *out.spine_lo) out.spine_lo = e.stats.lower;
      if (!out.spine_hi || e.stats.upper > *out.spine_hi) out.spine_hi = e.stats.upper;
    }
    out.entries.push_back(std::move(e));
  }
  if (out.spine_lo) {
    for (auto& e : out.entries) {
      if (!e.on_spine) e.outside_spine_hull = e.stats.upper < *out.spine_lo || e.stats.lower > *out.spine_hi;
    }
  }
  return out;
}

}  // namespace rotkit
