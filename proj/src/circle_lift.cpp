#include "rotkit/circle_lift.hpp"

#include <numeric>

namespace rotkit {

namespace {

std::map<Rational, Rational> spike_values(const BranchData& branches, bool upper) {
  std::map<Rational, Rational> out;
  for (const auto& [z, parts] : branches) {
    if (parts.empty()) continue;
    out[z] = upper ? parts.back().hi : parts.front().lo;
  }
  return out;
}

PLLift power_of(const PLLift& map, long q) {
  PLLift h = map;
  for (long i = 1; i < q; ++i) h = PLLift::compose(map, h);
  return h;
}

}  // namespace

PLLift upper_map(const PLLift& lift, const BranchData& branches) {
  return lift.running_max(spike_values(branches, true));
}

PLLift lower_map(const PLLift& lift, const BranchData& branches) {
  return lift.running_min(spike_values(branches, false));
}

const char* combedness_name(Combedness c) {
  switch (c) {
    case Combedness::combed: return "combed";
    case Combedness::left_only: return "left_only";
    case Combedness::right_only: return "right_only";
    case Combedness::neither: return "neither";
  }
  return "?";
}

Combedness is_combed_at(const PLLift& lift, const BranchData& branches, const Rational& x) {
  auto it = branches.find(x);
  if (it == branches.end() || it->second.empty()) return Combedness::combed;
  const IntervalUnion& image = it->second;
  bool left = image.back().hi <= lift.running_max()(x);
  bool right = image.front().lo >= lift.running_min()(x);
  if (left && right) return Combedness::combed;
  if (left) return Combedness::left_only;
  if (right) return Combedness::right_only;
  return Combedness::neither;
}

CombedCheck check_combed(const PLLift& lift, const BranchData& branches) {
  CombedCheck out;
  for (const auto& [z, parts] : branches) {
    Combedness c = is_combed_at(lift, branches, z);
    out.points.emplace_back(z, c);
    if (c != Combedness::combed) out.combed = false;
  }
  return out;
}

RhoResult rho_enclosure(const PLLift& map, int n) {
  if (!map.is_nondecreasing()) throw Error(ErrorKind::NotMonotone, "rotation number needs a nondecreasing lift");
  if (n < 1) throw Error(ErrorKind::PreconditionViolated, "enclosure horizon must be positive");
  Rational x = 0;
  for (int i = 0; i < n; ++i) x = map(x);
  RhoResult r;
  r.lo = (x - 1) / n;
  r.hi = (x + 1) / n;
  r.horizon = n;
  return r;
}

int compare_rho(const PLLift& map, long p, long q) {
  if (!map.is_nondecreasing()) throw Error(ErrorKind::NotMonotone, "rotation number needs a nondecreasing lift");
  PLLift h = power_of(map, q);
  // d(x) = H(x) - x - p; look for attained values <= 0 and >= 0.
  bool some_le = false, some_ge = false;
  const auto& ks = h.knots();
  for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
    Rational v = ks[i].value - ks[i].x - p;
    if (v <= 0) some_le = true;
    if (v >= 0) some_ge = true;
    Rational a = ks[i].right - ks[i].x - p;
    Rational b = ks[i + 1].left - ks[i + 1].x - p;
    if (a == b) {
      if (a <= 0) some_le = true;
      if (a >= 0) some_ge = true;
    } else {
      if (min_of(a, b) < 0) some_le = true;
      if (max_of(a, b) > 0) some_ge = true;
    }
  }
  if (some_le && some_ge) return 0;
  return some_le ? -1 : 1;
}

std::optional<Rational> rho_exact(const PLLift& map, int qmax) {
  if (!map.is_nondecreasing()) throw Error(ErrorKind::NotMonotone, "rotation number needs a nondecreasing lift");
  long left = to_ll(floor_of(map(Rational(0))));
  int c = compare_rho(map, left, 1);
  while (c < 0) c = compare_rho(map, --left, 1);
  if (c == 0) return Rational(left);
  long right = left + 1;
  if (compare_rho(map, right, 1) == 0) return Rational(right);
  // Stern-Brocot descent between left/1 and right/1.
  long lp = left, lq = 1, rp = right, rq = 1;
  while (lq + rq <= qmax) {
    long mp = lp + rp, mq = lq + rq;
    int s = compare_rho(map, mp, mq);
    if (s == 0) return ratio(mp, mq);
    if (s > 0) {
      lp = mp;
      lq = mq;
    } else {
      rp = mp;
      rq = mq;
    }
  }
  return std::nullopt;
}

RhoResult rho_nondecreasing(const PLLift& map, int horizon, int qmax) {
  RhoResult enc = rho_enclosure(map, horizon);
  if (qmax >= 1) {
    if (auto v = rho_exact(map, qmax)) {
      enc.exact = true;
      enc.value = *v;
      enc.lo = *v;
      enc.hi = *v;
    }
  }
  return enc;
}

WaterFamily::WaterFamily(PLLift lift, BranchData branches) : lift_(std::move(lift)), branches_(std::move(branches)) {
  lower_ = lower_map(lift_, branches_);
  upper_ = upper_map(lift_, branches_);
  mu_max_ = PLLift::sup_distance(lift_, lower_);
  combed_ = check_combed(lift_, branches_).combed;
}

PLLift WaterFamily::at(const Rational& mu) const {
  if (mu < 0 || mu > mu_max_) throw Error(ErrorKind::PreconditionViolated, "mu outside [0, mu_max]");
  return PLLift::pointwise_min(lift_, lower_.plus(mu)).running_max();
}

CombedRotation rotation_interval_combed(const PLLift& lift, const BranchData& branches, int horizon, int qmax) {
  CombedCheck check = check_combed(lift, branches);
  for (const auto& [z, c] : check.points) {
    if (c != Combedness::combed) {
      throw Error(ErrorKind::NotCombed, "map is not combed at " + to_string(z) + " (" + combedness_name(c) + ")");
    }
  }
  CombedRotation out;
  out.lower = rho_nondecreasing(lower_map(lift, branches), horizon, qmax);
  out.upper = rho_nondecreasing(upper_map(lift, branches), horizon, qmax);
  return out;
}

CombedRotation rotation_interval_combed(const MarkovMap& map, int horizon, int qmax) {
  return rotation_interval_combed(map.circle_restriction(), map.branch_value_ranges(), horizon, qmax);
}

std::set<int> m_set(const Rational& a, const Rational& b, int n_max) {
  if (a > b) throw Error(ErrorKind::PreconditionViolated, "m_set needs a <= b");
  std::set<int> out;
  for (int n = 1; n <= n_max; ++n) {
    Rational k = Rational(floor_of(a * n)) + 1;
    if (k < b * n) out.insert(n);
  }
  return out;
}

CombedPeriods periods_combed(const MarkovMap& map, int n_max, const PeriodSearchOptions& options, int horizon,
                             int qmax) {
  CombedRotation rot = rotation_interval_combed(map, horizon, qmax);
  if (!rot.lower.exact || !rot.upper.exact) {
    throw Error(ErrorKind::IrrationalEndpoint, "rotation interval endpoint not identified with denominator <= " + std::to_string(qmax));
  }
  CombedPeriods out;
  out.a = rot.lower.value;
  out.b = rot.upper.value;
  out.interior = m_set(out.a, out.b, n_max);
  out.periods = out.interior;
  auto endpoint = [&](const Rational& v) -> std::optional<PeriodResult> {
    long q = to_ll(v.get_den());
    if (q > n_max) return std::nullopt;
    PeriodResult r = periods_for_rotation(map, to_ll(v.get_num()), q, n_max, options);
    out.periods.insert(r.periods.begin(), r.periods.end());
    if (!r.complete) out.complete = false;
    return r;
  };
  out.at_lower = endpoint(out.a);
  if (out.b != out.a) out.at_upper = endpoint(out.b);
  return out;
}

}  // namespace rotkit
