#include "rotkit/pl_lift.hpp"

#include "rotkit/errors.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace rotkit {

namespace {

Rational frac_of(const Rational& x) { return x - Rational(floor_of(x)); }

Rational lerp(const Rational& x0, const Rational& y0, const Rational& x1, const Rational& y1, const Rational& x) {
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

}  // namespace

PLLift::PLLift() : knots_{{0, 0, 0, 0}, {1, 1, 1, 1}} {}

PLLift::PLLift(std::vector<Knot> knots) : knots_(std::move(knots)) {}

PLLift PLLift::from_knots(std::vector<Knot> knots) {
  if (knots.size() < 2) throw Error(ErrorKind::InvalidInput, "a lift needs knots at 0 and 1");
  if (knots.front().x != 0 || knots.back().x != 1) throw Error(ErrorKind::InvalidInput, "knots must start at 0 and end at 1");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i - 1].x < knots[i].x)) throw Error(ErrorKind::InvalidInput, "knot positions must increase strictly");
  }
  const Knot& a = knots.front();
  const Knot& b = knots.back();
  if (b.left != a.left + 1 || b.value != a.value + 1 || b.right != a.right + 1) {
    throw Error(ErrorKind::InvalidInput, "lift is not of degree one: L(1) != L(0) + 1");
  }
  return PLLift(std::move(knots));
}

PLLift PLLift::from_points(const std::vector<std::pair<Rational, Rational>>& points) {
  std::vector<std::pair<Rational, Rational>> pts = points;
  std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Knot> knots;
  for (const auto& [x, y] : pts) {
    if (!knots.empty() && knots.back().x == x) {
      if (knots.back().value != y) throw Error(ErrorKind::InvalidInput, "two values at x = " + to_string(x));
      continue;
    }
    knots.push_back({x, y, y, y});
  }
  return from_knots(std::move(knots));
}

PLLift PLLift::translation(const Rational& c) { return PLLift::from_points({{0, c}, {1, c + 1}}); }

std::vector<std::pair<Rational, Rational>> PLLift::breakpoints() const {
  std::vector<std::pair<Rational, Rational>> out;
  for (const auto& k : knots_) out.emplace_back(k.x, k.value);
  return out;
}

std::size_t PLLift::locate(const Rational& frac) const {
  auto it = std::upper_bound(knots_.begin(), knots_.end(), frac,
                             [](const Rational& v, const Knot& k) { return v < k.x; });
  return static_cast<std::size_t>(it - knots_.begin()) - 1;
}

Rational PLLift::operator()(const Rational& x) const {
  Integer k = floor_of(x);
  Rational f = x - Rational(k);
  std::size_t i = locate(f);
  const Knot& a = knots_[i];
  if (f == a.x) return a.value + k;
  const Knot& b = knots_[i + 1];
  return lerp(a.x, a.right, b.x, b.left, f) + k;
}

Rational PLLift::left_limit(const Rational& x) const {
  Integer k = floor_of(x);
  Rational f = x - Rational(k);
  std::size_t i = locate(f);
  if (f == knots_[i].x) return knots_[i].left + k;
  return (*this)(x);
}

Rational PLLift::right_limit(const Rational& x) const {
  Integer k = floor_of(x);
  Rational f = x - Rational(k);
  std::size_t i = locate(f);
  if (f == knots_[i].x) return knots_[i].right + k;
  return (*this)(x);
}

bool PLLift::is_continuous() const {
  for (const auto& k : knots_) {
    if (k.left != k.value || k.value != k.right) return false;
  }
  return true;
}

bool PLLift::is_nondecreasing() const {
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    const Knot& k = knots_[i];
    if (k.left > k.value || k.value > k.right) return false;
    if (i + 1 < knots_.size() && k.right > knots_[i + 1].left) return false;
  }
  return true;
}

bool PLLift::is_degree_one() const {
  const Knot& a = knots_.front();
  const Knot& b = knots_.back();
  return a.x == 0 && b.x == 1 && b.left == a.left + 1 && b.value == a.value + 1 && b.right == a.right + 1;
}

PLLift PLLift::plus(const Rational& c) const {
  std::vector<Knot> ks = knots_;
  for (auto& k : ks) {
    k.left += c;
    k.value += c;
    k.right += c;
  }
  return PLLift(std::move(ks));
}

PLLift PLLift::reflect() const {
  std::vector<Knot> ks;
  for (auto it = knots_.rbegin(); it != knots_.rend(); ++it) {
    ks.push_back({1 - it->x, 1 - it->right, 1 - it->value, 1 - it->left});
  }
  // 1 - L(1 - x) evaluated at the knot of x = 0 gives the x' = 1 knot; keep degree one.
  return PLLift(std::move(ks));
}

PLLift PLLift::simplified() const {
  std::vector<Knot> out{knots_.front()};
  for (std::size_t i = 1; i + 1 < knots_.size(); ++i) {
    const Knot& k = knots_[i];
    const Knot& prev = out.back();
    const Knot& next = knots_[i + 1];
    bool continuous = k.left == k.value && k.value == k.right;
    if (continuous && lerp(prev.x, prev.right, next.x, next.left, k.x) == k.value) continue;
    out.push_back(k);
  }
  out.push_back(knots_.back());
  return PLLift(std::move(out));
}

PLLift PLLift::refined(const std::vector<Rational>& extra) const {
  std::set<Rational> xs;
  for (const auto& k : knots_) xs.insert(k.x);
  for (const auto& e : extra) {
    Rational f = frac_of(e);
    xs.insert(f);
  }
  std::vector<Knot> ks;
  for (const auto& x : xs) {
    if (x == 1) continue;
    ks.push_back({x, left_limit(x), (*this)(x), right_limit(x)});
  }
  Knot last = ks.front();
  last.x = 1;
  last.left += 1;
  last.value += 1;
  last.right += 1;
  ks.push_back(last);
  return PLLift(std::move(ks));
}

PLLift PLLift::running_max(const std::map<Rational, Rational>& spikes) const {
  std::vector<Rational> extra;
  std::map<Rational, Rational> spike_at;
  for (const auto& [z, v] : spikes) {
    Rational f = frac_of(z);
    Rational shifted = v - (z - f);
    extra.push_back(f);
    auto it = spike_at.find(f);
    if (it == spike_at.end() || it->second < shifted) spike_at[f] = shifted;
  }
  PLLift g = refined(extra);
  const auto& k = g.knots_;
  const std::size_t m = k.size() - 1;
  std::vector<std::optional<Rational>> spike(m);
  std::vector<Rational> v(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto it = spike_at.find(k[i].x);
    if (it != spike_at.end()) spike[i] = it->second;
    v[i] = max_of(max_of(k[i].left, k[i].value), k[i].right);
    if (spike[i]) v[i] = max_of(v[i], *spike[i]);
  }
  std::vector<Rational> prefix(m), suffix(m);
  for (std::size_t i = 0; i < m; ++i) prefix[i] = i == 0 ? v[0] : max_of(prefix[i - 1], v[i]);
  for (std::size_t i = m; i-- > 0;) suffix[i] = i + 1 == m ? v[i] : max_of(suffix[i + 1], v[i]);
  // Plateau level on the open piece (x_i, x_{i+1}).
  std::vector<Rational> level(m);
  for (std::size_t i = 0; i < m; ++i) {
    level[i] = i + 1 < m ? max_of(prefix[i], suffix[i + 1] - 1) : prefix[i];
  }
  std::vector<Knot> out;
  for (std::size_t i = 0; i < m; ++i) {
    Knot nk;
    nk.x = k[i].x;
    Rational val = max_of(max_of(k[i].left, k[i].value), k[i].right - 1);
    if (spike[i]) val = max_of(val, *spike[i]);
    if (i > 0) val = max_of(val, prefix[i - 1]);
    if (i + 1 < m) val = max_of(val, suffix[i + 1] - 1);
    nk.value = val;
    nk.right = max_of(k[i].right, level[i]);
    if (i > 0) {
      nk.left = max_of(k[i].left, level[i - 1]);
    } else {
      nk.left = max_of(k[m].left, level[m - 1]) - 1;
    }
    out.push_back(nk);
    // Crossing of the rising piece with the plateau.
    const Rational& a = k[i].right;
    const Rational& b = k[i + 1].left;
    if (a < level[i] && level[i] < b) {
      Rational xc = k[i].x + (level[i] - a) * (k[i + 1].x - k[i].x) / (b - a);
      out.push_back({xc, level[i], level[i], level[i]});
    }
  }
  Knot last = out.front();
  last.x = 1;
  last.left += 1;
  last.value += 1;
  last.right += 1;
  out.push_back(last);
  return PLLift(std::move(out)).simplified();
}

PLLift PLLift::running_min(const std::map<Rational, Rational>& spikes) const {
  std::map<Rational, Rational> mirrored;
  for (const auto& [z, v] : spikes) {
    Rational zr = frac_of(-z);
    Rational val = -v + zr + z;
    auto it = mirrored.find(zr);
    if (it == mirrored.end() || it->second < val) mirrored[zr] = val;
  }
  return reflect().running_max(mirrored).reflect().simplified();
}

namespace {

template <class Pick>
PLLift pointwise(const PLLift& a, const PLLift& b, Pick pick) {
  std::set<Rational> xs;
  for (const auto& k : a.knots()) xs.insert(k.x);
  for (const auto& k : b.knots()) xs.insert(k.x);
  std::vector<Rational> grid(xs.begin(), xs.end());
  std::vector<Rational> extra;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    Rational d0 = a.right_limit(grid[i]) - b.right_limit(grid[i]);
    Rational d1 = a.left_limit(grid[i + 1]) - b.left_limit(grid[i + 1]);
    if ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0)) {
      extra.push_back(grid[i] + d0 * (grid[i + 1] - grid[i]) / (d0 - d1));
    }
  }
  for (const auto& e : extra) xs.insert(e);
  std::vector<Knot> ks;
  for (const auto& x : xs) {
    ks.push_back({x, pick(a.left_limit(x), b.left_limit(x)), pick(a(x), b(x)),
                  pick(a.right_limit(x), b.right_limit(x))});
  }
  return PLLift::from_knots(std::move(ks)).simplified();
}

}  // namespace

PLLift PLLift::pointwise_min(const PLLift& a, const PLLift& b) {
  return pointwise(a, b, [](const Rational& p, const Rational& q) { return min_of(p, q); });
}

PLLift PLLift::pointwise_max(const PLLift& a, const PLLift& b) {
  return pointwise(a, b, [](const Rational& p, const Rational& q) { return max_of(p, q); });
}

PLLift PLLift::compose(const PLLift& outer, const PLLift& inner) {
  std::set<Rational> xs;
  for (const auto& k : inner.knots_) xs.insert(k.x);
  std::vector<Rational> outer_x;
  for (std::size_t i = 0; i + 1 < outer.knots_.size(); ++i) outer_x.push_back(outer.knots_[i].x);
  for (std::size_t i = 0; i + 1 < inner.knots_.size(); ++i) {
    const Knot& ka = inner.knots_[i];
    const Knot& kb = inner.knots_[i + 1];
    const Rational& a = ka.right;
    const Rational& b = kb.left;
    if (a == b) continue;
    const Rational& lo = min_of(a, b);
    const Rational& hi = max_of(a, b);
    for (long s = to_ll(floor_of(lo)); Rational(s) <= hi; ++s) {
      for (const auto& ox : outer_x) {
        Rational w = ox + s;
        if (lo < w && w < hi) xs.insert(ka.x + (w - a) * (kb.x - ka.x) / (b - a));
      }
    }
  }
  std::vector<Rational> grid(xs.begin(), xs.end());
  auto slope_sign = [&](const Rational& x0, const Rational& x1) {
    Rational mid = (x0 + x1) / 2;
    Rational d = inner(mid) - inner.right_limit(x0);
    return d > 0 ? 1 : (d < 0 ? -1 : 0);
  };
  auto through = [&](const Rational& y, int dir) {
    if (dir > 0) return outer.left_limit(y);
    if (dir < 0) return outer.right_limit(y);
    return outer(y);
  };
  std::vector<Knot> ks;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const Rational& x = grid[i];
    int right_dir = slope_sign(x, grid[i + 1]);
    Rational prev_x = i == 0 ? grid[grid.size() - 2] - 1 : grid[i - 1];
    int left_dir = slope_sign(prev_x, x);
    // Approaching from the left along a rising piece reaches the value from below.
    Rational left = through(inner.left_limit(x), left_dir);
    Rational right = through(inner.right_limit(x), -right_dir);
    ks.push_back({x, left, outer(inner(x)), right});
  }
  Knot last = ks.front();
  last.x = 1;
  last.left += 1;
  last.value += 1;
  last.right += 1;
  ks.push_back(last);
  return PLLift(std::move(ks)).simplified();
}

Rational PLLift::sup_distance(const PLLift& a, const PLLift& b) {
  std::set<Rational> xs;
  for (const auto& k : a.knots_) xs.insert(k.x);
  for (const auto& k : b.knots_) xs.insert(k.x);
  Rational best = 0;
  for (const auto& x : xs) {
    best = max_of(best, abs_of(a.left_limit(x) - b.left_limit(x)));
    best = max_of(best, abs_of(a(x) - b(x)));
    best = max_of(best, abs_of(a.right_limit(x) - b.right_limit(x)));
  }
  return best;
}

std::vector<Rational> PLLift::knot_positions(const Rational& lo, const Rational& hi) const {
  std::vector<Rational> out;
  long k0 = to_ll(floor_of(lo));
  long k1 = to_ll(floor_of(hi));
  for (long k = k0; k <= k1; ++k) {
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
      Rational x = knots_[i].x + k;
      if (lo <= x && x <= hi) out.push_back(x);
    }
  }
  return out;
}

std::vector<Segment> PLLift::segments(const Rational& lo, const Rational& hi) const {
  std::vector<Rational> pts{lo};
  for (const auto& x : knot_positions(lo, hi)) {
    if (lo < x && x < hi) pts.push_back(x);
  }
  pts.push_back(hi);
  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    out.push_back({pts[i], right_limit(pts[i]), pts[i + 1], left_limit(pts[i + 1])});
  }
  return out;
}

bool PLLift::operator==(const PLLift& other) const {
  PLLift a = simplified(), b = other.simplified();
  if (a.knots_.size() != b.knots_.size()) return false;
  for (std::size_t i = 0; i < a.knots_.size(); ++i) {
    const Knot& p = a.knots_[i];
    const Knot& q = b.knots_[i];
    if (p.x != q.x || p.left != q.left || p.value != q.value || p.right != q.right) return false;
  }
  return true;
}

}  // namespace rotkit
