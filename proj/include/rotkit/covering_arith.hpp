#pragma once

#include "rotkit/markov_map.hpp"
#include "rotkit/pl_lift.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace rotkit {

struct CoverWitness {
  bool covers = false;
  Rational x, y;  // x <= y in I with G(x) <= min J and G(y) >= max J
};

// G is a continuous lift (typically r o F^n - p restricted to the spine).
CoverWitness positively_covers(const PLLift& map, const Interval& source, const Interval& target);
CoverWitness positively_covers(const MarkovMap& map, const Interval& source, const Interval& target, int power,
                               long shift);

// I_i covers I_{i+1 mod k} under r o F^{n_i} - p_i.
struct ChainStep {
  Interval interval;
  int power = 1;
  long shift = 0;
};

struct ChainWitness {
  Rational x;  // spine coordinate of the periodic point
  long total_power = 0;  // m_k
  long total_shift = 0;  // p_k with F^{m_k}(x) = x + p_k
  std::vector<Rational> visits;  // r(F^{m_i}(x)), i = 0..k-1
};

// Throws ChainBroken when a step does not cover or the orbit leaves the spine at a step time.
ChainWitness chain_periodic_witness(const MarkovMap& map, const std::vector<ChainStep>& chain);
// Same search on abstract lifts; G_i = lifts[i] - shift_i.
ChainWitness chain_periodic_witness(const std::vector<PLLift>& lifts, const std::vector<ChainStep>& chain);

// Smallest and largest t in [lo, hi] with map(t) == level (continuous lift).
std::optional<Rational> first_level_point(const PLLift& map, const Rational& lo, const Rational& hi,
                                          const Rational& level);
std::optional<Rational> last_level_point(const PLLift& map, const Rational& lo, const Rational& hi,
                                         const Rational& level);

// Spine points x in I_0 with F^{m_i}(x) on the spine and in I_i + p_i for every
// step and for the return to I_0 + p_k; computed exactly from Markov cells.
IntervalUnion follow_set(const MarkovMap& map, const std::vector<ChainStep>& chain);

struct EscapeIndex {
  int index = 0;    // N
  int horizon = 0;  // last n inspected
  // Both points are periodic mod 1 with rho(low) < alpha, rho(high) > beta, and the
  // scan runs a full period past N, so the inequalities hold for every n >= N.
  bool certified = false;
};

// First N with r F^n(low) <= r(low) + n alpha - 1 and r F^n(high) >= r(high) + n beta + 1
// for all N <= n <= horizon; nullopt when either fails at the horizon. Both points on the spine.
std::optional<EscapeIndex> escape_index(const MarkovMap& map, const Point& low, const Point& high,
                                        const Rational& alpha, const Rational& beta, int horizon = 200);

long chi(const Rational& t);

struct Decomposition {
  long N = 1;
  long m = 1;
  std::vector<long> parts;
};

// Constructive splitting of m >= chi(N); throws PreconditionViolated below chi(N).
Decomposition decompose(long N, long m);
// Checks sum, lower bound and the divisor condition directly; empty string when valid.
std::string check_decomposition(const Decomposition& d);
// Exhaustive search for any valid decomposition (small m only).
std::optional<Decomposition> decompose_brute_force(long N, long m);

// Coprime p/q in [a, b] with q >= N and q | n, scanning q upward.
std::optional<std::pair<long, long>> divisor_fraction(long N, const Rational& a, const Rational& b, long n);

std::vector<long> prime_factors(long m);  // distinct, descending

}  // namespace rotkit
