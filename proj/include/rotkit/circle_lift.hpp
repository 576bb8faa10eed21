#pragma once

#include "rotkit/markov_map.hpp"
#include "rotkit/markov_graph.hpp"
#include "rotkit/pl_lift.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rotkit {

// Attachment coordinate z in [0,1) -> r-values of the image of the fibre over z.
using BranchData = std::map<Rational, IntervalUnion>;

PLLift upper_map(const PLLift& lift, const BranchData& branches);
PLLift lower_map(const PLLift& lift, const BranchData& branches);

enum class Combedness { combed, left_only, right_only, neither };
const char* combedness_name(Combedness c);

Combedness is_combed_at(const PLLift& lift, const BranchData& branches, const Rational& x);

struct CombedCheck {
  bool combed = true;
  std::vector<std::pair<Rational, Combedness>> points;  // one per branching coordinate
};
CombedCheck check_combed(const PLLift& lift, const BranchData& branches);

struct RhoResult {
  bool exact = false;
  Rational value;   // meaningful when exact
  Rational lo, hi;  // closed enclosure; lo == hi == value when exact
  int horizon = 0;  // iterations behind the enclosure
};

// Throws NotMonotone unless the lift is nondecreasing.
RhoResult rho_enclosure(const PLLift& map, int n);
// Stern-Brocot search over denominators <= qmax; nullopt when none matches.
std::optional<Rational> rho_exact(const PLLift& map, int qmax);
// Sign of rho(map) - p/q decided exactly: -1, 0 or +1.
int compare_rho(const PLLift& map, long p, long q);
// Exact when found within qmax, otherwise the enclosure at `horizon`.
RhoResult rho_nondecreasing(const PLLift& map, int horizon, int qmax);

class WaterFamily {
 public:
  WaterFamily(PLLift lift, BranchData branches);
  const PLLift& lift() const { return lift_; }
  const PLLift& lower() const { return lower_; }
  const PLLift& upper() const { return upper_; }
  const Rational& mu_max() const { return mu_max_; }
  bool certified() const { return combed_; }  // false on non-combed data
  PLLift at(const Rational& mu) const;

 private:
  PLLift lift_;
  BranchData branches_;
  PLLift lower_, upper_;
  Rational mu_max_;
  bool combed_ = true;
};

struct CombedRotation {
  RhoResult lower;  // rho(F_l)
  RhoResult upper;  // rho(F_u)
};

// Throws NotCombed when some branching point fails the combed test.
CombedRotation rotation_interval_combed(const PLLift& lift, const BranchData& branches, int horizon = 256,
                                        int qmax = 12);
CombedRotation rotation_interval_combed(const MarkovMap& map, int horizon = 256, int qmax = 12);

// n in [1, n_max] with a < k/n < b for some integer k.
std::set<int> m_set(const Rational& a, const Rational& b, int n_max);

struct CombedPeriods {
  Rational a, b;
  std::set<int> interior;               // M(a,b) up to n_max
  std::optional<PeriodResult> at_lower;  // Per(a,F) from loop search
  std::optional<PeriodResult> at_upper;
  std::set<int> periods;  // union of the confirmed parts
  bool complete = true;
};

// Throws NotCombed, or IrrationalEndpoint when an endpoint is not found exactly.
CombedPeriods periods_combed(const MarkovMap& map, int n_max, const PeriodSearchOptions& options = {},
                             int horizon = 256, int qmax = 12);

}  // namespace rotkit
