#pragma once

// Scalar functions of densities (the Bollobas lower bound h, the energy upper
// bound and the delta calculus) and checkers for the classical sumset and
// energy inequalities.

#include "addforms/abelian.hpp"
#include "addforms/execution.hpp"
#include "addforms/rational.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace addforms {

/// A function on [lo, hi] given by closed-form branches indexed by t >= 1 and a
/// rule picking the branch of each point. Isolated points not covered by any
/// branch carry explicit values.
class PiecewiseRational {
 public:
  using Branch = std::function<Rational(unsigned t, const Rational& x)>;
  using Locator = std::function<unsigned(const Rational& x)>;

  PiecewiseRational(std::string name, Rational lo, Rational hi, Locator locate, Branch branch,
                    std::vector<std::pair<Rational, Rational>> isolated = {});

  const std::string& name() const { return name_; }
  /// Fails with invalid_argument outside [lo, hi].
  Rational operator()(const Rational& x) const;
  /// Branch index used at x; 0 for an isolated point.
  unsigned branch_of(const Rational& x) const;
  /// The closed form of branch t at x, whether or not x lies in I_t.
  Rational on_branch(const Rational& x, unsigned t) const { return branch_(t, x); }
  /// Branches t1 and t2 agree at x.
  bool agree_at(const Rational& x, unsigned t1, unsigned t2) const { return branch_(t1, x) == branch_(t2, x); }

 private:
  void require_domain(const Rational& x) const;

  std::string name_;
  Rational lo_, hi_;
  Locator locate_;
  Branch branch_;
  std::vector<std::pair<Rational, Rational>> isolated_;
};

/// h on [0,1]: on I_t = [1-1/t, 1-1/(t+1)),
/// h(x) = (3t^2-t-2)/(t(t+1)) x - 2(t-1)/(t+1); h(1) = 1.
const PiecewiseRational& bollobas_h_function();
Rational bollobas_h(const Rational& x);
/// y >= h(x) for (x, y) in [0,1]^2.
bool in_region_graph(const Rational& x, const Rational& y);

/// alpha^3 - alpha^4 ({1/alpha} - {1/alpha}^2), and 0 at alpha = 0.
Rational energy_upper_bound(const Rational& alpha);
/// beta <= energy_upper_bound(alpha) for (alpha, beta) in [0,1]^2.
bool in_region_energy(const Rational& alpha, const Rational& beta);

/// delta = alpha^3 - energy_upper_bound on I_t = [1/(t+1), 1/t]:
/// -t(t+1) a^4 + (2t+1) a^3 - a^2. At shared endpoints 1/(t+1) the lower
/// branch t is used; delta(0) = 0.
const PiecewiseRational& delta_function();
const PiecewiseRational& delta_prime_function();
const PiecewiseRational& delta_double_prime_function();
Rational delta(const Rational& alpha);
Rational delta_prime(const Rational& alpha);
Rational delta_double_prime(const Rational& alpha);
Rational delta_on_branch(const Rational& alpha, unsigned t);
Rational delta_prime_on_branch(const Rational& alpha, unsigned t);
Rational delta_double_prime_on_branch(const Rational& alpha, unsigned t);

struct DeltaClaimInterval {
  std::string quantity;  // "delta_prime" or "delta_double_prime"
  Rational lo, hi;
  unsigned branch = 0;   // I_t branch used for every grid point
  Rational bound;
  bool lower_bound = true;  // quantity >= bound, otherwise quantity <= bound
  std::uint64_t points = 0;
  std::uint64_t failures = 0;
  Rational extreme;     // smallest value for lower bounds, largest otherwise
  Rational extreme_at;
  std::vector<Rational> failing;  // first few failing points
  bool passed() const { return failures == 0; }
};

struct DeltaEndpointValue {
  Rational alpha;
  unsigned branch = 0;
  Rational delta, delta_prime, delta_double_prime;
};

struct DeltaClaimsReport {
  Rational step;
  unsigned max_t = 0;
  std::vector<DeltaClaimInterval> intervals;
  /// Every interval endpoint evaluated on each closed I_t containing it.
  std::vector<DeltaEndpointValue> endpoints;
  bool passed() const;
};

/// Grid sanity suite (not a proof): delta' >= 1/20 on [1/3,2/5] and [1/2,7/10],
/// delta'' <= -1/2 on [2/5,1/2], [7/10,1] and I_t for t = 3..max_t. Grid points
/// are the multiples of `step` inside each interval plus both endpoints; each
/// interval is evaluated on the single branch whose closed I_t contains it.
DeltaClaimsReport verify_delta_derivative_claims(const Rational& step, unsigned max_t = 20);

// ---------------------------------------------------------------------------

struct InequalityCheck {
  Rational lhs;  // slack for the energy bound
  bool holds = false;
};

/// alpha(A+B) - alpha(A) - alpha(B) + alpha(stab(A+B)); the stabilizer of the
/// empty set is G.
InequalityCheck check_kneser(const GroupSubset& a, const GroupSubset& b);
/// alpha(A+B)^(r+s) - alpha(A)^(r+s-1) alpha(rB - sB); A nonempty, r + s >= 1.
InequalityCheck check_plunnecke_ruzsa(const GroupSubset& a, const GroupSubset& b, unsigned r, unsigned s);
/// E(A) alpha(A+A) - alpha(A)^4 with E normalised by |G|^3.
InequalityCheck check_energy_doubling(const GroupSubset& a);
/// energy_upper_bound(alpha(A)) - E(A); A nonempty.
InequalityCheck check_energy_bound(const GroupSubset& a);

enum class Inequality { kneser, plunnecke_ruzsa, energy_doubling, energy_bound };

std::string_view inequality_name(Inequality kind);
std::optional<Inequality> parse_inequality(std::string_view name);
/// Kneser and Plunnecke-Ruzsa take a pair (A, B).
bool is_pairwise(Inequality kind);

struct CheckParams {
  unsigned r = 1;
  unsigned s = 1;
};

/// Dispatches to the checker; `b` is ignored for single-set inequalities.
InequalityCheck check_inequality(Inequality kind, const GroupSubset& a, const GroupSubset& b,
                                 const CheckParams& params = {});

struct SweepWitness {
  std::vector<GroupSubset> subsets;
  Rational lhs;
};

struct SweepReport {
  Inequality kind = Inequality::energy_bound;
  GroupPtr group;
  CheckParams params;
  std::string mode;  // "exhaustive" or "random"
  std::optional<std::uint64_t> seed;
  std::uint64_t checked = 0;
  /// Instances with empty A where the checker is undefined; counted as checked
  /// with lhs 0.
  std::uint64_t degenerate = 0;
  std::uint64_t violations = 0;
  std::optional<Rational> min_lhs;
  std::vector<SweepWitness> witnesses;  // first few violations
  bool passed() const { return violations == 0; }
};

/// Every subset (or ordered pair of subsets) of `group`; order <= 64 and
/// (instances x |G|^2) within the work budget.
SweepReport sweep_exhaustive(Inequality kind, const GroupPtr& group, const CheckParams& params = {},
                             const ExecutionOptions& options = {});
/// `count` random instances. Each random subset has a size drawn uniformly from
/// 1..|G| and uniformly random members; instance i uses stream i of `seed`.
SweepReport sweep_random(Inequality kind, const GroupPtr& group, std::uint64_t count, std::uint64_t seed,
                         const CheckParams& params = {}, const ExecutionOptions& options = {});

/// Random nonempty subset as used by sweep_random.
GroupSubset random_subset(const GroupPtr& group, std::uint64_t seed, std::uint64_t stream);

}  // namespace addforms
