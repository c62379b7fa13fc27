#include "addforms/bounds.hpp"

#include "addforms/error.hpp"
#include "addforms/random.hpp"

#include <algorithm>
#include <numeric>

namespace addforms {

PiecewiseRational::PiecewiseRational(std::string name, Rational lo, Rational hi, Locator locate, Branch branch,
                                     std::vector<std::pair<Rational, Rational>> isolated)
    : name_(std::move(name)),
      lo_(std::move(lo)),
      hi_(std::move(hi)),
      locate_(std::move(locate)),
      branch_(std::move(branch)),
      isolated_(std::move(isolated)) {}

void PiecewiseRational::require_domain(const Rational& x) const {
  if (x < lo_ || x > hi_) {
    fail(ErrorCode::invalid_argument,
         name_ + ": " + to_string(x) + " outside [" + to_string(lo_) + ", " + to_string(hi_) + "]");
  }
}

unsigned PiecewiseRational::branch_of(const Rational& x) const {
  require_domain(x);
  for (const auto& [point, value] : isolated_) {
    if (point == x) return 0;
  }
  return locate_(x);
}

Rational PiecewiseRational::operator()(const Rational& x) const {
  require_domain(x);
  for (const auto& [point, value] : isolated_) {
    if (point == x) return value;
  }
  return branch_(locate_(x), x);
}

// ---------------------------------------------------------------------------

namespace {

unsigned to_unsigned(const BigInt& v) { return static_cast<unsigned>(v); }

// I_t = [1 - 1/t, 1 - 1/(t+1)) for x < 1.
unsigned bollobas_branch(const Rational& x) { return to_unsigned(floor(Rational(1) / (Rational(1) - x))); }

Rational bollobas_formula(unsigned t, const Rational& x) {
  const BigInt tt = t;
  return Rational(3 * tt * tt - tt - 2, tt * (tt + 1)) * x - Rational(2 * (tt - 1), tt + 1);
}

// Lower branch: alpha in [1/(t+1), 1/t] with t = ceil(1/alpha) - 1, and t = 1 at alpha = 1.
unsigned delta_branch(const Rational& alpha) {
  if (alpha >= 1) return 1;
  const Rational inv = Rational(1) / alpha;
  BigInt c = floor(inv);
  if (Rational(c) != inv) c += 1;
  return to_unsigned(c - 1);
}

}  // namespace

const PiecewiseRational& bollobas_h_function() {
  static const PiecewiseRational h("bollobas_h", 0, 1, bollobas_branch, bollobas_formula,
                                   {{Rational(1), Rational(1)}});
  return h;
}

Rational bollobas_h(const Rational& x) { return bollobas_h_function()(x); }

bool in_region_graph(const Rational& x, const Rational& y) {
  if (y < 0 || y > 1) fail(ErrorCode::invalid_argument, "in_region_graph: y outside [0, 1]");
  return y >= bollobas_h(x);
}

Rational energy_upper_bound(const Rational& alpha) {
  if (alpha < 0 || alpha > 1) fail(ErrorCode::invalid_argument, "energy_upper_bound: alpha outside [0, 1]");
  if (alpha == 0) return 0;
  const Rational f = fractional_part(Rational(1) / alpha);
  return pow(alpha, 3) - pow(alpha, 4) * (f - f * f);
}

bool in_region_energy(const Rational& alpha, const Rational& beta) {
  if (beta < 0 || beta > 1) fail(ErrorCode::invalid_argument, "in_region_energy: beta outside [0, 1]");
  return beta <= energy_upper_bound(alpha);
}

Rational delta_on_branch(const Rational& a, unsigned t) {
  const BigInt tt = t;
  return -Rational(tt * (tt + 1)) * pow(a, 4) + Rational(2 * tt + 1) * pow(a, 3) - a * a;
}

Rational delta_prime_on_branch(const Rational& a, unsigned t) {
  const BigInt tt = t;
  return -Rational(4 * tt * (tt + 1)) * pow(a, 3) + Rational(3 * (2 * tt + 1)) * a * a - 2 * a;
}

Rational delta_double_prime_on_branch(const Rational& a, unsigned t) {
  const BigInt tt = t;
  return -Rational(12 * tt * (tt + 1)) * a * a + Rational(6 * (2 * tt + 1)) * a - 2;
}

const PiecewiseRational& delta_function() {
  static const PiecewiseRational f("delta", 0, 1, delta_branch, [](unsigned t, const Rational& a) {
    return delta_on_branch(a, t);
  }, {{Rational(0), Rational(0)}});
  return f;
}

const PiecewiseRational& delta_prime_function() {
  static const PiecewiseRational f("delta_prime", 0, 1, delta_branch, [](unsigned t, const Rational& a) {
    return delta_prime_on_branch(a, t);
  }, {{Rational(0), Rational(0)}});
  return f;
}

const PiecewiseRational& delta_double_prime_function() {
  static const PiecewiseRational f("delta_double_prime", 0, 1, delta_branch, [](unsigned t, const Rational& a) {
    return delta_double_prime_on_branch(a, t);
  }, {{Rational(0), Rational(-2)}});
  return f;
}

Rational delta(const Rational& alpha) { return delta_function()(alpha); }
Rational delta_prime(const Rational& alpha) { return delta_prime_function()(alpha); }
Rational delta_double_prime(const Rational& alpha) { return delta_double_prime_function()(alpha); }

bool DeltaClaimsReport::passed() const {
  return std::all_of(intervals.begin(), intervals.end(), [](const DeltaClaimInterval& i) { return i.passed(); });
}

namespace {

std::vector<Rational> grid_points(const Rational& lo, const Rational& hi, const Rational& step) {
  std::vector<Rational> pts{lo};
  BigInt first = floor(lo / step);
  if (Rational(first) * step <= lo) first += 1;
  for (BigInt i = first; Rational(i) * step < hi; ++i) pts.push_back(Rational(i) * step);
  if (hi != lo) pts.push_back(hi);
  return pts;
}

DeltaClaimInterval run_interval(bool first_derivative, const Rational& lo, const Rational& hi, unsigned t,
                                const Rational& step) {
  constexpr std::size_t kMaxFailing = 10;
  DeltaClaimInterval out;
  out.quantity = first_derivative ? "delta_prime" : "delta_double_prime";
  out.lo = lo;
  out.hi = hi;
  out.branch = t;
  out.lower_bound = first_derivative;
  out.bound = first_derivative ? Rational(1, 20) : Rational(-1, 2);
  bool first = true;
  for (const Rational& a : grid_points(lo, hi, step)) {
    const Rational v = first_derivative ? delta_prime_on_branch(a, t) : delta_double_prime_on_branch(a, t);
    ++out.points;
    const bool ok = first_derivative ? v >= out.bound : v <= out.bound;
    if (!ok) {
      ++out.failures;
      if (out.failing.size() < kMaxFailing) out.failing.push_back(a);
    }
    if (first || (first_derivative ? v < out.extreme : v > out.extreme)) {
      out.extreme = v;
      out.extreme_at = a;
      first = false;
    }
  }
  return out;
}

}  // namespace

DeltaClaimsReport verify_delta_derivative_claims(const Rational& step, unsigned max_t) {
  if (step <= 0) fail(ErrorCode::invalid_argument, "grid step must be positive");
  DeltaClaimsReport report;
  report.step = step;
  report.max_t = max_t;
  report.intervals.push_back(run_interval(true, Rational(1, 3), Rational(2, 5), 2, step));
  report.intervals.push_back(run_interval(true, Rational(1, 2), Rational(7, 10), 1, step));
  report.intervals.push_back(run_interval(false, Rational(2, 5), Rational(1, 2), 2, step));
  report.intervals.push_back(run_interval(false, Rational(7, 10), Rational(1), 1, step));
  for (unsigned t = 3; t <= max_t; ++t) {
    report.intervals.push_back(run_interval(false, Rational(1, t + 1), Rational(1, t), t, step));
  }
  std::vector<Rational> ends;
  for (const auto& i : report.intervals) {
    ends.push_back(i.lo);
    ends.push_back(i.hi);
  }
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  for (const Rational& a : ends) {
    const unsigned lower = delta_branch(a);
    for (unsigned t = lower; t <= lower + 1; ++t) {
      // closed I_t = [1/(t+1), 1/t]
      if (a < Rational(1, t + 1) || a > Rational(1, t)) continue;
      report.endpoints.push_back(
          {a, t, delta_on_branch(a, t), delta_prime_on_branch(a, t), delta_double_prime_on_branch(a, t)});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

InequalityCheck check_kneser(const GroupSubset& a, const GroupSubset& b) {
  require_same_group(*a.group(), *b.group());
  const GroupSubset ab = sumset(a, b);
  Rational lhs = ab.density() - a.density() - b.density() + stabilizer(ab).density();
  return {lhs, lhs >= 0};
}

InequalityCheck check_plunnecke_ruzsa(const GroupSubset& a, const GroupSubset& b, unsigned r, unsigned s) {
  require_same_group(*a.group(), *b.group());
  if (a.empty()) fail(ErrorCode::invalid_argument, "Plunnecke-Ruzsa needs nonempty A");
  if (r + s == 0) fail(ErrorCode::invalid_argument, "Plunnecke-Ruzsa needs r + s >= 1");
  Rational lhs = pow(sumset(a, b).density(), r + s) -
                 pow(a.density(), r + s - 1) * signed_iterated_sumset(b, r, s).density();
  return {lhs, lhs >= 0};
}

InequalityCheck check_energy_doubling(const GroupSubset& a) {
  if (a.empty()) return {Rational(0), true};
  Rational lhs = additive_energy(a) * sumset(a, a).density() - pow(a.density(), 4);
  return {lhs, lhs >= 0};
}

InequalityCheck check_energy_bound(const GroupSubset& a) {
  if (a.empty()) fail(ErrorCode::invalid_argument, "the energy bound check needs nonempty A");
  Rational slack = energy_upper_bound(a.density()) - additive_energy(a);
  return {slack, slack >= 0};
}

std::string_view inequality_name(Inequality kind) {
  switch (kind) {
    case Inequality::kneser:
      return "kneser";
    case Inequality::plunnecke_ruzsa:
      return "plunnecke-ruzsa";
    case Inequality::energy_doubling:
      return "energy-doubling";
    case Inequality::energy_bound:
      return "energy-bound";
  }
  return "";
}

std::optional<Inequality> parse_inequality(std::string_view name) {
  for (Inequality k : {Inequality::kneser, Inequality::plunnecke_ruzsa, Inequality::energy_doubling,
                       Inequality::energy_bound}) {
    if (inequality_name(k) == name) return k;
  }
  return std::nullopt;
}

bool is_pairwise(Inequality kind) { return kind == Inequality::kneser || kind == Inequality::plunnecke_ruzsa; }

InequalityCheck check_inequality(Inequality kind, const GroupSubset& a, const GroupSubset& b,
                                 const CheckParams& params) {
  switch (kind) {
    case Inequality::kneser:
      return check_kneser(a, b);
    case Inequality::plunnecke_ruzsa:
      return check_plunnecke_ruzsa(a, b, params.r, params.s);
    case Inequality::energy_doubling:
      return check_energy_doubling(a);
    case Inequality::energy_bound:
      return check_energy_bound(a);
  }
  fail(ErrorCode::invalid_argument, "unknown inequality");
}

namespace {

constexpr std::size_t kMaxWitnesses = 5;

struct SweepPartial {
  std::uint64_t checked = 0, degenerate = 0, violations = 0;
  std::optional<Rational> min_lhs;
  std::vector<SweepWitness> witnesses;

  void record(Inequality kind, const GroupSubset& a, const GroupSubset& b, const CheckParams& params) {
    ++checked;
    const bool undefined = a.empty() && (kind == Inequality::plunnecke_ruzsa || kind == Inequality::energy_bound);
    InequalityCheck c{Rational(0), true};
    if (undefined) {
      ++degenerate;
    } else {
      c = check_inequality(kind, a, b, params);
    }
    if (!min_lhs || c.lhs < *min_lhs) min_lhs = c.lhs;
    if (!c.holds) {
      ++violations;
      if (witnesses.size() < kMaxWitnesses) {
        SweepWitness w{{a}, c.lhs};
        if (is_pairwise(kind)) w.subsets.push_back(b);
        witnesses.push_back(std::move(w));
      }
    }
  }
};

void merge_into(SweepReport& report, std::vector<SweepPartial>& parts) {
  for (auto& p : parts) {
    report.checked += p.checked;
    report.degenerate += p.degenerate;
    report.violations += p.violations;
    if (p.min_lhs && (!report.min_lhs || *p.min_lhs < *report.min_lhs)) report.min_lhs = p.min_lhs;
    for (auto& w : p.witnesses) {
      if (report.witnesses.size() < kMaxWitnesses) report.witnesses.push_back(std::move(w));
    }
  }
}

}  // namespace

SweepReport sweep_exhaustive(Inequality kind, const GroupPtr& group, const CheckParams& params,
                             const ExecutionOptions& options) {
  const std::uint32_t n = group->order();
  const unsigned sets = is_pairwise(kind) ? 2 : 1;
  if (n * sets > 62) {
    fail(ErrorCode::cap_exceeded, "exhaustive sweep over " + group->to_string() + " has too many instances");
  }
  const std::uint64_t subsets = std::uint64_t{1} << n;
  const std::uint64_t instances = std::uint64_t{1} << (n * sets);
  const BigInt work = BigInt(instances) * n * n;
  if (work > options.work_budget) {
    fail(ErrorCode::cap_exceeded, "exhaustive sweep over " + group->to_string() + " needs about " +
                                      work.str() + " operations, above the work budget");
  }
  SweepReport report;
  report.kind = kind;
  report.group = group;
  report.params = params;
  report.mode = "exhaustive";
  auto parts = map_blocks(instances, options.threads, [&](std::size_t lo, std::size_t hi) {
    SweepPartial p;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const GroupSubset a = GroupSubset::from_mask(group, sets == 2 ? i / subsets : i);
      const GroupSubset b = sets == 2 ? GroupSubset::from_mask(group, i % subsets) : a;
      p.record(kind, a, b, params);
    }
    return p;
  });
  merge_into(report, parts);
  return report;
}

GroupSubset random_subset(const GroupPtr& group, std::uint64_t seed, std::uint64_t stream) {
  auto engine = make_engine(seed, stream);
  const std::uint32_t n = group->order();
  const auto size = static_cast<std::uint32_t>(1 + uniform_below(engine, n));
  std::vector<ElementIndex> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::uint32_t i = 0; i < size; ++i) {
    std::swap(perm[i], perm[i + uniform_below(engine, n - i)]);
  }
  perm.resize(size);
  return GroupSubset::from_indices(group, perm);
}

SweepReport sweep_random(Inequality kind, const GroupPtr& group, std::uint64_t count, std::uint64_t seed,
                         const CheckParams& params, const ExecutionOptions& options) {
  SweepReport report;
  report.kind = kind;
  report.group = group;
  report.params = params;
  report.mode = "random";
  report.seed = seed;
  auto parts = map_blocks(count, options.threads, [&](std::size_t lo, std::size_t hi) {
    SweepPartial p;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const GroupSubset a = random_subset(group, seed, 2 * i);
      const GroupSubset b = is_pairwise(kind) ? random_subset(group, seed, 2 * i + 1) : a;
      p.record(kind, a, b, params);
    }
    return p;
  });
  merge_into(report, parts);
  return report;
}

}  // namespace addforms
