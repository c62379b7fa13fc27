#pragma once

// Systems of integer linear forms and their densities t(L, A): the probability
// that a uniform assignment of G^k puts every positive form inside A and every
// negated form outside A.

#include "addforms/abelian.hpp"
#include "addforms/execution.hpp"
#include "addforms/rational.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace addforms {

struct LinearForm {
  std::vector<std::int64_t> coefficients;
  /// The evaluated element must lie outside A.
  bool negated = false;

  std::size_t arity() const { return coefficients.size(); }
  /// Index of the last variable with a nonzero coefficient, if any.
  std::optional<std::size_t> last_variable() const;
  bool is_zero() const;

  auto operator<=>(const LinearForm&) const = default;
};

class LinearSystem {
 public:
  LinearSystem(std::size_t arity, std::vector<LinearForm> forms);

  std::size_t arity() const { return arity_; }
  const std::vector<LinearForm>& forms() const { return forms_; }
  std::size_t size() const { return forms_.size(); }

  /// Same forms with zero coefficients for new trailing variables.
  LinearSystem widened(std::size_t arity) const;

  bool operator==(const LinearSystem&) const = default;

 private:
  std::size_t arity_;
  std::vector<LinearForm> forms_;
};

/// Concatenation of the forms of `parts` after widening to `arity`.
LinearSystem join_systems(std::size_t arity, std::initializer_list<const LinearSystem*> parts);

struct QuantumTerm {
  BigInt coefficient;
  /// Formal product; an empty list is the constant 1.
  std::vector<LinearSystem> factors;

  bool operator==(const QuantumTerm&) const = default;
};

struct QuantumSystem {
  std::vector<QuantumTerm> terms;

  bool operator==(const QuantumSystem&) const = default;
};

/// Sum of c_i g_i; the negation flag is not consulted.
GroupElement eval_form(const LinearForm& form, std::span<const GroupElement> assignment);
ElementIndex eval_form(const LinearForm& form, const FiniteAbelianGroup& group,
                       std::span<const ElementIndex> assignment);

/// Optional binding per variable; unbound variables are enumerated.
using PartialAssignment = std::vector<std::optional<ElementIndex>>;

/// Number of free-variable assignments satisfying the system, with the number of
/// free variables.
struct SatisfyingCount {
  BigInt count;
  std::size_t free_variables = 0;
};

SatisfyingCount count_satisfying(const LinearSystem& system, const GroupSubset& a, const PartialAssignment& fixed,
                                 const ExecutionOptions& options = {});

/// Exact t(L, A) with denominator dividing |G|^k. Refuses with
/// ErrorCode::cap_exceeded when |G|^k * |L| exceeds options.work_budget.
Rational eval_density(const LinearSystem& system, const GroupSubset& a, const ExecutionOptions& options = {});

/// Probability over the unbound variables only.
Rational eval_density_fixed(const LinearSystem& system, const GroupSubset& a, const PartialAssignment& fixed,
                            const ExecutionOptions& options = {});

/// Calls `visit` with every full assignment (element indices per variable)
/// satisfying the system, in lexicographic order. Serial.
void for_each_satisfying(const LinearSystem& system, const GroupSubset& a, const PartialAssignment& fixed,
                         const std::function<void(std::span<const ElementIndex>)>& visit,
                         const ExecutionOptions& options = {});

struct DensityEstimate {
  double estimate = 0.0;
  /// Hoeffding 99% half-width sqrt(ln(200) / (2 samples)).
  double radius = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
};

/// Monte Carlo estimate from `samples` uniform assignments. Samples are drawn in
/// fixed-size chunks, each from its own seeded stream, so the result depends on
/// `seed` only and not on the thread count.
DensityEstimate estimate_density(const LinearSystem& system, const GroupSubset& a, std::uint64_t samples,
                                 std::uint64_t seed, const ExecutionOptions& options = {});

/// sum over terms of coefficient * product of factor densities; each factor
/// evaluates on its own fresh variables.
Rational eval_quantum(const QuantumSystem& q, const GroupSubset& a, const ExecutionOptions& options = {});

struct CanonicalSystem {
  LinearSystem system;
  std::vector<std::string> diagnostics;
  /// A form occurs both plain and negated, so the density is 0.
  bool contradictory = false;
};

/// Sorts forms and drops exact duplicates; flags a form occurring with and
/// without negation.
CanonicalSystem canonicalize(const LinearSystem& system);

/// system := "[" form (";" form)* "]", form := "!"? sum, variables g1..gk.
/// `arity` defaults to the largest variable index used.
LinearSystem parse_system(std::string_view text, std::optional<std::size_t> arity = std::nullopt);
/// quantum := signedterm (("+"|"-") signedterm)*, signedterm := int? "*"? system ("*" system)*
QuantumSystem parse_quantum(std::string_view text);

std::string to_string(const LinearForm& form);
std::string to_string(const LinearSystem& system);
std::string to_string(const QuantumSystem& q);

}  // namespace addforms
