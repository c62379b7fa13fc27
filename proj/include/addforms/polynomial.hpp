#pragma once

// Sparse multivariate polynomials with integer coefficients, plus the
// polynomial transforms used by the reductions:
//   q  -> q*   clear denominators of q(e/v^2, t/v^3)
//   q  -> p    p(x) = prod x_i^deg(q) * q(1/x)
//   p  -> (q, M)  q(x, y) = p(x) + M sum (x_i^3 - y_i)

#include "addforms/rational.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace addforms {

using Exponents = std::vector<std::uint32_t>;

/// Graded-lex order, largest first: higher total degree, then lexicographically
/// larger exponent vector.
struct GradedLexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

class IntPolynomial {
 public:
  using TermMap = std::map<Exponents, BigInt, GradedLexGreater>;

  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<std::string> variables);

  static IntPolynomial constant(std::vector<std::string> variables, const BigInt& c);
  static IntPolynomial variable(std::vector<std::string> variables, std::string_view name);

  const std::vector<std::string>& variables() const { return variables_; }
  const TermMap& terms() const { return terms_; }
  std::size_t variable_index(std::string_view name) const;
  bool has_variable(std::string_view name) const;

  /// Adds c * x^e; zero results are removed.
  void add_term(const Exponents& e, const BigInt& c);

  bool is_zero() const { return terms_.empty(); }
  /// Total degree; 0 for the zero polynomial.
  unsigned degree() const;
  unsigned degree_in(std::size_t var) const;
  BigInt constant_term() const;

  /// Same polynomial over `variables`, which must contain every variable that
  /// occurs with a nonzero exponent.
  IntPolynomial with_variables(std::vector<std::string> variables) const;

  Rational evaluate(std::span<const Rational> point) const;

  IntPolynomial operator-() const;
  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const BigInt& c, const IntPolynomial& a);
  IntPolynomial pow(unsigned n) const;

  bool operator==(const IntPolynomial& other) const;

 private:
  std::vector<std::string> variables_;
  TermMap terms_;
};

/// Variable lists used by the transforms.
std::vector<std::string> x_variables(unsigned k);
std::vector<std::string> xy_variables(unsigned k);
std::vector<std::string> vet_variables(unsigned k);

/// Union of two variable lists in canonical order (x, y, v, e, t blocks, then
/// other prefixes alphabetically; numeric order within a block).
std::vector<std::string> merge_variables(const std::vector<std::string>& a, const std::vector<std::string>& b);

Rational poly_eval(const IntPolynomial& p, std::span<const Rational> point);
IntPolynomial partial_derivative(const IntPolynomial& p, std::string_view var);
/// Replaces `var` by `replacement` (expressed over the same variable list).
IntPolynomial substitute(const IntPolynomial& p, std::string_view var, const IntPolynomial& replacement);

/// Sum of absolute coefficients: a certified bound on sup |P| over [0,1]^k.
BigInt sup_bound_unit_box(const IntPolynomial& p);
/// max |P| over the grid {0, 1/steps, ..., 1}^k; an estimate of the true sup.
Rational grid_sup_unit_box(const IntPolynomial& p, unsigned steps);

/// q over x1..xk, y1..yk  ->  q* over v1..vk, e1..ek, t1..tk.
IntPolynomial transform_qstar(const IntPolynomial& q, unsigned k);

/// q over x1..xk  ->  p = prod x_i^deg(q) * q(1/x_1, ..., 1/x_k).
IntPolynomial transform_p_from_q(const IntPolynomial& q);

struct PenaltyTransform {
  IntPolynomial q;
  /// max{1, 30 * first_derivative_bound, 3 * second_derivative_bound}.
  BigInt m;
  BigInt first_derivative_bound;
  BigInt second_derivative_bound;
  /// The same constant computed from grid estimates of the suprema.
  Rational grid_m;
  Rational grid_first_sup;
  Rational grid_second_sup;
  unsigned grid_steps = 0;
};

/// p over x1..xk  ->  q = p + M sum_i (x_i^3 - y_i) over x1..xk, y1..yk.
/// `k` = 0 infers k from the largest x index in p.
PenaltyTransform transform_q_from_p(const IntPolynomial& p, unsigned k = 0, unsigned max_grid_points = 20000);

/// Infix with + - * ^ and parentheses, integer literals, variables
/// [a-z]+[0-9]+; juxtaposition multiplies ("3x1^2y1").
IntPolynomial parse_polynomial(std::string_view text);
/// Canonical rendering in graded-lex order, e.g. "x1^2 - 3*x1*y1 + 2".
std::string to_string(const IntPolynomial& p);

}  // namespace addforms
