#include "addforms/polynomial.hpp"

#include "addforms/error.hpp"
#include "addforms/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <tuple>

namespace addforms {

bool GradedLexGreater::operator()(const Exponents& a, const Exponents& b) const {
  const auto da = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
  const auto db = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
  if (da != db) return da > db;
  return a > b;
}

namespace {

struct VariableKey {
  int block;
  std::string prefix;
  unsigned long index;
  auto operator<=>(const VariableKey&) const = default;
};

VariableKey variable_key(const std::string& name) {
  std::size_t split = name.find_first_of("0123456789");
  std::string prefix = name.substr(0, split);
  unsigned long index = split == std::string::npos ? 0 : std::stoul(name.substr(split));
  static const std::string kBlocks = "xyvet";
  int block = 5;
  if (prefix.size() == 1) {
    auto pos = kBlocks.find(prefix[0]);
    if (pos != std::string::npos) block = static_cast<int>(pos);
  }
  return {block, prefix, index};
}

std::vector<std::string> indexed(char prefix, unsigned k) {
  std::vector<std::string> out;
  for (unsigned i = 1; i <= k; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

std::pair<IntPolynomial, IntPolynomial> aligned(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.variables() == b.variables()) return {a, b};
  auto vars = merge_variables(a.variables(), b.variables());
  return {a.with_variables(vars), b.with_variables(vars)};
}

}  // namespace

std::vector<std::string> x_variables(unsigned k) { return indexed('x', k); }

std::vector<std::string> xy_variables(unsigned k) {
  auto out = indexed('x', k);
  auto ys = indexed('y', k);
  out.insert(out.end(), ys.begin(), ys.end());
  return out;
}

std::vector<std::string> vet_variables(unsigned k) {
  auto out = indexed('v', k);
  for (char c : {'e', 't'}) {
    auto more = indexed(c, k);
    out.insert(out.end(), more.begin(), more.end());
  }
  return out;
}

std::vector<std::string> merge_variables(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end(),
            [](const std::string& l, const std::string& r) { return variable_key(l) < variable_key(r); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IntPolynomial::IntPolynomial(std::vector<std::string> variables) : variables_(std::move(variables)) {
  auto sorted = variables_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(ErrorCode::invalid_argument, "duplicate polynomial variable");
  }
}

IntPolynomial IntPolynomial::constant(std::vector<std::string> variables, const BigInt& c) {
  IntPolynomial p(std::move(variables));
  p.add_term(Exponents(p.variables_.size(), 0), c);
  return p;
}

IntPolynomial IntPolynomial::variable(std::vector<std::string> variables, std::string_view name) {
  IntPolynomial p(std::move(variables));
  Exponents e(p.variables_.size(), 0);
  e[p.variable_index(name)] = 1;
  p.add_term(e, 1);
  return p;
}

std::size_t IntPolynomial::variable_index(std::string_view name) const {
  auto it = std::find(variables_.begin(), variables_.end(), name);
  if (it == variables_.end()) fail(ErrorCode::invalid_argument, "unknown variable " + std::string(name));
  return static_cast<std::size_t>(it - variables_.begin());
}

bool IntPolynomial::has_variable(std::string_view name) const {
  return std::find(variables_.begin(), variables_.end(), name) != variables_.end();
}

void IntPolynomial::add_term(const Exponents& e, const BigInt& c) {
  if (e.size() != variables_.size()) fail(ErrorCode::invalid_argument, "exponent vector length mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

unsigned IntPolynomial::degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0U));
  return d;
}

unsigned IntPolynomial::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

BigInt IntPolynomial::constant_term() const {
  auto it = terms_.find(Exponents(variables_.size(), 0));
  return it == terms_.end() ? BigInt(0) : it->second;
}

IntPolynomial IntPolynomial::with_variables(std::vector<std::string> variables) const {
  IntPolynomial out(std::move(variables));
  std::vector<std::size_t> target(variables_.size());
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (!out.has_variable(variables_[i])) {
      if (degree_in(i) > 0) fail(ErrorCode::invalid_argument, "variable " + variables_[i] + " is not allowed here");
      target[i] = SIZE_MAX;
    } else {
      target[i] = out.variable_index(variables_[i]);
    }
  }
  for (const auto& [e, c] : terms_) {
    Exponents ne(out.variables_.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (target[i] != SIZE_MAX) ne[target[i]] = e[i];
    }
    out.add_term(ne, c);
  }
  return out;
}

Rational IntPolynomial::evaluate(std::span<const Rational> point) const {
  if (point.size() != variables_.size()) {
    fail(ErrorCode::invalid_argument, "point has " + std::to_string(point.size()) + " coordinates, polynomial has " +
                                          std::to_string(variables_.size()) + " variables");
  }
  Rational total = 0;
  for (const auto& [e, c] : terms_) {
    Rational term(c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i]) term *= addforms::pow(point[i], e[i]);
    }
    total += term;
  }
  return total;
}

IntPolynomial IntPolynomial::operator-() const {
  IntPolynomial out(variables_);
  for (const auto& [e, c] : terms_) out.add_term(e, -c);
  return out;
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
  auto [x, y] = aligned(a, b);
  for (const auto& [e, c] : y.terms_) x.add_term(e, c);
  return x;
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) { return a + (-b); }

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  auto [x, y] = aligned(a, b);
  IntPolynomial out(x.variables_);
  for (const auto& [ea, ca] : x.terms_) {
    for (const auto& [eb, cb] : y.terms_) {
      Exponents e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

IntPolynomial operator*(const BigInt& c, const IntPolynomial& a) {
  IntPolynomial out(a.variables_);
  for (const auto& [e, v] : a.terms_) out.add_term(e, c * v);
  return out;
}

IntPolynomial IntPolynomial::pow(unsigned n) const {
  IntPolynomial result = constant(variables_, 1);
  IntPolynomial base = *this;
  while (n > 0) {
    if (n & 1U) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

bool IntPolynomial::operator==(const IntPolynomial& other) const {
  auto [x, y] = aligned(*this, other);
  return x.terms_ == y.terms_;
}

// ---------------------------------------------------------------------------

Rational poly_eval(const IntPolynomial& p, std::span<const Rational> point) { return p.evaluate(point); }

IntPolynomial partial_derivative(const IntPolynomial& p, std::string_view var) {
  const std::size_t j = p.variable_index(var);
  IntPolynomial out(p.variables());
  for (const auto& [e, c] : p.terms()) {
    if (e[j] == 0) continue;
    Exponents ne = e;
    --ne[j];
    out.add_term(ne, c * e[j]);
  }
  return out;
}

IntPolynomial substitute(const IntPolynomial& p, std::string_view var, const IntPolynomial& replacement) {
  auto vars = merge_variables(p.variables(), replacement.variables());
  IntPolynomial base = p.with_variables(vars);
  IntPolynomial r = replacement.with_variables(vars);
  const std::size_t j = base.variable_index(var);
  std::vector<IntPolynomial> powers{IntPolynomial::constant(vars, 1)};
  IntPolynomial out(vars);
  for (const auto& [e, c] : base.terms()) {
    while (powers.size() <= e[j]) powers.push_back(powers.back() * r);
    Exponents rest = e;
    rest[j] = 0;
    IntPolynomial mono(vars);
    mono.add_term(rest, c);
    out = out + mono * powers[e[j]];
  }
  return out;
}

BigInt sup_bound_unit_box(const IntPolynomial& p) {
  BigInt total = 0;
  for (const auto& [e, c] : p.terms()) total += boost::multiprecision::abs(c);
  return total;
}

Rational grid_sup_unit_box(const IntPolynomial& p, unsigned steps) {
  if (steps == 0) fail(ErrorCode::invalid_argument, "grid needs at least one step");
  std::vector<std::size_t> used;
  for (std::size_t i = 0; i < p.variables().size(); ++i) {
    if (p.degree_in(i) > 0) used.push_back(i);
  }
  // Work with the integer numerators a_i in p(a / steps) * steps^D.
  const unsigned d = p.degree();
  std::vector<BigInt> step_pow(d + 1, 1);
  for (unsigned i = 1; i <= d; ++i) step_pow[i] = step_pow[i - 1] * steps;
  std::vector<unsigned> a(p.variables().size(), 0);
  BigInt best = 0;
  bool done = false;
  while (!done) {
    BigInt value = 0;
    for (const auto& [e, c] : p.terms()) {
      BigInt term = c;
      unsigned deg = 0;
      for (std::size_t i : used) {
        if (e[i]) {
          term *= addforms::pow(BigInt(a[i]), e[i]);
          deg += e[i];
        }
      }
      value += term * step_pow[d - deg];
    }
    best = std::max(best, BigInt(boost::multiprecision::abs(value)));
    done = true;
    for (std::size_t i : used) {
      if (a[i] < steps) {
        ++a[i];
        done = false;
        break;
      }
      a[i] = 0;
    }
  }
  return Rational(best, step_pow[d]);
}

IntPolynomial transform_qstar(const IntPolynomial& q, unsigned k) {
  if (k == 0) fail(ErrorCode::invalid_argument, "q* needs k >= 1");
  const IntPolynomial src = q.with_variables(xy_variables(k));
  const unsigned d = src.degree();
  IntPolynomial out(vet_variables(k));
  for (const auto& [e, c] : src.terms()) {
    Exponents ne(3 * k, 0);
    for (unsigned j = 0; j < k; ++j) {
      const std::uint32_t a = e[j];
      const std::uint32_t b = e[k + j];
      ne[j] = 3 * d - 2 * a - 3 * b;  // a + b <= d, so nonnegative
      ne[k + j] = a;
      ne[2 * k + j] = b;
    }
    out.add_term(ne, c);
  }
  return out;
}

IntPolynomial transform_p_from_q(const IntPolynomial& q) {
  const unsigned d = q.degree();
  IntPolynomial out(q.variables());
  for (const auto& [e, c] : q.terms()) {
    Exponents ne(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) ne[i] = d - e[i];
    out.add_term(ne, c);
  }
  return out;
}

PenaltyTransform transform_q_from_p(const IntPolynomial& p, unsigned k, unsigned max_grid_points) {
  if (k == 0) {
    for (std::size_t i = 0; i < p.variables().size(); ++i) {
      const VariableKey key = variable_key(p.variables()[i]);
      if (p.degree_in(i) > 0 && key.prefix == "x") k = std::max<unsigned>(k, static_cast<unsigned>(key.index));
    }
  }
  const IntPolynomial src = p.with_variables(x_variables(k));
  PenaltyTransform out;
  out.first_derivative_bound = 0;
  out.second_derivative_bound = 0;
  out.grid_first_sup = 0;
  out.grid_second_sup = 0;
  unsigned steps = 1;
  if (k > 0) {
    steps = static_cast<unsigned>(std::floor(std::pow(static_cast<double>(max_grid_points), 1.0 / k))) - 1;
    steps = std::clamp(steps, 1U, 20U);
  }
  out.grid_steps = steps;
  for (const auto& name : x_variables(k)) {
    const IntPolynomial d1 = partial_derivative(src, name);
    const IntPolynomial d2 = partial_derivative(d1, name);
    out.first_derivative_bound = std::max(out.first_derivative_bound, sup_bound_unit_box(d1));
    out.second_derivative_bound = std::max(out.second_derivative_bound, sup_bound_unit_box(d2));
    out.grid_first_sup = std::max(out.grid_first_sup, grid_sup_unit_box(d1, steps));
    out.grid_second_sup = std::max(out.grid_second_sup, grid_sup_unit_box(d2, steps));
  }
  out.m = std::max({BigInt(1), BigInt(30 * out.first_derivative_bound), BigInt(3 * out.second_derivative_bound)});
  out.grid_m = std::max({Rational(1), Rational(30 * out.grid_first_sup), Rational(3 * out.grid_second_sup)});

  const auto vars = xy_variables(k);
  IntPolynomial penalty(vars);
  for (unsigned i = 1; i <= k; ++i) {
    const auto x = IntPolynomial::variable(vars, "x" + std::to_string(i));
    const auto y = IntPolynomial::variable(vars, "y" + std::to_string(i));
    penalty = penalty + x.pow(3) - y;
  }
  out.q = src.with_variables(vars) + out.m * penalty;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class PolyParser {
 public:
  explicit PolyParser(std::string_view input) : cur_(input) {}

  IntPolynomial parse() {
    IntPolynomial p = expression();
    cur_.expect_end();
    return p;
  }

 private:
  IntPolynomial expression() {
    IntPolynomial acc = term();
    while (true) {
      if (cur_.accept('+')) {
        acc = acc + term();
      } else if (cur_.accept('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  bool starts_primary() {
    char c = cur_.peek();
    return std::isdigit(static_cast<unsigned char>(c)) || std::isalpha(static_cast<unsigned char>(c)) || c == '(';
  }

  IntPolynomial term() {
    IntPolynomial acc = unary();
    while (true) {
      if (cur_.accept('*')) {
        acc = acc * unary();
      } else if (starts_primary()) {
        acc = acc * unary();
      } else {
        return acc;
      }
    }
  }

  IntPolynomial unary() {
    if (cur_.accept('-')) return -unary();
    if (cur_.accept('+')) return unary();
    return power();
  }

  IntPolynomial power() {
    IntPolynomial base = primary();
    if (cur_.accept('^')) {
      BigInt e = cur_.integer();
      if (e > 1000) cur_.error("exponent too large");
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  IntPolynomial primary() {
    if (cur_.accept('(')) {
      IntPolynomial inner = expression();
      cur_.expect(')');
      return inner;
    }
    if (cur_.peek_digit()) return IntPolynomial::constant({}, cur_.integer());
    if (cur_.peek_alpha()) {
      const std::size_t line = cur_.line(), column = cur_.column();
      std::string name = cur_.identifier();
      if (!std::isdigit(static_cast<unsigned char>(name.back()))) {
        throw ParseError("variable '" + name + "' needs a numeric index (e.g. x1)", line, column);
      }
      return IntPolynomial::variable({name}, name);
    }
    cur_.error("expected a number, variable or '('");
  }

  text::Cursor cur_;
};

std::string monomial_text(const IntPolynomial& p, const Exponents& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += p.variables()[i];
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out;
}

}  // namespace

IntPolynomial parse_polynomial(std::string_view input) { return PolyParser(input).parse(); }

std::string to_string(const IntPolynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    const BigInt mag = boost::multiprecision::abs(c);
    if (c < 0) {
      out += first ? "-" : " - ";
    } else if (!first) {
      out += " + ";
    }
    first = false;
    const std::string mono = monomial_text(p, e);
    if (mono.empty()) {
      out += mag.str();
    } else if (mag == 1) {
      out += mono;
    } else {
      out += mag.str() + "*" + mono;
    }
  }
  return out;
}

}  // namespace addforms
