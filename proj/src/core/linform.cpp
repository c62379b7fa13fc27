#include "addforms/linform.hpp"

#include "addforms/error.hpp"
#include "addforms/random.hpp"
#include "addforms/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <unordered_map>

namespace addforms {

std::optional<std::size_t> LinearForm::last_variable() const {
  for (std::size_t i = coefficients.size(); i > 0; --i) {
    if (coefficients[i - 1] != 0) return i - 1;
  }
  return std::nullopt;
}

bool LinearForm::is_zero() const { return !last_variable().has_value(); }

LinearSystem::LinearSystem(std::size_t arity, std::vector<LinearForm> forms) : arity_(arity), forms_(std::move(forms)) {
  if (arity_ == 0) fail(ErrorCode::invalid_argument, "a linear system needs arity >= 1");
  if (forms_.empty()) fail(ErrorCode::invalid_argument, "a linear system needs at least one form");
  for (const auto& f : forms_) {
    if (f.arity() != arity_) {
      fail(ErrorCode::invalid_argument, "form arity " + std::to_string(f.arity()) + " differs from system arity " +
                                            std::to_string(arity_));
    }
  }
}

LinearSystem LinearSystem::widened(std::size_t arity) const {
  if (arity < arity_) fail(ErrorCode::invalid_argument, "cannot narrow a linear system");
  std::vector<LinearForm> forms = forms_;
  for (auto& f : forms) f.coefficients.resize(arity, 0);
  return LinearSystem(arity, std::move(forms));
}

LinearSystem join_systems(std::size_t arity, std::initializer_list<const LinearSystem*> parts) {
  std::vector<LinearForm> forms;
  for (const LinearSystem* part : parts) {
    auto wide = part->widened(arity);
    forms.insert(forms.end(), wide.forms().begin(), wide.forms().end());
  }
  return LinearSystem(arity, std::move(forms));
}

GroupElement eval_form(const LinearForm& form, std::span<const GroupElement> assignment) {
  if (assignment.size() != form.arity()) {
    fail(ErrorCode::invalid_argument, "assignment has " + std::to_string(assignment.size()) +
                                          " values but the form has arity " + std::to_string(form.arity()));
  }
  const GroupPtr& group = assignment.front().group();
  std::vector<ElementIndex> indices;
  indices.reserve(assignment.size());
  for (const auto& e : assignment) {
    require_same_group(*group, *e.group());
    indices.push_back(e.index());
  }
  return GroupElement(group, eval_form(form, *group, indices));
}

ElementIndex eval_form(const LinearForm& form, const FiniteAbelianGroup& group, std::span<const ElementIndex> assignment) {
  ElementIndex acc = 0;
  for (std::size_t i = 0; i < form.coefficients.size(); ++i) {
    if (form.coefficients[i] != 0) acc = group.add(acc, group.scale(form.coefficients[i], assignment[i]));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Pruned enumeration. Free variables are bound in declaration order; each form
// keeps a running value and is tested as soon as its last free variable is
// bound.

namespace {

class Enumerator {
 public:
  Enumerator(const LinearSystem& system, const GroupSubset& a, const PartialAssignment& fixed)
      : group_(*a.group()), subset_(a) {
    if (fixed.size() != system.arity()) {
      fail(ErrorCode::invalid_argument, "partial assignment has " + std::to_string(fixed.size()) +
                                            " slots but the system has arity " + std::to_string(system.arity()));
    }
    std::vector<std::ptrdiff_t> level_of(system.arity(), -1);
    for (std::size_t v = 0; v < system.arity(); ++v) {
      if (fixed[v]) {
        if (*fixed[v] >= group_.order()) fail(ErrorCode::invalid_argument, "fixed element out of range");
      } else {
        level_of[v] = static_cast<std::ptrdiff_t>(free_vars_.size());
        free_vars_.push_back(v);
      }
    }
    const std::size_t levels = free_vars_.size();
    updates_.resize(levels);
    checks_.resize(levels);
    base_.resize(system.size());
    for (std::size_t f = 0; f < system.size(); ++f) {
      const LinearForm& form = system.forms()[f];
      ElementIndex base = 0;
      std::ptrdiff_t last_level = -1;
      for (std::size_t v = 0; v < system.arity(); ++v) {
        const std::int64_t c = form.coefficients[v];
        if (c == 0) continue;
        if (fixed[v]) {
          base = group_.add(base, group_.scale(c, *fixed[v]));
        } else {
          updates_[level_of[v]].push_back({f, &scale_table(c)});
          last_level = level_of[v];
        }
      }
      base_[f] = base;
      if (last_level < 0) {
        if (subset_.contains(base) == form.negated) constant_fail_ = true;
      } else {
        checks_[last_level].push_back({f, form.negated});
      }
    }
    // tail_[l] = order^(levels - l) when no test happens at level >= l, else 0.
    tail_.assign(levels + 1, 0);
    tail_[levels] = 1;
    for (std::size_t l = levels; l > 0; --l) {
      if (!checks_[l - 1].empty() || tail_[l] == 0) break;
      tail_[l - 1] = tail_[l] * group_.order();
    }
  }

  std::size_t levels() const { return free_vars_.size(); }
  const std::vector<std::size_t>& free_vars() const { return free_vars_; }

  std::uint64_t count(unsigned threads) const {
    if (constant_fail_) return 0;
    if (levels() == 0) return 1;
    if (tail_[0] != 0) return tail_[0];
    auto parts = map_blocks(group_.order(), threads, [&](std::size_t lo, std::size_t hi) {
      State s = fresh_state();
      snapshot(s, 0);
      std::uint64_t total = 0;
      for (std::size_t g = lo; g < hi; ++g) {
        if (bind(s, 0, static_cast<ElementIndex>(g))) total += descend(s, 1);
      }
      return total;
    });
    std::uint64_t total = 0;
    for (auto p : parts) total += p;
    return total;
  }

  void visit(const PartialAssignment& fixed, const std::function<void(std::span<const ElementIndex>)>& fn) const {
    if (constant_fail_) return;
    std::vector<ElementIndex> full(fixed.size(), 0);
    for (std::size_t v = 0; v < fixed.size(); ++v) {
      if (fixed[v]) full[v] = *fixed[v];
    }
    State s = fresh_state();
    walk(s, 0, full, fn);
  }

 private:
  struct Update {
    std::size_t form;
    const std::vector<ElementIndex>* table;
  };
  struct Check {
    std::size_t form;
    bool negated;
  };
  struct State {
    std::vector<ElementIndex> cur;
    std::vector<std::vector<ElementIndex>> snap;
  };

  const std::vector<ElementIndex>& scale_table(std::int64_t c) {
    std::int64_t key = c % static_cast<std::int64_t>(group_.exponent());
    if (key < 0) key += group_.exponent();
    auto it = tables_.find(key);
    if (it == tables_.end()) {
      std::vector<ElementIndex> table(group_.order());
      for (ElementIndex g = 0; g < group_.order(); ++g) table[g] = group_.scale(key, g);
      it = tables_.emplace(key, std::move(table)).first;
    }
    return it->second;
  }

  State fresh_state() const {
    State s;
    s.cur = base_;
    s.snap.resize(levels());
    for (std::size_t l = 0; l < levels(); ++l) s.snap[l].resize(updates_[l].size());
    return s;
  }

  void snapshot(State& s, std::size_t level) const {
    const auto& ups = updates_[level];
    for (std::size_t i = 0; i < ups.size(); ++i) s.snap[level][i] = s.cur[ups[i].form];
  }

  // Undo the level's updates so the caller's next snapshot sees its own values.
  void restore(State& s, std::size_t level) const {
    const auto& ups = updates_[level];
    for (std::size_t i = 0; i < ups.size(); ++i) s.cur[ups[i].form] = s.snap[level][i];
  }

  bool bind(State& s, std::size_t level, ElementIndex g) const {
    const auto& ups = updates_[level];
    const auto& snap = s.snap[level];
    for (std::size_t i = 0; i < ups.size(); ++i) s.cur[ups[i].form] = group_.add(snap[i], (*ups[i].table)[g]);
    for (const Check& c : checks_[level]) {
      if (subset_.contains(s.cur[c.form]) == c.negated) return false;
    }
    return true;
  }

  std::uint64_t descend(State& s, std::size_t level) const {
    if (tail_[level] != 0) return tail_[level];
    snapshot(s, level);
    std::uint64_t total = 0;
    const ElementIndex order = group_.order();
    for (ElementIndex g = 0; g < order; ++g) {
      if (bind(s, level, g)) total += descend(s, level + 1);
    }
    restore(s, level);
    return total;
  }

  void walk(State& s, std::size_t level, std::vector<ElementIndex>& full,
            const std::function<void(std::span<const ElementIndex>)>& fn) const {
    if (level == levels()) {
      fn(full);
      return;
    }
    snapshot(s, level);
    for (ElementIndex g = 0; g < group_.order(); ++g) {
      if (!bind(s, level, g)) continue;
      full[free_vars_[level]] = g;
      walk(s, level + 1, full, fn);
    }
    restore(s, level);
  }

  const FiniteAbelianGroup& group_;
  const GroupSubset& subset_;
  std::vector<std::size_t> free_vars_;
  std::vector<ElementIndex> base_;
  std::vector<std::vector<Update>> updates_;
  std::vector<std::vector<Check>> checks_;
  std::vector<std::uint64_t> tail_;
  std::map<std::int64_t, std::vector<ElementIndex>> tables_;
  bool constant_fail_ = false;
};

std::size_t free_count(const PartialAssignment& fixed) {
  return static_cast<std::size_t>(std::count(fixed.begin(), fixed.end(), std::nullopt));
}

void check_budget(const LinearSystem& system, const GroupSubset& a, std::size_t free_vars,
                  const ExecutionOptions& options) {
  const long double work =
      std::pow(static_cast<long double>(a.group()->order()), static_cast<long double>(free_vars)) *
      static_cast<long double>(system.size());
  if (work > static_cast<long double>(options.work_budget)) {
    fail(ErrorCode::cap_exceeded, "exact evaluation needs about " + std::to_string(static_cast<double>(work)) +
                                      " form evaluations, above the work budget of " +
                                      std::to_string(options.work_budget) + "; use estimate_density instead");
  }
}

}  // namespace

SatisfyingCount count_satisfying(const LinearSystem& system, const GroupSubset& a, const PartialAssignment& fixed,
                                 const ExecutionOptions& options) {
  const std::size_t free_vars = free_count(fixed);
  check_budget(system, a, free_vars, options);
  Enumerator e(system, a, fixed);
  return SatisfyingCount{BigInt(e.count(options.threads)), free_vars};
}

Rational eval_density_fixed(const LinearSystem& system, const GroupSubset& a, const PartialAssignment& fixed,
                            const ExecutionOptions& options) {
  SatisfyingCount c = count_satisfying(system, a, fixed, options);
  return Rational(c.count, pow(BigInt(a.group()->order()), static_cast<unsigned>(c.free_variables)));
}

Rational eval_density(const LinearSystem& system, const GroupSubset& a, const ExecutionOptions& options) {
  return eval_density_fixed(system, a, PartialAssignment(system.arity()), options);
}

void for_each_satisfying(const LinearSystem& system, const GroupSubset& a, const PartialAssignment& fixed,
                         const std::function<void(std::span<const ElementIndex>)>& visit,
                         const ExecutionOptions& options) {
  check_budget(system, a, free_count(fixed), options);
  Enumerator e(system, a, fixed);
  e.visit(fixed, visit);
}

DensityEstimate estimate_density(const LinearSystem& system, const GroupSubset& a, std::uint64_t samples,
                                 std::uint64_t seed, const ExecutionOptions& options) {
  if (samples == 0) fail(ErrorCode::invalid_argument, "estimate_density needs samples >= 1");
  constexpr std::uint64_t kChunk = 4096;
  const auto& group = *a.group();
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  auto parts = map_blocks(chunks, options.threads, [&](std::size_t lo, std::size_t hi) {
    std::uint64_t hits = 0;
    std::vector<ElementIndex> assignment(system.arity());
    for (std::size_t c = lo; c < hi; ++c) {
      auto engine = make_engine(seed, c);
      const std::uint64_t n = std::min<std::uint64_t>(kChunk, samples - c * kChunk);
      for (std::uint64_t i = 0; i < n; ++i) {
        for (auto& x : assignment) x = static_cast<ElementIndex>(uniform_below(engine, group.order()));
        bool ok = std::all_of(system.forms().begin(), system.forms().end(), [&](const LinearForm& f) {
          return a.contains(eval_form(f, group, assignment)) != f.negated;
        });
        hits += ok ? 1 : 0;
      }
    }
    return hits;
  });
  DensityEstimate out;
  out.samples = samples;
  for (auto h : parts) out.hits += h;
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(samples);
  out.radius = std::sqrt(std::log(200.0) / (2.0 * static_cast<double>(samples)));
  return out;
}

Rational eval_quantum(const QuantumSystem& q, const GroupSubset& a, const ExecutionOptions& options) {
  std::unordered_map<std::string, Rational> memo;
  Rational total = 0;
  for (const QuantumTerm& term : q.terms) {
    Rational product = 1;
    for (const LinearSystem& factor : term.factors) {
      const std::string key = std::to_string(factor.arity()) + to_string(factor);
      auto it = memo.find(key);
      if (it == memo.end()) it = memo.emplace(key, eval_density(factor, a, options)).first;
      product *= it->second;
      if (product == 0) break;
    }
    total += Rational(term.coefficient) * product;
  }
  return total;
}

CanonicalSystem canonicalize(const LinearSystem& system) {
  std::vector<LinearForm> forms = system.forms();
  std::sort(forms.begin(), forms.end());
  const std::size_t before = forms.size();
  forms.erase(std::unique(forms.begin(), forms.end()), forms.end());
  CanonicalSystem out{LinearSystem(system.arity(), forms), {}, false};
  if (forms.size() != before) {
    out.diagnostics.push_back("removed " + std::to_string(before - forms.size()) + " duplicate form(s)");
  }
  for (const auto& f : forms) {
    if (f.negated) continue;
    LinearForm neg = f;
    neg.negated = true;
    if (std::binary_search(forms.begin(), forms.end(), neg)) {
      out.contradictory = true;
      out.diagnostics.push_back("form " + to_string(f) + " occurs both plain and negated; density is 0");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// DSL

namespace {

struct ParsedForm {
  std::map<std::size_t, BigInt> coefficients;  // 1-based variable index
  bool negated = false;
};

std::size_t parse_variable(text::Cursor& cur) {
  const std::size_t line = cur.line(), column = cur.column();
  std::string name = cur.identifier();
  if (name.size() < 2 || name[0] != 'g' || !std::isdigit(static_cast<unsigned char>(name[1]))) {
    throw ParseError("expected variable g<index> but found '" + name + "'", line, column);
  }
  std::size_t index = std::stoul(name.substr(1));
  if (index == 0) throw ParseError("variables are numbered from g1", line, column);
  return index;
}

void parse_sum(text::Cursor& cur, ParsedForm& form) {
  BigInt constant = 0;
  bool first = true;
  while (true) {
    int sign = 1;
    if (cur.accept('-')) {
      sign = -1;
    } else if (!cur.accept('+')) {
      if (!first) break;
    }
    first = false;
    if (cur.peek_digit()) {
      BigInt c = cur.integer();
      bool starred = cur.accept('*');
      if (starred || cur.peek() == 'g') {
        form.coefficients[parse_variable(cur)] += sign * c;
      } else {
        constant += sign * c;
      }
    } else if (cur.peek() == 'g') {
      form.coefficients[parse_variable(cur)] += sign;
    } else {
      cur.error("expected a term");
    }
  }
  if (constant != 0) cur.error("linear forms cannot carry a nonzero constant term");
}

ParsedForm parse_form(text::Cursor& cur) {
  ParsedForm form;
  if (cur.accept('!')) {
    form.negated = true;
    if (cur.accept('(')) {
      parse_sum(cur, form);
      cur.expect(')');
      return form;
    }
  }
  parse_sum(cur, form);
  return form;
}

LinearSystem parse_system_at(text::Cursor& cur, std::optional<std::size_t> arity) {
  cur.expect('[');
  std::vector<ParsedForm> parsed;
  do {
    parsed.push_back(parse_form(cur));
  } while (cur.accept(';'));
  cur.expect(']');
  std::size_t max_index = 0;
  for (const auto& f : parsed) {
    for (const auto& [v, c] : f.coefficients) {
      if (c != 0) max_index = std::max(max_index, v);
    }
  }
  std::size_t k = arity.value_or(std::max<std::size_t>(max_index, 1));
  if (max_index > k) cur.error("variable g" + std::to_string(max_index) + " exceeds arity " + std::to_string(k));
  std::vector<LinearForm> forms;
  for (const auto& f : parsed) {
    LinearForm form{std::vector<std::int64_t>(k, 0), f.negated};
    for (const auto& [v, c] : f.coefficients) {
      if (c > INT64_MAX || c < INT64_MIN) cur.error("coefficient out of range");
      form.coefficients[v - 1] = static_cast<std::int64_t>(c);
    }
    forms.push_back(std::move(form));
  }
  return LinearSystem(k, std::move(forms));
}

}  // namespace

LinearSystem parse_system(std::string_view input, std::optional<std::size_t> arity) {
  text::Cursor cur(input);
  LinearSystem s = parse_system_at(cur, arity);
  cur.expect_end();
  return s;
}

QuantumSystem parse_quantum(std::string_view input) {
  text::Cursor cur(input);
  QuantumSystem q;
  bool first = true;
  while (first || !cur.at_end()) {
    int sign = 1;
    if (cur.accept('-')) {
      sign = -1;
    } else if (!cur.accept('+') && !first) {
      cur.error("expected '+' or '-' between terms");
    }
    first = false;
    QuantumTerm term{1, {}};
    bool has_coefficient = false;
    if (cur.peek_digit()) {
      term.coefficient = cur.integer();
      has_coefficient = true;
      cur.accept('*');
    }
    if (cur.peek() == '[') {
      do {
        term.factors.push_back(parse_system_at(cur, std::nullopt));
      } while (cur.accept('*'));
    } else if (!has_coefficient) {
      cur.error("expected a coefficient or a system");
    }
    term.coefficient *= sign;
    q.terms.push_back(std::move(term));
  }
  return q;
}

std::string to_string(const LinearForm& form) {
  std::string sum;
  for (std::size_t i = 0; i < form.coefficients.size(); ++i) {
    std::int64_t c = form.coefficients[i];
    if (c == 0) continue;
    if (c < 0) {
      sum += '-';
    } else if (!sum.empty()) {
      sum += '+';
    }
    std::uint64_t mag = c < 0 ? static_cast<std::uint64_t>(-(c + 1)) + 1 : static_cast<std::uint64_t>(c);
    if (mag != 1) sum += std::to_string(mag);
    sum += "g" + std::to_string(i + 1);
  }
  if (sum.empty()) sum = "0";
  return form.negated ? "!(" + sum + ")" : sum;
}

std::string to_string(const LinearSystem& system) {
  std::string out = "[";
  for (std::size_t i = 0; i < system.forms().size(); ++i) {
    if (i) out += "; ";
    out += to_string(system.forms()[i]);
  }
  return out + "]";
}

std::string to_string(const QuantumSystem& q) {
  if (q.terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < q.terms.size(); ++i) {
    const auto& term = q.terms[i];
    BigInt mag = boost::multiprecision::abs(term.coefficient);
    if (term.coefficient < 0) {
      out += i ? " - " : "-";
    } else if (i) {
      out += " + ";
    }
    if (mag != 1 || term.factors.empty()) out += mag.str();
    for (std::size_t j = 0; j < term.factors.size(); ++j)
      out += (j || mag != 1 ? "*" : "") + to_string(term.factors[j]);
  }
  return out;
}

}  // namespace addforms
