#include "addforms/error.hpp"
#include "addforms/linform.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace addforms;

namespace {

LinearSystem random_system(std::mt19937_64& rng, std::size_t arity) {
  std::uniform_int_distribution<int> coef(-3, 3), count(1, 4);
  std::vector<LinearForm> forms;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    LinearForm f{std::vector<std::int64_t>(arity), (rng() % 4) == 0};
    for (auto& c : f.coefficients) c = coef(rng);
    forms.push_back(f);
  }
  return LinearSystem(arity, forms);
}

Rational oracle_density(const std::vector<std::uint32_t>& m, const LinearSystem& s, const GroupSubset& a) {
  BigInt total = 1;
  for (std::size_t i = 0; i < s.arity(); ++i) total *= a.group()->order();
  return Rational(BigInt(oracle::satisfying(m, s, oracle::members(a))), total);
}

}  // namespace

TEST_CASE("small densities") {
  auto g = parse_group("Z4");
  auto a = parse_subset_literal(g, "{0,2}");
  CHECK(eval_density(parse_system("[g1]"), a) == Rational(1, 2));
  CHECK(eval_density(parse_system("[g1; g2]"), a) == Rational(1, 4));
  CHECK(eval_density(parse_system("[!g1]"), a) == Rational(1, 2));
  CHECK(eval_density(parse_system("[g1; g1+g2]"), a) == Rational(1, 4));
  CHECK(eval_density(parse_system("[2g1]"), a) == 1);
  CHECK(eval_density(parse_system("[0]", 1), a) == 1);
  CHECK(eval_density(parse_system("[!0]", 1), a) == 0);
}

TEST_CASE("normalised additive energy is the density of g1+g2-g3") {
  std::mt19937_64 rng(1);
  auto g = parse_group("Z3 x Z3");
  const auto sys = parse_system("[g1; g2; g3; g1+g2-g3]");
  for (int trial = 0; trial < 10; ++trial) {
    auto a = oracle::random_subset(g, rng);
    CHECK(eval_density(sys, a) == additive_energy(a));
  }
}

TEST_CASE("pruned enumeration agrees with brute force") {
  std::mt19937_64 rng(21);
  for (const auto& m : std::vector<std::vector<std::uint32_t>>{{5}, {6}, {2, 3}, {2, 2}}) {
    auto g = make_group(m);
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t arity = 1 + rng() % 3;
      auto sys = random_system(rng, arity);
      auto a = oracle::random_subset(g, rng);
      const Rational expect = oracle_density(m, sys, a);
      CHECK(eval_density(sys, a) == expect);
      CHECK(eval_density(sys, a, ExecutionOptions{3}) == expect);

      std::uint64_t visited = 0;
      std::vector<ElementIndex> prev;
      for_each_satisfying(sys, a, PartialAssignment(arity), [&](std::span<const ElementIndex> v) {
        std::vector<ElementIndex> cur(v.begin(), v.end());
        if (!prev.empty()) CHECK(prev < cur);
        prev = cur;
        ++visited;
      });
      CHECK(Rational(BigInt(visited), pow(BigInt(g->order()), static_cast<unsigned>(arity))) == expect);
    }
  }
}

TEST_CASE("fixed variables") {
  std::mt19937_64 rng(4);
  auto g = parse_group("Z7");
  const std::vector<std::uint32_t> m{7};
  for (int trial = 0; trial < 20; ++trial) {
    auto sys = random_system(rng, 3);
    auto a = oracle::random_subset(g, rng);
    const ElementIndex x = rng() % 7;
    PartialAssignment fixed(3);
    fixed[1] = x;
    // oracle: substitute g2 = x by brute force over the other two variables
    std::uint64_t hits = 0;
    for (ElementIndex u = 0; u < 7; ++u) {
      for (ElementIndex w = 0; w < 7; ++w) {
        std::vector<ElementIndex> v{u, x, w};
        bool ok = true;
        for (const auto& f : sys.forms()) ok = ok && (a.contains(eval_form(f, *g, v)) != f.negated);
        hits += ok;
      }
    }
    CHECK(eval_density_fixed(sys, a, fixed) == Rational(BigInt(hits), 49));
    auto c = count_satisfying(sys, a, fixed);
    CHECK(c.free_variables == 2);
    CHECK(c.count == hits);
  }
  auto sys = parse_system("[g1; g2]");
  CHECK_THROWS_AS(eval_density_fixed(sys, parse_subset_literal(g, "{1}"), PartialAssignment(3)), Error);
}

TEST_CASE("work budget") {
  auto g = parse_group("Z100");
  auto a = GroupSubset::full(g);
  try {
    eval_density(parse_system("[g1; g2; g3; g4; g5]"), a);
    FAIL("expected cap_exceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::cap_exceeded);
  }
  CHECK(eval_density(parse_system("[g1; g2]"), a, ExecutionOptions{1, 100000}) == 1);
}

TEST_CASE("quantum systems") {
  auto g = parse_group("Z5");
  auto a = parse_subset_literal(g, "{0,1}");
  auto q = parse_quantum("2*[g1]*[g1] - [g1; g2]");
  CHECK(eval_quantum(q, a) == Rational(4, 25));
  CHECK(eval_quantum(parse_quantum("3"), a) == 3);
  CHECK(eval_quantum(parse_quantum("[g1] - [!g1]"), a) == Rational(-1, 5));
  CHECK(to_string(q) == "2*[g1]*[g1] - [g1; g2]");
  CHECK(parse_quantum(to_string(q)) == q);
}

TEST_CASE("system DSL") {
  auto s = parse_system("[!(3g1); g2-2g1; 2g2-4g1]");
  CHECK(s.arity() == 2);
  CHECK(s.size() == 3);
  CHECK(s.forms()[0].negated);
  CHECK(s.forms()[0].coefficients == std::vector<std::int64_t>{3, 0});
  CHECK(s.forms()[2].coefficients == std::vector<std::int64_t>{-4, 2});
  CHECK(to_string(s) == "[!(3g1); -2g1+g2; -4g1+2g2]");
  CHECK(parse_system(to_string(s)) == s);
  CHECK(parse_system("[g1]", 3).arity() == 3);
  CHECK(parse_system("[g1 + g1 - 2g1]", 1).forms()[0].is_zero());

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    auto r = random_system(rng, 1 + rng() % 4);
    CHECK(parse_system(to_string(r), r.arity()) == r);
  }

  CHECK_THROWS_AS(parse_system("[g1; ]"), ParseError);
  CHECK_THROWS_AS(parse_system("g1"), ParseError);
  CHECK_THROWS_AS(parse_system("[g0]"), ParseError);
  CHECK_THROWS_AS(parse_system("[g1 + 1]"), ParseError);
  CHECK_THROWS_AS(parse_system("[g3]", 2), Error);
  try {
    parse_system("[g1;\n  g2 +* g1]");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() > 1);
  }
}

TEST_CASE("canonical form") {
  auto c = canonicalize(parse_system("[g2; g1; g2; !g1]"));
  CHECK(c.system.size() == 3);
  CHECK(c.contradictory);
  CHECK_FALSE(c.diagnostics.empty());
  auto d = canonicalize(parse_system("[g2; g1]"));
  CHECK_FALSE(d.contradictory);
  CHECK(d.system == canonicalize(parse_system("[g1; g2]")).system);
}

TEST_CASE("Monte Carlo estimates") {
  auto g = parse_group("Z100");
  auto a = GroupSubset::from_predicate(g, [](ElementIndex x) { return x < 50; });
  auto sys = parse_system("[g1]");
  auto e1 = estimate_density(sys, a, 20000, 42);
  auto e4 = estimate_density(sys, a, 20000, 42, ExecutionOptions{4});
  CHECK(e1.hits == e4.hits);
  CHECK(e1.samples == 20000);
  CHECK(e1.radius == doctest::Approx(std::sqrt(std::log(200.0) / 40000.0)));
  CHECK(std::abs(e1.estimate - 0.5) <= e1.radius);
  CHECK(estimate_density(sys, a, 20000, 43).hits != e1.hits);
}
