#include "addforms/bounds.hpp"
#include "addforms/error.hpp"
#include "addforms/polynomial.hpp"

#include <doctest.h>

#include <random>

using namespace addforms;

TEST_CASE("Bollobas h") {
  CHECK(bollobas_h(Rational(1, 2)) == 0);
  CHECK(bollobas_h(Rational(2, 3)) == Rational(2, 9));
  CHECK(bollobas_h(1) == 1);
  CHECK(bollobas_h(0) == 0);
  CHECK(bollobas_h_function().branch_of(Rational(2, 3)) == 3);
  CHECK_THROWS_AS(bollobas_h(Rational(3, 2)), Error);
  for (unsigned t = 1; t <= 40; ++t) {
    const Rational x = Rational(1) - Rational(1, t);
    CHECK(bollobas_h(x) == Rational((t - 1) * (t - 2), t * t));
    if (t >= 2) CHECK(bollobas_h_function().agree_at(x, t - 1, t));
  }
  Rational prev = -1;
  for (int i = 0; i <= 500; ++i) {
    Rational v = bollobas_h(Rational(i, 500));
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(in_region_graph(Rational(1, 2), 0));
  CHECK(in_region_graph(1, 1));
  CHECK_FALSE(in_region_graph(1, Rational(1, 2)));
}

TEST_CASE("energy upper bound") {
  CHECK(energy_upper_bound(Rational(1, 2)) == Rational(1, 8));
  CHECK(energy_upper_bound(Rational(2, 5)) == Rational(36, 625));
  CHECK(energy_upper_bound(0) == 0);
  for (int n = 1; n <= 100; ++n) CHECK(energy_upper_bound(Rational(1, n)) == Rational(1, n * n * n));
  for (int p = 1; p < 60; ++p) {
    const Rational a(p, 60);
    if (numerator(a) == 1) continue;
    CHECK(energy_upper_bound(a) < pow(a, 3));
    CHECK(delta(a) == pow(a, 3) - energy_upper_bound(a));
    CHECK(delta(a) > 0);
  }
  CHECK(in_region_energy(Rational(1, 2), Rational(1, 8)));
  CHECK_FALSE(in_region_energy(Rational(1, 2), Rational(1, 7)));
}

TEST_CASE("delta calculus") {
  for (int n = 1; n <= 10; ++n) CHECK(delta(Rational(1, n)) == 0);
  CHECK(delta(Rational(2, 5)) == Rational(4, 625));
  CHECK(delta_prime_on_branch(Rational(1, 3), 2) == Rational(1, 9));
  CHECK(delta_double_prime_on_branch(Rational(3, 4), 1) == -2);
  CHECK(delta_function().branch_of(Rational(1, 2)) == 1);
  CHECK(delta_function().branch_of(Rational(2, 5)) == 2);

  // closed forms against the symbolic derivative of the branch polynomial
  for (unsigned t = 1; t <= 8; ++t) {
    const BigInt tt = t;
    IntPolynomial a = IntPolynomial::variable({"x1"}, "x1");
    IntPolynomial d = BigInt(-tt * (tt + 1)) * a.pow(4) + BigInt(2 * tt + 1) * a.pow(3) - a.pow(2);
    IntPolynomial d1 = partial_derivative(d, "x1");
    IntPolynomial d2 = partial_derivative(d1, "x1");
    for (int i = 1; i <= 20; ++i) {
      std::vector<Rational> pt{Rational(i, 21)};
      CHECK(delta_on_branch(pt[0], t) == poly_eval(d, pt));
      CHECK(delta_prime_on_branch(pt[0], t) == poly_eval(d1, pt));
      CHECK(delta_double_prime_on_branch(pt[0], t) == poly_eval(d2, pt));
    }
  }
  // both branches agree at shared endpoints
  for (unsigned t = 1; t <= 30; ++t) CHECK(delta_function().agree_at(Rational(1, t + 1), t, t + 1));
}

TEST_CASE("delta derivative claims on a grid") {
  auto r = verify_delta_derivative_claims(Rational(1, 1000));
  CHECK(r.passed());
  CHECK(r.intervals.size() == 4 + 18);
  CHECK(r.intervals[1].points == 201);
  bool found = false;
  for (const auto& e : r.endpoints) {
    if (e.alpha == Rational(1, 3) && e.branch == 2) {
      found = true;
      CHECK(e.delta_prime == Rational(1, 9));
    }
  }
  CHECK(found);
  CHECK_THROWS_AS(verify_delta_derivative_claims(0), Error);
}

TEST_CASE("inequality checkers") {
  auto z5 = parse_group("Z5");
  auto a = parse_subset_literal(z5, "{0,1}");
  CHECK(check_kneser(a, a).lhs == 0);
  CHECK(check_kneser(GroupSubset(z5), a).lhs == Rational(3, 5));
  CHECK(check_kneser(GroupSubset::full(z5), GroupSubset::full(z5)).lhs == 0);
  auto pr = check_plunnecke_ruzsa(a, a, 1, 1);
  CHECK(pr.lhs == Rational(3, 25));
  CHECK(pr.holds);
  CHECK(check_plunnecke_ruzsa(GroupSubset::full(z5), GroupSubset::full(z5), 2, 1).lhs == 0);
  CHECK_THROWS_AS(check_plunnecke_ruzsa(GroupSubset(z5), a, 1, 1), Error);
  CHECK(check_energy_doubling(a).lhs == Rational(2, 625));
  CHECK(check_energy_doubling(GroupSubset::full(z5)).lhs == 0);

  auto z4 = parse_group("Z4");
  CHECK(check_energy_bound(parse_subset_literal(z4, "{0}")).lhs == 0);
  CHECK(check_energy_bound(parse_subset_literal(z4, "{0,2}")).lhs == 0);
  CHECK(check_energy_bound(parse_subset_literal(z4, "{0,1}")).lhs == Rational(2, 64));
  CHECK_THROWS_AS(check_energy_bound(GroupSubset(z4)), Error);
  auto sub = parse_subset_literal(parse_group("Z6"), "{0,2,4}");
  CHECK(check_energy_doubling(sub).lhs == 0);
  CHECK(check_plunnecke_ruzsa(sub, sub, 2, 2).lhs == 0);
  CHECK_THROWS_AS(check_kneser(a, parse_subset_literal(z4, "{0}")), Error);
}

TEST_CASE("sweeps") {
  auto r = sweep_exhaustive(Inequality::energy_bound, parse_group("Z8"));
  CHECK(r.checked == 256);
  CHECK(r.degenerate == 1);
  CHECK(r.passed());
  CHECK(*r.min_lhs == 0);
  auto k = sweep_exhaustive(Inequality::kneser, parse_group("Z4"), {}, ExecutionOptions{3});
  CHECK(k.checked == 256);
  CHECK(k.passed());
  auto rnd = sweep_random(Inequality::energy_bound, parse_group("Z64"), 200, 9);
  auto rnd4 = sweep_random(Inequality::energy_bound, parse_group("Z64"), 200, 9, {}, ExecutionOptions{4});
  CHECK(rnd.passed());
  CHECK(*rnd.min_lhs == *rnd4.min_lhs);
  CHECK_THROWS_AS(sweep_exhaustive(Inequality::kneser, parse_group("Z40")), Error);
  CHECK(parse_inequality("plunnecke-ruzsa") == Inequality::plunnecke_ruzsa);
  CHECK_FALSE(parse_inequality("nope"));
  auto s = random_subset(parse_group("Z10"), 1, 2);
  CHECK_FALSE(s.empty());
  CHECK(s == random_subset(parse_group("Z10"), 1, 2));
}
