#include "addforms/error.hpp"
#include "addforms/reduction.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace addforms;

namespace {

// Fixed-g density by brute force over the free trailing variables.
Rational brute_fixed(const LinearSystem& sys, const GroupSubset& a, const std::vector<ElementIndex>& g) {
  const auto& grp = *a.group();
  const std::size_t free = sys.arity() - g.size();
  std::vector<ElementIndex> v(g);
  v.resize(sys.arity(), 0);
  std::uint64_t hits = 0, total = 0;
  while (true) {
    bool ok = true;
    for (const auto& f : sys.forms()) ok = ok && (a.contains(eval_form(f, grp, v)) != f.negated);
    hits += ok;
    ++total;
    std::size_t i = g.size();
    while (i < v.size() && ++v[i] == grp.order()) v[i++] = 0;
    if (i == v.size()) break;
  }
  (void)free;
  return Rational(BigInt(hits), BigInt(total));
}

}  // namespace

TEST_CASE("builder form counts") {
  CHECK(to_string(build_L(2)) == "[!(3g1); -2g1+g2; -4g1+2g2; -6g1+3g2; -8g1+4g2]");
  CHECK(build_L(1).size() == 1);
  CHECK_THROWS_AS(build_L(0), Error);
  for (unsigned k = 2; k <= 6; ++k) {
    const std::size_t l = 1 + (k + 2) * (k - 1);
    CHECK(build_L(k).size() == l);
    CHECK(build_M(k).size() == l + k);
    for (unsigned j = 1; j <= k; ++j) {
      CHECK(build_V(k, j).size() == l + k + l);
      CHECK(build_V(k, j).arity() == k + 1);
      CHECK(build_E(k, j).size() == l + k + 3 * l + 1);
      CHECK(build_E(k, j).arity() == k + 2);
      CHECK(build_T(k, j).size() == l + k + 6 * l + 3);
      CHECK(build_T(k, j).arity() == k + 3);
    }
  }
  CHECK_THROWS_AS(build_V(2, 3), Error);
  CHECK_THROWS_AS(build_V(2, 0), Error);
}

TEST_CASE("substitution replaces g_j") {
  // L(g, 2, z) for k = 2 in layout (g1, g2, z)
  auto l = build_L_sub(2, 2, 2, 3);
  CHECK(to_string(l) == "[!(3g1); -2g1+g3; -4g1+2g3; -6g1+3g3; -8g1+4g3]");
  auto e = build_E(2, 1);
  // last form is g1 + z - z'
  CHECK(e.forms().back().coefficients == std::vector<std::int64_t>{1, 0, 1, -1});
}

TEST_CASE("pinpoint lemma") {
  for (unsigned k = 2; k <= 3; ++k) {
    auto r = verify_pinpoint(k);
    CHECK(r.passed());
    CHECK(r.checked == (k == 2 ? 81u : 4096u));
    CHECK(r.m_satisfied == 1);
  }
  std::vector<ElementIndex> intended{1, 2, 3};
  auto s = GroupSubset::from_predicate(make_group({16}), [](ElementIndex x) { return x <= 3; });
  CHECK(m_in_subset(3, s, intended));
  CHECK_THROWS_AS(verify_pinpoint(1), Error);
  try {
    verify_pinpoint(5);
    FAIL("expected cap");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::cap_exceeded);
  }
}

TEST_CASE("psi expansion") {
  auto b = build_psi(parse_polynomial("x1 - y1"), 1);
  REQUIRE(b.psi_terms.size() == 2);
  CHECK(b.psi_terms[0].coefficient == 1);
  CHECK(b.psi_terms[0].factors.size() == 2);
  CHECK(b.psi_terms[1].coefficient == -1);
  CHECK(b.psi_terms[1].factors.size() == 1);
  CHECK(b.psi_terms[1].factors[0].block == 'T');

  auto sq = build_psi(parse_polynomial("x1^2"), 1);
  REQUIRE(sq.psi_terms.size() == 1);
  std::string blocks;
  for (auto f : sq.psi_terms[0].factors) blocks += f.block;
  CHECK(blocks == "VVEE");

  auto c = build_psi(parse_polynomial("7"), 2);
  REQUIRE(c.psi_terms.size() == 1);
  CHECK(c.psi_terms[0].factors.empty());
  auto g = parse_group("Z4");
  CHECK(eval_reduction(c, parse_subset_literal(g, "{1}")) == 7);
  CHECK(eval_reduction(c, GroupSubset(g)) == 7);
}

TEST_CASE("evaluation paths agree") {
  std::mt19937_64 rng(31);
  auto g = parse_group("Z5");
  for (const char* q : {"x1 - y1", "x1^2 - 2*y1 + 1", "3*x1*y1"}) {
    auto b = build_psi(parse_polynomial(q), 1);
    for (int trial = 0; trial < 3; ++trial) {
      auto a = oracle::random_subset(g, rng);
      CHECK(eval_reduction(b, a) == eval_qstar_at_densities(b, a));
      // shared g by brute force
      Rational sum = 0;
      for (ElementIndex x = 0; x < g->order(); ++x) {
        std::vector<ElementIndex> gv{x};
        std::vector<Rational> pt{brute_fixed(b.V[0], a, gv), brute_fixed(b.E[0], a, gv), brute_fixed(b.T[0], a, gv)};
        sum += poly_eval(b.qstar, pt);
      }
      CHECK(eval_reduction_shared_g(b, a) == sum / 5);
    }
  }
  // A = G: the negated form fails everywhere, so every factor density is 0
  auto b = build_psi(parse_polynomial("x1 - y1"), 1);
  CHECK(eval_reduction(b, GroupSubset::full(g)) == 0);
}

TEST_CASE("graph densities") {
  auto z2 = parse_group("Z2");
  auto r = graph_densities({GroupSubset::full(z2), parse_subset_literal(z2, "{0}")});
  CHECK(r.k2 == Rational(1, 2));
  CHECK(r.k3 == Rational(1, 4));
  auto z3 = parse_group("Z3");
  auto t = graph_densities({GroupSubset::full(z3), parse_subset_literal(z3, "{1,2}")});
  CHECK(t.k2 == Rational(2, 3));
  CHECK(t.k3 == Rational(2, 9));
  auto e = graph_densities({GroupSubset::full(z3), GroupSubset(z3)});
  CHECK(e.k2 == 0);
  CHECK(e.k3 == 0);
  CHECK_THROWS_AS(graph_densities({GroupSubset(z3), GroupSubset(z3)}), Error);
}

TEST_CASE("B_j and C_j against the V_j definition") {
  std::mt19937_64 rng(33);
  auto g = parse_group("Z9 x Z2");
  for (int trial = 0; trial < 40; ++trial) {
    auto a = oracle::random_subset(g, rng);
    std::vector<ElementIndex> gv{static_cast<ElementIndex>(rng() % 18), static_cast<ElementIndex>(rng() % 18)};
    for (unsigned j = 1; j <= 2; ++j) {
      auto u = compute_B_C(a, gv, j);
      auto v = build_V(2, j);
      for (ElementIndex z = 0; z < g->order(); ++z) {
        std::vector<ElementIndex> full{gv[0], gv[1], z};
        bool in = true;
        for (const auto& f : v.forms()) in = in && (a.contains(eval_form(f, *g, full)) != f.negated);
        CHECK(u.vertices.contains(z) == in);
        const ElementIndex shifted = g->add(z, gv[j - 1]);
        CHECK(u.connection.contains(z) == (a.contains(shifted) && u.vertices.contains(shifted)));
      }
      if (!m_in_subset(2, a, gv)) {
        CHECK(u.vertices.empty());
        CHECK(verify_homdensity_identity(a, gv, j).vacuous);
      }
    }
  }
}

TEST_CASE("homomorphism density identity") {
  auto r = verify_homdensity_random(parse_group("Z9 x Z2"), 2, 10, 5);
  CHECK(r.checks == 20);
  CHECK(r.passed());
  auto full = GroupSubset::full(parse_group("Z9"));
  std::vector<ElementIndex> gv{1, 2};
  auto v = verify_homdensity_identity(full, gv, 1);
  CHECK(v.vacuous);
  CHECK(v.holds());
  CHECK(v.v_density == 0);
}

TEST_CASE("witness construction") {
  auto w = build_witness(2, {3, 3});
  CHECK(w.group->order() == 81);
  CHECK(w.subset.size() == 21);
  for (unsigned j = 0; j < 2; ++j) CHECK(w.h_subgroups[j].density() == Rational(1, 3));
  auto w2 = build_witness(2, {2, 2});
  CHECK(w2.group->order() == 36);
  CHECK(w2.subset.size() == 8);
  CHECK_THROWS_AS(build_witness(2, {3}), Error);
  CHECK_THROWS_AS(build_witness(2, {3, 1}), Error);
  try {
    build_witness(3, {64, 64, 64}, 1 << 20);
    FAIL("expected cap");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::cap_exceeded);
  }
}

TEST_CASE("witness verification and measured triangle densities") {
  for (std::uint32_t n : {2u, 3u, 4u}) {
    auto spec = build_witness(2, {n, n});
    auto r = verify_witness(spec, n == 3);
    CHECK(r.passed());
    CHECK(r.good_g == (n - 1) * n * (n - 1) * n);
    for (const auto& o : r.observations) {
      // Oracle from the slice description: B = {j} x H, C = {0} x ((H \ H_j) - h).
      const auto& h = *spec.h;
      const ElementIndex hidx = o.g[o.j - 1] % h.order();
      std::uint64_t tri = 0;
      auto in_c = [&](ElementIndex d) { return h.residue(h.add(d, hidx), o.j - 1) != 0; };
      for (ElementIndex z = 0; z < h.order(); ++z)
        for (ElementIndex z1 = 0; z1 < h.order(); ++z1)
          for (ElementIndex z2 = 0; z2 < h.order(); ++z2)
            tri += in_c(h.subtract(z, z1)) && in_c(h.subtract(z1, z2)) && in_c(h.subtract(z2, z));
      const BigInt hn = h.order();
      CHECK(o.k3 == Rational(BigInt(tri), hn * hn * hn));
      CHECK(o.k2 == Rational(n - 1, n));
    }
  }
  auto r3 = verify_witness(build_witness(2, {3, 3}));
  CHECK(r3.k3_agrees[0]);
  CHECK(r3.k3_agrees[1]);
  auto r2 = verify_witness(build_witness(2, {2, 2}));
  CHECK_FALSE(r2.k3_agrees[0]);
  REQUIRE(r2.k3_classes.size() == 2);
  CHECK(r2.k3_classes[0].k3 == Rational(1, 4));
}
