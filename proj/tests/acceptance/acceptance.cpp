// Acceptance suite: one PASS/FAIL line per criterion.
#include <addforms/addforms.h>

#include "addforms/abelian.hpp"
#include "addforms/bounds.hpp"
#include "addforms/fourier.hpp"
#include "addforms/linform.hpp"
#include "addforms/polynomial.hpp"
#include "addforms/reduction.hpp"
#include "addforms/report.hpp"

#include "../unit/random_poly.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace addforms;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Oracles on residue tuples, independent of the library's index arithmetic.
namespace oracle {

using Tuple = std::vector<std::int64_t>;

struct Group {
  std::vector<std::int64_t> moduli;
  std::vector<Tuple> elements;  // elements[i] = residues of library index i
  std::map<Tuple, std::size_t> index;

  explicit Group(const FiniteAbelianGroup& g) {
    moduli.assign(g.moduli().begin(), g.moduli().end());
    for (ElementIndex i = 0; i < g.order(); ++i) {
      auto r = g.residues(i);
      elements.emplace_back(r.begin(), r.end());
      index[elements.back()] = i;
    }
  }
  std::size_t order() const { return elements.size(); }
  Tuple combine(const Tuple& a, const Tuple& b, std::int64_t sign) const {
    Tuple out(a.size());
    for (std::size_t t = 0; t < a.size(); ++t) out[t] = ((a[t] + sign * b[t]) % moduli[t] + moduli[t]) % moduli[t];
    return out;
  }
};

// Number of (a1, a2, a3, a4) in A^4 with a1 + a2 = a3 + a4.
std::uint64_t energy(const Group& g, const std::vector<bool>& in) {
  std::uint64_t count = 0;
  for (std::size_t a = 0; a < g.order(); ++a) {
    if (!in[a]) continue;
    for (std::size_t b = 0; b < g.order(); ++b) {
      if (!in[b]) continue;
      const Tuple s = g.combine(g.elements[a], g.elements[b], 1);
      for (std::size_t c = 0; c < g.order(); ++c) {
        if (in[c] && in[g.index.at(g.combine(s, g.elements[c], -1))]) ++count;
      }
    }
  }
  return count;
}

std::vector<bool> sumset(const Group& g, const std::vector<bool>& a, const std::vector<bool>& b, std::int64_t sign = 1) {
  std::vector<bool> out(g.order(), false);
  for (std::size_t x = 0; x < g.order(); ++x)
    for (std::size_t y = 0; y < g.order(); ++y)
      if (a[x] && b[y]) out[g.index.at(g.combine(g.elements[x], g.elements[y], sign))] = true;
  return out;
}

std::size_t size(const std::vector<bool>& a) { return static_cast<std::size_t>(std::count(a.begin(), a.end(), true)); }

std::vector<bool> stabilizer(const Group& g, const std::vector<bool>& s) {
  std::vector<bool> out(g.order(), false);
  for (std::size_t h = 0; h < g.order(); ++h) {
    bool fixes = true;
    for (std::size_t x = 0; x < g.order() && fixes; ++x)
      if (s[x]) fixes = s[g.index.at(g.combine(g.elements[x], g.elements[h], 1))];
    out[h] = fixes;
  }
  return out;
}

std::vector<bool> from_subset(const GroupSubset& a) {
  std::vector<bool> in(a.group()->order(), false);
  for (auto x : a.elements()) in[x] = true;
  return in;
}

// |A| = m in a group of order n: n^3 * (alpha^3 - alpha^4 ({1/alpha} - {1/alpha}^2)) * n
// equals m^3 n - m^2 r (m - r) with r = n mod m.
bool energy_bound_holds(std::uint64_t raw, std::uint64_t m, std::uint64_t n) {
  const std::uint64_t r = n % m;
  return raw * n <= m * m * m * n - m * m * r * (m - r);
}

}  // namespace oracle

GroupSubset mask_subset(const GroupPtr& g, std::uint64_t mask) { return GroupSubset::from_mask(g, mask); }

// ---------------------------------------------------------------------------

Outcome criterion1(const ExecutionOptions& opt) {
  const auto start = Clock::now();
  Outcome o;
  double worst = 0;
  std::uint64_t subsets = 0, exact_mismatch = 0;
  for (std::uint32_t n = 1; n <= 10; ++n) {
    auto g = make_group({n});
    oracle::Group og(*g);
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
      auto a = mask_subset(g, mask);
      const Rational counted = additive_energy(a);
      const double fourier = energy_fourier(a, opt.threads);
      worst = std::max(worst, std::abs(fourier - counted.convert_to<double>()));
      const BigInt n3 = BigInt(n) * n * n;
      if (counted != Rational(BigInt(oracle::energy(og, oracle::from_subset(a))), n3)) ++exact_mismatch;
      ++subsets;
    }
  }
  const double t = seconds_since(start);
  o.pass = worst <= 1e-9 && exact_mismatch == 0 && t < 30;
  std::ostringstream s;
  s << subsets << " subsets, max |fourier - counting| = " << worst << ", exact mismatches " << exact_mismatch << ", "
    << t << " s";
  o.detail = s.str();
  return o;
}

Outcome criterion2(const ExecutionOptions& opt) {
  Outcome o;
  std::uint64_t checked = 0, violations = 0, oracle_disagree = 0;
  for (std::uint32_t n = 1; n <= 10; ++n) {
    auto g = make_group({n});
    oracle::Group og(*g);
    auto sweep = sweep_exhaustive(Inequality::energy_bound, g, {}, opt);
    violations += sweep.violations;
    for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
      auto a = mask_subset(g, mask);
      ++checked;
      const bool expected = oracle::energy_bound_holds(oracle::energy(og, oracle::from_subset(a)), a.size(), n);
      oracle_disagree += check_energy_bound(a).holds != expected;
    }
  }
  // random subsets of groups of order <= 512, mixing cyclic and product groups
  std::mt19937_64 rng(2024);
  const std::vector<std::string> shapes{"Z512", "Z2 x Z256", "Z16 x Z32", "Z3 x Z170", "Z7 x Z7 x Z7", "Z2 x Z2 x Z2 x Z64"};
  for (std::uint64_t i = 0; i < 10000; ++i) {
    GroupPtr g;
    if (i % 2 == 0) {
      g = make_group({static_cast<std::uint32_t>(2 + rng() % 511)});
    } else {
      g = parse_group(shapes[rng() % shapes.size()]);
    }
    auto a = random_subset(g, 77, i);
    const auto r = check_energy_bound(a);
    // representation counts by direct pair loop
    std::vector<std::uint64_t> rep(g->order(), 0);
    const auto el = a.elements();
    for (auto x : el)
      for (auto y : el) ++rep[g->add(x, y)];
    std::uint64_t raw = 0;
    for (auto c : rep) raw += c * c;
    ++checked;
    violations += !r.holds;
    oracle_disagree += r.holds != oracle::energy_bound_holds(raw, a.size(), g->order());
  }
  // tight cases
  std::uint64_t tight_bad = 0;
  for (std::uint32_t n = 2; n <= 50; ++n) {
    auto g = make_group({n});
    auto a = GroupSubset::from_indices(g, std::vector<ElementIndex>{0});
    const Rational expected(1, BigInt(n) * n * n);
    if (additive_energy(a) != expected || check_energy_bound(a).lhs != 0) ++tight_bad;
  }
  o.pass = violations == 0 && oracle_disagree == 0 && tight_bad == 0;
  o.detail = std::to_string(checked) + " instances, " + std::to_string(violations) + " violations, " +
             std::to_string(oracle_disagree) + " oracle disagreements, " + std::to_string(tight_bad) +
             " bad tight cases (n = 2..50)";
  return o;
}

Outcome criterion3(const ExecutionOptions& opt) {
  Outcome o;
  std::uint64_t checked = 0, violations = 0, disagree = 0;
  for (std::uint32_t n = 1; n <= 5; ++n) {
    auto g = make_group({n});
    oracle::Group og(*g);
    for (auto kind : {Inequality::kneser, Inequality::plunnecke_ruzsa}) {
      for (unsigned r = 1; r <= (kind == Inequality::kneser ? 1u : 2u); ++r) {
        for (unsigned s = 1; s <= (kind == Inequality::kneser ? 1u : 2u); ++s) {
          auto sweep = sweep_exhaustive(kind, g, {r, s}, opt);
          violations += sweep.violations;
        }
      }
    }
    for (std::uint64_t ma = 0; ma < (1ULL << n); ++ma) {
      for (std::uint64_t mb = 0; mb < (1ULL << n); ++mb) {
        auto a = mask_subset(g, ma), b = mask_subset(g, mb);
        auto oa = oracle::from_subset(a), ob = oracle::from_subset(b);
        auto ab = oracle::sumset(og, oa, ob);
        auto h = oracle::stabilizer(og, ab);
        const bool kn = oracle::size(ab) + oracle::size(h) >= oracle::size(oa) + oracle::size(ob);
        disagree += check_kneser(a, b).holds != kn;
        ++checked;
        if (a.empty()) continue;
        for (unsigned r = 1; r <= 2; ++r) {
          for (unsigned s = 1; s <= 2; ++s) {
            // rB - sB
            std::vector<bool> it(og.order(), false);
            it[og.index.at(oracle::Tuple(og.moduli.size(), 0))] = true;
            for (unsigned i = 0; i < r; ++i) it = oracle::sumset(og, it, ob);
            for (unsigned i = 0; i < s; ++i) it = oracle::sumset(og, it, ob, -1);
            // |A+B|^(r+s) n^0 >= |A|^(r+s-1) |rB - sB|, all divided by n^(r+s)
            const BigInt lhs = pow(BigInt(oracle::size(ab)), r + s);
            const BigInt rhs = pow(BigInt(oracle::size(oa)), r + s - 1) * BigInt(oracle::size(it));
            disagree += check_plunnecke_ruzsa(a, b, r, s).holds != (lhs >= rhs);
            ++checked;
          }
        }
      }
    }
  }
  for (std::uint32_t n = 1; n <= 12; ++n) {
    auto g = make_group({n});
    auto sweep = sweep_exhaustive(Inequality::energy_doubling, g, {}, opt);
    violations += sweep.violations;
    checked += sweep.checked;
  }
  o.pass = violations == 0 && disagree == 0;
  o.detail = std::to_string(checked) + " instances, " + std::to_string(violations) + " violations, " +
             std::to_string(disagree) + " oracle disagreements";
  return o;
}

Outcome criterion4(const ExecutionOptions& opt) {
  Outcome o;
  std::vector<std::string> groups;
  for (int n = 1; n <= 10; ++n) groups.push_back("Z" + std::to_string(n));
  for (const char* p : {"Z2 x Z2", "Z2 x Z3", "Z2 x Z4", "Z2 x Z2 x Z2", "Z3 x Z3", "Z2 x Z5", "Z1 x Z7"}) {
    groups.emplace_back(p);
  }
  const LinearSystem sys = parse_system("[g1; g2; g3; g1+g2-g3]");
  std::uint64_t checked = 0, mismatches = 0;
  for (const auto& text : groups) {
    auto g = parse_group(text);
    oracle::Group og(*g);
    const BigInt n3 = BigInt(g->order()) * g->order() * g->order();
    for (std::uint64_t mask = 0; mask < (1ULL << g->order()); ++mask) {
      auto a = mask_subset(g, mask);
      const Rational t = eval_density(sys, a, opt);
      const Rational oracle_energy(BigInt(oracle::energy(og, oracle::from_subset(a))), n3);
      mismatches += (t != additive_energy(a)) + (t != oracle_energy);
      ++checked;
    }
  }
  o.pass = mismatches == 0;
  o.detail = std::to_string(checked) + " subsets over " + std::to_string(groups.size()) + " groups, " +
             std::to_string(mismatches) + " mismatches";
  return o;
}

Outcome criterion5(const ExecutionOptions& opt) {
  Outcome o;
  std::ostringstream s;
  const std::uint64_t expected[] = {81, 4096, 390625};
  ExecutionOptions four = opt;
  four.threads = 4;
  for (unsigned k = 2; k <= 4; ++k) {
    const auto start = Clock::now();
    auto r = verify_pinpoint(k, 4, four);
    const double t = seconds_since(start);
    const bool ok = r.passed() && r.checked == expected[k - 2] && r.m_satisfied == 1 && (k < 4 || t < 10);
    o.pass = o.pass && ok;
    s << "k=" << k << ": " << r.checked << " checked, " << r.violations << " violations";
    if (k == 4) s << ", " << t << " s";
    s << (k < 4 ? "; " : "");
  }
  o.detail = s.str();
  return o;
}

Outcome criterion6(const ExecutionOptions& opt) {
  Outcome o;
  std::ostringstream s;
  struct Case {
    const char* group;
    unsigned k;
  };
  for (auto c : {Case{"Z9 x Z2", 2}, Case{"Z9 x Z3", 2}, Case{"Z16 x Z2", 3}}) {
    auto r = verify_homdensity_random(parse_group(c.group), c.k, 50, 13, opt);
    const bool ok = r.passed() && r.pairs == 50 && r.checks == 50 * c.k;
    o.pass = o.pass && ok;
    s << c.group << " k=" << c.k << ": " << r.checks << " checks, " << r.k2_mismatches + r.k3_mismatches
      << " mismatches; ";
  }
  o.detail = s.str();
  o.detail.resize(o.detail.size() - 2);
  return o;
}

Outcome criterion7(const ExecutionOptions& opt) {
  Outcome o;
  auto spec = build_witness(2, {3, 3});
  auto r = verify_witness(spec, true, opt);
  const auto& h = *spec.h;
  std::uint64_t k2_bad = 0, k3_oracle_bad = 0;
  std::map<Rational, std::uint64_t> k3_seen;
  for (const auto& ob : r.observations) {
    if (ob.k2 != Rational(2, 3)) ++k2_bad;
    const ElementIndex hidx = ob.g[ob.j - 1] % h.order();
    auto in_c = [&](ElementIndex d) { return h.residue(h.add(d, hidx), ob.j - 1) != 0; };
    std::uint64_t tri = 0;
    for (ElementIndex z = 0; z < h.order(); ++z)
      for (ElementIndex z1 = 0; z1 < h.order(); ++z1)
        for (ElementIndex z2 = 0; z2 < h.order(); ++z2)
          tri += in_c(h.subtract(z, z1)) && in_c(h.subtract(z1, z2)) && in_c(h.subtract(z2, z));
    const BigInt hn = h.order();
    if (ob.k3 != Rational(BigInt(tri), hn * hn * hn)) ++k3_oracle_bad;
    ++k3_seen[ob.k3];
  }
  // measurement must be deterministic
  const std::string first = dump(to_json(r, spec));
  const std::string second = dump(to_json(verify_witness(spec, true, ExecutionOptions{1}), spec));
  o.pass = r.passed() && r.good_g == 36 && r.observations.size() == 72 && k2_bad == 0 && k3_oracle_bad == 0 &&
           first == second;
  std::ostringstream s;
  s << r.good_g << " g with M(g) in A, " << r.slice_violations << " slice violations, k2 = 2/3 in "
    << r.observations.size() - k2_bad << "/" << r.observations.size() << ", measured k3:";
  for (const auto& [v, c] : k3_seen) s << " " << v << " (x" << c << ")";
  s << " vs claimed 2/9: " << (r.k3_agrees[0] && r.k3_agrees[1] ? "agrees" : "differs");
  o.detail = s.str();
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::mt19937_64 rng(8);
  std::uint64_t qstar_bad = 0, sign_bad = 0, qp_bad = 0, points = 0;
  for (unsigned k = 1; k <= 3; ++k) {
    for (int trial = 0; trial < 5; ++trial) {
      auto q = random_polynomial(rng, xy_variables(k), 3).with_variables(xy_variables(k));
      auto qs = transform_qstar(q, k);
      const unsigned d = q.degree();
      for (int i = 0; i < 100; ++i) {
        std::vector<Rational> vet(3 * k);
        for (auto& v : vet) v = random_rational(rng);
        for (unsigned j = 0; j < k; ++j)
          if (vet[j] == 0) vet[j] = Rational(1, 2);
        // q*(v, e, t) = prod v_j^(3d) * q(e/v^2, t/v^3)
        std::vector<Rational> xy(2 * k);
        Rational scale = 1;
        for (unsigned j = 0; j < k; ++j) {
          xy[j] = vet[k + j] / (vet[j] * vet[j]);
          xy[k + j] = vet[2 * k + j] / (vet[j] * vet[j] * vet[j]);
          for (unsigned e = 0; e < 3 * d; ++e) scale *= vet[j];
        }
        qstar_bad += poly_eval(qs, vet) != poly_eval(q, xy) * scale;
        ++points;
      }
    }
  }
  auto sign = [](const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); };
  for (int trial = 0; trial < 20; ++trial) {
    auto q = random_polynomial(rng, x_variables(2), 4);
    auto p = transform_p_from_q(q);
    for (int a = 1; a <= 5; ++a)
      for (int b = 1; b <= 5; ++b) {
        std::vector<Rational> n{a, b}, inv{Rational(1, a), Rational(1, b)};
        sign_bad += sign(poly_eval(p, inv)) != sign(poly_eval(q, n));
      }
  }
  for (int trial = 0; trial < 20; ++trial) {
    auto p = random_polynomial(rng, x_variables(2), 4);
    auto t = transform_q_from_p(p, 2);
    // evaluate q at (x, x^3) on a rational grid and compare with p(x)
    for (int i = 0; i < 5; ++i) {
      std::vector<Rational> x{random_rational(rng), random_rational(rng)};
      std::vector<Rational> xy{x[0], x[1], x[0] * x[0] * x[0], x[1] * x[1] * x[1]};
      qp_bad += poly_eval(t.q.with_variables(xy_variables(2)), xy) != poly_eval(p.with_variables(x_variables(2)), x);
    }
    IntPolynomial collapsed = t.q;
    for (const char* j : {"1", "2"}) {
      const std::string xv = std::string("x") + j, yv = std::string("y") + j;
      collapsed = substitute(collapsed, yv, IntPolynomial::variable(collapsed.variables(), xv).pow(3));
    }
    qp_bad += !(collapsed == p);
  }
  o.pass = qstar_bad == 0 && sign_bad == 0 && qp_bad == 0;
  o.detail = "q* identity " + std::to_string(points - qstar_bad) + "/" + std::to_string(points) +
             ", sign mismatches " + std::to_string(sign_bad) + ", q(x,x^3) != p failures " + std::to_string(qp_bad);
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::uint64_t nonzero = 0;
  for (int n = 1; n <= 50; ++n) nonzero += delta(Rational(1, n)) != 0;
  auto r = verify_delta_derivative_claims(Rational(1, 1000), 20);
  // oracle: delta(a) = a^4 ({1/a} - {1/a}^2), differentiated by hand on branch t
  std::uint64_t oracle_fail = 0, points = 0;
  for (const auto& iv : r.intervals) {
    const BigInt t = iv.branch;
    auto d1 = [&](const Rational& a) { return -4 * t * (t + 1) * a * a * a + 3 * (2 * t + 1) * a * a - 2 * a; };
    auto d2 = [&](const Rational& a) { return -12 * t * (t + 1) * a * a + 6 * (2 * t + 1) * a - 2; };
    std::vector<Rational> grid{iv.lo};
    for (BigInt m = numerator(iv.lo * 1000) / denominator(iv.lo * 1000) + 1; Rational(m, 1000) < iv.hi; ++m) {
      grid.emplace_back(m, 1000);
    }
    grid.push_back(iv.hi);
    for (const auto& a : grid) {
      const bool ok = iv.lower_bound ? d1(a) >= iv.bound : d2(a) <= iv.bound;
      oracle_fail += !ok;
      ++points;
    }
    if (grid.size() != iv.points) ++oracle_fail;
  }
  o.pass = nonzero == 0 && r.passed() && oracle_fail == 0;
  std::uint64_t failures = 0;
  for (const auto& iv : r.intervals) failures += iv.failures;
  o.detail = "delta(1/n) != 0 for " + std::to_string(nonzero) + " of n = 1..50; " + std::to_string(r.intervals.size()) +
             " intervals, " + std::to_string(points) + " grid points, " + std::to_string(failures) +
             " failures, oracle failures " + std::to_string(oracle_fail);
  return o;
}

Outcome criterion10() {
  Outcome o;
  // branch formula on I_t, written out directly
  auto branch_h = [](unsigned tt, const Rational& x) {
    const BigInt t = tt;
    return Rational(3 * t * t - t - 2, t * (t + 1)) * x - Rational(2 * (t - 1), t + 1);
  };
  std::uint64_t value_bad = 0, cont_bad = 0;
  for (unsigned t = 1; t <= 100; ++t) {
    const Rational x = Rational(1) - Rational(1, t);
    const Rational expected(BigInt(t - 1) * (t - 2), BigInt(t) * t);
    value_bad += bollobas_h(x) != expected;
    // left limit from I_{t-1} meets the value on I_t
    if (t >= 2) cont_bad += branch_h(t - 1, x) != branch_h(t, x) || !bollobas_h_function().agree_at(x, t - 1, t);
    // the limit at the right end of I_t
    const Rational right = Rational(1) - Rational(1, t + 1);
    cont_bad += branch_h(t, right) != bollobas_h(right);
  }
  cont_bad += bollobas_h(1) != 1;
  o.pass = value_bad == 0 && cont_bad == 0;
  o.detail = "h(1-1/t) mismatches " + std::to_string(value_bad) + ", breakpoint discontinuities " +
             std::to_string(cont_bad) + " (t = 1..100)";
  return o;
}

Outcome criterion11(const ExecutionOptions& opt) {
  Outcome o;
  auto g = make_group({100});
  std::vector<ElementIndex> half;
  for (ElementIndex x = 0; x < 50; ++x) half.push_back(x);
  auto a = GroupSubset::from_indices(g, half);
  const LinearSystem sys = parse_system("[g1]");
  const Rational exact = eval_density(sys, a, opt);
  const double exact_d = exact.convert_to<double>();
  int within = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto e = estimate_density(sys, a, 100000, seed, opt);
    within += std::abs(e.estimate - exact_d) <= e.radius;
  }
  o.pass = exact == Rational(1, 2) && within >= 95;
  o.detail = std::to_string(within) + "/100 seeds within the Hoeffding radius of exact " + exact.str();
  return o;
}

// Every report this suite can emit, serialised.
std::vector<std::pair<std::string, std::string>> collect_reports(const ExecutionOptions& opt) {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("pinpoint-k3", dump(to_json(verify_pinpoint(3, 4, opt))));
  out.emplace_back("energy-bound-z8", dump(to_json(sweep_exhaustive(Inequality::energy_bound, make_group({8}), {}, opt))));
  out.emplace_back("energy-bound-random",
                   dump(to_json(sweep_random(Inequality::energy_bound, parse_group("Z4 x Z32"), 500, 3, {}, opt))));
  out.emplace_back("kneser-z4", dump(to_json(sweep_exhaustive(Inequality::kneser, make_group({4}), {}, opt))));
  out.emplace_back("delta-claims", dump(to_json(verify_delta_derivative_claims(Rational(1, 1000)))));
  auto spec = build_witness(2, {3, 3});
  out.emplace_back("witness", dump(to_json(verify_witness(spec, true, opt), spec)));
  out.emplace_back("homdensity", dump(to_json(verify_homdensity_random(parse_group("Z9 x Z2"), 2, 20, 13, opt))));
  auto g = make_group({100});
  auto a = GroupSubset::from_predicate(g, [](ElementIndex x) { return x < 50; });
  out.emplace_back("estimate", dump(to_json(estimate_density(parse_system("[g1]"), a, 100000, 7, opt))));
  out.emplace_back("bundle", dump(to_json(build_psi(parse_polynomial("x1 - y1"), 1))));
  // through the C API as well
  af_options c;
  af_options_init(&c);
  c.threads = opt.threads;
  af_report* r = nullptr;
  if (af_verify_pinpoint(3, 4, &c, &r) == AF_OK) {
    char* text = nullptr;
    af_report_json(r, &text);
    out.emplace_back("capi-pinpoint", text ? text : "");
    af_string_free(text);
  }
  af_report_free(r);
  return out;
}

Outcome criterion12(const ExecutionOptions& opt, const std::string& report_dir) {
  Outcome o;
  const auto first = collect_reports(opt);
  const auto second = collect_reports(opt);
  ExecutionOptions single = opt;
  single.threads = 1;
  const auto serial = collect_reports(single);
  std::uint64_t differ = 0, thread_differ = 0;
  for (std::size_t i = 0; i < first.size(); ++i) {
    differ += first[i].second != second[i].second;
    thread_differ += first[i].second != serial[i].second;
  }
  if (!report_dir.empty()) {
    std::filesystem::create_directories(report_dir);
    for (const auto& [name, text] : first) std::ofstream(std::filesystem::path(report_dir) / (name + ".json")) << text;
  }
  o.pass = differ == 0 && thread_differ == 0 && first.size() == 10;
  o.detail = std::to_string(first.size()) + " reports, " + std::to_string(differ) + " differ between runs, " +
             std::to_string(thread_differ) + " differ from a single-thread run";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"addforms acceptance suite"};
  unsigned threads = 4;
  std::string report_dir;
  std::vector<int> only;
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--report-dir", report_dir, "write the determinism reports here");
  app.add_option("--only", only, "run just these criteria")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  ExecutionOptions opt;
  opt.threads = threads;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"energy counting vs Fourier", [&] { return criterion1(opt); }},
      {"energy upper bound", [&] { return criterion2(opt); }},
      {"Kneser, Plunnecke-Ruzsa, energy vs doubling", [&] { return criterion3(opt); }},
      {"energy as a linear-form density", [&] { return criterion4(opt); }},
      {"pinpoint lemma", [&] { return criterion5(opt); }},
      {"homomorphism density identity", [&] { return criterion6(opt); }},
      {"witness construction", [&] { return criterion7(opt); }},
      {"polynomial transforms", [] { return criterion8(); }},
      {"delta derivative claims", [] { return criterion9(); }},
      {"Bollobas h", [] { return criterion10(); }},
      {"Monte Carlo coverage", [&] { return criterion11(opt); }},
      {"determinism", [&] { return criterion12(opt, report_dir); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && std::find(only.begin(), only.end(), static_cast<int>(i + 1)) == only.end()) continue;
    Outcome r;
    const auto start = Clock::now();
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %2zu %s: %s [%.2f s]\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                r.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
    failed += !r.pass;
  }
  return failed == 0 ? 0 : 1;
}
