#include "addforms/reduction.hpp"

#include "addforms/error.hpp"
#include "addforms/random.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace addforms {

namespace {

void require_k(unsigned k) {
  if (k < 1) fail(ErrorCode::invalid_argument, "the reduction needs k >= 1");
}

void require_j(unsigned k, unsigned j) {
  if (j < 1 || j > k) {
    fail(ErrorCode::invalid_argument, "j = " + std::to_string(j) + " out of range 1.." + std::to_string(k));
  }
}

LinearForm positive(std::vector<std::int64_t> coefficients) { return LinearForm{std::move(coefficients), false}; }

/// g_j + z - z' style combination over `arity` variables.
std::vector<std::int64_t> combination(std::size_t arity, std::initializer_list<std::pair<std::size_t, std::int64_t>> parts) {
  std::vector<std::int64_t> c(arity, 0);
  for (auto [var, coef] : parts) c[var] += coef;
  return c;
}

}  // namespace

LinearSystem build_L(unsigned k) {
  require_k(k);
  std::vector<LinearForm> forms;
  std::vector<std::int64_t> first(k, 0);
  first[0] = static_cast<std::int64_t>(k) + 1;
  forms.push_back(LinearForm{first, true});
  for (std::int64_t p = 1; p <= static_cast<std::int64_t>(k) + 2; ++p) {
    for (unsigned j = 2; j <= k; ++j) {
      std::vector<std::int64_t> c(k, 0);
      c[j - 1] = p;
      c[0] = -p * static_cast<std::int64_t>(j);
      forms.push_back(positive(std::move(c)));
    }
  }
  return LinearSystem(k, std::move(forms));
}

LinearSystem build_M(unsigned k) {
  LinearSystem l = build_L(k);
  std::vector<LinearForm> forms = l.forms();
  for (unsigned j = 0; j < k; ++j) {
    std::vector<std::int64_t> c(k, 0);
    c[j] = 1;
    forms.push_back(positive(std::move(c)));
  }
  return LinearSystem(k, std::move(forms));
}

LinearSystem build_L_substituted(unsigned k, unsigned j, const std::vector<std::int64_t>& replacement) {
  require_j(k, j);
  const std::size_t arity = replacement.size();
  if (arity < k) fail(ErrorCode::invalid_argument, "substitution layout narrower than k");
  const LinearSystem l = build_L(k);
  std::vector<LinearForm> forms;
  for (const LinearForm& f : l.forms()) {
    LinearForm out{std::vector<std::int64_t>(arity, 0), f.negated};
    for (unsigned i = 0; i < k; ++i) {
      if (i == j - 1) {
        for (std::size_t v = 0; v < arity; ++v) out.coefficients[v] += f.coefficients[i] * replacement[v];
      } else {
        out.coefficients[i] += f.coefficients[i];
      }
    }
    forms.push_back(std::move(out));
  }
  return LinearSystem(arity, std::move(forms));
}

LinearSystem build_L_sub(unsigned k, unsigned j, std::size_t zvar, std::size_t arity) {
  if (zvar >= arity) fail(ErrorCode::invalid_argument, "substituted variable outside the layout");
  return build_L_substituted(k, j, combination(arity, {{zvar, 1}}));
}

LinearSystem build_V(unsigned k, unsigned j) {
  require_j(k, j);
  const std::size_t arity = k + 1;
  const LinearSystem m = build_M(k);
  const LinearSystem lz = build_L_sub(k, j, k, arity);
  return join_systems(arity, {&m, &lz});
}

LinearSystem build_E(unsigned k, unsigned j) {
  require_j(k, j);
  const std::size_t arity = k + 2;
  const std::size_t z = k, z1 = k + 1, gj = j - 1;
  const LinearSystem m = build_M(k);
  const LinearSystem lz = build_L_sub(k, j, z, arity);
  const LinearSystem lz1 = build_L_sub(k, j, z1, arity);
  const auto edge = combination(arity, {{gj, 1}, {z, 1}, {z1, -1}});
  const LinearSystem ledge = build_L_substituted(k, j, edge);
  const LinearSystem single(arity, {positive(edge)});
  return join_systems(arity, {&m, &lz, &lz1, &ledge, &single});
}

LinearSystem build_T(unsigned k, unsigned j) {
  require_j(k, j);
  const std::size_t arity = k + 3;
  const std::size_t z = k, z1 = k + 1, z2 = k + 2, gj = j - 1;
  const LinearSystem m = build_M(k);
  const LinearSystem lz = build_L_sub(k, j, z, arity);
  const LinearSystem lz1 = build_L_sub(k, j, z1, arity);
  const LinearSystem lz2 = build_L_sub(k, j, z2, arity);
  const auto e01 = combination(arity, {{gj, 1}, {z, 1}, {z1, -1}});
  const auto e12 = combination(arity, {{gj, 1}, {z1, 1}, {z2, -1}});
  const auto e20 = combination(arity, {{gj, 1}, {z2, 1}, {z, -1}});
  const LinearSystem l01 = build_L_substituted(k, j, e01);
  const LinearSystem l12 = build_L_substituted(k, j, e12);
  const LinearSystem l20 = build_L_substituted(k, j, e20);
  const LinearSystem s01(arity, {positive(e01)});
  const LinearSystem s12(arity, {positive(e12)});
  const LinearSystem s20(arity, {positive(e20)});
  return join_systems(arity, {&m, &lz, &lz1, &lz2, &l01, &s01, &l12, &s12, &l20, &s20});
}

// ---------------------------------------------------------------------------

const LinearSystem& ReductionBundle::system(const FactorRef& ref) const {
  switch (ref.block) {
    case 'V':
      return V.at(ref.j - 1);
    case 'E':
      return E.at(ref.j - 1);
    default:
      return T.at(ref.j - 1);
  }
}

QuantumSystem ReductionBundle::psi() const {
  QuantumSystem out;
  for (const auto& term : psi_terms) {
    QuantumTerm t{term.coefficient, {}};
    for (const auto& ref : term.factors) t.factors.push_back(system(ref));
    out.terms.push_back(std::move(t));
  }
  return out;
}

ReductionBundle build_psi(const IntPolynomial& q, unsigned k) {
  require_k(k);
  ReductionBundle b{k,
                    q.with_variables(xy_variables(k)),
                    transform_qstar(q, k),
                    build_L(k),
                    build_M(k),
                    {},
                    {},
                    {},
                    {}};
  for (unsigned j = 1; j <= k; ++j) {
    b.V.push_back(build_V(k, j));
    b.E.push_back(build_E(k, j));
    b.T.push_back(build_T(k, j));
  }
  static constexpr char kBlocks[] = {'V', 'E', 'T'};
  for (const auto& [e, c] : b.qstar.terms()) {
    ReductionBundle::PsiTerm term{c, {}};
    for (unsigned block = 0; block < 3; ++block) {
      for (unsigned j = 1; j <= k; ++j) {
        for (std::uint32_t r = 0; r < e[block * k + (j - 1)]; ++r) term.factors.push_back({kBlocks[block], j});
      }
    }
    b.psi_terms.push_back(std::move(term));
  }
  return b;
}

Rational eval_reduction(const ReductionBundle& bundle, const GroupSubset& a, const ExecutionOptions& options) {
  return eval_quantum(bundle.psi(), a, options);
}

Rational eval_qstar_at_densities(const ReductionBundle& bundle, const GroupSubset& a, const ExecutionOptions& options) {
  const unsigned k = bundle.k;
  std::vector<Rational> point(3 * k);
  std::vector<bool> used(3 * k, false);
  for (const auto& [e, c] : bundle.qstar.terms()) {
    for (std::size_t i = 0; i < e.size(); ++i) used[i] = used[i] || e[i] > 0;
  }
  for (unsigned j = 0; j < k; ++j) {
    if (used[j]) point[j] = eval_density(bundle.V[j], a, options);
    if (used[k + j]) point[k + j] = eval_density(bundle.E[j], a, options);
    if (used[2 * k + j]) point[2 * k + j] = eval_density(bundle.T[j], a, options);
  }
  return poly_eval(bundle.qstar, point);
}

Rational eval_reduction_shared_g(const ReductionBundle& bundle, const GroupSubset& a, const ExecutionOptions& options) {
  const unsigned k = bundle.k;
  const BigInt total = pow(BigInt(a.group()->order()), k);
  std::vector<std::vector<ElementIndex>> good;
  for_each_satisfying(bundle.M, a, PartialAssignment(k),
                      [&](std::span<const ElementIndex> g) { good.emplace_back(g.begin(), g.end()); }, options);
  // q*(0) is the constant term: 0 unless q is constant.
  Rational sum = Rational(bundle.qstar.constant_term()) * Rational(total - good.size());
  for (const auto& g : good) {
    std::vector<Rational> point(3 * k);
    for (unsigned j = 0; j < k; ++j) {
      PartialAssignment fixed(bundle.T[j].arity());
      for (unsigned i = 0; i < k; ++i) fixed[i] = g[i];
      auto prefix = [&](std::size_t arity) { return PartialAssignment(fixed.begin(), fixed.begin() + arity); };
      point[j] = eval_density_fixed(bundle.V[j], a, prefix(k + 1), options);
      point[k + j] = eval_density_fixed(bundle.E[j], a, prefix(k + 2), options);
      point[2 * k + j] = eval_density_fixed(bundle.T[j], a, prefix(k + 3), options);
    }
    sum += poly_eval(bundle.qstar, point);
  }
  return sum / Rational(total);
}

// ---------------------------------------------------------------------------

GraphDensities graph_densities(const DirectedCayleyGraph& u) {
  require_same_group(*u.vertices.group(), *u.connection.group());
  if (u.vertices.empty()) fail(ErrorCode::invalid_argument, "graph densities need a nonempty vertex set");
  const auto& g = *u.vertices.group();
  const auto b = u.vertices.elements();
  const auto& c = u.connection;
  std::uint64_t edges = 0;
  std::uint64_t triangles = 0;
  for (ElementIndex z : b) {
    for (ElementIndex z1 : b) {
      if (!c.contains(g.subtract(z, z1))) continue;
      ++edges;
      for (ElementIndex z2 : b) {
        if (c.contains(g.subtract(z1, z2)) && c.contains(g.subtract(z2, z))) ++triangles;
      }
    }
  }
  const BigInt n = b.size();
  return GraphDensities{Rational(BigInt(edges), n * n), Rational(BigInt(triangles), n * n * n)};
}

bool m_in_subset(unsigned k, const GroupSubset& a, std::span<const ElementIndex> g) {
  if (g.size() != k) fail(ErrorCode::invalid_argument, "g must have k entries");
  const LinearSystem m = build_M(k);
  const auto& group = *a.group();
  return std::all_of(m.forms().begin(), m.forms().end(),
                     [&](const LinearForm& f) { return a.contains(eval_form(f, group, g)) != f.negated; });
}

DirectedCayleyGraph compute_B_C(const GroupSubset& a, std::span<const ElementIndex> g, unsigned j) {
  const auto k = static_cast<unsigned>(g.size());
  require_j(k, j);
  const GroupPtr& group = a.group();
  GroupSubset b(group);
  if (m_in_subset(k, a, g)) {
    const LinearSystem lz = build_L_sub(k, j, k, k + 1);
    std::vector<ElementIndex> assignment(g.begin(), g.end());
    assignment.push_back(0);
    std::vector<ElementIndex> members;
    for (ElementIndex z = 0; z < group->order(); ++z) {
      assignment[k] = z;
      bool ok = std::all_of(lz.forms().begin(), lz.forms().end(), [&](const LinearForm& f) {
        return a.contains(eval_form(f, *group, assignment)) != f.negated;
      });
      if (ok) members.push_back(z);
    }
    b = GroupSubset::from_indices(group, members);
  }
  GroupSubset c = b.intersect(a).translated(group->negate(g[j - 1]));
  return DirectedCayleyGraph{std::move(b), std::move(c)};
}

HomDensityReport verify_homdensity_identity(const GroupSubset& a, std::span<const ElementIndex> g, unsigned j,
                                            const ExecutionOptions& options) {
  const auto k = static_cast<unsigned>(g.size());
  require_j(k, j);
  HomDensityReport r;
  auto fixed = [&](std::size_t arity) {
    PartialAssignment p(arity);
    for (unsigned i = 0; i < k; ++i) p[i] = g[i];
    return p;
  };
  r.v_density = eval_density_fixed(build_V(k, j), a, fixed(k + 1), options);
  r.e_density = eval_density_fixed(build_E(k, j), a, fixed(k + 2), options);
  if (!m_in_subset(k, a, g)) {
    r.vacuous = true;
    r.t_density = 0;
    return r;
  }
  r.t_density = eval_density_fixed(build_T(k, j), a, fixed(k + 3), options);
  r.graph = graph_densities(compute_B_C(a, g, j));
  r.k2_from_densities = r.e_density / (r.v_density * r.v_density);
  r.k3_from_densities = r.t_density / (r.v_density * r.v_density * r.v_density);
  r.k2_equal = r.k2_from_densities == r.graph.k2;
  r.k3_equal = r.k3_from_densities == r.graph.k3;
  return r;
}

HomDensityBatchReport verify_homdensity_random(const GroupPtr& group, unsigned k, std::uint64_t pairs,
                                               std::uint64_t seed, const ExecutionOptions& options) {
  constexpr std::size_t kMaxFailures = 5;
  constexpr int kMaxAttempts = 10000;
  const LinearSystem m = build_M(k);
  const std::uint32_t n = group->order();
  HomDensityBatchReport report;
  report.group = group;
  report.k = k;
  report.seed = seed;
  report.pairs = pairs;
  for (std::uint64_t i = 0; i < pairs; ++i) {
    auto engine = make_engine(seed, i);
    std::vector<char> member(n);
    for (auto& bit : member) bit = static_cast<char>(engine() >> 63);
    std::vector<ElementIndex> g(k);
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      for (auto& x : g) x = static_cast<ElementIndex>(uniform_below(engine, n));
      std::vector<char> need(n, 0);  // 1 inside, 2 outside
      placed = true;
      for (const LinearForm& f : m.forms()) {
        const ElementIndex v = eval_form(f, *group, g);
        const char want = f.negated ? 2 : 1;
        if (need[v] != 0 && need[v] != want) {
          placed = false;
          break;
        }
        need[v] = want;
      }
      if (placed) {
        for (std::uint32_t x = 0; x < n; ++x) {
          if (need[x] != 0) member[x] = need[x] == 1;
        }
      }
    }
    if (!placed) fail(ErrorCode::invalid_argument, "no g with a consistent M(g) found in " + group->to_string());
    const GroupSubset a = GroupSubset::from_predicate(group, [&](ElementIndex x) { return member[x] != 0; });
    for (unsigned j = 1; j <= k; ++j) {
      HomDensityReport r = verify_homdensity_identity(a, g, j, options);
      ++report.checks;
      if (!r.k2_equal) ++report.k2_mismatches;
      if (!r.k3_equal) ++report.k3_mismatches;
      if ((!r.k2_equal || !r.k3_equal) && report.failures.size() < kMaxFailures) {
        report.failures.push_back({g, j, a, std::move(r)});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

WitnessSpec build_witness(unsigned k, const std::vector<std::uint32_t>& n, std::uint64_t max_order) {
  require_k(k);
  if (n.size() != k) fail(ErrorCode::invalid_argument, "witness needs exactly k values n_j");
  for (auto nj : n) {
    if (nj < 2) fail(ErrorCode::invalid_argument, "witness needs n_j >= 2");
  }
  std::vector<std::uint32_t> moduli{(k + 1) * (k + 1)};
  moduli.insert(moduli.end(), n.begin(), n.end());
  WitnessSpec spec{k, n, make_group(moduli, max_order), make_group(n, max_order), GroupSubset(make_group({1})), {}};
  const auto& g = *spec.group;
  spec.subset = GroupSubset::from_predicate(spec.group, [&](ElementIndex x) {
    const std::uint32_t s = g.residue(x, 0);
    if (s == 0) return true;
    if (s > k) return false;
    return g.residue(x, s) != 0;
  });
  for (unsigned j = 1; j <= k; ++j) {
    spec.h_subgroups.push_back(
        GroupSubset::from_predicate(spec.h, [&](ElementIndex h) { return spec.h->residue(h, j - 1) == 0; }));
  }
  return spec;
}

WitnessReport verify_witness(const WitnessSpec& spec, bool check_identity, const ExecutionOptions& options) {
  const unsigned k = spec.k;
  const auto& g = *spec.group;
  const std::uint32_t h_order = spec.h->order();
  WitnessReport report;
  report.k = k;
  report.n = spec.n;
  for (unsigned j = 0; j < k; ++j) {
    const Rational x = Rational(1) - Rational(1, spec.n[j]);
    report.expected_k2.push_back(x);
    report.claimed_k3.push_back(2 * x * x - x);
  }

  std::vector<std::vector<ElementIndex>> good;
  for_each_satisfying(build_M(k), spec.subset, PartialAssignment(k),
                      [&](std::span<const ElementIndex> v) { good.emplace_back(v.begin(), v.end()); }, options);
  report.good_g = good.size();

  std::map<std::pair<unsigned, Rational>, WitnessK3Class> classes;
  std::map<std::pair<unsigned, Rational>, std::set<std::uint32_t>> class_coords;
  for (const auto& gv : good) {
    for (unsigned j = 1; j <= k; ++j) {
      WitnessObservation obs;
      obs.g = gv;
      obs.j = j;
      obs.h_coordinate = g.residue(gv[j - 1], j);
      const DirectedCayleyGraph u = compute_B_C(spec.subset, gv, j);
      // {j} x H occupies the contiguous index block [j |H|, (j+1) |H|).
      const GroupSubset slice = GroupSubset::from_predicate(
          spec.group, [&](ElementIndex x) { return x / h_order == j; });
      obs.b_is_slice = u.vertices == slice;
      if (!obs.b_is_slice) ++report.slice_violations;
      if (u.vertices.empty()) {
        obs.k2 = 0;
        obs.k3 = 0;
        ++report.k2_violations;
      } else {
        const GraphDensities d = graph_densities(u);
        obs.k2 = d.k2;
        obs.k3 = d.k3;
        if (d.k2 != report.expected_k2[j - 1]) ++report.k2_violations;
      }
      if (check_identity) {
        obs.identity_holds = verify_homdensity_identity(spec.subset, gv, j, options).holds();
        if (!*obs.identity_holds) ++report.identity_failures;
      }
      const auto key = std::make_pair(j, obs.k3);
      auto& cls = classes[key];
      cls.j = j;
      cls.k3 = obs.k3;
      ++cls.count;
      class_coords[key].insert(obs.h_coordinate);
      report.observations.push_back(std::move(obs));
    }
  }
  report.k3_agrees.assign(k, true);
  for (auto& [key, cls] : classes) {
    const auto& coords = class_coords[key];
    cls.h_coordinates.assign(coords.begin(), coords.end());
    if (cls.k3 != report.claimed_k3[key.first - 1]) report.k3_agrees[key.first - 1] = false;
    report.k3_classes.push_back(cls);
  }
  return report;
}

// ---------------------------------------------------------------------------

PinpointReport verify_pinpoint(unsigned k, unsigned max_k, const ExecutionOptions& options) {
  if (k < 2) fail(ErrorCode::invalid_argument, "pinpoint verification needs k >= 2");
  if (k > max_k) {
    fail(ErrorCode::cap_exceeded, "pinpoint verification for k = " + std::to_string(k) + " exceeds the cap k <= " +
                                      std::to_string(max_k));
  }
  const std::uint32_t n = (k + 1) * (k + 1);
  const GroupPtr group = make_group({n});
  const LinearSystem l = build_L(k);
  const GroupSubset s = GroupSubset::from_predicate(group, [&](ElementIndex x) { return x <= k; });

  struct Partial {
    std::uint64_t checked = 0, l_sat = 0, m_sat = 0, violations = 0;
    std::vector<PinpointViolation> witnesses;
  };
  constexpr std::size_t kMaxWitnesses = 10;
  // Outer loop over g_1, inner over the remaining k-1 coordinates.
  std::uint64_t inner = 1;
  for (unsigned i = 1; i < k; ++i) inner *= n;
  auto parts = map_blocks(n, options.threads, [&](std::size_t lo, std::size_t hi) {
    Partial p;
    std::vector<ElementIndex> gv(k);
    for (std::size_t g1 = lo; g1 < hi; ++g1) {
      for (std::uint64_t rest = 0; rest < inner; ++rest) {
        gv[0] = static_cast<ElementIndex>(g1);
        std::uint64_t r = rest;
        for (unsigned i = k; i-- > 1;) {
          gv[i] = static_cast<ElementIndex>(r % n);
          r /= n;
        }
        ++p.checked;
        const bool l_in = std::all_of(l.forms().begin(), l.forms().end(), [&](const LinearForm& f) {
          return s.contains(eval_form(f, *group, gv)) != f.negated;
        });
        if (!l_in) continue;
        ++p.l_sat;
        auto record = [&](std::string reason) {
          ++p.violations;
          if (p.witnesses.size() < kMaxWitnesses) p.witnesses.push_back({gv, std::move(reason)});
        };
        for (unsigned j = 1; j <= k; ++j) {
          if (gv[j - 1] != (std::uint64_t{j} * gv[0]) % n) record("L(g) in S but g_" + std::to_string(j) + " != j g_1");
          if (gv[j - 1] == 0) record("L(g) in S but g_" + std::to_string(j) + " = 0");
        }
        const bool m_in = std::all_of(gv.begin(), gv.end(), [&](ElementIndex x) { return s.contains(x); });
        if (!m_in) continue;
        ++p.m_sat;
        for (unsigned j = 1; j <= k; ++j) {
          if (gv[j - 1] != j) record("M(g) in S but g_" + std::to_string(j) + " != " + std::to_string(j));
        }
      }
    }
    return p;
  });
  PinpointReport report;
  report.k = k;
  for (auto& p : parts) {
    report.checked += p.checked;
    report.l_satisfied += p.l_sat;
    report.m_satisfied += p.m_sat;
    report.violations += p.violations;
    for (auto& w : p.witnesses) {
      if (report.witnesses.size() < kMaxWitnesses) report.witnesses.push_back(std::move(w));
    }
  }
  return report;
}

}  // namespace addforms
