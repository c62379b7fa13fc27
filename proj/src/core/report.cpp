#include "addforms/report.hpp"

#include <limits>

namespace addforms {

Json bigint_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
    return static_cast<std::int64_t>(v);
  }
  return v.str();
}

Json rational_json(const Rational& r) {
  return Json{{"num", bigint_json(numerator(r))}, {"den", bigint_json(denominator(r))}, {"decimal", to_decimal(r)}};
}

Json report_header(const std::string& command) { return Json{{"schema", kReportSchema}, {"command", command}}; }

Json element_json(const FiniteAbelianGroup& group, ElementIndex x) {
  if (group.rank() == 1) return x;
  return group.residues(x);
}

Json subset_json(const GroupSubset& a) {
  Json out = Json::array();
  for (ElementIndex x : a.elements()) out.push_back(element_json(*a.group(), x));
  return out;
}

Json tuple_json(const FiniteAbelianGroup& group, std::span<const ElementIndex> g) {
  Json out = Json::array();
  for (ElementIndex x : g) out.push_back(element_json(group, x));
  return out;
}

namespace {

Json optional_rational(const std::optional<Rational>& r) { return r ? rational_json(*r) : Json(nullptr); }

}  // namespace

Json to_json(const SweepReport& report) {
  Json j;
  j["check"] = inequality_name(report.kind);
  Json instance{{"group", report.group->to_string()}, {"mode", report.mode}};
  if (report.kind == Inequality::plunnecke_ruzsa) {
    instance["r"] = report.params.r;
    instance["s"] = report.params.s;
  }
  if (report.seed) instance["seed"] = *report.seed;
  j["instance"] = instance;
  j["checked"] = report.checked;
  j["degenerate"] = report.degenerate;
  j["violations"] = report.violations;
  j["min_lhs"] = optional_rational(report.min_lhs);
  j["holds"] = report.passed();
  Json w = Json::array();
  for (const auto& wit : report.witnesses) {
    Json sets = Json::array();
    for (const auto& s : wit.subsets) sets.push_back(subset_json(s));
    w.push_back(Json{{"subsets", sets}, {"lhs", rational_json(wit.lhs)}});
  }
  j["witnesses"] = w;
  return j;
}

Json to_json(const DeltaClaimsReport& report) {
  Json j;
  j["check"] = "delta-claims";
  j["grid_step"] = rational_json(report.step);
  j["max_t"] = report.max_t;
  j["note"] = "grid sanity suite, not a proof";
  Json intervals = Json::array();
  for (const auto& i : report.intervals) {
    Json failing = Json::array();
    for (const auto& a : i.failing) failing.push_back(rational_json(a));
    intervals.push_back(Json{{"quantity", i.quantity},
                             {"interval", Json::array({rational_json(i.lo), rational_json(i.hi)})},
                             {"branch", i.branch},
                             {"relation", i.lower_bound ? ">=" : "<="},
                             {"bound", rational_json(i.bound)},
                             {"points", i.points},
                             {"failures", i.failures},
                             {i.lower_bound ? "min" : "max", rational_json(i.extreme)},
                             {"at", rational_json(i.extreme_at)},
                             {"failing", failing},
                             {"holds", i.passed()}});
  }
  j["intervals"] = intervals;
  Json endpoints = Json::array();
  for (const auto& e : report.endpoints) {
    endpoints.push_back(Json{{"alpha", rational_json(e.alpha)},
                             {"branch", e.branch},
                             {"delta", rational_json(e.delta)},
                             {"delta_prime", rational_json(e.delta_prime)},
                             {"delta_double_prime", rational_json(e.delta_double_prime)}});
  }
  j["endpoints"] = endpoints;
  j["holds"] = report.passed();
  return j;
}

Json to_json(const PinpointReport& report) {
  const std::uint32_t n = (report.k + 1) * (report.k + 1);
  Json j;
  j["check"] = "pinpoint";
  j["k"] = report.k;
  j["group"] = "Z" + std::to_string(n);
  j["checked"] = report.checked;
  j["l_satisfied"] = report.l_satisfied;
  j["m_satisfied"] = report.m_satisfied;
  j["violations"] = report.violations;
  Json w = Json::array();
  for (const auto& v : report.witnesses) w.push_back(Json{{"g", v.g}, {"reason", v.reason}});
  j["witnesses"] = w;
  j["holds"] = report.passed();
  return j;
}

Json to_json(const WitnessReport& report, const WitnessSpec& spec, std::size_t max_observations) {
  const auto& g = *spec.group;
  Json j;
  j["check"] = "witness";
  j["k"] = report.k;
  j["n"] = report.n;
  j["group"] = g.to_string();
  j["subset_size"] = spec.subset.size();
  j["good_g"] = report.good_g;
  j["slice_violations"] = report.slice_violations;
  j["k2_violations"] = report.k2_violations;
  j["identity_failures"] = report.identity_failures;
  Json per_j = Json::array();
  for (unsigned idx = 0; idx < report.k; ++idx) {
    Json classes = Json::array();
    for (const auto& c : report.k3_classes) {
      if (c.j != idx + 1) continue;
      classes.push_back(Json{{"k3", rational_json(c.k3)}, {"count", c.count}, {"h_coordinates", c.h_coordinates}});
    }
    per_j.push_back(Json{{"j", idx + 1},
                         {"expected_k2", rational_json(report.expected_k2[idx])},
                         {"claimed_k3", rational_json(report.claimed_k3[idx])},
                         {"k3_agrees", static_cast<bool>(report.k3_agrees[idx])},
                         {"measured_k3", classes}});
  }
  j["coordinates"] = per_j;
  Json obs = Json::array();
  for (std::size_t i = 0; i < report.observations.size() && i < max_observations; ++i) {
    const auto& o = report.observations[i];
    Json e{{"g", tuple_json(g, o.g)},
           {"j", o.j},
           {"h_coordinate", o.h_coordinate},
           {"b_is_slice", o.b_is_slice},
           {"k2", rational_json(o.k2)},
           {"k3", rational_json(o.k3)}};
    if (o.identity_holds) e["identity_holds"] = *o.identity_holds;
    obs.push_back(e);
  }
  j["observations"] = obs;
  j["observations_truncated"] = report.observations.size() > max_observations;
  j["holds"] = report.passed();
  return j;
}

Json to_json(const HomDensityReport& report) {
  Json j;
  j["vacuous"] = report.vacuous;
  j["v_density"] = rational_json(report.v_density);
  j["e_density"] = rational_json(report.e_density);
  j["t_density"] = rational_json(report.t_density);
  if (!report.vacuous) {
    j["graph_k2"] = rational_json(report.graph.k2);
    j["graph_k3"] = rational_json(report.graph.k3);
    j["k2_from_densities"] = rational_json(report.k2_from_densities);
    j["k3_from_densities"] = rational_json(report.k3_from_densities);
  }
  j["k2_equal"] = report.k2_equal;
  j["k3_equal"] = report.k3_equal;
  j["holds"] = report.holds();
  return j;
}

Json to_json(const HomDensityBatchReport& report) {
  Json j;
  j["check"] = "homdensity";
  j["group"] = report.group->to_string();
  j["k"] = report.k;
  j["seed"] = report.seed;
  j["pairs"] = report.pairs;
  j["checks"] = report.checks;
  j["k2_mismatches"] = report.k2_mismatches;
  j["k3_mismatches"] = report.k3_mismatches;
  Json f = Json::array();
  for (const auto& fail : report.failures) {
    f.push_back(Json{{"g", tuple_json(*report.group, fail.g)},
                     {"j", fail.j},
                     {"subset", subset_json(fail.subset)},
                     {"report", to_json(fail.report)}});
  }
  j["failures"] = f;
  j["holds"] = report.passed();
  return j;
}

Json to_json(const ReductionBundle& bundle) {
  Json j;
  j["k"] = bundle.k;
  j["q"] = to_string(bundle.q);
  j["qstar"] = to_string(bundle.qstar);
  j["layout"] = Json{{"g", "g1..gk are variables 1..k"}, {"z", "z, z', z'' are variables k+1, k+2, k+3"}};
  auto systems = [](const std::vector<LinearSystem>& v) {
    Json out = Json::array();
    for (const auto& s : v) out.push_back(to_string(s));
    return out;
  };
  j["systems"] = Json{{"L", to_string(bundle.L)},
                      {"M", to_string(bundle.M)},
                      {"V", systems(bundle.V)},
                      {"E", systems(bundle.E)},
                      {"T", systems(bundle.T)}};
  Json terms = Json::array();
  for (const auto& t : bundle.psi_terms) {
    Json factors = Json::array();
    for (const auto& f : t.factors) factors.push_back(std::string(1, f.block) + std::to_string(f.j));
    terms.push_back(Json{{"coefficient", bigint_json(t.coefficient)}, {"factors", factors}});
  }
  j["psi"] = terms;
  return j;
}

Json to_json(const PenaltyTransform& t) {
  return Json{{"q", to_string(t.q)},
              {"M", bigint_json(t.m)},
              {"first_derivative_bound", bigint_json(t.first_derivative_bound)},
              {"second_derivative_bound", bigint_json(t.second_derivative_bound)},
              {"grid_estimate", Json{{"steps", t.grid_steps},
                                     {"first_derivative_sup", rational_json(t.grid_first_sup)},
                                     {"second_derivative_sup", rational_json(t.grid_second_sup)},
                                     {"M", rational_json(t.grid_m)}}}};
}

Json to_json(const DensityEstimate& e) {
  return Json{{"estimate", e.estimate}, {"radius", e.radius}, {"samples", e.samples}, {"hits", e.hits},
              {"approximate", true}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace addforms
