#include "addforms/addforms.h"

#include "addforms/abelian.hpp"
#include "addforms/bounds.hpp"
#include "addforms/error.hpp"
#include "addforms/fourier.hpp"
#include "addforms/linform.hpp"
#include "addforms/polynomial.hpp"
#include "addforms/reduction.hpp"
#include "addforms/report.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

using namespace addforms;

struct af_group {
  GroupPtr group;
};
struct af_subset {
  GroupSubset subset;
};
struct af_system {
  LinearSystem system;
};
struct af_quantum {
  QuantumSystem quantum;
};
struct af_poly {
  IntPolynomial poly;
};
struct af_report {
  Json json;
  bool passed = true;
};

namespace {

thread_local std::string last_error;

af_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
      return AF_ERR_INVALID_ARGUMENT;
    case ErrorCode::parse_error:
      return AF_ERR_PARSE;
    case ErrorCode::group_mismatch:
      return AF_ERR_GROUP_MISMATCH;
    case ErrorCode::cap_exceeded:
      return AF_ERR_CAP_EXCEEDED;
    case ErrorCode::io_error:
      return AF_ERR_IO;
  }
  return AF_ERR_INTERNAL;
}

template <class Fn>
af_status guard(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return AF_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return AF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return AF_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) fail(ErrorCode::invalid_argument, std::string(what) + " is null");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ExecutionOptions execution(const af_options* o) {
  ExecutionOptions e;
  if (o != nullptr) {
    e.threads = o->threads == 0 ? 1 : o->threads;
    e.work_budget = o->work_budget;
  }
  return e;
}

std::uint64_t max_order(const af_options* o) { return o == nullptr ? kDefaultMaxOrder : o->max_order; }

void emit(af_report** out, Json json, bool passed = true) {
  require(out, "report output");
  *out = new af_report{std::move(json), passed};
}

Json subset_header(const std::string& command, const GroupSubset& a) {
  Json j = report_header(command);
  j["group"] = a.group()->to_string();
  j["set"] = format_subset_literal(a);
  return j;
}

Inequality inequality(const char* kind) {
  require(kind, "inequality name");
  auto k = parse_inequality(kind);
  if (!k) fail(ErrorCode::invalid_argument, std::string("unknown inequality ") + kind);
  return *k;
}

std::vector<std::uint32_t> n_values(const uint32_t* n, size_t count) {
  if (count > 0) require(n, "n");
  return std::vector<std::uint32_t>(n, n + count);
}

}  // namespace

extern "C" {

void af_options_init(af_options* options) {
  if (options == nullptr) return;
  options->threads = 1;
  options->work_budget = kDefaultWorkBudget;
  options->max_order = kDefaultMaxOrder;
}

const char* af_version(void) { return "1.0.0"; }

const char* af_status_name(af_status status) {
  switch (status) {
    case AF_OK:
      return "ok";
    case AF_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case AF_ERR_PARSE:
      return "parse_error";
    case AF_ERR_GROUP_MISMATCH:
      return "group_mismatch";
    case AF_ERR_CAP_EXCEEDED:
      return "cap_exceeded";
    case AF_ERR_IO:
      return "io_error";
    case AF_ERR_INTERNAL:
      return "internal_error";
  }
  return "unknown";
}

const char* af_last_error(void) { return last_error.c_str(); }

void af_string_free(char* s) { std::free(s); }

// Groups -----------------------------------------------------------------

af_status af_group_parse(const char* text, const af_options* options, af_group** out) {
  return guard([&] {
    require(text, "group text");
    require(out, "group output");
    *out = new af_group{parse_group(text, max_order(options))};
  });
}

uint32_t af_group_order(const af_group* group) { return group == nullptr ? 0 : group->group->order(); }

af_status af_group_to_string(const af_group* group, char** out) {
  return guard([&] {
    require(group, "group");
    require(out, "string output");
    *out = copy_string(group->group->to_string());
  });
}

void af_group_free(af_group* group) { delete group; }

// Subsets ----------------------------------------------------------------

af_status af_subset_parse(const af_group* group, const char* text, af_subset** out) {
  return guard([&] {
    require(group, "group");
    require(text, "subset text");
    require(out, "subset output");
    *out = new af_subset{parse_subset(group->group, text)};
  });
}

af_status af_subset_load(const af_group* group, const char* path, af_subset** out) {
  return guard([&] {
    require(group, "group");
    require(path, "path");
    require(out, "subset output");
    *out = new af_subset{load_subset(group->group, path)};
  });
}

size_t af_subset_size(const af_subset* subset) { return subset == nullptr ? 0 : subset->subset.size(); }

af_status af_subset_to_string(const af_subset* subset, char** out) {
  return guard([&] {
    require(subset, "subset");
    require(out, "string output");
    *out = copy_string(format_subset_literal(subset->subset));
  });
}

af_status af_subset_to_file_contents(const af_subset* subset, char** out) {
  return guard([&] {
    require(subset, "subset");
    require(out, "string output");
    *out = copy_string(format_subset_file(subset->subset));
  });
}

af_status af_subset_group(const af_subset* subset, af_group** out) {
  return guard([&] {
    require(subset, "subset");
    require(out, "group output");
    *out = new af_group{subset->subset.group()};
  });
}

void af_subset_free(af_subset* subset) { delete subset; }

// Systems and polynomials ----------------------------------------------------

af_status af_system_parse(const char* text, size_t arity, af_system** out) {
  return guard([&] {
    require(text, "system text");
    require(out, "system output");
    std::optional<std::size_t> a;
    if (arity > 0) a = arity;
    *out = new af_system{parse_system(text, a)};
  });
}

size_t af_system_arity(const af_system* system) { return system == nullptr ? 0 : system->system.arity(); }
size_t af_system_size(const af_system* system) { return system == nullptr ? 0 : system->system.size(); }

af_status af_system_to_string(const af_system* system, char** out) {
  return guard([&] {
    require(system, "system");
    require(out, "string output");
    *out = copy_string(to_string(system->system));
  });
}

void af_system_free(af_system* system) { delete system; }

af_status af_quantum_parse(const char* text, af_quantum** out) {
  return guard([&] {
    require(text, "quantum text");
    require(out, "quantum output");
    *out = new af_quantum{parse_quantum(text)};
  });
}

af_status af_quantum_to_string(const af_quantum* quantum, char** out) {
  return guard([&] {
    require(quantum, "quantum system");
    require(out, "string output");
    *out = copy_string(to_string(quantum->quantum));
  });
}

void af_quantum_free(af_quantum* quantum) { delete quantum; }

af_status af_poly_parse(const char* text, af_poly** out) {
  return guard([&] {
    require(text, "polynomial text");
    require(out, "polynomial output");
    *out = new af_poly{parse_polynomial(text)};
  });
}

af_status af_poly_to_string(const af_poly* poly, char** out) {
  return guard([&] {
    require(poly, "polynomial");
    require(out, "string output");
    *out = copy_string(to_string(poly->poly));
  });
}

void af_poly_free(af_poly* poly) { delete poly; }

// Reports ------------------------------------------------------------------

af_status af_report_json(const af_report* report, char** out) {
  return guard([&] {
    require(report, "report");
    require(out, "string output");
    *out = copy_string(dump(report->json));
  });
}

int af_report_passed(const af_report* report) { return report != nullptr && report->passed ? 1 : 0; }

void af_report_free(af_report* report) { delete report; }

// Densities ------------------------------------------------------------------

af_status af_density(const af_system* system, const af_subset* subset, const af_options* options, af_report** out) {
  return guard([&] {
    require(system, "system");
    require(subset, "subset");
    const ExecutionOptions ex = execution(options);
    const auto& sys = system->system;
    const SatisfyingCount count =
        count_satisfying(sys, subset->subset, PartialAssignment(sys.arity()), ex);
    const Rational value(count.count, pow(BigInt(subset->subset.group()->order()), count.free_variables));
    Json j = subset_header("density", subset->subset);
    j["system"] = to_string(sys);
    j["arity"] = sys.arity();
    j["count"] = bigint_json(count.count);
    j["value"] = rational_json(value);
    emit(out, std::move(j));
  });
}

af_status af_quantum_density(const af_quantum* quantum, const af_subset* subset, const af_options* options,
                             af_report** out) {
  return guard([&] {
    require(quantum, "quantum system");
    require(subset, "subset");
    Json j = subset_header("density", subset->subset);
    j["quantum"] = to_string(quantum->quantum);
    j["value"] = rational_json(eval_quantum(quantum->quantum, subset->subset, execution(options)));
    emit(out, std::move(j));
  });
}

af_status af_estimate(const af_system* system, const af_subset* subset, uint64_t samples, uint64_t seed,
                      int with_exact, const af_options* options, af_report** out) {
  return guard([&] {
    require(system, "system");
    require(subset, "subset");
    const ExecutionOptions ex = execution(options);
    const DensityEstimate e = estimate_density(system->system, subset->subset, samples, seed, ex);
    Json j = subset_header("estimate", subset->subset);
    j["system"] = to_string(system->system);
    j["seed"] = seed;
    j["result"] = to_json(e);
    bool passed = true;
    if (with_exact) {
      const Rational exact = eval_density(system->system, subset->subset, ex);
      const bool within = std::fabs(e.estimate - to_double(exact)) <= e.radius;
      j["exact"] = rational_json(exact);
      j["within_radius"] = within;
    }
    emit(out, std::move(j), passed);
  });
}

// Set functions -------------------------------------------------------------

af_status af_energy(const af_subset* subset, const af_options* options, af_report** out) {
  return guard([&] {
    require(subset, "subset");
    const auto& a = subset->subset;
    const Rational exact = additive_energy(a);
    const double fourier = energy_fourier(a, execution(options).threads);
    Json j = subset_header("energy", a);
    j["raw"] = additive_energy_raw(a);
    j["energy"] = rational_json(exact);
    j["fourier"] = Json{{"value", fourier}, {"approximate", true}};
    j["agree"] = std::fabs(fourier - to_double(exact)) <= 1e-9;
    emit(out, std::move(j));
  });
}

af_status af_sumset(const af_subset* a, const af_subset* b, af_report** out) {
  return guard([&] {
    require(a, "subset A");
    require(b, "subset B");
    const GroupSubset s = sumset(a->subset, b->subset);
    Json j = report_header("sumset");
    j["group"] = a->subset.group()->to_string();
    j["a"] = format_subset_literal(a->subset);
    j["b"] = format_subset_literal(b->subset);
    j["result"] = format_subset_literal(s);
    j["size"] = s.size();
    j["density"] = rational_json(s.density());
    emit(out, std::move(j));
  });
}

af_status af_signed_sumset(const af_subset* b, unsigned r, unsigned s, af_report** out) {
  return guard([&] {
    require(b, "subset");
    const GroupSubset res = signed_iterated_sumset(b->subset, r, s);
    Json j = subset_header("sumset", b->subset);
    j["r"] = r;
    j["s"] = s;
    j["result"] = format_subset_literal(res);
    j["size"] = res.size();
    j["density"] = rational_json(res.density());
    emit(out, std::move(j));
  });
}

af_status af_doubling(const af_subset* a, af_report** out) {
  return guard([&] {
    require(a, "subset");
    const GroupSubset s = sumset(a->subset, a->subset);
    Json j = subset_header("doubling", a->subset);
    j["sumset_size"] = s.size();
    j["doubling"] = rational_json(doubling_constant(a->subset));
    emit(out, std::move(j));
  });
}

af_status af_stabilizer(const af_subset* a, af_report** out) {
  return guard([&] {
    require(a, "subset");
    const GroupSubset s = stabilizer(a->subset);
    Json j = subset_header("stabilizer", a->subset);
    j["stabilizer"] = format_subset_literal(s);
    j["size"] = s.size();
    emit(out, std::move(j));
  });
}

// Inequalities ----------------------------------------------------------------

af_status af_check(const char* kind, const af_subset* a, const af_subset* b, unsigned r, unsigned s,
                   af_report** out) {
  return guard([&] {
    const Inequality k = inequality(kind);
    require(a, "subset A");
    if (is_pairwise(k)) require(b, "subset B");
    const GroupSubset& sb = b != nullptr ? b->subset : a->subset;
    const InequalityCheck c = check_inequality(k, a->subset, sb, CheckParams{r, s});
    Json j = report_header("check");
    j["check"] = inequality_name(k);
    Json instance{{"group", a->subset.group()->to_string()}, {"a", format_subset_literal(a->subset)}};
    if (is_pairwise(k)) instance["b"] = format_subset_literal(sb);
    if (k == Inequality::plunnecke_ruzsa) {
      instance["r"] = r;
      instance["s"] = s;
    }
    j["instance"] = instance;
    j["lhs"] = rational_json(c.lhs);
    j["holds"] = c.holds;
    Json witnesses = Json::array();
    if (!c.holds) {
      Json sets = Json::array({subset_json(a->subset)});
      if (is_pairwise(k)) sets.push_back(subset_json(sb));
      witnesses.push_back(Json{{"subsets", sets}, {"lhs", rational_json(c.lhs)}});
    }
    j["witnesses"] = witnesses;
    emit(out, std::move(j), c.holds);
  });
}

af_status af_check_exhaustive(const char* kind, const af_group* group, unsigned r, unsigned s,
                              const af_options* options, af_report** out) {
  return guard([&] {
    const Inequality k = inequality(kind);
    require(group, "group");
    const SweepReport rep = sweep_exhaustive(k, group->group, CheckParams{r, s}, execution(options));
    Json j = report_header("check");
    j.update(to_json(rep));
    emit(out, std::move(j), rep.passed());
  });
}

af_status af_check_random(const char* kind, const af_group* group, uint64_t count, uint64_t seed, unsigned r,
                          unsigned s, const af_options* options, af_report** out) {
  return guard([&] {
    const Inequality k = inequality(kind);
    require(group, "group");
    const SweepReport rep = sweep_random(k, group->group, count, seed, CheckParams{r, s}, execution(options));
    Json j = report_header("check");
    j.update(to_json(rep));
    emit(out, std::move(j), rep.passed());
  });
}

af_status af_check_region(const char* region, const char* x, const char* y, af_report** out) {
  return guard([&] {
    require(region, "region");
    require(x, "x");
    require(y, "y");
    const Rational rx = parse_rational(x);
    const Rational ry = parse_rational(y);
    const std::string name = region;
    Json j = report_header("check");
    j["check"] = "region-" + name;
    j["instance"] = Json{{"x", rational_json(rx)}, {"y", rational_json(ry)}};
    bool holds = false;
    if (name == "graph") {
      holds = in_region_graph(rx, ry);
      j["h"] = rational_json(bollobas_h(rx));
      j["relation"] = "y >= h(x)";
    } else if (name == "energy") {
      holds = in_region_energy(rx, ry);
      j["bound"] = rational_json(energy_upper_bound(rx));
      j["relation"] = "y <= energy_upper_bound(x)";
    } else {
      fail(ErrorCode::invalid_argument, "unknown region " + name + " (expected graph or energy)");
    }
    j["holds"] = holds;
    emit(out, std::move(j), holds);
  });
}

af_status af_scalar(const char* function, const char* x, unsigned branch, af_report** out) {
  return guard([&] {
    require(function, "function");
    require(x, "x");
    const std::string name = function;
    const Rational v = parse_rational(x);
    const PiecewiseRational* f = nullptr;
    if (name == "bollobas-h") {
      f = &bollobas_h_function();
    } else if (name == "delta") {
      f = &delta_function();
    } else if (name == "delta-prime") {
      f = &delta_prime_function();
    } else if (name == "delta-double-prime") {
      f = &delta_double_prime_function();
    } else if (name != "energy-bound") {
      fail(ErrorCode::invalid_argument, "unknown function " + name);
    }
    Json j = report_header("scalar");
    j["function"] = name;
    j["x"] = rational_json(v);
    if (f == nullptr) {
      if (branch != 0) fail(ErrorCode::invalid_argument, "energy-bound has no branches");
      j["value"] = rational_json(energy_upper_bound(v));
    } else if (branch == 0) {
      j["branch"] = f->branch_of(v);
      j["value"] = rational_json((*f)(v));
    } else {
      j["branch"] = branch;
      j["value"] = rational_json(f->on_branch(v, branch));
    }
    emit(out, std::move(j));
  });
}

// Reduction -------------------------------------------------------------------

af_status af_reduce(const af_poly* q, unsigned k, const af_subset* subset, const af_options* options,
                    af_report** out) {
  return guard([&] {
    require(q, "polynomial");
    const ReductionBundle bundle = build_psi(q->poly, k);
    Json j = report_header("reduce");
    j.update(to_json(bundle));
    if (subset != nullptr) {
      const ExecutionOptions ex = execution(options);
      const Rational independent = eval_reduction(bundle, subset->subset, ex);
      const Rational at_densities = eval_qstar_at_densities(bundle, subset->subset, ex);
      const Rational shared = eval_reduction_shared_g(bundle, subset->subset, ex);
      j["evaluation"] = Json{{"group", subset->subset.group()->to_string()},
                             {"set", format_subset_literal(subset->subset)},
                             {"independent", rational_json(independent)},
                             {"qstar_at_densities", rational_json(at_densities)},
                             {"shared_g", rational_json(shared)},
                             {"round_trip", independent == at_densities}};
    }
    emit(out, std::move(j));
  });
}

af_status af_transform(const char* kind, const af_poly* poly, unsigned k, af_report** out) {
  return guard([&] {
    require(kind, "transform kind");
    require(poly, "polynomial");
    const std::string name = kind;
    Json j = report_header("transform");
    j["transform"] = name;
    j["input"] = to_string(poly->poly);
    if (name == "qstar") {
      if (k == 0) fail(ErrorCode::invalid_argument, "the qstar transform needs k");
      j["k"] = k;
      j["output"] = to_string(transform_qstar(poly->poly, k));
    } else if (name == "p-from-q") {
      j["output"] = to_string(transform_p_from_q(poly->poly));
    } else if (name == "q-from-p") {
      const PenaltyTransform t = transform_q_from_p(poly->poly, k);
      j["output"] = to_string(t.q);
      j["penalty"] = to_json(t);
    } else {
      fail(ErrorCode::invalid_argument, "unknown transform " + name + " (expected qstar, p-from-q or q-from-p)");
    }
    emit(out, std::move(j));
  });
}

af_status af_witness(unsigned k, const uint32_t* n, size_t count, const af_options* options, af_report** out,
                     af_subset** subset_out) {
  return guard([&] {
    const WitnessSpec spec = build_witness(k, n_values(n, count), max_order(options));
    Json j = report_header("witness");
    j["k"] = k;
    j["n"] = spec.n;
    j["group"] = spec.group->to_string();
    j["order"] = spec.group->order();
    j["subset_size"] = spec.subset.size();
    j["density"] = rational_json(spec.subset.density());
    if (subset_out != nullptr) *subset_out = new af_subset{spec.subset};
    emit(out, std::move(j));
  });
}

// Verifiers -------------------------------------------------------------------

af_status af_verify_pinpoint(unsigned k, unsigned max_k, const af_options* options, af_report** out) {
  return guard([&] {
    const PinpointReport rep = verify_pinpoint(k, max_k, execution(options));
    Json j = report_header("verify");
    j.update(to_json(rep));
    emit(out, std::move(j), rep.passed());
  });
}

af_status af_verify_witness(unsigned k, const uint32_t* n, size_t count, int check_identity,
                            const af_options* options, af_report** out) {
  return guard([&] {
    const WitnessSpec spec = build_witness(k, n_values(n, count), max_order(options));
    const WitnessReport rep = verify_witness(spec, check_identity != 0, execution(options));
    Json j = report_header("verify");
    j.update(to_json(rep, spec));
    emit(out, std::move(j), rep.passed());
  });
}

af_status af_verify_homdensity(const af_subset* subset, const char* g, unsigned j, const af_options* options,
                               af_report** out) {
  return guard([&] {
    require(subset, "subset");
    require(g, "g");
    const auto& group = *subset->subset.group();
    const std::vector<ElementIndex> gv = parse_element_list(group, g);
    const HomDensityReport rep = verify_homdensity_identity(subset->subset, gv, j, execution(options));
    Json doc = report_header("verify");
    doc["check"] = "homdensity";
    doc["group"] = group.to_string();
    doc["set"] = format_subset_literal(subset->subset);
    doc["g"] = tuple_json(group, gv);
    doc["j"] = j;
    doc.update(to_json(rep));
    emit(out, std::move(doc), rep.holds());
  });
}

af_status af_verify_homdensity_random(const af_group* group, unsigned k, uint64_t pairs, uint64_t seed,
                                      const af_options* options, af_report** out) {
  return guard([&] {
    require(group, "group");
    const HomDensityBatchReport rep = verify_homdensity_random(group->group, k, pairs, seed, execution(options));
    Json j = report_header("verify");
    j.update(to_json(rep));
    emit(out, std::move(j), rep.passed());
  });
}

af_status af_verify_delta(const char* step, unsigned max_t, af_report** out) {
  return guard([&] {
    require(step, "step");
    const DeltaClaimsReport rep = verify_delta_derivative_claims(parse_rational(step), max_t);
    Json j = report_header("verify");
    j.update(to_json(rep));
    emit(out, std::move(j), rep.passed());
  });
}

}  // extern "C"
