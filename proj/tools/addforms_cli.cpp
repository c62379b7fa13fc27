// addforms command-line front end. Talks to the library only through the C API.

#include <addforms/addforms.h>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

enum ExitCode { kPass = 0, kViolated = 1, kUsage = 2, kCap = 3 };

struct ApiError {
  af_status status;
  std::string message;
};

void check(af_status s) {
  if (s != AF_OK) throw ApiError{s, af_last_error()};
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using Group = Handle<af_group, af_group_free>;
using Subset = Handle<af_subset, af_subset_free>;
using System = Handle<af_system, af_system_free>;
using Quantum = Handle<af_quantum, af_quantum_free>;
using Poly = Handle<af_poly, af_poly_free>;
using Report = Handle<af_report, af_report_free>;

std::string take(char* s) {
  std::string out = s == nullptr ? "" : s;
  af_string_free(s);
  return out;
}

void write_text(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ApiError{AF_ERR_IO, "cannot write " + path};
  out << contents;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (static_cast<unsigned char>(c) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04x", c);
      out += buf;
    } else {
      out += c;
    }
  }
  return out;
}

struct Globals {
  unsigned threads = 1;
  std::optional<std::uint64_t> max_order;
  std::uint64_t work_budget = 0;
  std::string out;
  std::string command;

  af_options options() const {
    af_options o;
    af_options_init(&o);
    o.threads = threads;
    if (work_budget > 0) o.work_budget = work_budget;
    if (max_order) {
      o.max_order = *max_order;
    } else if (const char* env = std::getenv("ADDFORMS_MAX_ORDER"); env != nullptr && *env != '\0') {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (*end != '\0' || v == 0) throw ApiError{AF_ERR_INVALID_ARGUMENT, "ADDFORMS_MAX_ORDER must be a positive integer"};
      o.max_order = v;
    }
    return o;
  }
};

int finish(const Globals& g, Report& report) {
  write_text(g.out, take([&] {
               char* s = nullptr;
               check(af_report_json(report.get(), &s));
               return s;
             }()));
  return af_report_passed(report.get()) ? kPass : kViolated;
}

struct SetInput {
  std::string group;
  std::string set;
  std::string set_file;

  void add(CLI::App* app, bool required = true) {
    auto* g = app->add_option("--group", group, "group, e.g. \"Z9 x Z2\"");
    if (required) g->required();
    app->add_option("--set", set, "subset literal, e.g. \"{0,2}\" or \"{(1,0),(2,1)}\"");
    app->add_option("--set-file", set_file, "subset file (line format or JSON array)");
  }

  void load(const af_options& o, Group& grp, Subset& sub) const {
    check(af_group_parse(group.c_str(), &o, grp.out()));
    if (!set_file.empty()) {
      check(af_subset_load(grp.get(), set_file.c_str(), sub.out()));
    } else if (!set.empty()) {
      check(af_subset_parse(grp.get(), set.c_str(), sub.out()));
    } else {
      throw ApiError{AF_ERR_INVALID_ARGUMENT, "one of --set or --set-file is required"};
    }
  }
};

std::vector<std::uint32_t> parse_n(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    char* end = nullptr;
    unsigned long v = std::strtoul(item.c_str(), &end, 10);
    if (item.empty() || *end != '\0') throw ApiError{AF_ERR_PARSE, "--n expects comma-separated integers"};
    out.push_back(static_cast<std::uint32_t>(v));
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact densities, energies and reductions for linear forms over finite abelian groups"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--max-order", g.max_order, "group order cap (overrides ADDFORMS_MAX_ORDER)")
      ->check(CLI::PositiveNumber);
  app.add_option("--work-budget", g.work_budget, "cap on predicted evaluations for exact enumeration");
  app.add_option("--out", g.out, "write the JSON report here instead of stdout");
  app.set_version_flag("--version", std::string(af_version()));

  std::function<int()> run;

  // density
  SetInput density_in;
  std::string density_system, density_quantum;
  auto* density = app.add_subcommand("density", "exact t(L, A) of a system or quantum system");
  density_in.add(density);
  density->add_option("--system", density_system, "system, e.g. \"[g1; g2; g1+g2]\"");
  density->add_option("--quantum", density_quantum, "quantum system, e.g. \"2*[g1]*[g1] - [g1; g2]\"");
  density->callback([&] {
    run = [&] {
      auto o = g.options();
      Group grp;
      Subset sub;
      density_in.load(o, grp, sub);
      Report r;
      if (!density_quantum.empty()) {
        Quantum q;
        check(af_quantum_parse(density_quantum.c_str(), q.out()));
        check(af_quantum_density(q.get(), sub.get(), &o, r.out()));
      } else if (!density_system.empty()) {
        System s;
        check(af_system_parse(density_system.c_str(), 0, s.out()));
        check(af_density(s.get(), sub.get(), &o, r.out()));
      } else {
        throw ApiError{AF_ERR_INVALID_ARGUMENT, "one of --system or --quantum is required"};
      }
      return finish(g, r);
    };
  });

  // estimate
  SetInput est_in;
  std::string est_system;
  std::uint64_t est_samples = 100000, est_seed = 1;
  bool est_exact = false;
  auto* estimate = app.add_subcommand("estimate", "Monte Carlo estimate of t(L, A) with a Hoeffding radius");
  est_in.add(estimate);
  estimate->add_option("--system", est_system, "system")->required();
  estimate->add_option("--samples", est_samples, "number of samples");
  estimate->add_option("--seed", est_seed, "random seed");
  estimate->add_flag("--exact", est_exact, "also compute the exact density");
  estimate->callback([&] {
    run = [&] {
      auto o = g.options();
      Group grp;
      Subset sub;
      est_in.load(o, grp, sub);
      System s;
      check(af_system_parse(est_system.c_str(), 0, s.out()));
      Report r;
      check(af_estimate(s.get(), sub.get(), est_samples, est_seed, est_exact ? 1 : 0, &o, r.out()));
      return finish(g, r);
    };
  });

  // energy, doubling, stabilizer
  SetInput energy_in, doubling_in, stab_in;
  auto* energy = app.add_subcommand("energy", "additive energy by counting and by Fourier transform");
  energy_in.add(energy);
  energy->callback([&] {
    run = [&] {
      auto o = g.options();
      Group grp;
      Subset sub;
      energy_in.load(o, grp, sub);
      Report r;
      check(af_energy(sub.get(), &o, r.out()));
      return finish(g, r);
    };
  });
  auto* doubling = app.add_subcommand("doubling", "doubling constant |A+A|/|A|");
  doubling_in.add(doubling);
  doubling->callback([&] {
    run = [&] {
      auto o = g.options();
      Group grp;
      Subset sub;
      doubling_in.load(o, grp, sub);
      Report r;
      check(af_doubling(sub.get(), r.out()));
      return finish(g, r);
    };
  });
  auto* stab = app.add_subcommand("stabilizer", "stabilizer {g : g + A = A}");
  stab_in.add(stab);
  stab->callback([&] {
    run = [&] {
      auto o = g.options();
      Group grp;
      Subset sub;
      stab_in.load(o, grp, sub);
      Report r;
      check(af_stabilizer(sub.get(), r.out()));
      return finish(g, r);
    };
  });

  // sumset
  SetInput sum_in;
  std::string sum_b;
  unsigned sum_r = 0, sum_s = 0;
  auto* sum = app.add_subcommand("sumset", "A + B, or rA - sA with --r/--s");
  sum_in.add(sum);
  sum->add_option("--set-b", sum_b, "second subset literal (defaults to A)");
  sum->add_option("--r", sum_r, "copies of A added");
  sum->add_option("--s", sum_s, "copies of A subtracted");
  sum->callback([&] {
    run = [&] {
      auto o = g.options();
      Group grp;
      Subset a;
      sum_in.load(o, grp, a);
      Report r;
      if (sum_r + sum_s > 0) {
        check(af_signed_sumset(a.get(), sum_r, sum_s, r.out()));
      } else {
        Subset b;
        if (!sum_b.empty()) check(af_subset_parse(grp.get(), sum_b.c_str(), b.out()));
        check(af_sumset(a.get(), b.get() != nullptr ? b.get() : a.get(), r.out()));
      }
      return finish(g, r);
    };
  });

  // check
  std::string chk_group, chk_set, chk_set_file, chk_b, chk_kind, chk_region, chk_x, chk_y;
  bool chk_kneser = false, chk_pr = false, chk_ed = false, chk_eb = false, chk_exhaustive = false;
  std::uint64_t chk_random = 0, chk_seed = 1;
  unsigned chk_r = 1, chk_s = 1;
  auto* chk = app.add_subcommand("check", "check an inequality on given sets, exhaustively or on random sets");
  chk->add_flag("--kneser", chk_kneser, "Kneser inequality (pairs)");
  chk->add_flag("--plunnecke-ruzsa", chk_pr, "Plunnecke-Ruzsa inequality (pairs, --r/--s)");
  chk->add_flag("--energy-doubling", chk_ed, "energy versus doubling");
  chk->add_flag("--energy-bound", chk_eb, "energy upper bound in terms of density");
  chk->add_option("--inequality", chk_kind, "inequality by name");
  chk->add_option("--group", chk_group, "group");
  chk->add_option("--set", chk_set, "subset A");
  chk->add_option("--set-file", chk_set_file, "subset A from a file");
  chk->add_option("--set-b", chk_b, "subset B for pairwise inequalities");
  chk->add_option("--r", chk_r, "r for Plunnecke-Ruzsa");
  chk->add_option("--s", chk_s, "s for Plunnecke-Ruzsa");
  chk->add_flag("--exhaustive", chk_exhaustive, "every subset (or pair) of the group");
  chk->add_option("--random", chk_random, "number of random instances");
  chk->add_option("--seed", chk_seed, "seed for --random");
  chk->add_option("--region", chk_region, "region membership: graph or energy");
  chk->add_option("--x", chk_x, "x (or alpha) for --region");
  chk->add_option("--y", chk_y, "y (or beta) for --region");
  chk->callback([&] {
    run = [&] {
      auto o = g.options();
      Report r;
      if (!chk_region.empty()) {
        check(af_check_region(chk_region.c_str(), chk_x.c_str(), chk_y.c_str(), r.out()));
        return finish(g, r);
      }
      std::vector<std::string> kinds;
      if (chk_kneser) kinds.push_back("kneser");
      if (chk_pr) kinds.push_back("plunnecke-ruzsa");
      if (chk_ed) kinds.push_back("energy-doubling");
      if (chk_eb) kinds.push_back("energy-bound");
      if (!chk_kind.empty()) kinds.push_back(chk_kind);
      if (kinds.size() != 1) throw ApiError{AF_ERR_INVALID_ARGUMENT, "choose exactly one inequality"};
      if (chk_group.empty()) throw ApiError{AF_ERR_INVALID_ARGUMENT, "--group is required"};
      Group grp;
      check(af_group_parse(chk_group.c_str(), &o, grp.out()));
      const char* kind = kinds.front().c_str();
      if (chk_exhaustive) {
        check(af_check_exhaustive(kind, grp.get(), chk_r, chk_s, &o, r.out()));
      } else if (chk_random > 0) {
        check(af_check_random(kind, grp.get(), chk_random, chk_seed, chk_r, chk_s, &o, r.out()));
      } else {
        Subset a, b;
        if (!chk_set_file.empty()) {
          check(af_subset_load(grp.get(), chk_set_file.c_str(), a.out()));
        } else if (!chk_set.empty()) {
          check(af_subset_parse(grp.get(), chk_set.c_str(), a.out()));
        } else {
          throw ApiError{AF_ERR_INVALID_ARGUMENT, "give --set, --exhaustive or --random"};
        }
        if (!chk_b.empty()) check(af_subset_parse(grp.get(), chk_b.c_str(), b.out()));
        check(af_check(kind, a.get(), b.get() != nullptr ? b.get() : a.get(), chk_r, chk_s, r.out()));
      }
      return finish(g, r);
    };
  });

  // scalar
  std::string sc_function, sc_x;
  unsigned sc_branch = 0;
  auto* scalar = app.add_subcommand("scalar", "evaluate bollobas-h, energy-bound, delta, delta-prime, delta-double-prime");
  scalar->add_option("--function", sc_function, "function name")->required();
  scalar->add_option("--x", sc_x, "exact rational argument, e.g. 2/5")->required();
  scalar->add_option("--branch", sc_branch, "evaluate the closed form of branch t");
  scalar->callback([&] {
    run = [&] {
      Report r;
      check(af_scalar(sc_function.c_str(), sc_x.c_str(), sc_branch, r.out()));
      return finish(g, r);
    };
  });

  // reduce
  std::string red_poly, red_group, red_set;
  unsigned red_k = 0;
  auto* reduce = app.add_subcommand("reduce", "build L, M, V_j, E_j, T_j, q* and psi(q*) for a polynomial");
  reduce->add_option("--poly", red_poly, "polynomial over x1..xk, y1..yk")->required();
  reduce->add_option("--k", red_k, "number of x variables")->required();
  reduce->add_option("--group", red_group, "evaluate on a subset of this group");
  reduce->add_option("--set", red_set, "subset to evaluate on");
  reduce->callback([&] {
    run = [&] {
      auto o = g.options();
      Poly p;
      check(af_poly_parse(red_poly.c_str(), p.out()));
      Group grp;
      Subset sub;
      if (!red_group.empty()) {
        check(af_group_parse(red_group.c_str(), &o, grp.out()));
        check(af_subset_parse(grp.get(), red_set.c_str(), sub.out()));
      }
      Report r;
      check(af_reduce(p.get(), red_k, sub.get(), &o, r.out()));
      return finish(g, r);
    };
  });

  // transform
  std::string tr_kind, tr_poly;
  unsigned tr_k = 0;
  auto* transform = app.add_subcommand("transform", "polynomial transforms qstar, p-from-q, q-from-p");
  transform->add_option("--kind", tr_kind, "qstar, p-from-q or q-from-p")->required();
  transform->add_option("--poly", tr_poly, "input polynomial")->required();
  transform->add_option("--k", tr_k, "number of x variables (0 infers)");
  transform->callback([&] {
    run = [&] {
      Poly p;
      check(af_poly_parse(tr_poly.c_str(), p.out()));
      Report r;
      check(af_transform(tr_kind.c_str(), p.get(), tr_k, r.out()));
      return finish(g, r);
    };
  });

  // witness
  unsigned wit_k = 0;
  std::string wit_n, wit_subset_out;
  auto* witness = app.add_subcommand("witness", "build the witness group Z_(k+1)^2 x H and subset A");
  witness->add_option("--k", wit_k, "k")->required();
  witness->add_option("--n", wit_n, "n_1,...,n_k")->required();
  witness->add_option("--subset-out", wit_subset_out, "write A in the line format");
  witness->callback([&] {
    run = [&] {
      auto o = g.options();
      const auto n = parse_n(wit_n);
      Report r;
      Subset sub;
      check(af_witness(wit_k, n.data(), n.size(), &o, r.out(), sub.out()));
      if (!wit_subset_out.empty()) {
        char* s = nullptr;
        check(af_subset_to_file_contents(sub.get(), &s));
        write_text(wit_subset_out, take(s));
      }
      return finish(g, r);
    };
  });

  // verify
  auto* verify = app.add_subcommand("verify", "exhaustive verifiers");
  verify->require_subcommand(1);
  unsigned pin_k = 2, pin_max_k = 4;
  auto* pin = verify->add_subcommand("pinpoint", "L(g), M(g) in {0..k} pin g down, over all g in Z_(k+1)^2^k");
  pin->add_option("--k", pin_k, "k")->required();
  pin->add_option("--max-k", pin_max_k, "refuse larger k");
  pin->callback([&] {
    run = [&] {
      auto o = g.options();
      Report r;
      check(af_verify_pinpoint(pin_k, pin_max_k, &o, r.out()));
      return finish(g, r);
    };
  });
  unsigned vw_k = 2;
  std::string vw_n;
  bool vw_identity = false;
  auto* vwit = verify->add_subcommand("witness", "B_j slices, k2 and measured k3 for every good g");
  vwit->add_option("--k", vw_k, "k")->required();
  vwit->add_option("--n", vw_n, "n_1,...,n_k")->required();
  vwit->add_flag("--identity", vw_identity, "also check the density identity for each g and j");
  vwit->callback([&] {
    run = [&] {
      auto o = g.options();
      const auto n = parse_n(vw_n);
      Report r;
      check(af_verify_witness(vw_k, n.data(), n.size(), vw_identity ? 1 : 0, &o, r.out()));
      return finish(g, r);
    };
  });
  SetInput hd_in;
  std::string hd_g;
  unsigned hd_j = 1, hd_k = 2;
  std::uint64_t hd_pairs = 0, hd_seed = 1;
  auto* hd = verify->add_subcommand("homdensity", "graph densities of U_j(g) against the V_j, E_j, T_j densities");
  hd_in.add(hd);
  hd->add_option("--g", hd_g, "g_1,...,g_k, e.g. \"(1,0),(2,1)\"");
  hd->add_option("--j", hd_j, "j");
  hd->add_option("--random", hd_pairs, "check this many random (A, g) pairs instead");
  hd->add_option("--k", hd_k, "k for --random");
  hd->add_option("--seed", hd_seed, "seed for --random");
  hd->callback([&] {
    run = [&] {
      auto o = g.options();
      Report r;
      if (hd_pairs > 0) {
        Group grp;
        check(af_group_parse(hd_in.group.c_str(), &o, grp.out()));
        check(af_verify_homdensity_random(grp.get(), hd_k, hd_pairs, hd_seed, &o, r.out()));
      } else {
        Group grp;
        Subset sub;
        hd_in.load(o, grp, sub);
        check(af_verify_homdensity(sub.get(), hd_g.c_str(), hd_j, &o, r.out()));
      }
      return finish(g, r);
    };
  });
  std::string dl_step = "1/1000";
  unsigned dl_max_t = 20;
  auto* dl = verify->add_subcommand("delta", "grid suite for the delta' and delta'' interval claims");
  dl->add_option("--step", dl_step, "grid step");
  dl->add_option("--max-t", dl_max_t, "largest I_t checked");
  dl->callback([&] {
    run = [&] {
      Report r;
      check(af_verify_delta(dl_step.c_str(), dl_max_t, r.out()));
      return finish(g, r);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kUsage;
  }
  for (const auto* sub : app.get_subcommands()) {
    g.command = sub->get_name();
  }
  try {
    return run();
  } catch (const ApiError& e) {
    std::cerr << "addforms: " << af_status_name(e.status) << ": " << e.message << "\n";
    const std::string doc = std::string("{\n  \"schema\": \"addforms/1\",\n  \"command\": \"") + json_escape(g.command) +
                            "\",\n  \"error\": {\n    \"code\": \"" + af_status_name(e.status) +
                            "\",\n    \"message\": \"" + json_escape(e.message) + "\"\n  }\n}\n";
    try {
      write_text(g.out, doc);
    } catch (const ApiError&) {
    }
    return e.status == AF_ERR_CAP_EXCEEDED ? kCap : kUsage;
  }
}
