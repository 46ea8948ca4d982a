// Command-line front end: model selection, certified bound computation,
// exact-oracle comparison, ergodicity checks, and machine-readable reports.
//
// Exit codes: 0 success, 2 usage error (unknown model, bad flags, malformed
// config), 3 infeasible or unsupported computation (reported, not a crash).
// Output is byte-identical for identical argv + seed.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gibbscert/bounds.hpp"
#include "gibbscert/ergodicity.hpp"
#include "gibbscert/errors.hpp"
#include "gibbscert/model.hpp"
#include "gibbscert/oracle.hpp"
#include "gibbscert/report.hpp"
#include "gibbscert/transition.hpp"
#include "gibbscert/tuner.hpp"

namespace gc = gibbscert;

namespace {

constexpr std::uint64_t kDefaultSeed = 123456789ull;

// Model-selection flags shared by most subcommands.  Builtin parameters are
// individual flags; a JSON config file selects a custom finite model instead.
struct ModelFlags {
  std::string model;
  std::string config;
  std::optional<int> n;
  std::optional<int> n_max;
  std::optional<double> sigma2;
  std::optional<double> tau2;
};

void add_model_flags(CLI::App* cmd, ModelFlags& mf, bool model_required) {
  auto* opt = cmd->add_option("--model", mf.model, "builtin model name");
  if (model_required) {
    // --config substitutes for --model, so requiredness is checked after
    // parsing rather than by CLI11.
    (void)opt;
  }
  cmd->add_option("--config", mf.config, "JSON file defining a finite model");
  cmd->add_option("--n", mf.n, "population size (beta-binomial)");
  cmd->add_option("--n-max", mf.n_max, "truncation level (poisson-gamma)");
  cmd->add_option("--sigma2", mf.sigma2, "observation variance (gaussian)");
  cmd->add_option("--tau2", mf.tau2, "prior variance (gaussian)");
}

std::unique_ptr<gc::TwoComponentModel> build_model(const ModelFlags& mf) {
  if (!mf.config.empty()) {
    return std::make_unique<gc::FiniteModel>(
        gc::FiniteModel::from_json_file(mf.config));
  }
  if (mf.model.empty()) {
    throw gc::domain_error("either --model or --config is required");
  }
  std::vector<std::string> params;
  if (mf.n) params.push_back("n=" + std::to_string(*mf.n));
  if (mf.n_max) params.push_back("n_max=" + std::to_string(*mf.n_max));
  if (mf.sigma2) params.push_back("sigma2=" + gc::format_g12(*mf.sigma2));
  if (mf.tau2) params.push_back("tau2=" + gc::format_g12(*mf.tau2));
  return gc::make_builtin_model(mf.model, params);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("GIBBS_CERTIFY_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw gc::domain_error("GIBBS_CERTIFY_SEED is not an unsigned integer");
    }
    return v;
  }
  return kDefaultSeed;
}

gc::ReportMeta make_meta(int argc, char** argv, std::uint64_t seed) {
  std::string cmd;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) cmd += ' ';
    cmd += argv[i];
  }
  return gc::ReportMeta{cmd, seed, gc::fnv1a(cmd)};
}

void print_meta(const gc::ReportMeta& meta, std::ostream& out) {
  out << "# command: " << meta.command << "\n";
  out << "# seed=" << meta.seed << " params_hash=" << gc::hash_hex(meta.params_hash)
      << "\n";
}

std::string theta_set_text(const gc::ThetaSet& b) {
  if (const auto* idx = std::get_if<gc::ThetaIndexSet>(&b)) {
    std::string s = "{";
    for (std::size_t i = 0; i < idx->indices.size(); ++i) {
      if (i) s += ' ';
      s += std::to_string(idx->indices[i]);
    }
    return s + "}";
  }
  const auto& iv = std::get<gc::ThetaInterval>(b);
  return "[" + gc::format_g12(iv.lo) + ", " + gc::format_g12(iv.hi) + "]";
}

const char* phi_name(gc::PhiKind k) {
  return k == gc::PhiKind::identity ? "identity" : "abs";
}

gc::PhiKind parse_phi(const std::string& name) {
  if (name == "identity") return gc::PhiKind::identity;
  if (name == "abs" || name == "absolute-value") return gc::PhiKind::absolute_value;
  throw gc::domain_error("unknown --phi '" + name + "' (identity | abs)");
}

// Shared table printer for single bound curves: capped values (TV <= 1), raw
// closed-form parameters listed in the header lines above the table.
void print_curve_table(const gc::BoundCurve& curve, int lmax,
                       const gc::ReportMeta& meta, std::ostream& out) {
  gc::CurveExport ex;
  ex.kind = curve.kind;
  ex.params = curve.params;
  for (int ell = curve.ell_min; ell <= lmax; ++ell) {
    ex.ell.push_back(ell);
    ex.value.push_back(curve.capped(ell));
  }
  gc::write_curve_csv(ex, meta, out);
}

// --- subcommand bodies ---------------------------------------------------

int run_model_list(const gc::ReportMeta& meta) {
  print_meta(meta, std::cout);
  for (const auto& name : gc::builtin_model_names()) {
    std::cout << name;
    if (name == "beta-binomial") std::cout << "  --n INT (required)";
    if (name == "poisson-gamma") std::cout << "  --n-max INT (default: auto)";
    if (name == "gaussian") std::cout << "  --sigma2 REAL --tau2 REAL (default 0.25 0.25)";
    std::cout << "\n";
  }
  std::cout << "custom finite model: --config FILE "
               "(JSON keys: x_points, theta_points, mu_weights, pi_weights, f)\n";
  return 0;
}

int run_check_ergodicity(const ModelFlags& mf, const gc::ReportMeta& meta) {
  auto model = build_model(mf);
  auto decision = gc::check_ergodicity(*model);
  print_meta(meta, std::cout);
  std::cout << "model = " << model->name() << "\n";
  std::cout << "ergodic = " << (decision.ergodic ? "yes" : "no") << "\n";
  std::cout << "components = " << decision.component_count << "\n";
  std::cout << "detail = " << decision.detail << "\n";
  if (!decision.ergodic) {
    std::cout << "x_component =";
    for (int c : decision.x_component) std::cout << ' ' << c;
    std::cout << "\ntheta_component =";
    for (int c : decision.theta_component) std::cout << ' ' << c;
    std::cout << "\n";
  }
  return 0;
}

int run_bound_uniform(const ModelFlags& mf, int lmax, const gc::ReportMeta& meta) {
  auto model = build_model(mf);
  auto result = gc::optimize_uniform_B(*model);
  print_meta(meta, std::cout);
  std::cout << "model = " << model->name() << "\n";
  std::cout << "u = " << gc::format_g12(result.cert.u) << "\n";
  std::cout << "rho = " << gc::format_g12(result.cert.rho) << "\n";
  std::cout << "witness_b = " << theta_set_text(result.cert.witness_b) << "\n";
  if (result.cert.u <= 0.0) {
    std::cout << "note = vacuous certificate (u = 0), curve is constant 1\n";
  }
  print_curve_table(result.curve, lmax, meta, std::cout);
  return 0;
}

struct RosenthalFlags {
  std::string phi;
  std::optional<double> r;
  std::optional<double> d;
  bool auto_mode = false;
  double target = 0.01;
  double x0 = 0.0;
  int lmax = 50;
  std::string trace_path;
};

int run_bound_rosenthal(const ModelFlags& mf, const RosenthalFlags& rf,
                        const gc::ReportMeta& meta) {
  auto model = build_model(mf);
  auto drift_opt = model->default_drift();
  if (!drift_opt) {
    throw gc::certificate_error("model '" + model->name() +
                                "' supplies no drift certificate");
  }
  gc::DriftCertificate drift{drift_opt->phi, drift_opt->alpha, drift_opt->beta};
  gc::PhiKind phi = parse_phi(rf.phi);
  if (phi != drift.phi) {
    throw gc::domain_error(std::string("--phi ") + rf.phi + " does not match the model drift (" +
                           phi_name(drift.phi) + ")");
  }
  if (!rf.auto_mode && (!rf.r || !rf.d)) {
    throw gc::domain_error("either --auto or both --r and --d are required");
  }

  print_meta(meta, std::cout);
  std::cout << "model = " << model->name() << "\n";
  std::cout << "phi = " << phi_name(drift.phi)
            << " alpha = " << gc::format_g12(drift.alpha)
            << " beta = " << gc::format_g12(drift.beta) << "\n";

  if (rf.auto_mode) {
    gc::Objective objective;
    objective.kind = gc::Objective::Kind::minimize_ell_star;
    objective.target = rf.target;
    auto result = gc::optimize_rosenthal(*model, drift, rf.x0, objective);
    const auto& best = result.best;
    std::cout << "r = " << gc::format_g12(best.r) << "\n";
    std::cout << "d = " << gc::format_g12(best.minor.d) << "\n";
    std::cout << "b = " << theta_set_text(best.minor.witness_b) << "\n";
    std::cout << "epsilon = " << gc::format_g12(best.minor.epsilon) << "\n";
    std::cout << "t = " << gc::format_g12(best.t) << "\n";
    std::cout << "psi_x0 = " << gc::format_g12(1.0 + best.drift.alpha / (1.0 - best.drift.beta) +
                                               result.phi_x0)
              << "\n";
    std::cout << "target = " << gc::format_g12(rf.target) << "\n";
    if (result.mixing.reached) {
      std::cout << "ell_star = " << result.mixing.ell_star << "\n";
    } else {
      std::cout << "ell_star = not reached\n";
      if (result.mixing.extrapolated) {
        std::cout << "ell_star_extrapolated = "
                  << gc::format_g12(*result.mixing.extrapolated) << "\n";
      }
    }
    if (result.mixing.closed_form) {
      std::cout << "ell_closed_form = " << *result.mixing.closed_form << "\n";
    }
    if (!rf.trace_path.empty()) {
      std::ofstream trace(rf.trace_path);
      if (!trace) throw gc::domain_error("cannot open --trace file " + rf.trace_path);
      gc::write_trace_csv(result.trace, trace);
    }
    print_curve_table(result.best_curve, rf.lmax, meta, std::cout);
    return 0;
  }

  // Manual (r, d): pick the candidate B maximizing epsilon for this d, then
  // report or reject the resulting certificate.
  double best_eps = 0.0;
  gc::ThetaSet best_b = gc::ThetaInterval{0.0, 0.0};
  bool have_b = false;
  for (const auto& b : gc::candidate_theta_sets(*model)) {
    double eps = gc::minorization_epsilon(*model, phi, *rf.d, b);
    if (!have_b || eps > best_eps) {
      best_eps = eps;
      best_b = b;
      have_b = true;
    }
  }
  auto tval = gc::rosenthal_t(drift.alpha, drift.beta, *rf.d, *rf.r);
  std::cout << "r = " << gc::format_g12(*rf.r) << "\n";
  std::cout << "d = " << gc::format_g12(*rf.d) << "\n";
  std::cout << "b = " << theta_set_text(best_b) << "\n";
  std::cout << "epsilon = " << gc::format_g12(best_eps) << "\n";
  std::cout << "t = " << gc::format_g12(tval.t) << "\n";
  if (best_eps <= 0.0 || !tval.feasible) {
    std::cout << "infeasible = " << (best_eps <= 0.0 ? "epsilon is zero" : "t >= 1") << "\n";
    throw gc::certificate_error(best_eps <= 0.0
                                    ? "no minorization mass at this d"
                                    : "contraction factor t >= 1 at this (r, d)");
  }
  gc::RosenthalCertificate cert{drift, {best_eps, *rf.d, best_b}, *rf.r, tval.t};
  double phi_x0 = gc::phi_value(phi, rf.x0);
  print_curve_table(gc::rosenthal_curve(cert, phi_x0), rf.lmax, meta, std::cout);
  return 0;
}

int run_bound_dks(int n, int lmax, const gc::ReportMeta& meta) {
  auto lower = gc::dks_lower_curve(n);
  auto upper = gc::dks_upper_curve(n);
  print_meta(meta, std::cout);
  std::cout << "beta1 = " << gc::format_g12(lower.param("beta1")) << "\n";
  std::cout << "note = bracket valid for the chain started at x0 = n\n";
  std::cout << "ell,lower,upper\n";
  for (int ell = 1; ell <= lmax; ++ell) {
    std::cout << ell << ',' << gc::format_g12(lower.capped(ell)) << ','
              << gc::format_g12(upper.capped(ell)) << "\n";
  }
  return 0;
}

int run_bound_spectral(const ModelFlags& mf, double x0, int lmax,
                       const gc::ReportMeta& meta) {
  auto model = build_model(mf);
  auto tm = gc::x_chain_matrix(*model);
  auto sd = gc::spectral_decomposition(tm);
  auto curve = gc::spectral_curve(sd, tm, x0);
  print_meta(meta, std::cout);
  std::cout << "model = " << model->name() << "\n";
  std::cout << "states = " << tm.size() << "\n";
  if (sd.eigenvalues.size() > 1) {
    std::cout << "second_eigenvalue = " << gc::format_g12(sd.eigenvalues[1]) << "\n";
  }
  print_curve_table(curve, lmax, meta, std::cout);
  return 0;
}

int run_tv(const ModelFlags& mf, double x0, int lmax, const gc::ReportMeta& meta) {
  auto model = build_model(mf);
  auto sandwich = gc::bivariate_tv_sandwich(*model, x0, lmax);
  print_meta(meta, std::cout);
  std::cout << "model = " << model->name() << "\n";
  std::cout << "x0 = " << gc::format_g12(x0) << "\n";
  std::cout << "method = " << sandwich.method << "\n";
  std::cout << "error_budget = " << gc::format_g12(sandwich.error_budget) << "\n";
  std::cout << "ell,tv_lower,tv_upper\n";
  for (int ell = 1; ell <= lmax; ++ell) {
    std::cout << ell << ',' << gc::format_g12(sandwich.lower[ell]) << ','
              << gc::format_g12(sandwich.upper[ell]) << "\n";
  }
  return 0;
}

struct CompareFlags {
  double x0 = 0.0;
  int lmax = 20;
  std::string out_path;
  std::string format = "csv";
};

int run_compare(const ModelFlags& mf, const CompareFlags& cf,
                const gc::ReportMeta& meta) {
  auto model = build_model(mf);
  auto sandwich = gc::bivariate_tv_sandwich(*model, cf.x0, cf.lmax);

  gc::CompareTable table;
  std::vector<double> lower, upper;
  for (int ell = 1; ell <= cf.lmax; ++ell) {
    table.ell.push_back(ell);
    lower.push_back(sandwich.lower[ell]);
    upper.push_back(sandwich.upper[ell]);
  }
  table.tv_lower = lower;
  table.tv_upper = upper;

  auto sampled = [&](const gc::BoundCurve& curve) {
    std::vector<double> v;
    for (int ell = 1; ell <= cf.lmax; ++ell) v.push_back(curve.capped(ell));
    return v;
  };

  auto uniform = gc::optimize_uniform_B(*model);
  if (uniform.cert.u > 0.0) table.bound_uniform = sampled(uniform.curve);

  if (auto drift_opt = model->default_drift()) {
    gc::DriftCertificate drift{drift_opt->phi, drift_opt->alpha, drift_opt->beta};
    try {
      auto result = gc::optimize_rosenthal(*model, drift, cf.x0, gc::Objective{});
      table.bound_rosenthal = sampled(result.best_curve);
    } catch (const gc::certificate_error&) {
      // Infeasible tuning leaves the column empty; compare still reports the
      // oracle and any other bounds.
    }
  }

  if (const auto* bb = dynamic_cast<const gc::BetaBinomialModel*>(model.get())) {
    // The matched bracket only covers the chain started at the top state.
    if (cf.x0 == static_cast<double>(bb->n())) {
      table.bound_dks_lower = sampled(gc::dks_lower_curve(bb->n()));
      table.bound_dks_upper = sampled(gc::dks_upper_curve(bb->n()));
    }
  }

  try {
    auto tm = gc::x_chain_matrix(*model);
    auto sd = gc::spectral_decomposition(tm);
    table.bound_spectral = sampled(gc::spectral_curve(sd, tm, cf.x0));
  } catch (const gc::unsupported_error&) {
    // No exact spectral data for truncated or continuous state spaces.
  }

  std::ostringstream body;
  if (cf.format == "csv") {
    gc::write_compare_csv(table, body);
  } else if (cf.format == "json") {
    gc::write_compare_json(table, meta, body);
  } else {
    throw gc::domain_error("unknown --format '" + cf.format + "' (csv | json)");
  }

  if (!cf.out_path.empty()) {
    std::ofstream out(cf.out_path);
    if (!out) throw gc::domain_error("cannot open --out file " + cf.out_path);
    out << body.str();
    print_meta(meta, std::cout);
    std::cout << "model = " << model->name() << "\n";
    std::cout << "wrote = " << cf.out_path << "\n";
  } else {
    print_meta(meta, std::cout);
    std::cout << body.str();
  }
  return 0;
}

int run_simulate(const ModelFlags& mf, double x0, int steps, int chains,
                 const gc::ReportMeta& meta) {
  auto model = build_model(mf);
  auto summary = gc::simulate_chain(*model, x0, steps, chains, meta.seed);
  print_meta(meta, std::cout);
  std::cout << "model = " << model->name() << "\n";
  std::cout << "chains = " << summary.n_chains << " steps = " << summary.steps << "\n";
  std::cout << "mean_x = " << gc::format_g12(summary.mean_x)
            << " se_x = " << gc::format_g12(summary.se_x) << "\n";
  std::cout << "var_x = " << gc::format_g12(summary.var_x) << "\n";
  std::cout << "mean_theta = " << gc::format_g12(summary.mean_theta)
            << " se_theta = " << gc::format_g12(summary.se_theta) << "\n";
  std::cout << "var_theta = " << gc::format_g12(summary.var_theta) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified convergence bounds for two- and three-component Gibbs samplers"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed_flag;

  auto* model_cmd = app.add_subcommand("model", "model registry");
  model_cmd->require_subcommand(1);
  auto* model_list = model_cmd->add_subcommand("list", "list builtin models");

  ModelFlags erg_mf;
  auto* erg = app.add_subcommand("check-ergodicity", "decide ergodicity of the Gibbs chain");
  add_model_flags(erg, erg_mf, false);
  erg->add_option("--seed", seed_flag, "report seed");

  auto* bound = app.add_subcommand("bound", "certified bound curves");
  bound->require_subcommand(1);

  ModelFlags uni_mf;
  int uni_lmax = 20;
  auto* uni = bound->add_subcommand("uniform", "one-step minorization bound");
  add_model_flags(uni, uni_mf, true);
  uni->add_option("--lmax", uni_lmax, "last step to tabulate");
  uni->add_option("--seed", seed_flag, "report seed");

  ModelFlags ros_mf;
  RosenthalFlags ros_rf;
  auto* ros = bound->add_subcommand("rosenthal", "drift/minorization bound");
  add_model_flags(ros, ros_mf, true);
  ros->add_option("--phi", ros_rf.phi, "drift function (identity | abs)")->required();
  ros->add_option("--r", ros_rf.r, "exponent split in (0, 1)");
  ros->add_option("--d", ros_rf.d, "small-set level, d > 2 alpha / (1 - beta)");
  ros->add_flag("--auto", ros_rf.auto_mode, "tune (r, d, B) for the target");
  ros->add_option("--target", ros_rf.target, "TV threshold for --auto");
  ros->add_option("--x0", ros_rf.x0, "start state");
  ros->add_option("--lmax", ros_rf.lmax, "last step to tabulate");
  ros->add_option("--trace", ros_rf.trace_path, "write the tuning trace CSV here");
  ros->add_option("--seed", seed_flag, "report seed");

  int dks_n = 0, dks_lmax = 20;
  auto* dks = bound->add_subcommand("dks", "matched geometric bracket, conjugate-binomial chain");
  dks->add_option("--n", dks_n, "population size")->required();
  dks->add_option("--lmax", dks_lmax, "last step to tabulate");
  dks->add_option("--seed", seed_flag, "report seed");

  ModelFlags spec_mf;
  double spec_x0 = 0.0;
  int spec_lmax = 20;
  auto* spec = bound->add_subcommand("spectral", "eigenvalue bound from the exact kernel");
  add_model_flags(spec, spec_mf, true);
  spec->add_option("--x0", spec_x0, "start state");
  spec->add_option("--lmax", spec_lmax, "last step to tabulate");
  spec->add_option("--seed", seed_flag, "report seed");

  ModelFlags tv_mf;
  double tv_x0 = 0.0;
  int tv_lmax = 20;
  auto* tv = app.add_subcommand("tv", "exact TV sandwich from the transition kernel");
  add_model_flags(tv, tv_mf, true);
  tv->add_option("--x0", tv_x0, "start state");
  tv->add_option("--lmax", tv_lmax, "last step to tabulate");
  tv->add_option("--seed", seed_flag, "report seed");

  ModelFlags cmp_mf;
  CompareFlags cmp_cf;
  auto* cmp = app.add_subcommand("compare", "oracle sandwich next to every applicable bound");
  add_model_flags(cmp, cmp_mf, true);
  cmp->add_option("--x0", cmp_cf.x0, "start state");
  cmp->add_option("--lmax", cmp_cf.lmax, "last step to tabulate");
  cmp->add_option("--out", cmp_cf.out_path, "write the table here instead of stdout");
  cmp->add_option("--format", cmp_cf.format, "csv | json");
  cmp->add_option("--seed", seed_flag, "report seed");

  ModelFlags sim_mf;
  double sim_x0 = 0.0;
  int sim_steps = 10, sim_chains = 1000;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo trajectories for cross-checking");
  add_model_flags(sim, sim_mf, true);
  sim->add_option("--x0", sim_x0, "start state");
  sim->add_option("--steps", sim_steps, "trajectory length");
  sim->add_option("--chains", sim_chains, "independent chains");
  sim->add_option("--seed", seed_flag, "base seed (chain i uses seed xor i)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    auto meta = make_meta(argc, argv, resolve_seed(seed_flag));
    if (model_list->parsed()) return run_model_list(meta);
    if (erg->parsed()) return run_check_ergodicity(erg_mf, meta);
    if (uni->parsed()) return run_bound_uniform(uni_mf, uni_lmax, meta);
    if (ros->parsed()) return run_bound_rosenthal(ros_mf, ros_rf, meta);
    if (dks->parsed()) return run_bound_dks(dks_n, dks_lmax, meta);
    if (spec->parsed()) return run_bound_spectral(spec_mf, spec_x0, spec_lmax, meta);
    if (tv->parsed()) return run_tv(tv_mf, tv_x0, tv_lmax, meta);
    if (cmp->parsed()) return run_compare(cmp_mf, cmp_cf, meta);
    if (sim->parsed()) return run_simulate(sim_mf, sim_x0, sim_steps, sim_chains, meta);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const gc::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gc::certificate_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const gc::unsupported_error& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 3;
  } catch (const gc::truncation_error& e) {
    std::cerr << "truncation: " << e.what() << "\n";
    return 3;
  } catch (const gc::numeric_error& e) {
    std::cerr << "numeric: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
