#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "ouestim/errors.hpp"
#include "ouestim/estimator.hpp"
#include "ouestim/limit_theory.hpp"
#include "ouestim/montecarlo.hpp"
#include "ouestim/ou_model.hpp"

namespace ouestim::cli {

namespace {

using nlohmann::ordered_json;

constexpr const char* kSubcommands[] = {"simulate",      "estimate",      "mc-consistency",
                                        "mc-cauchy",     "verify-limits", "selftest"};

bool is_mc(const std::string& sub) { return sub == "mc-consistency" || sub == "mc-cauchy"; }

std::string num(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

ordered_json json_num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  const auto path = std::filesystem::path(cfg.out_dir) / name;
  std::ofstream os(path);
  if (!os) throw UsageError("cannot write " + path.string());
  return os;
}

void write_json(const RunConfig& cfg, const std::string& name, const ordered_json& doc) {
  auto os = open_output(cfg, name);
  os << doc.dump(2) << '\n';
}

// Everything that determines the outputs; the output directory and the
// worker count are deliberately left out.
ordered_json config_json(const RunConfig& cfg) {
  ordered_json k;
  k["family"] = std::string(to_string(cfg.kernel.family));
  k["hurst"] = cfg.kernel.hurst;
  k["K"] = cfg.kernel.k;
  ordered_json c;
  c["subcommand"] = cfg.subcommand;
  c["kernel"] = k;
  c["theta"] = cfg.theta;
  c["horizons"] = cfg.horizons;
  c["n_per_unit"] = cfg.n_per_unit;
  c["steps"] = static_cast<std::uint64_t>(std::llround(cfg.horizons.back() * cfg.n_per_unit));
  c["replicates"] = cfg.replicates;
  c["seed"] = cfg.seed.value_or(0);
  c["sampler"] = std::string(to_string(cfg.sampler));
  c["quad_size"] = cfg.quad_size;
  return c;
}

TimeGrid grid_for(const RunConfig& cfg) {
  const double t = cfg.horizons.back();
  const auto n = static_cast<std::size_t>(std::llround(t * cfg.n_per_unit));
  if (n < 2) throw UsageError("grid needs at least 2 steps; raise --n-per-unit");
  return TimeGrid(t, n);
}

MCConfig mc_config(const RunConfig& cfg) {
  MCConfig m;
  m.kernel = cfg.kernel;
  m.theta = cfg.theta;
  m.horizons = cfg.horizons;
  m.points_per_unit = cfg.n_per_unit;
  m.replicates = cfg.replicates;
  m.seed = *cfg.seed;
  m.sampler = cfg.sampler;
  return m;
}

ordered_json summary_json(const MCSummary& s, double theta, std::size_t replicates) {
  ordered_json j;
  j["sampler_used"] = s.sampler_used;
  j["steps"] = s.steps;
  j["ks_critical_1pct"] = ks_critical_constant(0.01) / std::sqrt(static_cast<double>(replicates));
  ordered_json rows = ordered_json::array();
  for (const HorizonSummary& h : s.horizons) {
    ordered_json r;
    r["T"] = h.horizon;
    r["theta_T"] = theta * h.horizon;
    r["valid"] = h.valid;
    r["degenerate"] = h.degenerate;
    r["median_abs_error"] = json_num(h.median_abs_error);
    r["mean_abs_error"] = json_num(h.mean_abs_error);
    r["q25_normalized"] = json_num(h.q25);
    r["q50_normalized"] = json_num(h.q50);
    r["q75_normalized"] = json_num(h.q75);
    r["ks_cauchy"] = json_num(h.ks_cauchy);
    r["mean_abs_r_scaled"] = json_num(h.mean_abs_r_scaled);
    rows.push_back(r);
  }
  j["horizons"] = rows;
  return j;
}

int report_degenerate(const MCSummary& s, std::ostream& err) {
  std::size_t total = 0;
  for (const auto& h : s.horizons) total += h.degenerate;
  if (total == 0) return kOk;
  err << "error: " << total << " degenerate path evaluations (D_T = 0); sampler is suspect\n";
  return kNumerical;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const TimeGrid grid = grid_for(cfg);
  const auto sampler = make_sampler(cfg.kernel, grid, cfg.sampler);
  const double theta_t = cfg.theta * grid.horizon();
  const bool materialize = theta_t <= kMaterializeLimit;
  auto os = open_output(cfg, "paths.csv");
  os << "replicate,t,g,x_or_xi_scaled\n";
  for (std::size_t rep = 0; rep < cfg.replicates; ++rep) {
    const SamplePath path = sampler->sample(cfg.seed.value_or(0), rep);
    const ScaledTrajectory traj = build_trajectory(path, cfg.theta);
    const std::vector<double> col = materialize ? materialize_x(traj) : traj.xi;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      os << rep << ',' << num(grid.time(k)) << ',' << num(path.values[k]) << ',' << num(col[k])
         << '\n';
    }
  }
  ordered_json doc;
  doc["config"] = config_json(cfg);
  doc["sampler_used"] = std::string(sampler->id());
  doc["x_column"] = materialize ? "x" : "xi_scaled";
  write_json(cfg, "paths.json", doc);
  out << "wrote " << cfg.replicates << " path(s), " << grid.size() << " points each, sampler "
      << sampler->id() << "\n";
  return kOk;
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
  const TimeGrid grid = grid_for(cfg);
  const auto sampler = make_sampler(cfg.kernel, grid, cfg.sampler);
  const SamplePath path = sampler->sample(cfg.seed.value_or(0), 0);
  const ScaledTrajectory traj = build_trajectory(path, cfg.theta);
  auto os = open_output(cfg, "estimate.csv");
  os << "t,index,degenerate,theta_hat,s_naive,s_stable,d,z,psi,r_scaled\n";
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const EstimateReport r = make_report(traj, k);
    os << num(r.t) << ',' << r.index << ',' << (r.degenerate ? 1 : 0) << ','
       << (r.degenerate ? "" : num(r.theta_hat)) << ',' << opt_num(r.s_naive) << ','
       << (r.degenerate ? "" : num(r.s_stable)) << ',' << num(r.d) << ',' << num(r.z) << ','
       << num(r.psi) << ',' << num(r.r_scaled) << '\n';
  }
  const EstimateReport last = make_report(traj, grid.steps());
  out << "theta_hat(T=" << num(grid.horizon()) << ") = " << num(last.theta_hat)
      << ", S_stable = " << num(last.s_stable) << "\n";
  return kOk;
}

int cmd_consistency(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const MCResult res = run_consistency(mc_config(cfg));
  auto os = open_output(cfg, "consistency.csv");
  os << "T,replicate,theta_hat,abs_error,s_stable,degenerate\n";
  for (std::size_t h = 0; h < res.records.size(); ++h) {
    for (std::size_t rep = 0; rep < res.records[h].size(); ++rep) {
      const EstimateReport& r = res.records[h][rep];
      os << num(cfg.horizons[h]) << ',' << rep << ',';
      if (r.degenerate) {
        os << ",,,1\n";
      } else {
        os << num(r.theta_hat) << ',' << num(std::abs(r.theta_hat - cfg.theta)) << ','
           << num(r.s_stable) << ",0\n";
      }
    }
  }
  ordered_json doc;
  doc["experiment"] = "consistency";
  doc["config"] = config_json(cfg);
  doc["summary"] = summary_json(res.summary, cfg.theta, cfg.replicates);
  write_json(cfg, "consistency.json", doc);
  for (const auto& h : res.summary.horizons) {
    out << "T=" << num(h.horizon) << "  median|theta_hat-theta|=" << num(h.median_abs_error)
        << "  degenerate=" << h.degenerate << "\n";
  }
  return report_degenerate(res.summary, err);
}

int cmd_cauchy(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const MCResult res = run_cauchy(mc_config(cfg));
  auto os = open_output(cfg, "cauchy.csv");
  os << "replicate,theta_hat,s_stable,s_naive_or_empty,normalized\n";
  const auto& recs = res.records.front();
  for (std::size_t rep = 0; rep < recs.size(); ++rep) {
    const EstimateReport& r = recs[rep];
    os << rep << ',';
    if (r.degenerate) {
      os << ",,,\n";
      continue;
    }
    os << num(r.theta_hat) << ',' << num(r.s_stable) << ',' << opt_num(r.s_naive) << ','
       << num(r.s_stable / (2.0 * cfg.theta)) << '\n';
  }
  ordered_json doc;
  doc["experiment"] = "cauchy";
  doc["config"] = config_json(cfg);
  doc["summary"] = summary_json(res.summary, cfg.theta, cfg.replicates);
  write_json(cfg, "cauchy.json", doc);
  const HorizonSummary& h = res.summary.horizons.front();
  out << "KS to Cauchy = " << num(h.ks_cauchy) << "  quartiles = (" << num(h.q25) << ", "
      << num(h.q50) << ", " << num(h.q75) << ")\n";
  return report_degenerate(res.summary, err);
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto rows = limit_report(cfg.kernel, cfg.theta, cfg.quad_size);
  auto os = open_output(cfg, "limits.csv");
  os << "check_name,kernel,params,t,value,reference,gap,pass\n";
  bool ok = true;
  for (const LimitRow& r : rows) {
    os << r.check_name << ',' << r.kernel << ',' << r.params << ',' << num(r.t) << ','
       << num(r.value) << ',' << num(r.reference) << ',' << num(r.gap) << ','
       << (r.pass ? "true" : "false") << '\n';
    out << (r.pass ? "PASS " : "FAIL ") << r.check_name << " [" << r.params << "] t=" << r.t
        << " gap=" << r.gap << "\n";
    ok = ok && r.pass;
  }
  return ok ? kOk : kVerification;
}

int cmd_selftest(std::ostream& out) { return selftest(out) ? kOk : kVerification; }

KernelSpec make_kernel(const std::string& family, double hurst, double k) {
  switch (family_from_string(family)) {
    case Family::kFbm:
      return KernelSpec::fbm(hurst);
    case Family::kSfbm:
      return KernelSpec::sfbm(hurst);
    case Family::kBifbm:
      return KernelSpec::bifbm(hurst, k);
    case Family::kBm:
      return KernelSpec::bm();
  }
  throw UsageError("unknown kernel");
}

}  // namespace

ParseResult parse(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Drift estimation for the non-ergodic fractional OU process", "ouestim"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::string kernel = "fbm";
  double hurst = 0.7;
  double k = 0.8;
  double theta = 1.0;
  std::vector<double> horizons{10.0};
  double n_per_unit = 409.6;
  std::size_t replicates = 1000;
  std::uint64_t seed = 0;
  std::string sampler = "auto";
  std::string out_dir = ".";
  std::size_t quad_size = 4096;

  app.add_option("--kernel", kernel, "fbm | sfbm | bifbm | bm")->capture_default_str();
  app.add_option("--hurst", hurst, "Hurst index H")->capture_default_str();
  app.add_option("--K", k, "bifractional index K (bifbm only)")->capture_default_str();
  app.add_option("--theta", theta, "true drift parameter")->capture_default_str();
  app.add_option("--T", horizons, "horizon(s), comma separated and increasing")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--n-per-unit", n_per_unit, "grid points per unit time")->capture_default_str();
  auto* rep_opt = app.add_option("--replicates", replicates, "number of replicates");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (required for mc-*)");
  app.add_option("--sampler", sampler, "auto | cholesky | circulant")->capture_default_str();
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--quad-size", quad_size, "quadrature nodes per axis")->capture_default_str();

  for (const char* name : kSubcommands) {
    app.add_subcommand(name)->fallthrough();
  }
  app.get_subcommand("simulate")->description("sample driver paths and write paths.csv");
  app.get_subcommand("estimate")->description("estimator along one path, estimate.csv");
  app.get_subcommand("mc-consistency")->description("consistency experiment over --T list");
  app.get_subcommand("mc-cauchy")->description("Cauchy-limit experiment at a single --T");
  app.get_subcommand("verify-limits")->description("deterministic limit checks, limits.csv");
  app.get_subcommand("selftest")->description("deterministic oracle suite");

  std::vector<std::string> argv_store{"ouestim"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return {std::nullopt, kOk};
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return {std::nullopt, kOk};
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return {std::nullopt, kUsage};
  }

  RunConfig cfg;
  cfg.subcommand = app.get_subcommands().front()->get_name();
  try {
    cfg.kernel = make_kernel(kernel, hurst, k);
    if (!(theta > 0.0)) throw UsageError("--theta must be positive");
    if (horizons.empty()) throw UsageError("--T needs at least one value");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
      if (!(horizons[i] > 0.0)) throw UsageError("--T values must be positive");
      if (i > 0 && !(horizons[i] > horizons[i - 1])) {
        throw UsageError("--T values must be strictly increasing");
      }
    }
    if (cfg.subcommand == "mc-cauchy" && horizons.size() != 1) {
      throw UsageError("mc-cauchy takes a single --T");
    }
    if (!(n_per_unit > 0.0)) throw UsageError("--n-per-unit must be positive");
    if (quad_size < kMinQuadrature) {
      throw UsageError("--quad-size must be at least " + std::to_string(kMinQuadrature));
    }
    cfg.theta = theta;
    cfg.horizons = horizons;
    cfg.n_per_unit = n_per_unit;
    cfg.sampler = sampler_from_string(sampler);
    cfg.out_dir = out_dir;
    cfg.quad_size = quad_size;
    if (rep_opt->count() > 0) {
      if (replicates < 1) throw UsageError("--replicates must be at least 1");
      cfg.replicates = replicates;
    } else {
      cfg.replicates = is_mc(cfg.subcommand) ? 1000 : 1;
    }
    if (seed_opt->count() > 0) {
      cfg.seed = seed;
    } else if (is_mc(cfg.subcommand)) {
      throw UsageError("--seed is required for " + cfg.subcommand);
    }
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << "\n";
    return {std::nullopt, kUsage};
  }
  return {cfg, kOk};
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.subcommand == "simulate") return cmd_simulate(cfg, out);
    if (cfg.subcommand == "estimate") return cmd_estimate(cfg, out);
    if (cfg.subcommand == "mc-consistency") return cmd_consistency(cfg, out, err);
    if (cfg.subcommand == "mc-cauchy") return cmd_cauchy(cfg, out, err);
    if (cfg.subcommand == "verify-limits") return cmd_verify(cfg, out);
    if (cfg.subcommand == "selftest") return cmd_selftest(out);
    err << "error: unknown subcommand " << cfg.subcommand << "\n";
    return kUsage;
  } catch (const std::logic_error& e) {  // UsageError, DomainError
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const ParseResult parsed = parse(args, out, err);
  if (!parsed.config) return parsed.exit_code;
  return execute(*parsed.config, out, err);
}

bool selftest(std::ostream& out) {
  bool ok = true;
  auto check = [&](const std::string& name, double value, double expected, double tol,
                   bool relative) {
    const double gap = relative ? std::abs(value - expected) / std::abs(expected)
                                : std::abs(value - expected);
    const bool pass = gap <= tol;
    out << (pass ? "PASS " : "FAIL ") << name << ": " << num(value) << " vs " << num(expected)
        << " (gap " << gap << ", tol " << tol << ")\n";
    ok = ok && pass;
  };

  // Linear driver G_s = s, theta = 1, T = 1: every functional is elementary.
  {
    const TimeGrid grid(1.0, 4096);
    std::vector<double> g(grid.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = grid.time(i);
    const ScaledTrajectory tr = build_trajectory(grid, g, 1.0);
    const std::size_t n = grid.steps();
    const double e = std::numbers::e;
    const double x1 = materialize_x(tr)[n];
    const double int_x2 = (e * e - 1.0) / 2.0 - 2.0 * (e - 1.0) + 1.0;
    check("linear driver X_1", x1, e - 1.0, 1e-12, true);
    check("linear driver Z_1", tr.z[n], 1.0 - 2.0 / e, 1e-12, true);
    check("linear driver theta_hat", *estimate(tr, n), (e - 1.0) * (e - 1.0) / (2.0 * int_x2),
          1e-12, true);
    const double half_x2 = 0.5 * x1 * x1;
    check("linear driver identity", half_x2 - identity_residual(tr, n) * e * e, half_x2, 1e-4,
          true);
  }

  for (auto [lambda, theta] : {std::pair{0.0, 1.0}, {1.0, 1.0}, {0.4, 1.0}, {0.0, 2.0}}) {
    std::ostringstream name;
    name << "J_lambda(30) limit, lambda=" << lambda << " theta=" << theta;
    const double j = j_lambda(theta, lambda, 30.0, 4096);
    check(name.str(), j, std::tgamma(lambda + 1.0) / std::pow(theta, lambda + 2.0), 1e-5, false);
    check(name.str() + " vs I/theta", j, i_lambda(theta, lambda, 30.0, 4096) / theta, 1e-6, false);
  }

  // F = 0.25, 0.5, 0.75 at the order statistics; the supremum 1/4 is
  // attained on both sides of x = -1 and x = 1.
  const double q[] = {-1.0, 0.0, 1.0};
  check("KS of Cauchy quartiles", ks_distance(q, Distribution::kStandardCauchy), 0.25, 1e-15,
        false);

  const VarianceCurve bm = variance_curve(KernelSpec::bm(), 1.0, 5.0, 1024);
  check("BM variance curve, split route", bm.split, bm_variance_curve(1.0, 5.0), 1e-8, false);

  // Exact scaled identity on a sampled fBm path.
  {
    const TimeGrid grid(10.0, 2048);
    const auto sampler = make_sampler(KernelSpec::fbm(0.7), grid, SamplerChoice::kAuto);
    const ScaledTrajectory tr = build_trajectory(sampler->sample(1, 0), 1.0);
    const std::size_t n = grid.steps();
    const double scale = 0.5 * tr.xi[n] * tr.xi[n];
    check("scaled identity on an fBm path", identity_residual(tr, n) / scale, 0.0, 1e-10, false);
    const auto s = error_statistic(tr, n);
    check("stable vs naive statistic", *s->naive, s->stable, 1e-6, true);
  }
  return ok;
}

}  // namespace ouestim::cli
