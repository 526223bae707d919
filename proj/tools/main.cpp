#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "sheathlab/config.hpp"
#include "sheathlab/diagnostics.hpp"
#include "sheathlab/errors.hpp"
#include "sheathlab/evolve.hpp"
#include "sheathlab/io.hpp"
#include "sheathlab/model.hpp"
#include "sheathlab/stationary.hpp"

namespace fs = std::filesystem;
using namespace sheathlab;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::string out_dir = "out";
  std::string svg = "on";
  long seed = 0;
};

void add_input_opts(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "INI configuration file");
  cmd->add_option("--preset", o.preset,
                  "built-in scenario: nondegenerate, degenerate, forbidden, trivial");
}

void add_output_opts(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--out", o.out_dir, "output directory (default: out)");
  cmd->add_option("--svg", o.svg, "write SVG plots: on or off")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--seed", o.seed, "recorded in the provenance file");
}

ConfigMap load_map(const CommonOpts& o) {
  if (!o.preset.empty() && !o.config_path.empty())
    throw ConfigError("give either --config or --preset, not both");
  if (!o.preset.empty()) return preset_config(o.preset);
  if (!o.config_path.empty()) return parse_ini_file(o.config_path);
  throw ConfigError("one of --config or --preset is required");
}

std::string jnum(double v) {
  return std::isfinite(v) ? format_g17(v) : std::string("null");
}

void write_provenance(const fs::path& dir, const SimConfig& cfg,
                      const CommonOpts& o) {
  std::string s;
  if (!o.preset.empty()) s += "# preset = " + o.preset + "\n";
  s += "# seed = " + std::to_string(o.seed) + "\n";
  s += serialize_config(cfg);
  write_text_file((dir / "config.ini").string(), s);
}

std::string existence_text(const ExistenceReport& rep) {
  std::string s;
  s += "verdict = " + std::string(to_string(rep.verdict)) + "\n";
  s += "reason = " + rep.reason + "\n";
  s += "regime = " + std::string(to_string(rep.regime.tag)) + "\n";
  s += "phi_b = " + format_g17(rep.phi_b) + "\n";
  s += "V_phi_b = " + format_g17(rep.V_phi_b) + "\n";
  s += "f_c_inf = " + format_g17(rep.f_c_inf) + "\n";
  s += "mach_margin = " + format_g17(rep.regime.mach_margin) + "\n";
  s += "c_inf = " + format_g17(rep.regime.c_inf) + "\n";
  return s;
}

PlotSeries make_series(const std::string& label, const std::vector<double>& x,
                       const std::vector<double>& y,
                       std::size_t max_pts = 2048) {
  PlotSeries s;
  s.label = label;
  const std::size_t n = std::min(x.size(), y.size());
  const std::size_t stride = std::max<std::size_t>(1, n / max_pts);
  for (std::size_t i = 0; i < n; i += stride) {
    s.x.push_back(x[i]);
    s.y.push_back(y[i]);
  }
  if (n > 0 && (n - 1) % stride != 0) {
    s.x.push_back(x[n - 1]);
    s.y.push_back(y[n - 1]);
  }
  return s;
}

void write_profile_svgs(const fs::path& dir, const StationaryProfile& prof) {
  std::vector<double> x(prof.grid.N);
  for (int j = 0; j < prof.grid.N; ++j) x[j] = prof.grid.node(j);
  write_text_file((dir / "profile_fields.svg").string(),
                  svg_line_plot("stationary fluid fields", "x", "value",
                                {make_series("n", x, prof.n),
                                 make_series("u", x, prof.u),
                                 make_series("T", x, prof.T)},
                                false));
  write_text_file((dir / "profile_potential.svg").string(),
                  svg_line_plot("stationary potential", "x", "value",
                                {make_series("phi", x, prof.phi),
                                 make_series("phi_x", x, prof.phi_x)},
                                false));
}

int cmd_check(const CommonOpts& o) {
  const SimConfig cfg = resolve_config(load_map(o));
  const ExistenceReport rep = existence_check(cfg.params);
  std::cout << "{\"verdict\":\"" << to_string(rep.verdict) << "\""
            << ",\"regime\":\"" << to_string(rep.regime.tag) << "\""
            << ",\"reason\":\"" << rep.reason << "\""
            << ",\"phi_b\":" << jnum(rep.phi_b)
            << ",\"V_phi_b\":" << jnum(rep.V_phi_b)
            << ",\"f_c_inf\":" << jnum(rep.f_c_inf)
            << ",\"mach_margin\":" << jnum(rep.regime.mach_margin)
            << ",\"c_inf\":" << jnum(rep.regime.c_inf) << "}\n";
  return rep.verdict == Existence::NoSolution ? 2 : 0;
}

int cmd_sheath(const CommonOpts& o) {
  const SimConfig cfg = resolve_config(load_map(o));
  const ExistenceReport rep = existence_check(cfg.params);
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  write_provenance(dir, cfg, o);
  write_text_file((dir / "existence.txt").string(), existence_text(rep));
  std::cout << "regime:  " << to_string(rep.regime.tag) << "\n"
            << "verdict: " << to_string(rep.verdict) << " (" << rep.reason
            << ")\n";
  if (rep.verdict == Existence::NoSolution) return 2;

  const StationaryProfile prof = solve_sheath(cfg.params, cfg.grid);
  write_text_file((dir / "profile.csv").string(), profile_to_csv(prof));
  std::cout << "wall:    n(0) = " << format_g17(prof.n[0])
            << ", phi(0) = " << format_g17(prof.phi[0])
            << ", phi_x(0) = " << format_g17(prof.phi_x[0]) << "\n";

  if (rep.verdict == Existence::Exists) {
    std::string decay;
    if (rep.regime.tag == RegimeTag::Degenerate) {
      const DegenerateEnvelope env = verify_decay_degenerate(prof, cfg.params);
      decay += "model = algebraic\n";
      decay += "Gamma = " + format_g17(env.Gamma) + "\n";
      for (std::size_t f = 0; f < env.field_names.size(); ++f) {
        decay += "sup_defect(" + env.field_names[f] + ") =";
        for (double d : env.defects_all[f]) decay += " " + format_g17(d);
        decay += "\n";
      }
      std::cout << "decay:   algebraic envelope, Gamma = "
                << format_g17(env.Gamma) << ", sup defects (phi row):";
      for (double d : env.sup_defects) std::cout << " " << format_g17(d);
      std::cout << "\n";
    } else {
      const DecayRateReport d = verify_decay_nondegenerate(prof, cfg.params);
      decay += "model = exponential\n";
      decay += "c_fit = " + format_g17(d.c_fit) + "\n";
      decay += "c_predicted = " + format_g17(d.c_predicted) + "\n";
      decay += "rel_deviation = " + format_g17(d.rel_deviation) + "\n";
      decay += "r_squared = " + format_g17(d.r_squared) + "\n";
      decay += "nodes_used = " + std::to_string(d.nodes_used) + "\n";
      std::cout << "decay:   exponential, rate " << format_g17(d.c_fit)
                << " vs predicted " << format_g17(d.c_predicted)
                << " (rel dev " << format_g17(d.rel_deviation) << ")\n";
    }
    write_text_file((dir / "decay.txt").string(), decay);
  } else {
    std::cout << "decay:   constant state, nothing to verify\n";
  }

  if (o.svg == "on") write_profile_svgs(dir, prof);
  std::cout << "wrote " << (dir / "profile.csv").string() << "\n";
  return 0;
}

// The algebraic fit abscissa is log(1 + t): time enters the marginal decay
// through 1 + t, unlike the spatial weight whose beta is a length scale.
constexpr double kFitTimeBeta = 1.0;

std::string fit_text(const std::vector<DiagnosticRecord>& records,
                     FitModel model, DecayFit* out) {
  std::string s;
  s += std::string("model = ") +
       (model == FitModel::Exponential ? "exponential" : "algebraic") + "\n";
  try {
    const DecayFit fit = fit_decay(records, model, kFitTimeBeta);
    if (out) *out = fit;
    s += "status = ok\n";
    s += "exponent = " + format_g17(fit.exponent) + "\n";
    s += "r_squared = " + format_g17(fit.r_squared) + "\n";
    s += "t_lo = " + format_g17(fit.t_lo) + "\n";
    s += "t_hi = " + format_g17(fit.t_hi) + "\n";
  } catch (const SolverError& e) {
    if (e.kind == SolverError::Kind::DegenerateFit)
      s += "status = degenerate_fit\n";
    else if (e.kind == SolverError::Kind::InsufficientWindow)
      s += "status = insufficient_window\n";
    else
      throw;
    s += std::string("detail = ") + e.what() + "\n";
  }
  return s;
}

int cmd_evolve(const CommonOpts& o) {
  const SimConfig cfg = resolve_config(load_map(o));
  const ExistenceReport rep = existence_check(cfg.params);
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  write_provenance(dir, cfg, o);
  write_text_file((dir / "existence.txt").string(), existence_text(rep));
  if (rep.verdict == Existence::NoSolution) {
    std::cout << "verdict: NoSolution (" << rep.reason << "); nothing to evolve\n";
    return 2;
  }

  DiagnosticCsvWriter writer((dir / "diagnostics.csv").string());
  SupDiagnostic sup;
  RunResult res;
  try {
    res = run(cfg, [&](const DiagnosticRecord& r) {
      writer.append(r);
      sup.observe(r);
    });
  } catch (const std::exception& e) {
    writer.comment(std::string("aborted: ") + e.what());
    throw;
  }

  write_text_file((dir / "profile.csv").string(), profile_to_csv(res.profile));
  write_text_file((dir / "diagnostics.jsonl").string(),
                  records_to_jsonl(res.records));

  const FitModel model = cfg.weight.kind == WeightKind::Exponential
                             ? FitModel::Exponential
                             : FitModel::Algebraic;
  DecayFit fit;
  fit.exponent = std::nan("");
  const std::string ftxt = fit_text(res.records, model, &fit);
  write_text_file((dir / "fit.txt").string(), ftxt);

  const DiagnosticRecord& last = res.records.back();
  std::cout << "regime:  " << to_string(rep.regime.tag) << "\n"
            << "steps:   " << res.records.size() << " records in [0, "
            << format_g17(last.t) << "]\n"
            << "E0:      stationary " << format_g17(res.E0_stationary)
            << ", final " << format_g17(last.e0_boundary) << " (mismatch "
            << format_g17(last.e0_boundary - res.E0_stationary) << ")\n"
            << "sup:     norm_h2 + |sigmax0| = " << format_g17(sup.value())
            << "\n";
  if (std::isfinite(fit.exponent))
    std::cout << "fit:     "
              << (model == FitModel::Exponential ? "exponential" : "algebraic")
              << " exponent " << format_g17(fit.exponent) << ", r^2 "
              << format_g17(fit.r_squared) << "\n";
  else
    std::cout << "fit:     " << ftxt.substr(ftxt.find("status")) << "\n";

  if (o.svg == "on") {
    std::vector<double> t, e, h2, ns, s0, sx0, de0;
    for (const DiagnosticRecord& r : res.records) {
      t.push_back(r.t);
      e.push_back(r.e_weighted);
      h2.push_back(r.norm_h2);
      ns.push_back(r.norm_sigma);
      s0.push_back(r.sigma0);
      sx0.push_back(r.sigmax0);
      de0.push_back(r.e0_boundary - res.E0_stationary);
    }
    write_text_file((dir / "decay.svg").string(),
                    svg_line_plot("weighted energy and norms", "t", "value",
                                  {make_series("E_weighted", t, e),
                                   make_series("norm_h2", t, h2),
                                   make_series("norm_sigma", t, ns)},
                                  true));
    write_text_file((dir / "boundary.svg").string(),
                    svg_line_plot("boundary traces", "t", "value",
                                  {make_series("sigma0", t, s0),
                                   make_series("sigmax0", t, sx0),
                                   make_series("E0 - E0s", t, de0)},
                                  false));
    write_profile_svgs(dir, res.profile);
  }
  return 0;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (c == '/' || c == '\\' || c == ' ') ? '_' : c;
  return out;
}

int cmd_sweep(const CommonOpts& o, int workers) {
  const ConfigMap base = load_map(o);
  const SweepSpec spec = resolve_sweep(base);
  const std::size_t n = spec.values.size();

  // resolve every point first so a typo aborts before any computation
  std::vector<SimConfig> cfgs;
  cfgs.reserve(n);
  for (const std::string& value : spec.values) {
    ConfigMap m = base;
    m.erase("sweep");
    m[spec.section][spec.key] = value;
    cfgs.push_back(resolve_config(m));
  }

  const fs::path dir(o.out_dir);
  fs::create_directories(dir);

  struct Row {
    std::string status;
    double e_final = std::nan(""), h2_final = std::nan("");
    double e0_final = std::nan(""), exponent = std::nan(""),
           r2 = std::nan("");
  };
  std::vector<Row> rows(n);

  std::atomic<std::size_t> cursor{0};
  const auto work = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= n) return;
      Row& row = rows[i];
      const fs::path sub =
          dir / (spec.section + "." + spec.key + "=" + sanitize(spec.values[i]));
      try {
        fs::create_directories(sub);
        write_provenance(sub, cfgs[i], o);
        const RunResult res = run(cfgs[i]);
        write_text_file((sub / "diagnostics.csv").string(),
                        records_to_csv(res.records));
        const DiagnosticRecord& last = res.records.back();
        row.e_final = last.e_weighted;
        row.h2_final = last.norm_h2;
        row.e0_final = last.e0_boundary;
        row.status = "ok";
        try {
          const FitModel model = cfgs[i].weight.kind == WeightKind::Exponential
                                     ? FitModel::Exponential
                                     : FitModel::Algebraic;
          const DecayFit fit = fit_decay(res.records, model, kFitTimeBeta);
          row.exponent = fit.exponent;
          row.r2 = fit.r_squared;
        } catch (const SolverError&) {
          // floored or thin series: leave the fit columns empty
        }
      } catch (const NonexistenceError&) {
        row.status = "no_solution";
      } catch (const std::exception& e) {
        std::string msg = e.what();
        for (char& c : msg)
          if (c == ',' || c == '\n') c = ';';
        row.status = "error: " + msg;
      }
    }
  };

  const int nthreads =
      std::max(1, std::min<int>(workers, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int i = 1; i < nthreads; ++i) pool.emplace_back(work);
  work();
  for (std::thread& th : pool) th.join();

  std::string csv =
      spec.section + "." + spec.key +
      ",status,E_weighted_final,norm_h2_final,E0_final,fit_exponent,fit_r2\n";
  bool failed = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Row& row = rows[i];
    csv += spec.values[i] + "," + row.status + "," + format_g17(row.e_final) +
           "," + format_g17(row.h2_final) + "," + format_g17(row.e0_final) +
           "," + format_g17(row.exponent) + "," + format_g17(row.r2) + "\n";
    if (row.status.rfind("error", 0) == 0) failed = true;
    std::cout << spec.section << "." << spec.key << " = " << spec.values[i]
              << ": " << row.status << "\n";
  }
  write_text_file((dir / "sweep_summary.csv").string(), csv);
  std::cout << "wrote " << (dir / "sweep_summary.csv").string() << "\n";
  return failed ? 3 : 0;
}

int cmd_lambda0(const std::vector<double>& gammas) {
  for (double g : gammas)
    std::cout << "lambda0(" << format_g17(g) << ") = " << format_g17(lambda0(g))
              << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plasma sheath laboratory: stationary profiles, existence "
               "verdicts and perturbation dynamics"};
  app.require_subcommand(1);

  CommonOpts sheath_opts, evolve_opts, sweep_opts, check_opts;
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers <= 0) workers = 2;
  std::vector<double> gammas;

  CLI::App* sheath_cmd = app.add_subcommand(
      "sheath", "solve the stationary sheath and verify its spatial decay");
  add_input_opts(sheath_cmd, sheath_opts);
  add_output_opts(sheath_cmd, sheath_opts);

  CLI::App* evolve_cmd = app.add_subcommand(
      "evolve", "run the perturbed dynamics and record decay diagnostics");
  add_input_opts(evolve_cmd, evolve_opts);
  add_output_opts(evolve_cmd, evolve_opts);

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "run the [sweep] list of a config, one run per value");
  add_input_opts(sweep_cmd, sweep_opts);
  add_output_opts(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--workers", workers, "parallel runs (default: cores)")
      ->check(CLI::PositiveNumber);

  CLI::App* lambda_cmd = app.add_subcommand(
      "lambda0", "evaluate the cubic root controlling the algebraic decay exponent");
  lambda_cmd
      ->add_option("--gamma", gammas, "adiabatic exponent(s), repeatable")
      ->expected(-1);

  CLI::App* check_cmd = app.add_subcommand(
      "check", "print the existence verdict as JSON (exit 2 when none exists)");
  add_input_opts(check_cmd, check_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*sheath_cmd) return cmd_sheath(sheath_opts);
    if (*evolve_cmd) return cmd_evolve(evolve_opts);
    if (*sweep_cmd) return cmd_sweep(sweep_opts, workers);
    if (*lambda_cmd)
      return cmd_lambda0(gammas.empty() ? std::vector<double>{2.0} : gammas);
    if (*check_cmd) return cmd_check(check_opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NonexistenceError& e) {
    std::cerr << "nonexistence: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
