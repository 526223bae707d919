#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "sheathlab/config.hpp"
#include "sheathlab/errors.hpp"
#include "sheathlab/io.hpp"
#include "sheathlab/stationary.hpp"

using namespace sheathlab;
namespace fs = std::filesystem;

namespace {

// message must mention every fragment, so errors stay actionable
void check_config_error(const std::function<void()>& f,
                        const std::vector<std::string>& fragments) {
  try {
    f();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (const std::string& frag : fragments) {
      INFO("message: ", msg, " fragment: ", frag);
      CHECK(msg.find(frag) != std::string::npos);
    }
  }
}

fs::path fresh_dir(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / ("sheathlab_test_" + leaf);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

#ifdef SHEATHLAB_CLI_PATH
int run_cli(const std::string& args, const fs::path& capture) {
  const std::string cmd = std::string(SHEATHLAB_CLI_PATH) + " " + args + " > " +
                          capture.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}
#endif

}  // namespace

TEST_CASE("ini parser handles sections, comments, whitespace and blank lines") {
  const ConfigMap map = parse_ini(
      "# leading comment\n"
      "\n"
      "[physics]\n"
      "  u_inf =  -2.0   \n"
      "; other comment style\n"
      "gamma=2\n"
      "[grid]\n"
      "N = 512\n"
      "[physics]\n"
      "R = 1\n");
  CHECK(map.at("physics").at("u_inf") == "-2.0");
  CHECK(map.at("physics").at("gamma") == "2");
  CHECK(map.at("physics").at("R") == "1");  // reopened section merges
  CHECK(map.at("grid").at("N") == "512");
  CHECK(map.size() == 2);
}

TEST_CASE("ini parser errors carry the line number and the offending text") {
  check_config_error([] { parse_ini("[physics]\nu_inf = -2\nwhat is this\n"); },
                     {"line 3", "key = value"});
  check_config_error([] { parse_ini("x = 1\n"); }, {"line 1", "before any"});
  check_config_error([] { parse_ini("[physics\nm = 1\n"); },
                     {"line 1", "malformed"});
  check_config_error([] { parse_ini("[]\n"); }, {"line 1"});
  check_config_error(
      [] { parse_ini("[run]\ncfl = 0.5\ncfl = 0.4\n"); },
      {"line 3", "duplicate key", "cfl"});
  check_config_error([] { parse_ini("[grid]\n = 4\n"); },
                     {"line 2", "empty key"});
}

TEST_CASE("resolver fills defaults and rejects unknown names and bad values") {
  const SimConfig cfg = resolve_config(parse_ini(
      "[physics]\nu_inf = -2\nu_e = 2.1\n"));
  CHECK(cfg.params.gamma == 2.0);  // defaults kept
  CHECK(cfg.params.u_inf == -2.0);
  CHECK(cfg.grid.N == 2048);
  CHECK(cfg.grid.L == default_domain_length(cfg.params));  // L derived
  CHECK(cfg.cfl == 0.5);
  CHECK(cfg.t_end == 50.0);
  CHECK(cfg.output_every == doctest::Approx(0.1));

  check_config_error(
      [] { resolve_config(parse_ini("[physic]\nm = 1\n")); },
      {"unknown section", "physic"});
  check_config_error(
      [] { resolve_config(parse_ini("[physics]\nmass = 1\n")); },
      {"[physics]", "unknown key", "mass"});
  check_config_error(
      [] { resolve_config(parse_ini("[physics]\nm = heavy\n")); },
      {"[physics] m", "not a finite number", "heavy"});
  check_config_error(
      [] { resolve_config(parse_ini("[grid]\nN = 12.5\n")); },
      {"[grid] N", "not an integer"});
  check_config_error(
      [] { resolve_config(parse_ini("[perturbation]\non_v = maybe\n")); },
      {"on_v", "not a boolean", "maybe"});
  check_config_error(
      [] { resolve_config(parse_ini("[physics]\ngamma = 0.9\n")); },
      {"[physics]", "gamma must be > 1"});
  check_config_error(
      [] { resolve_config(parse_ini("[run]\ncfl = 0.99\n")); },
      {"cfl"});
}

TEST_CASE("mach and phi_b conveniences derive the velocity pair exactly") {
  const SimConfig cfg = resolve_config(parse_ini(
      "[physics]\nmach = degenerate\nphi_b = 0.01\n"));
  // gamma R T_inf + 1 = 3 with unit mass
  CHECK(cfg.params.u_inf == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-15));
  CHECK(cfg.params.u_e ==
        doctest::Approx(std::sqrt(3.0) * std::exp(0.01)).epsilon(1e-15));

  check_config_error(
      [] {
        resolve_config(parse_ini("[physics]\nmach = degenerate\nu_inf = -2\n"));
      },
      {"mach", "u_inf", "mutually exclusive"});
  check_config_error(
      [] { resolve_config(parse_ini("[physics]\nphi_b = 0.1\nu_e = 2\n")); },
      {"phi_b", "u_e", "mutually exclusive"});
  check_config_error(
      [] { resolve_config(parse_ini("[physics]\nmach = sonic\n")); },
      {"mach", "degenerate", "sonic"});
}

TEST_CASE("presets resolve to their advertised existence branches") {
  REQUIRE(preset_names() ==
          std::vector<std::string>{"nondegenerate", "degenerate", "forbidden",
                                   "trivial"});
  const auto verdict_of = [](const std::string& name) {
    const SimConfig cfg = resolve_config(preset_config(name));
    return existence_check(cfg.params);
  };

  const ExistenceReport nd = verdict_of("nondegenerate");
  CHECK(nd.verdict == Existence::Exists);
  CHECK(nd.regime.tag == RegimeTag::Nondegenerate);

  const ExistenceReport dg = verdict_of("degenerate");
  CHECK(dg.verdict == Existence::Exists);
  CHECK(dg.regime.tag == RegimeTag::Degenerate);

  const ExistenceReport fb = verdict_of("forbidden");
  CHECK(fb.verdict == Existence::NoSolution);
  CHECK(fb.regime.tag == RegimeTag::ForbiddenWindow);

  const ExistenceReport tr = verdict_of("trivial");
  CHECK(tr.verdict == Existence::TrivialOnly);
  CHECK(tr.regime.tag == RegimeTag::Subsonic);

  CHECK_THROWS_AS(preset_config("supersonic"), ConfigError);

  // the nondegenerate preset carries the documented physics values
  const SimConfig nd_cfg = resolve_config(preset_config("nondegenerate"));
  CHECK(nd_cfg.params.u_inf == -2.0);
  CHECK(nd_cfg.params.u_e == doctest::Approx(2.0 * std::exp(0.05)).epsilon(1e-15));
  CHECK(nd_cfg.grid.N == 2048);
  CHECK(nd_cfg.perturbation.shape == PerturbationSpec::Shape::GaussianBump);
  CHECK(nd_cfg.perturbation.amplitude == 1e-3);
  CHECK(nd_cfg.weight.kind == WeightKind::Exponential);
  CHECK(nd_cfg.weight.beta == 0.5);
}

TEST_CASE("serialized configs round-trip through the parser unchanged") {
  SimConfig cfg = resolve_config(preset_config("degenerate"));
  cfg.perturbation.r0 = -3.5e-4;
  cfg.perturbation.on_T = true;
  cfg.cfl = 0.45;
  const SimConfig back = resolve_config(parse_ini(serialize_config(cfg)));
  CHECK(back.params.m == cfg.params.m);
  CHECK(back.params.gamma == cfg.params.gamma);
  CHECK(back.params.R == cfg.params.R);
  CHECK(back.params.T_inf == cfg.params.T_inf);
  CHECK(back.params.u_inf == cfg.params.u_inf);
  CHECK(back.params.u_e == cfg.params.u_e);
  CHECK(back.grid.L == cfg.grid.L);
  CHECK(back.grid.N == cfg.grid.N);
  CHECK(back.perturbation.shape == cfg.perturbation.shape);
  CHECK(back.perturbation.amplitude == cfg.perturbation.amplitude);
  CHECK(back.perturbation.center == cfg.perturbation.center);
  CHECK(back.perturbation.width == cfg.perturbation.width);
  CHECK(back.perturbation.decay == cfg.perturbation.decay);
  CHECK(back.perturbation.on_v == cfg.perturbation.on_v);
  CHECK(back.perturbation.on_u == cfg.perturbation.on_u);
  CHECK(back.perturbation.on_T == cfg.perturbation.on_T);
  CHECK(back.perturbation.r0 == cfg.perturbation.r0);
  CHECK(back.weight.kind == cfg.weight.kind);
  CHECK(back.weight.alpha == cfg.weight.alpha);
  CHECK(back.weight.beta == cfg.weight.beta);
  CHECK(back.weight.order == cfg.weight.order);
  CHECK(back.cfl == cfg.cfl);
  CHECK(back.t_end == cfg.t_end);
  CHECK(back.output_every == cfg.output_every);
}

TEST_CASE("sweep specs parse the dotted key and the value list") {
  const SweepSpec spec = resolve_sweep(parse_ini(
      "[physics]\nu_inf = -2\n"
      "[sweep]\nkey = physics.u_inf\nvalues = -2, -1.9,-1.8\n"));
  CHECK(spec.section == "physics");
  CHECK(spec.key == "u_inf");
  CHECK(spec.values == std::vector<std::string>{"-2", "-1.9", "-1.8"});

  check_config_error([] { resolve_sweep(parse_ini("[physics]\nm = 1\n")); },
                     {"no [sweep]"});
  check_config_error(
      [] { resolve_sweep(parse_ini("[sweep]\nkey = u_inf\nvalues = 1\n")); },
      {"section.name"});
  check_config_error(
      [] { resolve_sweep(parse_ini("[sweep]\nkey = physics.m\nvalues = 1,,2\n")); },
      {"empty entry"});
  check_config_error(
      [] { resolve_sweep(parse_ini("[sweep]\nstep = 3\n")); },
      {"[sweep]", "unknown key", "step"});
}

TEST_CASE("g17 formatting round-trips doubles exactly") {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 5.0, 0.0, -0.0,
                   0.0816496580927726, 2.2250738585072014e-308}) {
    const std::string s = format_g17(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("csv and jsonl serializers emit the pinned schema") {
  DiagnosticRecord a;
  a.t = 0.5;
  a.e_weighted = 1.25e-6;
  a.norm_h1 = 123456789.0;  // must NOT appear in the serialized row
  a.norm_h2 = 3e-3;
  a.norm_sigma = 4e-4;
  a.sigma0 = -1e-5;
  a.sigmax0 = 2e-5;
  a.e0_boundary = -0.0355;
  DiagnosticRecord b = a;
  b.t = 0.75;

  const std::string csv = records_to_csv(std::vector<DiagnosticRecord>{a, b});
  CHECK(csv.find("t,E_weighted,norm_phi_psi_zeta_h2,norm_sigma,sigma0,sigmax0,"
                 "E0_boundary\n") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.find("123456789") == std::string::npos);  // norm_h1 not serialized

  const std::string row = record_to_csv_row(a);
  CHECK(std::count(row.begin(), row.end(), ',') == 6);
  CHECK(row.substr(0, 4) == "0.5,");

  const std::string jsonl =
      records_to_jsonl(std::vector<DiagnosticRecord>{a, b});
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 2);
  CHECK(jsonl.find("{\"t\":0.5,\"E_weighted\":") == 0);
  for (const char* key : {"\"norm_phi_psi_zeta_h2\":", "\"norm_sigma\":",
                          "\"sigma0\":", "\"sigmax0\":", "\"E0_boundary\":"})
    CHECK(jsonl.find(key) != std::string::npos);
}

TEST_CASE("incremental csv writer appends rows and comment markers") {
  const fs::path dir = fresh_dir("csvwriter");
  const fs::path file = dir / "diag.csv";
  {
    DiagnosticCsvWriter w(file.string());
    DiagnosticRecord r;
    r.t = 0.0;
    r.e_weighted = 1e-3;
    w.append(r);
    r.t = 0.5;  // exactly representable, so %.17g prints it verbatim
    w.append(r);
    w.comment("aborted: test marker");
  }
  const std::string text = read_text_file(file.string());
  CHECK(text.find(kDiagnosticsCsvHeader) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(text.find("\n0,") != std::string::npos);
  CHECK(text.find("\n0.5,") != std::string::npos);
  CHECK(text.find("# aborted: test marker\n") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("svg plots are well-formed for ordinary, empty and log-scale data") {
  PlotSeries s;
  s.label = "energy <decay> & more";
  s.x = {0.0, 1.0, 2.0, 3.0};
  s.y = {1.0, 0.1, 0.0, -0.01};  // zero and negative must be skipped in log mode

  const std::string lin = svg_line_plot("title", "t", "E", {s}, false);
  CHECK(lin.rfind("<svg", 0) == 0);
  CHECK(lin.find("</svg>") != std::string::npos);
  CHECK(lin.find("<polyline") != std::string::npos);
  CHECK(lin.find("&lt;decay&gt;") != std::string::npos);
  CHECK(lin.find("&amp;") != std::string::npos);

  const std::string log = svg_line_plot("title", "t", "E", {s}, true);
  CHECK(log.find("<polyline") != std::string::npos);

  const std::string empty = svg_line_plot("nothing", "x", "y", {}, false);
  CHECK(empty.rfind("<svg", 0) == 0);
  CHECK(empty.find("</svg>") != std::string::npos);

  PlotSeries flat;
  flat.label = "flat";
  flat.x = {1.0, 2.0};
  flat.y = {5.0, 5.0};  // degenerate vertical range
  CHECK(svg_line_plot("flat", "x", "y", {flat}, false).find("<polyline") !=
        std::string::npos);
}

#ifdef SHEATHLAB_CLI_PATH

TEST_CASE("cli exit codes separate success, config, nonexistence and usage") {
  const fs::path dir = fresh_dir("cli_exit");
  CHECK(run_cli("check --preset forbidden", dir / "o1") == 2);
  CHECK(run_cli("check --preset trivial", dir / "o2") == 0);
  CHECK(run_cli("check --preset nondegenerate", dir / "o3") == 0);
  CHECK(run_cli("check --preset nosuchpreset", dir / "o4") == 1);
  CHECK(run_cli("check", dir / "o5") == 1);       // missing --config/--preset
  CHECK(run_cli("", dir / "o6") == 1);            // missing subcommand
  CHECK(run_cli("--help", dir / "o7") == 0);
  CHECK(run_cli("sheath --preset forbidden --out " + (dir / "fb").string(),
                dir / "o8") == 2);

  const std::string fb_json = read_text_file((dir / "o1").string());
  CHECK(fb_json.find("\"verdict\":\"NoSolution\"") != std::string::npos);
  CHECK(fb_json.find("\"regime\":\"ForbiddenWindow\"") != std::string::npos);
  const std::string tr_json = read_text_file((dir / "o2").string());
  CHECK(tr_json.find("\"verdict\":\"TrivialOnly\"") != std::string::npos);
  CHECK(tr_json.find("\"regime\":\"Subsonic\"") != std::string::npos);
  // the nonexistent sheath still documents its verdict on disk
  CHECK(read_text_file((dir / "fb" / "existence.txt").string())
            .find("verdict = NoSolution") == 0);
  fs::remove_all(dir);
}

TEST_CASE("cli evolve runs are byte-identical across invocations") {
  const fs::path dir = fresh_dir("cli_determinism");
  write_text_file((dir / "cfg.ini").string(),
                  "[physics]\nu_inf = -2\nphi_b = 0.05\n"
                  "[grid]\nN = 256\n"
                  "[perturbation]\nshape = gaussian\namplitude = 1e-3\n"
                  "[run]\nt_end = 1\noutput_every = 0.1\n");
  const std::string base = "evolve --config " + (dir / "cfg.ini").string();
  CHECK(run_cli(base + " --out " + (dir / "a").string() + " --svg off",
                dir / "oa") == 0);
  CHECK(run_cli(base + " --out " + (dir / "b").string() + " --svg off",
                dir / "ob") == 0);
  const std::string csv_a = read_text_file((dir / "a" / "diagnostics.csv").string());
  const std::string csv_b = read_text_file((dir / "b" / "diagnostics.csv").string());
  CHECK(csv_a == csv_b);
  CHECK(std::count(csv_a.begin(), csv_a.end(), '\n') == 12);  // header + 11
  CHECK(read_text_file((dir / "a" / "diagnostics.jsonl").string()) ==
        read_text_file((dir / "b" / "diagnostics.jsonl").string()));

  // provenance file reproduces the resolved run exactly
  const SimConfig prov =
      resolve_config(parse_ini_file((dir / "a" / "config.ini").string()));
  CHECK(prov.grid.N == 256);
  CHECK(prov.t_end == 1.0);
  CHECK(prov.params.u_e == doctest::Approx(2.0 * std::exp(0.05)).epsilon(1e-15));
  fs::remove_all(dir);
}

TEST_CASE("cli marks a constant unperturbed run as a degenerate fit") {
  // phi_b = 0 gives the exactly constant profile, and with u = -2, T = 1 the
  // upwind stencils annihilate it exactly in floating point: every energy
  // record sits at the floor, which the fitter must report instead of
  // inventing an exponent
  const fs::path dir = fresh_dir("cli_degenerate_fit");
  write_text_file((dir / "cfg.ini").string(),
                  "[physics]\nu_inf = -2\nphi_b = 0\n"
                  "[grid]\nN = 256\n"
                  "[perturbation]\nshape = none\n"
                  "[run]\nt_end = 3\noutput_every = 0.1\n");
  CHECK(run_cli("evolve --config " + (dir / "cfg.ini").string() + " --out " +
                    (dir / "run").string() + " --svg off",
                dir / "out") == 0);
  const std::string fit = read_text_file((dir / "run" / "fit.txt").string());
  CHECK(fit.find("status = degenerate_fit") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("cli sweep crosses the existence boundary and reports per-point status") {
  const fs::path dir = fresh_dir("cli_sweep");
  write_text_file((dir / "cfg.ini").string(),
                  "[physics]\nu_inf = -2\nphi_b = 0.05\n"
                  "[grid]\nN = 256\n"
                  "[perturbation]\nshape = gaussian\namplitude = 1e-3\n"
                  "[run]\nt_end = 1\noutput_every = 0.25\n"
                  "[sweep]\nkey = physics.u_inf\nvalues = -2, -1.6\n");
  CHECK(run_cli("sweep --config " + (dir / "cfg.ini").string() + " --out " +
                    (dir / "sw").string() + " --svg off --workers 2",
                dir / "out") == 0);
  const std::string summary =
      read_text_file((dir / "sw" / "sweep_summary.csv").string());
  CHECK(summary.find("physics.u_inf,status,") == 0);
  CHECK(summary.find("-2,ok,") != std::string::npos);
  CHECK(summary.find("-1.6,no_solution,") != std::string::npos);
  CHECK(fs::exists(dir / "sw" / "physics.u_inf=-2" / "diagnostics.csv"));
  CHECK(!fs::exists(dir / "sw" / "physics.u_inf=-1.6" / "diagnostics.csv"));
  fs::remove_all(dir);
}

TEST_CASE("cli lambda0 prints the advertised roots") {
  const fs::path dir = fresh_dir("cli_lambda0");
  CHECK(run_cli("lambda0 --gamma 2", dir / "out") == 0);
  const std::string text = read_text_file((dir / "out").string());
  CHECK(text.find("lambda0(2) = 5.0994930446292") != std::string::npos);
  fs::remove_all(dir);
}

#endif  // SHEATHLAB_CLI_PATH
