#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lcqft/cli_io.hpp"
#include "lcqft/errors.hpp"
#include "lcqft/suites.hpp"

namespace {

constexpr int kUsage = 2;

int run_suites(const std::string& suite, const std::string& config, const std::uint64_t* seed, const std::string& out,
               const std::string& format, bool timing) {
  auto cfg = lcqft::suites::resolve_config(config);
  if (seed) cfg.set_seed(*seed);
  const auto report = lcqft::suites::run_suites(suite, cfg);
  const lcqft::suites::ExportOptions opt{timing};
  if (out.empty() || out == "-")
    std::cout << (format == "csv" ? lcqft::suites::to_csv(report, opt) : lcqft::suites::to_json(report, opt));
  else
    lcqft::suites::export_report(report, format, out, opt);
  for (const auto& s : report.suites)
    for (const auto& c : s.checks)
      if (c.status != lcqft::suites::Status::Pass)
        std::cerr << s.suite << "/" << c.name << ": " << lcqft::suites::status_name(c.status) << " (metric " << c.metric
                  << ", tolerance " << c.tolerance << ")\n";
  return lcqft::suites::exit_code(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lcqft: verification suites and geometric checks"};
  app.require_subcommand(0, 1);

  std::string suite, config, out, format = "json";
  std::uint64_t seed = 0;
  bool no_timing = false;
  app.add_option("--suite", suite, "suite name or 'all'");
  app.add_option("--config", config, std::string("key-value config file (default: $") + lcqft::suites::kConfigEnv + ")");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed, overrides the config");
  app.add_option("--out", out, "output path, '-' for stdout");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--no-timing", no_timing, "write wall_time_ms = 0 for byte-stable reports");

  auto* cone = app.add_subcommand("cone-check", "Gamma_n membership of a JSON list of (x, xi)");
  std::string cone_input, gamma1 = "strict";
  bool null_geodesic = false;
  int generators = 64;
  cone->add_option("input", cone_input, "JSON file")->required();
  cone->add_flag("--null-geodesic", null_geodesic, "edges only along null geodesics");
  cone->add_option("--gamma1", gamma1, "reading of Gamma_1")->check(CLI::IsMember({"strict", "loose"}));
  cone->add_option("--generators", generators, "null generators for the LP")->check(CLI::PositiveNumber);
  cone->add_option("--out", out, "output path");

  auto* wf = app.add_subcommand("wf-scan", "decay scan of a built-in distribution");
  std::string dist;
  std::vector<double> point{0.0, 0.0};
  lcqft::cones::WFScanConfig scan;
  wf->add_option("distribution", dist, "one of gaussian, delta, delta-line, theta, theta-phase")->required();
  wf->add_option("--point", point, "base point t x")->expected(2);
  wf->add_option("--directions", scan.directions, "number of directions")->check(CLI::PositiveNumber);
  wf->add_option("--window", scan.window, "window width");
  wf->add_option("--order", scan.order, "singular if the decay slope exceeds -order");
  wf->add_option("--out", out, "output path");

  auto* deform = app.add_subcommand("deform", "certify K1 in D(K2) by halving beta on the slab");
  std::string scenario;
  deform->add_option("scenario", scenario, "JSON scenario file")->required();
  deform->add_option("--out", out, "certificate path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (cone->parsed()) {
      const auto cfg = lcqft::cli::parse_cone_input(lcqft::cli::read_file(cone_input));
      lcqft::cones::ConeOptions opt;
      opt.null_geodesic = null_geodesic;
      opt.gamma1 = gamma1 == "loose" ? lcqft::cones::Gamma1Reading::Loose : lcqft::cones::Gamma1Reading::Strict;
      opt.generators = generators;
      const auto v = lcqft::cones::in_gamma_n(cfg, opt);
      lcqft::cli::write_output(out, lcqft::cli::cone_verdict_json(cfg, v));
      return v.member ? 0 : 1;
    }
    if (wf->parsed()) {
      const lcqft::cones::Vec2 x(point[0], point[1]);
      const auto res = lcqft::cones::wf_decay_scan(lcqft::cones::builtin_distribution(dist), x, scan);
      lcqft::cli::write_output(out, lcqft::cli::wf_scan_json(dist, x, res));
      return 0;
    }
    if (deform->parsed()) {
      const auto s = lcqft::cli::parse_scenario(lcqft::cli::read_file(scenario));
      const auto r = lcqft::lattice::deform_and_certify(s.scenario.spec, s.scenario.K1, s.scenario.K2, s.max_halvings);
      lcqft::cli::write_output(out, lcqft::cli::deformation_certificate_json(s, r));
      return r.certified ? 0 : 1;
    }
    if (suite.empty()) {
      std::cerr << app.help();
      return kUsage;
    }
    return run_suites(suite, config, seed_opt->count() ? &seed : nullptr, out, format, !no_timing);
  } catch (const lcqft::Error& e) {
    std::cerr << "lcqft: " << e.what() << "\n";
    switch (e.code()) {
      case lcqft::ErrorCode::UnknownSuite:
      case lcqft::ErrorCode::ConfigParse:
      case lcqft::ErrorCode::IoError:
      case lcqft::ErrorCode::InvalidArgument:
      case lcqft::ErrorCode::GeometryError:
      case lcqft::ErrorCode::CFLViolation:
      case lcqft::ErrorCode::SlabTooThin:
      case lcqft::ErrorCode::NotAchronal:
      case lcqft::ErrorCode::GridTooSmall: return kUsage;
      default: return 1;
    }
  }
}
