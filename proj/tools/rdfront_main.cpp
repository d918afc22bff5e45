#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "rdfront/pipeline.hpp"

namespace {

using namespace rdfront;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  double dx = 0.0, dt = 0.0, tol = 0.0;
  std::string schedule;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* app, CommonArgs& args) {
  app->add_option("--config", args.config_path, "experiment config file")->required();
  app->add_option("--out", args.out_dir, "output directory");
  app->add_option("--dx", args.dx, "spatial step override");
  app->add_option("--dt", args.dt, "time step override");
  app->add_option("--tol", args.tol, "tolerance override");
  app->add_option("--schedule", args.schedule, "comma-separated n schedule");
  app->add_option("--seed", args.seed, "sampling seed")->each([&args](const std::string&) {
    args.seed_set = true;
  });
}

ExperimentConfig load(const CommonArgs& args) {
  ExperimentConfig cfg = load_config_file(args.config_path);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.dx > 0.0) cfg.entire.dx = args.dx;
  if (args.dt > 0.0) {
    cfg.entire.dt = args.dt;
    cfg.sis.dt = args.dt;
  }
  if (args.tol > 0.0) {
    cfg.sis.tol = args.tol;
    cfg.front.tol = args.tol;
  }
  if (args.seed_set) cfg.seed = args.seed;
  if (!args.schedule.empty()) {
    cfg.entire.n_schedule.clear();
    std::string s = args.schedule;
    std::size_t pos = 0;
    while (pos < s.size()) {
      std::size_t next = s.find(',', pos);
      if (next == std::string::npos) next = s.size();
      cfg.entire.n_schedule.push_back(std::stod(s.substr(pos, next - pos)));
      pos = next + 1;
    }
  }
  std::filesystem::create_directories(cfg.out_dir);
  std::filesystem::create_directories(cfg.out_dir + "/cache");
  return cfg;
}

int print_assumptions(const AssumptionReport& rep) {
  for (const auto& e : rep.entries) {
    const char* status = e.status == CheckStatus::pass
                             ? "pass"
                             : (e.status == CheckStatus::heuristic_pass ? "heuristic-pass"
                                                                        : "FAIL");
    std::printf("  %-28s %-14s %s\n", e.name.c_str(), status, e.detail.c_str());
  }
  return rep.ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rdfront: traveling fronts and front-like entire solutions of "
               "monostable reaction-diffusion systems"};
  app.require_subcommand(1);

  CommonArgs args;
  auto* sc_spectral = app.add_subcommand("spectral", "critical speed and decay data");
  auto* sc_verify = app.add_subcommand("verify-assumptions", "hypothesis checkers");
  auto* sc_sis = app.add_subcommand("sis", "spatially independent solution");
  auto* sc_front = app.add_subcommand("front", "traveling front profiles");
  auto* sc_entire = app.add_subcommand("entire", "entire-solution construction");
  auto* sc_pipeline = app.add_subcommand("pipeline", "full run: checkers through entire");
  for (auto* sc : {sc_spectral, sc_verify, sc_sis, sc_front, sc_entire, sc_pipeline})
    add_common(sc, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 4;
  }

  try {
    ExperimentConfig cfg = load(args);
    RunManifest mf;
    mf.config_digest = hex64(config_hash(cfg));
    Workbench wb = make_workbench(cfg);
    StageOutputs out;
    int code = 0;

    if (sc_spectral->parsed()) {
      code = run_spectral_stage(cfg, wb, mf);
      std::printf("lambda_star=%.12g c_star=%.12g s0=%.12g\n", wb.spectral.lambda_star(),
                  wb.spectral.c_star(), wb.spectral.s0());
    } else if (sc_verify->parsed()) {
      code = run_checker_stage(cfg, wb, mf, out);
      code = std::max(code, print_assumptions(out.assumptions));
    } else if (sc_sis->parsed()) {
      code = run_sis_stage(cfg, wb, mf, out);
      std::printf("sis: %d nodes, wrote %s/sis.csv\n", out.gamma.n_nodes(),
                  cfg.out_dir.c_str());
    } else if (sc_front->parsed()) {
      code = run_front_stage(cfg, wb, mf, out);
      for (std::size_t i = 0; i < out.fronts.size(); ++i)
        if (cfg.entire.chi[i])
          std::printf("front %zu: c=%.6g lambda1=%.6g residual=%.3g\n", i + 1,
                      out.fronts[i].c, out.fronts[i].lambda1, out.fronts[i].residual);
    } else if (sc_entire->parsed()) {
      int c1 = run_checker_stage(cfg, wb, mf, out);
      if (c1 != 0) {
        print_assumptions(out.assumptions);
        mf.write(cfg.out_dir + "/manifest.json");
        return c1;
      }
      code = run_sis_stage(cfg, wb, mf, out);
      if (code == 0) code = run_front_stage(cfg, wb, mf, out);
      if (code == 0) code = run_entire_stage(cfg, wb, mf, out);
      const auto& rep = out.entire.report;
      std::printf("entire: lower_margin=%.3e upper_margin=%.3e monotone_in_n=%s "
                  "monotone_in_t=%s\n",
                  rep.lower_margin, rep.upper_margin,
                  rep.monotone_in_n_ok ? "yes" : "NO", rep.monotone_in_t_ok ? "yes" : "NO");
    } else if (sc_pipeline->parsed()) {
      return run_pipeline(cfg);
    }
    mf.write(cfg.out_dir + "/manifest.json");
    return code;
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 4;
  } catch (const assumption_error& e) {
    std::fprintf(stderr, "assumption failure: %s\n", e.what());
    return 2;
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
