#include "rdfront/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "rdfront/numerics.hpp"

namespace rdfront {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct StageTimer {
  RunManifest& mf;
  std::string name;
  double start;
  StageTimer(RunManifest& m, std::string n) : mf(m), name(std::move(n)), start(now_seconds()) {}
  void done(const std::string& verdict) {
    mf.stages.push_back({name, now_seconds() - start, verdict});
  }
};

std::string cache_dir(const ExperimentConfig& cfg) {
  return cfg.out_dir + "/cache";
}

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path, std::ios::trunc);
  os << j.dump(2) << "\n";
  if (!os) throw config_error("cannot write: " + path);
}

json report_to_json(const AssumptionReport& rep) {
  json out = json::array();
  for (const auto& e : rep.entries) {
    json je;
    je["name"] = e.name;
    je["status"] = e.status == CheckStatus::pass
                       ? "pass"
                       : (e.status == CheckStatus::heuristic_pass ? "heuristic-pass" : "fail");
    je["detail"] = e.detail;
    je["samples"] = e.samples;
    je["margin"] = e.margin;
    if (e.counterexample) je["counterexample"] = *e.counterexample;
    out.push_back(je);
  }
  return out;
}

std::uint64_t model_digest(const ExperimentConfig& cfg) {
  json m;
  m["kind"] = cfg.model.kind;
  m["g_kind"] = cfg.model.g_kind;
  m["registry"] = cfg.model.registry_entry;
  json params = json::object();
  for (const auto& [k, v] : cfg.model.parameters) params[k] = v;
  m["parameters"] = params;
  return fnv1a(m.dump());
}

}  // namespace

Workbench make_workbench(const ExperimentConfig& config) {
  Workbench wb;
  wb.model = config.model.build();
  wb.has_envelopes = config.entire.mode == EntireMode::noncooperative;
  if (wb.has_envelopes) {
    wb.envelopes = build_envelopes(wb.model);
    wb.lower = wb.envelopes.lower_model(wb.model);
    wb.upper = wb.envelopes.upper_model(wb.model);
    wb.run_model = wb.envelopes.middle_model(wb.model);
  } else {
    wb.run_model = wb.model;
  }
  wb.spectral = compute_cstar(wb.model);
  return wb;
}

int run_spectral_stage(const ExperimentConfig& cfg, Workbench& wb, RunManifest& mf) {
  StageTimer timer(mf, "spectral");
  const auto& sp = wb.spectral;
  std::vector<std::vector<double>> rows;
  const double hi = 2.0 * sp.lambda_star();
  for (int i = 0; i <= 100; ++i) {
    const double lam = hi * i / 100.0;
    auto p = sp.eigenpair(lam);
    std::vector<double> row{lam, p.value};
    row.insert(row.end(), p.vector.begin(), p.vector.end());
    rows.push_back(row);
  }
  std::vector<std::string> header{"lambda", "M"};
  for (int j = 0; j < sp.m(); ++j) header.push_back("v" + std::to_string(j + 1));
  const std::string csv = cfg.out_dir + "/spectral.csv";
  write_csv(csv, header, rows);
  mf.add_output(csv);

  json j;
  j["lambda_star"] = sp.lambda_star();
  j["c_star"] = sp.c_star();
  j["s0"] = sp.s0();
  j["v_star"] = sp.v_star();
  j["structure"] = sp.structure() == SpectralStructure::irreducible_cooperative
                       ? "irreducible-cooperative"
                       : "block-lower-triangular";
  const std::string js = cfg.out_dir + "/spectral.json";
  write_json(js, j);
  mf.add_output(js);
  timer.done("pass");
  return 0;
}

int run_checker_stage(const ExperimentConfig& cfg, Workbench& wb, RunManifest& mf,
                      StageOutputs& out) {
  StageTimer timer(mf, "verify-assumptions");
  CheckerOptions opts;
  opts.seed = cfg.seed;
  out.assumptions = verify_assumptions(
      wb.model, wb.spectral, wb.has_envelopes ? &wb.envelopes : nullptr, opts);
  const std::string path = cfg.out_dir + "/assumptions.json";
  write_json(path, report_to_json(out.assumptions));
  mf.add_output(path);
  const bool ok = out.assumptions.ok();
  timer.done(ok ? "pass" : "fail");
  return ok ? 0 : 2;
}

int run_sis_stage(const ExperimentConfig& cfg, Workbench& wb, RunManifest& mf,
                  StageOutputs& out) {
  StageTimer timer(mf, "sis");
  const ModelSpec& gm = wb.has_envelopes ? wb.lower : wb.model;

  json key;
  key["model"] = hex64(model_digest(cfg));
  key["system"] = wb.has_envelopes ? "lower" : "base";
  key["t0"] = cfg.sis.t0;
  key["t1"] = cfg.sis.t1;
  key["dt"] = cfg.sis.dt;
  key["tol"] = cfg.sis.tol;
  const std::string cache =
      cache_dir(cfg) + "/gamma_" + hex64(fnv1a(key.dump())) + ".bin";
  if (fs::exists(cache)) {
    out.gamma = Profile::load_binary(cache);
  } else {
    out.gamma = compute_gamma(gm, wb.spectral, cfg.sis, &out.gamma_info);
    out.gamma.save_binary(cache);
  }

  std::vector<std::vector<double>> rows;
  for (int i = 0; i < out.gamma.n_nodes(); ++i) {
    std::vector<double> row{out.gamma.t_at(i)};
    auto node = out.gamma.node(i);
    row.insert(row.end(), node.begin(), node.end());
    rows.push_back(row);
  }
  std::vector<std::string> header{"t"};
  for (int j = 0; j < out.gamma.m(); ++j) header.push_back("Gamma" + std::to_string(j + 1));
  const std::string csv = cfg.out_dir + "/sis.csv";
  write_csv(csv, header, rows);
  mf.add_output(csv);

  const GammaReport rep = verify_gamma(gm, wb.spectral, out.gamma);
  json j;
  j["residual_max"] = rep.residual_max;
  j["residual_ok"] = rep.residual_ok;
  j["monotone_ok"] = rep.monotone_ok;
  j["min_forward_difference"] = rep.min_forward_difference;
  j["bound_overshoot"] = rep.bound_overshoot;
  j["bound_ok"] = rep.bound_ok;
  j["tail_max_reldev"] = rep.tail_max_reldev;
  j["tail_ok"] = rep.tail_ok;
  const std::string js = cfg.out_dir + "/sis_report.json";
  write_json(js, j);
  mf.add_output(js);
  timer.done(rep.ok() ? "pass" : "fail");
  return rep.ok() ? 0 : 3;
}

int run_front_stage(const ExperimentConfig& cfg, Workbench& wb, RunManifest& mf,
                    StageOutputs& out) {
  StageTimer timer(mf, "front");
  const ModelSpec& fm = wb.has_envelopes ? wb.lower : wb.model;
  out.fronts.resize(cfg.entire.waves.size());
  bool all_ok = true;
  for (std::size_t i = 0; i < cfg.entire.waves.size(); ++i) {
    if (!cfg.entire.chi[i]) continue;
    const double c = cfg.entire.waves[i].c;

    json key;
    key["model"] = hex64(model_digest(cfg));
    key["system"] = wb.has_envelopes ? "lower" : "base";
    key["c"] = c;
    key["xi0"] = cfg.front.xi0;
    key["xi1"] = cfg.front.xi1;
    key["dxi"] = cfg.front.dxi;
    key["tol"] = cfg.front.tol;
    const std::string cache =
        cache_dir(cfg) + "/front_" + hex64(fnv1a(key.dump())) + ".bin";
    if (fs::exists(cache)) {
      FrontProfile fp;
      fp.profile = Profile::load_binary(cache);
      fp.c = c;
      fp.lambda1 = compute_lambda1(wb.spectral, c);
      fp.v1 = wb.spectral.v(fp.lambda1);
      out.fronts[i] = std::move(fp);
    } else {
      out.fronts[i] = compute_front(fm, wb.spectral, c, cfg.front);
      out.fronts[i].profile.save_binary(cache);
    }

    const auto& fp = out.fronts[i];
    std::vector<std::vector<double>> rows;
    for (int k = 0; k < fp.profile.n_nodes(); ++k) {
      std::vector<double> row{fp.profile.t_at(k)};
      auto node = fp.profile.node(k);
      row.insert(row.end(), node.begin(), node.end());
      rows.push_back(row);
    }
    std::vector<std::string> header{"xi"};
    for (int j = 0; j < fp.profile.m(); ++j) header.push_back("Phi" + std::to_string(j + 1));
    const std::string csv = cfg.out_dir + "/front_" + std::to_string(i + 1) + ".csv";
    write_csv(csv, header, rows);
    mf.add_output(csv);

    const FrontReport rep = verify_front(fm, fp);
    all_ok = all_ok && rep.ok();
    json j;
    j["c"] = fp.c;
    j["lambda1"] = fp.lambda1;
    j["v1"] = fp.v1;
    j["fitted_amplitude"] = fp.fitted_amplitude;
    j["fitted_slope"] = fp.fitted_slope;
    j["shift_applied"] = fp.shift_applied;
    j["residual"] = rep.residual_max;
    j["bound_overshoot"] = rep.bound_overshoot;
    j["tail_max_reldev"] = rep.tail_max_reldev;
    j["ok"] = rep.ok();
    const std::string js = cfg.out_dir + "/front_" + std::to_string(i + 1) + ".json";
    write_json(js, j);
    mf.add_output(js);
  }
  timer.done(all_ok ? "pass" : "fail");
  return all_ok ? 0 : 3;
}

int run_entire_stage(const ExperimentConfig& cfg, Workbench& wb, RunManifest& mf,
                     StageOutputs& out) {
  StageTimer timer(mf, "entire");
  EntireProfiles profiles{out.fronts, out.gamma};
  const ModelSpec& run_model = wb.run_model;
  const Vec* liminf = wb.has_envelopes ? &wb.envelopes.K_minus : nullptr;
  int code = 0;
  try {
    out.entire = construct(cfg.entire, run_model, profiles, wb.spectral, liminf);
    out.qualitative =
        verify_qualitative(out.entire.snapshots, cfg.entire, wb.model, wb.spectral);
  } catch (const numeric_error&) {
    timer.done("fail");
    throw;
  }

  // snapshot CSV: (t, x, u1..um)
  std::vector<std::vector<double>> rows;
  const auto& snaps = out.entire.snapshots;
  for (std::size_t ti = 0; ti < snaps.times.size(); ++ti)
    for (int i = 0; i < snaps.grid.n_nodes; ++i) {
      std::vector<double> row{snaps.times[ti], snaps.grid.x_at(i)};
      for (int j = 0; j < snaps.m; ++j)
        row.push_back(snaps.fields[ti][static_cast<std::size_t>(i) * snaps.m + j]);
      rows.push_back(row);
    }
  std::vector<std::string> header{"t", "x"};
  for (int j = 0; j < snaps.m; ++j) header.push_back("u" + std::to_string(j + 1));
  const std::string csv = cfg.out_dir + "/entire_snapshots.csv";
  write_csv(csv, header, rows);
  mf.add_output(csv);

  const auto& rep = out.entire.report;
  json j;
  j["lower_margin"] = rep.lower_margin;
  j["lower_at"] = {rep.lower_at_x, rep.lower_at_t};
  j["upper_margin"] = rep.upper_margin;
  j["upper_at"] = {rep.upper_at_x, rep.upper_at_t};
  j["n_increments"] = rep.n_increments;
  j["monotone_in_n_ok"] = rep.monotone_in_n_ok;
  j["worst_n_violation"] = rep.worst_n_violation;
  j["monotone_in_t_ok"] = rep.monotone_in_t_ok;
  j["min_time_forward_difference"] = rep.min_time_forward_difference;
  j["floor_lift_fraction"] = rep.floor_lift_fraction;
  j["end_liminf_gap"] = rep.end_liminf_gap;
  j["qualitative"] = {{"positive_ok", out.qualitative.positive_ok},
                      {"min_value", out.qualitative.min_value},
                      {"below_K_ok", out.qualitative.below_K_ok},
                      {"min_gap_to_K", out.qualitative.min_gap_to_K},
                      {"fitted_exponent", out.qualitative.fitted_exponent},
                      {"expected_exponent", out.qualitative.expected_exponent},
                      {"exponent_ok", out.qualitative.exponent_ok},
                      {"fit_x", out.qualitative.fit_x}};
  const std::string js = cfg.out_dir + "/sandwich.json";
  write_json(js, j);
  mf.add_output(js);

  const bool ok =
      rep.ok(cfg.entire.tol_sandwich, cfg.entire.tol_order, cfg.entire.mode);
  timer.done(ok ? "pass" : "fail");
  if (!ok) code = 3;
  return code;
}

int run_pipeline(const ExperimentConfig& config) {
  fs::create_directories(config.out_dir);
  fs::create_directories(cache_dir(config));
  RunManifest mf;
  mf.config_digest = hex64(config_hash(config));

  Workbench wb = make_workbench(config);
  StageOutputs out;
  int code = 0;
  auto merge = [&code](int c) {
    if (code == 0) code = c;
  };

  merge(run_checker_stage(config, wb, mf, out));
  if (code == 2) {  // hypothesis failure: stop before numerics
    mf.write(config.out_dir + "/manifest.json");
    return code;
  }
  merge(run_spectral_stage(config, wb, mf));
  merge(run_sis_stage(config, wb, mf, out));
  merge(run_front_stage(config, wb, mf, out));
  if (!config.entire.waves.empty() || config.entire.chi.size() == 1)
    merge(run_entire_stage(config, wb, mf, out));
  mf.write(config.out_dir + "/manifest.json");
  return code;
}

}  // namespace rdfront
