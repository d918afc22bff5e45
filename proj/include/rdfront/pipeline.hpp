#pragma once

#include "rdfront/checker.hpp"
#include "rdfront/config.hpp"
#include "rdfront/manifest.hpp"

namespace rdfront {

/// Shared state built once per run: the model, envelopes when the experiment
/// is non-cooperative, and the linearization data.
struct Workbench {
  ModelSpec model;             // the system being studied
  ModelSpec run_model;         // = model, box widened to K+ in envelope mode
  ModelSpec lower;             // envelope systems (envelope mode only)
  ModelSpec upper;
  bool has_envelopes = false;
  EnvelopePair envelopes;
  SpectralData spectral;
};

Workbench make_workbench(const ExperimentConfig& config);

/// Individual stages; each writes its artifacts under out_dir and records
/// itself in the manifest. Stage functions return false on a soft failure
/// (report written, pipeline continues to exit nonzero).
struct StageOutputs {
  AssumptionReport assumptions;
  Profile gamma;
  GammaRunInfo gamma_info;
  std::vector<FrontProfile> fronts;
  EntireResult entire;
  QualitativeReport qualitative;
};

int run_spectral_stage(const ExperimentConfig& cfg, Workbench& wb, RunManifest& mf);
int run_checker_stage(const ExperimentConfig& cfg, Workbench& wb, RunManifest& mf,
                      StageOutputs& out);
int run_sis_stage(const ExperimentConfig& cfg, Workbench& wb, RunManifest& mf,
                  StageOutputs& out);
int run_front_stage(const ExperimentConfig& cfg, Workbench& wb, RunManifest& mf,
                    StageOutputs& out);
int run_entire_stage(const ExperimentConfig& cfg, Workbench& wb, RunManifest& mf,
                     StageOutputs& out);

/// checker -> spectral -> sis -> fronts -> entire, with profile caching keyed
/// by (model, options) digests. Returns the process exit code (0 pass,
/// 2 hypothesis failure, 3 numerical-verification failure, 4 config error).
int run_pipeline(const ExperimentConfig& config);

}  // namespace rdfront
