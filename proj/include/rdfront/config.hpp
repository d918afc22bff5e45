#pragma once

#include <map>
#include <string>

#include "rdfront/entire.hpp"
#include "rdfront/front.hpp"
#include "rdfront/model.hpp"
#include "rdfront/sis.hpp"

namespace rdfront {

struct ModelConfig {
  std::string name;
  std::string kind;  // buffered | epidemic | population | custom
  std::map<std::string, double> parameters;
  std::string g_kind = "g1";     // epidemic only
  std::string registry_entry;    // custom only

  ModelSpec build() const;
  bool operator==(const ModelConfig&) const = default;
};

/// Full experiment description: model, per-stage tolerances, entire block.
struct ExperimentConfig {
  ModelConfig model;
  GammaOptions sis;
  FrontOptions front;
  EntireConfig entire;
  std::string out_dir = "out";
  std::uint64_t seed = 0;

  bool operator==(const ExperimentConfig&) const;
};

/// Parses a config document. Rejects duplicate fields, unknown fields and
/// type mismatches; fills defaults for everything absent.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

std::string serialize_config(const ExperimentConfig& config);

/// Stable digest of the canonical serialization.
std::uint64_t config_hash(const ExperimentConfig& config);

}  // namespace rdfront
