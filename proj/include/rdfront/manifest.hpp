#pragma once

#include <string>
#include <vector>

#include "rdfront/common.hpp"

namespace rdfront {

/// Reproducibility record of a pipeline run: config digest, stage wall times
/// and verdicts, and a content digest for every output file.
struct RunManifest {
  std::string config_digest;
  std::string version = "rdfront 0.1.0";
  struct Stage {
    std::string name;
    double seconds = 0.0;
    std::string verdict;  // pass | fail | skipped
  };
  std::vector<Stage> stages;
  struct Output {
    std::string path;
    std::string digest;
  };
  std::vector<Output> outputs;

  void add_output(const std::string& path);  // digests the file content
  void write(const std::string& path) const;
};

/// Deterministic CSV writing: fixed %.17g formatting, '\n' line endings.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string file_digest(const std::string& path);

}  // namespace rdfront
