#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rdfront/model.hpp"
#include "rdfront/spectral.hpp"

namespace rdfront {

enum class CheckStatus { pass, heuristic_pass, fail };

struct CheckEntry {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  std::string detail;
  std::optional<Vec> counterexample;  // present on every fail
  long samples = 0;
  double margin = 0.0;  // worst signed margin (negative = violation)
};

struct AssumptionReport {
  std::vector<CheckEntry> entries;
  bool ok() const {
    for (const auto& e : entries)
      if (e.status == CheckStatus::fail) return false;
    return true;
  }
  const CheckEntry* find(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return &e;
    return nullptr;
  }
};

struct CheckerOptions {
  long samples = 10000;
  int k_max = 4;           // subhomogeneity sum length
  long rays = 1000;        // interior-equilibrium heuristic scan
  std::uint64_t seed = 0;  // folded into the low-discrepancy sequence
};

/// (A2)/(A4)': off-diagonal partials nonnegative on [0, box].
CheckEntry check_cooperative(const Reaction& reaction, int m,
                             std::span<const double> box_upper, long samples,
                             std::uint64_t seed = 0);

/// (A3)/(A5)': f(min{K, sum rho_j v(lambda_j)}) <= f'(0) sum rho_j v(lambda_j),
/// sampled over k = 1..k_max terms. Heuristic by nature (unbounded family).
CheckEntry check_subhomog(const Reaction& reaction,
                          const std::vector<double>& jacobian0,
                          const SpectralData& spectral,
                          std::span<const double> K_upper, int k_max, long samples,
                          std::uint64_t seed = 0);

/// (A2)': componentwise f- <= f <= f+ on [0, K+] and 0 << K- <= K <= K+.
CheckEntry check_envelope_order(const ModelSpec& model, const EnvelopePair& env,
                                long samples, std::uint64_t seed = 0);

/// (H1)/(H2) for the epidemic nonlinearity g.
AssumptionReport check_H1_H2(const ModelSpec& epidemic_model, long samples = 2000);

/// (A0): equilibria at 0 and K plus the interior-uniqueness ray scan
/// (heuristic; reported, not certified).
AssumptionReport check_A0(const ModelSpec& model, long rays, std::uint64_t seed = 0);

/// (A1): s(f'(0)) > 0, positive eigenvector, and (block case) dominance of the
/// principal block along a lambda grid.
CheckEntry check_A1(const ModelSpec& model, const SpectralData& spectral);

/// The section-4 sufficient parameter inequalities for the builtin models.
AssumptionReport check_sufficient_conditions(const ModelSpec& model);

/// Full hypothesis suite. Cooperative mode runs (A0)-(A3); with envelopes it
/// runs (A0), (A1), (A2)'-(A5)'.
AssumptionReport verify_assumptions(const ModelSpec& model,
                                    const SpectralData& spectral,
                                    const EnvelopePair* envelopes = nullptr,
                                    const CheckerOptions& opts = {});

}  // namespace rdfront
