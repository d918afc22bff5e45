#pragma once

#include "rdfront/common.hpp"
#include "rdfront/model.hpp"

namespace rdfront {

enum class SpectralStructure { irreducible_cooperative, block_lower_triangular };

struct Eigenpair {
  double value = 0.0;
  Vec vector;  // positive, normalized to max-norm 1
};

/// A(lambda) = D*lambda^2 + f'(0), dense row-major m x m. lambda >= 0.
std::vector<double> assemble_A(const ModelSpec& model, double lambda);

/// Principal eigenvalue and positive eigenvector of a cooperative matrix.
/// Irreducible matrices: shifted power iteration. Reducible matrices: SCC
/// condensation, per-block principal eigenvalues, dominance check, and
/// back-substitution for the eigenvector.
Eigenpair principal_eigenpair(const std::vector<double>& A, int m,
                              SpectralStructure structure);

/// Detects the structure tag from the sparsity pattern of f'(0).
SpectralStructure detect_structure(const ModelSpec& model);

/// Linearization-at-zero data: the critical speed c*, the minimizer
/// lambda_star of M(lambda)/lambda, v* = v(0) and s0 = M(0) (the principal
/// eigenvalue of f'(0), which governs the SIS decay). M and v are reentrant
/// evaluators.
class SpectralData {
 public:
  SpectralData() = default;
  SpectralData(const ModelSpec& model, SpectralStructure structure);

  double M(double lambda) const;
  Vec v(double lambda) const;
  Eigenpair eigenpair(double lambda) const;

  double lambda_star() const { return lambda_star_; }
  double c_star() const { return c_star_; }
  double s0() const { return s0_; }
  const Vec& v_star() const { return v_star_; }
  SpectralStructure structure() const { return structure_; }

  int m() const { return m_; }

 private:
  friend SpectralData compute_cstar(const ModelSpec&);
  int m_ = 0;
  Vec diffusion_;
  std::vector<double> jacobian0_;
  SpectralStructure structure_ = SpectralStructure::irreducible_cooperative;
  double lambda_star_ = 0.0;
  double c_star_ = 0.0;
  double s0_ = 0.0;
  Vec v_star_;
};

/// Minimizes M(lambda)/lambda by bracket expansion plus golden section.
SpectralData compute_cstar(const ModelSpec& model);

/// The decay rate lambda_1(c): smaller root of M(lambda) = c*lambda on
/// (0, lambda_star). Requires c > c*.
double compute_lambda1(const SpectralData& spectral, double c);

}  // namespace rdfront
