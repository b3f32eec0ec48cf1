#pragma once

#include <cstdint>
#include <vector>

#include "ddtf/filterbank.hpp"
#include "ddtf/image.hpp"
#include "ddtf/linops.hpp"

namespace ddtf {

struct LearnParams {
  int p = 8;
  int s = 30;
  /// Coefficient threshold; applied to unit-norm-atom responses of raw
  /// patches, so 3.4 * sigma is 3.4 times the per-coefficient noise std.
  double lambda = 0.0;
  int iters = 25;
  /// Proximal weights on ||V - V_prev||^2 and ||D - D_prev||^2. Zero gives
  /// plain alternating minimization.
  double prox_lambda = 0.0;
  double prox_mu = 0.0;
  int stride = 1;

  /// Defaults for noise level sigma: lambda = 3.4 sigma.
  static LearnParams for_sigma(double sigma);
};

struct IterationRecord {
  /// ||V - D1^T G||_F^2 + ||D2^T G||_F^2 + lambda^2 ||V||_0 at (V_{k+1}, D_{k+1}).
  double objective = 0.0;
  std::int64_t nnz = 0;
  /// Spectrum of the matrix decomposed in the filter update, descending.
  std::vector<double> singular_values;
  double seconds = 0.0;
};

struct LearnTrace {
  std::vector<IterationRecord> iterations;

  std::vector<double> objectives() const;
};

struct LearnResult {
  FilterBank bank;
  LearnTrace trace;
  /// Coefficients V of the last iteration (s x N).
  Matrix coefficients;
  /// SVD computed by the last filter update.
  ThinSvd last_svd;
};

/// V = H_lambda(D1^T G) when prox_lambda == 0, otherwise
/// H_{lambda / sqrt(1 + prox_lambda)}((D1^T G + prox_lambda V_prev) / (1 + prox_lambda)).
/// `v_prev` may be empty when prox_lambda == 0.
Matrix update_coefficients(const Matrix& g, const FilterBank& bank, double lambda,
                           double prox_lambda = 0.0, const Matrix& v_prev = Matrix());

/// Orthogonal Procrustes step: polar factor of G V^T + prox_mu D1_prev.
/// Throws DegenerateRankError when that matrix has rank < s.
FilterBank update_filters(const Matrix& g, const Matrix& v, double prox_mu,
                          const FilterBank& bank_prev);

/// Learning objective, using ||D2^T G||_F^2 = ||G||_F^2 - ||D1^T G||_F^2.
double objective(const Matrix& g, const Matrix& v, const FilterBank& bank, double lambda);

/// Alternating minimization from `init` for params.iters rounds.
LearnResult learn(const PatchMatrix& patches, const FilterBank& init, const LearnParams& params);

/// Full square bank (s = p^2) from the DCT basis; the baseline learner.
LearnResult ddtf_learn(const PatchMatrix& patches, const LearnParams& params);

namespace detail {

/// Proximal formulas evaluated unconditionally (no branch on zero weights).
Matrix proximal_coefficients(const Matrix& analysis, double lambda, double prox_lambda,
                             const Matrix& v_prev);
Matrix procrustes_target(const Matrix& g, const Matrix& v, double prox_mu,
                         const Matrix& atoms_prev);

}  // namespace detail

}  // namespace ddtf
