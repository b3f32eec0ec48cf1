#pragma once

#include <Eigen/Core>

namespace ddtf {

/// Dense column-major real matrix used for patches, coefficients and banks.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Shared numerical tolerances.
inline constexpr double kOrthogonalityTol = 1e-10;
inline constexpr double kReconstructionTol = 1e-9;
/// A singular value below this fraction of the largest counts as zero.
inline constexpr double kRankTol = 1e-12;

/// m = u * diag(sigma) * x^T with k = min(rows, cols) triplets, sigma
/// descending. In each pair (u_i, x_i) the entry of largest magnitude in u_i
/// is non-negative (first such entry on ties).
struct ThinSvd {
  Matrix u;
  Vector sigma;
  Matrix x;

  /// u * x^T, the orthonormal polar factor when m has full rank.
  Matrix polar() const { return u * x.transpose(); }
};

/// Keeps entries with |m_ij| > lambda and zeroes the rest.
Matrix hard_threshold(const Matrix& m, double lambda);
void hard_threshold_in_place(Eigen::Ref<Matrix> m, double lambda);

/// One-sided Jacobi SVD. Deterministic for a fixed input.
ThinSvd thin_svd(const Matrix& m);

/// Nearest matrix with orthonormal columns, u * x^T from thin_svd(m). Throws
/// DegenerateRankError when sigma_min <= kRankTol * sigma_max.
Matrix polar_orthonormalize(const Matrix& m);

/// sigma_min / sigma_max of a spectrum, 0 for the zero matrix.
double rank_ratio(const Vector& sigma);

}  // namespace ddtf
