#include "ddtf/linops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "ddtf/error.hpp"

namespace ddtf {

void hard_threshold_in_place(Eigen::Ref<Matrix> m, double lambda) {
  if (!(lambda >= 0.0)) {
    throw ContractError("hard_threshold: lambda must be non-negative");
  }
  double* data = m.data();
  // Ref<Matrix> may carry an outer stride; walk column by column.
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    double* col = data + j * m.outerStride();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!(std::abs(col[i]) > lambda)) col[i] = 0.0;
    }
  }
}

Matrix hard_threshold(const Matrix& m, double lambda) {
  Matrix out = m;
  hard_threshold_in_place(out, lambda);
  return out;
}

double rank_ratio(const Vector& sigma) {
  if (sigma.size() == 0 || !(sigma(0) > 0.0)) return 0.0;
  return sigma(sigma.size() - 1) / sigma(0);
}

namespace {

constexpr int kMaxSweeps = 100;

// Hestenes one-sided Jacobi on a matrix with rows >= cols. On return `w`
// holds A*X with mutually orthogonal columns and `x` the accumulated
// rotations.
void jacobi_orthogonalize(Matrix& w, Matrix& x) {
  const Eigen::Index n = w.cols();
  x.setIdentity(n, n);
  const double tol = std::numeric_limits<double>::epsilon() * static_cast<double>(w.rows());
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double alpha = w.col(i).squaredNorm();
        const double beta = w.col(j).squaredNorm();
        const double gamma = w.col(i).dot(w.col(j));
        if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
          const double wi = w(r, i);
          const double wj = w(r, j);
          w(r, i) = c * wi - s * wj;
          w(r, j) = s * wi + c * wj;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
          const double xi = x(r, i);
          const double xj = x(r, j);
          x(r, i) = c * xi - s * xj;
          x(r, j) = s * xi + c * xj;
        }
      }
    }
    if (!rotated) return;
  }
}

// Two passes of modified Gram-Schmidt over the columns of `u` in order.
// Columns that collapse (zero singular value, or numerically inside the
// span of their predecessors) are replaced by the standard basis vector with
// the largest residual.
void reorthonormalize(Matrix& u) {
  const Eigen::Index m = u.rows();
  for (Eigen::Index k = 0; k < u.cols(); ++k) {
    Vector v = u.col(k);
    const double before = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index q = 0; q < k; ++q) v -= u.col(q).dot(v) * u.col(q);
    }
    double after = v.norm();
    if (!(before > 0.0) || after < 0.5 * before) {
      double best_norm = -1.0;
      Vector best_vec;
      for (Eigen::Index e = 0; e < m; ++e) {
        Vector cand = Vector::Unit(m, e);
        for (int pass = 0; pass < 2; ++pass) {
          for (Eigen::Index q = 0; q < k; ++q) cand -= u.col(q).dot(cand) * u.col(q);
        }
        const double nrm = cand.norm();
        if (nrm > best_norm + 1e-12) {
          best_norm = nrm;
          best_vec = std::move(cand);
        }
      }
      v = std::move(best_vec);
      after = best_norm;
    }
    u.col(k) = v / after;
  }
}

ThinSvd thin_svd_tall(const Matrix& m) {
  Matrix w = m;
  Matrix x;
  jacobi_orthogonalize(w, x);
  const Eigen::Index k = w.cols();

  Vector norms(k);
  for (Eigen::Index i = 0; i < k; ++i) norms(i) = w.col(i).norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return norms(a) > norms(b); });

  ThinSvd svd;
  svd.u.resize(m.rows(), k);
  svd.sigma.resize(k);
  svd.x.resize(k, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const Eigen::Index src = order[static_cast<std::size_t>(c)];
    svd.sigma(c) = norms(src);
    svd.x.col(c) = x.col(src);
    if (norms(src) > 0.0) {
      svd.u.col(c) = w.col(src) / norms(src);
    } else {
      svd.u.col(c).setZero();
    }
  }
  reorthonormalize(svd.u);
  return svd;
}

void fix_signs(ThinSvd& svd) {
  for (Eigen::Index c = 0; c < svd.u.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < svd.u.rows(); ++r) {
      const double a = std::abs(svd.u(r, c));
      if (a > best) {
        best = a;
        arg = r;
      }
    }
    if (svd.u(arg, c) < 0.0) {
      svd.u.col(c) = -svd.u.col(c);
      svd.x.col(c) = -svd.x.col(c);
    }
  }
}

}  // namespace

ThinSvd thin_svd(const Matrix& m) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw ContractError("thin_svd: empty matrix");
  }
  if (!m.allFinite()) {
    throw ContractError("thin_svd: non-finite entries");
  }
  ThinSvd svd;
  if (m.rows() >= m.cols()) {
    svd = thin_svd_tall(m);
  } else {
    ThinSvd t = thin_svd_tall(m.transpose());
    svd.u = std::move(t.x);
    svd.sigma = std::move(t.sigma);
    svd.x = std::move(t.u);
  }
  fix_signs(svd);
  return svd;
}

Matrix polar_orthonormalize(const Matrix& m) {
  if (m.rows() < m.cols()) {
    throw ContractError("polar_orthonormalize: needs rows >= cols");
  }
  const ThinSvd svd = thin_svd(m);
  const double ratio = rank_ratio(svd.sigma);
  if (!(ratio > kRankTol)) {
    throw DegenerateRankError("polar_orthonormalize: rank-deficient input", ratio);
  }
  return svd.polar();
}

}  // namespace ddtf
