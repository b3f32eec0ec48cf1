#pragma once

#include "ddtf/filterbank.hpp"
#include "ddtf/image.hpp"
#include "ddtf/linops.hpp"

namespace ddtf {

/// Coefficient channels of a single-level undecimated transform. Stored as a
/// (width*height) x s matrix; column i is channel i in raster order.
class CoefStack {
 public:
  CoefStack(int width, int height, int channels, double range_max = 255.0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return static_cast<int>(coefs_.cols()); }
  double range_max() const noexcept { return range_max_; }

  auto channel(int i) { return coefs_.col(i); }
  auto channel(int i) const { return coefs_.col(i); }
  double at(int i, int x, int y) const {
    return coefs_(static_cast<Eigen::Index>(y) * width_ + x, i);
  }

  Matrix& matrix() noexcept { return coefs_; }
  const Matrix& matrix() const noexcept { return coefs_; }

 private:
  int width_;
  int height_;
  double range_max_;
  Matrix coefs_;
};

/// Periodic cross-correlation with every atom:
/// c_i(x, y) = sum_{a,b} d_i(a, b) g((x + a) mod W, (y + b) mod H).
CoefStack analyze(const Image& image, const FilterBank& bank);

/// (1/p^2) times the adjoint of `analyze`. For a full orthonormal bank,
/// synthesize(analyze(g)) == g.
Image synthesize(const CoefStack& coefs, const FilterBank& bank);

/// Dense matrix of `analyze` on w x h images; rows are channel-major, then
/// raster order. Guarded to w*h <= 4096.
Matrix operator_matrix(const FilterBank& bank, int w, int h);

}  // namespace ddtf
