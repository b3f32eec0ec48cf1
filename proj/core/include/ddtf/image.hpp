#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ddtf {

/// Grayscale raster of double-precision samples, stored row-major
/// (index = y * width + x). `range_max` is the nominal peak value used by
/// PSNR (255 for 8-bit data); samples themselves are never clamped.
class Image {
 public:
  Image(int width, int height, double range_max = 255.0);
  Image(int width, int height, std::vector<double> pixels, double range_max = 255.0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double range_max() const noexcept { return range_max_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  double operator()(int x, int y) const { return pixels_[index(x, y)]; }
  double& operator()(int x, int y) { return pixels_[index(x, y)]; }

  std::span<const double> pixels() const noexcept { return pixels_; }
  std::span<double> pixels() noexcept { return pixels_; }

  /// Copy of the rectangle [x0, x0+w) x [y0, y0+h).
  Image crop(int x0, int y0, int w, int h) const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  double range_max_;
  std::vector<double> pixels_;
};

/// Additive white Gaussian noise: standard deviation in pixel units plus
/// the seed of the deterministic generator.
struct NoiseParams {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Column-stacked p x p patches. Each column is one window vectorized
/// column by column: entry a*p + b holds pixel (x0 + a, y0 + b).
struct PatchMatrix {
  int p = 0;
  Eigen::MatrixXd data;

  Eigen::Index n_patches() const noexcept { return data.cols(); }
};

/// Reads a binary (P5) PGM with maxval <= 255.
Image read_pgm(const std::filesystem::path& path);

/// Writes a binary P5 PGM with maxval 255 using `quantize_sample`.
void write_pgm(const Image& image, const std::filesystem::path& path);

/// Clamp to [0, 255], then round half away from zero.
std::uint8_t quantize_sample(double value) noexcept;

Image add_awgn(const Image& image, const NoiseParams& noise);

/// 20 log10(range_max * sqrt(N) / ||u - u_star||_2) in dB, +infinity when
/// the images are identical. The peak is `u.range_max()`.
double psnr(const Image& u, const Image& u_star);

/// All fully contained p x p windows with top-left corners at multiples of
/// `stride`, ordered by raster order of the corners.
PatchMatrix extract_patches(const Image& image, int p, int stride = 1);

}  // namespace ddtf
