#include "ddtf/transform.hpp"

#include <algorithm>

#include "ddtf/error.hpp"

namespace ddtf {

namespace {

// Pixels per block when gathering periodic patches.
constexpr Eigen::Index kBlock = 4096;

void check_fits(const FilterBank& bank, int width, int height) {
  if (bank.p() > std::min(width, height)) {
    throw ContractError("filter size exceeds image dimensions");
  }
}

// Periodic patches for raster pixels [first, first + count).
void gather_block(const Image& image, int p, Eigen::Index first, Eigen::Index count,
                  Matrix& block) {
  const int w = image.width();
  const int h = image.height();
  const auto pixels = image.pixels();
  block.resize(static_cast<Eigen::Index>(p) * p, count);
  for (Eigen::Index n = 0; n < count; ++n) {
    const int x = static_cast<int>((first + n) % w);
    const int y = static_cast<int>((first + n) / w);
    double* dst = block.col(n).data();
    for (int a = 0; a < p; ++a) {
      const int xa = (x + a) % w;
      for (int b = 0; b < p; ++b) {
        const int yb = (y + b) % h;
        dst[a * p + b] = pixels[static_cast<std::size_t>(yb) * w + xa];
      }
    }
  }
}

}  // namespace

CoefStack::CoefStack(int width, int height, int channels, double range_max)
    : width_(width), height_(height), range_max_(range_max) {
  if (width < 1 || height < 1 || channels < 1) {
    throw ContractError("CoefStack: dimensions must be positive");
  }
  coefs_.setZero(static_cast<Eigen::Index>(width) * height, channels);
}

CoefStack analyze(const Image& image, const FilterBank& bank) {
  check_fits(bank, image.width(), image.height());
  CoefStack out(image.width(), image.height(), bank.size(), image.range_max());
  const Eigen::Index total = static_cast<Eigen::Index>(image.size());
  Matrix block;
  for (Eigen::Index first = 0; first < total; first += kBlock) {
    const Eigen::Index count = std::min(kBlock, total - first);
    gather_block(image, bank.p(), first, count, block);
    out.matrix().middleRows(first, count).noalias() = block.transpose() * bank.atoms();
  }
  return out;
}

Image synthesize(const CoefStack& coefs, const FilterBank& bank) {
  if (coefs.channels() != bank.size()) {
    throw ContractError("synthesize: channel count does not match the bank");
  }
  const int w = coefs.width();
  const int h = coefs.height();
  check_fits(bank, w, h);
  const int p = bank.p();
  Image out(w, h, coefs.range_max());
  auto pixels = out.pixels();
  const Eigen::Index total = static_cast<Eigen::Index>(w) * h;
  Matrix block;
  for (Eigen::Index first = 0; first < total; first += kBlock) {
    const Eigen::Index count = std::min(kBlock, total - first);
    block.noalias() = bank.atoms() * coefs.matrix().middleRows(first, count).transpose();
    for (Eigen::Index n = 0; n < count; ++n) {
      const int x = static_cast<int>((first + n) % w);
      const int y = static_cast<int>((first + n) / w);
      const double* src = block.col(n).data();
      for (int a = 0; a < p; ++a) {
        const int xa = (x + a) % w;
        for (int b = 0; b < p; ++b) {
          const int yb = (y + b) % h;
          pixels[static_cast<std::size_t>(yb) * w + xa] += src[a * p + b];
        }
      }
    }
  }
  const double scale = 1.0 / (static_cast<double>(p) * p);
  for (double& v : pixels) v *= scale;
  return out;
}

Matrix operator_matrix(const FilterBank& bank, int w, int h) {
  if (w < 1 || h < 1 || static_cast<long long>(w) * h > 4096) {
    throw ContractError("operator_matrix: requires 1 <= w*h <= 4096");
  }
  check_fits(bank, w, h);
  const Eigen::Index n = static_cast<Eigen::Index>(w) * h;
  Matrix m(n * bank.size(), n);
  Image basis(w, h);
  for (Eigen::Index j = 0; j < n; ++j) {
    basis.pixels()[static_cast<std::size_t>(j)] = 1.0;
    const CoefStack c = analyze(basis, bank);
    for (int i = 0; i < bank.size(); ++i) {
      m.col(j).segment(i * n, n) = c.channel(i);
    }
    basis.pixels()[static_cast<std::size_t>(j)] = 0.0;
  }
  return m;
}

}  // namespace ddtf
