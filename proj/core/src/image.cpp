#include "ddtf/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "ddtf/error.hpp"

namespace ddtf {

Image::Image(int width, int height, double range_max)
    : Image(width, height,
            std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                static_cast<std::size_t>(std::max(height, 0))),
            range_max) {}

Image::Image(int width, int height, std::vector<double> pixels, double range_max)
    : width_(width), height_(height), range_max_(range_max), pixels_(std::move(pixels)) {
  if (width < 1 || height < 1) {
    throw ContractError("image dimensions must be positive");
  }
  if (!(range_max > 0.0)) {
    throw ContractError("image range_max must be positive");
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw ContractError("pixel count does not match width * height");
  }
}

Image Image::crop(int x0, int y0, int w, int h) const {
  if (x0 < 0 || y0 < 0 || w < 1 || h < 1 || x0 + w > width_ || y0 + h > height_) {
    throw ContractError("crop rectangle outside image");
  }
  Image out(w, h, range_max_);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out(x, y) = (*this)(x0 + x, y0 + y);
    }
  }
  return out;
}

namespace {

// Reads one whitespace-delimited unsigned header token, skipping comments.
int read_header_int(std::istream& in, const std::string& what) {
  int c = in.get();
  while (true) {
    if (c == '#') {
      while (c != '\n' && c != std::char_traits<char>::eof()) c = in.get();
    } else if (c != std::char_traits<char>::eof() && std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == std::char_traits<char>::eof() || !std::isdigit(c)) {
    throw ParseError("PGM header: expected " + what);
  }
  long long value = 0;
  while (c != std::char_traits<char>::eof() && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    if (value > std::numeric_limits<int>::max()) {
      throw ParseError("PGM header: " + what + " out of range");
    }
    c = in.get();
  }
  // Exactly one whitespace character terminates the token.
  if (c == std::char_traits<char>::eof() || !std::isspace(c)) {
    throw ParseError("PGM header: malformed " + what);
  }
  return static_cast<int>(value);
}

}  // namespace

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (in.gcount() != 2 || magic[0] != 'P' || magic[1] != '5') {
    throw ParseError(path.string() + ": not a binary PGM (expected magic P5)");
  }
  const int width = read_header_int(in, "width");
  const int height = read_header_int(in, "height");
  const int maxval = read_header_int(in, "maxval");
  if (width < 1 || height < 1) {
    throw ParseError(path.string() + ": zero image dimension");
  }
  if (maxval < 1) {
    throw ParseError(path.string() + ": maxval must be positive");
  }
  if (maxval > 255) {
    throw UnsupportedDepthError(path.string() + ": maxval " + std::to_string(maxval) +
                                " exceeds 255");
  }
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<unsigned char> bytes(count);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(in.gcount()) != count) {
    throw IoError(path.string() + ": truncated pixel payload");
  }
  std::vector<double> pixels(bytes.begin(), bytes.end());
  return Image(width, height, std::move(pixels), static_cast<double>(maxval));
}

std::uint8_t quantize_sample(double value) noexcept {
  if (!(value > 0.0)) return 0;  // also maps NaN to 0
  if (value >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::round(value));
}

void write_pgm(const Image& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  std::vector<char> bytes(image.size());
  std::ranges::transform(image.pixels(), bytes.begin(),
                         [](double v) { return static_cast<char>(quantize_sample(v)); });
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

namespace {

// 53-bit uniform in [0, 1).
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Image add_awgn(const Image& image, const NoiseParams& noise) {
  if (!(noise.sigma >= 0.0)) {
    throw ContractError("noise sigma must be non-negative");
  }
  Image out = image;
  if (noise.sigma == 0.0) {
    return out;
  }
  // Box-Muller on mt19937_64; each draw yields two independent normals.
  std::mt19937_64 rng(noise.seed);
  auto pixels = out.pixels();
  for (std::size_t i = 0; i < pixels.size(); i += 2) {
    const double u1 = 1.0 - unit_uniform(rng);  // (0, 1]
    const double u2 = unit_uniform(rng);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    pixels[i] += noise.sigma * radius * std::cos(angle);
    if (i + 1 < pixels.size()) {
      pixels[i + 1] += noise.sigma * radius * std::sin(angle);
    }
  }
  return out;
}

double psnr(const Image& u, const Image& u_star) {
  if (u.width() != u_star.width() || u.height() != u_star.height()) {
    throw ContractError("psnr: image dimensions differ");
  }
  const auto a = u.pixels();
  const auto b = u_star.pixels();
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
  }
  if (sq == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double n = static_cast<double>(a.size());
  return 20.0 * std::log10(u.range_max() * std::sqrt(n) / std::sqrt(sq));
}

PatchMatrix extract_patches(const Image& image, int p, int stride) {
  if (p < 1 || p > std::min(image.width(), image.height())) {
    throw ContractError("extract_patches: patch size " + std::to_string(p) +
                        " does not fit the image");
  }
  if (stride < 1) {
    throw ContractError("extract_patches: stride must be >= 1");
  }
  const int nx = (image.width() - p) / stride + 1;
  const int ny = (image.height() - p) / stride + 1;
  PatchMatrix patches;
  patches.p = p;
  patches.data.resize(static_cast<Eigen::Index>(p) * p, static_cast<Eigen::Index>(nx) * ny);
  Eigen::Index col = 0;
  for (int j = 0; j < ny; ++j) {
    const int y0 = j * stride;
    for (int i = 0; i < nx; ++i) {
      const int x0 = i * stride;
      double* dst = patches.data.col(col).data();
      for (int a = 0; a < p; ++a) {
        for (int b = 0; b < p; ++b) {
          dst[a * p + b] = image(x0 + a, y0 + b);
        }
      }
      ++col;
    }
  }
  return patches;
}

}  // namespace ddtf
