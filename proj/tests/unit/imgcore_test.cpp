#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include "ddtf/error.hpp"
#include "ddtf/image.hpp"
#include "support/oracles.hpp"

namespace ddtf {
namespace {

namespace fs = std::filesystem;

class ImgcoreTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ddtf_imgcore_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_raw(const std::string& name, const std::string& bytes) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << bytes;
    return p;
  }

  fs::path dir_;
};

TEST_F(ImgcoreTest, ReadsBinaryPgmBytes) {
  const std::string payload{'\x00', '\xff', '\x80', '\x40'};
  const Image img = read_pgm(write_raw("a.pgm", "P5\n2 2\n255\n" + payload));
  EXPECT_EQ(img.width(), 2);
  EXPECT_EQ(img.height(), 2);
  EXPECT_EQ(img.range_max(), 255.0);
  EXPECT_EQ((std::vector<double>(img.pixels().begin(), img.pixels().end())),
            (std::vector<double>{0, 255, 128, 64}));
}

TEST_F(ImgcoreTest, HeaderCommentsAreSkipped) {
  const Image img = read_pgm(write_raw("c.pgm", "P5\n# made by hand\n1 1\n# depth\n100\n\x07"));
  EXPECT_EQ(img.range_max(), 100.0);
  EXPECT_EQ(img(0, 0), 7.0);
}

TEST_F(ImgcoreTest, RejectsAsciiPgm) {
  EXPECT_THROW(read_pgm(write_raw("b.pgm", "P2\n2 2\n255\n0 1 2 3\n")), ParseError);
}

TEST_F(ImgcoreTest, RejectsMalformedHeader) {
  EXPECT_THROW(read_pgm(write_raw("m.pgm", "P5\nxx 2\n255\n")), ParseError);
  EXPECT_THROW(read_pgm(write_raw("z.pgm", "P5\n0 2\n255\n")), ParseError);
}

TEST_F(ImgcoreTest, RejectsSixteenBitDepth) {
  EXPECT_THROW(read_pgm(write_raw("d.pgm", "P5\n1 1\n65535\n\x00\x01")), UnsupportedDepthError);
}

TEST_F(ImgcoreTest, TruncatedPayloadIsIoError) {
  EXPECT_THROW(read_pgm(write_raw("t.pgm", "P5\n4 4\n255\nabc")), IoError);
}

TEST_F(ImgcoreTest, MissingFileIsIoError) {
  EXPECT_THROW(read_pgm(dir_ / "nope.pgm"), IoError);
}

TEST_F(ImgcoreTest, UnwritablePathIsIoError) {
  EXPECT_THROW(write_pgm(Image(2, 2), dir_ / "no_such_dir" / "x.pgm"), IoError);
}

TEST(Quantize, ClampAndRoundHalfAwayFromZero) {
  EXPECT_EQ(quantize_sample(-3.2), 0);
  EXPECT_EQ(quantize_sample(254.5), 255);
  EXPECT_EQ(quantize_sample(100.0), 100);
  EXPECT_EQ(quantize_sample(0.5), 1);
  EXPECT_EQ(quantize_sample(0.49), 0);
  EXPECT_EQ(quantize_sample(1e9), 255);
  EXPECT_EQ(quantize_sample(std::numeric_limits<double>::quiet_NaN()), 0);
}

TEST_F(ImgcoreTest, RoundTripEqualsClampRoundProperty) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> dim(1, 40);
    const Image img = testing::random_image(rng, dim(rng), dim(rng), -40.0, 300.0);
    const fs::path p = dir_ / "rt.pgm";
    write_pgm(img, p);
    const Image back = read_pgm(p);
    ASSERT_EQ(back.width(), img.width());
    ASSERT_EQ(back.height(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) {
      ASSERT_EQ(back.pixels()[i], static_cast<double>(quantize_sample(img.pixels()[i])));
    }
  }
}

TEST(Awgn, ZeroSigmaIsIdentity) {
  std::mt19937_64 rng(3);
  const Image img = testing::random_image(rng, 9, 7);
  EXPECT_EQ(add_awgn(img, {0.0, 1234}), img);
}

TEST(Awgn, DeterministicPerSeed) {
  std::mt19937_64 rng(3);
  const Image img = testing::random_image(rng, 33, 17);
  const Image a = add_awgn(img, {20.0, 99});
  const Image b = add_awgn(img, {20.0, 99});
  const Image c = add_awgn(img, {20.0, 100});
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(Awgn, OutputIsNotClamped) {
  const Image img(64, 64);  // all zeros
  const Image noisy = add_awgn(img, {25.0, 5});
  double lo = 0.0;
  for (double v : noisy.pixels()) lo = std::min(lo, v);
  EXPECT_LT(lo, 0.0);
}

TEST(Awgn, SampleStatisticsMatchSigma) {
  // 512x512 constant image; sample std must fall in [24.5, 25.5]
  // (tolerance 3 sigma / sqrt(2N) ~ 0.1 leaves ample room).
  const Image img(512, 512, std::vector<double>(512 * 512, 100.0));
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL}) {
    const Image noisy = add_awgn(img, {25.0, seed});
    double sum = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < img.size(); ++i) {
      const double d = noisy.pixels()[i] - img.pixels()[i];
      sum += d;
      sq += d * d;
    }
    const double n = static_cast<double>(img.size());
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    EXPECT_GE(sd, 24.5) << "seed " << seed;
    EXPECT_LE(sd, 25.5) << "seed " << seed;
    EXPECT_LT(std::abs(mean), 0.25);
  }
}

TEST(Psnr, IdenticalImagesAreInfinite) {
  std::mt19937_64 rng(1);
  const Image img = testing::random_image(rng, 5, 5);
  EXPECT_TRUE(std::isinf(psnr(img, img)));
}

TEST(Psnr, FullScaleErrorIsZeroDb) {
  const Image a(3, 2, std::vector<double>(6, 0.0));
  const Image b(3, 2, std::vector<double>(6, 255.0));
  EXPECT_NEAR(psnr(a, b), 0.0, 1e-12);
}

TEST(Psnr, FourPixelsDifferingByTen) {
  const Image a(2, 2, std::vector<double>{1, 2, 3, 4});
  const Image b(2, 2, std::vector<double>{11, 12, 13, 14});
  // 20 log10(255 / 10)
  EXPECT_NEAR(psnr(a, b), 28.1308, 1e-3);
}

TEST(Psnr, DimensionMismatchIsContractError) {
  EXPECT_THROW(psnr(Image(2, 2), Image(2, 3)), ContractError);
}

TEST(Psnr, SymmetricAndDecreasingInErrorProperty) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Image u = testing::random_image(rng, 8, 6);
    Image v = testing::random_image(rng, 8, 6);
    EXPECT_DOUBLE_EQ(psnr(u, v), psnr(v, u));
    Image w = u;
    for (std::size_t i = 0; i < w.size(); ++i) {
      w.pixels()[i] = u.pixels()[i] + 1.5 * (v.pixels()[i] - u.pixels()[i]);
    }
    EXPECT_GT(psnr(u, v), psnr(u, w));
  }
}

TEST(Patches, CountsForStrideOneAndTwo) {
  const Image img(4, 4);
  EXPECT_EQ(extract_patches(img, 2, 1).n_patches(), 9);
  EXPECT_EQ(extract_patches(img, 2, 2).n_patches(), 4);
}

TEST(Patches, ConstantImageGivesConstantColumns) {
  const Image img(7, 5, std::vector<double>(35, 42.0));
  const PatchMatrix pm = extract_patches(img, 3, 1);
  EXPECT_EQ(pm.data.rows(), 9);
  EXPECT_TRUE((pm.data.array() == 42.0).all());
}

TEST(Patches, OversizedPatchIsContractError) {
  EXPECT_THROW(extract_patches(Image(4, 6), 5, 1), ContractError);
  EXPECT_THROW(extract_patches(Image(4, 6), 2, 0), ContractError);
}

TEST(Patches, MatchesDirectIndexingProperty) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> dim(3, 20);
    const int w = dim(rng);
    const int h = dim(rng);
    const int p = std::uniform_int_distribution<int>(1, std::min(w, h))(rng);
    const int stride = std::uniform_int_distribution<int>(1, 3)(rng);
    const Image img = testing::random_image(rng, w, h);
    const PatchMatrix pm = extract_patches(img, p, stride);
    const int nx = (w - p) / stride + 1;
    const int ny = (h - p) / stride + 1;
    ASSERT_EQ(pm.n_patches(), nx * ny);
    if (stride == 1) ASSERT_EQ(pm.n_patches(), (w - p + 1) * (h - p + 1));
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const auto col = pm.data.col(j * nx + i);
        for (int a = 0; a < p; ++a)
          for (int b = 0; b < p; ++b)
            ASSERT_EQ(col(a * p + b), img(i * stride + a, j * stride + b));
      }
    }
  }
}

TEST(ImageType, InvariantsEnforced) {
  EXPECT_THROW(Image(0, 3), ContractError);
  EXPECT_THROW(Image(2, 2, std::vector<double>(3)), ContractError);
  EXPECT_THROW(Image(2, 2, 0.0), ContractError);
}

}  // namespace
}  // namespace ddtf
