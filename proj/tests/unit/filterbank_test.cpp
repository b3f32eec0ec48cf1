#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>
#include <set>

#include "ddtf/denoiser.hpp"
#include "ddtf/error.hpp"
#include "ddtf/filterbank.hpp"
#include "ddtf/learner.hpp"
#include "support/oracles.hpp"

namespace ddtf {
namespace {

double max_gram_error(const Matrix& atoms) {
  const Eigen::Index s = atoms.cols();
  return (atoms.transpose() * atoms - Matrix::Identity(s, s)).cwiseAbs().maxCoeff();
}

TEST(DctBasis, P2FirstAtomIsHalf) {
  const FilterBank bank = dct_basis(2);
  ASSERT_EQ(bank.size(), 4);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(bank.atoms()(i, 0), 0.5, 1e-15);
  EXPECT_LE(max_gram_error(bank.atoms()), 1e-12);
}

TEST(DctBasis, P8GramIsIdentity) {
  const FilterBank bank = dct_basis(8);
  EXPECT_EQ(bank.size(), 64);
  EXPECT_EQ(bank.p(), 8);
  EXPECT_LE(max_gram_error(bank.atoms()), 1e-12);
  for (int i = 0; i < 64; ++i) EXPECT_NEAR(bank.atoms()(i, 0), 1.0 / 8.0, 1e-15);
}

TEST(DctBasis, MatchesTensorDefinition) {
  const int p = 5;
  const FilterBank bank = dct_basis(p);
  const auto c = [p](int k, int n) {
    const double scale = k == 0 ? std::sqrt(1.0 / p) : std::sqrt(2.0 / p);
    return scale * std::cos(M_PI * (2 * n + 1) * k / (2.0 * p));
  };
  for (int fr = 0; fr < p; ++fr)
    for (int fc = 0; fc < p; ++fc)
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b)
          EXPECT_NEAR(bank.atoms()(a * p + b, fr * p + fc), c(fr, b) * c(fc, a), 1e-14);
}

TEST(DctBasis, BitwiseDeterministic) {
  EXPECT_EQ(dct_basis(8).atoms(), dct_basis(8).atoms());
  EXPECT_THROW(dct_basis(0), ContractError);
}

TEST(FilterBankType, RejectsNonOrthonormal) {
  Matrix atoms = dct_basis(2).atoms();
  atoms(0, 0) += 1e-6;
  EXPECT_THROW(FilterBank(2, atoms), ContractError);
  EXPECT_THROW(FilterBank(3, dct_basis(2).atoms()), ContractError);
  EXPECT_THROW(FilterBank(2, Matrix(4, 0)), ContractError);
}

TEST(FilterBankType, LowpassIsConstantAtom) {
  EXPECT_EQ(dct_basis(8).lowpass_index(), 0);
}

TEST(SubselectRandom, FullSelectionIsPermutation) {
  const FilterBank full = dct_basis(4);
  const FilterBank perm = subselect_random(full, 16, 3);
  std::set<Eigen::Index> seen;
  for (int j = 0; j < 16; ++j) {
    for (int i = 0; i < 16; ++i) {
      if (perm.atoms().col(j) == full.atoms().col(i)) seen.insert(i);
    }
  }
  EXPECT_EQ(seen.size(), 16U);
}

TEST(SubselectRandom, SameSeedSameSelection) {
  const FilterBank full = dct_basis(8);
  EXPECT_EQ(subselect_random(full, 20, 77).atoms(), subselect_random(full, 20, 77).atoms());
  EXPECT_NE(subselect_random(full, 20, 77).atoms(), subselect_random(full, 20, 78).atoms());
}

TEST(SubselectRandom, SubsetSatisfiesInvariants) {
  const FilterBank bank = subselect_random(dct_basis(8), 20, 0);
  EXPECT_EQ(bank.size(), 20);
  EXPECT_LE(bank.orthogonality_error(), 1e-12);
}

TEST(SubselectRandom, OversizedIsContractError) {
  EXPECT_THROW(subselect_random(dct_basis(2), 5, 0), ContractError);
  EXPECT_THROW(subselect_random(dct_basis(2), 0, 0), ContractError);
}

TEST(SubselectRandom, RoughlyUniformProperty) {
  // Each of 16 atoms should be picked with probability 4/16 over many seeds.
  const FilterBank full = dct_basis(4);
  std::vector<int> hits(16, 0);
  const int trials = 4000;
  for (int seed = 0; seed < trials; ++seed) {
    const FilterBank pick = subselect_random(full, 4, static_cast<std::uint64_t>(seed));
    for (int j = 0; j < 4; ++j) {
      for (int i = 0; i < 16; ++i) {
        if (pick.atoms().col(j) == full.atoms().col(i)) ++hits[static_cast<std::size_t>(i)];
      }
    }
  }
  for (int h : hits) {
    EXPECT_GT(h, 850);
    EXPECT_LT(h, 1150);
  }
}

class SignalInit : public ::testing::Test {
 protected:
  static PatchMatrix noisy_patches(double sigma) {
    const Image clean = read_pgm(testing::data_dir() / "camera.pgm").crop(200, 200, 128, 128);
    return extract_patches(add_awgn(clean, {sigma, 4}), 8, 1);
  }
};

TEST_F(SignalInit, OutputIsOrthonormal) {
  const PatchMatrix patches = noisy_patches(25.0);
  for (int s : {1, 10, 30, 64}) {
    const FilterBank bank = init_signal_subspace(patches, {s, 1e-5, 2, 3.4 * 25.0});
    EXPECT_EQ(bank.size(), s);
    EXPECT_LE(bank.orthogonality_error(), 1e-8);
  }
}

TEST_F(SignalInit, InfiniteEpsilonGivesLeadingSingularVectors) {
  const PatchMatrix patches = noisy_patches(25.0);
  const double lambda = 3.4 * 25.0;
  const FilterBank bank =
      init_signal_subspace(patches, {12, std::numeric_limits<double>::infinity(), 2, lambda});
  LearnParams lp;
  lp.p = 8;
  lp.s = 64;
  lp.lambda = lambda;
  lp.iters = 2;
  const LearnResult warm = ddtf_learn(patches, lp);
  const Matrix expected = warm.last_svd.u.leftCols(12);
  EXPECT_LE((bank.atoms() - expected).cwiseAbs().maxCoeff(), 1e-9);
}

TEST_F(SignalInit, ColumnsSpanLeadingSubspaceAtFullSelection) {
  // Every column of S lies in span(u_1..u_s); so must the repaired bank.
  const PatchMatrix patches = noisy_patches(30.0);
  const double lambda = 3.4 * 30.0;
  const FilterBank bank = init_signal_subspace(patches, {20, 1e-5, 2, lambda});
  LearnParams lp;
  lp.p = 8;
  lp.s = 64;
  lp.lambda = lambda;
  lp.iters = 2;
  const Matrix u = ddtf_learn(patches, lp).last_svd.u.leftCols(20);
  const Matrix residual = bank.atoms() - u * (u.transpose() * bank.atoms());
  EXPECT_LE(residual.cwiseAbs().maxCoeff(), 1e-8);
}

TEST_F(SignalInit, InvalidArgumentsAreContractErrors) {
  const PatchMatrix patches = noisy_patches(25.0);
  EXPECT_THROW(init_signal_subspace(patches, {65, 1e-5, 2, 85.0}), ContractError);
  EXPECT_THROW(init_signal_subspace(patches, {10, 1e-5, 0, 85.0}), ContractError);
}

TEST(SignalInitPaired, BeatsDctInitOnTexture) {
  const Image clean = read_pgm(testing::data_dir() / "brick256.pgm");
  const Image noisy = add_awgn(clean, {25.0, 1});
  DenoiseParams params = DenoiseParams::defaults(25.0);
  params.init_mode = InitMode::signal_subspace;
  const double signal = *run_pipeline(noisy, clean, params).report.psnr_denoised;
  params.init_mode = InitMode::dct_random;
  const double dct = *run_pipeline(noisy, clean, params).report.psnr_denoised;
  EXPECT_GT(signal, dct);
}

}  // namespace
}  // namespace ddtf
