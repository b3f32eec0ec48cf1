#include "ddtf/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ddtf/error.hpp"
#include "ddtf/learner.hpp"

namespace ddtf {

FilterBank::FilterBank(int p, Matrix atoms) : p_(p), atoms_(std::move(atoms)) {
  if (p < 1) {
    throw ContractError("FilterBank: p must be >= 1");
  }
  if (atoms_.rows() != static_cast<Eigen::Index>(p) * p) {
    throw ContractError("FilterBank: atoms must have p^2 rows");
  }
  if (atoms_.cols() < 1 || atoms_.cols() > atoms_.rows()) {
    throw ContractError("FilterBank: filter count must be in [1, p^2]");
  }
  if (!atoms_.allFinite()) {
    throw ContractError("FilterBank: non-finite atoms");
  }
  const double err = orthogonality_error();
  if (!(err <= kBankOrthoTol)) {
    throw ContractError("FilterBank: atoms are not orthonormal (max error " +
                        std::to_string(err) + ")");
  }
}

double FilterBank::orthogonality_error() const {
  const Matrix gram = atoms_.transpose() * atoms_;
  return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

int FilterBank::lowpass_index() const {
  Eigen::Index idx = 0;
  atoms_.colwise().sum().cwiseAbs().maxCoeff(&idx);
  return static_cast<int>(idx);
}

FilterBank dct_basis(int p) {
  if (p < 1) {
    throw ContractError("dct_basis: p must be >= 1");
  }
  Matrix c(p, p);  // c(k, n): 1-D orthonormal DCT-II vector k at sample n
  for (int k = 0; k < p; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / p);
    for (int n = 0; n < p; ++n) {
      c(k, n) = scale * std::cos(std::numbers::pi * (2.0 * n + 1.0) * k / (2.0 * p));
    }
  }
  Matrix atoms(p * p, p * p);
  for (int fr = 0; fr < p; ++fr) {
    for (int fc = 0; fc < p; ++fc) {
      auto atom = atoms.col(fr * p + fc);
      for (int a = 0; a < p; ++a) {    // column (horizontal) offset
        for (int b = 0; b < p; ++b) {  // row (vertical) offset
          atom(a * p + b) = c(fr, b) * c(fc, a);
        }
      }
    }
  }
  return FilterBank(p, std::move(atoms));
}

FilterBank subselect_random(const FilterBank& bank, int s, std::uint64_t seed) {
  if (s < 1 || s > bank.size()) {
    throw ContractError("subselect_random: s must be in [1, " + std::to_string(bank.size()) + "]");
  }
  std::vector<int> idx(static_cast<std::size_t>(bank.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < s; ++i) {
    // Unbiased draw from [i, n) by rejection.
    const std::uint64_t span = static_cast<std::uint64_t>(bank.size() - i);
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % span;
    std::uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(i) + r % span]);
  }
  Matrix atoms(bank.atoms().rows(), s);
  for (int i = 0; i < s; ++i) atoms.col(i) = bank.atoms().col(idx[static_cast<std::size_t>(i)]);
  return FilterBank(bank.p(), std::move(atoms));
}

FilterBank init_signal_subspace(const PatchMatrix& patches, const SignalInitParams& params) {
  const int p = patches.p;
  const int full = p * p;
  if (params.s < 1 || params.s > full) {
    throw ContractError("init_signal_subspace: s must be in [1, p^2]");
  }
  if (params.warm_iters < 1) {
    throw ContractError("init_signal_subspace: warm_iters must be >= 1");
  }
  LearnParams warm;
  warm.p = p;
  warm.s = full;
  warm.lambda = params.lambda;
  warm.iters = params.warm_iters;
  const LearnResult warm_run = ddtf_learn(patches, warm);
  const ThinSvd& svd = warm_run.last_svd;

  const Matrix signal =
      svd.u.leftCols(params.s) * svd.x.leftCols(params.s).transpose();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(signal.cols()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Vector norms = signal.colwise().norm().transpose();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return norms(a) > norms(b); });

  Matrix assembled(full, params.s);
  int filled = 0;
  for (Eigen::Index col : order) {
    if (filled == params.s || !(norms(col) > params.epsilon)) break;
    assembled.col(filled++) = signal.col(col);
  }
  for (int i = 0; filled < params.s; ++i) {
    assembled.col(filled++) = svd.u.col(i);
  }
  return FilterBank(p, polar_orthonormalize(assembled));
}

}  // namespace ddtf
