#pragma once

#include <cstdint>

#include "ddtf/image.hpp"
#include "ddtf/linops.hpp"

namespace ddtf {

/// A bank of s orthonormal p x p filters stored as the columns of a
/// p^2 x s matrix. Column i, read column-major, is the spatial filter with
/// entry a*p + b at horizontal offset a and vertical offset b.
///
/// Construction validates atoms^T atoms = I within kBankOrthoTol, so every
/// FilterBank value satisfies the tight-frame condition of its span.
class FilterBank {
 public:
  static constexpr double kBankOrthoTol = 1e-8;

  FilterBank(int p, Matrix atoms);

  int p() const noexcept { return p_; }
  int size() const noexcept { return static_cast<int>(atoms_.cols()); }
  const Matrix& atoms() const noexcept { return atoms_; }

  /// Largest |atoms^T atoms - I| entry.
  double orthogonality_error() const;

  /// Index of the atom with the largest response to a constant image.
  int lowpass_index() const;

 private:
  int p_;
  Matrix atoms_;
};

/// Orthonormal 2-D DCT-II basis of p^2 atoms, ordered row-frequency major,
/// column-frequency minor. Atom 0 is the constant 1/p.
FilterBank dct_basis(int p);

/// `s` distinct atoms drawn uniformly without replacement (seeded partial
/// Fisher-Yates), in draw order.
FilterBank subselect_random(const FilterBank& bank, int s, std::uint64_t seed);

struct SignalInitParams {
  int s = 30;
  double epsilon = 1e-5;
  int warm_iters = 2;
  /// Learning threshold for the warm-up iterations (usually 3.4 sigma).
  double lambda = 0.0;
};

/// Initial bank spanned by the signal subspace of a short full-bank warm-up
/// run: columns of S = sum_{i<=s} u_i x_i^T with norm > epsilon, largest
/// first, topped up with leading u_i, then polar-orthonormalized.
FilterBank init_signal_subspace(const PatchMatrix& patches, const SignalInitParams& params);

}  // namespace ddtf
