#pragma once

#include <filesystem>
#include <vector>

#include "ddtf/filterbank.hpp"
#include "ddtf/image.hpp"
#include "ddtf/linops.hpp"

namespace ddtf {

struct SpectrumReport {
  int iteration = 0;
  std::vector<double> singular_values;
  /// Running sum of r_i^2 over the total; empty total gives all zeros.
  std::vector<double> cumulative_energy;

  static SpectrumReport from_values(std::vector<double> values, int iteration = 0);

  /// Cumulative energy fraction over the first `count` values.
  double energy_fraction(std::size_t count) const;
};

/// Split of the polar factor u x^T of G V^T at index s.
struct SubspaceSplit {
  Matrix signal;  ///< sum_{i<=s} u_i x_i^T
  Matrix noise;   ///< sum_{i>s} u_i x_i^T
  SpectrumReport spectrum;
};

SubspaceSplit subspace_split(const Matrix& g, const Matrix& v, int s);

/// Tiles each p^2-long column as a p x p filter, each normalized to [0, 255]
/// (constant filters become 128), in a ceil(sqrt(n))-column grid separated by
/// `border` black pixels.
Image filter_mosaic(const Matrix& columns, int p, int border = 1);
Image filter_mosaic(const FilterBank& bank, int border = 1);

/// CSV with header "index,singular_value,cumulative_energy", 1-based index.
void export_spectrum_csv(const SpectrumReport& report, const std::filesystem::path& path);

}  // namespace ddtf
