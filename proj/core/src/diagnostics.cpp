#include "ddtf/diagnostics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include "ddtf/error.hpp"

namespace ddtf {

SpectrumReport SpectrumReport::from_values(std::vector<double> values, int iteration) {
  SpectrumReport report;
  report.iteration = iteration;
  double total = 0.0;
  for (double r : values) total += r * r;
  report.cumulative_energy.reserve(values.size());
  double running = 0.0;
  for (double r : values) {
    running += r * r;
    report.cumulative_energy.push_back(total > 0.0 ? running / total : 0.0);
  }
  if (total > 0.0 && !values.empty()) report.cumulative_energy.back() = 1.0;
  report.singular_values = std::move(values);
  return report;
}

double SpectrumReport::energy_fraction(std::size_t count) const {
  if (count == 0 || cumulative_energy.empty()) return 0.0;
  return cumulative_energy[std::min(count, cumulative_energy.size()) - 1];
}

SubspaceSplit subspace_split(const Matrix& g, const Matrix& v, int s) {
  if (g.cols() != v.cols()) {
    throw ContractError("subspace_split: G and V must have the same column count");
  }
  const ThinSvd svd = thin_svd(g * v.transpose());
  const auto k = static_cast<int>(svd.sigma.size());
  if (s < 0 || s > k) {
    throw ContractError("subspace_split: s must be in [0, " + std::to_string(k) + "]");
  }
  SubspaceSplit out;
  out.signal = svd.u.leftCols(s) * svd.x.leftCols(s).transpose();
  out.noise = svd.u.rightCols(k - s) * svd.x.rightCols(k - s).transpose();
  out.spectrum = SpectrumReport::from_values(
      std::vector<double>(svd.sigma.data(), svd.sigma.data() + svd.sigma.size()));
  return out;
}

Image filter_mosaic(const Matrix& columns, int p, int border) {
  if (p < 1 || columns.rows() != static_cast<Eigen::Index>(p) * p) {
    throw ContractError("filter_mosaic: columns must have p^2 rows");
  }
  if (columns.cols() < 1) {
    throw ContractError("filter_mosaic: needs at least one column");
  }
  if (border < 0) {
    throw ContractError("filter_mosaic: border must be non-negative");
  }
  const auto count = static_cast<int>(columns.cols());
  const int grid_cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
  const int grid_rows = (count + grid_cols - 1) / grid_cols;
  const int width = grid_cols * p + (grid_cols - 1) * border;
  const int height = grid_rows * p + (grid_rows - 1) * border;
  Image mosaic(width, height, 255.0);

  for (int t = 0; t < count; ++t) {
    const auto col = columns.col(t);
    const double lo = col.minCoeff();
    const double hi = col.maxCoeff();
    const double scale = std::max(1.0, col.cwiseAbs().maxCoeff());
    const bool flat = (hi - lo) <= 1e-12 * scale;
    const int ox = (t % grid_cols) * (p + border);
    const int oy = (t / grid_cols) * (p + border);
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) {
        const double v = col(a * p + b);
        mosaic(ox + a, oy + b) = flat ? 128.0 : (v - lo) / (hi - lo) * 255.0;
      }
    }
  }
  return mosaic;
}

Image filter_mosaic(const FilterBank& bank, int border) {
  return filter_mosaic(bank.atoms(), bank.p(), border);
}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void export_spectrum_csv(const SpectrumReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << "index,singular_value,cumulative_energy\n";
  for (std::size_t i = 0; i < report.singular_values.size(); ++i) {
    out << (i + 1) << ',' << format_double(report.singular_values[i]) << ','
        << format_double(report.cumulative_energy[i]) << '\n';
  }
  out.flush();
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

}  // namespace ddtf
