#include <cmath>
#include <fstream>
#include <string>
#include <system_error>

#include "cli.hpp"
#include "ddtf/error.hpp"

namespace ddtf::cli {

namespace {

nlohmann::json psnr_value(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return "inf";
  return *v;
}

}  // namespace

nlohmann::json to_json(const LearnTrace& trace) {
  nlohmann::json objective = nlohmann::json::array();
  nlohmann::json nnz = nlohmann::json::array();
  nlohmann::json spectra = nlohmann::json::array();
  nlohmann::json seconds = nlohmann::json::array();
  for (const auto& it : trace.iterations) {
    objective.push_back(it.objective);
    nnz.push_back(it.nnz);
    spectra.push_back(it.singular_values);
    seconds.push_back(it.seconds);
  }
  return {{"objective", objective},
          {"nnz", nnz},
          {"singular_values", spectra},
          {"seconds", seconds}};
}

nlohmann::json to_json(const DenoiseParams& params) {
  return {{"sigma", params.sigma},
          {"method", std::string(to_string(params.method))},
          {"p", params.learn.p},
          {"s", params.learn.s},
          {"lambda", params.learn.lambda},
          {"tilde_lambda", params.tilde_lambda},
          {"iters", params.learn.iters},
          {"prox_lambda", params.learn.prox_lambda},
          {"prox_mu", params.learn.prox_mu},
          {"stride", params.learn.stride},
          {"init", std::string(to_string(params.init_mode))},
          {"epsilon", params.epsilon},
          {"warm_iters", params.warm_iters},
          {"exempt_lowpass", params.exempt_lowpass},
          {"seed", params.seed}};
}

nlohmann::json to_json(const DenoiseReport& report) {
  return {{"psnr_noisy", psnr_value(report.psnr_noisy)},
          {"psnr_denoised", psnr_value(report.psnr_denoised)},
          {"params", to_json(report.params)},
          {"timings",
           {{"patches", report.timings.patches},
            {"init", report.timings.init},
            {"learn", report.timings.learn},
            {"denoise", report.timings.denoise},
            {"total", report.timings.total}}},
          {"learn_trace", to_json(report.learn_trace)}};
}

namespace {

std::filesystem::path temp_sibling(const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  return tmp;
}

void commit(const std::filesystem::path& tmp, const std::filesystem::path& path) {
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  const auto tmp = temp_sibling(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  commit(tmp, path);
}

void write_pgm_atomic(const Image& image, const std::filesystem::path& path) {
  const auto tmp = temp_sibling(path);
  write_pgm(image, tmp);
  commit(tmp, path);
}

}  // namespace ddtf::cli
