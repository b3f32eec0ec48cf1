#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "ddtf/denoiser.hpp"

namespace ddtf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the `ddtf` binary and the tests. `args` excludes
/// the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Report serialization -------------------------------------------------------

nlohmann::json to_json(const LearnTrace& trace);
nlohmann::json to_json(const DenoiseParams& params);
nlohmann::json to_json(const DenoiseReport& report);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
void write_pgm_atomic(const Image& image, const std::filesystem::path& path);

// Benchmark grid --------------------------------------------------------------

struct BenchMethod {
  Method method = Method::alg1;
  int p = 8;
  int s = 30;
  InitMode init = InitMode::signal_subspace;

  std::string label() const;
};

struct BenchConfig {
  std::vector<std::filesystem::path> images;
  std::vector<double> sigmas;
  std::vector<BenchMethod> methods;
  int iters = 25;
  std::uint64_t seed = 0;
  std::filesystem::path out = "results.csv";

  /// Parses the JSON schema; relative paths resolve against `base_dir`.
  static BenchConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
  static BenchConfig load(const std::filesystem::path& path);
};

struct BenchRow {
  std::string image;
  double sigma = 0.0;
  BenchMethod method;
  double psnr_noisy = 0.0;
  double psnr_denoised = 0.0;
  double seconds = 0.0;
  std::string status = "ok";
  LearnTrace trace;
};

inline constexpr const char* kBenchCsvHeader =
    "image,sigma,method,p,s,init,psnr_noisy,psnr_denoised,seconds,status";

/// Runs every (image, sigma, method) cell, up to `jobs` at a time. Cell
/// failures are recorded in the row's status.
std::vector<BenchRow> run_bench(const BenchConfig& config, int jobs);

std::string bench_csv(const std::vector<BenchRow>& rows);
nlohmann::json bench_traces(const std::vector<BenchRow>& rows);

/// Sidecar path for the traces: results.csv -> results.traces.json.
std::filesystem::path traces_path(const std::filesystem::path& csv_path);

}  // namespace ddtf::cli
