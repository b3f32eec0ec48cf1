#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "ddtf/filterbank.hpp"
#include "ddtf/image.hpp"
#include "ddtf/learner.hpp"

namespace ddtf {

enum class InitMode { dct_random, signal_subspace };
enum class Method { alg1, ddtf };

std::string_view to_string(InitMode mode);
std::string_view to_string(Method method);
InitMode parse_init_mode(std::string_view text);
Method parse_method(std::string_view text);

struct DenoiseParams {
  double sigma = 25.0;
  LearnParams learn;
  double tilde_lambda = 0.0;
  InitMode init_mode = InitMode::signal_subspace;
  Method method = Method::alg1;
  std::uint64_t seed = 0;
  /// Skip thresholding of the channel with the largest DC response.
  bool exempt_lowpass = false;
  double epsilon = 1e-5;
  int warm_iters = 2;

  /// p = 8, s = 30, 25 iterations, lambda = 3.4 sigma, tilde_lambda = 2.7 sigma.
  static DenoiseParams defaults(double sigma);

  /// Throws ContractError on invalid combinations. For Method::ddtf, forces
  /// s = p^2 and DCT initialization (returns the adjusted copy).
  DenoiseParams validated() const;
};

struct StageTimings {
  double patches = 0.0;
  double init = 0.0;
  double learn = 0.0;
  double denoise = 0.0;
  double total = 0.0;
};

struct DenoiseReport {
  std::optional<double> psnr_noisy;
  std::optional<double> psnr_denoised;
  LearnTrace learn_trace;
  StageTimings timings;
  DenoiseParams params;
};

struct DenoiseResult {
  Image image;
  FilterBank bank;
  DenoiseReport report;
};

/// synthesize(H_tilde_lambda(analyze(noisy))) with every channel thresholded
/// (except the low-pass channel when `exempt_lowpass`).
Image denoise_with_bank(const Image& noisy, const FilterBank& bank, double tilde_lambda,
                        bool exempt_lowpass = false);

/// Initial bank for the pipeline: full DCT for ddtf, otherwise a random DCT
/// subset or the signal-subspace construction.
FilterBank initial_bank(const PatchMatrix& patches, const DenoiseParams& params);

/// Patches -> initial bank -> learn -> threshold and synthesize. PSNR fields
/// are filled only when `clean` is present.
DenoiseResult run_pipeline(const Image& noisy, const std::optional<Image>& clean,
                           const DenoiseParams& params);

}  // namespace ddtf
