#include "ddtf/denoiser.hpp"

#include <chrono>
#include <string>

#include "ddtf/error.hpp"
#include "ddtf/transform.hpp"

namespace ddtf {

std::string_view to_string(InitMode mode) {
  return mode == InitMode::dct_random ? "dct" : "signal";
}

std::string_view to_string(Method method) { return method == Method::alg1 ? "alg1" : "ddtf"; }

InitMode parse_init_mode(std::string_view text) {
  if (text == "dct") return InitMode::dct_random;
  if (text == "signal") return InitMode::signal_subspace;
  throw ContractError("unknown init mode '" + std::string(text) + "' (expected dct|signal)");
}

Method parse_method(std::string_view text) {
  if (text == "alg1") return Method::alg1;
  if (text == "ddtf") return Method::ddtf;
  throw ContractError("unknown method '" + std::string(text) + "' (expected alg1|ddtf)");
}

DenoiseParams DenoiseParams::defaults(double sigma) {
  DenoiseParams params;
  params.sigma = sigma;
  params.learn = LearnParams::for_sigma(sigma);
  params.tilde_lambda = 2.7 * sigma;
  return params;
}

DenoiseParams DenoiseParams::validated() const {
  DenoiseParams out = *this;
  if (!(sigma > 0.0)) throw ContractError("sigma must be positive");
  if (!(tilde_lambda >= 0.0)) throw ContractError("tilde_lambda must be non-negative");
  if (out.learn.p < 1) throw ContractError("p must be >= 1");
  if (out.method == Method::ddtf) {
    out.learn.s = out.learn.p * out.learn.p;
    out.init_mode = InitMode::dct_random;
  }
  if (out.learn.s < 1 || out.learn.s > out.learn.p * out.learn.p) {
    throw ContractError("s must be in [1, p^2]");
  }
  if (out.learn.iters < 1) throw ContractError("iters must be >= 1");
  if (out.learn.stride < 1) throw ContractError("stride must be >= 1");
  if (out.warm_iters < 1) throw ContractError("warm_iters must be >= 1");
  return out;
}

Image denoise_with_bank(const Image& noisy, const FilterBank& bank, double tilde_lambda,
                        bool exempt_lowpass) {
  if (!(tilde_lambda >= 0.0)) {
    throw ContractError("denoise_with_bank: threshold must be non-negative");
  }
  CoefStack coefs = analyze(noisy, bank);
  const int keep = exempt_lowpass ? bank.lowpass_index() : -1;
  for (int i = 0; i < coefs.channels(); ++i) {
    if (i == keep) continue;
    hard_threshold_in_place(coefs.matrix().col(i), tilde_lambda);
  }
  return synthesize(coefs, bank);
}

FilterBank initial_bank(const PatchMatrix& patches, const DenoiseParams& params) {
  const int p = patches.p;
  if (params.method == Method::ddtf) return dct_basis(p);
  if (params.init_mode == InitMode::signal_subspace) {
    return init_signal_subspace(
        patches, {params.learn.s, params.epsilon, params.warm_iters, params.learn.lambda});
  }
  if (params.learn.s == p * p) return dct_basis(p);
  return subselect_random(dct_basis(p), params.learn.s, params.seed);
}

DenoiseResult run_pipeline(const Image& noisy, const std::optional<Image>& clean,
                           const DenoiseParams& requested) {
  using Clock = std::chrono::steady_clock;
  const auto seconds_since = [](Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
  };
  const DenoiseParams params = requested.validated();
  if (clean && (clean->width() != noisy.width() || clean->height() != noisy.height())) {
    throw ContractError("clean reference and noisy image dimensions differ");
  }

  StageTimings timings;
  const auto t_total = Clock::now();

  auto t = Clock::now();
  const PatchMatrix patches = extract_patches(noisy, params.learn.p, params.learn.stride);
  timings.patches = seconds_since(t);

  t = Clock::now();
  const FilterBank init = initial_bank(patches, params);
  timings.init = seconds_since(t);

  t = Clock::now();
  LearnResult learned = learn(patches, init, params.learn);
  timings.learn = seconds_since(t);

  t = Clock::now();
  Image denoised = denoise_with_bank(noisy, learned.bank, params.tilde_lambda,
                                     params.exempt_lowpass);
  timings.denoise = seconds_since(t);
  timings.total = seconds_since(t_total);

  DenoiseReport report;
  if (clean) {
    report.psnr_noisy = psnr(noisy, *clean);
    report.psnr_denoised = psnr(denoised, *clean);
  }
  report.learn_trace = std::move(learned.trace);
  report.timings = timings;
  report.params = params;
  return DenoiseResult{std::move(denoised), std::move(learned.bank), std::move(report)};
}

}  // namespace ddtf
