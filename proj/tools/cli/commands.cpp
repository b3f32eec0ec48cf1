#include <algorithm>
#include <exception>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "cli.hpp"
#include "ddtf/diagnostics.hpp"
#include "ddtf/error.hpp"

namespace ddtf::cli {

namespace {

struct LearnerFlags {
  std::string input;
  double sigma = 0.0;
  int p = 8;
  int s = 30;
  int iters = 25;
  double lambda_scale = 3.4;
  double tilde_lambda_scale = 2.7;
  std::string init = "signal";
  int stride = 1;
  std::uint64_t seed = 0;
  double prox_lambda = 0.0;
  double prox_mu = 0.0;
  std::string method = "alg1";
  double epsilon = 1e-5;
  int warm_iters = 2;
  bool exempt_lowpass = false;
  CLI::Option* s_option = nullptr;
};

void add_learner_flags(CLI::App& cmd, LearnerFlags& f) {
  cmd.add_option("--input", f.input, "Noisy input image (binary PGM)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd.add_option("--sigma", f.sigma, "Noise standard deviation")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--p", f.p, "Filter side length")->check(CLI::Range(1, 64));
  f.s_option = cmd.add_option("--s", f.s, "Number of filters")->check(CLI::PositiveNumber);
  cmd.add_option("--iters", f.iters, "Learning iterations")->check(CLI::PositiveNumber);
  cmd.add_option("--lambda-scale", f.lambda_scale, "Learning threshold in units of sigma")
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--tilde-lambda-scale", f.tilde_lambda_scale,
                 "Denoising threshold in units of sigma")
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--init", f.init, "Initial bank: dct|signal")
      ->check(CLI::IsMember({"dct", "signal"}));
  cmd.add_option("--stride", f.stride, "Patch stride for learning")->check(CLI::PositiveNumber);
  cmd.add_option("--seed", f.seed, "Seed for random DCT subselection");
  cmd.add_option("--prox-lambda", f.prox_lambda, "Proximal weight on V")
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--prox-mu", f.prox_mu, "Proximal weight on D")->check(CLI::NonNegativeNumber);
  cmd.add_option("--method", f.method, "alg1|ddtf")->check(CLI::IsMember({"alg1", "ddtf"}));
  cmd.add_option("--epsilon", f.epsilon, "Column-norm floor for signal initialization")
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--warm-iters", f.warm_iters, "Warm-up iterations for signal initialization")
      ->check(CLI::PositiveNumber);
  cmd.add_flag("--exempt-lowpass", f.exempt_lowpass,
               "Do not threshold the channel with the largest DC response");
}

DenoiseParams params_from(const LearnerFlags& f, std::ostream& err) {
  DenoiseParams params = DenoiseParams::defaults(f.sigma);
  params.method = parse_method(f.method);
  params.learn.p = f.p;
  params.learn.s = f.s;
  params.learn.iters = f.iters;
  params.learn.lambda = f.lambda_scale * f.sigma;
  params.learn.prox_lambda = f.prox_lambda;
  params.learn.prox_mu = f.prox_mu;
  params.learn.stride = f.stride;
  params.tilde_lambda = f.tilde_lambda_scale * f.sigma;
  params.init_mode = parse_init_mode(f.init);
  params.seed = f.seed;
  params.epsilon = f.epsilon;
  params.warm_iters = f.warm_iters;
  params.exempt_lowpass = f.exempt_lowpass;
  if (params.method == Method::ddtf && f.s_option != nullptr && f.s_option->count() > 0 &&
      f.s != f.p * f.p) {
    err << "warning: --method ddtf uses s = p^2 = " << f.p * f.p << "; ignoring --s " << f.s
        << "\n";
  }
  return params.validated();
}

struct DenoiseFlags {
  LearnerFlags learner;
  std::string clean;
  std::string output;
  std::string report;
};

int cmd_denoise(const DenoiseFlags& f, std::ostream& out, std::ostream& err) {
  const DenoiseParams params = params_from(f.learner, err);
  const Image noisy = read_pgm(f.learner.input);
  std::optional<Image> clean;
  if (!f.clean.empty()) clean = read_pgm(f.clean);
  const DenoiseResult result = run_pipeline(noisy, clean, params);
  write_pgm_atomic(result.image, f.output);
  if (!f.report.empty()) {
    write_file_atomic(f.report, to_json(result.report).dump(2) + "\n");
  }
  out << "wrote " << f.output;
  if (result.report.psnr_denoised) {
    out << " (PSNR " << *result.report.psnr_noisy << " -> " << *result.report.psnr_denoised
        << " dB)";
  }
  out << "\n";
  return kExitOk;
}

struct NoiseFlags {
  std::string input;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_synth_noise(const NoiseFlags& f, std::ostream& out) {
  const Image clean = read_pgm(f.input);
  write_pgm_atomic(add_awgn(clean, {f.sigma, f.seed}), f.output);
  out << "wrote " << f.output << "\n";
  return kExitOk;
}

struct BenchFlags {
  std::string config;
  int jobs = 1;
};

int cmd_bench(const BenchFlags& f, std::ostream& out, std::ostream& err) {
  const BenchConfig config = BenchConfig::load(f.config);
  const std::vector<BenchRow> rows = run_bench(config, f.jobs);
  write_file_atomic(config.out, bench_csv(rows));
  write_file_atomic(traces_path(config.out), bench_traces(rows).dump(2) + "\n");
  const auto ok = std::ranges::count_if(rows, [](const BenchRow& r) { return r.status == "ok"; });
  out << "wrote " << config.out.string() << " (" << ok << "/" << rows.size() << " cells ok)\n";
  for (const auto& r : rows) {
    if (r.status != "ok") err << r.image << " sigma=" << r.sigma << " " << r.method.label() << ": "
                              << r.status << "\n";
  }
  return ok > 0 ? kExitOk : kExitRuntime;
}

struct SpectrumFlags {
  LearnerFlags learner;
  int s_split = 30;
  std::string out_prefix;
  int border = 1;
};

int cmd_spectrum(const SpectrumFlags& f, std::ostream& out, std::ostream& err) {
  const DenoiseParams params = params_from(f.learner, err);
  const Image noisy = read_pgm(f.learner.input);
  const PatchMatrix patches = extract_patches(noisy, params.learn.p, params.learn.stride);
  const LearnResult learned = learn(patches, initial_bank(patches, params), params.learn);
  const SubspaceSplit split = subspace_split(patches.data, learned.coefficients, f.s_split);

  SpectrumReport spectrum = split.spectrum;
  spectrum.iteration = params.learn.iters;
  const std::string prefix = f.out_prefix;
  export_spectrum_csv(spectrum, prefix + "_spectrum.csv");
  const int p = params.learn.p;
  write_pgm_atomic(filter_mosaic(split.signal + split.noise, p, f.border),
                   prefix + "_filters_full.pgm");
  write_pgm_atomic(filter_mosaic(split.signal, p, f.border), prefix + "_filters_signal.pgm");
  write_pgm_atomic(filter_mosaic(split.noise, p, f.border), prefix + "_filters_noise.pgm");
  out << "wrote " << prefix << "_spectrum.csv and three filter mosaics; energy in first "
      << f.s_split << " of " << spectrum.singular_values.size() << " singular values: "
      << spectrum.energy_fraction(static_cast<std::size_t>(f.s_split)) << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Data-driven tight frame image denoising"};
  app.name("ddtf");
  app.require_subcommand(1);

  DenoiseFlags denoise_flags;
  auto* denoise = app.add_subcommand("denoise", "Learn a filter bank from a noisy image and denoise it");
  add_learner_flags(*denoise, denoise_flags.learner);
  denoise->add_option("--clean", denoise_flags.clean, "Clean reference for PSNR")
      ->check(CLI::ExistingFile);
  denoise->add_option("--output", denoise_flags.output, "Denoised PGM")->required();
  denoise->add_option("--report", denoise_flags.report, "JSON report path");

  NoiseFlags noise_flags;
  auto* synth = app.add_subcommand("synth-noise", "Add seeded Gaussian noise to a PGM");
  synth->add_option("--input", noise_flags.input, "Clean PGM")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--sigma", noise_flags.sigma, "Noise standard deviation")
      ->required()
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", noise_flags.seed, "Generator seed")->required();
  synth->add_option("--output", noise_flags.output, "Noisy PGM")->required();

  BenchFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "Run an (image x sigma x method) benchmark grid");
  bench->add_option("config", bench_flags.config, "Bench config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  bench->add_option("--jobs", bench_flags.jobs, "Concurrent cells")->check(CLI::PositiveNumber);

  SpectrumFlags spectrum_flags;
  spectrum_flags.learner.method = "ddtf";
  auto* spectrum = app.add_subcommand(
      "spectrum", "Write the singular-value spectrum and signal/noise filter mosaics");
  spectrum->alias("filters");
  add_learner_flags(*spectrum, spectrum_flags.learner);
  spectrum->add_option("--s-split", spectrum_flags.s_split, "Signal subspace dimension")
      ->check(CLI::NonNegativeNumber);
  spectrum->add_option("--out-prefix", spectrum_flags.out_prefix, "Output path prefix")
      ->required();
  spectrum->add_option("--border", spectrum_flags.border, "Mosaic separator width")
      ->check(CLI::NonNegativeNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (denoise->parsed()) return cmd_denoise(denoise_flags, out, err);
    if (synth->parsed()) return cmd_synth_noise(noise_flags, out);
    if (bench->parsed()) return cmd_bench(bench_flags, out, err);
    if (spectrum->parsed()) return cmd_spectrum(spectrum_flags, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace ddtf::cli
