#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "cli.hpp"
#include "ddtf/error.hpp"

namespace ddtf::cli {

std::string BenchMethod::label() const {
  if (method == Method::ddtf) return "ddtf;" + std::to_string(p);
  return "alg1(" + std::to_string(s) + ");" + std::to_string(p);
}

namespace {

template <typename T>
T required(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("bench config: missing \"") + key + "\"");
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bench config: bad \"") + key + "\": " + e.what());
  }
}

BenchMethod parse_method_entry(const nlohmann::json& entry) {
  if (!entry.is_object()) throw ParseError("bench config: method entries must be objects");
  BenchMethod m;
  m.method = parse_method(required<std::string>(entry, "method"));
  m.p = entry.value("p", 8);
  if (m.p < 1) throw ContractError("bench config: p must be >= 1");
  if (m.method == Method::ddtf) {
    m.s = m.p * m.p;
  } else {
    m.s = required<int>(entry, "s");
  }
  m.init = parse_init_mode(entry.value("init", std::string("signal")));
  if (m.method == Method::ddtf) m.init = InitMode::dct_random;
  if (m.s < 1 || m.s > m.p * m.p) {
    throw ContractError("bench config: s = " + std::to_string(m.s) + " invalid for p = " +
                        std::to_string(m.p));
  }
  return m;
}

std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string sanitize(std::string text) {
  std::ranges::replace(text, ',', ';');
  std::ranges::replace(text, '\n', ' ');
  std::ranges::replace(text, '\r', ' ');
  return text;
}

// Noise realization shared by all methods of one (image, sigma) cell group.
std::uint64_t noise_seed(std::uint64_t seed, std::size_t image_idx, std::size_t sigma_idx,
                         std::size_t n_sigmas) {
  const std::uint64_t group = static_cast<std::uint64_t>(image_idx * n_sigmas + sigma_idx) + 1;
  return seed + 0x9E3779B97F4A7C15ULL * group;
}

}  // namespace

BenchConfig BenchConfig::from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ParseError("bench config: top level must be an object");
  BenchConfig cfg;
  for (const auto& p : required<std::vector<std::string>>(doc, "images")) {
    const std::filesystem::path path(p);
    cfg.images.push_back(path.is_absolute() ? path : base_dir / path);
  }
  cfg.sigmas = required<std::vector<double>>(doc, "sigmas");
  const auto methods = doc.find("methods");
  if (methods == doc.end() || !methods->is_array()) {
    throw ParseError("bench config: \"methods\" must be an array");
  }
  for (const auto& entry : *methods) cfg.methods.push_back(parse_method_entry(entry));
  cfg.iters = doc.value("iters", 25);
  cfg.seed = doc.value("seed", std::uint64_t{0});
  const std::filesystem::path out(doc.value("out", std::string("results.csv")));
  cfg.out = out.is_absolute() ? out : base_dir / out;

  if (cfg.images.empty() || cfg.sigmas.empty() || cfg.methods.empty()) {
    throw ContractError("bench config: images, sigmas and methods must be non-empty");
  }
  if (std::ranges::any_of(cfg.sigmas, [](double s) { return !(s > 0.0); })) {
    throw ContractError("bench config: sigmas must be positive");
  }
  if (cfg.iters < 1) throw ContractError("bench config: iters must be >= 1");
  return cfg;
}

BenchConfig BenchConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open bench config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("bench config " + path.string() + ": " + e.what());
  }
  return from_json(doc, path.parent_path());
}

std::vector<BenchRow> run_bench(const BenchConfig& config, int jobs) {
  struct Cell {
    std::size_t image;
    std::size_t sigma;
    std::size_t method;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < config.images.size(); ++i) {
    for (std::size_t s = 0; s < config.sigmas.size(); ++s) {
      for (std::size_t m = 0; m < config.methods.size(); ++m) cells.push_back({i, s, m});
    }
  }
  std::vector<BenchRow> rows(cells.size());

  const auto run_cell = [&](std::size_t idx) {
    const Cell& cell = cells[idx];
    BenchRow& row = rows[idx];
    row.image = config.images[cell.image].stem().string();
    row.sigma = config.sigmas[cell.sigma];
    row.method = config.methods[cell.method];
    const auto start = std::chrono::steady_clock::now();
    try {
      const Image clean = read_pgm(config.images[cell.image]);
      const Image noisy = add_awgn(
          clean, {row.sigma, noise_seed(config.seed, cell.image, cell.sigma, config.sigmas.size())});
      DenoiseParams params = DenoiseParams::defaults(row.sigma);
      params.method = row.method.method;
      params.learn.p = row.method.p;
      params.learn.s = row.method.s;
      params.learn.iters = config.iters;
      params.init_mode = row.method.init;
      params.seed = config.seed;
      DenoiseResult result = run_pipeline(noisy, clean, params);
      row.psnr_noisy = *result.report.psnr_noisy;
      row.psnr_denoised = *result.report.psnr_denoised;
      row.trace = std::move(result.report.learn_trace);
    } catch (const std::exception& e) {
      row.status = "error: " + sanitize(e.what());
    }
    row.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)),
                                                      1, std::max<std::size_t>(cells.size(), 1));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t idx = next++; idx < cells.size(); idx = next++) run_cell(idx);
      });
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << kBenchCsvHeader << '\n';
  for (const auto& r : rows) {
    const bool ok = r.status == "ok";
    out << r.image << ',' << format_shortest(r.sigma) << ',' << to_string(r.method.method) << ','
        << r.method.p << ',' << r.method.s << ',' << to_string(r.method.init) << ','
        << (ok ? format_fixed(r.psnr_noisy, 4) : "") << ','
        << (ok ? format_fixed(r.psnr_denoised, 4) : "") << ',' << format_fixed(r.seconds, 3)
        << ',' << r.status << '\n';
  }
  return out.str();
}

nlohmann::json bench_traces(const std::vector<BenchRow>& rows) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& r : rows) {
    cells.push_back({{"image", r.image},
                     {"sigma", r.sigma},
                     {"method", r.method.label()},
                     {"init", std::string(to_string(r.method.init))},
                     {"status", r.status},
                     {"learn_trace", to_json(r.trace)}});
  }
  return {{"cells", cells}};
}

std::filesystem::path traces_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".traces.json");
  return p;
}

}  // namespace ddtf::cli
