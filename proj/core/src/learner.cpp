#include "ddtf/learner.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "ddtf/error.hpp"

namespace ddtf {

LearnParams LearnParams::for_sigma(double sigma) {
  LearnParams params;
  params.lambda = 3.4 * sigma;
  return params;
}

std::vector<double> LearnTrace::objectives() const {
  std::vector<double> out;
  out.reserve(iterations.size());
  for (const auto& it : iterations) out.push_back(it.objective);
  return out;
}

namespace detail {

Matrix proximal_coefficients(const Matrix& analysis, double lambda, double prox_lambda,
                             const Matrix& v_prev) {
  if (v_prev.rows() != analysis.rows() || v_prev.cols() != analysis.cols()) {
    throw ContractError("update_coefficients: v_prev shape mismatch");
  }
  Matrix v = (analysis + prox_lambda * v_prev) / (1.0 + prox_lambda);
  hard_threshold_in_place(v, lambda / std::sqrt(1.0 + prox_lambda));
  return v;
}

Matrix procrustes_target(const Matrix& g, const Matrix& v, double prox_mu,
                         const Matrix& atoms_prev) {
  Matrix m = g * v.transpose();
  m += prox_mu * atoms_prev;
  return m;
}

}  // namespace detail

namespace {

void check_prox(double prox_lambda, double prox_mu) {
  if (!(prox_lambda >= 0.0) || !(prox_mu >= 0.0)) {
    throw ContractError("proximal weights must be non-negative");
  }
}

Matrix coefficients_from_analysis(const Matrix& analysis, double lambda, double prox_lambda,
                                  const Matrix& v_prev) {
  if (prox_lambda > 0.0) {
    return detail::proximal_coefficients(analysis, lambda, prox_lambda, v_prev);
  }
  return hard_threshold(analysis, lambda);
}

struct FilterStep {
  Matrix atoms;
  ThinSvd svd;
};

FilterStep procrustes_step(const Matrix& g, const Matrix& v, double prox_mu,
                           const FilterBank& prev) {
  Matrix target = prox_mu > 0.0 ? detail::procrustes_target(g, v, prox_mu, prev.atoms())
                                : Matrix(g * v.transpose());
  ThinSvd svd = thin_svd(target);
  const double ratio = rank_ratio(svd.sigma);
  if (!(ratio > kRankTol)) {
    throw DegenerateRankError(
        "filter update: G*V^T has rank < s; use prox_mu > 0 or a smaller s", ratio);
  }
  Matrix atoms = svd.polar();
  return {std::move(atoms), std::move(svd)};
}

double objective_from_analysis(double g_norm2, const Matrix& analysis, const Matrix& v,
                               double lambda) {
  const double fit = (v - analysis).squaredNorm();
  const double residual = g_norm2 - analysis.squaredNorm();
  const auto nnz = static_cast<double>((v.array() != 0.0).count());
  return fit + residual + lambda * lambda * nnz;
}

void check_shapes(const Matrix& g, const FilterBank& bank) {
  if (g.rows() != bank.atoms().rows()) {
    throw ContractError("patch matrix rows (" + std::to_string(g.rows()) +
                        ") do not match bank p^2 (" + std::to_string(bank.atoms().rows()) + ")");
  }
}

}  // namespace

Matrix update_coefficients(const Matrix& g, const FilterBank& bank, double lambda,
                           double prox_lambda, const Matrix& v_prev) {
  check_shapes(g, bank);
  check_prox(prox_lambda, 0.0);
  const Matrix analysis = bank.atoms().transpose() * g;
  return coefficients_from_analysis(analysis, lambda, prox_lambda, v_prev);
}

FilterBank update_filters(const Matrix& g, const Matrix& v, double prox_mu,
                          const FilterBank& bank_prev) {
  check_shapes(g, bank_prev);
  check_prox(0.0, prox_mu);
  if (v.rows() != bank_prev.size() || v.cols() != g.cols()) {
    throw ContractError("update_filters: V must be s x N");
  }
  return FilterBank(bank_prev.p(), procrustes_step(g, v, prox_mu, bank_prev).atoms);
}

double objective(const Matrix& g, const Matrix& v, const FilterBank& bank, double lambda) {
  check_shapes(g, bank);
  if (v.rows() != bank.size() || v.cols() != g.cols()) {
    throw ContractError("objective: V must be s x N");
  }
  const Matrix analysis = bank.atoms().transpose() * g;
  return objective_from_analysis(g.squaredNorm(), analysis, v, lambda);
}

LearnResult learn(const PatchMatrix& patches, const FilterBank& init, const LearnParams& params) {
  const Matrix& g = patches.data;
  check_shapes(g, init);
  check_prox(params.prox_lambda, params.prox_mu);
  if (init.size() != params.s) {
    throw ContractError("learn: initial bank has " + std::to_string(init.size()) +
                        " filters, params.s = " + std::to_string(params.s));
  }
  if (params.iters < 1) {
    throw ContractError("learn: iters must be >= 1");
  }
  if (!(params.lambda >= 0.0)) {
    throw ContractError("learn: lambda must be non-negative");
  }
  using Clock = std::chrono::steady_clock;

  const double g_norm2 = g.squaredNorm();
  FilterBank bank = init;
  Matrix analysis = bank.atoms().transpose() * g;
  Matrix v_prev;
  if (params.prox_lambda > 0.0) {
    v_prev = hard_threshold(analysis, params.lambda);
  }

  LearnTrace trace;
  trace.iterations.reserve(static_cast<std::size_t>(params.iters));
  Matrix v;
  ThinSvd svd;
  for (int k = 0; k < params.iters; ++k) {
    const auto start = Clock::now();
    v = coefficients_from_analysis(analysis, params.lambda, params.prox_lambda, v_prev);
    FilterStep step = procrustes_step(g, v, params.prox_mu, bank);
    bank = FilterBank(bank.p(), std::move(step.atoms));
    svd = std::move(step.svd);
    analysis.noalias() = bank.atoms().transpose() * g;

    IterationRecord rec;
    rec.objective = objective_from_analysis(g_norm2, analysis, v, params.lambda);
    rec.nnz = static_cast<std::int64_t>((v.array() != 0.0).count());
    rec.singular_values.assign(svd.sigma.data(), svd.sigma.data() + svd.sigma.size());
    rec.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    trace.iterations.push_back(std::move(rec));
    if (params.prox_lambda > 0.0) v_prev = v;
  }
  return LearnResult{std::move(bank), std::move(trace), std::move(v), std::move(svd)};
}

LearnResult ddtf_learn(const PatchMatrix& patches, const LearnParams& params) {
  if (params.s != patches.p * patches.p || params.p != patches.p) {
    throw ContractError("ddtf_learn: requires s == p^2");
  }
  return learn(patches, dct_basis(patches.p), params);
}

}  // namespace ddtf
