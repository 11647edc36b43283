#include "bateslab/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bates {

namespace {

constexpr double kVarianceFloor = 1e-12;

// Sub-stream tags separating the draw kinds inside one filter step.
enum : std::uint64_t { kTagPropagate = 1, kTagJump = 2, kTagResample = 3 };

double floored(double v) { return v > kVarianceFloor ? v : kVarianceFloor; }

}  // namespace

std::vector<double> propagate(std::span<const double> parents, double return_k,
                              const FilterParams& params, double dt, const CounterRng& base,
                              std::uint64_t step) {
  const double sqrt_dt = std::sqrt(dt);
  const double mix = std::sqrt(1.0 - params.rho * params.rho);
  std::vector<double> children(parents.size());
  for (std::size_t j = 0; j < parents.size(); ++j) {
    CounterRng rng = base.fork({step, static_cast<std::uint64_t>(j), kTagPropagate});
    const double vp = floored(parents[j]);
    const double z = (return_k - params.mu * dt - 1.0) / (sqrt_dt * std::sqrt(vp));
    const double w = z * params.rho + draw_normal(rng) * mix;
    const double raw = parents[j] + params.kappa * (params.theta - parents[j]) * dt +
                       params.sigma * sqrt_dt * std::sqrt(vp) * w;
    children[j] = raw > 0.0 ? raw : 0.0;
  }
  return children;
}

double weight_no_jump(double variance, double ret, double mu, double dt) {
  const double v = floored(variance);
  const double resid = ret - mu * dt - 1.0;
  return std::exp(-0.5 * resid * resid / (v * dt)) /
         std::sqrt(2.0 * std::numbers::pi * v * dt);
}

double weight_jump(double variance, double jump_size, double ret, double mu, double dt) {
  const double v = floored(variance);
  const double ez = std::exp(jump_size);
  const double resid = ret - ez * (mu * dt + 1.0);
  return std::exp(-0.5 * resid * resid / (ez * ez * v * dt)) /
         (ez * std::sqrt(2.0 * std::numbers::pi * v * dt));
}

std::vector<double> weigh_no_jumps(std::span<const double> raw_variances, double return_next,
                                   double mu, double dt) {
  std::vector<double> weights(raw_variances.size());
  for (std::size_t j = 0; j < raw_variances.size(); ++j)
    weights[j] = weight_no_jump(raw_variances[j], return_next, mu, dt);
  return weights;
}

std::vector<double> weigh_with_jumps(std::span<const double> raw_variances,
                                     std::span<const std::uint8_t> jump_flags,
                                     std::span<const double> jump_sizes, double return_k,
                                     double mu, double dt) {
  if (jump_flags.size() != raw_variances.size() || jump_sizes.size() != raw_variances.size())
    throw std::invalid_argument("weigh_with_jumps: misaligned particle arrays");
  std::vector<double> weights(raw_variances.size());
  for (std::size_t j = 0; j < raw_variances.size(); ++j) {
    weights[j] = jump_flags[j]
                     ? weight_jump(raw_variances[j], jump_sizes[j], return_k, mu, dt)
                     : weight_no_jump(raw_variances[j], return_k, mu, dt);
  }
  return weights;
}

double normalize_weights(std::span<double> weights) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  if (!(sum > 0.0) || !std::isfinite(sum))
    throw std::runtime_error("degenerate particle ensemble: weight sum is " +
                             std::to_string(sum));
  for (double& w : weights) w /= sum;
  return sum;
}

std::vector<std::size_t> resample_indices(std::span<const double> normalized_weights,
                                          std::size_t count, CounterRng& rng) {
  std::vector<double> cumulative(normalized_weights.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < normalized_weights.size(); ++j) {
    acc += normalized_weights[j];
    cumulative[j] = acc;
  }
  cumulative.back() = 1.0;

  std::vector<std::size_t> indices(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double u = draw_uniform(rng);
    indices[j] = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
  }
  return indices;
}

FilterOutput filter_pass(std::span<const double> returns, const FilterParams& params,
                         const std::optional<JumpFilterConfig>& jump_cfg, std::size_t particles,
                         double dt, const CounterRng& base, FilterDiag* diag) {
  const std::size_t n = returns.size();
  if (n == 0) throw std::invalid_argument("filter_pass: empty return series");
  if (particles < 2) throw std::invalid_argument("filter_pass: need at least two particles");
  if (!(params.theta > 0.0)) throw std::invalid_argument("filter_pass: theta must be positive");

  FilterOutput out;
  out.variance_path.resize(n + 1);
  out.jump_prob_path.assign(n, 0.0);
  out.jump_size_path.assign(n, 0.0);
  out.variance_path[0] = params.theta;

  std::vector<double> ensemble(particles, params.theta);
  std::vector<double> resampled_sizes(particles, 0.0);
  std::vector<std::uint8_t> flags(particles, 0);
  std::vector<double> sizes(particles, 0.0);

  for (std::size_t k = 1; k <= n; ++k) {
    const double r = returns[k - 1];

    std::vector<double> children = propagate(ensemble, r, params, dt, base, k);

    std::vector<double> weights;
    if (jump_cfg) {
      for (std::size_t j = 0; j < particles; ++j) {
        CounterRng jrng = base.fork({k, static_cast<std::uint64_t>(j), kTagJump});
        flags[j] = draw_bernoulli(jrng, jump_cfg->lambda_th) ? 1 : 0;
        sizes[j] = jump_cfg->mu0_j + jump_cfg->sigma0_j * draw_normal(jrng);
      }
      weights = weigh_with_jumps(ensemble, flags, sizes, r, params.mu, dt);
    } else {
      weights = weigh_no_jumps(ensemble, r, params.mu, dt);
    }

    try {
      normalize_weights(weights);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("filter step " + std::to_string(k) + ": " + e.what());
    }

    if (jump_cfg) {
      double lambda_k = 0.0;
      for (std::size_t j = 0; j < particles; ++j)
        if (flags[j]) lambda_k += weights[j];
      out.jump_prob_path[k - 1] = std::min(lambda_k, 1.0);
    }

    CounterRng rrng = base.fork({k, 0, kTagResample});
    const std::vector<std::size_t> idx = resample_indices(weights, particles, rrng);

    if (diag) {
      double ws = 0.0;
      for (double w : weights) ws += w;
      diag->normalized_weight_sums.push_back(ws);
      if (diag->keep_particles) diag->raw_variances.push_back(children);
    }

    double v_mean = 0.0;
    double z_mean = 0.0;
    for (std::size_t j = 0; j < particles; ++j) {
      ensemble[j] = children[idx[j]];
      v_mean += ensemble[j];
      if (jump_cfg) {
        resampled_sizes[j] = sizes[idx[j]];
        z_mean += resampled_sizes[j];
      }
    }
    out.variance_path[k] = v_mean / static_cast<double>(particles);
    if (jump_cfg) out.jump_size_path[k - 1] = z_mean / static_cast<double>(particles);
    if (diag && diag->keep_particles) diag->resampled_variances.push_back(ensemble);
  }

  const double horizon = static_cast<double>(n) * dt;
  double prob_total = 0.0;
  for (double p : out.jump_prob_path) prob_total += p;
  out.lambda_hat = prob_total / horizon;

  if (jump_cfg && prob_total > 0.0) {
    double weighted_z = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      weighted_z += out.jump_size_path[k] * out.jump_prob_path[k];
    const double mu_j = weighted_z / prob_total;
    out.mu_j_hat = mu_j;
    if (n > 1) {
      double ss = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double d = out.jump_size_path[k] - mu_j;
        ss += out.jump_prob_path[k] * d * d;
      }
      const double denom =
          (static_cast<double>(n - 1) / static_cast<double>(n)) * prob_total;
      out.sigma_j_hat = std::sqrt(ss / denom);
    }
  }
  return out;
}

std::vector<double> adjust_returns(std::span<const double> returns,
                                   std::span<const double> jump_prob_path,
                                   std::span<const double> jump_size_path) {
  if (jump_prob_path.size() != returns.size() || jump_size_path.size() != returns.size())
    throw std::invalid_argument("adjust_returns: misaligned inputs");
  std::vector<double> out(returns.size());
  for (std::size_t k = 0; k < returns.size(); ++k)
    out[k] = returns[k] * (1.0 - jump_prob_path[k] * (1.0 - std::exp(-jump_size_path[k])));
  return out;
}

}  // namespace bates
