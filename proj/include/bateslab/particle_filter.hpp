#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bateslab/rng.hpp"

namespace bates {

// Model parameter draw consumed by one filter pass.
struct FilterParams {
  double mu = 0.0;
  double kappa = 1.0;
  double theta = 0.04;
  double sigma = 0.1;
  double rho = 0.0;
};

// Jump-particle generation: a lambda_th share of raw particles carries a
// jump candidate with size drawn from N(mu0_j, sigma0_j).
struct JumpFilterConfig {
  double lambda_th = 0.15;
  double mu0_j = -0.05;
  double sigma0_j = 0.01;
};

struct FilterOutput {
  std::vector<double> variance_path;   // n+1 values, index 0 is the ensemble start
  std::vector<double> jump_prob_path;  // n values in [0, 1]
  std::vector<double> jump_size_path;  // n values (resampled means)
  double lambda_hat = 0.0;
  std::optional<double> mu_j_hat;
  std::optional<double> sigma_j_hat;
};

// Optional per-step instrumentation for invariant checks.
struct FilterDiag {
  bool keep_particles = false;
  std::vector<double> normalized_weight_sums;
  std::vector<std::vector<double>> raw_variances;
  std::vector<std::vector<double>> resampled_variances;
};

// One Euler proposal per particle; the current return enters through the
// correlated part of the variance shock. Results are truncated at zero.
std::vector<double> propagate(std::span<const double> parents, double return_k,
                              const FilterParams& params, double dt, const CounterRng& base,
                              std::uint64_t step);

double weight_no_jump(double variance, double ret, double mu, double dt);
double weight_jump(double variance, double jump_size, double ret, double mu, double dt);

// Gaussian likelihood of the return observed one step after the given raw
// variances.
std::vector<double> weigh_no_jumps(std::span<const double> raw_variances, double return_next,
                                   double mu, double dt);

// Two-branch likelihood: non-jump particles reduce to weigh_no_jumps, jump
// particles rescale the return by exp(jump size).
std::vector<double> weigh_with_jumps(std::span<const double> raw_variances,
                                     std::span<const std::uint8_t> jump_flags,
                                     std::span<const double> jump_sizes, double return_k,
                                     double mu, double dt);

// In-place normalization to unit sum; returns the pre-normalization total.
// Throws when the ensemble is degenerate (zero or non-finite total).
double normalize_weights(std::span<double> weights);

// Categorical draw of `count` indices proportional to normalized weights.
std::vector<std::size_t> resample_indices(std::span<const double> normalized_weights,
                                          std::size_t count, CounterRng& rng);

// Full sequential pass over the return series. Particles start at theta.
FilterOutput filter_pass(std::span<const double> returns, const FilterParams& params,
                         const std::optional<JumpFilterConfig>& jump_cfg, std::size_t particles,
                         double dt, const CounterRng& base, FilterDiag* diag = nullptr);

// Jump-compensated returns: R * (1 - lambda * (1 - exp(-Z))) elementwise.
std::vector<double> adjust_returns(std::span<const double> returns,
                                   std::span<const double> jump_prob_path,
                                   std::span<const double> jump_size_path);

}  // namespace bates
