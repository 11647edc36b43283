#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bateslab/particle_filter.hpp"
#include "bateslab/priors.hpp"

namespace bates {

struct GibbsConfig {
  int iterations = 500;
  int burn_in = 100;
  std::size_t particles = 1000;
  bool with_jumps = true;
  bool keep_paths = true;  // store per-iteration filtered paths

  void validate() const;
};

// Per-iteration chain records.
struct PosteriorDraws {
  std::vector<double> mu, kappa, theta, sigma, rho;
  std::vector<double> lambda, mu_j, sigma_j;
  std::vector<std::vector<double>> variance_paths;
  std::vector<std::vector<double>> jump_prob_paths;
  int burn_in = 0;
};

struct ParamSummary {
  double mean = 0.0;
  double stddev = 0.0;
};

struct EstimationResult {
  ParamSummary mu, kappa, theta, sigma, rho, lambda, mu_j, sigma_j;
  bool jumps_estimated = false;
  std::vector<double> final_variance_path;
  std::vector<double> final_jump_prob_path;
  std::vector<double> final_jump_size_path;
  int iterations = 0;
  int burn_in = 0;
  std::size_t particles = 0;
  std::uint64_t seed = 0;
  int beta_fallbacks = 0;
  int sigma_clamps = 0;
};

struct GibbsRun {
  EstimationResult result;
  PosteriorDraws draws;
};

// Alternates a particle-filter pass (latent variance, jump probabilities and
// sizes, run with the previous iteration's parameters) with the conjugate
// regression draws. When jumps are enabled the regression stage consumes
// jump-compensated returns. Fixed seed gives a bit-reproducible chain.
GibbsRun run_gibbs(std::span<const double> prices, double dt, const Priors& priors,
                   const GibbsConfig& config, std::uint64_t seed);

// Summary statistics over post-burn-in draws, ignoring non-finite entries.
ParamSummary summarize(std::span<const double> draws, int burn_in);

std::string estimation_to_json(const EstimationResult& result);

// CSV t,v,lambda,z for the final filtered state.
std::string filtered_state_csv(const EstimationResult& result, double dt);

}  // namespace bates
