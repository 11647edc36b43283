#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace bates {

// Parameters of the stochastic-volatility price model. All rates are per
// year; variance is annualized.
struct ModelParams {
  double mu = 0.0;      // price drift
  double kappa = 1.0;   // variance mean-reversion rate
  double theta = 0.04;  // long-run variance
  double sigma = 0.1;   // vol-of-vol
  double rho = 0.0;     // correlation of price and variance shocks
  double s0 = 1.0;      // initial price
  double v0 = 0.04;     // initial variance

  void validate() const;
};

// Log-normal jump overlay: Poisson arrivals with intensity lambda, log jump
// sizes drawn from N(mu_j, sigma_j).
struct JumpParams {
  double lambda = 0.0;
  double mu_j = 0.0;
  double sigma_j = 0.0;

  void validate() const;
};

// Equidistant time grid with n steps of length dt, horizon t_end = n*dt.
struct TimeGrid {
  std::size_t n = 0;
  double dt = 0.0;

  double t_end() const { return static_cast<double>(n) * dt; }
  void validate() const;
};

struct SimulatedPath {
  std::vector<double> prices;      // n+1 values, all > 0
  std::vector<double> variances;   // n+1 values, all >= 0
  std::vector<std::size_t> jump_times;  // step indices in 1..n
  std::vector<double> jump_sizes;       // log sizes, aligned with jump_times
  std::uint64_t seed = 0;

  std::size_t steps() const { return prices.empty() ? 0 : prices.size() - 1; }
};

// Euler path of (price, variance) with correlated shocks. The variance step
// uses full truncation (max(v,0) in drift and diffusion); at most one jump
// fires per step with probability lambda*dt, applied after the diffusion
// update. Identical (params, jumps, grid, seed) give bit-identical paths.
SimulatedPath simulate(const ModelParams& params, const std::optional<JumpParams>& jumps,
                       const TimeGrid& grid, std::uint64_t seed);

// Consecutive price ratios: element k is S(k*dt) / S((k-1)*dt).
std::vector<double> path_returns(const SimulatedPath& path);

// CSV with header t,price,variance,jump_logsize; jump_logsize empty on
// non-jump rows.
void write_path_csv(const SimulatedPath& path, const TimeGrid& grid, std::ostream& out);

}  // namespace bates
