#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bateslab/priors.hpp"
#include "bateslab/rng.hpp"

namespace bates {

// Closed-form posterior pieces are exposed separately from the sampling so
// they can be checked against independent numeric solves and reused for
// prior-recovery tests (zero sufficient statistics give back the prior).

struct EtaPosterior {
  double mean = 0.0;
  double precision = 0.0;
  double ols = 0.0;  // meaningful only when xx > 0
};

EtaPosterior eta_posterior(double xx, double xy, const Priors& priors);

struct EtaDraw {
  double eta = 0.0;
  double mu = 0.0;
  EtaPosterior posterior;
};

// Drift draw from the normal regression of scaled returns on scaled
// inverse-volatility. variance_path must be strictly positive at the n
// lagged indices 0..n-1.
EtaDraw draw_eta(std::span<const double> returns, std::span<const double> variance_path,
                 double dt, const Priors& priors, CounterRng& rng);

struct BetaPosterior {
  std::array<double, 2> mean = {0.0, 0.0};
  std::array<double, 4> precision = {0.0, 0.0, 0.0, 0.0};  // row-major Lambda
  std::array<double, 2> ols = {0.0, 0.0};
  // design products kept for the sigma draw
  double yty = 0.0;
  double mu0_lambda0_mu0 = 0.0;
  double mu_lambda_mu = 0.0;
  std::size_t rows = 0;
};

BetaPosterior beta_posterior(const std::array<double, 4>& xtx, const std::array<double, 2>& xty,
                             double yty, std::size_t rows, const Priors& priors);

struct BetaDraw {
  std::array<double, 2> beta = {0.0, 0.0};
  double kappa = 0.0;
  double theta = 0.0;
  BetaPosterior posterior;
  int rejected = 0;        // admissibility redraws used
  bool used_fallback = false;
};

// Variance-regression draw; the regression rows start at the second variance
// sample. sigma_prev scales the posterior covariance. Draws implying
// kappa <= 0 or theta <= 0 are redrawn up to a limit, then fall back to
// `previous` when provided.
BetaDraw draw_beta(std::span<const double> variance_path, double dt, const Priors& priors,
                   double sigma_prev, CounterRng& rng,
                   const std::optional<std::pair<double, double>>& previous = std::nullopt);

struct SigmaDraw {
  double sigma = 0.0;
  double a = 0.0;
  double b = 0.0;
  bool clamped = false;  // b fell to the numeric floor
};

SigmaDraw draw_sigma(const BetaPosterior& products, const Priors& priors, CounterRng& rng);

// Residual pair feeding the correlation draw: e1 recovers the price shocks,
// e2 the (sigma-normalized) variance shocks.
struct ResidualPair {
  std::vector<double> e1;
  std::vector<double> e2;
};

ResidualPair compute_residuals(std::span<const double> returns,
                               std::span<const double> variance_path, double mu, double kappa,
                               double theta, double sigma, double dt);

struct RhoPosterior {
  double a_omega = 0.0;
  double b_omega = 0.0;
  double mu_psi = 0.0;
  double tau_psi = 0.0;
};

RhoPosterior rho_posterior(double a11, double a12, double a22, std::size_t n,
                           const Priors& priors);

struct RhoDraw {
  double psi = 0.0;
  double omega = 0.0;
  double rho = 0.0;
  RhoPosterior posterior;
};

double rho_from(double psi, double omega);

RhoDraw draw_rho(std::span<const double> stock_residuals, std::span<const double> vol_residuals,
                 const Priors& priors, CounterRng& rng);

}  // namespace bates
