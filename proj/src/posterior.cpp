#include "bateslab/posterior.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bates {

namespace {

constexpr double kBFloor = 1e-12;
constexpr int kMaxAdmissibilityRedraws = 100;

void check_positive_variances(std::span<const double> v, std::size_t count, const char* who) {
  for (std::size_t i = 0; i < count; ++i) {
    if (!(v[i] > 0.0))
      throw std::domain_error(std::string(who) + ": non-positive variance at index " +
                              std::to_string(i));
  }
}

}  // namespace

EtaPosterior eta_posterior(double xx, double xy, const Priors& priors) {
  EtaPosterior post;
  const double tau0 = priors.tau0_eta();
  post.precision = xx + tau0;
  // xx * ols == xy, so the zero-data limit reduces to the prior mean.
  post.mean = (tau0 * priors.mu0_eta + xy) / post.precision;
  post.ols = xx > 0.0 ? xy / xx : 0.0;
  return post;
}

EtaDraw draw_eta(std::span<const double> returns, std::span<const double> variance_path,
                 double dt, const Priors& priors, CounterRng& rng) {
  const std::size_t n = returns.size();
  if (n == 0) throw std::invalid_argument("draw_eta: no return observations");
  if (variance_path.size() < n)
    throw std::invalid_argument("draw_eta: variance path shorter than returns");
  check_positive_variances(variance_path, n, "draw_eta");

  double xx = 0.0;
  double xy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = 1.0 / std::sqrt(variance_path[k] * dt);
    xx += x * x;
    xy += x * (x * returns[k]);
  }

  EtaDraw draw;
  draw.posterior = eta_posterior(xx, xy, priors);
  draw.eta = draw.posterior.mean + draw_normal(rng) / std::sqrt(draw.posterior.precision);
  draw.mu = (draw.eta - 1.0) / dt;
  return draw;
}

BetaPosterior beta_posterior(const std::array<double, 4>& xtx, const std::array<double, 2>& xty,
                             double yty, std::size_t rows, const Priors& priors) {
  BetaPosterior post;
  post.rows = rows;
  post.yty = yty;
  const auto& l0 = priors.lambda0_beta;
  const auto& m0 = priors.mu0_beta;
  for (std::size_t i = 0; i < 4; ++i) post.precision[i] = xtx[i] + l0[i];

  const double det =
      post.precision[0] * post.precision[3] - post.precision[1] * post.precision[2];
  const double scale = std::abs(post.precision[0]) + std::abs(post.precision[3]);
  if (!(std::abs(det) > 1e-14 * scale * scale))
    throw std::runtime_error("beta_posterior: singular posterior precision");

  // rhs = Lambda0 mu0 + X'y  (X'X beta_hat == X'y)
  const double r0 = l0[0] * m0[0] + l0[1] * m0[1] + xty[0];
  const double r1 = l0[2] * m0[0] + l0[3] * m0[1] + xty[1];
  post.mean[0] = (post.precision[3] * r0 - post.precision[1] * r1) / det;
  post.mean[1] = (-post.precision[2] * r0 + post.precision[0] * r1) / det;

  const double xdet = xtx[0] * xtx[3] - xtx[1] * xtx[2];
  if (std::abs(xdet) > 0.0) {
    post.ols[0] = (xtx[3] * xty[0] - xtx[1] * xty[1]) / xdet;
    post.ols[1] = (-xtx[2] * xty[0] + xtx[0] * xty[1]) / xdet;
  }

  post.mu0_lambda0_mu0 = m0[0] * (l0[0] * m0[0] + l0[1] * m0[1]) +
                         m0[1] * (l0[2] * m0[0] + l0[3] * m0[1]);
  post.mu_lambda_mu =
      post.mean[0] * (post.precision[0] * post.mean[0] + post.precision[1] * post.mean[1]) +
      post.mean[1] * (post.precision[2] * post.mean[0] + post.precision[3] * post.mean[1]);
  return post;
}

BetaDraw draw_beta(std::span<const double> variance_path, double dt, const Priors& priors,
                   double sigma_prev, CounterRng& rng,
                   const std::optional<std::pair<double, double>>& previous) {
  if (variance_path.size() < 3)
    throw std::invalid_argument("draw_beta: variance path needs at least three samples");
  if (!(sigma_prev > 0.0)) throw std::invalid_argument("draw_beta: sigma_prev must be positive");
  check_positive_variances(variance_path, variance_path.size(), "draw_beta");

  // Rows pair v((j+1)dt) with regressors at v(j dt), starting from j = 1.
  std::array<double, 4> xtx = {0.0, 0.0, 0.0, 0.0};
  std::array<double, 2> xty = {0.0, 0.0};
  double yty = 0.0;
  const std::size_t rows = variance_path.size() - 2;
  for (std::size_t j = 1; j + 1 < variance_path.size(); ++j) {
    const double vj = variance_path[j];
    const double x1 = 1.0 / std::sqrt(vj * dt);
    const double x2 = std::sqrt(vj / dt);
    const double y = variance_path[j + 1] / std::sqrt(vj * dt);
    xtx[0] += x1 * x1;
    xtx[1] += x1 * x2;
    xtx[3] += x2 * x2;
    xty[0] += x1 * y;
    xty[1] += x2 * y;
    yty += y * y;
  }
  xtx[2] = xtx[1];

  BetaDraw draw;
  draw.posterior = beta_posterior(xtx, xty, yty, rows, priors);

  // Covariance = sigma_prev^2 * inverse(precision); sample via its Cholesky.
  const auto& lam = draw.posterior.precision;
  const double det = lam[0] * lam[3] - lam[1] * lam[2];
  const double c00 = lam[3] / det, c01 = -lam[1] / det, c11 = lam[0] / det;
  const double l00 = std::sqrt(c00);
  const double l10 = c01 / l00;
  const double l11 = std::sqrt(std::max(c11 - l10 * l10, 0.0));

  for (int attempt = 0; attempt <= kMaxAdmissibilityRedraws; ++attempt) {
    const double z0 = draw_normal(rng);
    const double z1 = draw_normal(rng);
    draw.beta[0] = draw.posterior.mean[0] + sigma_prev * (l00 * z0);
    draw.beta[1] = draw.posterior.mean[1] + sigma_prev * (l10 * z0 + l11 * z1);
    if (draw.beta[1] < 1.0 && draw.beta[0] > 0.0) {
      draw.rejected = attempt;
      draw.kappa = (1.0 - draw.beta[1]) / dt;
      draw.theta = draw.beta[0] / (draw.kappa * dt);
      return draw;
    }
  }

  if (!previous)
    throw std::runtime_error("draw_beta: degenerate draw (kappa or theta not positive) and no "
                             "previous value to fall back on");
  draw.rejected = kMaxAdmissibilityRedraws;
  draw.used_fallback = true;
  draw.kappa = previous->first;
  draw.theta = previous->second;
  draw.beta[0] = draw.kappa * draw.theta * dt;
  draw.beta[1] = 1.0 - draw.kappa * dt;
  return draw;
}

SigmaDraw draw_sigma(const BetaPosterior& products, const Priors& priors, CounterRng& rng) {
  SigmaDraw draw;
  draw.a = priors.a0_sigma + 0.5 * static_cast<double>(products.rows);
  draw.b = priors.b0_sigma +
           0.5 * (products.yty + products.mu0_lambda0_mu0 - products.mu_lambda_mu);
  if (!(draw.b > 0.0)) {
    // the quadratic-form subtraction can go slightly negative in floating point
    draw.b = kBFloor;
    draw.clamped = true;
  }
  draw.sigma = std::sqrt(draw_inverse_gamma(rng, draw.a, draw.b));
  return draw;
}

ResidualPair compute_residuals(std::span<const double> returns,
                               std::span<const double> variance_path, double mu, double kappa,
                               double theta, double sigma, double dt) {
  const std::size_t n = returns.size();
  if (variance_path.size() != n + 1)
    throw std::invalid_argument("compute_residuals: variance path must have one more sample "
                                "than returns");
  if (!(sigma > 0.0)) throw std::invalid_argument("compute_residuals: sigma must be positive");
  check_positive_variances(variance_path, variance_path.size(), "compute_residuals");

  ResidualPair out;
  out.e1.resize(n);
  out.e2.resize(n);
  const double sqrt_dt = std::sqrt(dt);
  for (std::size_t k = 0; k < n; ++k) {
    const double v_prev = variance_path[k];
    const double denom = std::sqrt(v_prev) * sqrt_dt;
    out.e1[k] = (returns[k] - mu * dt - 1.0) / denom;
    out.e2[k] =
        (variance_path[k + 1] - v_prev - kappa * (theta - v_prev) * dt) / (sigma * denom);
  }
  return out;
}

RhoPosterior rho_posterior(double a11, double a12, double a22, std::size_t n,
                           const Priors& priors) {
  RhoPosterior post;
  const double tau0 = priors.tau0_psi();
  if (!(a11 + tau0 > 0.0))
    throw std::domain_error("rho_posterior: zero precision (no data and flat prior)");
  post.a_omega = priors.a0_omega + 0.5 * static_cast<double>(n);
  const double cross = a11 > 0.0 ? a12 * a12 / a11 : 0.0;
  post.b_omega = priors.b0_omega + 0.5 * (a22 - cross);
  if (!(post.b_omega > 0.0)) post.b_omega = kBFloor;
  post.mu_psi = (a12 + priors.mu0_psi * tau0) / (a11 + tau0);
  post.tau_psi = a11 + tau0;
  return post;
}

double rho_from(double psi, double omega) { return psi / std::sqrt(psi * psi + omega); }

RhoDraw draw_rho(std::span<const double> stock_residuals, std::span<const double> vol_residuals,
                 const Priors& priors, CounterRng& rng) {
  if (stock_residuals.size() != vol_residuals.size())
    throw std::invalid_argument("draw_rho: residual vectors differ in length");

  double a11 = 0.0, a12 = 0.0, a22 = 0.0;
  for (std::size_t k = 0; k < stock_residuals.size(); ++k) {
    a11 += stock_residuals[k] * stock_residuals[k];
    a12 += stock_residuals[k] * vol_residuals[k];
    a22 += vol_residuals[k] * vol_residuals[k];
  }

  RhoDraw draw;
  draw.posterior = rho_posterior(a11, a12, a22, stock_residuals.size(), priors);
  draw.omega = draw_inverse_gamma(rng, draw.posterior.a_omega, draw.posterior.b_omega);
  draw.psi = draw.posterior.mu_psi +
             draw_normal(rng) * std::sqrt(draw.omega) / std::sqrt(draw.posterior.tau_psi);
  draw.rho = rho_from(draw.psi, draw.omega);
  return draw;
}

}  // namespace bates
