#include "bateslab/gibbs.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "bateslab/posterior.hpp"

namespace bates {

namespace {

enum : std::uint64_t {
  kTagFilter = 0xf117e6,
  kTagEta = 0xe7a,
  kTagBeta = 0xbe7a,
  kTagSigma = 0x516,
  kTagRho = 0x960
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void GibbsConfig::validate() const {
  if (iterations <= 0) throw std::invalid_argument("iterations must be positive");
  if (burn_in < 0 || burn_in >= iterations)
    throw std::invalid_argument("burn_in must lie in [0, iterations)");
  if (particles < 2) throw std::invalid_argument("need at least two particles");
}

ParamSummary summarize(std::span<const double> draws, int burn_in) {
  ParamSummary s;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = static_cast<std::size_t>(burn_in); i < draws.size(); ++i) {
    if (!std::isfinite(draws[i])) continue;
    sum += draws[i];
    ++count;
  }
  if (count == 0) {
    s.mean = kNaN;
    s.stddev = kNaN;
    return s;
  }
  s.mean = sum / static_cast<double>(count);
  double ss = 0.0;
  for (std::size_t i = static_cast<std::size_t>(burn_in); i < draws.size(); ++i) {
    if (!std::isfinite(draws[i])) continue;
    const double d = draws[i] - s.mean;
    ss += d * d;
  }
  s.stddev = count > 1 ? std::sqrt(ss / static_cast<double>(count - 1)) : 0.0;
  return s;
}

GibbsRun run_gibbs(std::span<const double> prices, double dt, const Priors& priors,
                   const GibbsConfig& config, std::uint64_t seed) {
  config.validate();
  priors.validate();
  if (prices.size() < 50)
    throw std::invalid_argument("run_gibbs: need at least 50 price observations");
  if (!(dt > 0.0)) throw std::invalid_argument("run_gibbs: dt must be positive");

  const std::size_t n = prices.size() - 1;
  std::vector<double> returns(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(prices[k] > 0.0 && prices[k + 1] > 0.0))
      throw std::domain_error("run_gibbs: non-positive price in input series");
    returns[k] = prices[k + 1] / prices[k];
  }

  // First filter pass runs on prior-implied parameters.
  FilterParams current;
  current.mu = (priors.mu0_eta - 1.0) / dt;
  current.kappa = (1.0 - priors.mu0_beta[1]) / dt;
  current.theta = priors.mu0_beta[0] / (current.kappa * dt);
  current.sigma = std::sqrt(priors.b0_sigma / (priors.a0_sigma - 1.0));
  current.rho = rho_from(priors.mu0_psi, priors.b0_omega / (priors.a0_omega - 1.0));

  std::optional<JumpFilterConfig> jump_cfg;
  if (config.with_jumps)
    jump_cfg = JumpFilterConfig{priors.lambda_th, priors.mu0_j, priors.sigma0_j};

  GibbsRun run;
  PosteriorDraws& draws = run.draws;
  draws.burn_in = config.burn_in;
  const auto iters = static_cast<std::size_t>(config.iterations);
  draws.mu.reserve(iters);
  draws.kappa.reserve(iters);
  draws.theta.reserve(iters);
  draws.sigma.reserve(iters);
  draws.rho.reserve(iters);
  draws.lambda.reserve(iters);
  draws.mu_j.reserve(iters);
  draws.sigma_j.reserve(iters);

  EstimationResult& res = run.result;
  FilterOutput pf;

  for (int i = 0; i < config.iterations; ++i) {
    try {
      const auto it = static_cast<std::uint64_t>(i);
      CounterRng pf_rng({seed, kTagFilter, it});
      pf = filter_pass(returns, current, jump_cfg, config.particles, dt, pf_rng);

      const std::vector<double>& v = pf.variance_path;
      std::vector<double> reg_returns =
          config.with_jumps ? adjust_returns(returns, pf.jump_prob_path, pf.jump_size_path)
                            : returns;

      CounterRng eta_rng({seed, kTagEta, it});
      const EtaDraw eta = draw_eta(reg_returns, v, dt, priors, eta_rng);

      CounterRng beta_rng({seed, kTagBeta, it});
      const BetaDraw beta = draw_beta(v, dt, priors, current.sigma, beta_rng,
                                      std::make_pair(current.kappa, current.theta));
      if (beta.used_fallback) ++res.beta_fallbacks;

      CounterRng sigma_rng({seed, kTagSigma, it});
      const SigmaDraw sig = draw_sigma(beta.posterior, priors, sigma_rng);
      if (sig.clamped) ++res.sigma_clamps;

      const ResidualPair resid =
          compute_residuals(reg_returns, v, eta.mu, beta.kappa, beta.theta, sig.sigma, dt);

      CounterRng rho_rng({seed, kTagRho, it});
      const RhoDraw rho = draw_rho(resid.e1, resid.e2, priors, rho_rng);

      current.mu = eta.mu;
      current.kappa = beta.kappa;
      current.theta = beta.theta;
      current.sigma = sig.sigma;
      current.rho = rho.rho;

      draws.mu.push_back(current.mu);
      draws.kappa.push_back(current.kappa);
      draws.theta.push_back(current.theta);
      draws.sigma.push_back(current.sigma);
      draws.rho.push_back(current.rho);
      draws.lambda.push_back(config.with_jumps ? pf.lambda_hat : 0.0);
      draws.mu_j.push_back(pf.mu_j_hat.value_or(kNaN));
      draws.sigma_j.push_back(pf.sigma_j_hat.value_or(kNaN));
      if (config.keep_paths) {
        draws.variance_paths.push_back(pf.variance_path);
        draws.jump_prob_paths.push_back(pf.jump_prob_path);
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("gibbs iteration " + std::to_string(i) + ": " + e.what());
    }
  }

  res.mu = summarize(draws.mu, config.burn_in);
  res.kappa = summarize(draws.kappa, config.burn_in);
  res.theta = summarize(draws.theta, config.burn_in);
  res.sigma = summarize(draws.sigma, config.burn_in);
  res.rho = summarize(draws.rho, config.burn_in);
  res.lambda = summarize(draws.lambda, config.burn_in);
  res.mu_j = summarize(draws.mu_j, config.burn_in);
  res.sigma_j = summarize(draws.sigma_j, config.burn_in);
  res.jumps_estimated = config.with_jumps;
  res.final_variance_path = pf.variance_path;
  res.final_jump_prob_path = pf.jump_prob_path;
  res.final_jump_size_path = pf.jump_size_path;
  res.iterations = config.iterations;
  res.burn_in = config.burn_in;
  res.particles = config.particles;
  res.seed = seed;

  if (res.beta_fallbacks > 0)
    std::fprintf(stderr, "warning: %d iteration(s) reused previous (kappa, theta) draws\n",
                 res.beta_fallbacks);
  if (res.sigma_clamps > 0)
    std::fprintf(stderr, "warning: %d sigma posterior scale(s) clamped at the numeric floor\n",
                 res.sigma_clamps);
  return run;
}

namespace {

nlohmann::ordered_json summary_json(const ParamSummary& s) {
  nlohmann::ordered_json j;
  if (std::isfinite(s.mean)) {
    j["mean"] = s.mean;
    j["std"] = s.stddev;
  } else {
    j["mean"] = nullptr;
    j["std"] = nullptr;
  }
  return j;
}

}  // namespace

std::string estimation_to_json(const EstimationResult& r) {
  nlohmann::ordered_json j;
  auto& p = j["parameters"];
  p["mu"] = summary_json(r.mu);
  p["kappa"] = summary_json(r.kappa);
  p["theta"] = summary_json(r.theta);
  p["sigma"] = summary_json(r.sigma);
  p["rho"] = summary_json(r.rho);
  p["lambda"] = summary_json(r.lambda);
  p["mu_j"] = r.jumps_estimated ? summary_json(r.mu_j) : nlohmann::ordered_json(nullptr);
  p["sigma_j"] = r.jumps_estimated ? summary_json(r.sigma_j) : nlohmann::ordered_json(nullptr);
  auto& d = j["diagnostics"];
  d["iterations"] = r.iterations;
  d["burn_in"] = r.burn_in;
  d["particles"] = r.particles;
  d["seed"] = r.seed;
  d["with_jumps"] = r.jumps_estimated;
  d["beta_fallbacks"] = r.beta_fallbacks;
  d["sigma_clamps"] = r.sigma_clamps;
  return j.dump(2) + "\n";
}

std::string filtered_state_csv(const EstimationResult& r, double dt) {
  std::ostringstream out;
  out << "t,v,lambda,z\n";
  char buf[160];
  for (std::size_t k = 0; k < r.final_variance_path.size(); ++k) {
    const double lam = k > 0 && k - 1 < r.final_jump_prob_path.size()
                           ? r.final_jump_prob_path[k - 1]
                           : 0.0;
    const double z = k > 0 && k - 1 < r.final_jump_size_path.size()
                         ? r.final_jump_size_path[k - 1]
                         : 0.0;
    std::snprintf(buf, sizeof(buf), "%.10g,%.17g,%.17g,%.17g\n",
                  static_cast<double>(k) * dt, r.final_variance_path[k], lam, z);
    out << buf;
  }
  return out.str();
}

}  // namespace bates
