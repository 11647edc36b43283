#include "bateslab/model.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "bateslab/rng.hpp"

namespace bates {

namespace {

constexpr double kPriceMultiplierFloor = 1e-8;

double pos(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

void ModelParams::validate() const {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  if (!(rho >= -1.0 && rho <= 1.0)) throw std::invalid_argument("rho must be in [-1, 1]");
  if (!(s0 > 0.0)) throw std::invalid_argument("s0 must be positive");
  if (!(v0 >= 0.0)) throw std::invalid_argument("v0 must be non-negative");
}

void JumpParams::validate() const {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
  if (!(sigma_j >= 0.0)) throw std::invalid_argument("sigma_j must be non-negative");
}

void TimeGrid::validate() const {
  if (n < 1) throw std::invalid_argument("time grid needs at least one step");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
}

SimulatedPath simulate(const ModelParams& params, const std::optional<JumpParams>& jumps,
                       const TimeGrid& grid, std::uint64_t seed) {
  params.validate();
  grid.validate();
  const bool with_jumps = jumps.has_value() && jumps->lambda > 0.0;
  double jump_prob = 0.0;
  if (jumps) {
    jumps->validate();
    jump_prob = jumps->lambda * grid.dt;
    if (jump_prob >= 1.0)
      throw std::invalid_argument("lambda*dt must be below 1 for per-step jump thinning");
  }

  SimulatedPath path;
  path.seed = seed;
  path.prices.resize(grid.n + 1);
  path.variances.resize(grid.n + 1);
  path.prices[0] = params.s0;
  path.variances[0] = params.v0;

  const double sqrt_dt = std::sqrt(grid.dt);
  const double rho_mix = std::sqrt(1.0 - params.rho * params.rho);

  double s = params.s0;
  double v = params.v0;
  for (std::size_t k = 1; k <= grid.n; ++k) {
    CounterRng rng({seed, 0x5a31u, static_cast<std::uint64_t>(k)});
    const double eps_s = draw_normal(rng);
    const double eps_add = draw_normal(rng);
    const double eps_v = params.rho * eps_s + rho_mix * eps_add;

    const double v_trunc = pos(v);
    const double sqrt_v = std::sqrt(v_trunc);

    double multiplier = 1.0 + params.mu * grid.dt + sqrt_v * eps_s * sqrt_dt;
    if (multiplier <= 0.0) multiplier = kPriceMultiplierFloor;
    s *= multiplier;

    v = v + params.kappa * (params.theta - v_trunc) * grid.dt +
        params.sigma * sqrt_v * eps_v * sqrt_dt;
    v = pos(v);

    if (with_jumps) {
      if (draw_uniform(rng) < jump_prob) {
        const double z = jumps->mu_j + jumps->sigma_j * draw_normal(rng);
        s *= std::exp(z);
        path.jump_times.push_back(k);
        path.jump_sizes.push_back(z);
      }
    }

    path.prices[k] = s;
    path.variances[k] = v;
  }
  return path;
}

std::vector<double> path_returns(const SimulatedPath& path) {
  if (path.prices.size() < 2)
    throw std::invalid_argument("need at least two prices to form returns");
  std::vector<double> out(path.prices.size() - 1);
  for (std::size_t k = 1; k < path.prices.size(); ++k)
    out[k - 1] = path.prices[k] / path.prices[k - 1];
  return out;
}

void write_path_csv(const SimulatedPath& path, const TimeGrid& grid, std::ostream& out) {
  out << "t,price,variance,jump_logsize\n";
  char buf[128];
  std::size_t jump_pos = 0;
  for (std::size_t k = 0; k < path.prices.size(); ++k) {
    const double t = static_cast<double>(k) * grid.dt;
    std::snprintf(buf, sizeof(buf), "%.10g,%.17g,%.17g", t, path.prices[k], path.variances[k]);
    out << buf;
    if (jump_pos < path.jump_times.size() && path.jump_times[jump_pos] == k) {
      std::snprintf(buf, sizeof(buf), ",%.17g", path.jump_sizes[jump_pos]);
      out << buf;
      ++jump_pos;
    } else {
      out << ',';
    }
    out << '\n';
  }
}

}  // namespace bates
