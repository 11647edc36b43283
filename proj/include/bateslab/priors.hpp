#pragma once

#include <array>
#include <string>

namespace bates {

// Hyperparameters of the conjugate priors used by the calibration chain.
// eta is the drift helper (mu*dt + 1), beta the two-parameter variance
// regression, sigma^2 the vol-of-vol, (psi, omega) the correlation helpers,
// and the last block seeds the jump particles.
struct Priors {
  double mu0_eta = 1.0004;
  double sigma0_eta = 0.001;
  std::array<double, 4> lambda0_beta = {10.0, 0.0, 0.0, 5.0};  // row-major 2x2 precision
  std::array<double, 2> mu0_beta = {2e-4, 0.996};
  double a0_sigma = 250.0;
  double b0_sigma = 0.015;
  double mu0_psi = -0.67;
  double sigma0_psi = 0.1;
  double a0_omega = 1.33;
  double b0_omega = 0.1;
  double lambda_th = 0.15;
  double mu0_j = -0.05;
  double sigma0_j = 0.01;

  double tau0_eta() const { return 1.0 / (sigma0_eta * sigma0_eta); }
  double tau0_psi() const { return 1.0 / (sigma0_psi * sigma0_psi); }

  void validate() const;
};

// JSON round trip; keys match the struct field names exactly.
Priors priors_from_json_file(const std::string& path);
Priors priors_from_json_text(const std::string& text);
std::string priors_to_json_text(const Priors& priors);

}  // namespace bates
