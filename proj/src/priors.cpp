#include "bateslab/priors.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bates {

void Priors::validate() const {
  if (!(sigma0_eta > 0.0)) throw std::invalid_argument("sigma0_eta must be positive");
  if (lambda0_beta[1] != lambda0_beta[2])
    throw std::invalid_argument("Lambda0_beta must be symmetric");
  // symmetric PSD for a 2x2: non-negative diagonal and determinant
  const double det = lambda0_beta[0] * lambda0_beta[3] - lambda0_beta[1] * lambda0_beta[2];
  if (lambda0_beta[0] < 0.0 || lambda0_beta[3] < 0.0 || det < -1e-12)
    throw std::invalid_argument("Lambda0_beta must be positive semi-definite");
  if (!(a0_sigma > 1.0)) throw std::invalid_argument("a0_sigma must exceed 1");
  if (!(b0_sigma > 0.0)) throw std::invalid_argument("b0_sigma must be positive");
  if (!(sigma0_psi > 0.0)) throw std::invalid_argument("sigma0_psi must be positive");
  if (!(a0_omega > 1.0)) throw std::invalid_argument("a0_omega must exceed 1");
  if (!(b0_omega > 0.0)) throw std::invalid_argument("b0_omega must be positive");
  if (!(sigma0_j >= 0.0)) throw std::invalid_argument("sigma0_j must be non-negative");
  if (!(lambda_th >= 0.0 && lambda_th < 1.0))
    throw std::invalid_argument("lambda_th must lie in [0, 1)");
}

Priors priors_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Priors p;
  p.mu0_eta = j.at("mu0_eta").get<double>();
  p.sigma0_eta = j.at("sigma0_eta").get<double>();
  auto lam = j.at("Lambda0_beta");
  if (!lam.is_array() || lam.size() != 4)
    throw std::invalid_argument("Lambda0_beta must be a 4-element row-major array");
  for (std::size_t i = 0; i < 4; ++i) p.lambda0_beta[i] = lam[i].get<double>();
  auto mb = j.at("mu0_beta");
  if (!mb.is_array() || mb.size() != 2)
    throw std::invalid_argument("mu0_beta must be a 2-element array");
  p.mu0_beta = {mb[0].get<double>(), mb[1].get<double>()};
  p.a0_sigma = j.at("a0_sigma").get<double>();
  p.b0_sigma = j.at("b0_sigma").get<double>();
  p.mu0_psi = j.at("mu0_psi").get<double>();
  p.sigma0_psi = j.at("sigma0_psi").get<double>();
  p.a0_omega = j.at("a0_omega").get<double>();
  p.b0_omega = j.at("b0_omega").get<double>();
  p.lambda_th = j.at("lambda_th").get<double>();
  p.mu0_j = j.at("mu0_j").get<double>();
  p.sigma0_j = j.at("sigma0_j").get<double>();
  p.validate();
  return p;
}

Priors priors_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open priors file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return priors_from_json_text(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("invalid priors file " + path + ": " + e.what());
  }
}

std::string priors_to_json_text(const Priors& p) {
  nlohmann::ordered_json j;
  j["mu0_eta"] = p.mu0_eta;
  j["sigma0_eta"] = p.sigma0_eta;
  j["Lambda0_beta"] = p.lambda0_beta;
  j["mu0_beta"] = p.mu0_beta;
  j["a0_sigma"] = p.a0_sigma;
  j["b0_sigma"] = p.b0_sigma;
  j["mu0_psi"] = p.mu0_psi;
  j["sigma0_psi"] = p.sigma0_psi;
  j["a0_omega"] = p.a0_omega;
  j["b0_omega"] = p.b0_omega;
  j["lambda_th"] = p.lambda_th;
  j["mu0_j"] = p.mu0_j;
  j["sigma0_j"] = p.sigma0_j;
  return j.dump(2) + "\n";
}

}  // namespace bates
