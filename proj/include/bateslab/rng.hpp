#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace bates {

// Counter-based pseudo-random stream. A stream is identified entirely by the
// key words it was constructed from, so independent streams for e.g.
// (seed, path, step) or (seed, iteration, step, particle) can be created
// cheaply anywhere and produce the same values regardless of evaluation
// order or threading.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng() : key_(mix(0xb5ad4ecedad0a4a1ull)) {}

  explicit CounterRng(std::initializer_list<std::uint64_t> key_words) {
    std::uint64_t k = 0x9e3779b97f4a7c15ull;
    for (std::uint64_t w : key_words) k = mix(k ^ mix(w));
    key_ = k;
  }

  // Derived stream: same construction rule as chaining the extra words.
  CounterRng fork(std::initializer_list<std::uint64_t> extra) const {
    CounterRng r;
    std::uint64_t k = key_;
    for (std::uint64_t w : extra) k = mix(k ^ mix(w));
    r.key_ = k;
    r.counter_ = 0;
    return r;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ull; }

  result_type operator()() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

// Uniform draw on (0, 1), endpoints excluded.
inline double draw_uniform(CounterRng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal via Box-Muller. Two uniforms per draw keeps the stream
// consumption fixed, which the reproducibility contract relies on.
inline double draw_normal(CounterRng& rng) {
  const double u1 = draw_uniform(rng);
  const double u2 = draw_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline bool draw_bernoulli(CounterRng& rng, double p) { return draw_uniform(rng) < p; }

// Gamma(shape, rate=1) by Marsaglia-Tsang squeeze; shape < 1 handled through
// the boost Gamma(shape+1) * U^(1/shape).
inline double draw_gamma(CounterRng& rng, double shape) {
  if (shape < 1.0) {
    const double u = draw_uniform(rng);
    return draw_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = draw_normal(rng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = draw_uniform(rng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// InverseGamma(a, b): density proportional to x^(-a-1) exp(-b/x).
inline double draw_inverse_gamma(CounterRng& rng, double a, double b) {
  return b / draw_gamma(rng, a);
}

}  // namespace bates
