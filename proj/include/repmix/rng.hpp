#ifndef REPMIX_RNG_HPP
#define REPMIX_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace repmix {

/// Seeded random stream with hand-rolled distributions.
///
/// All draws are implemented on top of the raw mt19937_64 output so that a
/// given seed yields the same stream on every platform; the standard library
/// distribution adaptors are implementation defined and are not used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform on [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller; two uniforms per draw, no cached spare
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Gamma(shape, 1) by Marsaglia-Tsang squeeze, with the boost for shape < 1.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0) * std::pow(u > 0.0 ? u : 5e-324, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double gamma(double shape, double scale) { return scale * gamma(shape); }

  // InvGamma(shape, scale): reciprocal of a rate-parameterised gamma draw
  double inv_gamma(double shape, double scale) { return scale / gamma(shape); }

  double student_t(double df) { return normal() / std::sqrt(gamma(df / 2.0, 2.0) / df); }

  std::vector<double> dirichlet(const std::vector<double>& alpha) {
    std::vector<double> w(alpha.size());
    double sum = 0.0;
    for (std::size_t h = 0; h < alpha.size(); ++h) {
      w[h] = gamma(alpha[h]);
      sum += w[h];
    }
    // renormalise to absorb floating-point drift
    double check = 0.0;
    for (double& x : w) {
      x /= sum;
      check += x;
    }
    for (double& x : w) x /= check;
    return w;
  }

  std::size_t categorical(const std::vector<double>& probs) {
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t h = 0; h + 1 < probs.size(); ++h) {
      acc += probs[h];
      if (u < acc) return h;
    }
    return probs.empty() ? 0 : probs.size() - 1;
  }

 private:
  std::mt19937_64 gen_;
};

/// Deterministic derivation of sub-seeds from a master seed, used for chains,
/// replicates and calibration stages so manifests fully determine outputs.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_id) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (stream_id + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace repmix

#endif
