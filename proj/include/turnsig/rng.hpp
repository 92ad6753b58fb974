#pragma once
// Deterministic random streams. A (seed, stream) pair always yields the
// same sequence, and distinct streams are decorrelated by a splitmix hash,
// so per-interview / per-permutation generators never perturb each other.

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace turnsig {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
public:
  Rng(std::uint64_t seed, std::uint64_t stream) : gen_(mix64(seed ^ mix64(stream))) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool bernoulli(double p) { return uniform() < p; }
  double normal(double mean, double sd) {
    double u1 = std::max(uniform(), 1e-12), u2 = uniform();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  double lognormal(double mu, double sigma) { return std::exp(normal(mu, sigma)); }
  int poisson(double lambda) {  // Knuth, fine for small lambda
    double l = std::exp(-lambda), p = 1.0;
    int k = 0;
    do {
      ++k;
      p *= uniform();
    } while (p > l);
    return k - 1;
  }

  template <typename T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i)
      std::swap(xs[i - 1], xs[static_cast<std::size_t>(uniform_int(0, static_cast<int>(i) - 1))]);
  }

private:
  std::mt19937_64 gen_;
};

}  // namespace turnsig
