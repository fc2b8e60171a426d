#pragma once

#include <cstdint>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace nrmcmc {

/// Seedable random stream for one chain.
///
/// Boost distributions are used instead of the <random> ones so that a given
/// seed replays the same draws with any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1) : seed_{seed}, engine_{seed} {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform on [0, 1).
  double uniform() { return unif_(engine_); }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() { return norm_(engine_); }

  /// Gamma variate with the given shape, scaled to have mean 1.
  double gamma_mean1(double shape) {
    boost::random::gamma_distribution<double> g{shape, 1.0 / shape};
    return g(engine_);
  }

  /// Independent stream derived from this seed, for parallel chains.
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finaliser
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng{z ^ (z >> 31)};
  }

 private:
  std::uint64_t seed_;
  boost::random::mt19937_64 engine_;
  boost::random::uniform_01<double> unif_;
  boost::random::normal_distribution<double> norm_;
};

}  // namespace nrmcmc
