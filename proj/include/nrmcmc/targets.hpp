#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrmcmc/rng.hpp"

namespace nrmcmc {

/// Indicator of coordinate `index` lying in the open interval (lo, hi).
struct IndicatorMean {
  std::size_t index = 0;
  double lo = 0.0;
  double hi = 0.0;
  double mean = 0.0;
};

/// Exact reference values a target can offer to the estimators.
struct KnownMeans {
  std::optional<double> energy;      // E[U]
  std::optional<double> coordinate;  // common mean of every continuous coordinate
  std::optional<IndicatorMean> indicator;
};

template <class T>
concept Target = requires(const T& t, std::span<const double> x,
                          std::span<const std::uint8_t> w, std::span<double> g) {
  { t.name() } -> std::convertible_to<std::string>;
  { t.dim_continuous() } -> std::convertible_to<std::size_t>;
  { t.dim_discrete() } -> std::convertible_to<std::size_t>;
  { t.potential(x, w) } -> std::convertible_to<double>;
  t.gradient(x, w, g);
  { t.known_means() } -> std::convertible_to<KnownMeans>;
};

/// A target whose binary coordinates can be drawn from their full conditional.
template <class T>
concept DiscreteTarget =
    Target<T> && requires(const T& t, std::span<const double> x, Rng& rng,
                          std::span<std::uint8_t> w) { t.sample_discrete(x, rng, w); };

template <Target T>
double log_density(const T& t, std::span<const double> x, std::span<const std::uint8_t> w) {
  return -t.potential(x, w);
}

/// log(1 + e^a) without overflow.
inline double softplus(double a) { return std::max(a, 0.0) + std::log1p(std::exp(-std::abs(a))); }

/// 1 / (1 + e^-a)
inline double logistic(double a) {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

/// Standard Gaussian in D dimensions, U(x) = |x|^2 / 2.
class IidGaussian {
 public:
  explicit IidGaussian(std::size_t dim) : dim_{dim} {
    if (dim == 0) throw std::invalid_argument("iid-gaussian: dimension must be at least 1");
  }

  std::string name() const { return "iid-gaussian"; }
  std::size_t dim_continuous() const { return dim_; }
  std::size_t dim_discrete() const { return 0; }

  double potential(std::span<const double> x, std::span<const std::uint8_t> = {}) const {
    double s = 0.0;
    for (double xi : x) s += xi * xi;
    return 0.5 * s;
  }

  void gradient(std::span<const double> x, std::span<const std::uint8_t>,
                std::span<double> g) const {
    std::copy(x.begin(), x.end(), g.begin());
  }

  KnownMeans known_means() const { return {0.5 * static_cast<double>(dim_), 0.0, {}}; }

 private:
  std::size_t dim_;
};

/// D/2 independent bivariate Gaussian blocks (x[2k], x[2k+1]) with unit
/// variances and correlation rho.
class CorrelatedPairsGaussian {
 public:
  CorrelatedPairsGaussian(std::size_t dim, double rho) : dim_{dim}, rho_{rho} {
    if (dim == 0 || dim % 2 != 0)
      throw std::invalid_argument("correlated-pairs: dimension must be positive and even");
    if (!(std::abs(rho) < 1.0))
      throw std::invalid_argument("correlated-pairs: |rho| must be below 1");
    inv_det_ = 1.0 / (1.0 - rho * rho);
  }

  std::string name() const { return "correlated-pairs"; }
  std::size_t dim_continuous() const { return dim_; }
  std::size_t dim_discrete() const { return 0; }
  double rho() const { return rho_; }

  double potential(std::span<const double> x, std::span<const std::uint8_t> = {}) const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; i += 2) {
      const double a = x[i], b = x[i + 1];
      s += a * a - 2.0 * rho_ * a * b + b * b;
    }
    return 0.5 * s * inv_det_;
  }

  void gradient(std::span<const double> x, std::span<const std::uint8_t>,
                std::span<double> g) const {
    for (std::size_t i = 0; i < dim_; i += 2) {
      const double a = x[i], b = x[i + 1];
      g[i] = (a - rho_ * b) * inv_det_;
      g[i + 1] = (b - rho_ * a) * inv_det_;
    }
  }

  KnownMeans known_means() const { return {0.5 * static_cast<double>(dim_), 0.0, {}}; }

 private:
  std::size_t dim_;
  double rho_;
  double inv_det_;
};

/// Continuous (u, v) with u ~ N(0,1), v | u ~ N(u, sd^2), and binary
/// w_i | u ~ Bernoulli(1/(1+e^u)). Coordinates are x = (u, v).
class MixedLogisticModel {
 public:
  static constexpr double kIndicatorMean = 0.6246553;  // Phi(1.5) - Phi(-0.5)

  explicit MixedLogisticModel(std::size_t num_binary = 20, double v_sd = 0.04)
      : num_binary_{num_binary}, inv_var_v_{1.0 / (v_sd * v_sd)} {
    if (num_binary == 0) throw std::invalid_argument("mixed: needs at least one binary variable");
    if (!(v_sd > 0.0)) throw std::invalid_argument("mixed: v standard deviation must be positive");
  }

  std::string name() const { return "mixed"; }
  std::size_t dim_continuous() const { return 2; }
  std::size_t dim_discrete() const { return num_binary_; }

  double potential(std::span<const double> x, std::span<const std::uint8_t> w) const {
    const double u_c = x[0], v_c = x[1];
    double zeros = 0.0;
    for (auto wi : w) zeros += wi ? 0.0 : 1.0;
    const double d = v_c - u_c;
    return 0.5 * u_c * u_c + 0.5 * d * d * inv_var_v_ +
           static_cast<double>(num_binary_) * softplus(u_c) - zeros * u_c;
  }

  void gradient(std::span<const double> x, std::span<const std::uint8_t> w,
                std::span<double> g) const {
    const double u_c = x[0], v_c = x[1];
    double zeros = 0.0;
    for (auto wi : w) zeros += wi ? 0.0 : 1.0;
    const double dv = (v_c - u_c) * inv_var_v_;
    g[0] = u_c - dv + static_cast<double>(num_binary_) * logistic(u_c) - zeros;
    g[1] = dv;
  }

  /// P(w_i = 1 | u)
  static double success_probability(double u_c) { return logistic(-u_c); }

  void sample_discrete(std::span<const double> x, Rng& rng, std::span<std::uint8_t> w) const {
    const double q = success_probability(x[0]);
    for (auto& wi : w) wi = rng.uniform() < q ? 1 : 0;
  }

  KnownMeans known_means() const {
    return {std::nullopt, std::nullopt, IndicatorMean{0, -0.5, 1.5, kIndicatorMean}};
  }

 private:
  std::size_t num_binary_;
  double inv_var_v_;
};

/// Largest relative deviation between the analytic gradient and central
/// differences of the potential.
template <Target T>
double finite_difference_gradient_check(const T& target, std::span<const double> x,
                                        std::span<const std::uint8_t> w, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite difference step must be positive");
  std::vector<double> g(x.size()), xp(x.begin(), x.end());
  target.gradient(x, w, g);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    const double up = target.potential(xp, w);
    xp[i] = x[i] - h;
    const double dn = target.potential(xp, w);
    xp[i] = x[i];
    const double fd = (up - dn) / (2.0 * h);
    worst = std::max(worst, std::abs(g[i] - fd) / (std::abs(g[i]) + 1e-10));
  }
  return worst;
}

}  // namespace nrmcmc
