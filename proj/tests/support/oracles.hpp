#pragma once

// Reference computations used by the tests. Nothing here calls into the
// sampler code paths it is used to check; random draws come from <random>.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace oracle {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Kolmogorov-Smirnov distance between the sample and a continuous CDF.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

/// Asymptotic one-sample KS critical value at the 0.1% level.
inline double ks_critical_001(std::size_t n) { return 1.9495 / std::sqrt(static_cast<double>(n)); }

/// Every k-th element, starting at the first.
inline std::vector<double> thin(std::span<const double> xs, std::size_t k) {
  std::vector<double> out;
  for (std::size_t i = 0; i < xs.size(); i += k) out.push_back(xs[i]);
  return out;
}

/// AR(1) series x_t = phi x_{t-1} + e_t with stationary start.
inline std::vector<double> ar1(std::size_t n, double phi, std::uint64_t seed) {
  std::mt19937_64 g{seed};
  std::normal_distribution<double> z;
  std::vector<double> xs(n);
  double x = z(g) / std::sqrt(1.0 - phi * phi);
  for (auto& xi : xs) {
    x = phi * x + z(g);
    xi = x;
  }
  return xs;
}

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed) { return ar1(n, 0.0, seed); }

/// Exact draw from D/2 bivariate blocks with unit variances and correlation rho.
inline std::vector<double> correlated_pairs_draw(std::mt19937_64& g, std::size_t dim, double rho) {
  std::normal_distribution<double> z;
  std::vector<double> x(dim);
  const double c = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < dim; i += 2) {
    const double a = z(g);
    x[i] = a;
    x[i + 1] = rho * a + c * z(g);
  }
  return x;
}

struct MixedDraw {
  double u, v;
  std::vector<std::uint8_t> w;
};

/// Ancestral draw: u ~ N(0,1), v | u ~ N(u, sd^2), w_i | u ~ Bernoulli(1/(1+e^u)).
inline MixedDraw mixed_draw(std::mt19937_64& g, std::size_t n_binary = 20, double sd = 0.04) {
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> unif;
  MixedDraw d;
  d.u = z(g);
  d.v = d.u + sd * z(g);
  const double q = 1.0 / (1.0 + std::exp(d.u));
  d.w.resize(n_binary);
  for (auto& wi : d.w) wi = unif(g) < q ? 1 : 0;
  return d;
}

/// Lag-1 sample autocorrelation of a 0/1 or real sequence.
inline double lag1_autocorrelation(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  double m = 0.0;
  for (double x : xs) m += x;
  m /= n;
  double c0 = 0.0, c1 = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    c0 += (xs[i] - m) * (xs[i] - m);
    if (i + 1 < xs.size()) c1 += (xs[i] - m) * (xs[i + 1] - m);
  }
  return c1 / c0;
}

/// Mean length of maximal runs of `true`.
inline double mean_run_length(std::span<const bool> flags) {
  std::size_t runs = 0, total = 0, cur = 0;
  for (bool f : flags) {
    if (f) {
      ++cur;
    } else if (cur > 0) {
      ++runs;
      total += cur;
      cur = 0;
    }
  }
  if (cur > 0) {
    ++runs;
    total += cur;
  }
  return runs == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(runs);
}

/// Wald-Wolfowitz runs test about the median; returns the z statistic.
inline double runs_test_z(std::span<const double> xs) {
  std::vector<double> sorted(xs.begin(), xs.end());
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double med = sorted[sorted.size() / 2];
  double n1 = 0, n2 = 0, runs = 0;
  int prev = -1;
  for (double x : xs) {
    if (x == med) continue;
    const int s = x > med ? 1 : 0;
    (s ? n1 : n2) += 1;
    if (s != prev) runs += 1;
    prev = s;
  }
  const double n = n1 + n2;
  const double mu = 2 * n1 * n2 / n + 1;
  const double var = 2 * n1 * n2 * (2 * n1 * n2 - n) / (n * n * (n - 1));
  return (runs - mu) / std::sqrt(var);
}

/// Least-squares slope of y on x.
inline double slope(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
