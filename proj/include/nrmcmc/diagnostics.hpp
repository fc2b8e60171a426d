#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nrmcmc {

struct ScalarSeries {
  std::string name;
  std::vector<double> values;
};

enum class MeanSource { Known, Sample };

struct ActEstimate {
  double tau = 1.0;
  int max_lag = 0;
  double mean_used = 0.0;
  MeanSource mean_source = MeanSource::Sample;
  bool short_series = false;  // fewer than 10 * max_lag values
};

inline double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of an empty series");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

/// Lag-k autocovariance about `mean`, divided by N.
inline double autocovariance(std::span<const double> xs, std::size_t k, double mean) {
  const std::size_t n = xs.size();
  if (k >= n) return 0.0;
  double s = 0.0;
  for (std::size_t t = 0; t + k < n; ++t) s += (xs[t] - mean) * (xs[t + k] - mean);
  return s / static_cast<double>(n);
}

inline double autocorrelation(std::span<const double> xs, std::size_t k,
                              std::optional<double> known_mean = std::nullopt) {
  const double m = known_mean ? *known_mean : sample_mean(xs);
  const double g0 = autocovariance(xs, 0, m);
  if (!(g0 > 0.0)) throw std::invalid_argument("autocorrelation of a zero-variance series");
  return autocovariance(xs, k, m) / g0;
}

/// Autocorrelation time 1 + 2 sum_{k=1..max_lag} rho_k. Autocovariances are
/// taken about the known mean when one is given.
inline ActEstimate act(std::span<const double> xs, int max_lag,
                       std::optional<double> known_mean = std::nullopt) {
  if (max_lag < 1) throw std::invalid_argument("max_lag must be positive");
  if (xs.empty()) throw std::invalid_argument("autocorrelation time of an empty series");
  ActEstimate est;
  est.max_lag = max_lag;
  est.mean_source = known_mean ? MeanSource::Known : MeanSource::Sample;
  est.mean_used = known_mean ? *known_mean : sample_mean(xs);
  est.short_series = xs.size() <= 10 * static_cast<std::size_t>(max_lag);
  const double g0 = autocovariance(xs, 0, est.mean_used);
  if (!(g0 > 0.0)) throw std::invalid_argument("autocorrelation time of a zero-variance series");
  double sum = 0.0;
  for (int k = 1; k <= max_lag; ++k)
    sum += autocovariance(xs, static_cast<std::size_t>(k), est.mean_used);
  est.tau = 1.0 + 2.0 * sum / g0;
  return est;
}

inline ActEstimate act(const ScalarSeries& s, int max_lag,
                       std::optional<double> known_mean = std::nullopt) {
  return act(std::span<const double>{s.values}, max_lag, known_mean);
}

/// Standard error of the autocorrelation time from its spread over
/// contiguous batches. Returns NaN when batches are too short to estimate.
inline double act_batch_stderr(std::span<const double> xs, int max_lag,
                               std::optional<double> known_mean, int batches = 20) {
  const std::size_t len = xs.size() / static_cast<std::size_t>(batches);
  if (batches < 2 || len <= static_cast<std::size_t>(max_lag) + 1) return std::nan("");
  std::vector<double> taus;
  taus.reserve(static_cast<std::size_t>(batches));
  for (int b = 0; b < batches; ++b) {
    auto part = xs.subspan(static_cast<std::size_t>(b) * len, len);
    try {
      taus.push_back(act(part, max_lag, known_mean).tau);
    } catch (const std::invalid_argument&) {
      return std::nan("");
    }
  }
  const double m = sample_mean(taus);
  double ss = 0.0;
  for (double t : taus) ss += (t - m) * (t - m);
  const double sd = std::sqrt(ss / static_cast<double>(taus.size() - 1));
  return sd / std::sqrt(static_cast<double>(taus.size()));
}

/// Mean of per-group rejection fractions.
inline double rejection_rate(std::span<const double> fractions) {
  if (fractions.empty()) throw std::invalid_argument("rejection rate of an empty run");
  return sample_mean(fractions);
}

/// Which scalar to extract from a recorded group.
struct ScalarSpec {
  enum class Kind { Coordinate, Energy, Indicator };
  Kind kind = Kind::Energy;
  std::size_t index = 0;
  double lo = 0.0;
  double hi = 0.0;

  static ScalarSpec coordinate(std::size_t i) { return {Kind::Coordinate, i, 0.0, 0.0}; }
  static ScalarSpec energy() { return {}; }
  static ScalarSpec indicator(double lo, double hi, std::size_t i) {
    return {Kind::Indicator, i, lo, hi};
  }

  std::string label() const {
    switch (kind) {
      case Kind::Coordinate: return "coord" + std::to_string(index);
      case Kind::Energy: return "energy";
      case Kind::Indicator: break;
    }
    auto fmt = [](double d) {
      std::string s = std::to_string(d);
      s.erase(s.find_last_not_of('0') + 1);
      if (!s.empty() && s.back() == '.') s.pop_back();
      return s;
    };
    return "indicator(" + fmt(lo) + ":" + fmt(hi) + ")@" + std::to_string(index);
  }
};

/// Coordinate value, potential energy, or 0/1 indicator of lo < x[i] < hi.
inline double derive_scalar(std::span<const double> x, double potential, const ScalarSpec& spec) {
  switch (spec.kind) {
    case ScalarSpec::Kind::Energy: return potential;
    case ScalarSpec::Kind::Coordinate:
    case ScalarSpec::Kind::Indicator: break;
  }
  if (spec.index >= x.size())
    throw std::out_of_range("scalar " + spec.label() + " refers to coordinate " +
                            std::to_string(spec.index) + " of " + std::to_string(x.size()));
  const double xi = x[spec.index];
  if (spec.kind == ScalarSpec::Kind::Coordinate) return xi;
  return (xi > spec.lo && xi < spec.hi) ? 1.0 : 0.0;
}

}  // namespace nrmcmc
