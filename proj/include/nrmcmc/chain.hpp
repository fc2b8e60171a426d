#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrmcmc/rng.hpp"

namespace nrmcmc {

/// Raised when a target evaluation produces a value no decision can be made on.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PolicyMode { Standard, NonReversible };

/// How accept/reject decisions obtain their uniform value.
///
/// Standard draws a fresh u for every decision. NonReversible keeps v in the
/// chain state, translates it by `delta` (plus uniform noise of the given
/// half-width) before each decision, and uses u = |v|.
struct AcceptancePolicy {
  PolicyMode mode = PolicyMode::Standard;
  double delta = 0.0;
  double noise_half_width = 0.0;

  static AcceptancePolicy standard() { return {}; }
  static AcceptancePolicy non_reversible(double delta, double noise_half_width = 0.0) {
    return {PolicyMode::NonReversible, delta, noise_half_width};
  }
  bool is_non_reversible() const { return mode == PolicyMode::NonReversible; }
};

struct AcceptDecision {
  bool accepted = false;
  double new_v = 0.0;
};

/// Augmented state: continuous x, binary w, optional momentum p and the
/// retained slice variable v.
struct ChainState {
  std::vector<double> x;
  std::vector<std::uint8_t> w;
  std::vector<double> p;  // empty unless a momentum kernel owns this chain
  double v = 0.0;

  /// U(x, w) for the current coordinates.
  double potential = 0.0;
  /// Gradient of U at x; only meaningful while grad_valid.
  std::vector<double> grad;
  bool grad_valid = false;

  bool has_momentum() const { return !p.empty(); }

  double kinetic() const {
    double k = 0.0;
    for (double pi : p) k += pi * pi;
    return 0.5 * k;
  }

  /// log pi(x, w), plus -|p|^2/2 when momentum is carried.
  double cached_logpi() const { return -potential - kinetic(); }

  void invalidate_gradient() { grad_valid = false; }
};

/// Wraps v into [-1, +1] by shifts of 2.
inline double wrap_slice(double v) {
  if (!std::isfinite(v)) throw NumericError("slice variable is not finite");
  if (std::abs(v) > 3.0) v -= 2.0 * std::floor((v + 1.0) / 2.0);
  while (v > 1.0) v -= 2.0;
  while (v < -1.0) v += 2.0;
  return v;
}

/// Wrapped translation of v: v + delta + noise, reduced to [-1, +1].
inline double advance_slice(double v, const AcceptancePolicy& policy, Rng& rng) {
  double shift = policy.delta;
  if (policy.noise_half_width > 0.0)
    shift += rng.uniform(-policy.noise_half_width, policy.noise_half_width);
  return wrap_slice(v + shift);
}

/// Decision against the retained slice variable. On acceptance v is rescaled
/// by pi(x)/pi(x*) so that |v| pi(x) is unchanged.
inline AcceptDecision accept_with_slice(double v, double log_ratio) {
  if (std::isnan(log_ratio)) throw NumericError("log acceptance ratio is NaN");
  const double log_u = v == 0.0 ? -std::numeric_limits<double>::infinity()
                                 : std::log(std::abs(v));
  // strict inequality: a tie rejects
  if (log_u < log_ratio) return {true, v * std::exp(-log_ratio)};
  return {false, v};
}

/// Outcome of a standard decision, with the fresh uniform it used.
struct StandardDecision {
  bool accepted = false;
  double u = 0.0;
};

inline StandardDecision accept_standard_traced(Rng& rng, double log_ratio) {
  if (std::isnan(log_ratio)) throw NumericError("log acceptance ratio is NaN");
  const double u = rng.uniform();
  if (log_ratio >= 0.0) return {true, u};
  const double log_u = u == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(u);
  return {log_u < log_ratio, u};
}

/// Fresh-uniform Metropolis decision: u < exp(log_ratio), in log domain.
inline bool accept_standard(Rng& rng, double log_ratio) {
  return accept_standard_traced(rng, log_ratio).accepted;
}

/// Result of applying a policy to one decision.
struct PolicyDecision {
  bool accepted = false;
  double u = 0.0;  // the uniform value the decision was compared against
};

/// Applies `policy` to a proposal with the given log ratio, updating v when
/// the policy retains it.
inline PolicyDecision decide(const AcceptancePolicy& policy, double& v, double log_ratio,
                             Rng& rng) {
  if (!policy.is_non_reversible()) {
    auto d = accept_standard_traced(rng, log_ratio);
    return {d.accepted, d.u};
  }
  v = advance_slice(v, policy, rng);
  const double u = std::abs(v);
  const auto d = accept_with_slice(v, log_ratio);
  v = d.new_v;
  return {d.accepted, u};
}

/// Builds a chain state at (x0, w0) with v drawn from its stationary law and,
/// if requested, p ~ N(0, I).
template <class TargetT>
ChainState init_state(const TargetT& target, std::span<const double> x0,
                      std::span<const std::uint8_t> w0, bool with_momentum, Rng& rng) {
  if (x0.size() != target.dim_continuous())
    throw std::invalid_argument("initial x has dimension " + std::to_string(x0.size()) +
                                ", target expects " +
                                std::to_string(target.dim_continuous()));
  if (w0.size() != target.dim_discrete())
    throw std::invalid_argument("initial w has dimension " + std::to_string(w0.size()) +
                                ", target expects " + std::to_string(target.dim_discrete()));
  ChainState s;
  s.x.assign(x0.begin(), x0.end());
  s.w.assign(w0.begin(), w0.end());
  s.v = rng.uniform(-1.0, 1.0);
  if (with_momentum) {
    s.p.resize(s.x.size());
    for (auto& pi : s.p) pi = rng.normal();
  }
  s.potential = target.potential(s.x, s.w);
  s.grad.assign(s.x.size(), 0.0);
  return s;
}

}  // namespace nrmcmc
