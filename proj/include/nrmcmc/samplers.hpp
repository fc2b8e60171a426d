#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nrmcmc/chain.hpp"
#include "nrmcmc/rng.hpp"
#include "nrmcmc/targets.hpp"

namespace nrmcmc {

/// Half-open range of continuous coordinates a kernel acts on.
struct CoordRange {
  static constexpr std::size_t kAll = std::numeric_limits<std::size_t>::max();
  std::size_t begin = 0;
  std::size_t end = kAll;

  std::pair<std::size_t, std::size_t> resolve(std::size_t dim) const {
    const std::size_t e = end == kAll ? dim : end;
    if (begin >= e || e > dim)
      throw std::invalid_argument("coordinate range [" + std::to_string(begin) + ", " +
                                  std::to_string(e) + ") invalid for dimension " +
                                  std::to_string(dim));
    return {begin, e};
  }
};

struct RwmParams {
  double sigma = 1.0;
};

struct DynamicsParams {
  double eta = 0.1;
  int steps = 1;             // leapfrog steps per trajectory
  double alpha = 0.0;        // momentum persistence
  double jitter_shape = 0.0; // k in Gamma(k/2, mean 1); 0 disables
  CoordRange coords{};
};

struct StepResult {
  bool rejected = false;
  double log_ratio = 0.0;
  double u = 0.0;  // uniform value the decision used
  int leapfrogs = 0;
};

/// Scratch buffers reused across kernel applications.
struct Workspace {
  std::vector<double> x0, p0, g0, xp;
  void fit(std::size_t n) {
    if (x0.size() != n) {
      x0.resize(n);
      p0.resize(n);
      g0.resize(n);
      xp.resize(n);
    }
  }
};

namespace detail {

template <Target T>
void ensure_gradient(ChainState& s, const T& target) {
  if (s.grad_valid) return;
  s.grad.resize(s.x.size());
  target.gradient(s.x, s.w, s.grad);
  s.grad_valid = true;
}

inline double kinetic(std::span<const double> p, std::size_t b, std::size_t e) {
  double k = 0.0;
  for (std::size_t i = b; i < e; ++i) k += p[i] * p[i];
  return 0.5 * k;
}

inline bool all_finite(std::span<const double> a, std::size_t b, std::size_t e) {
  for (std::size_t i = b; i < e; ++i)
    if (!std::isfinite(a[i])) return false;
  return true;
}

}  // namespace detail

/// One leapfrog step on coordinates [b, e). `grad` holds the gradient of U at
/// x on entry and at the new x on return.
template <Target T>
void leapfrog_step(std::span<double> x, std::span<double> p, std::span<double> grad,
                   double eta, const T& target, std::span<const std::uint8_t> w,
                   std::size_t b, std::size_t e) {
  const double half = 0.5 * eta;
  for (std::size_t i = b; i < e; ++i) p[i] -= half * grad[i];
  for (std::size_t i = b; i < e; ++i) x[i] += eta * p[i];
  target.gradient(x, w, grad);
  for (std::size_t i = b; i < e; ++i) p[i] -= half * grad[i];
}

/// Leapfrog step from (x, p) with stepsize eta, restricted to `coords`.
template <Target T>
std::pair<std::vector<double>, std::vector<double>> leapfrog(
    std::span<const double> x, std::span<const double> p, double eta, const T& target,
    std::span<const std::uint8_t> w, CoordRange coords = {}) {
  if (x.size() != p.size() || x.size() != target.dim_continuous())
    throw std::invalid_argument("leapfrog: position and momentum dimensions disagree");
  auto [b, e] = coords.resolve(x.size());
  std::vector<double> xo(x.begin(), x.end()), po(p.begin(), p.end()), g(x.size());
  target.gradient(xo, w, g);
  if (!detail::all_finite(g, 0, g.size())) throw NumericError("leapfrog: gradient is not finite");
  leapfrog_step<T>(xo, po, g, eta, target, w, b, e);
  if (!detail::all_finite(g, 0, g.size())) throw NumericError("leapfrog: gradient is not finite");
  return {std::move(xo), std::move(po)};
}

/// eta / sqrt(G) with G ~ Gamma(shape_k / 2, mean 1).
inline double jitter_stepsize(double eta, double shape_k, Rng& rng) {
  if (!(shape_k > 0.0)) throw std::invalid_argument("jitter shape must be positive");
  return eta / std::sqrt(rng.gamma_mean1(0.5 * shape_k));
}

/// Random-walk Metropolis: x* ~ N(x, sigma^2 I) on all coordinates.
template <Target T>
StepResult rwm_update(ChainState& s, const T& target, const RwmParams& params,
                      const AcceptancePolicy& policy, Rng& rng, Workspace& ws) {
  const std::size_t n = s.x.size();
  ws.fit(n);
  for (std::size_t i = 0; i < n; ++i) ws.xp[i] = s.x[i] + params.sigma * rng.normal();
  const double u_new = target.potential(ws.xp, s.w);
  if (std::isnan(u_new)) throw NumericError("rwm: target evaluated to NaN");
  const double log_ratio = s.potential - u_new;
  const auto d = decide(policy, s.v, log_ratio, rng);
  StepResult r{!d.accepted, log_ratio, d.u, 0};
  if (d.accepted) {
    s.x.swap(ws.xp);
    s.potential = u_new;
    s.invalidate_gradient();
  }
  return r;
}

template <Target T>
StepResult rwm_update(ChainState& s, const T& target, const RwmParams& params,
                      const AcceptancePolicy& policy, Rng& rng) {
  Workspace ws;
  return rwm_update(s, target, params, policy, rng, ws);
}

namespace detail {

/// Runs `steps` leapfrogs from the state's (x, p) and makes the decision.
/// The caller has already set p to the trajectory's starting momentum.
/// On return (x, p) hold either the endpoint with p un-negated, or the start.
template <Target T>
StepResult trajectory(ChainState& s, const T& target, double eta, int steps,
                      std::size_t b, std::size_t e, const AcceptancePolicy& policy, Rng& rng,
                      Workspace& ws) {
  const std::size_t n = s.x.size();
  ws.fit(n);
  ensure_gradient(s, target);
  std::copy(s.x.begin(), s.x.end(), ws.x0.begin());
  std::copy(s.p.begin(), s.p.end(), ws.p0.begin());
  std::copy(s.grad.begin(), s.grad.end(), ws.g0.begin());
  const double h0 = s.potential + kinetic(s.p, b, e);

  double log_ratio = -std::numeric_limits<double>::infinity();
  double u_new = 0.0;
  int done = 0;
  bool finite = true;
  for (; done < steps; ++done) {
    leapfrog_step<T>(s.x, s.p, s.grad, eta, target, s.w, b, e);
    if (!all_finite(s.grad, 0, n) || !all_finite(s.x, b, e)) {
      finite = false;
      ++done;
      break;
    }
  }
  if (finite) {
    u_new = target.potential(s.x, s.w);
    const double h1 = u_new + kinetic(s.p, b, e);
    if (std::isfinite(h1)) log_ratio = h0 - h1;
  }
  const auto d = decide(policy, s.v, log_ratio, rng);
  if (d.accepted) {
    s.potential = u_new;
  } else {
    std::copy(ws.x0.begin(), ws.x0.end(), s.x.begin());
    std::copy(ws.p0.begin(), ws.p0.end(), s.p.begin());
    std::copy(ws.g0.begin(), ws.g0.end(), s.grad.begin());
  }
  return {!d.accepted, log_ratio, d.u, done};
}

inline void require_momentum(const ChainState& s) {
  if (!s.has_momentum() || s.p.size() != s.x.size())
    throw std::invalid_argument("dynamics kernel needs a state carrying momentum");
}

}  // namespace detail

/// Hamiltonian Monte Carlo: fresh momentum, L leapfrog steps, negation, and a
/// decision on -dH. A rejection restores x and the refreshed p.
template <Target T>
StepResult hmc_update(ChainState& s, const T& target, const DynamicsParams& params,
                      const AcceptancePolicy& policy, Rng& rng, Workspace& ws) {
  detail::require_momentum(s);
  if (params.steps < 1) throw std::invalid_argument("hmc: need at least one leapfrog step");
  auto [b, e] = params.coords.resolve(s.x.size());
  for (std::size_t i = b; i < e; ++i) s.p[i] = rng.normal();
  const double eta =
      params.jitter_shape > 0.0 ? jitter_stepsize(params.eta, params.jitter_shape, rng) : params.eta;
  auto r = detail::trajectory(s, target, eta, params.steps, b, e, policy, rng, ws);
  if (!r.rejected)
    for (std::size_t i = b; i < e; ++i) s.p[i] = -s.p[i];
  return r;
}

template <Target T>
StepResult hmc_update(ChainState& s, const T& target, const DynamicsParams& params,
                      const AcceptancePolicy& policy, Rng& rng) {
  Workspace ws;
  return hmc_update(s, target, params, policy, rng, ws);
}

/// Langevin update with persistent momentum:
///   p' = alpha p + sqrt(1 - alpha^2) n; one leapfrog step then negate p;
///   accept or keep (x, p'); negate p.
/// The two negations cancel on acceptance, so an accepted step keeps its
/// direction and a rejected one leaves p = -p'.
template <Target T>
StepResult persistent_langevin_update(ChainState& s, const T& target,
                                      const DynamicsParams& params,
                                      const AcceptancePolicy& policy, Rng& rng, Workspace& ws) {
  detail::require_momentum(s);
  if (params.steps != 1)
    throw std::invalid_argument("persistent Langevin takes exactly one leapfrog step");
  if (!(params.alpha >= 0.0 && params.alpha <= 1.0))
    throw std::invalid_argument("persistence alpha must lie in [0, 1]");
  auto [b, e] = params.coords.resolve(s.x.size());
  const double a = params.alpha;
  const double c = std::sqrt(1.0 - a * a);
  if (c > 0.0) {
    for (std::size_t i = b; i < e; ++i) s.p[i] = a * s.p[i] + c * rng.normal();
  }
  const double eta =
      params.jitter_shape > 0.0 ? jitter_stepsize(params.eta, params.jitter_shape, rng) : params.eta;
  auto r = detail::trajectory(s, target, eta, 1, b, e, policy, rng, ws);
  if (r.rejected)
    for (std::size_t i = b; i < e; ++i) s.p[i] = -s.p[i];
  return r;
}

template <Target T>
StepResult persistent_langevin_update(ChainState& s, const T& target,
                                      const DynamicsParams& params,
                                      const AcceptancePolicy& policy, Rng& rng) {
  Workspace ws;
  return persistent_langevin_update(s, target, params, policy, rng, ws);
}

/// Redraws every binary coordinate from its conditional given x. Leaves v
/// alone and recomputes the cached potential.
template <Target T>
void binary_gibbs_update(ChainState& s, const T& target, Rng& rng) {
  if constexpr (DiscreteTarget<T>) {
    if (target.dim_discrete() == 0 || s.w.size() != target.dim_discrete())
      throw std::invalid_argument("binary gibbs: state has no binary coordinates");
    target.sample_discrete(s.x, rng, s.w);
    s.potential = target.potential(s.x, s.w);
    s.invalidate_gradient();
  } else {
    (void)s;
    (void)rng;
    throw std::invalid_argument("binary gibbs: target " + target.name() +
                                " has no discrete coordinates");
  }
}

}  // namespace nrmcmc
