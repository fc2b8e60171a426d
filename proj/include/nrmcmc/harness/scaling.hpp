#pragma once

#include <cmath>
#include <stdexcept>

namespace nrmcmc::harness {

/// Proposal standard deviation for random-walk Metropolis in D dimensions.
inline double scale_rwm(double step_raw, std::size_t dim) {
  if (dim < 1) throw std::invalid_argument("scale_rwm: dimension must be at least 1");
  return step_raw / std::sqrt(static_cast<double>(dim));
}

struct LangevinScale {
  double eta;
  double alpha;
  int group_size;
};

/// eta = step / D^(1/6), alpha = base^eta, group = floor(10 D^(1/3)).
inline LangevinScale scale_langevin(double step_raw, double alpha_base, std::size_t dim) {
  if (dim < 1) throw std::invalid_argument("scale_langevin: dimension must be at least 1");
  if (!(alpha_base > 0.0 && alpha_base < 1.0))
    throw std::invalid_argument("scale_langevin: alpha base must lie in (0, 1)");
  const double d = static_cast<double>(dim);
  const double eta = step_raw / std::pow(d, 1.0 / 6.0);
  return {eta, std::pow(alpha_base, eta), static_cast<int>(std::floor(10.0 * std::cbrt(d)))};
}

}  // namespace nrmcmc::harness
