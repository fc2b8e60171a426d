#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nrmcmc/chain.hpp"
#include "nrmcmc/diagnostics.hpp"

namespace nrmcmc::harness {

/// Bad or unresolvable configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TargetKind { IidGaussian, CorrelatedPairs, Mixed };
enum class KernelKind { Rwm, Hmc, PersistentLangevin, Langevin };
enum class Scaling { None, Rwm, Langevin };

inline constexpr std::string_view to_string(TargetKind t) {
  switch (t) {
    case TargetKind::IidGaussian: return "iid-gaussian";
    case TargetKind::CorrelatedPairs: return "correlated-pairs";
    case TargetKind::Mixed: return "mixed";
  }
  return "?";
}

inline constexpr std::string_view to_string(KernelKind k) {
  switch (k) {
    case KernelKind::Rwm: return "rwm";
    case KernelKind::Hmc: return "hmc";
    case KernelKind::PersistentLangevin: return "plang";
    case KernelKind::Langevin: return "langevin";
  }
  return "?";
}

inline constexpr std::string_view to_string(Scaling s) {
  switch (s) {
    case Scaling::None: return "none";
    case Scaling::Rwm: return "rwm";
    case Scaling::Langevin: return "langevin";
  }
  return "?";
}

inline constexpr std::string_view to_string(PolicyMode m) {
  return m == PolicyMode::Standard ? "standard" : "nonreversible";
}

/// Everything needed to reproduce one chain and its summaries.
struct ExperimentConfig {
  std::string preset;

  TargetKind target = TargetKind::IidGaussian;
  std::size_t dim = 40;
  double rho = 0.99;

  KernelKind kernel = KernelKind::Rwm;
  PolicyMode policy = PolicyMode::Standard;
  double delta = 0.0;
  double noise = 0.0;

  // Raw tuning values; `scaling` says how they become sigma, eta and alpha.
  Scaling scaling = Scaling::None;
  double step = 1.0;
  double alpha_base = 0.5;
  double alpha = 0.0;
  int leapfrogs = 1;
  double jitter = 0.0;

  int group_size = 0;       // kernel applications per group; 0 derives it
  int leapfrog_budget = 0;  // hmc: group_size = budget / leapfrogs
  int gibbs_every = 0;      // binary Gibbs after this many kernel applications
  std::size_t coord_begin = 0;
  std::size_t coord_end = 0;  // 0 = all continuous coordinates

  std::size_t groups = 101000;  // including burn-in
  std::size_t burnin = 1000;
  std::uint64_t seed = 1;

  std::vector<std::string> scalars{"energy"};
  int max_lag = 10;
  bool use_known_means = true;
};

struct PresetInfo {
  std::string name;
  std::string description;
};

inline const std::vector<PresetInfo>& preset_list() {
  static const std::vector<PresetInfo> list{
      {"fig1", "random-walk Metropolis, 40-D iid Gaussian, step 1.8/sqrt(40), groups of 40"},
      {"fig2", "persistent Langevin, 32-D pairs (rho 0.99), step 0.12, alpha base 0.5, "
               "non-reversible delta 0.03, groups of 31"},
      {"fig2-hmc", "HMC, 32-D pairs (rho 0.99), L 16, eta 0.07 jittered (30), 32 leapfrogs/group"},
      {"mixed-plang", "persistent Langevin on the mixed model, delta 0.010, alpha 0.995, "
                      "eta 0.030, Gibbs every 10, 60 leapfrogs/group"},
      {"mixed-hmc", "HMC on the mixed model, L 40, eta 0.035 jittered (10), Gibbs between "
                    "trajectories, 120 leapfrogs/group"},
      {"langevin-footnote", "standard Langevin, 40-D iid Gaussian, step 1.4/40^(1/6), "
                            "non-reversible delta 0.7, groups of 4"},
  };
  return list;
}

inline ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.preset = name;
  if (name == "fig1") {
    c.target = TargetKind::IidGaussian;
    c.dim = 40;
    c.kernel = KernelKind::Rwm;
    c.policy = PolicyMode::Standard;
    c.delta = 0.3;
    c.scaling = Scaling::Rwm;
    c.step = 1.8;
    c.groups = 1001000;
    c.scalars = {"energy", "coord0"};
    c.max_lag = 10;
  } else if (name == "fig2") {
    c.target = TargetKind::CorrelatedPairs;
    c.dim = 32;
    c.rho = 0.99;
    c.kernel = KernelKind::PersistentLangevin;
    c.policy = PolicyMode::NonReversible;
    c.delta = 0.03;
    c.scaling = Scaling::Langevin;
    c.step = 0.12;
    c.alpha_base = 0.5;
    c.groups = 101000;
    c.scalars = {"energy", "coord0"};
    c.max_lag = 10;
  } else if (name == "fig2-hmc") {
    c.target = TargetKind::CorrelatedPairs;
    c.dim = 32;
    c.rho = 0.99;
    c.kernel = KernelKind::Hmc;
    c.policy = PolicyMode::Standard;
    c.step = 0.07;
    c.leapfrogs = 16;
    c.jitter = 30;
    c.leapfrog_budget = 32;
    c.groups = 101000;
    c.scalars = {"energy", "coord0"};
    c.max_lag = 10;
  } else if (name == "mixed-plang") {
    c.target = TargetKind::Mixed;
    c.dim = 2;
    c.kernel = KernelKind::PersistentLangevin;
    c.policy = PolicyMode::NonReversible;
    c.delta = 0.010;
    c.alpha = 0.995;
    c.step = 0.030;
    c.group_size = 60;
    c.gibbs_every = 10;
    c.groups = 200000;
    c.scalars = {"indicator(-0.5:1.5)@0"};
    c.max_lag = 15;
  } else if (name == "mixed-hmc") {
    c.target = TargetKind::Mixed;
    c.dim = 2;
    c.kernel = KernelKind::Hmc;
    c.policy = PolicyMode::Standard;
    c.step = 0.035;
    c.leapfrogs = 40;
    c.jitter = 10;
    c.leapfrog_budget = 120;
    c.gibbs_every = 1;
    c.groups = 200000;
    c.scalars = {"indicator(-0.5:1.5)@0"};
    c.max_lag = 15;
  } else if (name == "langevin-footnote") {
    c.target = TargetKind::IidGaussian;
    c.dim = 40;
    c.kernel = KernelKind::Langevin;
    c.policy = PolicyMode::NonReversible;
    c.delta = 0.7;
    c.scaling = Scaling::Langevin;
    c.step = 1.4;
    c.group_size = 4;
    c.groups = 1001000;
    c.scalars = {"energy"};
    c.max_lag = 10;
  } else {
    throw ConfigError("preset: unknown preset '" + name + "'");
  }
  return c;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string{s.substr(b, e - b + 1)};
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  return out;
}

inline bool to_bool(const std::string& key, const std::string& v) {
  const auto l = lower(v);
  if (l == "true" || l == "1" || l == "yes") return true;
  if (l == "false" || l == "0" || l == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is{s};
  while (std::getline(is, cur, sep)) {
    auto t = trim(cur);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

}  // namespace detail

/// Parses a scalar name: "energy", "coordN", or "indicator(LO:HI)@N".
inline ScalarSpec parse_scalar(const std::string& s) {
  if (s == "energy") return ScalarSpec::energy();
  if (s.rfind("coord", 0) == 0 && s.size() > 5)
    return ScalarSpec::coordinate(detail::to_int<std::size_t>("scalars", s.substr(5)));
  if (s.rfind("indicator(", 0) == 0) {
    const auto colon = s.find(':');
    const auto close = s.find(")@");
    if (colon != std::string::npos && close != std::string::npos && colon < close) {
      const double lo = detail::to_double("scalars", s.substr(10, colon - 10));
      const double hi = detail::to_double("scalars", s.substr(colon + 1, close - colon - 1));
      const auto idx = detail::to_int<std::size_t>("scalars", s.substr(close + 2));
      return ScalarSpec::indicator(lo, hi, idx);
    }
  }
  throw ConfigError("scalars: cannot parse scalar '" + s + "'");
}

/// Sets one field from its textual key and value.
inline void set_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
  using namespace detail;
  const std::string v = trim(value);
  if (key == "preset") {
    c = preset(v);
  } else if (key == "target") {
    const auto l = lower(v);
    if (l == "iid-gaussian") c.target = TargetKind::IidGaussian;
    else if (l == "correlated-pairs") c.target = TargetKind::CorrelatedPairs;
    else if (l == "mixed") c.target = TargetKind::Mixed;
    else throw ConfigError("target: unknown target '" + v + "'");
  } else if (key == "dim") {
    c.dim = to_int<std::size_t>(key, v);
  } else if (key == "rho") {
    c.rho = to_double(key, v);
  } else if (key == "kernel") {
    const auto l = lower(v);
    if (l == "rwm") c.kernel = KernelKind::Rwm;
    else if (l == "hmc") c.kernel = KernelKind::Hmc;
    else if (l == "plang") c.kernel = KernelKind::PersistentLangevin;
    else if (l == "langevin") c.kernel = KernelKind::Langevin;
    else throw ConfigError("kernel: unknown kernel '" + v + "'");
  } else if (key == "policy") {
    const auto l = lower(v);
    if (l == "standard") c.policy = PolicyMode::Standard;
    else if (l == "nonreversible") c.policy = PolicyMode::NonReversible;
    else throw ConfigError("policy: expected standard or nonreversible, got '" + v + "'");
  } else if (key == "delta") {
    c.delta = to_double(key, v);
  } else if (key == "noise") {
    c.noise = to_double(key, v);
  } else if (key == "scaling") {
    const auto l = lower(v);
    if (l == "none") c.scaling = Scaling::None;
    else if (l == "rwm") c.scaling = Scaling::Rwm;
    else if (l == "langevin") c.scaling = Scaling::Langevin;
    else throw ConfigError("scaling: expected none, rwm or langevin, got '" + v + "'");
  } else if (key == "step") {
    c.step = to_double(key, v);
  } else if (key == "alpha_base") {
    c.alpha_base = to_double(key, v);
  } else if (key == "alpha") {
    c.alpha = to_double(key, v);
  } else if (key == "leapfrogs" || key == "L") {
    c.leapfrogs = to_int<int>(key, v);
  } else if (key == "jitter") {
    c.jitter = to_double(key, v);
  } else if (key == "group_size") {
    c.group_size = to_int<int>(key, v);
  } else if (key == "leapfrog_budget") {
    c.leapfrog_budget = to_int<int>(key, v);
  } else if (key == "gibbs_every") {
    c.gibbs_every = to_int<int>(key, v);
  } else if (key == "coord_begin") {
    c.coord_begin = to_int<std::size_t>(key, v);
  } else if (key == "coord_end") {
    c.coord_end = to_int<std::size_t>(key, v);
  } else if (key == "groups") {
    c.groups = to_int<std::size_t>(key, v);
  } else if (key == "burnin") {
    c.burnin = to_int<std::size_t>(key, v);
  } else if (key == "seed") {
    c.seed = to_int<std::uint64_t>(key, v);
  } else if (key == "scalars") {
    auto names = split(v, ',');
    if (names.empty()) throw ConfigError("scalars: need at least one scalar");
    for (const auto& n : names) parse_scalar(n);
    c.scalars = std::move(names);
  } else if (key == "max_lag") {
    c.max_lag = to_int<int>(key, v);
  } else if (key == "use_known_means") {
    c.use_known_means = to_bool(key, v);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

/// Parses `key = value` lines with `#` comments. A `preset` line is applied
/// before every other key regardless of where it appears.
inline ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {}) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream is{text};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    auto key = detail::trim(std::string_view{t}.substr(0, eq));
    auto val = detail::trim(std::string_view{t}.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    entries.emplace_back(std::move(key), std::move(val));
  }
  for (const auto& [k, v] : entries)
    if (k == "preset") set_key(base, k, v);
  for (const auto& [k, v] : entries)
    if (k != "preset") set_key(base, k, v);
  return base;
}

}  // namespace nrmcmc::harness
