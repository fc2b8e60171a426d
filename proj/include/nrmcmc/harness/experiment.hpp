#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "nrmcmc/chain.hpp"
#include "nrmcmc/diagnostics.hpp"
#include "nrmcmc/harness/config.hpp"
#include "nrmcmc/harness/scaling.hpp"
#include "nrmcmc/schedule.hpp"
#include "nrmcmc/targets.hpp"

namespace nrmcmc::harness {

using AnyTarget = std::variant<IidGaussian, CorrelatedPairsGaussian, MixedLogisticModel>;

/// Concrete kernel settings after applying the scaling rules.
struct ResolvedRun {
  AnyTarget target;
  UpdateSchedule schedule;
  double step = 0.0;  // sigma for rwm, eta otherwise
  double alpha = 0.0;
  int group_size = 0;
  std::size_t gradient_evals_per_group = 0;
  std::vector<ScalarSpec> scalars;
};

inline AnyTarget make_target(const ExperimentConfig& c) {
  try {
    switch (c.target) {
      case TargetKind::IidGaussian: return IidGaussian{c.dim};
      case TargetKind::CorrelatedPairs: return CorrelatedPairsGaussian{c.dim, c.rho};
      case TargetKind::Mixed: return MixedLogisticModel{};
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string{"target: "} + e.what());
  }
  throw ConfigError("target: unresolved");
}

inline std::size_t continuous_dim(const AnyTarget& t) {
  return std::visit([](const auto& x) { return x.dim_continuous(); }, t);
}

inline std::size_t discrete_dim(const AnyTarget& t) {
  return std::visit([](const auto& x) { return x.dim_discrete(); }, t);
}

inline ResolvedRun resolve(const ExperimentConfig& c) {
  ResolvedRun r{make_target(c), {}, 0.0, 0.0, 0, 0, {}};
  const std::size_t dim = continuous_dim(r.target);

  if (c.groups <= c.burnin)
    throw ConfigError("groups: " + std::to_string(c.groups) + " groups leave nothing after " +
                      std::to_string(c.burnin) + " burn-in groups");
  if (c.max_lag < 1) throw ConfigError("max_lag: must be positive");
  if (c.noise < 0.0) throw ConfigError("noise: half-width must be non-negative");
  if (!(c.step >= 0.0) || !std::isfinite(c.step)) throw ConfigError("step: must be finite and non-negative");
  if (c.gibbs_every > 0 && discrete_dim(r.target) == 0)
    throw ConfigError("gibbs_every: target " + std::string{to_string(c.target)} +
                      " has no binary coordinates");
  if (c.coord_end != 0 && (c.coord_end > dim || c.coord_begin >= c.coord_end))
    throw ConfigError("coord_end: range [" + std::to_string(c.coord_begin) + ", " +
                      std::to_string(c.coord_end) + ") invalid for dimension " + std::to_string(dim));
  if (c.coord_end == 0 && c.coord_begin >= dim) throw ConfigError("coord_begin: out of range");

  for (const auto& s : c.scalars) {
    auto spec = parse_scalar(s);
    if (spec.kind != ScalarSpec::Kind::Energy && spec.index >= dim)
      throw ConfigError("scalars: '" + s + "' refers past dimension " + std::to_string(dim));
    r.scalars.push_back(spec);
  }
  if (r.scalars.empty()) throw ConfigError("scalars: need at least one scalar");

  r.schedule.policy = c.policy == PolicyMode::NonReversible
                          ? AcceptancePolicy::non_reversible(c.delta, c.noise)
                          : AcceptancePolicy::standard();

  DynamicsParams dyn;
  dyn.coords = {c.coord_begin, c.coord_end == 0 ? CoordRange::kAll : c.coord_end};
  dyn.jitter_shape = c.jitter;
  if (c.jitter < 0.0) throw ConfigError("jitter: must be non-negative");

  ScheduleNode kernel;
  int group = c.group_size;
  switch (c.kernel) {
    case KernelKind::Rwm: {
      r.step = c.scaling == Scaling::Rwm ? scale_rwm(c.step, dim) : c.step;
      kernel = {RwmOp{{r.step}}};
      if (group == 0) group = static_cast<int>(dim);
      break;
    }
    case KernelKind::Hmc: {
      if (c.leapfrogs < 1) throw ConfigError("leapfrogs: must be at least 1");
      r.step = c.scaling == Scaling::Langevin ? c.step / std::pow(static_cast<double>(dim), 1.0 / 6.0)
                                              : c.step;
      dyn.eta = r.step;
      dyn.steps = c.leapfrogs;
      kernel = {HmcOp{dyn}};
      if (c.leapfrog_budget > 0) {
        if (c.leapfrog_budget % c.leapfrogs != 0)
          throw ConfigError("leapfrog_budget: " + std::to_string(c.leapfrog_budget) +
                            " is not a multiple of " + std::to_string(c.leapfrogs) + " leapfrogs");
        group = c.leapfrog_budget / c.leapfrogs;
      }
      if (group == 0) group = 1;
      break;
    }
    case KernelKind::PersistentLangevin:
    case KernelKind::Langevin: {
      const bool plain = c.kernel == KernelKind::Langevin;
      if (c.scaling == Scaling::Langevin) {
        LangevinScale s{};
        try {
          s = scale_langevin(c.step, plain ? 0.5 : c.alpha_base, dim);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string{"alpha_base: "} + e.what());
        }
        r.step = s.eta;
        r.alpha = plain ? 0.0 : s.alpha;
        if (group == 0) group = s.group_size;
      } else {
        r.step = c.step;
        r.alpha = plain ? 0.0 : c.alpha;
      }
      if (!(r.alpha >= 0.0 && r.alpha <= 1.0)) throw ConfigError("alpha: must lie in [0, 1]");
      if (group == 0) throw ConfigError("group_size: required unless scaling = langevin");
      dyn.eta = r.step;
      dyn.alpha = r.alpha;
      dyn.steps = 1;
      kernel = {LangevinOp{dyn}};
      break;
    }
  }
  if (group < 1) throw ConfigError("group_size: must be positive");
  r.group_size = group;

  if (c.gibbs_every > 0) {
    if (group % c.gibbs_every != 0)
      throw ConfigError("gibbs_every: " + std::to_string(c.gibbs_every) +
                        " does not divide the group size " + std::to_string(group));
    r.schedule.body = {repeat(group / c.gibbs_every, {repeat(c.gibbs_every, {kernel}), {GibbsOp{}}})};
  } else {
    r.schedule.body = {repeat(group, {kernel})};
  }
  r.gradient_evals_per_group = leapfrogs_per_group(r.schedule.body);
  return r;
}

/// Post-burn-in series recorded from one chain.
struct ChainOutput {
  ResolvedRun run;
  std::vector<ScalarSeries> series;
  std::vector<double> rejection_fractions;
};

namespace detail {

template <Target T>
ChainState initial_state(const T& t, const UpdateSchedule& s, Rng& rng) {
  const std::vector<double> x0(t.dim_continuous(), 0.0);
  const std::vector<std::uint8_t> w0(t.dim_discrete(), 0);
  return init_state(t, x0, w0, s.needs_momentum(), rng);
}

}  // namespace detail

inline ChainOutput run_chain(const ExperimentConfig& c) {
  ChainOutput out{resolve(c), {}, {}};
  const std::size_t kept = c.groups - c.burnin;
  for (const auto& spec : out.run.scalars) {
    out.series.push_back({spec.label(), {}});
    out.series.back().values.reserve(kept);
  }
  out.rejection_fractions.reserve(kept);
  std::visit(
      [&](const auto& target) {
        using T = std::decay_t<decltype(target)>;
        Rng rng{c.seed};
        ChainState s = detail::initial_state(target, out.run.schedule, rng);
        ScheduleRunner<T> runner{target, out.run.schedule};
        runner.run(s, rng, c.groups, [&](const ChainState& st, const GroupStats& g, std::size_t i) {
          if (i < c.burnin) return;
          for (std::size_t k = 0; k < out.run.scalars.size(); ++k)
            out.series[k].values.push_back(derive_scalar(st.x, st.potential, out.run.scalars[k]));
          out.rejection_fractions.push_back(g.rejection_fraction());
        });
      },
      out.run.target);
  return out;
}

/// Exact mean of a scalar, when the target provides one.
inline std::optional<double> known_mean(const AnyTarget& t, const ScalarSpec& spec) {
  const KnownMeans m = std::visit([](const auto& x) { return x.known_means(); }, t);
  switch (spec.kind) {
    case ScalarSpec::Kind::Energy: return m.energy;
    case ScalarSpec::Kind::Coordinate: return m.coordinate;
    case ScalarSpec::Kind::Indicator:
      if (m.indicator && m.indicator->index == spec.index && m.indicator->lo == spec.lo &&
          m.indicator->hi == spec.hi)
        return m.indicator->mean;
      return std::nullopt;
  }
  return std::nullopt;
}

/// One output line: a scalar summarised by one estimator.
struct ResultRow {
  std::string preset;
  std::string kernel;
  std::string policy;
  double delta = 0.0;
  double noise = 0.0;
  double step = 0.0;
  double alpha = 0.0;
  int leapfrogs = 0;
  std::uint64_t seed = 0;
  std::size_t groups = 0;
  std::size_t burnin = 0;
  int updates_per_group = 0;
  std::size_t gradient_evals_per_group = 0;
  std::string scalar;
  std::string estimator;  // "known" or "sample" mean
  int max_lag = 0;
  double rejection_rate = std::nan("");
  double tau = std::nan("");
  double tau_stderr = std::nan("");
  std::string cell;
  std::string status = "ok";
};

inline std::vector<ResultRow> summarize(const ExperimentConfig& c, const ChainOutput& out) {
  std::vector<ResultRow> rows;
  ResultRow base;
  base.preset = c.preset.empty() ? "custom" : c.preset;
  base.kernel = std::string{to_string(c.kernel)};
  base.policy = std::string{to_string(c.policy)};
  base.delta = c.policy == PolicyMode::NonReversible ? c.delta : 0.0;
  base.noise = c.policy == PolicyMode::NonReversible ? c.noise : 0.0;
  base.step = out.run.step;
  base.alpha = out.run.alpha;
  base.leapfrogs = c.kernel == KernelKind::Hmc ? c.leapfrogs : (c.kernel == KernelKind::Rwm ? 0 : 1);
  base.seed = c.seed;
  base.groups = c.groups;
  base.burnin = c.burnin;
  base.updates_per_group = out.run.group_size;
  base.gradient_evals_per_group = out.run.gradient_evals_per_group;
  base.max_lag = c.max_lag;
  base.rejection_rate = rejection_rate(out.rejection_fractions);

  for (std::size_t k = 0; k < out.series.size(); ++k) {
    const auto& s = out.series[k];
    std::optional<double> mean;
    if (c.use_known_means) mean = known_mean(out.run.target, out.run.scalars[k]);
    ResultRow row = base;
    row.scalar = s.name;
    row.estimator = mean ? "known" : "sample";
    try {
      row.tau = act(s, c.max_lag, mean).tau;
      row.tau_stderr = act_batch_stderr(s.values, c.max_lag, mean);
    } catch (const std::invalid_argument& e) {
      row.status = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Runs the configured chain and summarises every requested scalar, about its
/// known mean when the target has one and otherwise about the sample mean.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& c) {
  return summarize(c, run_chain(c));
}

/// Picks the row for a scalar.
inline const ResultRow& find_row(const std::vector<ResultRow>& rows, const std::string& scalar) {
  for (const auto& r : rows)
    if (r.scalar == scalar) return r;
  throw std::out_of_range("no row for scalar " + scalar);
}

enum class CostField { GradientEvals, Updates };

/// (tau_a cost_a) / (tau_b cost_b): how many times more efficient b is.
inline double efficiency_ratio(const ResultRow& a, const ResultRow& b,
                               CostField cost = CostField::GradientEvals) {
  auto cost_of = [&](const ResultRow& r) {
    return cost == CostField::GradientEvals ? static_cast<double>(r.gradient_evals_per_group)
                                            : static_cast<double>(r.updates_per_group);
  };
  const double ca = cost_of(a), cb = cost_of(b);
  if (!(a.tau > 0.0) || !(b.tau > 0.0)) throw std::invalid_argument("efficiency ratio: tau must be positive");
  if (!(ca > 0.0) || !(cb > 0.0)) throw std::invalid_argument("efficiency ratio: cost must be positive");
  return (a.tau * ca) / (b.tau * cb);
}

// ---- CSV ------------------------------------------------------------------

inline constexpr const char* kResultHeader =
    "preset,kernel,policy,delta,noise,step,alpha,L,seed,groups,burnin,updates_per_group,"
    "gradient_evals_per_group,scalar,estimator,max_lag,rejection_rate,tau,tau_stderr,cell,status";

inline std::string format_real(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", d);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

inline void write_row(std::ostream& os, const ResultRow& r) {
  os << csv_field(r.preset) << ',' << r.kernel << ',' << r.policy << ',' << format_real(r.delta)
     << ',' << format_real(r.noise) << ',' << format_real(r.step) << ',' << format_real(r.alpha)
     << ',' << r.leapfrogs << ',' << r.seed << ',' << r.groups << ',' << r.burnin << ','
     << r.updates_per_group << ',' << r.gradient_evals_per_group << ',' << csv_field(r.scalar)
     << ',' << r.estimator << ',' << r.max_lag << ',' << format_real(r.rejection_rate) << ','
     << format_real(r.tau) << ',' << format_real(r.tau_stderr) << ',' << csv_field(r.cell) << ','
     << csv_field(r.status) << '\n';
}

inline void write_results(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << kResultHeader << '\n';
  for (const auto& r : rows) write_row(os, r);
}

// ---- per-update trace -----------------------------------------------------

struct TraceRow {
  double u = 0.0;
  bool rejected = false;
};

/// Runs burn-in, then records u and the outcome of n consecutive decisions.
inline std::vector<TraceRow> trace_dump(const ExperimentConfig& c, std::size_t n_updates) {
  ResolvedRun run = resolve(c);
  std::vector<TraceRow> rows;
  rows.reserve(n_updates);
  std::visit(
      [&](const auto& target) {
        using T = std::decay_t<decltype(target)>;
        Rng rng{c.seed};
        ChainState s = detail::initial_state(target, run.schedule, rng);
        ScheduleRunner<T> runner{target, run.schedule};
        for (std::size_t g = 0; g < c.burnin; ++g) runner.run_group(s, rng);
        if (n_updates == 0) return;
        bool recording = true;
        runner.set_update_observer([&](const StepResult& r) {
          if (recording && rows.size() < n_updates) rows.push_back({r.u, r.rejected});
        });
        while (rows.size() < n_updates) runner.run_group(s, rng);
        recording = false;
      },
      run.target);
  return rows;
}

inline void write_trace(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << "update,u,rejected\n";
  for (std::size_t i = 0; i < rows.size(); ++i)
    os << i << ',' << format_real(rows[i].u) << ',' << (rows[i].rejected ? 1 : 0) << '\n';
}

}  // namespace nrmcmc::harness
