#pragma once

#include <cstddef>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "nrmcmc/chain.hpp"
#include "nrmcmc/samplers.hpp"

namespace nrmcmc {

struct RwmOp {
  RwmParams params;
};
struct HmcOp {
  DynamicsParams params;
};
struct LangevinOp {
  DynamicsParams params;  // persistent Langevin; alpha = 0 is standard Langevin
};
struct GibbsOp {};

struct ScheduleNode;

struct Repeat {
  int count = 1;
  std::vector<ScheduleNode> body;
};

struct ScheduleNode {
  std::variant<RwmOp, HmcOp, LangevinOp, GibbsOp, Repeat> op;
};

/// Kernel applications making up one recorded group, and the acceptance
/// policy every Metropolis-style decision in it uses.
struct UpdateSchedule {
  AcceptancePolicy policy;
  std::vector<ScheduleNode> body;

  bool needs_momentum() const;
  std::string describe() const;
};

inline ScheduleNode repeat(int count, std::vector<ScheduleNode> body) {
  return {Repeat{count, std::move(body)}};
}

namespace detail {

inline bool any_momentum(const std::vector<ScheduleNode>& nodes) {
  for (const auto& n : nodes) {
    if (std::holds_alternative<HmcOp>(n.op) || std::holds_alternative<LangevinOp>(n.op))
      return true;
    if (auto* r = std::get_if<Repeat>(&n.op); r && any_momentum(r->body)) return true;
  }
  return false;
}

inline void describe(std::ostream& os, const std::vector<ScheduleNode>& nodes) {
  bool first = true;
  for (const auto& n : nodes) {
    if (!first) os << "; ";
    first = false;
    std::visit(
        [&](const auto& op) {
          using Op = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<Op, RwmOp>) {
            os << "rwm " << op.params.sigma;
          } else if constexpr (std::is_same_v<Op, HmcOp>) {
            os << "hmc " << op.params.steps << " " << op.params.eta;
            if (op.params.jitter_shape > 0) os << ":" << op.params.jitter_shape;
          } else if constexpr (std::is_same_v<Op, LangevinOp>) {
            os << "langevin " << op.params.alpha << " " << op.params.eta;
          } else if constexpr (std::is_same_v<Op, GibbsOp>) {
            os << "gibbs";
          } else {
            os << "repeat " << op.count << " { ";
            describe(os, op.body);
            os << " }";
          }
        },
        n.op);
  }
}

}  // namespace detail

inline bool UpdateSchedule::needs_momentum() const { return detail::any_momentum(body); }

inline std::string UpdateSchedule::describe() const {
  std::ostringstream os;
  if (policy.is_non_reversible()) os << "slice " << policy.delta << "; ";
  detail::describe(os, body);
  return os.str();
}

/// Counters for one recorded group.
struct GroupStats {
  std::size_t decisions = 0;
  std::size_t rejections = 0;
  std::size_t leapfrogs = 0;

  double rejection_fraction() const {
    return decisions == 0 ? 0.0 : static_cast<double>(rejections) / static_cast<double>(decisions);
  }
};

/// Executes schedules against one target, reusing scratch space.
template <Target T>
class ScheduleRunner {
 public:
  using UpdateObserver = std::function<void(const StepResult&)>;

  ScheduleRunner(const T& target, UpdateSchedule schedule)
      : target_{target}, schedule_{std::move(schedule)} {}

  void set_update_observer(UpdateObserver obs) { observer_ = std::move(obs); }

  /// Applies the schedule once, i.e. produces one group.
  GroupStats run_group(ChainState& s, Rng& rng) {
    GroupStats g;
    run(schedule_.body, s, rng, g);
    return g;
  }

  /// Runs `groups` groups, calling on_group(state, stats, index) after each.
  template <class OnGroup>
  void run(ChainState& s, Rng& rng, std::size_t groups, OnGroup&& on_group) {
    for (std::size_t i = 0; i < groups; ++i) {
      const GroupStats g = run_group(s, rng);
      on_group(static_cast<const ChainState&>(s), g, i);
    }
  }

  const UpdateSchedule& schedule() const { return schedule_; }

 private:
  void record(const StepResult& r, GroupStats& g) {
    ++g.decisions;
    if (r.rejected) ++g.rejections;
    g.leapfrogs += static_cast<std::size_t>(r.leapfrogs);
    if (observer_) observer_(r);
  }

  void run(const std::vector<ScheduleNode>& nodes, ChainState& s, Rng& rng, GroupStats& g) {
    for (const auto& n : nodes) {
      std::visit(
          [&](const auto& op) {
            using Op = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<Op, RwmOp>) {
              record(rwm_update(s, target_, op.params, schedule_.policy, rng, ws_), g);
            } else if constexpr (std::is_same_v<Op, HmcOp>) {
              record(hmc_update(s, target_, op.params, schedule_.policy, rng, ws_), g);
            } else if constexpr (std::is_same_v<Op, LangevinOp>) {
              record(persistent_langevin_update(s, target_, op.params, schedule_.policy, rng, ws_),
                     g);
            } else if constexpr (std::is_same_v<Op, GibbsOp>) {
              binary_gibbs_update(s, target_, rng);
            } else {
              for (int k = 0; k < op.count; ++k) run(op.body, s, rng, g);
            }
          },
          n.op);
    }
  }

  const T& target_;
  UpdateSchedule schedule_;
  Workspace ws_;
  UpdateObserver observer_;
};

/// Snapshot kept per group by `run_schedule`.
struct GroupRecord {
  std::vector<double> x;
  double potential = 0.0;
  GroupStats stats;
};

/// Runs `groups` groups and returns one record per group.
template <Target T>
std::vector<GroupRecord> run_schedule(ChainState& s, const T& target,
                                      const UpdateSchedule& schedule, Rng& rng,
                                      std::size_t groups) {
  ScheduleRunner<T> runner{target, schedule};
  std::vector<GroupRecord> out;
  out.reserve(groups);
  runner.run(s, rng, groups, [&](const ChainState& st, const GroupStats& g, std::size_t) {
    out.push_back({st.x, st.potential, g});
  });
  return out;
}

/// Leapfrog steps one pass of the schedule performs, counted statically.
inline std::size_t leapfrogs_per_group(const std::vector<ScheduleNode>& nodes) {
  std::size_t total = 0;
  for (const auto& n : nodes) {
    if (auto* h = std::get_if<HmcOp>(&n.op)) total += static_cast<std::size_t>(h->params.steps);
    else if (std::holds_alternative<LangevinOp>(n.op)) total += 1;
    else if (auto* r = std::get_if<Repeat>(&n.op))
      total += static_cast<std::size_t>(r->count) * leapfrogs_per_group(r->body);
  }
  return total;
}

}  // namespace nrmcmc
