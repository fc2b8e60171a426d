#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nrmcmc/harness/config.hpp"
#include "nrmcmc/harness/experiment.hpp"

namespace nrmcmc::harness {

/// Values per config key; cells are the Cartesian product, each replicated.
struct SweepGrid {
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  int replicates = 1;
  std::size_t cap = 10000;

  std::size_t cell_count() const {
    std::size_t n = static_cast<std::size_t>(std::max(replicates, 0));
    for (const auto& [k, vals] : axes) n *= vals.size();
    return n;
  }
};

/// Parses "key=v1,v2,...".
inline std::pair<std::string, std::vector<std::string>> parse_axis(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("grid: expected key=v1,v2,... got '" + s + "'");
  auto key = detail::trim(std::string_view{s}.substr(0, eq));
  auto vals = detail::split(s.substr(eq + 1), ',');
  if (vals.empty()) throw ConfigError("grid: axis '" + key + "' has no values");
  return {std::move(key), std::move(vals)};
}

/// Default grid for a preset.
inline SweepGrid default_grid(const std::string& preset_name) {
  SweepGrid g;
  if (preset_name == "fig1") {
    g.axes = {{"step", {"1.2", "1.4", "1.6", "1.8", "2.0", "2.2", "2.4"}},
              {"policy", {"standard", "nonreversible"}},
              {"delta", {"0.1", "0.2", "0.3", "0.4"}}};
  } else if (preset_name == "fig2") {
    g.axes = {{"step", {"0.06", "0.07", "0.08", "0.09", "0.10", "0.11", "0.12", "0.13"}},
              {"alpha_base", {"0.3", "0.4", "0.5", "0.6", "0.7"}},
              {"policy", {"standard", "nonreversible"}}};
  } else if (preset_name == "fig2-hmc") {
    g.axes = {{"step", {"0.04", "0.05", "0.06", "0.07", "0.08", "0.09", "0.10", "0.11", "0.12",
                        "0.13", "0.14", "0.15"}},
              {"leapfrogs", {"1", "2", "4", "8", "16", "32"}}};
  } else if (preset_name == "mixed-plang") {
    g.axes = {{"delta", {"0.003", "0.005", "0.010", "0.015"}},
              {"alpha", {"0.98", "0.99", "0.995", "0.9975", "0.9985", "0.9990"}},
              {"step", {"0.015", "0.020", "0.025", "0.030", "0.040", "0.050"}}};
  } else if (preset_name == "mixed-hmc") {
    g.axes = {{"leapfrogs", {"30", "40", "60"}},
              {"step", {"0.025", "0.030", "0.035", "0.040", "0.045"}}};
  } else if (preset_name == "langevin-footnote") {
    g.axes = {{"step", {"1.2", "1.3", "1.4", "1.5", "1.6", "1.7"}},
              {"policy", {"standard", "nonreversible"}}};
  } else {
    throw ConfigError("preset: no default grid for '" + preset_name + "'");
  }
  return g;
}

/// Runs every cell of the grid on top of `base`. Rows come back in cell
/// order whatever the number of worker threads; a failing cell yields one
/// row whose status carries the error.
inline std::vector<ResultRow> run_sweep(const SweepGrid& grid, const ExperimentConfig& base,
                                        unsigned jobs = 1) {
  if (grid.replicates < 1) throw ConfigError("replicates: must be at least 1");
  for (const auto& [k, vals] : grid.axes)
    if (vals.empty()) throw ConfigError("grid: axis '" + k + "' has no values");
  const std::size_t cells = grid.cell_count();
  if (cells > grid.cap)
    throw ConfigError("grid: " + std::to_string(cells) + " cells exceed the cap of " +
                      std::to_string(grid.cap));

  std::vector<std::vector<ResultRow>> results(cells);

  auto run_cell = [&](std::size_t index) {
    std::size_t rem = index;
    const int rep = static_cast<int>(rem % static_cast<std::size_t>(grid.replicates));
    rem /= static_cast<std::size_t>(grid.replicates);
    std::vector<std::pair<std::string, std::string>> coords(grid.axes.size());
    for (std::size_t a = grid.axes.size(); a-- > 0;) {
      const auto& vals = grid.axes[a].second;
      coords[a] = {grid.axes[a].first, vals[rem % vals.size()]};
      rem /= vals.size();
    }
    std::string tag;
    for (const auto& [k, v] : coords) tag += k + "=" + v + ";";
    tag += "rep=" + std::to_string(rep);

    ExperimentConfig c = base;
    try {
      for (const auto& [k, v] : coords) {
        if (k == "preset") throw ConfigError("grid: preset cannot be a sweep axis");
        set_key(c, k, v);
      }
      c.seed = base.seed + static_cast<std::uint64_t>(rep);
      auto rows = run_experiment(c);
      for (auto& r : rows) r.cell = tag;
      results[index] = std::move(rows);
    } catch (const std::exception& e) {
      ResultRow r;
      r.preset = c.preset.empty() ? "custom" : c.preset;
      r.kernel = std::string{to_string(c.kernel)};
      r.policy = std::string{to_string(c.policy)};
      r.seed = c.seed;
      r.cell = tag;
      r.status = std::string{"error: "} + e.what();
      results[index] = {std::move(r)};
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cells)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < cells; ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells; i = next++) run_cell(i);
      });
  }

  std::vector<ResultRow> rows;
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(rows));
  return rows;
}

}  // namespace nrmcmc::harness
