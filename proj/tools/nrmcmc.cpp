// Command-line driver: run, sweep and trace the benchmark presets.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nrmcmc/nrmcmc.hpp"

namespace {

using namespace nrmcmc::harness;

constexpr int kConfigFailure = 1;
constexpr int kRuntimeFailure = 2;

struct CommonOptions {
  std::string preset;
  std::string config_file;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> groups;
  std::optional<std::size_t> burnin;
  std::optional<std::string> policy;
  std::optional<std::string> delta, noise, step, alpha_base, alpha, leapfrogs, jitter, scalars;
  std::string out;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("-p,--preset", o.preset, "built-in preset to start from");
  app->add_option("-c,--config", o.config_file, "key = value configuration file");
  app->add_option("--set", o.sets, "override a configuration key (key=value)");
  app->add_option("--seed", o.seed, "random seed");
  app->add_option("--groups", o.groups, "recorded groups, including burn-in");
  app->add_option("--burnin", o.burnin, "groups discarded before summarising");
  app->add_option("--policy", o.policy, "standard | nonreversible");
  app->add_option("--delta", o.delta, "slice translation per decision");
  app->add_option("--noise", o.noise, "half-width of uniform noise added to the translation");
  app->add_option("--step", o.step, "raw stepsize before scaling");
  app->add_option("--alpha-base", o.alpha_base, "persistence base, raised to the power eta");
  app->add_option("--alpha", o.alpha, "persistence used directly");
  app->add_option("-L,--leapfrogs", o.leapfrogs, "leapfrog steps per HMC trajectory");
  app->add_option("--jitter", o.jitter, "stepsize jitter shape k (Gamma(k/2)); 0 disables");
  app->add_option("--scalars", o.scalars, "comma-separated scalars to summarise");
  app->add_option("-o,--out", o.out, "output path (stdout when omitted)");
}

std::string slurp(const std::string& path) {
  std::ifstream in{path};
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig build_config(const CommonOptions& o) {
  ExperimentConfig c;
  if (!o.preset.empty()) c = preset(o.preset);
  if (!o.config_file.empty()) c = parse_config(slurp(o.config_file), c);
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set: expected key=value, got '" + kv + "'");
    set_key(c, detail::trim(std::string_view{kv}.substr(0, eq)), kv.substr(eq + 1));
  }
  auto apply = [&](const char* key, const std::optional<std::string>& v) {
    if (v) set_key(c, key, *v);
  };
  apply("policy", o.policy);
  apply("delta", o.delta);
  apply("noise", o.noise);
  apply("step", o.step);
  apply("alpha_base", o.alpha_base);
  apply("alpha", o.alpha);
  apply("leapfrogs", o.leapfrogs);
  apply("jitter", o.jitter);
  apply("scalars", o.scalars);
  if (o.seed) c.seed = *o.seed;
  if (o.groups) c.groups = *o.groups;
  if (o.burnin) c.burnin = *o.burnin;
  return c;
}

template <class Write>
void emit(const std::string& path, Write&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out{path, std::ios::binary};
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmarks for non-reversible updates of the Metropolis acceptance variable"};
  app.require_subcommand(1);

  CommonOptions run_opts, sweep_opts, trace_opts;

  auto* run = app.add_subcommand("run", "run one experiment and print its summary rows");
  add_common(run, run_opts);

  auto* sweep = app.add_subcommand("sweep", "run a parameter grid");
  add_common(sweep, sweep_opts);
  std::vector<std::string> axes;
  int replicates = 1;
  unsigned jobs = 1;
  std::size_t cap = 10000;
  sweep->add_option("-g,--grid", axes, "grid axis key=v1,v2,... (preset default when omitted)");
  sweep->add_option("--replicates", replicates, "chains per cell (seeds seed, seed+1, ...)");
  sweep->add_option("-j,--jobs", jobs, "worker threads");
  sweep->add_option("--cap", cap, "maximum number of cells");

  auto* trace = app.add_subcommand("trace", "dump u and the rejection flag per update");
  add_common(trace, trace_opts);
  std::size_t n_updates = 500;
  trace->add_option("-n,--updates", n_updates, "number of consecutive updates");

  auto* presets = app.add_subcommand("presets", "list built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigFailure;
  }

  try {
    if (*presets) {
      for (const auto& p : preset_list()) std::cout << p.name << "\t" << p.description << "\n";
    } else if (*run) {
      const auto rows = run_experiment(build_config(run_opts));
      emit(run_opts.out, [&](std::ostream& os) { write_results(os, rows); });
    } else if (*sweep) {
      const auto base = build_config(sweep_opts);
      SweepGrid grid;
      if (axes.empty()) {
        if (base.preset.empty()) throw ConfigError("grid: no axes given and no preset default");
        grid = default_grid(base.preset);
      }
      for (const auto& a : axes) grid.axes.push_back(parse_axis(a));
      grid.replicates = replicates;
      grid.cap = cap;
      const auto rows = run_sweep(grid, base, jobs);
      emit(sweep_opts.out, [&](std::ostream& os) { write_results(os, rows); });
    } else if (*trace) {
      const auto rows = trace_dump(build_config(trace_opts), n_updates);
      emit(trace_opts.out, [&](std::ostream& os) { write_trace(os, rows); });
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return 0;
}
