// Copyright 2026 The sideobs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// sideobs: command-line driver for the experiment harness.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sideobs/error.hpp"
#include "sideobs/harness.hpp"
#include "sideobs/io.hpp"
#include "sideobs/kernels.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sideobs;

namespace {

constexpr const char* kRegretNote =
    "regret is realized regret against the best fixed arm on the realized loss "
    "sequence; expected regret is estimated by the mean over repetitions";

struct Common {
  std::string kernels = "auto";
  std::size_t threads = 0;
  std::string out_dir = ".";
};

std::size_t thread_count(std::size_t requested) {
  if (requested > 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create output directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

template <class Writer>
void write_csv(const fs::path& path, Writer&& writer) {
  std::ostringstream out;
  writer(out);
  write_text_file(path.string(), out.str());
}

json base_meta(const std::string& command) {
  return {{"command", command},
          {"version", SIDEOBS_VERSION},
          {"kernels", std::string(kernels::active().name)}};
}

void write_meta(const fs::path& dir, const json& meta) {
  write_text_file((dir / "meta.json").string(), meta.dump(2) + "\n");
}

void collect_warnings(json& meta, const std::vector<RegretTrace>& traces) {
  json warnings = json::array();
  for (const RegretTrace& t : traces) {
    for (const std::string& w : t.warnings) {
      if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
    }
  }
  meta["warnings"] = warnings;
}

std::vector<double> default_eps_grid() {
  std::vector<double> eps;
  for (int i = 0; i <= 10; ++i) eps.push_back(i / 10.0);
  return eps;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<std::size_t> reps, const Common& common) {
  RunConfig cfg = load_config(config_path);
  if (seed) cfg.seed = *seed;
  if (reps) cfg.repetitions = *reps;
  cfg.validate();
  const fs::path dir = prepare_out(common.out_dir);

  BatchOptions options;
  options.threads = thread_count(common.threads);
  options.keep_traces = true;
  const BatchResult result = run_batch(cfg, cfg.repetitions, options);

  write_csv(dir / "trace.csv", [&](std::ostream& o) { write_trace_csv(o, result.traces.front()); });
  write_csv(dir / "aggregate.csv",
            [&](std::ostream& o) { write_aggregate_csv(o, {result.aggregate}); });

  json meta = base_meta("run");
  meta["config"] = json::parse(config_to_json(cfg));
  meta["trace_repetition"] = 0;
  meta["mean_regret"] = result.aggregate.mean;
  meta["stddev_regret"] = result.aggregate.stddev;
  meta["regret"] = kRegretNote;
  if (cfg.policy.estimator.kind == EstimatorKind::kWeighted &&
      cfg.policy.rates.mode == RateSchedule::Mode::kAdaptive) {
    json bounds = json::array();
    for (const RegretTrace& t : result.traces) {
      bounds.push_back(theoretical_bound(t, cfg.arms, cfg.policy.rates.noise_bound));
    }
    meta["theoretical_bound"] = bounds;
  }
  collect_warnings(meta, result.traces);
  write_meta(dir, meta);
  std::cout << format_double(result.aggregate.mean) << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, std::vector<double> eps,
              std::optional<std::size_t> reps, bool static_rates,
              const std::vector<double>& etas, const Common& common) {
  RunConfig cfg = load_config(config_path);
  if (reps) cfg.repetitions = *reps;
  if (eps.empty()) eps = default_eps_grid();
  const fs::path dir = prepare_out(common.out_dir);

  BatchOptions options;
  options.threads = thread_count(common.threads);
  std::vector<AggregateResult> results;
  if (static_rates) {
    // Static rates run with the implicit-exploration parameter at zero.
    for (double eta : etas) {
      RunConfig cell = cfg;
      cell.policy.rates = RateSchedule::fixed(eta, 0.0, cfg.noise.bound);
      for (AggregateResult& a : sweep_epsilon(cell, eps, cfg.repetitions, options)) {
        a.key += "/eta=" + format_double(eta);
        results.push_back(std::move(a));
      }
    }
  } else {
    results = sweep_epsilon(cfg, eps, cfg.repetitions, options);
  }
  write_csv(dir / "aggregate.csv", [&](std::ostream& o) { write_aggregate_csv(o, results); });

  json meta = base_meta("sweep-epsilon");
  meta["config"] = json::parse(config_to_json(cfg));
  meta["epsilons"] = eps;
  meta["rates"] = static_rates ? json{{"mode", "static"}, {"etas", etas}, {"gamma", 0.0}}
                               : json{{"mode", "config"}};
  meta["regret"] = kRegretNote;
  json summary = json::array();
  for (const AggregateResult& a : results) {
    summary.push_back({{"key", a.key}, {"mean", a.mean}, {"stddev", a.stddev},
                       {"repetitions", a.repetitions}});
  }
  meta["summary"] = summary;
  write_meta(dir, meta);
  return 0;
}

int cmd_random_alpha(const std::vector<std::size_t>& sizes, double lo, double hi,
                     std::size_t graphs, std::uint64_t seed, std::size_t budget,
                     const Common& common) {
  const fs::path dir = prepare_out(common.out_dir);
  AlphaExperimentOptions options;
  options.threads = thread_count(common.threads);
  options.alpha.mis.node_budget = budget;
  const auto rows = random_alpha_experiment(sizes, lo, hi, graphs, seed, options);
  write_csv(dir / "alpha_scatter.csv", [&](std::ostream& o) { write_alpha_scatter_csv(o, rows); });

  json meta = base_meta("random-alpha");
  meta["sizes"] = sizes;
  meta["lo"] = lo;
  meta["hi"] = hi;
  meta["graphs_per_size"] = graphs;
  meta["seed"] = seed;
  meta["node_budget"] = budget;
  std::size_t exceeded = 0;
  for (const auto& r : rows) exceeded += r.budget_exceeded ? 1 : 0;
  meta["budget_exceeded_rows"] = exceeded;
  write_meta(dir, meta);
  return 0;
}

int cmd_alpha_star(const std::string& graph_path, std::size_t budget, const std::string& out) {
  const ObservationGraph g = load_graph(graph_path);
  AlphaStarOptions options;
  options.mis.node_budget = budget;
  const std::string text = alpha_star_to_json(effective_independence_number(g, options)) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
  return 0;
}

int cmd_gen_losses(std::size_t arms, std::size_t horizon, std::size_t walks, double sigma,
                   const std::string& interleave, std::uint64_t seed, const std::string& out) {
  require(arms >= 1 && horizon >= 1 && walks >= 1, ErrorCode::kInvalidParameter,
          "arms, horizon and walks must be positive");
  require(sigma > 0.0, ErrorCode::kInvalidParameter, "sigma must be positive");
  Rng rng = make_rng(seed, Stream::kLosses);
  const auto rule = interleave == "fixed" ? Interleave::kFixed : Interleave::kRotate;
  const LossSequence losses = gen_random_walk_losses(arms, walks, horizon, sigma, rng, rule);
  save_losses(out, losses);
  return 0;
}

int cmd_gen_graph(const std::string& kind, std::size_t k, const std::string& rule,
                  const std::string& spacing, std::size_t n, double lo, double hi,
                  std::uint64_t seed, const std::string& out) {
  std::optional<ObservationGraph> g;
  if (kind == "grid") {
    const GridRule r = rule == "inv_one_plus_d2" ? GridRule::kInvOnePlusD2 : GridRule::kMin3OverD2;
    GridSpacing s = GridSpacing::kDefault;
    if (spacing == "unit") s = GridSpacing::kUnit;
    if (spacing == "unit_square") s = GridSpacing::kUnitSquare;
    g = gen_grid_geometric(k, r, s);
  } else if (kind == "random_uniform") {
    Rng rng = make_rng(seed, Stream::kGraph);
    g = gen_random_uniform(n, lo, hi, rng);
  } else {
    g = ObservationGraph::identity(n);
  }
  save_graph(out, *g);
  return 0;
}

void print_error(std::string_view code, std::string_view message) {
  json err{{"error", {{"code", code}, {"message", message}}}};
  std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandits with noisy weighted side observations: experiments and graph tools"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--kernels", common.kernels, "Kernel variant: auto, scalar, avx2, neon")
      ->check(CLI::IsMember({"auto", "scalar", "avx2", "neon"}));
  app.add_option("--threads", common.threads, "Worker threads (0 = all cores)");

  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::size_t> reps_override;

  auto* run = app.add_subcommand("run", "Run one configuration for its repetitions");
  run->add_option("--config", config_path, "Run config JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed_override, "Override the master seed");
  run->add_option("--reps", reps_override, "Override the repetition count");
  run->add_option("--out", common.out_dir, "Output directory");

  std::vector<double> eps_list;
  auto* sweep = app.add_subcommand("sweep-epsilon", "Exp3-IXt/IXb over thresholds, with references");
  sweep->add_option("--config", config_path, "Run config JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("--eps", eps_list, "Thresholds (default 0,0.1,...,1)")->delimiter(',');
  sweep->add_option("--reps", reps_override, "Override the repetition count");
  bool static_rates = false;
  std::vector<double> etas{0.01, 0.1};
  sweep->add_flag("--static", static_rates, "Use static rates (gamma = 0) instead of the config's");
  sweep->add_option("--etas", etas, "Static learning rates (default 0.01,0.1)")->delimiter(',');
  sweep->add_option("--out", common.out_dir, "Output directory");

  std::vector<std::size_t> sizes{5, 10, 20, 30};
  double lo = 0.0;
  double hi = 1.0;
  std::size_t graphs = 100;
  std::uint64_t seed = 0;
  std::size_t budget = MisOptions{}.node_budget;
  auto* ralpha = app.add_subcommand("random-alpha", "alpha* of random weighted graphs");
  ralpha->add_option("--sizes", sizes, "Graph sizes")->delimiter(',');
  ralpha->add_option("--lo", lo, "Lower weight bound");
  ralpha->add_option("--hi", hi, "Upper weight bound");
  ralpha->add_option("--graphs", graphs, "Graphs per size");
  ralpha->add_option("--seed", seed, "Master seed");
  ralpha->add_option("--budget", budget, "MIS search-node budget per threshold");
  ralpha->add_option("--out", common.out_dir, "Output directory");

  std::string graph_path;
  std::string out_file;
  auto* astar = app.add_subcommand("alpha-star", "alpha*, eps* and the full curve of a graph file");
  astar->add_option("--graph", graph_path, "Graph JSON")->required()->check(CLI::ExistingFile);
  astar->add_option("--budget", budget, "MIS search-node budget per threshold");
  astar->add_option("--output", out_file, "Write JSON here instead of stdout");

  std::size_t arms = 25;
  std::size_t horizon = 5000;
  std::size_t walks = 20;
  double sigma = 0.05;
  std::string interleave = "fixed";
  auto* glosses = app.add_subcommand("gen-losses", "Random-walk loss sequence as CSV");
  glosses->add_option("--arms", arms, "Number of arms");
  glosses->add_option("--horizon", horizon, "Number of rounds");
  glosses->add_option("--walks", walks, "Number of random walks");
  glosses->add_option("--sigma", sigma, "Step standard deviation");
  glosses->add_option("--interleave", interleave, "rotate or fixed")
      ->check(CLI::IsMember({"rotate", "fixed"}));
  glosses->add_option("--seed", seed, "Master seed");
  glosses->add_option("--output", out_file, "CSV path")->required();

  std::string kind = "grid";
  std::size_t k = 5;
  std::string rule = "min_3_over_d2";
  std::string spacing = "default";
  std::size_t n = 10;
  auto* ggraph = app.add_subcommand("gen-graph", "Write a generated graph as JSON");
  ggraph->add_option("--kind", kind, "grid, random_uniform or identity")
      ->check(CLI::IsMember({"grid", "random_uniform", "identity"}));
  ggraph->add_option("--k", k, "Grid side");
  ggraph->add_option("--rule", rule, "Grid weight rule")
      ->check(CLI::IsMember({"inv_one_plus_d2", "min_3_over_d2"}));
  ggraph->add_option("--spacing", spacing, "Grid spacing")
      ->check(CLI::IsMember({"default", "unit", "unit_square"}));
  ggraph->add_option("--n", n, "Node count (random_uniform, identity)");
  ggraph->add_option("--lo", lo, "Lower weight bound");
  ggraph->add_option("--hi", hi, "Upper weight bound");
  ggraph->add_option("--seed", seed, "Master seed");
  ggraph->add_option("--output", out_file, "JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    kernels::select(kernels::parse_choice(common.kernels));
    if (*run) return cmd_run(config_path, seed_override, reps_override, common);
    if (*sweep) return cmd_sweep(config_path, eps_list, reps_override, static_rates, etas, common);
    if (*ralpha) return cmd_random_alpha(sizes, lo, hi, graphs, seed, budget, common);
    if (*astar) return cmd_alpha_star(graph_path, budget, out_file);
    if (*glosses) return cmd_gen_losses(arms, horizon, walks, sigma, interleave, seed, out_file);
    if (*ggraph) return cmd_gen_graph(kind, k, rule, spacing, n, lo, hi, seed, out_file);
  } catch (const Error& e) {
    print_error(to_string(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
