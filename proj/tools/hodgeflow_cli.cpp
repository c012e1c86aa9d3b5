// Copyright 2026 The hodgeflow Authors
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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hodgeflow/datagen.hpp"
#include "hodgeflow/error.hpp"
#include "hodgeflow/experiments.hpp"
#include "hodgeflow/hodge.hpp"
#include "hodgeflow/io.hpp"
#include "hodgeflow/metrics.hpp"
#include "hodgeflow/random.hpp"

namespace fs = std::filesystem;
using hodgeflow::Json;

namespace {

struct ConfigArgs {
  std::string config_file;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
  cmd->add_option("-c,--config", args.config_file, "JSON config file");
  cmd->add_option("--set", args.overrides, "override a config key: key=value (repeatable)");
  cmd->add_option("-o,--out", args.out_dir, "output directory");
}

Json load_config(const Json& defaults, const ConfigArgs& args) {
  Json user = Json::object();
  if (!args.config_file.empty()) {
    std::ifstream in(args.config_file);
    if (!in) hodgeflow::fail(hodgeflow::ErrorCode::kIo, "cannot open config " + args.config_file);
    try {
      user = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      hodgeflow::fail(hodgeflow::ErrorCode::kConfig, args.config_file + ": " + e.what());
    }
  }
  for (const auto& o : args.overrides) hodgeflow::apply_override(user, o);
  return hodgeflow::resolve_config(defaults, user);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) hodgeflow::fail(hodgeflow::ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const Json& j) { open_out(path) << j.dump(2) << '\n'; }

Json datagen_defaults() {
  return Json{
      {"generator", "localization"},  // localization | cyclic | gradient
      {"seed", 0},
      {"k", 5},
      {"nodes_per", 20},
      {"p", 0.8},
      {"q", 0.2},
      {"n", 100},
      {"t_min", 1},
      {"t_max", 20},
      {"noise_relative", 0.01},
      {"noise_absolute", 0.0},
      {"cyclic_noise", 0.1},
      {"gradient_noise", 0.01},
      {"smooth_order", 10},
      {"potential_std", 1.0},
      {"unobserved_fraction", 0.0},
  };
}

void run_datagen(const Json& cfg, const fs::path& out) {
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const auto pg = hodgeflow::planted_partition(cfg.at("k").get<int>(), cfg.at("nodes_per").get<int>(),
                                               cfg.at("p").get<double>(), cfg.at("q").get<double>(),
                                               hodgeflow::derive_seed(seed, 100));
  const auto generator = cfg.at("generator").get<std::string>();
  const int n = cfg.at("n").get<int>();
  hodgeflow::Dataset ds;
  if (generator == "localization") {
    ds = hodgeflow::localization_dataset(
        pg, n, cfg.at("t_min").get<int>(), cfg.at("t_max").get<int>(),
        {cfg.at("noise_relative").get<double>(), cfg.at("noise_absolute").get<double>()},
        hodgeflow::derive_seed(seed, 101));
  } else if (generator == "cyclic") {
    const auto base = hodgeflow::random_cyclic_flow(pg.graph, hodgeflow::derive_seed(seed, 101));
    const double rms = base.norm() / std::sqrt(static_cast<double>(pg.graph.num_edges()));
    ds = hodgeflow::noisy_flow_family(base, pg.graph, n, cfg.at("cyclic_noise").get<double>() * rms,
                                      cfg.at("gradient_noise").get<double>() * rms,
                                      cfg.at("smooth_order").get<int>(), hodgeflow::derive_seed(seed, 102));
  } else if (generator == "gradient") {
    ds = hodgeflow::gradient_flow_family(pg.graph, n, cfg.at("potential_std").get<double>(),
                                         cfg.at("smooth_order").get<int>(), hodgeflow::derive_seed(seed, 102));
  } else {
    hodgeflow::fail(hodgeflow::ErrorCode::kConfig, "generator must be localization, cyclic or gradient");
  }
  const double fraction = cfg.at("unobserved_fraction").get<double>();
  if (fraction > 0.0) {
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
      auto& r = ds.records[i];
      auto masked = hodgeflow::mask_flow(r.flow, fraction, hodgeflow::derive_seed(seed, 200 + i));
      r.mask = masked.mask;
    }
  }
  ds.config = cfg;
  ds.seed = seed;
  ds.graph_file = "graph.txt";
  hodgeflow::write_graph(out / "graph.txt", pg.graph);
  {
    auto f = open_out(out / "communities.txt");
    for (int c : pg.community_of) f << c << '\n';
  }
  hodgeflow::save_dataset(ds, out / "dataset.json");
  std::cout << "wrote " << ds.records.size() << " records on " << pg.graph.num_nodes() << " nodes / "
            << pg.graph.num_edges() << " edges to " << out.string() << '\n';
}

std::vector<int> read_ints(const fs::path& path) {
  std::ifstream in(path);
  if (!in) hodgeflow::fail(hodgeflow::ErrorCode::kIo, "cannot open " + path.string());
  std::vector<int> out;
  int v = 0;
  while (in >> v) out.push_back(v);
  if (!in.eof()) hodgeflow::fail(hodgeflow::ErrorCode::kIo, "malformed integer list in " + path.string());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hodge-Laplacian signal processing and neural networks for edge flows"};
  app.require_subcommand(1);

  ConfigArgs datagen_args;
  auto* datagen = app.add_subcommand("datagen", "generate a synthetic graph and flow dataset");
  add_config_options(datagen, datagen_args);

  std::string graph_file, flow_file, out_dir = ".";
  auto* decompose = app.add_subcommand("decompose", "split a flow into cyclic and gradient parts");
  decompose->add_option("--graph", graph_file, "graph file")->required();
  decompose->add_option("--flow", flow_file, "flow file")->required();
  decompose->add_option("-o,--out", out_dir, "output directory");

  ConfigArgs interp_args;
  auto* interp = app.add_subcommand("interpolate", "run the flow interpolation comparison");
  add_config_options(interp, interp_args);

  ConfigArgs loc_args;
  auto* localize = app.add_subcommand("localize", "run the source localization comparison");
  add_config_options(localize, loc_args);

  std::string metric, truth_file, pred_file, eval_file;
  auto* eval = app.add_subcommand("eval", "score predictions");
  eval->add_option("--metric", metric, "psnr | accuracy")->required()->check(CLI::IsMember({"psnr", "accuracy"}));
  eval->add_option("--truth", truth_file, "true flow (psnr) or label list (accuracy)")->required();
  eval->add_option("--pred", pred_file, "predicted flow or label list")->required();
  eval->add_option("--eval-set", eval_file, "edge ids to score, one per line (psnr; default all)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*datagen) {
      const Json cfg = load_config(datagen_defaults(), datagen_args);
      const fs::path out(datagen_args.out_dir);
      fs::create_directories(out);
      write_json(out / "resolved_config.json", cfg);
      run_datagen(cfg, out);
    } else if (*decompose) {
      const auto g = hodgeflow::read_graph(fs::path(graph_file));
      const auto f = hodgeflow::read_flow(fs::path(flow_file));
      const auto parts = hodgeflow::hodge_decompose(f, g);
      const fs::path out(out_dir);
      fs::create_directories(out);
      hodgeflow::write_flow(out / "cyclic.txt", parts.cyclic);
      hodgeflow::write_flow(out / "gradient.txt", parts.gradient);
      std::cout << "energy total=" << hodgeflow::format_double(f.squaredNorm())
                << " cyclic=" << hodgeflow::format_double(parts.cyclic.squaredNorm())
                << " gradient=" << hodgeflow::format_double(parts.gradient.squaredNorm()) << '\n';
    } else if (*interp) {
      const Json cfg = load_config(hodgeflow::default_interpolation_config(), interp_args);
      const fs::path out(interp_args.out_dir);
      fs::create_directories(out);
      write_json(out / "resolved_config.json", cfg);
      const auto report = hodgeflow::run_interpolation_experiment(cfg);
      auto csv = open_out(out / "results.csv");
      hodgeflow::write_results_csv(csv, report.rows);
      write_json(out / "summary.json", report.summary);
      std::cout << report.summary.dump(2) << '\n';
    } else if (*localize) {
      const Json cfg = load_config(hodgeflow::default_localization_config(), loc_args);
      const fs::path out(loc_args.out_dir);
      fs::create_directories(out);
      write_json(out / "resolved_config.json", cfg);
      const auto report = hodgeflow::run_localization_experiment(cfg);
      auto csv = open_out(out / "results.csv");
      hodgeflow::write_results_csv(csv, report.rows);
      auto curves = open_out(out / "curves.csv");
      hodgeflow::write_curves_csv(curves, report.curves);
      write_json(out / "summary.json", report.summary);
      std::cout << report.summary.dump(2) << '\n';
    } else if (*eval) {
      double value = 0.0;
      if (metric == "psnr") {
        const auto t = hodgeflow::read_flow(fs::path(truth_file));
        const auto p = hodgeflow::read_flow(fs::path(pred_file));
        std::vector<int> set;
        if (eval_file.empty()) {
          for (int e = 0; e < t.size(); ++e) set.push_back(e);
        } else {
          set = read_ints(eval_file);
        }
        value = hodgeflow::psnr(t, p, set);
      } else {
        value = hodgeflow::accuracy(read_ints(truth_file), read_ints(pred_file));
      }
      std::cout << metric << ' ' << hodgeflow::format_double(value) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
