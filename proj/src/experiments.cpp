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

#include "hodgeflow/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <thread>

#include "hodgeflow/agnn.hpp"
#include "hodgeflow/baselines.hpp"
#include "hodgeflow/datagen.hpp"
#include "hodgeflow/error.hpp"
#include "hodgeflow/io.hpp"
#include "hodgeflow/metrics.hpp"
#include "hodgeflow/random.hpp"
#include "hodgeflow/rnn.hpp"

namespace hodgeflow {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

bool same_kind(const Json& a, const Json& b) {
  if (a.is_number() && b.is_number()) {
    // Integers may stand in for floats, not the other way round.
    return !(a.is_number_float() && b.is_number_integer());
  }
  return a.type() == b.type();
}

void merge_into(Json& target, const Json& patch, const std::string& path) {
  if (!patch.is_object()) fail(ErrorCode::kConfig, "config" + path + " must be an object");
  for (const auto& [key, value] : patch.items()) {
    const std::string here = path + "." + key;
    if (!target.contains(key)) fail(ErrorCode::kConfig, "unknown config key '" + here.substr(1) + "'");
    Json& slot = target[key];
    if (slot.is_object()) {
      merge_into(slot, value, here);
    } else {
      if (!same_kind(value, slot)) {
        fail(ErrorCode::kConfig, "config key '" + here.substr(1) + "' expects " +
                                     std::string(slot.type_name()) + ", got " + value.type_name());
      }
      slot = value;
    }
  }
}

template <typename T>
T get(const Json& cfg, const char* key) {
  try {
    return cfg.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kConfig, std::string("config key '") + key + "': " + e.what());
  }
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Runs job(i) for i in [0, n) on up to `threads` workers. Each job writes only
// its own output slot.
void fan_out(int n, int threads, const std::function<void(int)>& job) {
  threads = std::clamp(threads, 1, std::max(1, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) job(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += threads) {
        try {
          job(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

Json number_or_inf(double x) { return std::isfinite(x) ? Json(x) : Json(format_double(x)); }

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << csv_field(r.method) << ',' << csv_field(r.shift) << ',' << csv_field(r.dataset) << ','
        << r.seed << ',' << r.metric << ',' << format_double(r.value) << ','
        << format_double(r.wall_time_s) << '\n';
  }
}

void write_curves_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << kCurvesHeader << '\n';
  for (const auto& r : rows) {
    out << r.shift << ',' << r.seed << ',' << r.epoch << ',' << format_double(r.train_loss) << ','
        << format_double(r.test_accuracy) << '\n';
  }
}

Json resolve_config(const Json& defaults, const Json& overrides) {
  Json out = defaults;
  merge_into(out, overrides, "");
  return out;
}

void apply_override(Json& overrides, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    fail(ErrorCode::kConfig, "override '" + assignment + "' is not key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const nlohmann::json::exception&) {
    value = text;
  }
  Json* slot = &overrides;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (dot == std::string::npos) {
      (*slot)[part] = value;
      break;
    }
    slot = &(*slot)[part];
    start = dot + 1;
  }
}

std::string config_hash(const Json& resolved) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : resolved.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

Json default_interpolation_config() {
  return Json{
      {"seeds", {0, 1, 2, 3, 4}},
      {"family", "cyclic"},
      {"graph_source", "planted_partition"},
      {"graph_file", ""},
      {"flow_file", ""},
      {"k", 5},
      {"nodes_per", 20},
      {"p", 0.3},
      {"q", 0.02},
      {"methods", {"hodge-rnn", "linegraph-rnn", "convopt", "kriging"}},
      {"train_sizes", {10, 100, 500}},
      {"unobserved_fraction", 0.1},
      {"n_test", 10},
      {"cyclic_noise", 0.1},
      {"gradient_noise", 0.01},
      {"smooth_order", 10},
      {"potential_std", 1.0},
      {"rnn",
       {{"f_dim", 16},
        {"k_steps", 8},
        {"epochs", 20},
        {"steps_per_epoch", 100},
        {"lr", 1e-3},
        {"mask_fraction", 0.1},
        {"validation_masks", 8}}},
      {"convopt", {{"ridge", 1e-6}}},
      {"kriging", {{"embed_dim", 2}, {"noise_floor", 1e-6}}},
      {"threads", 1},
      {"record_wall_time", false},
  };
}

Json default_localization_config() {
  return Json{
      {"seeds", {0, 1, 2, 3, 4}},
      {"k", 5},
      {"nodes_per", 20},
      {"p", 0.8},
      {"q", 0.2},
      {"n_train", 2000},
      {"n_test", 500},
      {"t_min", 1},
      {"t_max", 20},
      {"noise_relative", 0.01},
      {"noise_absolute", 0.0},
      {"shifts", {"hodge", "linegraph", "node"}},
      {"k_sel", 5},
      {"agg_depth", kDefaultAggDepth},
      {"conv", Json::array({Json{{"out_channels", 32}, {"kernel", 8}, {"stride", 4}, {"pool", 0}},
                            Json{{"out_channels", 64}, {"kernel", 8}, {"stride", 4}, {"pool", 0}}})},
      {"epochs", 30},
      {"batch_size", 32},
      {"lr", 1e-3},
      {"threads", 1},
      {"record_wall_time", false},
  };
}

namespace {

struct InterpolationSetup {
  Graph graph;
  std::vector<FlowSignal> test_truth;
  std::vector<MaskedFlow> test_masked;
  std::vector<FlowSignal> train_pool;
};

InterpolationSetup build_interpolation_setup(const Json& cfg, std::uint64_t seed, int max_size) {
  InterpolationSetup setup;
  const auto source = get<std::string>(cfg, "graph_source");
  FlowSignal base;
  if (source == "planted_partition") {
    setup.graph = planted_partition(get<int>(cfg, "k"), get<int>(cfg, "nodes_per"), get<double>(cfg, "p"),
                                    get<double>(cfg, "q"), derive_seed(seed, 100))
                      .graph;
  } else if (source == "file") {
    setup.graph = read_graph(std::filesystem::path(get<std::string>(cfg, "graph_file")));
    const auto flow_file = get<std::string>(cfg, "flow_file");
    if (!flow_file.empty()) {
      base = read_flow(std::filesystem::path(flow_file));
      if (base.size() != setup.graph.num_edges()) {
        fail(ErrorCode::kDimensionMismatch, "flow file length does not match the graph");
      }
    }
  } else {
    fail(ErrorCode::kConfig, "graph_source must be planted_partition or file");
  }
  const Graph& g = setup.graph;
  const int n_test = get<int>(cfg, "n_test");
  if (n_test < 1) fail(ErrorCode::kConfig, "n_test must be positive");
  const int total = n_test + max_size;
  const auto family = get<std::string>(cfg, "family");
  Dataset pool;
  if (family == "cyclic") {
    if (base.size() == 0) base = random_cyclic_flow(g, derive_seed(seed, 101));
    const double rms = base.norm() / std::sqrt(static_cast<double>(std::max(1, g.num_edges())));
    pool = noisy_flow_family(base, g, total, get<double>(cfg, "cyclic_noise") * rms,
                             get<double>(cfg, "gradient_noise") * rms, get<int>(cfg, "smooth_order"),
                             derive_seed(seed, 102));
  } else if (family == "gradient") {
    pool = gradient_flow_family(g, total, get<double>(cfg, "potential_std"), get<int>(cfg, "smooth_order"),
                                derive_seed(seed, 102));
    // One global rescale to unit RMS keeps the learned thresholds on scale.
    double sq = 0.0;
    for (const auto& r : pool.records) sq += r.flow.squaredNorm();
    const double rms = std::sqrt(sq / (static_cast<double>(total) * std::max(1, g.num_edges())));
    if (rms > 0.0) {
      for (auto& r : pool.records) r.flow /= rms;
    }
  } else {
    fail(ErrorCode::kConfig, "family must be cyclic or gradient");
  }
  const double fraction = get<double>(cfg, "unobserved_fraction");
  for (int i = 0; i < n_test; ++i) {
    setup.test_truth.push_back(pool.records[i].flow);
    setup.test_masked.push_back(mask_flow(pool.records[i].flow, fraction, derive_seed(seed, 200 + i)));
  }
  for (int i = n_test; i < total; ++i) setup.train_pool.push_back(pool.records[i].flow);
  return setup;
}

bool is_unsigned(const std::string& method) { return method == "linegraph-rnn" || method == "kriging"; }

std::string method_shift(const std::string& method) {
  if (method == "hodge-rnn") return "hodge";
  if (method == "linegraph-rnn") return "linegraph";
  return "none";
}

// PSNR over all test flows at once: the concatenated truth and prediction
// vectors evaluated on every unobserved entry.
double pooled_psnr(const InterpolationSetup& setup, const std::vector<FlowSignal>& predictions,
                   bool unsigned_truth) {
  Eigen::Index total = 0;
  for (const auto& f : setup.test_truth) total += f.size();
  Eigen::VectorXd truth(total), pred(total);
  std::vector<int> eval;
  Eigen::Index offset = 0;
  for (std::size_t i = 0; i < setup.test_truth.size(); ++i) {
    const auto& f = setup.test_truth[i];
    truth.segment(offset, f.size()) = unsigned_truth ? FlowSignal(f.cwiseAbs()) : f;
    pred.segment(offset, f.size()) = predictions[i];
    for (int e : setup.test_masked[i].mask.unobserved(static_cast<int>(f.size()))) {
      eval.push_back(static_cast<int>(offset) + e);
    }
    offset += f.size();
  }
  // Nothing hidden means nothing to get wrong.
  if (eval.empty()) return std::numeric_limits<double>::infinity();
  return psnr(truth, pred, eval);
}

}  // namespace

InterpolationReport run_interpolation_experiment(const Json& cfg) {
  const auto seeds = get<std::vector<std::uint64_t>>(cfg, "seeds");
  const auto methods = get<std::vector<std::string>>(cfg, "methods");
  const auto sizes = get<std::vector<int>>(cfg, "train_sizes");
  const bool timing = get<bool>(cfg, "record_wall_time");
  for (const auto& m : methods) {
    if (m != "hodge-rnn" && m != "linegraph-rnn" && m != "convopt" && m != "kriging") {
      fail(ErrorCode::kConfig, "unknown method '" + m + "'");
    }
  }
  for (int s : sizes) {
    if (s < 0) fail(ErrorCode::kConfig, "train_sizes must be non-negative");
  }
  const int max_size = sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
  const Json& rnn_cfg = cfg.at("rnn");
  RnnTrainConfig train_cfg;
  train_cfg.f_dim = get<int>(rnn_cfg, "f_dim");
  train_cfg.k_steps = get<int>(rnn_cfg, "k_steps");
  train_cfg.epochs = get<int>(rnn_cfg, "epochs");
  train_cfg.steps_per_epoch = get<int>(rnn_cfg, "steps_per_epoch");
  train_cfg.lr = get<double>(rnn_cfg, "lr");
  train_cfg.mask_fraction = get<double>(rnn_cfg, "mask_fraction");
  train_cfg.validation_masks = get<int>(rnn_cfg, "validation_masks");
  ConvOptConfig convopt_cfg{get<double>(cfg.at("convopt"), "ridge")};
  KrigingConfig kriging_cfg;
  kriging_cfg.embed_dim = get<int>(cfg.at("kriging"), "embed_dim");
  kriging_cfg.noise_floor = get<double>(cfg.at("kriging"), "noise_floor");

  const std::string hash = config_hash(cfg);
  const std::string family = get<std::string>(cfg, "family");

  // rows_per_seed[s] is ordered by (size, method).
  std::vector<std::vector<ResultRow>> rows_per_seed(seeds.size());
  fan_out(static_cast<int>(seeds.size()), get<int>(cfg, "threads"), [&](int si) {
    const std::uint64_t seed = seeds[si];
    const InterpolationSetup setup = build_interpolation_setup(cfg, seed, max_size);
    const Graph& g = setup.graph;
    std::map<std::string, ShiftOperator> shifts;
    for (const auto& m : methods) {
      if (m == "hodge-rnn" && !shifts.count(m)) shifts[m] = make_shift_operator(g, ShiftKind::kHodge);
      if (m == "linegraph-rnn" && !shifts.count(m)) shifts[m] = make_shift_operator(g, ShiftKind::kLinegraph);
    }
    // Baselines do not learn, so one evaluation serves every training size.
    std::map<std::string, std::pair<double, double>> baseline;
    for (const auto& m : methods) {
      if (m != "convopt" && m != "kriging") continue;
      const auto start = std::chrono::steady_clock::now();
      std::vector<FlowSignal> preds;
      for (const auto& masked : setup.test_masked) {
        preds.push_back(m == "convopt"
                            ? convopt_interpolate(masked.values, masked.mask.observed, g, convopt_cfg)
                            : kriging_interpolate(masked.values, masked.mask.observed, g, kriging_cfg));
      }
      baseline[m] = {pooled_psnr(setup, preds, is_unsigned(m)), elapsed_since(start)};
    }
    for (int size : sizes) {
      const std::string dataset =
          family + "/train=" + std::to_string(size) + "/cfg=" + hash;
      for (const auto& m : methods) {
        ResultRow row{m, method_shift(m), dataset, seed, "psnr_db", 0.0, 0.0};
        if (baseline.count(m)) {
          row.value = baseline[m].first;
          row.wall_time_s = baseline[m].second;
        } else {
          const auto start = std::chrono::steady_clock::now();
          std::vector<TrainingFlow> train;
          if (size == 0) {
            // Single-flow setting: learn from the observed part of each test flow.
            for (const auto& masked : setup.test_masked) train.push_back({masked.values, masked.mask.observed});
          } else {
            for (int i = 0; i < size; ++i) train.push_back({setup.train_pool[i], {}});
          }
          const ShiftOperator& s = shifts.at(m);
          const auto trained = train_interpolator(train, s, train_cfg, derive_seed(seed, 300 + size));
          std::vector<FlowSignal> preds;
          for (const auto& masked : setup.test_masked) {
            preds.push_back(interpolate(masked.values, masked.mask.observed, s, trained.params));
          }
          row.value = pooled_psnr(setup, preds, is_unsigned(m));
          row.wall_time_s = elapsed_since(start);
        }
        if (!timing) row.wall_time_s = 0.0;
        rows_per_seed[si].push_back(std::move(row));
      }
    }
  });

  InterpolationReport report;
  for (auto& rows : rows_per_seed) {
    for (auto& r : rows) report.rows.push_back(std::move(r));
  }
  Json summary;
  summary["experiment"] = "interpolation";
  summary["config_hash"] = hash;
  summary["unsigned_methods"] = Json::array();
  for (const auto& m : methods) {
    if (is_unsigned(m)) summary["unsigned_methods"].push_back(m);
  }
  summary["results"] = Json::array();
  for (int size : sizes) {
    for (const auto& m : methods) {
      std::vector<double> values;
      for (const auto& r : report.rows) {
        if (r.method == m && r.dataset.find("/train=" + std::to_string(size) + "/") != std::string::npos) {
          values.push_back(r.value);
        }
      }
      summary["results"].push_back(Json{{"method", m},
                                        {"train_size", size},
                                        {"unsigned", is_unsigned(m)},
                                        {"psnr_db_mean", number_or_inf(mean_of(values))},
                                        {"psnr_db_std", number_or_inf(std_of(values))}});
    }
  }
  report.summary = std::move(summary);
  return report;
}

LocalizationReport run_localization_experiment(const Json& cfg) {
  const auto seeds = get<std::vector<std::uint64_t>>(cfg, "seeds");
  const auto shift_names = get<std::vector<std::string>>(cfg, "shifts");
  const bool timing = get<bool>(cfg, "record_wall_time");
  std::vector<ShiftKind> kinds;
  for (const auto& name : shift_names) kinds.push_back(parse_shift_kind(name));

  ClassifierTrainConfig train_cfg;
  train_cfg.epochs = get<int>(cfg, "epochs");
  train_cfg.batch_size = get<int>(cfg, "batch_size");
  train_cfg.lr = get<double>(cfg, "lr");
  train_cfg.agg_depth = get<int>(cfg, "agg_depth");
  train_cfg.convs.clear();
  for (const auto& c : cfg.at("conv")) {
    train_cfg.convs.push_back(ConvSpec{get<int>(c, "out_channels"), get<int>(c, "kernel"),
                                       get<int>(c, "stride"), get<int>(c, "pool")});
  }
  const NoiseLevel noise{get<double>(cfg, "noise_relative"), get<double>(cfg, "noise_absolute")};
  const int k_sel = get<int>(cfg, "k_sel");
  const std::string hash = config_hash(cfg);
  const std::string dataset = "localization/cfg=" + hash;

  struct SeedOutput {
    std::vector<ResultRow> rows;
    std::vector<CurveRow> curves;
  };
  std::vector<SeedOutput> outputs(seeds.size());
  fan_out(static_cast<int>(seeds.size()), get<int>(cfg, "threads"), [&](int si) {
    const std::uint64_t seed = seeds[si];
    const PartitionedGraph pg = planted_partition(get<int>(cfg, "k"), get<int>(cfg, "nodes_per"),
                                                  get<double>(cfg, "p"), get<double>(cfg, "q"),
                                                  derive_seed(seed, 100));
    const int t_min = get<int>(cfg, "t_min");
    const int t_max = get<int>(cfg, "t_max");
    const Dataset train_ds = localization_dataset(pg, get<int>(cfg, "n_train"), t_min, t_max, noise,
                                                  derive_seed(seed, 101));
    const Dataset test_ds = localization_dataset(pg, get<int>(cfg, "n_test"), t_min, t_max, noise,
                                                 derive_seed(seed, 102));
    for (ShiftKind kind : kinds) {
      const auto start = std::chrono::steady_clock::now();
      const ShiftOperator s = make_shift_operator(pg.graph, kind);
      const SelectionMatrix c = kind == ShiftKind::kNode ? select_top_degree_nodes(pg.graph, k_sel)
                                                         : select_top_degree_edges(pg.graph, k_sel);
      auto to_signals = [&](const Dataset& ds) {
        LabeledSignals out;
        out.num_classes = pg.num_communities;
        for (const auto& r : ds.records) {
          out.signals.push_back(kind == ShiftKind::kNode ? estimate_potentials(r.flow, pg.graph) : r.flow);
          out.labels.push_back(*r.label);
        }
        return out;
      };
      const auto result = train_classifier(to_signals(train_ds), to_signals(test_ds), s, c, train_cfg,
                                           derive_seed(seed, 200));
      const std::string shift(shift_kind_name(kind));
      for (const auto& h : result.history) {
        if (h.epoch == 0) continue;
        outputs[si].curves.push_back({shift, seed, h.epoch, h.train_loss, h.test_accuracy});
      }
      outputs[si].rows.push_back(ResultRow{"agnn", shift, dataset, seed, "accuracy",
                                           result.history.back().test_accuracy,
                                           timing ? elapsed_since(start) : 0.0});
    }
  });

  LocalizationReport report;
  for (auto& o : outputs) {
    for (auto& r : o.rows) report.rows.push_back(std::move(r));
    for (auto& c : o.curves) report.curves.push_back(std::move(c));
  }
  Json summary;
  summary["experiment"] = "localization";
  summary["config_hash"] = hash;
  summary["chance_accuracy"] = 1.0 / get<int>(cfg, "k");
  summary["results"] = Json::array();
  for (const auto& name : shift_names) {
    std::vector<double> values;
    for (const auto& r : report.rows) {
      if (r.shift == name) values.push_back(r.value);
    }
    summary["results"].push_back(
        Json{{"shift", name}, {"accuracy_mean", mean_of(values)}, {"accuracy_std", std_of(values)}});
  }
  report.summary = std::move(summary);
  return report;
}

}  // namespace hodgeflow
