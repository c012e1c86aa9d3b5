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

#include "hodgeflow/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hodgeflow/error.hpp"
#include "hodgeflow/hodge.hpp"
#include "hodgeflow/io.hpp"
#include "hodgeflow/random.hpp"

namespace hodgeflow {

std::vector<std::vector<int>> PartitionedGraph::members() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(num_communities));
  for (int v = 0; v < static_cast<int>(community_of.size()); ++v) out[community_of[v]].push_back(v);
  return out;
}

PartitionedGraph planted_partition(int k, int nodes_per, double p, double q, std::uint64_t seed,
                                   int max_retries) {
  if (k < 1 || nodes_per < 1) fail(ErrorCode::kInvalidArgument, "need k >= 1 and nodes_per >= 1");
  if (!(0.0 <= q && q <= p && p <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "need 0 <= q <= p <= 1");
  }
  const int n = k * nodes_per;
  PartitionedGraph pg;
  pg.num_communities = k;
  pg.community_of.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) pg.community_of[v] = v / nodes_per;

  if (q == 0.0 && k > 1) {
    fail(ErrorCode::kDisconnectedAfterRetries,
         "q = 0 with " + std::to_string(k) + " communities can never be connected");
  }
  Rng rng(seed);
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double prob = pg.community_of[i] == pg.community_of[j] ? p : q;
        if (rng.uniform() < prob) edges.push_back({i, j});
      }
    }
    Graph g = Graph::build(edges, n);
    if (g.is_connected()) {
      pg.graph = std::move(g);
      return pg;
    }
  }
  fail(ErrorCode::kDisconnectedAfterRetries,
       "no connected draw in " + std::to_string(max_retries + 1) + " attempts");
}

DiffusionModel::DiffusionModel(const PartitionedGraph& pg)
    : pg_(pg),
      adjacency_(adjacency_matrix(pg.graph).matrix()),
      incidence_(incidence_matrix(pg.graph).matrix()) {
  const double lambda = adjacency_max_eigenvalue(pg.graph);
  lambda_ = lambda > 0.0 ? lambda : 1.0;
}

FlowSignal DiffusionModel::clean_flow(int source, int t) const {
  const int n = pg_.graph.num_nodes();
  if (source < 0 || source >= n) {
    fail(ErrorCode::kNodeOutOfRange, "source " + std::to_string(source) + " outside [0," +
                                         std::to_string(n) + ")");
  }
  if (t < 0) fail(ErrorCode::kInvalidArgument, "diffusion time must be non-negative");
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);
  phi[source] = 1.0;
  for (int i = 0; i < t; ++i) phi = (adjacency_ * phi) / lambda_;
  return incidence_.transpose() * phi;
}

FlowSignal DiffusionModel::noisy_flow(int source, int t, const NoiseLevel& noise,
                                      std::uint64_t seed) const {
  FlowSignal f = clean_flow(source, t);
  const double scale = f.size() > 0 ? f.cwiseAbs().maxCoeff() : 0.0;
  const double std_dev = noise.absolute + noise.relative * scale;
  if (std_dev > 0.0) {
    Rng rng(seed);
    for (Eigen::Index e = 0; e < f.size(); ++e) f[e] += std_dev * rng.normal();
  }
  return f;
}

LabeledFlow diffusion_flow(const PartitionedGraph& pg, int source, int t, const NoiseLevel& noise,
                           std::uint64_t seed) {
  const DiffusionModel model(pg);
  return {model.noisy_flow(source, t, noise, seed), pg.community_of.at(static_cast<std::size_t>(source))};
}

std::vector<int> community_sources(const PartitionedGraph& pg, int community) {
  const auto deg = pg.graph.degrees();
  std::vector<int> nodes = pg.members().at(static_cast<std::size_t>(community));
  if (nodes.empty()) fail(ErrorCode::kInvalidArgument, "community is empty");
  std::stable_sort(nodes.begin(), nodes.end(), [&](int a, int b) { return deg[a] > deg[b]; });
  const auto keep = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(nodes.size())));
  nodes.resize(std::max<std::size_t>(1, keep));
  return nodes;
}

Dataset localization_dataset(const PartitionedGraph& pg, int n_signals, int t_min, int t_max,
                             const NoiseLevel& noise, std::uint64_t seed) {
  if (n_signals < 0 || t_min < 0 || t_max < t_min) {
    fail(ErrorCode::kInvalidArgument, "bad signal count or diffusion time range");
  }
  Dataset ds;
  ds.generator = "localization";
  ds.seed = seed;
  ds.num_classes = pg.num_communities;
  ds.config = {{"n_signals", n_signals},
               {"t_min", t_min},
               {"t_max", t_max},
               {"noise_relative", noise.relative},
               {"noise_absolute", noise.absolute}};
  if (n_signals == 0) return ds;

  std::vector<std::vector<int>> sources;
  for (int c = 0; c < pg.num_communities; ++c) sources.push_back(community_sources(pg, c));
  const DiffusionModel model(pg);
  ds.records.reserve(static_cast<std::size_t>(n_signals));
  for (int i = 0; i < n_signals; ++i) {
    const std::uint64_t rec_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    Rng rng(rec_seed);
    const int community = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(pg.num_communities)));
    const auto& cand = sources[community];
    const int source = cand[rng.uniform_int(cand.size())];
    const int t = static_cast<int>(rng.uniform_range(t_min, t_max));
    Record r;
    r.flow = model.noisy_flow(source, t, noise, rng.next_u64());
    r.label = community;
    r.source = source;
    r.diffusion_time = t;
    r.seed = rec_seed;
    ds.records.push_back(std::move(r));
  }
  return ds;
}

Eigen::VectorXd smooth_node_signal(const ShiftOperator& node_laplacian, Eigen::VectorXd x, int order) {
  if (order < 0) fail(ErrorCode::kInvalidArgument, "smoothing order must be non-negative");
  for (int i = 0; i < order; ++i) x -= node_laplacian.apply_normalized(x);
  return x;
}

namespace {

Eigen::VectorXd gaussian_vector(Rng& rng, Eigen::Index n, double std_dev) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = std_dev * rng.normal();
  return v;
}

}  // namespace

Dataset noisy_flow_family(const FlowSignal& f_base, const Graph& g, int n, double cyclic_std,
                          double gradient_std, int smooth_order, std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "need at least one sample");
  if (f_base.size() != g.num_edges()) fail(ErrorCode::kDimensionMismatch, "base flow length");
  Dataset ds;
  ds.generator = "noisy_flow_family";
  ds.seed = seed;
  ds.config = {{"n", n},
               {"cyclic_std", cyclic_std},
               {"gradient_std", gradient_std},
               {"smooth_order", smooth_order}};
  const ShiftOperator l0 = make_shift_operator(g, ShiftKind::kNode);
  const IncidenceMatrix b(g);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t rec_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    Rng rng(rec_seed);
    const FlowSignal eta = gaussian_vector(rng, g.num_edges(), cyclic_std);
    const FlowSignal cyc = hodge_decompose(eta, g).cyclic;
    const Eigen::VectorXd zeta = gaussian_vector(rng, g.num_nodes(), gradient_std);
    const FlowSignal grad = b.gradient(smooth_node_signal(l0, zeta, smooth_order));
    Record r;
    r.flow = f_base + cyc + grad;
    r.seed = rec_seed;
    ds.records.push_back(std::move(r));
  }
  return ds;
}

Dataset gradient_flow_family(const Graph& g, int n, double potential_std, int smooth_order,
                             std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "need at least one sample");
  if (!g.is_connected()) fail(ErrorCode::kDisconnectedGraph, "gradient flow family");
  Dataset ds;
  ds.generator = "gradient_flow_family";
  ds.seed = seed;
  ds.config = {{"n", n}, {"potential_std", potential_std}, {"smooth_order", smooth_order}};
  const ShiftOperator l0 = make_shift_operator(g, ShiftKind::kNode);
  const IncidenceMatrix b(g);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t rec_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    Rng rng(rec_seed);
    const Eigen::VectorXd eta = gaussian_vector(rng, g.num_nodes(), potential_std);
    Record r;
    r.flow = b.gradient(smooth_node_signal(l0, eta, smooth_order));
    r.seed = rec_seed;
    ds.records.push_back(std::move(r));
  }
  return ds;
}

FlowSignal random_cyclic_flow(const Graph& g, std::uint64_t seed) {
  Rng rng(seed);
  const FlowSignal cyc = hodge_decompose(gaussian_vector(rng, g.num_edges(), 1.0), g).cyclic;
  const double rms = g.num_edges() > 0 ? cyc.norm() / std::sqrt(static_cast<double>(g.num_edges())) : 0.0;
  return rms > 0.0 ? FlowSignal(cyc / rms) : cyc;
}

MaskedFlow mask_flow(const FlowSignal& f, double unobserved_fraction, std::uint64_t seed) {
  if (!(unobserved_fraction >= 0.0 && unobserved_fraction < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "unobserved fraction must lie in [0, 1)");
  }
  const int num_edges = static_cast<int>(f.size());
  const int hidden = static_cast<int>(std::floor(unobserved_fraction * num_edges));
  Rng rng(seed);
  std::vector<char> is_hidden(static_cast<std::size_t>(num_edges), 0);
  for (int e : rng.sample_without_replacement(num_edges, hidden)) is_hidden[e] = 1;
  MaskedFlow out;
  out.values = f;
  for (int e = 0; e < num_edges; ++e) {
    if (is_hidden[e]) {
      out.values[e] = 0.0;
    } else {
      out.mask.observed.push_back(e);
    }
  }
  return out;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& manifest) {
  const std::filesystem::path flows_name = manifest.stem().string() + ".flows.csv";
  const std::filesystem::path flows_path = manifest.parent_path() / flows_name;

  nlohmann::ordered_json j;
  j["schema_version"] = kDatasetSchemaVersion;
  j["generator"] = ds.generator;
  j["config"] = ds.config;
  j["seed"] = ds.seed;
  j["graph_file"] = ds.graph_file;
  j["record_count"] = ds.records.size();
  j["edge_count"] = ds.records.empty() ? 0 : ds.records.front().flow.size();
  j["flows_file"] = flows_name.string();
  if (ds.num_classes > 0) {
    nlohmann::ordered_json labels = nlohmann::ordered_json::object();
    for (int c = 0; c < ds.num_classes; ++c) labels[std::to_string(c)] = "community " + std::to_string(c);
    j["label_map"] = labels;
  } else {
    j["label_map"] = nullptr;
  }
  j["records"] = nlohmann::ordered_json::array();
  std::ofstream flows(flows_path, std::ios::binary);
  if (!flows) fail(ErrorCode::kIo, "cannot write " + flows_path.string());
  for (const auto& r : ds.records) {
    nlohmann::ordered_json meta;
    meta["label"] = r.label ? nlohmann::ordered_json(*r.label) : nlohmann::ordered_json(nullptr);
    meta["source"] = r.source;
    meta["diffusion_time"] = r.diffusion_time;
    meta["seed"] = r.seed;
    if (r.mask) {
      meta["observed"] = r.mask->observed;
      meta["artificial"] = r.mask->artificial;
    }
    j["records"].push_back(std::move(meta));
    for (Eigen::Index e = 0; e < r.flow.size(); ++e) {
      if (e > 0) flows << ',';
      flows << format_double(r.flow[e]);
    }
    flows << '\n';
  }
  std::ofstream out(manifest, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + manifest.string());
  out << j.dump(1) << '\n';
}

Dataset load_dataset(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) fail(ErrorCode::kIo, "cannot open " + manifest.string());
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kIo, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (j.value("schema_version", 0) != kDatasetSchemaVersion) {
    fail(ErrorCode::kIo, "unsupported dataset schema version");
  }
  Dataset ds;
  ds.generator = j.at("generator").get<std::string>();
  ds.config = j.at("config");
  ds.seed = j.at("seed").get<std::uint64_t>();
  ds.graph_file = j.at("graph_file").get<std::string>();
  ds.num_classes = j.at("label_map").is_null() ? 0 : static_cast<int>(j.at("label_map").size());
  const auto count = j.at("record_count").get<std::size_t>();
  const auto edge_count = j.at("edge_count").get<Eigen::Index>();

  const auto flows_path = manifest.parent_path() / j.at("flows_file").get<std::string>();
  std::ifstream flows(flows_path);
  if (!flows) fail(ErrorCode::kIo, "cannot open " + flows_path.string());
  const auto& meta = j.at("records");
  if (meta.size() != count) fail(ErrorCode::kIo, "record metadata count mismatch");
  std::string line;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(flows, line)) fail(ErrorCode::kIo, "flow matrix has too few rows");
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) values.push_back(parse_double(cell));
    if (static_cast<Eigen::Index>(values.size()) != edge_count) {
      fail(ErrorCode::kIo, "flow row " + std::to_string(i) + " has wrong length");
    }
    Record r;
    r.flow = Eigen::Map<const Eigen::VectorXd>(values.data(), edge_count);
    const auto& m = meta[i];
    if (!m.at("label").is_null()) r.label = m.at("label").get<int>();
    r.source = m.at("source").get<int>();
    r.diffusion_time = m.at("diffusion_time").get<int>();
    r.seed = m.at("seed").get<std::uint64_t>();
    if (m.contains("observed")) {
      MaskSet mask;
      mask.observed = m.at("observed").get<std::vector<int>>();
      mask.artificial = m.at("artificial").get<std::vector<int>>();
      r.mask = std::move(mask);
    }
    ds.records.push_back(std::move(r));
  }
  return ds;
}

}  // namespace hodgeflow
