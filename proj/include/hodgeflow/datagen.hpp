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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hodgeflow/graph.hpp"
#include "hodgeflow/operators.hpp"
#include "hodgeflow/rnn.hpp"

namespace hodgeflow {

struct PartitionedGraph {
  Graph graph;
  std::vector<int> community_of;
  int num_communities = 0;

  std::vector<std::vector<int>> members() const;
};

// Planted partition model. Node v belongs to community v / nodes_per; every
// pair (i < j) becomes edge i -> j with probability p inside a community and
// q across. Disconnected draws are rejected and redrawn up to max_retries.
PartitionedGraph planted_partition(int k, int nodes_per, double p, double q, std::uint64_t seed,
                                   int max_retries = 100);

// Standard deviation of the additive noise is
// absolute + relative * ||clean flow||_inf.
struct NoiseLevel {
  double relative = 0.01;
  double absolute = 0.0;
};

// f = B^T (A / lambda_1)^t delta_v with lambda_1 the Perron root of A. Holds
// the operators so that many signals can be drawn from one graph.
class DiffusionModel {
 public:
  explicit DiffusionModel(const PartitionedGraph& pg);

  const PartitionedGraph& partition() const { return pg_; }
  double adjacency_lambda() const { return lambda_; }
  FlowSignal clean_flow(int source, int t) const;
  // Clean flow plus Gaussian noise drawn from `seed`.
  FlowSignal noisy_flow(int source, int t, const NoiseLevel& noise, std::uint64_t seed) const;

 private:
  PartitionedGraph pg_;
  SparseMatrix adjacency_;
  SparseMatrix incidence_;
  double lambda_ = 1.0;
};

struct LabeledFlow {
  FlowSignal flow;
  int label = 0;
};

LabeledFlow diffusion_flow(const PartitionedGraph& pg, int source, int t, const NoiseLevel& noise,
                           std::uint64_t seed);

struct Record {
  FlowSignal flow;
  std::optional<int> label;
  std::optional<MaskSet> mask;
  int source = -1;
  int diffusion_time = -1;
  std::uint64_t seed = 0;
};

struct Dataset {
  std::string generator;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  std::string graph_file;
  int num_classes = 0;  // 0 for unlabeled data
  std::vector<Record> records;
};

// Candidate sources of a community: its top ceil(10%) nodes by degree,
// ties to the lower id.
std::vector<int> community_sources(const PartitionedGraph& pg, int community);

Dataset localization_dataset(const PartitionedGraph& pg, int n_signals, int t_min, int t_max,
                             const NoiseLevel& noise, std::uint64_t seed);

// Low-pass node smoothing (I - L0 / lambda_max(L0))^order applied to x.
Eigen::VectorXd smooth_node_signal(const ShiftOperator& node_laplacian, Eigen::VectorXd x, int order);

// f_base plus cyclic noise (Gaussian projected onto ker L1) plus the
// gradient of smoothed Gaussian node noise.
Dataset noisy_flow_family(const FlowSignal& f_base, const Graph& g, int n, double cyclic_std,
                          double gradient_std, int smooth_order, std::uint64_t seed);

// Purely gradient flows B^T (I - L0 / lambda)^order eta, eta ~ N(0, std^2).
Dataset gradient_flow_family(const Graph& g, int n, double potential_std, int smooth_order,
                             std::uint64_t seed);

// A cyclic flow: Gaussian edge noise projected onto ker L1 and scaled to
// unit RMS.
FlowSignal random_cyclic_flow(const Graph& g, std::uint64_t seed);

struct MaskedFlow {
  FlowSignal values;  // zero on unobserved edges
  MaskSet mask;
};

// floor(fraction * E) uniformly chosen edges become unobserved.
MaskedFlow mask_flow(const FlowSignal& f, double unobserved_fraction, std::uint64_t seed);

inline constexpr int kDatasetSchemaVersion = 1;

// Writes <manifest> (JSON) and <manifest stem>.flows.csv next to it.
void save_dataset(const Dataset& ds, const std::filesystem::path& manifest);
Dataset load_dataset(const std::filesystem::path& manifest);

}  // namespace hodgeflow
