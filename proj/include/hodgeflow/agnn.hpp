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
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hodgeflow/autodiff.hpp"
#include "hodgeflow/checkpoint.hpp"
#include "hodgeflow/graph.hpp"
#include "hodgeflow/operators.hpp"

namespace hodgeflow {

// Row-selection matrix C, stored as the ordered list of selected indices.
struct SelectionMatrix {
  std::vector<int> indices;

  int size() const { return static_cast<int>(indices.size()); }
  void validate(int dim) const;
};

// The k edges with the largest endpoint-degree sum; ties go to the lower
// edge index.
SelectionMatrix select_top_degree_edges(const Graph& g, int k);
// The k nodes with the largest degree; ties go to the lower node id.
SelectionMatrix select_top_degree_nodes(const Graph& g, int k);

// K_sel x columns. Column j is C (S / lambda_max)^j x.
using AggSequence = Eigen::MatrixXd;

inline constexpr int kDefaultAggDepth = 63;

// Aggregation sampling with min(dim - 1, depth) shifts, so the sequence has
// that many columns plus one. The linegraph shift consumes |x|.
AggSequence aggregate_sample(const Eigen::VectorXd& x, const ShiftOperator& s,
                             const SelectionMatrix& c, int depth = kDefaultAggDepth);

struct ConvSpec {
  int out_channels = 32;
  int kernel = 8;
  int stride = 4;
  int pool = 0;  // max-pool width after the relu; 0 for none
};

std::vector<ConvSpec> default_conv_specs();

struct ConvLayer {
  nn::Matrix weight;  // out x (in * kernel); see nn::Tape::conv1d
  Eigen::VectorXd bias;
  int kernel = 1;
  int stride = 1;
  int pool = 0;
};

// 1-D CNN head: (conv -> relu -> optional pool)*, global max-pool, affine,
// softmax. input_scale is a fixed multiplier applied to the sequence first.
struct CnnParams {
  std::vector<ConvLayer> convs;
  nn::Matrix fc_weight;  // classes x last channels
  Eigen::VectorXd fc_bias;
  double input_scale = 1.0;

  int in_channels() const { return convs.empty() ? 0 : static_cast<int>(convs.front().weight.cols() / convs.front().kernel); }
  int num_classes() const { return static_cast<int>(fc_weight.rows()); }

  // Gaussian N(0, 0.1^2) weights and zero biases.
  static CnnParams initialize(int in_channels, int num_classes, std::span<const ConvSpec> specs,
                              std::uint64_t seed);

  // conv weights and biases layer by layer, then fc weight and bias.
  std::vector<nn::Matrix> to_arrays() const;
  void assign_arrays(std::span<const nn::Matrix> arrays);

  Checkpoint to_checkpoint() const;
  static CnnParams from_checkpoint(const Checkpoint& ckpt);
};

Eigen::VectorXd agnn_forward(const AggSequence& g_seq, const CnnParams& p);
int agnn_predict(const AggSequence& g_seq, const CnnParams& p);

// Cross-entropy of one labelled sequence; grads (optional) in to_arrays() order.
double agnn_loss(const AggSequence& g_seq, int label, const CnnParams& p,
                 std::vector<nn::Matrix>* grads = nullptr);

// Parameters for the reoriented problem: the first-layer filters reading
// input channel i are multiplied by the flip sign of the i-th selected edge.
CnnParams rotate_params(const CnnParams& p, const FlipMatrix& flip, const SelectionMatrix& c);

// Signals live in the shift's space (flows for edge shifts, node
// potentials for the node shift).
struct LabeledSignals {
  std::vector<Eigen::VectorXd> signals;
  std::vector<int> labels;
  int num_classes = 0;
};

struct ClassifierTrainConfig {
  int epochs = 30;
  int batch_size = 32;
  double lr = 1e-3;
  int agg_depth = kDefaultAggDepth;
  std::vector<ConvSpec> convs = default_conv_specs();
};

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;
  double test_accuracy = 0.0;
};

struct ClassifierTrainResult {
  CnnParams params;
  // Entry 0 scores the initial parameters.
  std::vector<EpochMetrics> history;
};

ClassifierTrainResult train_classifier(const LabeledSignals& train, const LabeledSignals& test,
                                       const ShiftOperator& s, const SelectionMatrix& c,
                                       const ClassifierTrainConfig& config, std::uint64_t seed);

// Minimum-norm least-squares potentials for f, shifted to zero mean.
Eigen::VectorXd estimate_potentials(const FlowSignal& f, const Graph& g);

}  // namespace hodgeflow
