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

// Observation set Omega and, during training, the artificially masked subset
// Psi of Omega whose values are hidden from the model and scored.
struct MaskSet {
  std::vector<int> observed;
  std::vector<int> artificial;

  static MaskSet all_observed(int num_edges);
  std::vector<int> unobserved(int num_edges) const;
  void validate(int num_edges) const;
};

// Input representation seen by a shift: the linegraph Laplacian carries no
// orientation, so it consumes |f|.
FlowSignal signal_for_shift(const FlowSignal& f, ShiftKind kind);

// Zeroes every entry outside `keep`.
FlowSignal restrict_to(const FlowSignal& f, std::span<const int> keep);

enum class Activation { kSoftThreshold, kRelu };

inline constexpr double kInitialThreshold = 1e-3;

struct RnnParams {
  Eigen::VectorXd u;  // input-to-feature weights, length f_dim
  Eigen::MatrixXd V;  // feature recurrence, f_dim x f_dim
  Eigen::VectorXd w;  // feature readout, length f_dim
  double tau_hidden = kInitialThreshold;
  double tau_out = kInitialThreshold;
  int k_steps = 8;

  int f_dim() const { return static_cast<int>(u.size()); }

  // Gaussian weights: u ~ N(0, 1), V and w ~ N(0, 1 / f_dim).
  static RnnParams initialize(int f_dim, int k_steps, std::uint64_t seed);
  static RnnParams zeros(int f_dim, int k_steps);

  // [u (f x 1), V, w (f x 1), tau_hidden (1x1), tau_out (1x1)].
  std::vector<nn::Matrix> to_arrays() const;
  static RnnParams from_arrays(std::span<const nn::Matrix> arrays, int k_steps);

  Checkpoint to_checkpoint() const;
  static RnnParams from_checkpoint(const Checkpoint& ckpt);

  void validate() const;
};

// o_K for input x0 = f_in (|f_in| for the linegraph shift), with
//   x_k = (S / lambda_max) x_{k-1},  H_k = sigma(x_k u^T + H_{k-1} V),
//   o_k = sigma(H_k w),  H_0 = 0.
FlowSignal rnn_forward(const FlowSignal& f_in, const ShiftOperator& s, const RnnParams& p,
                       Activation activation = Activation::kSoftThreshold);

// Mean squared error over Psi of the model run on f_true restricted to
// Omega \ Psi. When grads is non-null it receives the gradient with respect
// to every parameter, in to_arrays() order.
double rnn_loss(const FlowSignal& f_true, const RnnParams& p, const ShiftOperator& s,
                const MaskSet& mask, std::vector<nn::Matrix>* grads = nullptr);

struct TrainingFlow {
  FlowSignal values;
  // Omega. Empty means every edge is observed.
  std::vector<int> observed;
};

struct RnnTrainConfig {
  int f_dim = 16;
  int k_steps = 8;
  int epochs = 10;
  // Optimization steps per epoch; 0 means one pass over the dataset.
  int steps_per_epoch = 0;
  double lr = 1e-3;
  // |Psi| = max(1, round(mask_fraction * |Omega|)), resampled every step.
  double mask_fraction = 0.1;
  // Fixed held-out masks scored after every epoch to pick the returned
  // parameters. 0 returns the final parameters.
  int validation_masks = 8;
};

struct RnnTrainResult {
  RnnParams params;
  std::vector<double> epoch_loss;       // mean training loss per epoch
  std::vector<double> validation_loss;  // entry 0 is before training
  int best_epoch = 0;
};

RnnTrainResult train_interpolator(std::span<const TrainingFlow> data, const ShiftOperator& s,
                                  const RnnTrainConfig& config, std::uint64_t seed);

// Model prediction on unobserved edges; observed entries are passed through
// (as |f| for the linegraph shift).
FlowSignal interpolate(const FlowSignal& f_obs, std::span<const int> observed,
                       const ShiftOperator& s, const RnnParams& p);

}  // namespace hodgeflow
