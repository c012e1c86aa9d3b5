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

#include "hodgeflow/rnn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hodgeflow/error.hpp"
#include "hodgeflow/optim.hpp"
#include "hodgeflow/random.hpp"

namespace hodgeflow {

MaskSet MaskSet::all_observed(int num_edges) {
  MaskSet m;
  m.observed.resize(static_cast<std::size_t>(num_edges));
  for (int e = 0; e < num_edges; ++e) m.observed[e] = e;
  return m;
}

std::vector<int> MaskSet::unobserved(int num_edges) const {
  std::vector<char> seen(static_cast<std::size_t>(num_edges), 0);
  for (int e : observed) seen[e] = 1;
  std::vector<int> out;
  for (int e = 0; e < num_edges; ++e) {
    if (!seen[e]) out.push_back(e);
  }
  return out;
}

void MaskSet::validate(int num_edges) const {
  std::vector<char> in_omega(static_cast<std::size_t>(num_edges), 0);
  for (int e : observed) {
    if (e < 0 || e >= num_edges) fail(ErrorCode::kDimensionMismatch, "observed edge out of range");
    if (in_omega[e]) fail(ErrorCode::kInvalidArgument, "observed edge listed twice");
    in_omega[e] = 1;
  }
  std::vector<char> in_psi(static_cast<std::size_t>(num_edges), 0);
  for (int e : artificial) {
    if (e < 0 || e >= num_edges || !in_omega[e]) {
      fail(ErrorCode::kInvalidArgument, "masked edge " + std::to_string(e) + " is not observed");
    }
    if (in_psi[e]) fail(ErrorCode::kInvalidArgument, "masked edge listed twice");
    in_psi[e] = 1;
  }
}

FlowSignal signal_for_shift(const FlowSignal& f, ShiftKind kind) {
  return kind == ShiftKind::kLinegraph ? FlowSignal(f.cwiseAbs()) : f;
}

FlowSignal restrict_to(const FlowSignal& f, std::span<const int> keep) {
  FlowSignal out = FlowSignal::Zero(f.size());
  for (int e : keep) out[e] = f[e];
  return out;
}

RnnParams RnnParams::initialize(int f_dim, int k_steps, std::uint64_t seed) {
  Rng rng(seed);
  RnnParams p = zeros(f_dim, k_steps);
  // Unit-variance signal through each layer; the shifted inputs are already
  // small (entries of x_k scale like 1 / lambda_max).
  const double fan = 1.0 / std::sqrt(static_cast<double>(f_dim));
  for (int i = 0; i < f_dim; ++i) p.u[i] = rng.normal();
  for (int i = 0; i < f_dim; ++i) {
    for (int j = 0; j < f_dim; ++j) p.V(i, j) = fan * rng.normal();
  }
  for (int i = 0; i < f_dim; ++i) p.w[i] = fan * rng.normal();
  return p;
}

RnnParams RnnParams::zeros(int f_dim, int k_steps) {
  RnnParams p;
  p.u = Eigen::VectorXd::Zero(f_dim);
  p.V = Eigen::MatrixXd::Zero(f_dim, f_dim);
  p.w = Eigen::VectorXd::Zero(f_dim);
  p.k_steps = k_steps;
  p.validate();
  p.tau_hidden = kInitialThreshold;
  p.tau_out = kInitialThreshold;
  return p;
}

void RnnParams::validate() const {
  if (f_dim() < 1) fail(ErrorCode::kInvalidArgument, "f_dim must be at least 1");
  if (k_steps < 1) fail(ErrorCode::kInvalidArgument, "k_steps must be at least 1");
  if (V.rows() != f_dim() || V.cols() != f_dim() || w.size() != f_dim()) {
    fail(ErrorCode::kShapeMismatch, "RNN parameter shapes disagree with f_dim");
  }
}

std::vector<nn::Matrix> RnnParams::to_arrays() const {
  return {u, V, w, nn::Matrix::Constant(1, 1, tau_hidden), nn::Matrix::Constant(1, 1, tau_out)};
}

RnnParams RnnParams::from_arrays(std::span<const nn::Matrix> arrays, int k_steps) {
  if (arrays.size() != 5) fail(ErrorCode::kShapeMismatch, "RNN parameters need 5 arrays");
  RnnParams p;
  p.u = arrays[0].col(0);
  p.V = arrays[1];
  p.w = arrays[2].col(0);
  p.tau_hidden = arrays[3](0, 0);
  p.tau_out = arrays[4](0, 0);
  p.k_steps = k_steps;
  p.validate();
  return p;
}

Checkpoint RnnParams::to_checkpoint() const {
  Checkpoint c;
  c.model = "hodge-rnn";
  const auto arrays = to_arrays();
  const char* names[] = {"u", "V", "w", "tau_hidden", "tau_out"};
  for (std::size_t i = 0; i < arrays.size(); ++i) c.arrays.push_back({names[i], arrays[i]});
  c.arrays.push_back({"k_steps", nn::Matrix::Constant(1, 1, k_steps)});
  return c;
}

RnnParams RnnParams::from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.model != "hodge-rnn") fail(ErrorCode::kIo, "checkpoint holds '" + ckpt.model + "'");
  const std::vector<nn::Matrix> arrays = {ckpt.get("u"), ckpt.get("V"), ckpt.get("w"),
                                          ckpt.get("tau_hidden"), ckpt.get("tau_out")};
  return from_arrays(arrays, static_cast<int>(ckpt.get("k_steps")(0, 0)));
}

namespace {

void check_shift(const FlowSignal& f, const ShiftOperator& s) {
  if (s.kind == ShiftKind::kNode) {
    fail(ErrorCode::kInvalidArgument, "the RNN runs on edge-space shifts (hodge, linegraph)");
  }
  if (f.size() != s.dim()) {
    fail(ErrorCode::kDimensionMismatch, "flow length " + std::to_string(f.size()) +
                                            " vs shift dimension " + std::to_string(s.dim()));
  }
}

// Shifted inputs x_1..x_K. They do not depend on the parameters.
std::vector<Eigen::VectorXd> shifted_inputs(const FlowSignal& x0, const ShiftOperator& s, int k) {
  std::vector<Eigen::VectorXd> xs;
  xs.reserve(static_cast<std::size_t>(k));
  Eigen::VectorXd x = x0;
  for (int i = 0; i < k; ++i) {
    x = s.apply_normalized(x);
    xs.push_back(x);
  }
  return xs;
}

struct RnnNodes {
  nn::Var u_row, V, w, tau_hidden, tau_out, output;
};

RnnNodes record_rnn(nn::Tape& tape, const std::vector<Eigen::VectorXd>& xs, const RnnParams& p,
                    Activation activation) {
  RnnNodes n;
  n.u_row = tape.leaf(p.u.transpose());
  n.V = tape.leaf(p.V);
  n.w = tape.leaf(p.w);
  n.tau_hidden = tape.leaf(nn::Matrix::Constant(1, 1, p.tau_hidden));
  n.tau_out = tape.leaf(nn::Matrix::Constant(1, 1, p.tau_out));
  auto sigma = [&](nn::Var x, nn::Var tau) {
    return activation == Activation::kSoftThreshold ? tape.soft_threshold(x, tau) : tape.relu(x);
  };
  nn::Var hidden;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    nn::Var pre = tape.matmul(tape.constant(xs[k]), n.u_row);
    if (k > 0) pre = tape.add(pre, tape.matmul(hidden, n.V));
    hidden = sigma(pre, n.tau_hidden);
  }
  n.output = sigma(tape.matmul(hidden, n.w), n.tau_out);
  return n;
}

}  // namespace

FlowSignal rnn_forward(const FlowSignal& f_in, const ShiftOperator& s, const RnnParams& p,
                       Activation activation) {
  check_shift(f_in, s);
  p.validate();
  nn::Tape tape;
  const auto xs = shifted_inputs(signal_for_shift(f_in, s.kind), s, p.k_steps);
  const RnnNodes n = record_rnn(tape, xs, p, activation);
  return tape.value(n.output).col(0);
}

double rnn_loss(const FlowSignal& f_true, const RnnParams& p, const ShiftOperator& s,
                const MaskSet& mask, std::vector<nn::Matrix>* grads) {
  check_shift(f_true, s);
  p.validate();
  if (mask.artificial.empty()) fail(ErrorCode::kEmptyMask, "rnn_loss needs |Psi| > 0");
  mask.validate(static_cast<int>(f_true.size()));

  const FlowSignal target = signal_for_shift(f_true, s.kind);
  std::vector<char> hidden(static_cast<std::size_t>(f_true.size()), 0);
  for (int e : mask.artificial) hidden[e] = 1;
  FlowSignal x0 = FlowSignal::Zero(f_true.size());
  for (int e : mask.observed) {
    if (!hidden[e]) x0[e] = target[e];
  }

  nn::Tape tape;
  const RnnNodes n = record_rnn(tape, shifted_inputs(x0, s, p.k_steps), p, Activation::kSoftThreshold);
  const nn::Var loss = tape.masked_mse(n.output, target, mask.artificial);
  if (grads != nullptr) {
    tape.backward(loss);
    *grads = {tape.grad(n.u_row).transpose(), tape.grad(n.V), tape.grad(n.w),
              tape.grad(n.tau_hidden), tape.grad(n.tau_out)};
  }
  return tape.value(loss)(0, 0);
}

namespace {

MaskSet sample_training_mask(const TrainingFlow& flow, int num_edges, double fraction, Rng& rng) {
  MaskSet m;
  m.observed = flow.observed.empty() ? MaskSet::all_observed(num_edges).observed : flow.observed;
  const int n_obs = static_cast<int>(m.observed.size());
  if (n_obs == 0) fail(ErrorCode::kEmptyMask, "training flow has no observed edges");
  const int n_mask = std::clamp(static_cast<int>(std::lround(fraction * n_obs)), 1, n_obs);
  for (int i : rng.sample_without_replacement(n_obs, n_mask)) m.artificial.push_back(m.observed[i]);
  return m;
}

}  // namespace

RnnTrainResult train_interpolator(std::span<const TrainingFlow> data, const ShiftOperator& s,
                                  const RnnTrainConfig& config, std::uint64_t seed) {
  if (data.empty()) fail(ErrorCode::kEmptyDataset, "no training flows");
  if (config.epochs < 0) fail(ErrorCode::kConfig, "epochs must be non-negative");
  const int num_edges = s.dim();
  for (const auto& flow : data) check_shift(flow.values, s);

  // Independent streams keep the mask sequence unaffected by dataset order.
  Rng init_rng(derive_seed(seed, 0));
  Rng order_rng(derive_seed(seed, 1));
  Rng mask_rng(derive_seed(seed, 2));
  Rng valid_rng(derive_seed(seed, 3));

  RnnTrainResult result;
  result.params = RnnParams::initialize(config.f_dim, config.k_steps, init_rng.next_u64());

  std::vector<std::pair<int, MaskSet>> validation;
  for (int i = 0; i < config.validation_masks; ++i) {
    const int idx = i % static_cast<int>(data.size());
    validation.emplace_back(idx, sample_training_mask(data[idx], num_edges, config.mask_fraction, valid_rng));
  }
  auto validation_loss = [&](const RnnParams& p) {
    double total = 0.0;
    for (const auto& [idx, mask] : validation) total += rnn_loss(data[idx].values, p, s, mask);
    return total / static_cast<double>(validation.size());
  };

  RnnParams best = result.params;
  double best_loss = validation.empty() ? 0.0 : validation_loss(best);
  if (!validation.empty()) result.validation_loss.push_back(best_loss);

  nn::Adam adam(nn::AdamConfig{.lr = config.lr});
  std::vector<nn::Matrix> arrays = result.params.to_arrays();
  std::vector<nn::Matrix*> handles;
  for (auto& a : arrays) handles.push_back(&a);

  const int steps = config.steps_per_epoch > 0 ? config.steps_per_epoch : static_cast<int>(data.size());
  std::vector<int> order;
  std::size_t cursor = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    double epoch_total = 0.0;
    for (int step = 0; step < steps; ++step) {
      if (cursor == order.size()) {
        order = order_rng.permutation(static_cast<int>(data.size()));
        cursor = 0;
      }
      const TrainingFlow& flow = data[order[cursor++]];
      const MaskSet mask = sample_training_mask(flow, num_edges, config.mask_fraction, mask_rng);
      const RnnParams current = RnnParams::from_arrays(arrays, config.k_steps);
      std::vector<nn::Matrix> grads;
      epoch_total += rnn_loss(flow.values, current, s, mask, &grads);
      adam.step(handles, grads);
    }
    result.epoch_loss.push_back(epoch_total / steps);
    const RnnParams current = RnnParams::from_arrays(arrays, config.k_steps);
    if (!validation.empty()) {
      const double loss = validation_loss(current);
      result.validation_loss.push_back(loss);
      if (loss < best_loss) {
        best_loss = loss;
        best = current;
        result.best_epoch = epoch;
      }
    } else {
      best = current;
      result.best_epoch = epoch;
    }
  }
  result.params = best;
  return result;
}

FlowSignal interpolate(const FlowSignal& f_obs, std::span<const int> observed,
                       const ShiftOperator& s, const RnnParams& p) {
  check_shift(f_obs, s);
  const FlowSignal input = signal_for_shift(f_obs, s.kind);
  const FlowSignal x0 = restrict_to(input, observed);
  FlowSignal out = rnn_forward(x0, s, p);
  for (int e : observed) out[e] = input[e];
  return out;
}

}  // namespace hodgeflow
