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

#include "hodgeflow/agnn.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "hodgeflow/error.hpp"
#include "hodgeflow/hodge.hpp"
#include "hodgeflow/optim.hpp"
#include "hodgeflow/random.hpp"
#include "hodgeflow/rnn.hpp"

namespace hodgeflow {

void SelectionMatrix::validate(int dim) const {
  std::vector<char> seen(static_cast<std::size_t>(dim), 0);
  for (int i : indices) {
    if (i < 0 || i >= dim) fail(ErrorCode::kDimensionMismatch, "selected index out of range");
    if (seen[i]) fail(ErrorCode::kInvalidArgument, "selected index repeated");
    seen[i] = 1;
  }
}

namespace {

SelectionMatrix top_k(std::vector<int> score, int k) {
  std::vector<int> order(score.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return score[a] > score[b]; });
  if (k < 0 || k > static_cast<int>(order.size())) {
    fail(ErrorCode::kInvalidArgument, "cannot select " + std::to_string(k) + " of " +
                                          std::to_string(order.size()));
  }
  order.resize(static_cast<std::size_t>(k));
  return SelectionMatrix{order};
}

}  // namespace

SelectionMatrix select_top_degree_edges(const Graph& g, int k) {
  const auto deg = g.degrees();
  std::vector<int> score;
  for (const auto& e : g.edges()) score.push_back(deg[e.tail] + deg[e.head]);
  return top_k(std::move(score), k);
}

SelectionMatrix select_top_degree_nodes(const Graph& g, int k) { return top_k(g.degrees(), k); }

AggSequence aggregate_sample(const Eigen::VectorXd& x, const ShiftOperator& s,
                             const SelectionMatrix& c, int depth) {
  if (x.size() != s.dim()) {
    fail(ErrorCode::kDimensionMismatch, "signal length " + std::to_string(x.size()) +
                                            " vs shift dimension " + std::to_string(s.dim()));
  }
  c.validate(s.dim());
  if (depth < 0) fail(ErrorCode::kConfig, "aggregation depth must be non-negative");
  const int shifts = std::max(0, std::min(s.dim() - 1, depth));
  AggSequence g(c.size(), shifts + 1);
  Eigen::VectorXd cur = signal_for_shift(x, s.kind);
  for (int j = 0; j <= shifts; ++j) {
    if (j > 0) cur = s.apply_normalized(cur);
    for (int i = 0; i < c.size(); ++i) g(i, j) = cur[c.indices[i]];
  }
  return g;
}

std::vector<ConvSpec> default_conv_specs() {
  return {ConvSpec{32, 8, 4, 0}, ConvSpec{64, 8, 4, 0}};
}

CnnParams CnnParams::initialize(int in_channels, int num_classes, std::span<const ConvSpec> specs,
                                std::uint64_t seed) {
  if (in_channels < 1 || num_classes < 1) {
    fail(ErrorCode::kShapeChainBroken, "CNN needs positive input channels and classes");
  }
  Rng rng(seed);
  auto gaussian = [&](Eigen::Index r, Eigen::Index c) {
    nn::Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = 0.1 * rng.normal();
    }
    return m;
  };
  CnnParams p;
  int channels = in_channels;
  for (const auto& spec : specs) {
    if (spec.out_channels < 1 || spec.kernel < 1 || spec.stride < 1 || spec.pool < 0) {
      fail(ErrorCode::kShapeChainBroken, "invalid convolution spec");
    }
    ConvLayer layer;
    layer.weight = gaussian(spec.out_channels, static_cast<Eigen::Index>(channels) * spec.kernel);
    layer.bias = Eigen::VectorXd::Zero(spec.out_channels);
    layer.kernel = spec.kernel;
    layer.stride = spec.stride;
    layer.pool = spec.pool;
    p.convs.push_back(std::move(layer));
    channels = spec.out_channels;
  }
  p.fc_weight = gaussian(num_classes, channels);
  p.fc_bias = Eigen::VectorXd::Zero(num_classes);
  return p;
}

std::vector<nn::Matrix> CnnParams::to_arrays() const {
  std::vector<nn::Matrix> out;
  for (const auto& layer : convs) {
    out.push_back(layer.weight);
    out.push_back(layer.bias);
  }
  out.push_back(fc_weight);
  out.push_back(fc_bias);
  return out;
}

void CnnParams::assign_arrays(std::span<const nn::Matrix> arrays) {
  if (arrays.size() != 2 * convs.size() + 2) fail(ErrorCode::kShapeMismatch, "CNN array count");
  std::size_t i = 0;
  for (auto& layer : convs) {
    layer.weight = arrays[i++];
    layer.bias = arrays[i++].col(0);
  }
  fc_weight = arrays[i++];
  fc_bias = arrays[i++].col(0);
}

Checkpoint CnnParams::to_checkpoint() const {
  Checkpoint c;
  c.model = "hodge-agnn";
  for (std::size_t l = 0; l < convs.size(); ++l) {
    const auto& layer = convs[l];
    const std::string prefix = "conv" + std::to_string(l) + ".";
    c.arrays.push_back({prefix + "weight", layer.weight});
    c.arrays.push_back({prefix + "bias", layer.bias});
    nn::Matrix geom(1, 3);
    geom << layer.kernel, layer.stride, layer.pool;
    c.arrays.push_back({prefix + "geometry", geom});
  }
  c.arrays.push_back({"fc.weight", fc_weight});
  c.arrays.push_back({"fc.bias", fc_bias});
  c.arrays.push_back({"input_scale", nn::Matrix::Constant(1, 1, input_scale)});
  return c;
}

CnnParams CnnParams::from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.model != "hodge-agnn") fail(ErrorCode::kIo, "checkpoint holds '" + ckpt.model + "'");
  CnnParams p;
  for (int l = 0;; ++l) {
    const std::string prefix = "conv" + std::to_string(l) + ".";
    const bool present = std::any_of(ckpt.arrays.begin(), ckpt.arrays.end(),
                                     [&](const NamedArray& a) { return a.name == prefix + "weight"; });
    if (!present) break;
    ConvLayer layer;
    layer.weight = ckpt.get(prefix + "weight");
    layer.bias = ckpt.get(prefix + "bias").col(0);
    const auto& geom = ckpt.get(prefix + "geometry");
    layer.kernel = static_cast<int>(geom(0, 0));
    layer.stride = static_cast<int>(geom(0, 1));
    layer.pool = static_cast<int>(geom(0, 2));
    p.convs.push_back(std::move(layer));
  }
  p.fc_weight = ckpt.get("fc.weight");
  p.fc_bias = ckpt.get("fc.bias").col(0);
  p.input_scale = ckpt.get("input_scale")(0, 0);
  return p;
}

namespace {

struct CnnNodes {
  std::vector<nn::Var> params;
  nn::Var logits;
};

CnnNodes record_cnn(nn::Tape& tape, const AggSequence& g_seq, const CnnParams& p, bool trainable) {
  if (p.convs.empty()) fail(ErrorCode::kShapeChainBroken, "CNN has no convolution layers");
  if (g_seq.rows() != p.in_channels()) {
    fail(ErrorCode::kShapeChainBroken, "sequence has " + std::to_string(g_seq.rows()) +
                                           " channels, CNN expects " + std::to_string(p.in_channels()));
  }
  CnnNodes n;
  auto param = [&](nn::Matrix m) {
    const nn::Var v = trainable ? tape.leaf(std::move(m)) : tape.constant(std::move(m));
    n.params.push_back(v);
    return v;
  };
  nn::Var x = tape.constant(p.input_scale * g_seq);
  for (const auto& layer : p.convs) {
    const nn::Var w = param(layer.weight);
    const nn::Var b = param(layer.bias);
    x = tape.relu(tape.conv1d(x, w, b, layer.kernel, layer.stride));
    if (layer.pool > 0) x = tape.max_pool(x, layer.pool);
  }
  x = tape.flatten(tape.max_pool(x, 0));
  const nn::Var fw = param(p.fc_weight);
  const nn::Var fb = param(p.fc_bias);
  n.logits = tape.affine(x, fw, fb);
  return n;
}

}  // namespace

Eigen::VectorXd agnn_forward(const AggSequence& g_seq, const CnnParams& p) {
  nn::Tape tape;
  const CnnNodes n = record_cnn(tape, g_seq, p, false);
  return nn::softmax(tape.value(n.logits).col(0));
}

int agnn_predict(const AggSequence& g_seq, const CnnParams& p) {
  const Eigen::VectorXd prob = agnn_forward(g_seq, p);
  Eigen::Index best = 0;
  prob.maxCoeff(&best);
  return static_cast<int>(best);
}

double agnn_loss(const AggSequence& g_seq, int label, const CnnParams& p,
                 std::vector<nn::Matrix>* grads) {
  nn::Tape tape;
  const CnnNodes n = record_cnn(tape, g_seq, p, grads != nullptr);
  const nn::Var loss = tape.softmax_cross_entropy(n.logits, label);
  if (grads != nullptr) {
    tape.backward(loss);
    grads->clear();
    for (const nn::Var v : n.params) grads->push_back(tape.grad(v));
  }
  return tape.value(loss)(0, 0);
}

CnnParams rotate_params(const CnnParams& p, const FlipMatrix& flip, const SelectionMatrix& c) {
  if (p.convs.empty()) fail(ErrorCode::kShapeChainBroken, "CNN has no convolution layers");
  if (c.size() != p.in_channels()) {
    fail(ErrorCode::kShapeChainBroken, "selection size does not match CNN input channels");
  }
  c.validate(flip.size());
  CnnParams out = p;
  auto& w = out.convs.front().weight;
  const int kernel = out.convs.front().kernel;
  for (int i = 0; i < c.size(); ++i) {
    if (flip.sign(c.indices[i]) < 0) w.middleCols(static_cast<Eigen::Index>(i) * kernel, kernel) *= -1.0;
  }
  return out;
}

ClassifierTrainResult train_classifier(const LabeledSignals& train, const LabeledSignals& test,
                                       const ShiftOperator& s, const SelectionMatrix& c,
                                       const ClassifierTrainConfig& config, std::uint64_t seed) {
  if (train.signals.empty()) fail(ErrorCode::kEmptyDataset, "no training signals");
  if (train.labels.size() != train.signals.size() || test.labels.size() != test.signals.size()) {
    fail(ErrorCode::kLengthMismatch, "signals and labels differ in count");
  }
  const int classes = train.num_classes;
  for (const auto* set : {&train, &test}) {
    for (int label : set->labels) {
      if (label < 0 || label >= classes) {
        fail(ErrorCode::kLabelOutOfRange, "label " + std::to_string(label) + " outside [0," +
                                              std::to_string(classes) + ")");
      }
    }
  }
  if (config.batch_size < 1 || config.epochs < 0) fail(ErrorCode::kConfig, "bad batch size or epochs");

  auto aggregate_all = [&](const LabeledSignals& set) {
    std::vector<AggSequence> out;
    out.reserve(set.signals.size());
    for (const auto& x : set.signals) out.push_back(aggregate_sample(x, s, c, config.agg_depth));
    return out;
  };
  const auto train_seq = aggregate_all(train);
  const auto test_seq = aggregate_all(test);

  ClassifierTrainResult result;
  result.params = CnnParams::initialize(c.size(), classes, config.convs, derive_seed(seed, 0));
  // Fixed input normalization: unit RMS over the training sequences.
  double sq = 0.0;
  double count = 0.0;
  for (const auto& g : train_seq) {
    sq += g.squaredNorm();
    count += static_cast<double>(g.size());
  }
  const double rms = count > 0 ? std::sqrt(sq / count) : 0.0;
  result.params.input_scale = rms > 0.0 ? 1.0 / rms : 1.0;

  auto test_accuracy = [&](const CnnParams& p) {
    if (test_seq.empty()) return 0.0;
    int hits = 0;
    for (std::size_t i = 0; i < test_seq.size(); ++i) hits += agnn_predict(test_seq[i], p) == test.labels[i];
    return static_cast<double>(hits) / static_cast<double>(test_seq.size());
  };
  auto train_loss = [&](const CnnParams& p) {
    double total = 0.0;
    for (std::size_t i = 0; i < train_seq.size(); ++i) total += agnn_loss(train_seq[i], train.labels[i], p);
    return total / static_cast<double>(train_seq.size());
  };
  result.history.push_back({0, train_loss(result.params), test_accuracy(result.params)});

  Rng order_rng(derive_seed(seed, 1));
  nn::Adam adam(nn::AdamConfig{.lr = config.lr});
  std::vector<nn::Matrix> arrays = result.params.to_arrays();
  std::vector<nn::Matrix*> handles;
  for (auto& a : arrays) handles.push_back(&a);
  const int n = static_cast<int>(train_seq.size());

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto order = order_rng.permutation(n);
    double epoch_loss = 0.0;
    for (int start = 0; start < n; start += config.batch_size) {
      const int stop = std::min(n, start + config.batch_size);
      std::vector<nn::Matrix> batch_grad;
      for (int k = start; k < stop; ++k) {
        std::vector<nn::Matrix> grads;
        epoch_loss += agnn_loss(train_seq[order[k]], train.labels[order[k]], result.params, &grads);
        if (batch_grad.empty()) {
          batch_grad = std::move(grads);
        } else {
          for (std::size_t i = 0; i < grads.size(); ++i) batch_grad[i] += grads[i];
        }
      }
      for (auto& g : batch_grad) g /= static_cast<double>(stop - start);
      adam.step(handles, batch_grad);
      result.params.assign_arrays(arrays);
    }
    result.history.push_back({epoch, epoch_loss / n, test_accuracy(result.params)});
  }
  return result;
}

Eigen::VectorXd estimate_potentials(const FlowSignal& f, const Graph& g) {
  if (!g.is_connected()) fail(ErrorCode::kDisconnectedGraph, "potential estimation");
  Eigen::VectorXd phi = least_squares_potentials(g, f);
  if (phi.size() > 0) phi.array() -= phi.mean();
  return phi;
}

}  // namespace hodgeflow
