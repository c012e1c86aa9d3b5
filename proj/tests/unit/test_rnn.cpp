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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "model_oracles.hpp"
#include "hodgeflow/baselines.hpp"
#include "hodgeflow/optim.hpp"
#include "hodgeflow/rnn.hpp"

using namespace hodgeflow;
using nn::Matrix;
using hodgeflow::testing::error_code_of;
using hodgeflow::testing::max_abs;

namespace {

RnnParams random_params(Rng& rng, int f_dim, int k) {
  RnnParams p = RnnParams::initialize(f_dim, k, rng.next_u64());
  p.tau_hidden = 0.05 * rng.uniform();
  p.tau_out = 0.05 * rng.uniform();
  return p;
}

}  // namespace

TEST_CASE("zero parameters and zero inputs give zero output") {
  const Graph g = hodgeflow::testing::triangle();
  const ShiftOperator s = make_shift_operator(g, ShiftKind::kHodge);
  const FlowSignal f = Eigen::Vector3d(1, -2, 3);
  CHECK(max_abs(rnn_forward(f, s, RnnParams::zeros(4, 3))) == 0.0);
  Rng rng(1);
  CHECK(max_abs(rnn_forward(FlowSignal::Zero(3), s, random_params(rng, 4, 3))) == 0.0);
  CHECK(error_code_of([&] { rnn_forward(FlowSignal::Zero(2), s, RnnParams::zeros(4, 3)); }) ==
        ErrorCode::kDimensionMismatch);
  const ShiftOperator node = make_shift_operator(g, ShiftKind::kNode);
  CHECK(error_code_of([&] { rnn_forward(f, node, RnnParams::zeros(4, 3)); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("forward pass matches a direct evaluation of the recurrence") {
  Rng rng(2);
  const Graph g = hodgeflow::testing::random_connected_graph(rng, 6, 12, 0.3);
  const ShiftOperator s = make_shift_operator(g, ShiftKind::kHodge);
  const RnnParams p = random_params(rng, 5, 4);
  const FlowSignal f = hodgeflow::testing::random_vector(rng, g.num_edges());
  const Eigen::MatrixXd sn = s.matrix.to_dense() / s.lambda_max;
  Eigen::VectorXd x = f;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(f.size(), 5);
  Eigen::VectorXd o;
  for (int k = 0; k < 4; ++k) {
    x = sn * x;
    h = nn::soft_threshold(Eigen::MatrixXd(x * p.u.transpose() + h * p.V), p.tau_hidden);
    o = nn::soft_threshold(Eigen::MatrixXd(h * p.w), p.tau_out).col(0);
  }
  CHECK(max_abs(rnn_forward(f, s, p) - o) < 1e-12);
}

TEST_CASE("loss examples") {
  const Graph g = hodgeflow::testing::triangle();
  const ShiftOperator s = make_shift_operator(g, ShiftKind::kHodge);
  MaskSet m = MaskSet::all_observed(3);
  m.artificial = {0};
  CHECK(rnn_loss(Eigen::Vector3d(2, 5, 5), RnnParams::zeros(3, 2), s, m) == 4.0);
  m.artificial = {0, 2};
  CHECK(rnn_loss(Eigen::Vector3d(1, 9, 3), RnnParams::zeros(3, 2), s, m) == 5.0);
  m.artificial.clear();
  CHECK(error_code_of([&] { rnn_loss(Eigen::Vector3d(1, 2, 3), RnnParams::zeros(3, 2), s, m); }) ==
        ErrorCode::kEmptyMask);
}

TEST_CASE("orientation equivariance of the soft-threshold network") {
  Rng rng(31);
  int relu_failures = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = hodgeflow::testing::random_connected_graph(rng, 4, 20, 0.3);
    const ShiftOperator s = make_shift_operator(g, ShiftKind::kHodge);
    const RnnParams p = random_params(rng, 6, 5);
    const FlowSignal f = hodgeflow::testing::random_vector(rng, g.num_edges());
    FlipMatrix flip = hodgeflow::testing::random_flip(rng, g.num_edges());
    if (std::all_of(flip.signs().begin(), flip.signs().end(), [](int x) { return x == 1; })) {
      std::vector<int> signs(flip.signs().begin(), flip.signs().end());
      signs[0] = -1;
      flip = FlipMatrix(signs);
    }
    const ShiftOperator sf = conjugate_flip(flip, s);
    const FlowSignal ff = apply_flip(flip, f);
    const double dev = max_abs(rnn_forward(ff, sf, p) - apply_flip(flip, rnn_forward(f, s, p)));
    CHECK(dev < 1e-9);
    const double relu_dev = max_abs(rnn_forward(ff, sf, p, Activation::kRelu) -
                                    apply_flip(flip, rnn_forward(f, s, p, Activation::kRelu)));
    if (relu_dev > 1e-6) ++relu_failures;
  }
  CHECK(relu_failures > 0);
}

TEST_CASE("linegraph variant is invariant to orientation") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = hodgeflow::testing::random_connected_graph(rng, 4, 20, 0.3);
    const ShiftOperator s = make_shift_operator(g, ShiftKind::kLinegraph);
    const RnnParams p = random_params(rng, 4, 3);
    const FlowSignal f = hodgeflow::testing::random_vector(rng, g.num_edges());
    const FlipMatrix flip = hodgeflow::testing::random_flip(rng, g.num_edges());
    const ShiftOperator sf = make_shift_operator(g.reoriented(flip), ShiftKind::kLinegraph);
    CHECK(rnn_forward(apply_flip(flip, f), sf, p) == rnn_forward(f, s, p));
  }
}

TEST_CASE("loss gradients agree with finite differences") {
  Rng rng(51);
  int checked = 0;
  while (checked < 20) {
    const Graph g = hodgeflow::testing::random_connected_graph(rng, 5, 15, 0.3);
    const ShiftOperator s = make_shift_operator(g, ShiftKind::kHodge);
    const FlowSignal f = hodgeflow::testing::random_vector(rng, g.num_edges());
    RnnParams p = random_params(rng, 4, 3);
    p.tau_hidden = 0.01 + 0.02 * rng.uniform();
    p.tau_out = 0.01 + 0.02 * rng.uniform();
    MaskSet m = MaskSet::all_observed(g.num_edges());
    m.artificial = rng.sample_without_replacement(g.num_edges(), 2);
    FlowSignal x0 = f;
    for (int e : m.artificial) x0[e] = 0.0;
    const double h = 1e-5;
    const auto ref = hodgeflow::testing::rnn_reference(x0, s.matrix.to_dense() / s.lambda_max, p);
    if (ref.kink_margin < 100 * h) continue;
    const int k_steps = p.k_steps;
    nn::Objective fn = [&](std::span<const Matrix> arrays, std::vector<Matrix>* grads) {
      return rnn_loss(f, RnnParams::from_arrays(arrays, k_steps), s, m, grads);
    };
    CHECK(nn::grad_check(fn, p.to_arrays(), h) < 1e-4);
    ++checked;
  }
}

TEST_CASE("training") {
  const Graph g = hodgeflow::testing::triangle();
  const ShiftOperator s = make_shift_operator(g, ShiftKind::kHodge);
  RnnTrainConfig cfg;
  cfg.f_dim = 8;
  cfg.k_steps = 3;

  SUBCASE("zero epochs return the initialization") {
    cfg.epochs = 0;
    const std::vector<TrainingFlow> data = {{Eigen::Vector3d(1, 1, -1), {}}};
    const auto r = train_interpolator(data, s, cfg, 9);
    const auto init = RnnParams::initialize(8, 3, Rng(derive_seed(9, 0)).next_u64());
    CHECK(r.params.to_arrays() == init.to_arrays());
    CHECK(error_code_of([&] { train_interpolator({}, s, cfg, 9); }) == ErrorCode::kEmptyDataset);
  }

  SUBCASE("a single cyclic flow: loss goes down") {
    Rng rng(4);
    const Graph big = hodgeflow::testing::random_connected_graph(rng, 15, 15, 0.3);
    const ShiftOperator sb = make_shift_operator(big, ShiftKind::kHodge);
    // Cyclic part of a random flow.
    const FlowSignal raw = hodgeflow::testing::random_vector(rng, big.num_edges());
    const Eigen::MatrixXd b = hodgeflow::testing::dense_incidence(big);
    const FlowSignal cyc = raw - b.transpose() * (b * b.transpose()).completeOrthogonalDecomposition().solve(b * raw);
    cfg.epochs = 5;
    cfg.steps_per_epoch = 100;
    cfg.validation_masks = 0;
    const std::vector<TrainingFlow> data = {{cyc, {}}};
    const auto r = train_interpolator(data, sb, cfg, 1);
    CHECK(r.epoch_loss.back() < r.epoch_loss.front());
  }

  SUBCASE("identical flows follow the same trajectory as one flow") {
    cfg.epochs = 3;
    cfg.steps_per_epoch = 4;
    const TrainingFlow f{Eigen::Vector3d(0.5, 0.5, -0.5), {}};
    const std::vector<TrainingFlow> one = {f};
    const std::vector<TrainingFlow> two = {f, f};
    const auto a = train_interpolator(one, s, cfg, 77);
    const auto b = train_interpolator(two, s, cfg, 77);
    CHECK(a.params.to_arrays() == b.params.to_arrays());
    CHECK(a.epoch_loss == b.epoch_loss);
    // And the run is reproducible.
    CHECK(train_interpolator(one, s, cfg, 77).params.to_arrays() == a.params.to_arrays());
  }

  SUBCASE("triangle completion from cyclic training flows") {
    Rng rng(6);
    std::vector<TrainingFlow> data;
    for (int i = 0; i < 50; ++i) {
      const double t = rng.normal();
      data.push_back({Eigen::Vector3d(t, t, -t), {}});
    }
    cfg.epochs = 20;
    cfg.steps_per_epoch = 200;
    cfg.lr = 1e-2;
    const auto r = train_interpolator(data, s, cfg, 3);
    const std::vector<int> observed = {0, 1};
    const FlowSignal out = interpolate(Eigen::Vector3d(1, 1, 0), observed, s, r.params);
    CHECK(std::abs(out[2] - (-1.0)) < 0.5);
    // ConvOpt oracle gives exactly -1.
    CHECK(convopt_interpolate(Eigen::Vector3d(1, 1, 0), observed, g, {0.0})[2] == doctest::Approx(-1.0));
  }
}

TEST_CASE("interpolate passes observed values through") {
  Rng rng(8);
  const Graph g = hodgeflow::testing::random_connected_graph(rng, 8, 14, 0.3);
  const ShiftOperator s = make_shift_operator(g, ShiftKind::kHodge);
  const RnnParams p = random_params(rng, 4, 3);
  const FlowSignal f = hodgeflow::testing::random_vector(rng, g.num_edges());
  const auto observed = rng.sample_without_replacement(g.num_edges(), g.num_edges() / 2);
  const FlowSignal out = interpolate(f, observed, s, p);
  for (int e : observed) CHECK(out[e] == f[e]);

  std::vector<int> all(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) all[e] = e;
  CHECK(interpolate(f, all, s, p) == f);
  CHECK(interpolate(f, {}, s, p) == rnn_forward(FlowSignal::Zero(f.size()), s, p));

  const ShiftOperator lg = make_shift_operator(g, ShiftKind::kLinegraph);
  const FlowSignal out_lg = interpolate(f, observed, lg, p);
  for (int e : observed) CHECK(out_lg[e] == std::abs(f[e]));
}

TEST_CASE("parameter checkpoints") {
  Rng rng(9);
  const RnnParams p = random_params(rng, 5, 7);
  const RnnParams back = RnnParams::from_checkpoint(checkpoint_from_json(checkpoint_to_json(p.to_checkpoint())));
  CHECK(back.to_arrays() == p.to_arrays());
  CHECK(back.k_steps == 7);
  Checkpoint other;
  other.model = "hodge-agnn";
  CHECK(error_code_of([&] { RnnParams::from_checkpoint(other); }) == ErrorCode::kIo);
}
