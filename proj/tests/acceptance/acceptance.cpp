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

// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "hodgeflow/agnn.hpp"
#include "hodgeflow/experiments.hpp"
#include "hodgeflow/optim.hpp"
#include "hodgeflow/hodge.hpp"
#include "hodgeflow/operators.hpp"
#include "hodgeflow/rnn.hpp"
#include "model_oracles.hpp"

using namespace hodgeflow;
using hodgeflow::testing::max_abs;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome algebraic_suite() {
  Rng rng(1001);
  double worst_lap = 0.0, worst_hodge = 0.0, worst_lambda = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = hodgeflow::testing::random_connected_graph(rng, 3, 30, 0.2);
    const Eigen::MatrixXd b = hodgeflow::testing::dense_incidence(g);
    const SparseSymMatrix l1 = hodge_laplacian(g);
    const SparseSymMatrix l0 = graph_laplacian(g);
    worst_lap = std::max({worst_lap, max_abs(l1.to_dense() - b.transpose() * b), max_abs(l0.to_dense() - b * b.transpose())});

    const FlowSignal f = hodgeflow::testing::random_vector(rng, g.num_edges());
    const HodgeDecomposition h = hodge_decompose(f, g);
    worst_hodge = std::max({worst_hodge, max_abs(h.cyclic + h.gradient - f), std::abs(h.cyclic.dot(h.gradient)),
                            max_abs(b * h.cyclic)});
    worst_lambda = std::max(worst_lambda, std::abs(max_eigenvalue(l1) - max_eigenvalue(l0)));
  }
  const bool pass = worst_lap < 1e-9 && worst_hodge < 1e-9 && worst_lambda < 1e-6;
  return {pass, "laplacians " + fmt("%.1e", worst_lap) + ", hodge " + fmt("%.1e", worst_hodge) + ", lambda gap " +
                    fmt("%.1e", worst_lambda)};
}

Outcome rnn_equivariance() {
  Rng rng(2001);
  double worst = 0.0;
  int relu_failures = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = hodgeflow::testing::random_connected_graph(rng, 4, 25, 0.3);
    const ShiftOperator s = make_shift_operator(g, ShiftKind::kHodge);
    RnnParams p = RnnParams::initialize(8, 6, rng.next_u64());
    p.tau_hidden = 0.05 * rng.uniform();
    p.tau_out = 0.05 * rng.uniform();
    const FlowSignal f = hodgeflow::testing::random_vector(rng, g.num_edges());
    const FlipMatrix flip = hodgeflow::testing::random_flip(rng, g.num_edges());
    const ShiftOperator sf = conjugate_flip(flip, s);
    const FlowSignal ff = apply_flip(flip, f);
    worst = std::max(worst, max_abs(rnn_forward(ff, sf, p) - apply_flip(flip, rnn_forward(f, s, p))));
    const double relu_dev = max_abs(rnn_forward(ff, sf, p, Activation::kRelu) -
                                    apply_flip(flip, rnn_forward(f, s, p, Activation::kRelu)));
    if (relu_dev > 1e-6) ++relu_failures;
  }
  return {worst < 1e-9 && relu_failures > 0,
          "max deviation " + fmt("%.1e", worst) + ", relu control broke " + std::to_string(relu_failures) + "/50"};
}

Outcome agnn_orientation() {
  Rng rng(3001);
  const Graph g = hodgeflow::testing::random_connected_graph(rng, 15, 25, 0.25);
  const ShiftOperator s = make_shift_operator(g, ShiftKind::kHodge);
  const SelectionMatrix c = select_top_degree_edges(g, 5);
  CnnParams p = CnnParams::initialize(5, 5, default_conv_specs(), rng.next_u64());
  for (auto& layer : p.convs) {
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias[i] = 0.1 * rng.normal();
  }
  double worst_inv = 0.0, worst_rot = 0.0;
  for (int i = 0; i < 20; ++i) {
    const FlowSignal f = hodgeflow::testing::random_vector(rng, g.num_edges());
    const Eigen::VectorXd base = agnn_forward(aggregate_sample(f, s, c), p);
    for (int j = 0; j < 10; ++j) {
      const FlipMatrix flip = hodgeflow::testing::random_flip(rng, g.num_edges());
      std::vector<int> outside(flip.signs().begin(), flip.signs().end());
      for (int e : c.indices) outside[e] = 1;
      const FlipMatrix off(outside);
      worst_inv = std::max(
          worst_inv, max_abs(agnn_forward(aggregate_sample(apply_flip(off, f), conjugate_flip(off, s), c), p) - base));
      worst_rot = std::max(worst_rot, max_abs(agnn_forward(aggregate_sample(apply_flip(flip, f), conjugate_flip(flip, s), c),
                                                           rotate_params(p, flip, c)) -
                                              base));
    }
  }
  return {worst_inv < 1e-9 && worst_rot < 1e-9,
          "invariance " + fmt("%.1e", worst_inv) + ", rotated parameters " + fmt("%.1e", worst_rot)};
}

Outcome gradient_fidelity() {
  Rng rng(4001);
  const double h = 1e-5;
  double worst_rnn = 0.0, worst_cnn = 0.0;
  for (int checked = 0; checked < 20;) {
    const Graph g = hodgeflow::testing::random_connected_graph(rng, 5, 15, 0.3);
    const ShiftOperator s = make_shift_operator(g, ShiftKind::kHodge);
    const FlowSignal f = hodgeflow::testing::random_vector(rng, g.num_edges());
    RnnParams p = RnnParams::initialize(4, 3, rng.next_u64());
    p.tau_hidden = 0.01 + 0.02 * rng.uniform();
    p.tau_out = 0.01 + 0.02 * rng.uniform();
    MaskSet m = MaskSet::all_observed(g.num_edges());
    m.artificial = rng.sample_without_replacement(g.num_edges(), 2);
    FlowSignal x0 = f;
    for (int e : m.artificial) x0[e] = 0.0;
    if (hodgeflow::testing::rnn_reference(x0, s.matrix.to_dense() / s.lambda_max, p).kink_margin < 100 * h) continue;
    const int k_steps = p.k_steps;
    nn::Objective fn = [&](std::span<const nn::Matrix> arrays, std::vector<nn::Matrix>* grads) {
      return rnn_loss(f, RnnParams::from_arrays(arrays, k_steps), s, m, grads);
    };
    worst_rnn = std::max(worst_rnn, nn::grad_check(fn, p.to_arrays(), h));
    ++checked;
  }
  const std::vector<ConvSpec> specs = {{6, 3, 2, 0}, {5, 2, 1, 0}};
  for (int checked = 0; checked < 20;) {
    CnnParams p = CnnParams::initialize(3, 4, specs, rng.next_u64());
    for (auto& layer : p.convs) {
      for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias[i] = 0.1 * rng.normal();
    }
    Eigen::MatrixXd x(3, 14);
    for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = rng.normal();
    if (hodgeflow::testing::cnn_reference(x, p).kink_margin < 100 * h) continue;
    const int label = static_cast<int>(rng.uniform_int(4));
    nn::Objective fn = [&](std::span<const nn::Matrix> arrays, std::vector<nn::Matrix>* grads) {
      CnnParams q = p;
      q.assign_arrays(arrays);
      return agnn_loss(x, label, q, grads);
    };
    worst_cnn = std::max(worst_cnn, nn::grad_check(fn, p.to_arrays(), h));
    ++checked;
  }
  return {worst_rnn < 1e-4 && worst_cnn < 1e-4,
          "rnn loss " + fmt("%.1e", worst_rnn) + ", agnn cross-entropy " + fmt("%.1e", worst_cnn)};
}

int train_size_of(const ResultRow& r) {
  const auto at = r.dataset.find("/train=");
  return std::stoi(r.dataset.substr(at + 7));
}

// value[seed][size][method]
using Table = std::map<std::uint64_t, std::map<int, std::map<std::string, double>>>;

Table tabulate(const std::vector<ResultRow>& rows) {
  Table t;
  for (const auto& r : rows) t[r.seed][train_size_of(r)][r.method] = r.value;
  return t;
}

Outcome cyclic_interpolation_trend(double& seconds) {
  Json overrides = {{"methods", {"hodge-rnn", "linegraph-rnn", "convopt"}}};
  const auto start = std::chrono::steady_clock::now();
  const Table t = tabulate(run_interpolation_experiment(resolve_config(default_interpolation_config(), overrides)).rows);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  int good = 0;
  std::string detail;
  for (const auto& [seed, by_size] : t) {
    const auto& last = by_size.rbegin()->second;
    bool ok = last.at("convopt") > last.at("hodge-rnn") && last.at("hodge-rnn") > last.at("linegraph-rnn");
    double prev = -INFINITY;
    for (const auto& [size, m] : by_size) {
      if (m.at("hodge-rnn") < prev - 0.5) ok = false;
      prev = m.at("hodge-rnn");
    }
    good += ok;
    detail += " [" + fmt("%.1f", last.at("convopt")) + "/" + fmt("%.1f", last.at("hodge-rnn")) + "/" +
              fmt("%.1f", last.at("linegraph-rnn")) + "]";
  }
  return {good >= 4 && seconds < 15 * 60,
          std::to_string(good) + "/5 seeds ordered; convopt/hodge/linegraph dB at largest size:" + detail};
}

Outcome gradient_interpolation_trend() {
  Json overrides = {{"family", "gradient"}, {"methods", {"hodge-rnn", "convopt"}}};
  const Table t = tabulate(run_interpolation_experiment(resolve_config(default_interpolation_config(), overrides)).rows);
  int good = 0;
  std::string detail;
  for (const auto& [seed, by_size] : t) {
    bool ok = true;
    for (const auto& [size, m] : by_size) {
      if (size >= 500 && !(m.at("hodge-rnn") > m.at("convopt"))) ok = false;
    }
    good += ok;
    const auto& last = by_size.rbegin()->second;
    detail += " [" + fmt("%.1f", last.at("hodge-rnn")) + "/" + fmt("%.1f", last.at("convopt")) + "]";
  }
  return {good >= 4, std::to_string(good) + "/5 seeds; hodge/convopt dB at largest size:" + detail};
}

Outcome localization_trend(double& seconds) {
  const auto start = std::chrono::steady_clock::now();
  const LocalizationReport r = run_localization_experiment(default_localization_config());
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::map<std::string, std::vector<double>> acc;
  for (const auto& row : r.rows) acc[row.shift].push_back(row.value);
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  const double hodge = mean(acc["hodge"]), line = mean(acc["linegraph"]), node = mean(acc["node"]);
  return {hodge > 0.5 && hodge > line && seconds < 20 * 60,
          "mean accuracy hodge " + fmt("%.4f", hodge) + ", linegraph " + fmt("%.4f", line) + ", node " + fmt("%.4f", node)};
}

Outcome determinism() {
  const Json interp = resolve_config(
      default_interpolation_config(),
      Json{{"seeds", {0, 1}}, {"k", 3}, {"nodes_per", 8}, {"train_sizes", {0, 5}}, {"threads", 2},
           {"rnn", {{"epochs", 2}, {"steps_per_epoch", 10}}}});
  const Json loc = resolve_config(default_localization_config(),
                                  Json{{"seeds", {0, 1}}, {"nodes_per", 10}, {"n_train", 100}, {"n_test", 50},
                                       {"epochs", 2}, {"threads", 2}});
  auto interp_csv = [&] {
    std::ostringstream out;
    write_results_csv(out, run_interpolation_experiment(interp).rows);
    return out.str();
  };
  auto loc_csv = [&] {
    const LocalizationReport r = run_localization_experiment(loc);
    std::ostringstream out;
    write_results_csv(out, r.rows);
    write_curves_csv(out, r.curves);
    return out.str();
  };
  const bool a = interp_csv() == interp_csv();
  const bool b = loc_csv() == loc_csv();
  return {a && b, std::string("interpolation ") + (a ? "identical" : "differs") + ", localization " +
                      (b ? "identical" : "differs")};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("criterion %d: %s  %s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), s);
    std::fflush(stdout);
  };
  report(1, [] {
    const auto start = std::chrono::steady_clock::now();
    Outcome o = algebraic_suite();
    if (std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >= 60) o.pass = false;
    return o;
  });
  report(2, rnn_equivariance);
  report(3, agnn_orientation);
  report(4, gradient_fidelity);
  double t5 = 0.0, t7 = 0.0;
  report(5, [&] { return cyclic_interpolation_trend(t5); });
  report(6, gradient_interpolation_trend);
  report(7, [&] { return localization_trend(t7); });
  report(8, determinism);
  return failures;
}
