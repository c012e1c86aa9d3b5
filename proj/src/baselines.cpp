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

#include "hodgeflow/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>

#include "hodgeflow/error.hpp"
#include "hodgeflow/hodge.hpp"
#include "hodgeflow/operators.hpp"

namespace hodgeflow {

namespace {

void check_observed(const FlowSignal& f, std::span<const int> observed, const Graph& g) {
  if (f.size() != g.num_edges()) {
    fail(ErrorCode::kDimensionMismatch, "flow length " + std::to_string(f.size()) + " vs " +
                                            std::to_string(g.num_edges()) + " edges");
  }
  if (observed.empty()) fail(ErrorCode::kEmptyObservation, "no observed edges");
  for (int e : observed) {
    if (e < 0 || e >= g.num_edges()) fail(ErrorCode::kDimensionMismatch, "observed edge out of range");
  }
}

std::vector<char> observed_flags(std::span<const int> observed, int num_edges) {
  std::vector<char> flags(static_cast<std::size_t>(num_edges), 0);
  for (int e : observed) flags[e] = 1;
  return flags;
}

}  // namespace

FlowSignal convopt_interpolate(const FlowSignal& f_obs, std::span<const int> observed,
                               const Graph& g, const ConvOptConfig& config) {
  check_observed(f_obs, observed, g);
  if (config.ridge < 0) fail(ErrorCode::kConfig, "ridge must be non-negative");
  const int num_edges = g.num_edges();
  const auto is_obs = observed_flags(observed, num_edges);

  FlowSignal out = FlowSignal::Zero(num_edges);
  std::vector<int> unknown;
  std::vector<int> slot(static_cast<std::size_t>(num_edges), -1);
  for (int e = 0; e < num_edges; ++e) {
    if (is_obs[e]) {
      out[e] = f_obs[e];
    } else {
      slot[e] = static_cast<int>(unknown.size());
      unknown.push_back(e);
    }
  }
  if (unknown.empty()) return out;

  // min ||B_U x + B_O f_O||^2 + ridge ||x||^2
  //   <=> (B_U^T B_U + ridge I) x = -B_U^T B_O f_O.
  const SparseMatrix b = incidence_matrix(g).matrix();
  const Eigen::VectorXd fixed_div = b * out;
  std::vector<Eigen::Triplet<double>> t;
  for (int e : unknown) {
    t.emplace_back(g.edge(e).tail, slot[e], -1.0);
    t.emplace_back(g.edge(e).head, slot[e], 1.0);
  }
  SparseMatrix bu(g.num_nodes(), static_cast<Eigen::Index>(unknown.size()));
  bu.setFromTriplets(t.begin(), t.end());
  const SparseMatrix normal = SparseMatrix(bu.transpose()) * bu;
  const Eigen::VectorXd rhs = -(bu.transpose() * fixed_div);

  auto solve = [&](double ridge, Eigen::VectorXd& x) {
    SparseMatrix a = normal;
    SparseMatrix id(a.rows(), a.cols());
    id.setIdentity();
    a += ridge * id;
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(a);
    if (ldlt.info() != Eigen::Success) return false;
    const Eigen::VectorXd d = ldlt.vectorD();
    const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
    if (d.minCoeff() <= 1e-12 * scale) return false;
    x = ldlt.solve(rhs);
    return ldlt.info() == Eigen::Success && x.allFinite();
  };

  Eigen::VectorXd x;
  if (!solve(config.ridge, x)) {
    constexpr double kFallbackRidge = 1e-8;
    std::cerr << "warning: convopt system is singular at ridge " << config.ridge
              << "; retrying with ridge " << kFallbackRidge << "\n";
    if (!solve(std::max(config.ridge, kFallbackRidge), x)) {
      fail(ErrorCode::kNonConvergence, "convopt system could not be factorized");
    }
  }
  for (std::size_t i = 0; i < unknown.size(); ++i) out[unknown[i]] = x[static_cast<Eigen::Index>(i)];
  return out;
}

FlowSignal kriging_interpolate(const FlowSignal& f_obs, std::span<const int> observed,
                               const Graph& g, const KrigingConfig& config) {
  check_observed(f_obs, observed, g);
  if (config.noise_floor <= 0) fail(ErrorCode::kConfig, "noise_floor must be positive");
  if ((config.lengthscale && *config.lengthscale <= 0) || (config.variance && *config.variance <= 0)) {
    fail(ErrorCode::kConfig, "kriging lengthscale and variance must be positive");
  }
  const Eigen::MatrixXd coords = spectral_embedding(g, config.embed_dim);
  const int num_edges = g.num_edges();
  Eigen::MatrixXd mid(num_edges, config.embed_dim);
  for (int e = 0; e < num_edges; ++e) {
    mid.row(e) = 0.5 * (coords.row(g.edge(e).tail) + coords.row(g.edge(e).head));
  }

  const FlowSignal mag = f_obs.cwiseAbs();
  const auto n_obs = static_cast<Eigen::Index>(observed.size());
  Eigen::VectorXd y(n_obs);
  for (Eigen::Index i = 0; i < n_obs; ++i) y[i] = mag[observed[i]];
  const double mean = y.mean();

  double lengthscale = 1.0;
  if (config.lengthscale) {
    lengthscale = *config.lengthscale;
  } else {
    std::vector<double> dists;
    for (Eigen::Index i = 0; i < n_obs; ++i) {
      for (Eigen::Index j = i + 1; j < n_obs; ++j) {
        dists.push_back((mid.row(observed[i]) - mid.row(observed[j])).norm());
      }
    }
    if (!dists.empty()) {
      auto mid_it = dists.begin() + static_cast<std::ptrdiff_t>(dists.size() / 2);
      std::nth_element(dists.begin(), mid_it, dists.end());
      if (*mid_it > 0) lengthscale = *mid_it;
    }
  }
  double variance = 1.0;
  if (config.variance) {
    variance = *config.variance;
  } else if (n_obs > 1) {
    const double v = (y.array() - mean).square().sum() / static_cast<double>(n_obs - 1);
    if (v > 0) variance = v;
  }

  auto kernel = [&](int a, int b) {
    const double d2 = (mid.row(a) - mid.row(b)).squaredNorm();
    return variance * std::exp(-d2 / (2.0 * lengthscale * lengthscale));
  };
  Eigen::MatrixXd k(n_obs, n_obs);
  for (Eigen::Index i = 0; i < n_obs; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) k(i, j) = k(j, i) = kernel(observed[i], observed[j]);
    k(i, i) += config.noise_floor;
  }
  const Eigen::LDLT<Eigen::MatrixXd> factor(k);
  const Eigen::VectorXd alpha = factor.solve(y.array().matrix() - Eigen::VectorXd::Constant(n_obs, mean));

  const auto is_obs = observed_flags(observed, num_edges);
  FlowSignal out(num_edges);
  for (int e = 0; e < num_edges; ++e) {
    if (is_obs[e]) {
      out[e] = mag[e];
      continue;
    }
    double pred = mean;
    for (Eigen::Index i = 0; i < n_obs; ++i) pred += kernel(e, observed[i]) * alpha[i];
    out[e] = pred;
  }
  return out;
}

}  // namespace hodgeflow
