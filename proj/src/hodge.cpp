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

#include "hodgeflow/hodge.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "hodgeflow/error.hpp"
#include "hodgeflow/operators.hpp"

namespace hodgeflow {

Eigen::VectorXd least_squares_potentials(const Graph& g, const FlowSignal& f,
                                         const CgOptions& options) {
  if (f.size() != g.num_edges()) {
    fail(ErrorCode::kDimensionMismatch, "flow length " + std::to_string(f.size()) + " vs " +
                                            std::to_string(g.num_edges()) + " edges");
  }
  const IncidenceMatrix b(g);
  const SparseMatrix l0 = graph_laplacian(g).matrix();
  const Eigen::VectorXd rhs = b.divergence(f);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(g.num_nodes());
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return phi;

  const int cap = options.max_iterations > 0 ? options.max_iterations
                                             : std::max(10 * g.num_edges(), 10);
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  const double target = options.rel_tol * rhs_norm;
  for (int it = 0; it < cap; ++it) {
    const Eigen::VectorXd lp = l0 * p;
    const double alpha = rr / p.dot(lp);
    phi += alpha * p;
    r -= alpha * lp;
    const double rr_next = r.squaredNorm();
    if (std::sqrt(rr_next) <= target) return phi;
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  fail(ErrorCode::kNonConvergence,
       "conjugate gradients stopped at relative residual " +
           std::to_string(std::sqrt(rr) / rhs_norm) + " after " + std::to_string(cap) +
           " iterations");
}

HodgeDecomposition hodge_decompose(const FlowSignal& f, const Graph& g, const CgOptions& options) {
  const Eigen::VectorXd phi = least_squares_potentials(g, f, options);
  HodgeDecomposition out;
  out.gradient = IncidenceMatrix(g).gradient(phi);
  out.cyclic = f - out.gradient;
  return out;
}

Eigen::MatrixXd spectral_embedding(const Graph& g, int dim) {
  const int n = g.num_nodes();
  if (dim < 1) fail(ErrorCode::kInvalidArgument, "embedding dimension must be positive");
  if (dim >= n) {
    fail(ErrorCode::kDimTooLarge,
         "embedding dimension " + std::to_string(dim) + " needs at least " +
             std::to_string(dim + 1) + " nodes, graph has " + std::to_string(n));
  }
  if (!g.is_connected()) fail(ErrorCode::kDisconnectedGraph, "spectral embedding");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(graph_laplacian(g).to_dense());
  // Eigenvalues ascend; index 0 is the constant vector of a connected graph.
  Eigen::MatrixXd coords = solver.eigenvectors().middleCols(1, dim);
  for (int c = 0; c < dim; ++c) {
    for (int i = 0; i < n; ++i) {
      if (std::abs(coords(i, c)) > 1e-12) {
        if (coords(i, c) < 0) coords.col(c) *= -1.0;
        break;
      }
    }
  }
  return coords;
}

}  // namespace hodgeflow
