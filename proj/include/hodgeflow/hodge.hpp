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

#include <Eigen/Core>

#include "hodgeflow/graph.hpp"

namespace hodgeflow {

struct CgOptions {
  double rel_tol = 1e-10;
  // Non-positive means 10 * E.
  int max_iterations = 0;
};

// Least-squares node potentials: argmin ||B^T phi - f||_2, found by conjugate
// gradients on L0 phi = B f started from zero, which keeps phi orthogonal to
// the constant vector on every component (the minimum-norm solution).
Eigen::VectorXd least_squares_potentials(const Graph& g, const FlowSignal& f,
                                         const CgOptions& options = {});

struct HodgeDecomposition {
  FlowSignal cyclic;    // in ker(B): divergence-free
  FlowSignal gradient;  // in Im(B^T)
};

HodgeDecomposition hodge_decompose(const FlowSignal& f, const Graph& g,
                                   const CgOptions& options = {});

// Node coordinates from the eigenvectors of L0 with the dim smallest nonzero
// eigenvalues. Each column is unit norm with its first nonzero entry positive.
Eigen::MatrixXd spectral_embedding(const Graph& g, int dim);

}  // namespace hodgeflow
