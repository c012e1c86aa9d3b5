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
#include <optional>
#include <span>
#include <string_view>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hodgeflow/graph.hpp"

namespace hodgeflow {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Square sparse matrix that is symmetric within 1e-12. Both triangles are
// stored so products need no special handling.
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;
  explicit SparseSymMatrix(SparseMatrix m);

  static SparseSymMatrix identity(int dim);
  static SparseSymMatrix zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const SparseMatrix& matrix() const { return m_; }
  double coeff(int i, int j) const { return m_.coeff(i, j); }
  Eigen::MatrixXd to_dense() const { return Eigen::MatrixXd(m_); }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  SparseSymMatrix scaled(double factor) const;

 private:
  SparseMatrix m_;
};

// N x E, column e holds -1 at tail(e) and +1 at head(e).
class IncidenceMatrix {
 public:
  explicit IncidenceMatrix(const Graph& g);

  int rows() const { return static_cast<int>(b_.rows()); }
  int cols() const { return static_cast<int>(b_.cols()); }
  const SparseMatrix& matrix() const { return b_; }
  double coeff(int node, int edge) const { return b_.coeff(node, edge); }
  Eigen::MatrixXd to_dense() const { return Eigen::MatrixXd(b_); }

  // B f: net inflow at each node.
  Eigen::VectorXd divergence(const FlowSignal& f) const;
  // B^T phi: flow induced by node potentials.
  FlowSignal gradient(const Eigen::VectorXd& phi) const;

 private:
  SparseMatrix b_;
};

IncidenceMatrix incidence_matrix(const Graph& g);
SparseSymMatrix adjacency_matrix(const Graph& g);
// L0 = D - A.
SparseSymMatrix graph_laplacian(const Graph& g);
// L1 = B^T B.
SparseSymMatrix hodge_laplacian(const Graph& g);
// Graph Laplacian of the unweighted linegraph.
SparseSymMatrix linegraph_laplacian(const Graph& g);

struct PowerIterationOptions {
  double tol = 1e-8;
  int max_iterations = 10000;
  std::uint64_t seed = 0x5eedULL;
};

// Largest eigenvalue of a symmetric positive semidefinite matrix by power
// iteration. Returns 0 for the zero matrix.
double max_eigenvalue(const SparseSymMatrix& m, const PowerIterationOptions& options = {});

// Largest eigenvalue of the adjacency matrix (Perron root). The adjacency
// matrix is indefinite, so the iteration runs on A + d_max I.
double adjacency_max_eigenvalue(const Graph& g, const PowerIterationOptions& options = {});

enum class ShiftKind { kHodge, kLinegraph, kNode };

std::string_view shift_kind_name(ShiftKind kind);
ShiftKind parse_shift_kind(std::string_view name);

// Relative margin added to the power-iteration estimate before it is used as
// a normalizer, so that ||S / lambda_max|| <= 1.
inline constexpr double kLambdaInflation = 1e-6;

// S x = diag .* x + sign * F^T (F x). Graph Laplacians carry this form,
// which is far cheaper to apply than the assembled matrix on dense graphs.
struct FactoredForm {
  SparseMatrix factor;
  Eigen::VectorXd diag;
  double sign = 1.0;
};

struct ShiftOperator {
  ShiftKind kind = ShiftKind::kHodge;
  SparseSymMatrix matrix;
  double lambda_max = 1.0;
  std::optional<FactoredForm> factored;  // must agree with `matrix` when set

  int dim() const { return matrix.dim(); }
  // (S / lambda_max) x
  Eigen::VectorXd apply_normalized(const Eigen::VectorXd& x) const;
};

ShiftOperator make_shift_operator(const Graph& g, ShiftKind kind,
                                  const PowerIterationOptions& options = {});
ShiftOperator make_shift_operator(ShiftKind kind, SparseSymMatrix matrix,
                                  const PowerIterationOptions& options = {});

// Sum_k coeffs[k] S^k x, accumulated with k ascending by repeated products.
Eigen::VectorXd poly_filter(std::span<const double> coeffs, const SparseSymMatrix& s,
                            const Eigen::VectorXd& x);
Eigen::VectorXd poly_filter(std::span<const double> coeffs, const ShiftOperator& s,
                            const Eigen::VectorXd& x);

// F M F.
SparseSymMatrix conjugate_flip(const FlipMatrix& flip, const SparseSymMatrix& m);
ShiftOperator conjugate_flip(const FlipMatrix& flip, const ShiftOperator& s);

}  // namespace hodgeflow
