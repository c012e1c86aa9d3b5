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

#include "hodgeflow/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hodgeflow/error.hpp"
#include "hodgeflow/random.hpp"

namespace hodgeflow {

namespace {

using Triplet = Eigen::Triplet<double>;

SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

SparseSymMatrix::SparseSymMatrix(SparseMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    fail(ErrorCode::kDimensionMismatch, "symmetric matrix must be square");
  }
  const SparseMatrix diff = m_ - SparseMatrix(m_.transpose());
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      if (std::abs(it.value()) > 1e-12) {
        fail(ErrorCode::kInvalidArgument, "matrix is not symmetric");
      }
    }
  }
  m_.makeCompressed();
}

SparseSymMatrix SparseSymMatrix::identity(int dim) {
  SparseMatrix m(dim, dim);
  m.setIdentity();
  return SparseSymMatrix(std::move(m));
}

SparseSymMatrix SparseSymMatrix::zero(int dim) { return SparseSymMatrix(SparseMatrix(dim, dim)); }

Eigen::VectorXd SparseSymMatrix::apply(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) {
    fail(ErrorCode::kDimensionMismatch, "vector length " + std::to_string(x.size()) +
                                            " vs operator dimension " + std::to_string(dim()));
  }
  return m_ * x;
}

SparseSymMatrix SparseSymMatrix::scaled(double factor) const {
  SparseSymMatrix out;
  out.m_ = m_ * factor;
  return out;
}

IncidenceMatrix::IncidenceMatrix(const Graph& g) {
  std::vector<Triplet> t;
  t.reserve(2 * static_cast<std::size_t>(g.num_edges()));
  for (int e = 0; e < g.num_edges(); ++e) {
    t.emplace_back(g.edge(e).tail, e, -1.0);
    t.emplace_back(g.edge(e).head, e, 1.0);
  }
  b_ = from_triplets(g.num_nodes(), g.num_edges(), t);
}

Eigen::VectorXd IncidenceMatrix::divergence(const FlowSignal& f) const {
  if (f.size() != cols()) fail(ErrorCode::kDimensionMismatch, "flow length vs edge count");
  return b_ * f;
}

FlowSignal IncidenceMatrix::gradient(const Eigen::VectorXd& phi) const {
  if (phi.size() != rows()) fail(ErrorCode::kDimensionMismatch, "potential length vs node count");
  return b_.transpose() * phi;
}

IncidenceMatrix incidence_matrix(const Graph& g) { return IncidenceMatrix(g); }

SparseSymMatrix adjacency_matrix(const Graph& g) {
  std::vector<Triplet> t;
  for (const auto& e : g.edges()) {
    t.emplace_back(e.tail, e.head, 1.0);
    t.emplace_back(e.head, e.tail, 1.0);
  }
  return SparseSymMatrix(from_triplets(g.num_nodes(), g.num_nodes(), t));
}

SparseSymMatrix graph_laplacian(const Graph& g) {
  std::vector<Triplet> t;
  const auto deg = g.degrees();
  for (int v = 0; v < g.num_nodes(); ++v) {
    if (deg[v] > 0) t.emplace_back(v, v, static_cast<double>(deg[v]));
  }
  for (const auto& e : g.edges()) {
    t.emplace_back(e.tail, e.head, -1.0);
    t.emplace_back(e.head, e.tail, -1.0);
  }
  return SparseSymMatrix(from_triplets(g.num_nodes(), g.num_nodes(), t));
}

SparseSymMatrix hodge_laplacian(const Graph& g) {
  // [B^T B]_{ij} = sum over shared endpoints of the product of their signs.
  const int n_edges = g.num_edges();
  std::vector<Triplet> t;
  const auto inc = g.incident_edges();
  auto sign_at = [&](int e, int v) { return g.edge(e).head == v ? 1.0 : -1.0; };
  for (int e = 0; e < n_edges; ++e) t.emplace_back(e, e, 2.0);
  for (int v = 0; v < g.num_nodes(); ++v) {
    const auto& es = inc[v];
    for (std::size_t a = 0; a < es.size(); ++a) {
      for (std::size_t b = a + 1; b < es.size(); ++b) {
        const double val = sign_at(es[a], v) * sign_at(es[b], v);
        t.emplace_back(es[a], es[b], val);
        t.emplace_back(es[b], es[a], val);
      }
    }
  }
  return SparseSymMatrix(from_triplets(n_edges, n_edges, t));
}

SparseSymMatrix linegraph_laplacian(const Graph& g) {
  const int n_edges = g.num_edges();
  std::vector<Triplet> t;
  std::vector<double> deg(static_cast<std::size_t>(n_edges), 0.0);
  const auto inc = g.incident_edges();
  for (int v = 0; v < g.num_nodes(); ++v) {
    const auto& es = inc[v];
    for (std::size_t a = 0; a < es.size(); ++a) {
      for (std::size_t b = a + 1; b < es.size(); ++b) {
        t.emplace_back(es[a], es[b], -1.0);
        t.emplace_back(es[b], es[a], -1.0);
        deg[es[a]] += 1.0;
        deg[es[b]] += 1.0;
      }
    }
  }
  for (int e = 0; e < n_edges; ++e) {
    if (deg[e] > 0) t.emplace_back(e, e, deg[e]);
  }
  return SparseSymMatrix(from_triplets(n_edges, n_edges, t));
}

double max_eigenvalue(const SparseSymMatrix& m, const PowerIterationOptions& options) {
  const int n = m.dim();
  if (n == 0 || m.matrix().nonZeros() == 0 ||
      m.matrix().coeffs().cwiseAbs().maxCoeff() == 0.0) {
    return 0.0;
  }
  Rng rng(options.seed);
  auto random_unit = [&] {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    return Eigen::VectorXd(v / v.norm());
  };

  Eigen::VectorXd v = random_unit();
  double rho = 0.0;
  double rho_prev = 0.0;
  int stalled = 0;
  for (int it = 0; it < options.max_iterations; ++it) {
    Eigen::VectorXd w = m.matrix() * v;
    rho = v.dot(w);
    const double w_norm = w.norm();
    if (w_norm == 0.0) {
      // Start landed in the null space.
      v = random_unit();
      continue;
    }
    const double residual = (w - rho * v).norm();
    if (residual <= options.tol * std::abs(rho)) return rho;
    // A tight cluster at the top of the spectrum stalls the vector but not the
    // Rayleigh quotient, which is then accurate to the cluster width.
    if (it > 0 && std::abs(rho - rho_prev) <= 1e-3 * options.tol * std::abs(rho)) {
      if (++stalled >= 20) return rho;
    } else {
      stalled = 0;
    }
    rho_prev = rho;
    v = w / w_norm;
  }
  fail(ErrorCode::kNonConvergence,
       "power iteration did not converge in " + std::to_string(options.max_iterations) +
           " iterations (estimate " + std::to_string(rho) + ")");
}

double adjacency_max_eigenvalue(const Graph& g, const PowerIterationOptions& options) {
  if (g.num_edges() == 0) return 0.0;
  const auto deg = g.degrees();
  const double shift = *std::max_element(deg.begin(), deg.end());
  SparseMatrix shifted = adjacency_matrix(g).matrix();
  SparseMatrix id(g.num_nodes(), g.num_nodes());
  id.setIdentity();
  shifted += shift * id;
  return max_eigenvalue(SparseSymMatrix(std::move(shifted)), options) - shift;
}

std::string_view shift_kind_name(ShiftKind kind) {
  switch (kind) {
    case ShiftKind::kHodge: return "hodge";
    case ShiftKind::kLinegraph: return "linegraph";
    case ShiftKind::kNode: return "node";
  }
  return "unknown";
}

ShiftKind parse_shift_kind(std::string_view name) {
  if (name == "hodge") return ShiftKind::kHodge;
  if (name == "linegraph") return ShiftKind::kLinegraph;
  if (name == "node") return ShiftKind::kNode;
  fail(ErrorCode::kConfig, "unknown shift kind '" + std::string(name) + "'");
}

Eigen::VectorXd ShiftOperator::apply_normalized(const Eigen::VectorXd& x) const {
  if (!factored) return matrix.apply(x) / lambda_max;
  if (x.size() != dim()) {
    fail(ErrorCode::kDimensionMismatch, "signal length " + std::to_string(x.size()) +
                                            " vs operator dimension " + std::to_string(dim()));
  }
  const Eigen::VectorXd inner = factored->factor * x;
  Eigen::VectorXd out = factored->sign * (factored->factor.transpose() * inner);
  if (factored->diag.size() > 0) out.array() += factored->diag.array() * x.array();
  return out / lambda_max;
}

ShiftOperator make_shift_operator(ShiftKind kind, SparseSymMatrix matrix,
                                  const PowerIterationOptions& options) {
  const double lambda = max_eigenvalue(matrix, options);
  ShiftOperator s;
  s.kind = kind;
  s.matrix = std::move(matrix);
  // An all-zero operator keeps a unit normalizer.
  s.lambda_max = lambda > 0.0 ? lambda * (1.0 + kLambdaInflation) : 1.0;
  return s;
}

ShiftOperator make_shift_operator(const Graph& g, ShiftKind kind,
                                  const PowerIterationOptions& options) {
  const SparseMatrix b = incidence_matrix(g).matrix();
  ShiftOperator s;
  FactoredForm form;
  switch (kind) {
    case ShiftKind::kHodge:
      s = make_shift_operator(kind, hodge_laplacian(g), options);
      form.factor = b;
      break;
    case ShiftKind::kLinegraph: {
      // D_L - A_L = diag(deg(tail) + deg(head)) - |B|^T |B|
      s = make_shift_operator(kind, linegraph_laplacian(g), options);
      form.factor = b.cwiseAbs();
      const auto deg = g.degrees();
      form.diag.resize(g.num_edges());
      for (int e = 0; e < g.num_edges(); ++e) form.diag[e] = deg[g.edge(e).tail] + deg[g.edge(e).head];
      form.sign = -1.0;
      break;
    }
    case ShiftKind::kNode:
      s = make_shift_operator(kind, graph_laplacian(g), options);
      form.factor = b.transpose();
      break;
    default:
      fail(ErrorCode::kInvalidArgument, "bad shift kind");
  }
  s.factored = std::move(form);
  return s;
}

Eigen::VectorXd poly_filter(std::span<const double> coeffs, const SparseSymMatrix& s,
                            const Eigen::VectorXd& x) {
  if (x.size() != s.dim()) {
    fail(ErrorCode::kDimensionMismatch, "signal length " + std::to_string(x.size()) +
                                            " vs operator dimension " + std::to_string(s.dim()));
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd power = x;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (k > 0) power = s.matrix() * power;
    out += coeffs[k] * power;
  }
  return out;
}

Eigen::VectorXd poly_filter(std::span<const double> coeffs, const ShiftOperator& s,
                            const Eigen::VectorXd& x) {
  return poly_filter(coeffs, s.matrix, x);
}

SparseSymMatrix conjugate_flip(const FlipMatrix& flip, const SparseSymMatrix& m) {
  if (flip.size() != m.dim()) {
    fail(ErrorCode::kDimensionMismatch, "flip size " + std::to_string(flip.size()) +
                                            " vs matrix dimension " + std::to_string(m.dim()));
  }
  SparseMatrix out = m.matrix();
  for (int k = 0; k < out.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(out, k); it; ++it) {
      if (flip.sign(static_cast<int>(it.row())) != flip.sign(static_cast<int>(it.col()))) {
        it.valueRef() = -it.value();
      }
    }
  }
  return SparseSymMatrix(std::move(out));
}

ShiftOperator conjugate_flip(const FlipMatrix& flip, const ShiftOperator& s) {
  ShiftOperator out = s;
  out.matrix = conjugate_flip(flip, s.matrix);
  if (out.factored) {
    // F S F keeps the diagonal; the factor picks up the signs column-wise.
    Eigen::VectorXd signs(flip.size());
    for (int e = 0; e < flip.size(); ++e) signs[e] = flip.sign(e);
    out.factored->factor = out.factored->factor * signs.asDiagonal();
  }
  return out;
}

}  // namespace hodgeflow
