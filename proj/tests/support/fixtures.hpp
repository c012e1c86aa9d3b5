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

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hodgeflow/error.hpp"
#include "hodgeflow/graph.hpp"
#include "hodgeflow/random.hpp"

namespace hodgeflow::testing {

// Code of the hodgeflow::Error thrown by fn, or nullopt if it returns.
inline std::optional<ErrorCode> error_code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline Graph triangle() {
  const std::vector<std::pair<int, int>> e = {{0, 1}, {1, 2}, {0, 2}};
  return Graph::build(e, 3);
}

inline Graph make_graph(std::vector<std::pair<int, int>> e, int n) { return Graph::build(e, n); }

// Random spanning tree plus extra edges; random orientation per edge.
inline Graph random_connected_graph(Rng& rng, int n_min, int n_max, double extra_p) {
  const int n = static_cast<int>(rng.uniform_range(n_min, n_max));
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<char>> used(n, std::vector<char>(n, 0));
  auto add = [&](int a, int b) {
    if (a == b || used[a][b]) return;
    used[a][b] = used[b][a] = 1;
    if (rng.uniform() < 0.5) std::swap(a, b);
    edges.emplace_back(a, b);
  };
  const auto order = rng.permutation(n);
  for (int i = 1; i < n; ++i) add(order[i], order[rng.uniform_int(i)]);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (rng.uniform() < extra_p) add(a, b);
    }
  }
  return Graph::build(edges, n);
}

inline Eigen::VectorXd random_vector(Rng& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

inline FlipMatrix random_flip(Rng& rng, int e) {
  std::vector<int> s(e);
  for (auto& x : s) x = rng.uniform() < 0.5 ? -1 : 1;
  return FlipMatrix(s);
}

// Incidence matrix written out directly from the edge list.
inline Eigen::MatrixXd dense_incidence(const Graph& g) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(g.num_nodes(), g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    b(g.edge(e).tail, e) = -1.0;
    b(g.edge(e).head, e) = 1.0;
  }
  return b;
}

inline double dense_max_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return es.eigenvalues().maxCoeff();
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace hodgeflow::testing
