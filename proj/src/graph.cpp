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

#include "hodgeflow/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "hodgeflow/error.hpp"

namespace hodgeflow {

Graph Graph::build(std::span<const std::pair<int, int>> edge_list, int num_nodes) {
  std::vector<Edge> edges;
  edges.reserve(edge_list.size());
  for (const auto& [tail, head] : edge_list) edges.push_back({tail, head});
  return build(edges, num_nodes);
}

Graph Graph::build(std::span<const Edge> edges, int num_nodes) {
  if (num_nodes < 0) fail(ErrorCode::kInvalidArgument, "negative node count");
  std::set<std::pair<int, int>> seen;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [tail, head] = edges[e];
    if (tail < 0 || tail >= num_nodes || head < 0 || head >= num_nodes) {
      fail(ErrorCode::kNodeIdOutOfRange,
           "edge " + std::to_string(e) + " (" + std::to_string(tail) + "," +
               std::to_string(head) + ") outside [0," + std::to_string(num_nodes) + ")");
    }
    if (tail == head) {
      fail(ErrorCode::kSelfLoop, "edge " + std::to_string(e) + " at node " + std::to_string(tail));
    }
    if (!seen.insert(std::minmax(tail, head)).second) {
      fail(ErrorCode::kDuplicateEdge, "edge " + std::to_string(e) + " {" + std::to_string(tail) +
                                          "," + std::to_string(head) + "} repeated");
    }
  }
  return Graph(num_nodes, std::vector<Edge>(edges.begin(), edges.end()));
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(num_nodes_), 0);
  for (const auto& e : edges_) {
    ++deg[e.tail];
    ++deg[e.head];
  }
  return deg;
}

std::vector<std::vector<int>> Graph::incident_edges() const {
  std::vector<std::vector<int>> inc(static_cast<std::size_t>(num_nodes_));
  for (int e = 0; e < num_edges(); ++e) {
    inc[edges_[e].tail].push_back(e);
    inc[edges_[e].head].push_back(e);
  }
  return inc;
}

std::vector<int> Graph::components() const {
  // Union-find with path halving.
  std::vector<int> parent(static_cast<std::size_t>(num_nodes_));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : edges_) {
    const int a = find(e.tail);
    const int b = find(e.head);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> label(static_cast<std::size_t>(num_nodes_), -1);
  std::vector<int> root_label(static_cast<std::size_t>(num_nodes_), -1);
  int next = 0;
  for (int v = 0; v < num_nodes_; ++v) {
    const int r = find(v);
    if (root_label[r] < 0) root_label[r] = next++;
    label[v] = root_label[r];
  }
  return label;
}

bool Graph::is_connected() const {
  if (num_nodes_ <= 1) return true;
  const auto comp = components();
  return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

Graph Graph::reoriented(const FlipMatrix& flip) const {
  if (flip.size() != num_edges()) {
    fail(ErrorCode::kDimensionMismatch, "flip size " + std::to_string(flip.size()) +
                                            " vs " + std::to_string(num_edges()) + " edges");
  }
  std::vector<Edge> edges = edges_;
  for (int e = 0; e < num_edges(); ++e) {
    if (flip.sign(e) < 0) std::swap(edges[e].tail, edges[e].head);
  }
  return Graph(num_nodes_, std::move(edges));
}

FlipMatrix::FlipMatrix(std::vector<int> signs) : signs_(std::move(signs)) {
  for (int s : signs_) {
    if (s != 1 && s != -1) fail(ErrorCode::kInvalidArgument, "flip signs must be +1 or -1");
  }
}

FlipMatrix FlipMatrix::identity(int num_edges) {
  return FlipMatrix(std::vector<int>(static_cast<std::size_t>(num_edges), 1));
}

FlowSignal apply_flip(const FlipMatrix& flip, const FlowSignal& f) {
  if (flip.size() != f.size()) {
    fail(ErrorCode::kDimensionMismatch, "flip size " + std::to_string(flip.size()) +
                                            " vs signal length " + std::to_string(f.size()));
  }
  FlowSignal out = f;
  for (int e = 0; e < flip.size(); ++e) {
    if (flip.sign(e) < 0) out[e] = -out[e];
  }
  return out;
}

}  // namespace hodgeflow
