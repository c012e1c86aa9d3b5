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

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace hodgeflow {

// A real value per oriented edge, aligned with Graph edge indexing.
using FlowSignal = Eigen::VectorXd;

struct Edge {
  int tail = 0;
  int head = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

class FlipMatrix;

// Simple undirected graph with a reference orientation per edge. The order of
// edges fixes the edge indexing of every edge-space operator and signal.
class Graph {
 public:
  Graph() = default;

  // Rejects self-loops, repeated unordered pairs and out-of-range ids.
  static Graph build(std::span<const std::pair<int, int>> edge_list, int num_nodes);
  static Graph build(std::span<const Edge> edges, int num_nodes);

  int num_nodes() const { return num_nodes_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }

  std::vector<int> degrees() const;
  // incident_edges()[v] lists edge indices touching v in increasing order.
  std::vector<std::vector<int>> incident_edges() const;
  // Component id per node, numbered in order of first appearance.
  std::vector<int> components() const;
  bool is_connected() const;

  // Same undirected graph with the reference orientation of every edge whose
  // flip sign is -1 reversed.
  Graph reoriented(const FlipMatrix& flip) const;

 private:
  Graph(int num_nodes, std::vector<Edge> edges)
      : num_nodes_(num_nodes), edges_(std::move(edges)) {}

  int num_nodes_ = 0;
  std::vector<Edge> edges_;
};

// Diagonal +-1 reorientation of edge space. Self-inverse.
class FlipMatrix {
 public:
  FlipMatrix() = default;
  explicit FlipMatrix(std::vector<int> signs);

  static FlipMatrix identity(int num_edges);

  int size() const { return static_cast<int>(signs_.size()); }
  int sign(int e) const { return signs_[static_cast<std::size_t>(e)]; }
  std::span<const int> signs() const { return signs_; }

 private:
  std::vector<int> signs_;
};

FlowSignal apply_flip(const FlipMatrix& flip, const FlowSignal& f);

}  // namespace hodgeflow
