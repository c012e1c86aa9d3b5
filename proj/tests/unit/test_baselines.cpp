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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fixtures.hpp"
#include "hodgeflow/baselines.hpp"
#include "hodgeflow/datagen.hpp"
#include "hodgeflow/hodge.hpp"
#include "hodgeflow/operators.hpp"

using namespace hodgeflow;
using hodgeflow::testing::error_code_of;
using hodgeflow::testing::max_abs;

namespace {

std::vector<int> all_but(int n, const std::vector<int>& hidden) {
  std::vector<int> out;
  for (int e = 0; e < n; ++e) {
    if (std::find(hidden.begin(), hidden.end(), e) == hidden.end()) out.push_back(e);
  }
  return out;
}

std::vector<int> random_observed(Rng& rng, int n, double keep) {
  std::vector<int> out;
  for (int e = 0; e < n; ++e) {
    if (rng.uniform() < keep) out.push_back(e);
  }
  if (out.empty()) out.push_back(0);
  return out;
}

double divergence_norm(const Graph& g, const FlowSignal& f) { return (incidence_matrix(g).matrix() * f).norm(); }

}  // namespace

TEST_CASE("convopt examples") {
  const Graph g = hodgeflow::testing::triangle();
  const std::vector<int> obs = {0, 1};
  const FlowSignal out = convopt_interpolate(Eigen::Vector3d(1, 1, 0), obs, g, {.ridge = 0.0});
  CHECK(std::abs(out[2] + 1.0) < 1e-12);
  CHECK(out[0] == 1.0);
  CHECK(out[1] == 1.0);

  const std::vector<int> everything = {0, 1, 2};
  const Eigen::Vector3d f(0.3, -2, 5);
  CHECK(convopt_interpolate(f, everything, g, {.ridge = 0.0}) == FlowSignal(f));

  CHECK(error_code_of([&] { convopt_interpolate(f, std::vector<int>{}, g); }) == ErrorCode::kEmptyObservation);
  CHECK(error_code_of([&] { convopt_interpolate(Eigen::Vector2d(1, 1), obs, g); }) == ErrorCode::kDimensionMismatch);
  CHECK(error_code_of([&] { convopt_interpolate(f, obs, g, {.ridge = -1.0}); }) == ErrorCode::kConfig);
}

TEST_CASE("convopt recovers a cyclic flow with one edge hidden") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = hodgeflow::testing::random_connected_graph(rng, 5, 20, 0.4);
    if (g.num_edges() < g.num_nodes() + 1) continue;
    const FlowSignal f = hodge_decompose(hodgeflow::testing::random_vector(rng, g.num_edges()), g).cyclic;
    for (int hidden = 0; hidden < g.num_edges(); ++hidden) {
      const FlowSignal out = convopt_interpolate(f, all_but(g.num_edges(), {hidden}), g, {.ridge = 0.0});
      // A bridge carries no cyclic flow and is recovered as zero either way.
      CHECK(std::abs(out[hidden] - f[hidden]) < 1e-8);
    }
  }
}

TEST_CASE("convopt minimizes divergence among feasible fills") {
  Rng rng(2);
  int checked = 0;
  while (checked < 10) {
    const Graph g = hodgeflow::testing::random_connected_graph(rng, 6, 20, 0.3);
    const std::vector<int> observed = random_observed(rng, g.num_edges(), 0.8);
    const FlowSignal f = hodgeflow::testing::random_vector(rng, g.num_edges());
    const FlowSignal best = convopt_interpolate(f, observed, g, {.ridge = 0.0});
    const double best_div = divergence_norm(g, best);
    for (int k = 0; k < 50; ++k) {
      FlowSignal any = hodgeflow::testing::random_vector(rng, g.num_edges());
      for (int e : observed) any[e] = f[e];
      CHECK(best_div <= divergence_norm(g, any) + 1e-9);
    }
    ++checked;
  }
}

TEST_CASE("convopt is orientation equivariant") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = hodgeflow::testing::random_connected_graph(rng, 5, 20, 0.3);
    const FlipMatrix flip = hodgeflow::testing::random_flip(rng, g.num_edges());
    const std::vector<int> observed = random_observed(rng, g.num_edges(), 0.7);
    const FlowSignal f = hodgeflow::testing::random_vector(rng, g.num_edges());
    const FlowSignal a = apply_flip(flip, convopt_interpolate(f, observed, g));
    const FlowSignal b = convopt_interpolate(apply_flip(flip, f), observed, g.reoriented(flip));
    CHECK(max_abs(a - b) < 1e-9);
  }
}

TEST_CASE("convopt falls back when the hidden edges close a cycle") {
  const Graph g = hodgeflow::testing::make_graph({{0, 1}, {1, 2}, {0, 2}, {2, 3}}, 4);
  const std::vector<int> observed = {3};
  const FlowSignal out = convopt_interpolate(Eigen::Vector4d(0, 0, 0, 2), observed, g, {.ridge = 0.0});
  CHECK(out.allFinite());
  CHECK(out[3] == 2.0);
  // The hidden triangle cannot cancel the divergence at node 3; filling it
  // must not make things worse than zeros.
  CHECK(divergence_norm(g, out) <= divergence_norm(g, Eigen::Vector4d(0, 0, 0, 2)) + 1e-9);
}

TEST_CASE("kriging examples") {
  SUBCASE("coincident midpoint reproduces the observation") {
    // Path 0..5 plus chord (1,4). The reflection i -> 5 - i is a symmetry and
    // the Fiedler vector is antisymmetric, so edges (2,3) and (1,4) both sit at 0.
    const Graph g = hodgeflow::testing::make_graph({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 4}}, 6);
    const Eigen::MatrixXd coords = spectral_embedding(g, 1);
    REQUIRE(std::abs(coords(2, 0) + coords(3, 0)) < 1e-9);
    REQUIRE(std::abs(coords(1, 0) + coords(4, 0)) < 1e-9);
    FlowSignal f(6);
    f << 0.5, 1.5, 4.0, -0.7, 2.2, 9.9;
    const std::vector<int> observed = {0, 1, 2, 3, 4};
    const KrigingConfig cfg{.embed_dim = 1, .noise_floor = 1e-12};
    CHECK(std::abs(kriging_interpolate(f, observed, g, cfg)[5] - 4.0) < 1e-6);
  }
  SUBCASE("constant field") {
    Rng rng(4);
    const Graph g = hodgeflow::testing::random_connected_graph(rng, 8, 15, 0.3);
    FlowSignal f = FlowSignal::Constant(g.num_edges(), -1.75);
    const std::vector<int> observed = random_observed(rng, g.num_edges(), 0.6);
    const FlowSignal out = kriging_interpolate(f, observed, g);
    CHECK(max_abs(out - FlowSignal::Constant(g.num_edges(), 1.75)) < 1e-6);
  }
  SUBCASE("equidistant triangle") {
    const Graph g = hodgeflow::testing::triangle();
    const std::vector<int> observed = {0, 1};
    CHECK(std::abs(kriging_interpolate(Eigen::Vector3d(1, -3, 0), observed, g)[2] - 2.0) < 1e-6);
  }
  SUBCASE("errors") {
    const std::vector<int> observed = {0};
    CHECK(error_code_of([&] {
            kriging_interpolate(Eigen::Vector2d(1, 1), observed, hodgeflow::testing::make_graph({{0, 1}, {2, 3}}, 4));
          }) == ErrorCode::kDisconnectedGraph);
    CHECK(error_code_of([&] {
            kriging_interpolate(Eigen::Vector3d(1, 1, 1), observed, hodgeflow::testing::triangle(), {.noise_floor = 0.0});
          }) == ErrorCode::kConfig);
  }
}

TEST_CASE("kriging ignores orientation") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = hodgeflow::testing::random_connected_graph(rng, 6, 20, 0.3);
    const FlipMatrix flip = hodgeflow::testing::random_flip(rng, g.num_edges());
    const std::vector<int> observed = random_observed(rng, g.num_edges(), 0.7);
    const FlowSignal f = hodgeflow::testing::random_vector(rng, g.num_edges());
    const FlowSignal a = kriging_interpolate(f, observed, g);
    const FlowSignal b = kriging_interpolate(apply_flip(flip, f), observed, g.reoriented(flip));
    CHECK(a == b);
  }
}
