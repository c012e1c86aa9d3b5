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

#include <cmath>
#include <filesystem>
#include <vector>

#include "fixtures.hpp"
#include "hodgeflow/checkpoint.hpp"
#include "hodgeflow/optim.hpp"

using namespace hodgeflow;
using nn::Matrix;
using hodgeflow::testing::error_code_of;

TEST_CASE("first Adam step moves by the learning rate") {
  nn::Adam adam({.lr = 0.1});
  Matrix p = Matrix::Constant(1, 1, 0.0);
  std::vector<Matrix*> params = {&p};
  const std::vector<Matrix> grads = {Matrix::Constant(1, 1, 1.0)};
  adam.step(params, grads);
  CHECK(p(0, 0) == doctest::Approx(-0.1).epsilon(1e-6));
  CHECK(adam.step_count() == 1);
}

TEST_CASE("zero gradients leave parameters unchanged") {
  nn::Adam adam;
  Matrix p = Matrix::Constant(2, 3, 1.5);
  const Matrix before = p;
  std::vector<Matrix*> params = {&p};
  const std::vector<Matrix> grads = {Matrix::Zero(2, 3)};
  for (int i = 0; i < 5; ++i) adam.step(params, grads);
  CHECK(p == before);
}

TEST_CASE("Adam step magnitude stays bounded under a constant gradient") {
  nn::Adam adam({.lr = 0.01});
  Matrix p = Matrix::Zero(1, 1);
  std::vector<Matrix*> params = {&p};
  const std::vector<Matrix> grads = {Matrix::Constant(1, 1, 3.0)};
  adam.step(params, grads);
  const double d1 = std::abs(p(0, 0));
  const double after1 = p(0, 0);
  adam.step(params, grads);
  const double d2 = std::abs(p(0, 0) - after1);
  CHECK(d2 <= d1 * 1.01);
}

TEST_CASE("Adam rejects mismatched shapes") {
  nn::Adam adam;
  Matrix p = Matrix::Zero(2, 2);
  std::vector<Matrix*> params = {&p};
  const std::vector<Matrix> wrong = {Matrix::Zero(3, 2)};
  CHECK(error_code_of([&] { adam.step(params, wrong); }) == ErrorCode::kShapeMismatch);
  const std::vector<Matrix> too_many = {Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
  CHECK(error_code_of([&] { adam.step(params, too_many); }) == ErrorCode::kShapeMismatch);
}

TEST_CASE("Adam trajectories are deterministic") {
  auto run = [] {
    nn::Adam adam;
    Matrix p = Matrix::Constant(3, 1, 1.0);
    std::vector<Matrix*> params = {&p};
    for (int i = 0; i < 100; ++i) {
      const std::vector<Matrix> g = {2.0 * p + Matrix::Constant(3, 1, std::sin(i))};
      adam.step(params, g);
    }
    return p;
  };
  CHECK(run() == run());
}

TEST_CASE("checkpoints round-trip exactly") {
  Rng rng(3);
  Checkpoint c;
  c.model = "test-model";
  Matrix a(2, 3);
  for (int i = 0; i < a.size(); ++i) a.data()[i] = rng.normal() * 1e-3;
  c.arrays.push_back({"a", a});
  c.arrays.push_back({"s", Matrix::Constant(1, 1, 1.0 / 3.0)});

  const std::string text = checkpoint_to_json(c);
  const Checkpoint back = checkpoint_from_json(text);
  CHECK(back.model == "test-model");
  CHECK(back.get("a") == a);
  CHECK(back.get("s")(0, 0) == 1.0 / 3.0);
  CHECK(checkpoint_to_json(back) == text);
  CHECK(error_code_of([&] { back.get("missing"); }) == ErrorCode::kIo);

  const auto path = std::filesystem::temp_directory_path() / "hodgeflow_ckpt_test.json";
  save_checkpoint(path, c);
  CHECK(load_checkpoint(path).get("a") == a);
  std::filesystem::remove(path);

  CHECK(error_code_of([] { checkpoint_from_json("{\"format\":\"other\"}"); }) == ErrorCode::kIo);
  CHECK(error_code_of([] {
          checkpoint_from_json(R"({"format":"hodgeflow-checkpoint","version":2,"model":"x","arrays":[]})");
        }) == ErrorCode::kIo);
  CHECK(error_code_of([] { checkpoint_from_json("not json"); }) == ErrorCode::kIo);
}
