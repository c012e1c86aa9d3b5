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

#include <filesystem>
#include <string>
#include <vector>

#include "hodgeflow/autodiff.hpp"

namespace hodgeflow {

struct NamedArray {
  std::string name;
  nn::Matrix value;
};

// JSON parameter checkpoint:
//   {"format": "hodgeflow-checkpoint", "version": 1, "model": <kind>,
//    "arrays": [{"name": ..., "rows": r, "cols": c, "data": [row-major values]}]}
struct Checkpoint {
  std::string model;
  std::vector<NamedArray> arrays;

  const nn::Matrix& get(const std::string& name) const;
};

inline constexpr int kCheckpointVersion = 1;

std::string checkpoint_to_json(const Checkpoint& ckpt);
Checkpoint checkpoint_from_json(const std::string& text);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace hodgeflow
