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

#include "hodgeflow/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hodgeflow/error.hpp"

namespace hodgeflow {

const nn::Matrix& Checkpoint::get(const std::string& name) const {
  for (const auto& a : arrays) {
    if (a.name == name) return a.value;
  }
  fail(ErrorCode::kIo, "checkpoint has no array '" + name + "'");
}

std::string checkpoint_to_json(const Checkpoint& ckpt) {
  nlohmann::ordered_json j;
  j["format"] = "hodgeflow-checkpoint";
  j["version"] = kCheckpointVersion;
  j["model"] = ckpt.model;
  j["arrays"] = nlohmann::ordered_json::array();
  for (const auto& a : ckpt.arrays) {
    nlohmann::ordered_json entry;
    entry["name"] = a.name;
    entry["rows"] = a.value.rows();
    entry["cols"] = a.value.cols();
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(a.value.size()));
    for (Eigen::Index r = 0; r < a.value.rows(); ++r) {
      for (Eigen::Index c = 0; c < a.value.cols(); ++c) data.push_back(a.value(r, c));
    }
    entry["data"] = data;
    j["arrays"].push_back(std::move(entry));
  }
  return j.dump(1) + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kIo, std::string("checkpoint is not valid JSON: ") + e.what());
  }
  if (j.value("format", "") != "hodgeflow-checkpoint") fail(ErrorCode::kIo, "not a checkpoint file");
  if (j.value("version", 0) != kCheckpointVersion) {
    fail(ErrorCode::kIo, "unsupported checkpoint version " + j.value("version", nlohmann::json()).dump());
  }
  Checkpoint ckpt;
  ckpt.model = j.value("model", "");
  for (const auto& entry : j.at("arrays")) {
    const auto rows = entry.at("rows").get<Eigen::Index>();
    const auto cols = entry.at("cols").get<Eigen::Index>();
    const auto data = entry.at("data").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
      fail(ErrorCode::kIo, "array '" + entry.at("name").get<std::string>() + "' has wrong size");
    }
    nn::Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r * cols + c)];
    }
    ckpt.arrays.push_back({entry.at("name").get<std::string>(), std::move(m)});
  }
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << checkpoint_to_json(ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return checkpoint_from_json(ss.str());
}

}  // namespace hodgeflow
