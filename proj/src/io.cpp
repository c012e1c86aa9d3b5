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

#include "hodgeflow/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "hodgeflow/error.hpp"

namespace hodgeflow {

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    fail(ErrorCode::kIo, "cannot parse number '" + text + "'");
  }
  return value;
}

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

}  // namespace

Graph read_graph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kIo, "graph file is empty");
  std::istringstream header(line);
  long long n = -1, m = -1;
  if (!(header >> n >> m) || n < 0 || m < 0) {
    fail(ErrorCode::kIo, "graph header must be 'N E', got '" + line + "'");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long e = 0; e < m; ++e) {
    if (!std::getline(in, line)) {
      fail(ErrorCode::kIo, "graph file ends after " + std::to_string(e) + " of " +
                               std::to_string(m) + " edges");
    }
    std::istringstream row(line);
    Edge edge;
    if (!(row >> edge.tail >> edge.head)) {
      fail(ErrorCode::kIo, "bad edge line " + std::to_string(e + 2) + ": '" + line + "'");
    }
    edges.push_back(edge);
  }
  return Graph::build(edges, static_cast<int>(n));
}

Graph read_graph(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.num_nodes() << ' ' << g.num_edges() << '\n';
  for (const auto& e : g.edges()) out << e.tail << ' ' << e.head << '\n';
}

void write_graph(const std::filesystem::path& path, const Graph& g) {
  auto out = open_out(path);
  write_graph(out, g);
}

FlowSignal read_flow(std::istream& in) {
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    values.push_back(parse_double(line));
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

FlowSignal read_flow(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_flow(in);
}

void write_flow(std::ostream& out, const FlowSignal& f) {
  for (Eigen::Index e = 0; e < f.size(); ++e) out << format_double(f[e]) << '\n';
}

void write_flow(const std::filesystem::path& path, const FlowSignal& f) {
  auto out = open_out(path);
  write_flow(out, f);
}

}  // namespace hodgeflow
