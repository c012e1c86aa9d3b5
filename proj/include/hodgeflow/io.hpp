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
#include <iosfwd>
#include <string>

#include "hodgeflow/graph.hpp"

namespace hodgeflow {

// Shortest decimal text that parses back to the same double. Locale free, so
// serialized output is byte-stable.
std::string format_double(double value);
double parse_double(const std::string& text);

// Graph file: first line "N E", then E lines "tail head" (0-based).
Graph read_graph(std::istream& in);
Graph read_graph(const std::filesystem::path& path);
void write_graph(std::ostream& out, const Graph& g);
void write_graph(const std::filesystem::path& path, const Graph& g);

// Flow file: one value per line, aligned with the graph edge order.
FlowSignal read_flow(std::istream& in);
FlowSignal read_flow(const std::filesystem::path& path);
void write_flow(std::ostream& out, const FlowSignal& f);
void write_flow(const std::filesystem::path& path, const FlowSignal& f);

}  // namespace hodgeflow
