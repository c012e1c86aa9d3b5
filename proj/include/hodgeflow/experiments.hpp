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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace hodgeflow {

using Json = nlohmann::ordered_json;

struct ResultRow {
  std::string method;
  std::string shift;
  std::string dataset;
  std::uint64_t seed = 0;
  std::string metric;  // psnr_db | accuracy
  double value = 0.0;
  double wall_time_s = 0.0;
};

inline constexpr const char* kResultsHeader = "method,shift,dataset,seed,metric,value,wall_time_s";

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);

// Merges `overrides` into `defaults`, rejecting any key (at any depth) that
// the defaults do not define and any value whose JSON type differs.
Json resolve_config(const Json& defaults, const Json& overrides);
// Applies a "key=value" override; the value is parsed as JSON when possible
// and as a plain string otherwise. Dotted keys address nested objects.
void apply_override(Json& overrides, const std::string& assignment);
// FNV-1a 64 of the compact dump, as 16 hex digits.
std::string config_hash(const Json& resolved);

Json default_interpolation_config();
Json default_localization_config();

struct InterpolationReport {
  std::vector<ResultRow> rows;
  Json summary;
};

// Flow interpolation comparison over training-set sizes and seeds. Every
// method sees the same test flows and masks within a seed. Unsigned methods
// (linegraph-rnn, kriging) are scored against |f_true|.
InterpolationReport run_interpolation_experiment(const Json& resolved_config);

struct CurveRow {
  std::string shift;
  std::uint64_t seed = 0;
  int epoch = 0;
  double train_loss = 0.0;
  double test_accuracy = 0.0;
};

inline constexpr const char* kCurvesHeader = "shift,seed,epoch,train_loss,test_accuracy";

void write_curves_csv(std::ostream& out, const std::vector<CurveRow>& rows);

struct LocalizationReport {
  std::vector<ResultRow> rows;
  std::vector<CurveRow> curves;
  Json summary;
};

// Source localization with the aggregation GNN under each requested shift.
// The node shift runs on estimated node potentials.
LocalizationReport run_localization_experiment(const Json& resolved_config);

}  // namespace hodgeflow
