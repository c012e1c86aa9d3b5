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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hodgeflow/baselines.hpp"
#include "hodgeflow/datagen.hpp"
#include "hodgeflow/error.hpp"
#include "hodgeflow/experiments.hpp"
#include "hodgeflow/hodge.hpp"
#include "hodgeflow/metrics.hpp"
#include "hodgeflow/operators.hpp"
#include "hodgeflow/rnn.hpp"

namespace py = pybind11;
using namespace hodgeflow;

namespace {

Graph make_graph(const std::vector<std::pair<int, int>>& edges, int num_nodes) {
  return Graph::build(edges, num_nodes);
}

std::vector<std::pair<int, int>> edge_list(const Graph& g) {
  std::vector<std::pair<int, int>> out;
  for (const Edge& e : g.edges()) out.emplace_back(e.tail, e.head);
  return out;
}

std::string csv_of(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_results_csv(out, rows);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hodge-Laplacian edge-flow processing";

  py::register_exception<Error>(m, "HodgeflowError", PyExc_ValueError);

  py::class_<Graph>(m, "Graph")
      .def(py::init(&make_graph), py::arg("edges"), py::arg("num_nodes"))
      .def_property_readonly("num_nodes", &Graph::num_nodes)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def_property_readonly("edges", &edge_list)
      .def("degrees", &Graph::degrees)
      .def("is_connected", &Graph::is_connected)
      .def("__repr__", [](const Graph& g) {
        return "<Graph " + std::to_string(g.num_nodes()) + " nodes, " + std::to_string(g.num_edges()) + " edges>";
      });

  m.def("incidence_matrix", [](const Graph& g) { return incidence_matrix(g).matrix(); });
  m.def("graph_laplacian", [](const Graph& g) { return graph_laplacian(g).matrix(); });
  m.def("hodge_laplacian", [](const Graph& g) { return hodge_laplacian(g).matrix(); });
  m.def("linegraph_laplacian", [](const Graph& g) { return linegraph_laplacian(g).matrix(); });
  m.def("max_eigenvalue", [](const SparseMatrix& a) { return max_eigenvalue(SparseSymMatrix(a)); });

  m.def(
      "hodge_decompose",
      [](const FlowSignal& f, const Graph& g) {
        HodgeDecomposition h = hodge_decompose(f, g);
        return std::make_pair(std::move(h.cyclic), std::move(h.gradient));
      },
      py::arg("flow"), py::arg("graph"), "Returns (cyclic, gradient).");
  m.def("spectral_embedding", &spectral_embedding, py::arg("graph"), py::arg("dim"));

  m.def(
      "convopt_interpolate",
      [](const FlowSignal& f, const std::vector<int>& observed, const Graph& g, double ridge) {
        return convopt_interpolate(f, observed, g, ConvOptConfig{ridge});
      },
      py::arg("flow"), py::arg("observed"), py::arg("graph"), py::arg("ridge") = 1e-6);
  m.def(
      "kriging_interpolate",
      [](const FlowSignal& f, const std::vector<int>& observed, const Graph& g, int embed_dim) {
        KrigingConfig cfg;
        cfg.embed_dim = embed_dim;
        return kriging_interpolate(f, observed, g, cfg);
      },
      py::arg("flow"), py::arg("observed"), py::arg("graph"), py::arg("embed_dim") = 2);

  m.def("psnr", [](const Eigen::VectorXd& t, const Eigen::VectorXd& p, const std::vector<int>& eval_set) {
    return psnr(t, p, eval_set);
  });
  m.def("accuracy", [](const std::vector<int>& t, const std::vector<int>& p) { return accuracy(t, p); });

  m.def(
      "planted_partition",
      [](int k, int nodes_per, double p, double q, std::uint64_t seed) {
        PartitionedGraph pg = planted_partition(k, nodes_per, p, q, seed);
        return std::make_pair(std::move(pg.graph), std::move(pg.community_of));
      },
      py::arg("k"), py::arg("nodes_per"), py::arg("p"), py::arg("q"), py::arg("seed"),
      "Returns (graph, community_of).");
  m.def("random_cyclic_flow", &random_cyclic_flow, py::arg("graph"), py::arg("seed"));
  m.def(
      "mask_flow",
      [](const FlowSignal& f, double fraction, std::uint64_t seed) {
        MaskedFlow mf = mask_flow(f, fraction, seed);
        return std::make_pair(std::move(mf.values), std::move(mf.mask.observed));
      },
      py::arg("flow"), py::arg("unobserved_fraction"), py::arg("seed"), "Returns (masked values, observed edges).");

  m.def(
      "train_and_interpolate",
      [](const std::vector<FlowSignal>& train, const FlowSignal& f_obs, const std::vector<int>& observed,
         const Graph& g, const std::string& shift, int epochs, int steps_per_epoch, std::uint64_t seed) {
        const ShiftOperator s = make_shift_operator(g, parse_shift_kind(shift));
        std::vector<TrainingFlow> data;
        for (const auto& f : train) data.push_back({f, {}});
        RnnTrainConfig cfg;
        cfg.epochs = epochs;
        cfg.steps_per_epoch = steps_per_epoch;
        const RnnTrainResult r = train_interpolator(data, s, cfg, seed);
        return interpolate(f_obs, observed, s, r.params);
      },
      py::arg("train"), py::arg("flow"), py::arg("observed"), py::arg("graph"), py::arg("shift") = "hodge",
      py::arg("epochs") = 10, py::arg("steps_per_epoch") = 100, py::arg("seed") = 0);

  m.def("_default_config", [](const std::string& which) {
    return (which == "interpolation" ? default_interpolation_config() : default_localization_config()).dump();
  });
  m.def("_run_interpolation", [](const std::string& overrides) {
    const Json cfg = resolve_config(default_interpolation_config(), Json::parse(overrides));
    const InterpolationReport r = run_interpolation_experiment(cfg);
    return std::make_pair(csv_of(r.rows), r.summary.dump());
  });
  m.def("_run_localization", [](const std::string& overrides) {
    const Json cfg = resolve_config(default_localization_config(), Json::parse(overrides));
    const LocalizationReport r = run_localization_experiment(cfg);
    std::ostringstream curves;
    write_curves_csv(curves, r.curves);
    return py::make_tuple(csv_of(r.rows), curves.str(), r.summary.dump());
  });
}
