# Copyright 2026 The hodgeflow Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import hodgeflow as hf


def triangle():
    return hf.Graph([(0, 1), (1, 2), (0, 2)], 3)


def test_graph_and_operators():
    g = triangle()
    assert g.num_nodes == 3 and g.num_edges == 3
    assert g.edges == [(0, 1), (1, 2), (0, 2)]
    b = hf.incidence_matrix(g).toarray()
    np.testing.assert_array_equal(b[:, 0], [-1, 1, 0])
    l1 = hf.hodge_laplacian(g).toarray()
    np.testing.assert_allclose(l1, b.T @ b)
    np.testing.assert_allclose(hf.graph_laplacian(g).toarray(), b @ b.T)
    assert hf.max_eigenvalue(hf.hodge_laplacian(g)) == pytest.approx(3.0, rel=1e-5)


def test_hodge_decomposition():
    g = triangle()
    cyclic, gradient = hf.hodge_decompose(np.array([2.0, 0.0, 1.0]), g)
    np.testing.assert_allclose(cyclic + gradient, [2.0, 0.0, 1.0], atol=1e-9)
    np.testing.assert_allclose(hf.incidence_matrix(g) @ cyclic, 0.0, atol=1e-9)
    assert abs(cyclic @ gradient) < 1e-9


def test_baselines_and_metrics():
    g = triangle()
    out = hf.convopt_interpolate(np.array([1.0, 1.0, 0.0]), [0, 1], g, ridge=0.0)
    assert out[2] == pytest.approx(-1.0)
    assert math.isinf(hf.psnr(np.array([1.0, 1.0, -1.0]), out, [2]))
    assert hf.psnr(np.array([2.0, 0.0]), np.array([1.0, 0.0]), [0]) == pytest.approx(10 * math.log10(4))
    assert hf.accuracy([0, 1, 2, 3, 4], [0, 1, 2, 0, 0]) == pytest.approx(0.6)
    k = hf.kriging_interpolate(np.array([1.0, -3.0, 0.0]), [0, 1], g)
    assert k[2] == pytest.approx(2.0, abs=1e-6)


def test_errors_are_python_exceptions():
    with pytest.raises(hf.HodgeflowError, match="EmptyEvalSet"):
        hf.psnr(np.array([1.0]), np.array([1.0]), [])
    with pytest.raises(ValueError):
        hf.Graph([(0, 0)], 1)


def test_datagen_and_rnn():
    g, communities = hf.planted_partition(2, 6, 0.8, 0.3, 1)
    assert g.is_connected() and len(communities) == 12
    f = hf.random_cyclic_flow(g, 2)
    masked, observed = hf.mask_flow(f, 0.2, 3)
    assert len(observed) == g.num_edges - int(0.2 * g.num_edges)
    pred = hf.train_and_interpolate([f], masked, observed, g, epochs=1, steps_per_epoch=5)
    assert pred.shape == f.shape
    np.testing.assert_array_equal(pred[observed], f[observed])


def test_experiment_runner_is_deterministic():
    overrides = {
        "seeds": [0],
        "k": 2,
        "nodes_per": 5,
        "p": 0.8,
        "q": 0.3,
        "n_test": 2,
        "train_sizes": [0],
        "methods": ["convopt", "kriging"],
    }
    csv, summary = hf.run_interpolation(overrides)
    assert csv.splitlines()[0] == "method,shift,dataset,seed,metric,value,wall_time_s"
    assert len(csv.splitlines()) == 3
    assert summary["unsigned_methods"] == ["kriging"]
    assert hf.run_interpolation(overrides)[0] == csv
    with pytest.raises(hf.HodgeflowError, match="unknown config key"):
        hf.run_interpolation({"bogus": 1})
    assert hf.default_config("localization")["k"] == 5
