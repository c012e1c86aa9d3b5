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

"""Hodge-Laplacian signal processing and neural networks for edge flows."""

import json as _json
import pkgutil as _pkgutil

# In a build tree the compiled module sits in a separate hodgeflow/ directory.
__path__ = _pkgutil.extend_path(__path__, __name__)

from ._core import (  # noqa: E402
    Graph,
    HodgeflowError,
    accuracy,
    convopt_interpolate,
    graph_laplacian,
    hodge_decompose,
    hodge_laplacian,
    incidence_matrix,
    kriging_interpolate,
    linegraph_laplacian,
    mask_flow,
    max_eigenvalue,
    planted_partition,
    psnr,
    random_cyclic_flow,
    spectral_embedding,
    train_and_interpolate,
)
from . import _core  # noqa: E402


def default_config(experiment):
    """Default configuration for "interpolation" or "localization"."""
    return _json.loads(_core._default_config(experiment))


def run_interpolation(overrides=None):
    """Returns (results CSV text, summary dict)."""
    csv, summary = _core._run_interpolation(_json.dumps(overrides or {}))
    return csv, _json.loads(summary)


def run_localization(overrides=None):
    """Returns (results CSV text, curves CSV text, summary dict)."""
    csv, curves, summary = _core._run_localization(_json.dumps(overrides or {}))
    return csv, curves, _json.loads(summary)
