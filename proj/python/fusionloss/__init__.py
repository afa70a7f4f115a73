# Copyright 2026 The fusionloss Authors
#
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

"""Loss thresholds of linear-optical Bell measurements used as fusions."""

import json as _json

from ._fusionloss import (
    BsmScheme,
    CircuitLayout,
    ConfigError,
    ContractError,
    Element,
    ElementKind,
    IntegrityError,
    LossParams,
    Operator,
    catalog_names,
    catalog_scheme,
    compile,
    db_to_transmission,
    erasure_p0,
    erasure_shor,
    evolve,
    marginal_threshold,
    min_p_succ,
    p_loss,
    p_loss_max,
    permanent,
    static_bias_p_loss,
    success_per_bell,
    success_probability,
    surviving_photon_distribution,
    survival_probability,
    sweep_json,
    threshold_p_er,
)

__version__ = "0.1.0"


def sweep(config):
    """Run a sweep. `config` is a dict in the run-configuration format."""
    return _json.loads(sweep_json(_json.dumps(config)))


__all__ = [name for name in dir() if not name.startswith("_")]
