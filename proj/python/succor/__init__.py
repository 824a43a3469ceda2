# This file is part of the succor project.
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

"""On-request emergency dispatch: registry, wire grammar, geo, dispatch and simulator."""

from ._core import (
    DispatchEngine,
    Registry,
    SuccorError,
    encode_request,
    haversine_km,
    nearest,
    next_state,
    parse_request,
    run_scenario,
    validate_child,
)

__all__ = [
    "DispatchEngine",
    "Registry",
    "SuccorError",
    "encode_request",
    "haversine_km",
    "nearest",
    "next_state",
    "parse_request",
    "run_scenario",
    "validate_child",
]
