"""Python access to the bvpair verification core.

The heavy lifting happens in the compiled ``_bvpair`` extension; this module
adds JSON decoding of reports.
"""

import json

from ._bvpair import (
    BvpairError,
    Scenario,
    cantor_cdf,
    cantor_cdf_rational,
    check_names,
    schema_version,
    tool_version,
)

__all__ = [
    "BvpairError",
    "Scenario",
    "cantor_cdf",
    "cantor_cdf_rational",
    "check_names",
    "load",
    "run",
    "schema_version",
    "tool_version",
]


def load(path, strict=False):
    """Parse and build a scenario file."""
    return Scenario.load(str(path), strict)


def run(scenario, only=(), jobs=1, tol_scale=1.0):
    """Run checks on a scenario (object or path) and return the report as a dict."""
    if not isinstance(scenario, Scenario):
        scenario = load(scenario)
    return json.loads(scenario.report_json(list(only), jobs, tol_scale))
