"""Random greedy triangle removal: simulation, ladder combinatorics and audits."""

import json

from ._core import (
    CountOverflowError,
    DomainError,
    InvariantError,
    PreconditionError,
    ResourceGuardError,
    backward_extension_density,
    bounded_family,
    classify_edge,
    edge_density,
    expected_drift,
    fit_exponent,
    ladder_edges,
    max_fan,
    omega,
    psi_ladder,
    run,
    scales,
    step_at_density,
    validate_word,
)
from ._core import hom_audit_json as _hom_audit_json


def hom_audit(n, M=3, p_min=0.3, pairs=20, max_length=3, seed=0):
    """Concentration audit along one run, as a parsed report."""
    return json.loads(_hom_audit_json(n, M, p_min, pairs, max_length, seed))

__all__ = [
    "CountOverflowError",
    "DomainError",
    "InvariantError",
    "PreconditionError",
    "ResourceGuardError",
    "backward_extension_density",
    "bounded_family",
    "classify_edge",
    "edge_density",
    "expected_drift",
    "fit_exponent",
    "hom_audit",
    "ladder_edges",
    "max_fan",
    "omega",
    "psi_ladder",
    "run",
    "scales",
    "step_at_density",
    "validate_word",
]
