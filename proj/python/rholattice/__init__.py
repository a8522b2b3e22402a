"""Exact rho-invariant and structure-set computations for lens spaces.

Results are plain dicts in the same JSON shapes the ``rho-lattice`` CLI prints.
"""

import json
from fractions import Fraction

from . import _rholattice as _core
from ._rholattice import (
    InvalidArgument,
    NotInvertible,
    ParseError,
    PreconditionFailed,
    RhoLatticeError,
    VerificationFailure,
    WorkCapExceeded,
)

__all__ = [
    "ring", "coefficients", "special", "structure_set", "generator", "validate", "suspend",
    "torsion_basis", "torsion_coordinates", "transfer", "minimal_exponent", "verify",
    "RhoLatticeError", "InvalidArgument", "ParseError", "NotInvertible", "PreconditionFailed",
    "VerificationFailure", "WorkCapExceeded",
]


def _dump(element):
    return element if isinstance(element, str) else json.dumps(element)


def ring(expr, N, ideal="truncated", level=0):
    return json.loads(_core.ring(expr, N, ideal, level))


def coefficients(element):
    """Canonical coefficients of a ring-element dict as Fractions."""
    return [Fraction(int(num), int(den)) for num, den in element["coeffs"]]


def special(N, k=1):
    return json.loads(_core.special(N, k))


def structure_set(N, d, k=1, method="brute"):
    return json.loads(_core.structure_set(N, d, k, method))


def generator(name, N, d, k=1):
    return json.loads(_core.generator(name, N, d, k))


def validate(element):
    return _core.validate(_dump(element))


def suspend(element):
    return json.loads(_core.suspend(_dump(element)))


def torsion_basis(N, d, k=1):
    return json.loads(_core.torsion_basis(N, d, k))


def torsion_coordinates(element):
    return _core.torsion_coordinates(_dump(element))


def transfer(element, N_prime):
    return json.loads(_core.transfer(_dump(element), N_prime))


def minimal_exponent(N, d):
    return _core.minimal_exponent(N, d)


def verify(suite="all", max_N=0, max_d=0, seed=1, workers=0):
    """Run the verification harness; returns (checks, summary)."""
    lines = [json.loads(line) for line in _core.verify(suite, max_N, max_d, seed, workers).splitlines()]
    return lines[:-1], lines[-1]["summary"]
