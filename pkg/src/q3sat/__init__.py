"""Reduction of verification circuits to quantum 3-SAT and numeric certificates.

Setting Q3SAT_THREADS before import caps BLAS threads for the eigensolvers.
"""

import os

_threads = os.environ.get("Q3SAT_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, _threads)

from .circuit import CanonicalCircuit, Circuit, canonicalize, parse_circuit  # noqa: E402
from .reduction import ReductionInstance, build_hx, history_state  # noqa: E402
from .ring import RingScalar  # noqa: E402
from .spectral import spectrum  # noqa: E402

__all__ = [
    "CanonicalCircuit",
    "Circuit",
    "ReductionInstance",
    "RingScalar",
    "build_hx",
    "canonicalize",
    "history_state",
    "parse_circuit",
    "spectrum",
]
