"""PT-symmetric fermionic quantum mechanics on 2x2 and 4x4 matrices.

Modules
-------
smallmat   dense complex linear algebra for tiny matrices
ptrep      parity / odd time-reversal representations, PT and CPT pairings
models     the 2x2 and 4x4 Hamiltonian families and their spectra
evolve     closed-form time evolution with a series cross-check
nosignal   the two-party no-signaling protocol
brachy     spin-flip times under a fixed eigenvalue gap
discrim    single-shot discrimination with CPT projectors
cli        experiment runner and report writer
"""

from .exceptions import (
    BrokenPhaseError,
    DimensionError,
    EigenError,
    ExceptionalPointError,
    InfeasibleConstraintError,
    InvalidDensityMatrixError,
    NotDiscriminableError,
    NotHermitianError,
    UnreachableTargetError,
)
from .models import GapConstraint, H2AliceParams, H2Params, H4Params

__version__ = "0.1.0"

__all__ = [
    "BrokenPhaseError",
    "DimensionError",
    "EigenError",
    "ExceptionalPointError",
    "GapConstraint",
    "H2AliceParams",
    "H2Params",
    "H4Params",
    "InfeasibleConstraintError",
    "InvalidDensityMatrixError",
    "NotDiscriminableError",
    "NotHermitianError",
    "UnreachableTargetError",
]
