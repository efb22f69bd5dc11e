"""Fermionic parity / time-reversal representations and the PT, CPT pairings.

Time reversal acts as ``T psi = Z conj(psi)`` with ``Z conj(Z) = -1`` (odd
time reversal), parity as ``P psi = S psi``. The PT pairing is

    <phi|psi>_PT  = (PT phi)^T Z psi
    <phi|psi>_CPT = (C PT phi)^T Z psi

both conjugate-linear in ``phi``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Literal

import numpy as np

from .exceptions import BrokenPhaseError, DimensionError
from .smallmat import PAULI_X, PAULI_Y, PAULI_Z, as_matrix, as_state, matrix_to_json

EXACTNESS_BAND = 1e-12

ISY = np.array([[0, 1], [-1, 0]], dtype=complex)  # i * sigma_y, real form

AXIOMS = ("involution", "pt_orthogonality", "pt_self_adjoint", "pt_invariance")


@dataclass(frozen=True)
class Representation:
    """Parity matrix ``S`` and time-reversal matrix ``Z`` for a given dimension."""

    S: np.ndarray
    Z: np.ndarray
    standard: bool = True

    def __post_init__(self):
        if self.S.shape != self.Z.shape or self.S.shape[0] != self.S.shape[1]:
            raise DimensionError("S and Z must be square matrices of equal size")

    @property
    def dim(self) -> int:
        return self.S.shape[0]

    @property
    def SZ(self) -> np.ndarray:
        return self.S @ self.Z

    @property
    def pt_metric(self) -> np.ndarray:
        """Matrix ``M`` with ``<phi|psi>_PT = phi^dagger M psi``."""
        return self.SZ.T @ self.Z

    def to_json(self) -> dict:
        return {"dim": self.dim, "S": matrix_to_json(self.S), "Z": matrix_to_json(self.Z)}


@dataclass(frozen=True)
class COperator:
    K: np.ndarray
    source: Literal["closed-form-2d", "hamiltonian-scaled-4d"]


@dataclass(frozen=True)
class AxiomReport:
    parity_involution: float
    time_reversal_odd: float
    pt_commutator: float
    pt_anticommutator: float
    pt_invariance: float
    pt_self_adjointness: float
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "parity_involution": self.parity_involution,
            "time_reversal_odd": self.time_reversal_odd,
            "pt_commutator": self.pt_commutator,
            "pt_anticommutator": self.pt_anticommutator,
            "pt_invariance": self.pt_invariance,
            "pt_self_adjointness": self.pt_self_adjointness,
        }


def standard_representation(dim: int) -> Representation:
    """Standard (S, Z) pair.

    dim 4: ``S = diag(1, 1, -1, -1)`` (Dirac gamma_0), ``Z = diag(i sigma_y, i sigma_y)``.
    dim 2: ``S = sigma_x``, ``Z = i sigma_y``; ``S`` is the Pauli candidate selected by
    :func:`solve_parity` from the verifiable two-dimensional properties.
    """
    if dim == 2:
        return Representation(S=PAULI_X.copy(), Z=ISY.copy())
    if dim == 4:
        S = np.diag([1, 1, -1, -1]).astype(complex)
        Z = np.kron(np.eye(2), ISY)
        return Representation(S=S, Z=Z)
    raise DimensionError(f"no standard representation in dimension {dim}")


def _check_dim(rep: Representation, *vecs: np.ndarray) -> None:
    for v in vecs:
        if v.shape[0] != rep.dim:
            raise DimensionError(f"vector of dimension {v.shape[0]} for a dim-{rep.dim} representation")


def apply_pt(rep: Representation, psi) -> np.ndarray:
    """Antilinear PT action ``psi -> S Z conj(psi)``."""
    v = as_state(psi)
    _check_dim(rep, v)
    return rep.SZ @ v.conj()


def pt_inner(rep: Representation, phi, psi) -> complex:
    phi, psi = as_state(phi), as_state(psi)
    _check_dim(rep, phi, psi)
    return complex(apply_pt(rep, phi) @ rep.Z @ psi)


def c_operator(h, family: Literal["H2", "H4"]) -> COperator:
    """C operator for a Hamiltonian of the two-dimensional or four-dimensional family.

    H2 ``[[a, b], [g, a]]``: ``K = [[0, sqrt(b/g)], [sqrt(g/b), 0]]``.
    H4: ``C = 2H / Omega`` with ``Omega^2 / 4 = (H^2)_{11}``; this is the
    positive choice for ``a0 > 0``.

    Raises
    ------
    BrokenPhaseError
        If ``Omega^2 <= 0`` (C is only defined for real Omega).
    """
    h = as_matrix(h)
    if family == "H2":
        if h.shape != (2, 2):
            raise DimensionError("H2 family needs a 2x2 matrix")
        beta, gamma = h[0, 1].real, h[1, 0].real
        if beta * gamma <= EXACTNESS_BAND:
            raise BrokenPhaseError("C undefined in broken phase (beta*gamma <= 0)")
        r = np.sqrt(beta / gamma)
        K = np.array([[0, r], [1 / r, 0]], dtype=complex)
        return COperator(K=K, source="closed-form-2d")
    if family == "H4":
        if h.shape != (4, 4):
            raise DimensionError("H4 family needs a 4x4 matrix")
        quarter_omega_sq = (h @ h)[0, 0]
        if abs(quarter_omega_sq.imag) > EXACTNESS_BAND or quarter_omega_sq.real <= EXACTNESS_BAND:
            raise BrokenPhaseError("C undefined in broken phase (Omega^2 <= 0)")
        omega = 2 * np.sqrt(quarter_omega_sq.real)
        return COperator(K=2 * h / omega, source="hamiltonian-scaled-4d")
    raise ValueError(f"unknown family {family!r}")


def cpt_inner(rep: Representation, c: COperator, phi, psi) -> complex:
    phi, psi = as_state(phi), as_state(psi)
    _check_dim(rep, phi, psi)
    return complex((c.K @ apply_pt(rep, phi)) @ rep.Z @ psi)


def cpt_metric(rep: Representation, c: COperator) -> np.ndarray:
    """Matrix ``G`` with ``<phi|psi>_CPT = phi^dagger G psi``."""
    return rep.SZ.T @ c.K.T @ rep.Z


def axiom_report(rep: Representation, h) -> AxiomReport:
    """Residual norms (max-entry) of the representation and Hamiltonian axioms.

    PT self-adjointness is measured as ``||M H - H^dagger M||`` with
    ``M = (SZ)^T Z`` the PT metric; PT invariance as
    ``||(SZ) conj(H) (SZ)^-1 - H||``. Nothing is thresholded.
    """
    h = as_matrix(h)
    if h.shape[0] != rep.dim:
        raise DimensionError("Hamiltonian and representation dimensions differ")
    S, Z, SZ = rep.S, rep.Z, rep.SZ
    n = rep.dim
    eye = np.eye(n)
    M = rep.pt_metric

    def mx(a):
        return float(np.max(np.abs(a)))

    return AxiomReport(
        parity_involution=mx(S @ S - eye),
        time_reversal_odd=mx(Z @ Z.conj() + eye),
        pt_commutator=mx(S @ Z - Z @ S),
        pt_anticommutator=mx(S @ Z + Z @ S),
        pt_invariance=mx(SZ @ h.conj() @ np.linalg.inv(SZ) - h),
        pt_self_adjointness=mx(M @ h - h.conj().T @ M),
    )


# Fixed probe Hamiltonians for solve_parity: generic (beta != gamma) [[a, b], [g, a]] matrices
# and unbroken-phase angles for the one-parameter family.
_PROBE_H2 = [(0.3, 1.7, 0.4), (-1.1, 0.6, 2.3), (2.0, -0.8, -1.9)]
_PROBE_ANGLES = [0.2, 0.7, 1.3]


@functools.lru_cache(maxsize=1)
def _parity_candidates() -> list[np.ndarray]:
    grid = (-1.0, -0.5, 0.0, 0.5, 1.0)
    basis = (np.eye(2, dtype=complex), PAULI_X, ISY, PAULI_Z)
    out: list[np.ndarray] = []
    for coeffs in itertools.product(grid, repeat=4):
        if not any(coeffs):
            continue
        out.append(sum(c * b for c, b in zip(coeffs, basis)))
    for p in (np.eye(2, dtype=complex), PAULI_X, PAULI_Y, PAULI_Z):
        out.extend([p.copy(), -p])
    unique: dict[bytes, np.ndarray] = {}
    for cand in out:
        unique.setdefault(np.round(cand, 12).tobytes(), cand)
    return list(unique.values())


def _satisfies(S: np.ndarray, axiom: str, tol: float) -> bool:
    rep = Representation(S=S, Z=ISY, standard=False)
    if axiom == "involution":
        return bool(np.max(np.abs(S @ S - np.eye(2))) <= tol)
    if axiom == "pt_orthogonality":
        for alpha in _PROBE_ANGLES:
            t, c = np.tan(alpha) ** 0.25, (1 / np.tan(alpha)) ** 0.25
            lp = np.array([t, c]) / np.sqrt(2)
            lm = np.array([t, -c]) / np.sqrt(2)
            if abs(pt_inner(rep, lm, lp)) > tol:
                return False
        return True
    if axiom in ("pt_self_adjoint", "pt_invariance"):
        if abs(np.linalg.det(S)) < tol:
            return False
        for a, b, g in _PROBE_H2:
            r = axiom_report(rep, np.array([[a, b], [g, a]]))
            val = r.pt_self_adjointness if axiom == "pt_self_adjoint" else r.pt_invariance
            if val > tol:
                return False
        return True
    raise ValueError(f"unknown axiom {axiom!r}; choose from {AXIOMS}")


def solve_parity(dim: int = 2, axioms: Iterable[str] = (), tol: float = 1e-9) -> list[np.ndarray]:
    """Candidate 2x2 parity matrices satisfying every selected axiom.

    Candidates are the real combinations of ``{1, sigma_x, i sigma_y, sigma_z}``
    with coefficients in ``{-1, -0.5, 0, 0.5, 1}`` plus the signed Pauli matrices
    (including the complex ``sigma_y``); ``Z`` is fixed to ``i sigma_y``.
    Axioms are drawn from :data:`AXIOMS`. An empty list is a valid answer.
    """
    if dim != 2:
        raise DimensionError("solve_parity only searches dimension 2")
    axioms = tuple(axioms)
    for ax in axioms:
        if ax not in AXIOMS:
            raise ValueError(f"unknown axiom {ax!r}; choose from {AXIOMS}")
    return [S.copy() for S in _parity_candidates() if all(_satisfies(S, ax, tol) for ax in axioms)]
