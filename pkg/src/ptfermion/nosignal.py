"""Two-party no-signaling protocol with a PT-symmetric Hamiltonian on Alice's side.

Alice and Bob share a maximally entangled state. Alice applies one of two
local operations, then her system evolves under ``U = exp(-iHt)``; Bob's
side is idle. Each branch is renormalised with the Dirac inner product and
Bob's reduced density matrices are compared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .evolve import EP_BAND, evolution
from .exceptions import ExceptionalPointError, InvalidDensityMatrixError
from .models import H2AliceParams, H2Params, H4Params, complex_gap
from .smallmat import PAULI_X, PAULI_Y, as_matrix, hermitian_eigvals, kron, partial_trace

SIGMA_X4 = np.kron(np.eye(2), PAULI_X)
SIGMA_Y4 = np.kron(np.eye(2), PAULI_Y)


@dataclass
class ProtocolConfig:
    """Inputs of one protocol run.

    ``t`` defaults to ``pi / Omega`` where ``Omega`` is the eigenvalue gap. In
    the broken phase ``Omega`` is imaginary and so is this default time; the
    evolution is then the analytic continuation computed by the series.
    ``sigma_y_joint`` turns on joint probabilities in dimension 4 (Sigma_y
    eigenbasis on both sides); off by default.
    """

    dim: int
    params: H2Params | H2AliceParams | H4Params
    alice_ops: tuple[np.ndarray, np.ndarray] | None = None
    bob_op: np.ndarray | None = None
    t: complex | float | None = None
    sigma_y_joint: bool = False

    def __post_init__(self):
        if self.dim not in (2, 4):
            raise ValueError("dim must be 2 or 4")
        if isinstance(self.params, H2AliceParams):
            self.params = self.params.to_h2()
        if (self.dim == 4) != isinstance(self.params, H4Params):
            raise ValueError(f"dim {self.dim} does not match {type(self.params).__name__}")
        if self.alice_ops is None:
            flip = PAULI_X if self.dim == 2 else SIGMA_X4
            self.alice_ops = (np.eye(self.dim, dtype=complex), flip.copy())
        if self.bob_op is None:
            self.bob_op = np.eye(self.dim, dtype=complex)
        for op in (*self.alice_ops, self.bob_op):
            if as_matrix(op).shape != (self.dim, self.dim):
                raise ValueError("local operators must match dim")

    def time(self) -> complex | float:
        if self.t is not None:
            return self.t
        omega = complex_gap(self.params)
        if abs(omega) <= EP_BAND:
            raise ExceptionalPointError("default time pi/Omega is undefined at the exceptional point")
        t = math.pi / omega
        return t.real if t.imag == 0 else t


@dataclass
class ProtocolOutcome:
    psi_plus: np.ndarray
    psi_minus: np.ndarray
    rho_b_plus: np.ndarray
    rho_b_minus: np.ndarray
    deviation: float
    joint: np.ndarray | None
    marginals: np.ndarray | None
    entropy_initial: float
    entropy_final: float
    t: complex | float
    analytic_continuation: bool
    extra: dict = field(default_factory=dict)


def sigma_x_eigenvectors(dim: int) -> list[np.ndarray]:
    """Eigenvectors of ``sigma_x`` (dim 2) or ``Sigma_x = diag(sigma_x, sigma_x)`` (dim 4)."""
    plus = np.array([1, 1], dtype=complex) / math.sqrt(2)
    minus = np.array([1, -1], dtype=complex) / math.sqrt(2)
    if dim == 2:
        return [plus, minus]
    if dim == 4:
        z = np.zeros(2)
        return [np.concatenate([plus, z]), np.concatenate([z, plus]),
                np.concatenate([minus, z]), np.concatenate([z, minus])]
    raise ValueError("dim must be 2 or 4")


def entangled_state(dim: int) -> np.ndarray:
    """``sum_v v (x) v / sqrt(dim)`` over the ``Sigma_x`` eigenvectors ``v``."""
    vecs = sigma_x_eigenvectors(dim)
    psi = sum(np.kron(v, v) for v in vecs) / math.sqrt(dim)
    return psi / np.linalg.norm(psi)


def _y_basis(dim: int) -> list[np.ndarray]:
    plus = np.array([1, 1j], dtype=complex) / math.sqrt(2)
    minus = np.array([1, -1j], dtype=complex) / math.sqrt(2)
    if dim == 2:
        return [plus, minus]
    z = np.zeros(2)
    return [np.concatenate([plus, z]), np.concatenate([z, plus]),
            np.concatenate([minus, z]), np.concatenate([z, minus])]


def entanglement_entropy(rho, tol: float = 1e-8) -> float:
    """Von Neumann entropy in bits; ``0 log 0 = 0``."""
    rho = as_matrix(rho)
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise InvalidDensityMatrixError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise InvalidDensityMatrixError(f"trace {np.trace(rho).real:.6g} != 1")
    lam = hermitian_eigvals(rho, tol=tol)
    if lam.min() < -tol:
        raise InvalidDensityMatrixError(f"negative eigenvalue {lam.min():.3g}")
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log2(lam)))


def _dirac_normalize(psi: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(psi)
    if n == 0 or not math.isfinite(n):
        raise ArithmeticError("protocol branch has zero norm")
    return psi / n


def _projector(v: np.ndarray) -> np.ndarray:
    return np.outer(v, v.conj())


def run_protocol(cfg: ProtocolConfig) -> ProtocolOutcome:
    d = cfg.dim
    t = cfg.time()
    evo = evolution(cfg.params, t, include_scalar=False) if d == 2 else evolution(cfg.params, t)
    psi0 = entangled_state(d)
    branches = []
    for op in cfg.alice_ops:
        step = kron(evo.u @ as_matrix(op), cfg.bob_op)
        branches.append(_dirac_normalize(step @ psi0))
    psi_p, psi_m = branches
    rho_p = partial_trace(_projector(psi_p), (d, d), keep="second")
    rho_m = partial_trace(_projector(psi_m), (d, d), keep="second")
    deviation = float(np.max(np.abs(rho_p - rho_m)))

    joint = marginals = None
    if d == 2 or cfg.sigma_y_joint:
        basis = _y_basis(d)
        joint = np.empty((2, d, d))
        for k, psi in enumerate(branches):
            for a, va in enumerate(basis):
                for b, vb in enumerate(basis):
                    proj = kron(_projector(va), _projector(vb))
                    joint[k, a, b] = np.vdot(psi, proj @ psi).real
        marginals = joint.sum(axis=1)

    rho_initial_b = partial_trace(_projector(psi0), (d, d), keep="second")
    mixture = 0.5 * (_projector(psi_p) + _projector(psi_m))
    rho_final_b = partial_trace(mixture, (d, d), keep="second")
    return ProtocolOutcome(
        psi_plus=psi_p,
        psi_minus=psi_m,
        rho_b_plus=rho_p,
        rho_b_minus=rho_m,
        deviation=deviation,
        joint=joint,
        marginals=marginals,
        entropy_initial=entanglement_entropy(rho_initial_b),
        entropy_final=entanglement_entropy(rho_final_b),
        t=t,
        analytic_continuation=evo.analytic_continuation,
        extra={"rho_b_mixture": rho_final_b},
    )


def signaling_deviation(cfg: ProtocolConfig) -> float:
    """Max-entry norm of ``rho_B^+ - rho_B^-``."""
    return run_protocol(cfg).deviation


def rho_b_closed_form_4d(p: H4Params) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form ``rho_B^+``, ``rho_B^-`` for the b0 = b3 = 0 slice at ``t = pi/Omega``.

    The off-diagonal block is ``-2 a0 B_pm / (a0^2 + |b|^2)`` placed as
    ``(1,4), (2,3), (3,2), (4,1) = B+, B-, B+, B-`` for the first branch
    (indices swapped between ``B+`` and ``B-`` for the second).
    """
    bsq = p.b1**2 + p.b2**2
    x_p = -2 * p.a0 * p.B_plus / (p.a0**2 + bsq)
    x_m = -2 * p.a0 * p.B_minus / (p.a0**2 + bsq)

    def mat(u, v):
        m = np.eye(4, dtype=complex)
        m[0, 3], m[1, 2], m[2, 1], m[3, 0] = u, v, u, v
        return m / 4

    return mat(x_p, x_m), mat(x_m, x_p)


def entropy_formula_4d(a0: float, b1: float, base: float = 2.0) -> float:
    """``1 + x log(2(a0^2 + b1^2)/(a0 b1))`` with ``x = 2 a0 b1 / (a0^2 + b1^2)``.

    The logarithm base of this expression is not fixed by its source; base 2
    matches the entropy convention used elsewhere.
    """
    s = a0 * a0 + b1 * b1
    x = 2 * a0 * b1 / s
    return 1 + x * math.log(2 * s / (a0 * b1), base)


@dataclass(frozen=True)
class EntropyReport:
    numeric: float
    closed_form: float
    difference: float
    note: str = ""


def entropy_conservation_report(cfg: ProtocolConfig) -> EntropyReport:
    """Entropy of Bob's state for the equal mixture of Alice's two branches.

    Dimension 2: the closed-form reference is 1 bit. Dimension 4 requires
    ``b2 = 0``; the numeric eigen-entropy is authoritative and the closed
    form from :func:`entropy_formula_4d` is attached for comparison only.
    """
    out = run_protocol(cfg)
    if cfg.dim == 2:
        return EntropyReport(out.entropy_final, 1.0, out.entropy_final - 1.0)
    p = cfg.params
    if abs(p.b2) > 0:
        raise ValueError("dim-4 entropy report needs b2 = 0")
    closed = entropy_formula_4d(p.a0, p.b1) if p.a0 * p.b1 != 0 else 1.0
    return EntropyReport(
        out.entropy_final,
        closed,
        out.entropy_final - closed,
        note="numeric eigen-entropy is ground truth; closed form (log base 2) is annotation",
    )

