"""Single-shot discrimination of two Bloch-sphere states under the CPT pairing.

For ``H = [[alpha, beta], [gamma, alpha]]`` the CPT pairing is
``<phi|psi>_CPT = phi^dagger G psi`` with ``G = diag(sqrt(g/b), sqrt(b/g))``.
Two states that are not orthogonal in the Dirac sense can be CPT-orthogonal
for a suitable Hamiltonian, and are then separated by one CPT projector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import BrokenPhaseError, NotDiscriminableError
from .models import H2Params, build_h2
from .ptrep import c_operator, cpt_inner, cpt_metric, standard_representation
from .smallmat import as_state

ORTHOGONALITY_TOL = 1e-10


@dataclass(frozen=True)
class BlochPair:
    """States at polar angles ``theta`` and ``theta + 2 epsilon``, common azimuth ``phi``."""

    theta: float
    phi: float
    epsilon: float

    @classmethod
    def on_slice(cls, epsilon: float) -> "BlochPair":
        """The one-parameter slice ``phi = pi``, ``theta = 2 pi / 3 - epsilon``."""
        return cls(theta=2 * math.pi / 3 - epsilon, phi=math.pi, epsilon=epsilon)


def bloch_states(pair: BlochPair) -> tuple[np.ndarray, np.ndarray]:
    ph = np.exp(1j * pair.phi)
    h1 = pair.theta / 2
    h2 = h1 + pair.epsilon
    psi1 = np.array([math.cos(h1), ph * math.sin(h1)], dtype=complex)
    psi2 = np.array([math.cos(h2), ph * math.sin(h2)], dtype=complex)
    return psi1, psi2


def _require_unbroken(params: H2Params) -> None:
    if not params.unbroken:
        raise BrokenPhaseError("CPT pairing needs beta * gamma > 0")


def orthogonality_condition(params: H2Params) -> float:
    """``epsilon`` in (0, pi) with ``tan^2(epsilon/2) = (gamma + 3 beta) / (3 gamma + beta)``."""
    _require_unbroken(params)
    b, g = params.beta, params.gamma
    den = 3 * g + b
    if den == 0:
        raise ValueError("3 gamma + beta = 0")
    ratio = (g + 3 * b) / den
    if ratio < 0:
        raise ValueError(f"tan^2(eps/2) = {ratio:.4g} < 0 has no real solution")
    return 2 * math.atan(math.sqrt(ratio))


def _pairing(params: H2Params):
    rep = standard_representation(2)
    c = c_operator(build_h2(params), "H2")
    return rep, c


def cpt_bra(params: H2Params, psi) -> np.ndarray:
    """Row vector ``b`` with ``b @ phi == <psi|phi>_CPT`` for every ``phi``."""
    _require_unbroken(params)
    rep, c = _pairing(params)
    return as_state(psi).conj() @ cpt_metric(rep, c)


def cpt_projector(params: H2Params, psi) -> np.ndarray:
    """``|psi><psi|_CPT / <psi|psi>_CPT``: idempotent, CPT-self-adjoint."""
    psi = as_state(psi)
    bra = cpt_bra(params, psi)
    return np.outer(psi, bra) / (bra @ psi)


@dataclass(frozen=True)
class Discrimination:
    label: str
    probabilities: tuple[float, float]
    overlap: complex


def discriminate(params: H2Params, pair: BlochPair, unknown) -> Discrimination:
    """Identify ``unknown`` as state 1 or state 2 of ``pair`` with one CPT projector.

    Outcome probabilities follow the CPT-normalised Born rule
    ``p_i = <u|P_i u>_CPT / <u|u>_CPT``.

    Raises
    ------
    NotDiscriminableError
        If the pair is not CPT-orthogonal for ``params``.
    """
    _require_unbroken(params)
    rep, c = _pairing(params)
    psi1, psi2 = bloch_states(pair)
    overlap = cpt_inner(rep, c, psi1, psi2)
    scale = math.sqrt(abs(cpt_inner(rep, c, psi1, psi1) * cpt_inner(rep, c, psi2, psi2)))
    if abs(overlap) > ORTHOGONALITY_TOL * scale:
        raise NotDiscriminableError(f"pair is not CPT-orthogonal: |<1|2>_CPT| = {abs(overlap):.3g}")
    u = as_state(unknown)
    norm = cpt_inner(rep, c, u, u).real
    probs = []
    for psi in (psi1, psi2):
        proj = cpt_projector(params, psi)
        probs.append(cpt_inner(rep, c, u, proj @ u).real / norm)
    label = "state1" if probs[0] >= probs[1] else "state2"
    return Discrimination(label, (probs[0], probs[1]), overlap)
