"""Closed-form time evolution with the series exponential as a cross-check."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .exceptions import ExceptionalPointError
from .models import H2AliceParams, H2Params, H4Params, ModelParams, build_h2, build_h4, complex_gap
from .ptrep import EXACTNESS_BAND, c_operator, cpt_inner, pt_inner, standard_representation
from .smallmat import as_state, expm

EP_BAND = 1e-12


@dataclass(frozen=True)
class EvolutionResult:
    """Evolution operator ``u = exp(-i H t)`` at time ``t``.

    ``closed_form_residual`` is the max-entry distance between the closed form
    and the series exponential. ``analytic_continuation`` marks a broken-phase
    (complex ``Omega``) or complex-time evaluation; ``u`` then comes from the
    series.
    """

    u: np.ndarray
    t: complex
    closed_form_residual: float
    analytic_continuation: bool = False

    def to_json(self) -> dict:
        from .smallmat import matrix_to_json

        t = complex(self.t)
        return {
            "u": matrix_to_json(self.u),
            "t": [t.real, t.imag],
            "closed_form_residual": self.closed_form_residual,
            "analytic_continuation": self.analytic_continuation,
        }


def _as_time(t) -> complex | float:
    t = complex(t)
    return t.real if t.imag == 0 else t


def _closed_h2(p: H2Params, t, omega: complex, include_scalar: bool) -> np.ndarray:
    half = omega / 2
    cos = cmath.cos(half * t)
    sin = cmath.sin(half * t)
    # beta/half = sqrt(beta/gamma) for beta, gamma > 0; this form also holds for beta, gamma < 0
    upper, lower = p.beta / half, p.gamma / half
    u = np.array([[cos, -1j * upper * sin], [-1j * lower * sin, cos]], dtype=complex)
    if include_scalar:
        u = cmath.exp(-1j * p.alpha * t) * u
    return u


def u_h2(p: H2Params | H2AliceParams, t, include_scalar: bool = True) -> EvolutionResult:
    """``exp(-i H t)`` for ``H = [[alpha, beta], [gamma, alpha]]``.

    Closed form ``e^{-i alpha t} [[cos(Wt/2), -i sqrt(b/g) sin(Wt/2)],
    [-i sqrt(g/b) sin(Wt/2), cos(Wt/2)]]`` with ``W = 2 sqrt(beta gamma)``.
    In the broken phase, or for complex ``t``, the series value is returned
    and flagged.

    ``include_scalar=False`` drops the ``e^{-i alpha t}`` factor, which is
    harmless wherever states are renormalised and avoids under/overflow at
    large complex times.
    """
    if isinstance(p, H2AliceParams):
        p = p.to_h2()
    t = _as_time(t)
    omega = complex_gap(p)
    if abs(omega) <= EP_BAND:
        raise ExceptionalPointError("closed form is 0/0 at Omega = 0")
    closed = _closed_h2(p, t, omega, include_scalar)
    gen = build_h2(p) - p.alpha * np.eye(2)
    series = expm(-1j * gen * t)
    if include_scalar:
        series = cmath.exp(-1j * p.alpha * t) * series
    continued = not (p.unbroken and isinstance(t, float))
    resid = float(np.max(np.abs(closed - series)))
    return EvolutionResult(series if continued else closed, t, resid, continued)


def _closed_h4(p: H4Params, t, omega: complex) -> np.ndarray:
    c = cmath.cos(omega * t / 2)
    s = cmath.sin(omega * t / 2)
    k = 2j * s / omega
    a0 = p.a0
    Bp, Bm, Cp, Cm = p.B_plus, p.B_minus, p.C_plus, p.C_minus
    return np.array(
        [
            [c - k * a0, 0, k * Cm, k * Bm],
            [0, c - k * a0, k * Bp, -k * Cp],
            [-k * Cp, -k * Bm, c + k * a0, 0],
            [-k * Bp, k * Cm, 0, c + k * a0],
        ],
        dtype=complex,
    )


def u_h4(p: H4Params, t) -> EvolutionResult:
    """``exp(-i H t)`` for the five-parameter 4x4 family.

    Since ``H^2 = (Omega/2)^2``, ``U = cos(Wt/2) - (2i/W) sin(Wt/2) H``; the
    matrix is written out entrywise. Broken phase / complex ``t`` fall back
    to the series with the continuation flag set.
    """
    t = _as_time(t)
    omega = complex_gap(p)
    if abs(omega) <= EP_BAND:
        raise ExceptionalPointError("closed form is 0/0 at Omega = 0")
    closed = _closed_h4(p, t, omega)
    series = expm(-1j * build_h4(p) * t)
    continued = not (p.unbroken and isinstance(t, float))
    resid = float(np.max(np.abs(closed - series)))
    return EvolutionResult(series if continued else closed, t, resid, continued)


def evolution(p: ModelParams, t, **kw) -> EvolutionResult:
    if isinstance(p, H4Params):
        return u_h4(p, t)
    return u_h2(p, t, **kw)


def propagate(u: EvolutionResult | np.ndarray, psi, normalize: Literal["none", "dirac"] = "none") -> np.ndarray:
    """Apply the evolution operator; optionally rescale to unit Dirac norm."""
    mat = u.u if isinstance(u, EvolutionResult) else np.asarray(u, dtype=complex)
    out = mat @ as_state(psi)
    if normalize == "none":
        return out
    if normalize != "dirac":
        raise ValueError(f"normalize must be 'none' or 'dirac', got {normalize!r}")
    n = np.linalg.norm(out)
    if n == 0 or not math.isfinite(n):
        raise ArithmeticError("propagated state has zero (or non-finite) norm")
    return out / n


def norm_track(p: ModelParams, psi0, times: Sequence[float]) -> np.ndarray:
    """Self inner products ``(dirac, pt, cpt)`` of ``U(t) psi0`` at each time.

    Returns an array of shape ``(len(times), 3)``; entries are real parts (the
    imaginary parts vanish for the Hermitian metrics involved).
    """
    if isinstance(p, H2AliceParams):
        p = p.to_h2()
    four = isinstance(p, H4Params)
    rep = standard_representation(4 if four else 2)
    h = build_h4(p) if four else build_h2(p)
    c = c_operator(h, "H4" if four else "H2")
    psi0 = as_state(psi0)
    rows = []
    for t in times:
        psi = propagate(evolution(p, float(t)), psi0)
        rows.append(
            (
                float(np.vdot(psi, psi).real),
                pt_inner(rep, psi, psi).real,
                cpt_inner(rep, c, psi, psi).real,
            )
        )
    return np.array(rows)


__all__ = [
    "EP_BAND",
    "EXACTNESS_BAND",
    "EvolutionResult",
    "evolution",
    "norm_track",
    "propagate",
    "u_h2",
    "u_h4",
]
