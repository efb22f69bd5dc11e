"""Spin-flip evolution times under a fixed eigenvalue gap.

Two problems are covered: spin-up to spin-down for the 2x2 family, and
``e1 = (1,0,0,0)`` to ``e4 = (0,0,0,1)`` for the 4x4 family, both judged
by the vanishing of the first amplitude of ``U(t) e1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .evolve import propagate, u_h2, u_h4
from .exceptions import BrokenPhaseError, InfeasibleConstraintError, UnreachableTargetError
from .models import (
    Family,
    GapConstraint,
    H2AliceParams,
    H2Params,
    H4Params,
    build,
    constrained_family,
    gap,
)
from .ptrep import EXACTNESS_BAND, c_operator, cpt_inner, standard_representation
from .smallmat import expm


@dataclass(frozen=True)
class BrachyProblem:
    family: Family
    omega: GapConstraint
    initial: np.ndarray
    target: np.ndarray

    def __post_init__(self):
        dim = 2 if self.family == "H2" else 4
        if self.initial.shape != (dim,) or self.target.shape != (dim,):
            raise ValueError(f"{self.family} states must have dimension {dim}")


@dataclass(frozen=True)
class BrachySolution:
    """Evolution time and diagnostics.

    ``residual`` is ``1 - |<target|psi(t)>|`` for the Dirac-normalised
    propagated state, i.e. zero when the target direction is reached up to a
    global phase. ``first_amplitude`` is the first component of ``U(t) e1``.
    """

    t: float
    params: H2Params | H4Params
    residual: float
    cpt_overlap: complex
    first_amplitude: complex


def spin_flip_problem(omega: GapConstraint | float) -> BrachyProblem:
    om = omega if isinstance(omega, GapConstraint) else GapConstraint(omega)
    return BrachyProblem("H2", om, np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex))


def antiparticle_problem(omega: GapConstraint | float) -> BrachyProblem:
    om = omega if isinstance(omega, GapConstraint) else GapConstraint(omega)
    e = np.eye(4, dtype=complex)
    return BrachyProblem("H4", om, e[0], e[3])


def direction_residual(psi: np.ndarray, target: np.ndarray) -> float:
    psi = psi / np.linalg.norm(psi)
    target = target / np.linalg.norm(target)
    return float(1 - abs(np.vdot(target, psi)))


def flip_time_h2(p: H2Params | H2AliceParams) -> BrachySolution:
    """``t = pi / Omega``: first zero of ``cos(Omega t / 2)``, independent of alpha, beta, gamma."""
    if isinstance(p, H2AliceParams):
        p = p.to_h2()
    if not p.unbroken:
        raise BrokenPhaseError("flip time needs beta * gamma > 0")
    om = gap(p)
    prob = spin_flip_problem(om)
    t = math.pi / om.omega
    psi = propagate(u_h2(p, t), prob.initial)
    rep = standard_representation(2)
    c = c_operator(build(p), "H2")
    return BrachySolution(
        t=t,
        params=p,
        residual=direction_residual(psi, prob.target),
        cpt_overlap=cpt_inner(rep, c, prob.target, prob.initial),
        first_amplitude=complex(psi[0]),
    )


def flip_time_h4_closed_form(a0: float, omega: float) -> float:
    """``(2 / Omega) arctan(Omega / (2 a0))``, evaluated for any ``a0 > 0``."""
    if a0 <= 0:
        raise ValueError("a0 must be positive")
    return 2 / omega * math.atan(omega / (2 * a0))


def flip_time_h4(p: H4Params) -> BrachySolution:
    """Closed-form time ``(2/Omega) arctan(Omega/(2 a0))`` with honest diagnostics.

    This time solves ``cos(Omega t/2) = (2 a0/Omega) sin(Omega t/2)``, i.e.
    ``Re a + Im a = 0`` for the first amplitude
    ``a = cos(Omega t/2) - (2i a0/Omega) sin(Omega t/2)``. The amplitude itself
    satisfies ``|a| >= 1`` for all real ``t`` in the unbroken phase, so the
    state is not ``e4`` at that time; ``residual`` and ``first_amplitude``
    report how far off it is. ``cpt_overlap`` is ``<e4|e1>_CPT = -2 B+/Omega``.
    """
    if not p.unbroken:
        raise BrokenPhaseError("flip time needs a0^2 > |b|^2")
    if abs(p.B_plus) <= EXACTNESS_BAND:
        raise UnreachableTargetError("B+ = 0: the fourth amplitude never leaves zero")
    om = gap(p)
    prob = antiparticle_problem(om)
    t = flip_time_h4_closed_form(p.a0, om.omega)
    psi = propagate(u_h4(p, t), prob.initial)
    rep = standard_representation(4)
    c = c_operator(build(p), "H4")
    return BrachySolution(
        t=t,
        params=p,
        residual=direction_residual(psi, prob.target),
        cpt_overlap=cpt_inner(rep, c, prob.target, prob.initial),
        first_amplitude=complex(psi[0]),
    )


@dataclass(frozen=True)
class ZeroSearch:
    """Outcome of the numeric search for the first zero of ``(U(t) e1)[0]``.

    ``t`` is ``None`` when no zero was found; ``min_abs`` and ``t_at_min``
    locate the smallest amplitude seen.
    """

    t: float | None
    min_abs: float
    t_at_min: float


def locate_first_zero(
    p: H2Params | H2AliceParams | H4Params,
    t_max: float | None = None,
    samples: int = 4000,
    tol: float = 1e-12,
) -> ZeroSearch:
    """Find the first ``t > 0`` where the first amplitude of ``exp(-iHt) e1`` vanishes.

    Uses only the series exponential: a grid scan for local minima of ``|a|``,
    bounded minimisation of ``|a|^2``, then Newton steps on the analytic
    function ``a(t)`` with derivative ``-i (H U(t) e1)[0]``.
    """
    if isinstance(p, H2AliceParams):
        p = p.to_h2()
    h = build(p)
    n = h.shape[0]
    e1 = np.zeros(n, dtype=complex)
    e1[0] = 1
    if t_max is None:
        t_max = 2 * math.pi / gap(p).omega

    def col(t: float) -> np.ndarray:
        return expm(-1j * h * t) @ e1

    def amp_sq(t: float) -> float:
        return abs(col(t)[0]) ** 2

    ts = np.linspace(0, t_max, samples + 1)[1:]
    # coarse scan: repeated application of one step propagator; refinement below uses expm directly
    step_u = expm(-1j * h * ts[0])
    v = e1.copy()
    mags = np.empty(samples)
    for k in range(samples):
        v = step_u @ v
        mags[k] = abs(v[0])
    best = int(np.argmin(mags))
    minima = [i for i in range(1, len(ts) - 1) if mags[i] <= mags[i - 1] and mags[i] <= mags[i + 1]]
    step = ts[1] - ts[0]
    for i in minima:
        res = minimize_scalar(amp_sq, bounds=(ts[i] - step, ts[i] + step), method="bounded",
                              options={"xatol": 1e-14})
        t = float(res.x)
        for _ in range(50):
            v = col(t)
            a = v[0]
            da = -1j * (h @ v)[0]
            if da == 0:
                break
            dt = (a / da).real
            t -= dt
            if abs(dt) < 1e-16 * max(1.0, t):
                break
        if abs(col(t)[0]) <= tol and t > 0:
            return ZeroSearch(t, float(abs(col(t)[0])), t)
    return ZeroSearch(None, float(mags[best]), float(ts[best]))


@dataclass(frozen=True)
class FlipOptimization:
    infimum: float
    argmin: float
    table: np.ndarray  # columns: free parameter, t
    spread: float


def optimize_flip_time(
    family: Family,
    omega: GapConstraint | float,
    bounds: tuple[float, float],
    table_points: int = 25,
) -> FlipOptimization:
    """Minimise the flip time over the one free parameter left by the gap constraint.

    H4: the free parameter is ``a0`` with ``b1 = sqrt(a0^2 - Omega^2/4)`` and
    the other ``b`` set to zero; ``t(a0)`` decreases towards zero so the
    infimum sits at the upper bound. H2: the free parameter is ``beta`` with
    ``gamma = Omega^2 / (4 beta)``; ``t`` is the constant ``pi / Omega``.
    """
    om = omega if isinstance(omega, GapConstraint) else GapConstraint(float(omega))
    lo, hi = map(float, bounds)
    if not lo < hi:
        raise InfeasibleConstraintError("empty parameter box")
    if family == "H4":
        if lo <= om.omega / 2:
            raise InfeasibleConstraintError("a0 must exceed Omega/2 for a reachable unbroken point")

        def t_of(a0: float) -> float:
            return flip_time_h4(constrained_family(om, "H4", {"a0": a0}, "b1")).t

        grid = np.geomspace(lo, hi, table_points)
    elif family == "H2":
        if lo <= 0:
            raise InfeasibleConstraintError("beta must be positive")

        def t_of(beta: float) -> float:
            return flip_time_h2(constrained_family(om, "H2", {"beta": beta}, "gamma")).t

        grid = np.geomspace(lo, hi, table_points)
    else:
        raise ValueError(f"unknown family {family!r}")

    res = minimize_scalar(t_of, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10 * hi})
    table = np.array([[x, t_of(x)] for x in grid])
    candidates = [(float(res.fun), float(res.x))] + [(t, x) for x, t in table]
    best_t, best_x = min(candidates)
    spread = float(table[:, 1].max() - table[:, 1].min())
    return FlipOptimization(best_t, best_x, table, spread)


def entanglement_constrained_time(omega: GapConstraint | float, ratio: float = 1e-6) -> float:
    """The ``a0 -> 0+`` limit of the closed-form 4x4 flip time, evaluated at ``a0 = ratio * Omega``."""
    om = omega.omega if isinstance(omega, GapConstraint) else float(omega)
    return flip_time_h4_closed_form(ratio * om, om)


