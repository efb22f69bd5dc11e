"""Hamiltonian families on 2x2 and 4x4 matrices, their spectra and the gap constraint."""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass
from typing import Literal, Mapping, Union

import numpy as np

from .exceptions import BrokenPhaseError, ExceptionalPointError, InfeasibleConstraintError
from .ptrep import EXACTNESS_BAND, apply_pt, standard_representation
from .smallmat import eig

Family = Literal["H2", "H4"]


@dataclass(frozen=True)
class H2Params:
    """``H = [[alpha, beta], [gamma, alpha]]`` with real entries."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if not all(math.isfinite(x) for x in (self.alpha, self.beta, self.gamma)):
            raise ValueError("H2 parameters must be finite")

    @property
    def unbroken(self) -> bool:
        return self.beta * self.gamma > EXACTNESS_BAND


@dataclass(frozen=True)
class H2AliceParams:
    """One-angle family ``[[1, sin a], [cos a, 1]]``."""

    alpha: float

    @property
    def unbroken(self) -> bool:
        return math.sin(2 * self.alpha) > EXACTNESS_BAND

    def to_h2(self) -> H2Params:
        return H2Params(1.0, math.sin(self.alpha), math.cos(self.alpha))


@dataclass(frozen=True)
class H4Params:
    a0: float
    b0: float = 0.0
    b1: float = 0.0
    b2: float = 0.0
    b3: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(x) for x in (self.a0, self.b0, self.b1, self.b2, self.b3)):
            raise ValueError("H4 parameters must be finite")

    @property
    def B_plus(self) -> complex:
        return complex(self.b1, self.b2)

    @property
    def B_minus(self) -> complex:
        return complex(self.b1, -self.b2)

    @property
    def C_plus(self) -> complex:
        return complex(self.b3, self.b0)

    @property
    def C_minus(self) -> complex:
        return complex(self.b3, -self.b0)

    @property
    def b_norm_sq(self) -> float:
        return self.b0**2 + self.b1**2 + self.b2**2 + self.b3**2

    @property
    def radicand(self) -> float:
        """``a0^2 - sum b^2``; the squared positive eigenvalue."""
        return self.a0**2 - self.b_norm_sq

    @property
    def unbroken(self) -> bool:
        return self.radicand > EXACTNESS_BAND


ModelParams = Union[H2Params, H2AliceParams, H4Params]


@dataclass(frozen=True)
class GapConstraint:
    """Fixed difference ``Omega`` between the largest and smallest eigenvalue."""

    omega: float

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValueError(f"Omega must be a positive finite number, got {self.omega}")


def params_to_json(p: ModelParams) -> dict:
    doc = asdict(p)
    doc["family"] = {H2Params: "H2", H2AliceParams: "H2Alice", H4Params: "H4"}[type(p)]
    return doc


def params_from_json(doc: Mapping) -> ModelParams:
    doc = dict(doc)
    family = doc.pop("family", None)
    if family is None:
        if "a0" in doc:
            family = "H4"
        elif "beta" in doc or "gamma" in doc:
            family = "H2"
        else:
            family = "H2Alice"
    cls = {"H2": H2Params, "H2Alice": H2AliceParams, "H4": H4Params}[family]
    return cls(**{k: float(v) for k, v in doc.items()})


def build_h2(p: H2Params | H2AliceParams) -> np.ndarray:
    if isinstance(p, H2AliceParams):
        p = p.to_h2()
    return np.array([[p.alpha, p.beta], [p.gamma, p.alpha]], dtype=complex)


def build_h4(p: H4Params) -> np.ndarray:
    a0 = p.a0
    Bp, Bm, Cp, Cm = p.B_plus, p.B_minus, p.C_plus, p.C_minus
    return np.array(
        [
            [a0, 0, -Cm, -Bm],
            [0, a0, -Bp, Cp],
            [Cp, Bm, -a0, 0],
            [Bp, -Cm, 0, -a0],
        ],
        dtype=complex,
    )


def build(p: ModelParams) -> np.ndarray:
    return build_h4(p) if isinstance(p, H4Params) else build_h2(p)


@dataclass(frozen=True)
class Spectrum2:
    lam_plus: complex
    lam_minus: complex
    vec_plus: np.ndarray | None
    vec_minus: np.ndarray | None

    @property
    def omega(self) -> complex:
        return self.lam_plus - self.lam_minus


def spectrum_h2alice(alpha: float) -> Spectrum2:
    """Eigenvalues ``1 +- sqrt(sin(2a)/2)`` and the fourth-root eigenvectors.

    In the broken phase (``sin 2a < 0``) the eigenvalues continue to the
    complex pair and the eigenvectors are returned as ``None``. The closed-form
    vectors ``(tan^1/4, +-cot^1/4)/sqrt(2)`` assume ``sin a > 0``; for angles
    with ``sin a, cos a < 0`` the second component carries ``sign(sin a)``.
    """
    s2 = math.sin(2 * alpha)
    root = cmath.sqrt(s2 / 2)
    lp, lm = 1 + root, 1 - root
    if abs(s2) <= EXACTNESS_BAND or s2 < 0:
        return Spectrum2(lp, lm, None, None)
    tq = math.tan(alpha) ** 0.25
    cq = (1 / math.tan(alpha)) ** 0.25
    sign = 1.0 if math.sin(alpha) > 0 else -1.0
    vp = np.array([tq, sign * cq], dtype=complex) / math.sqrt(2)
    vm = np.array([tq, -sign * cq], dtype=complex) / math.sqrt(2)
    return Spectrum2(lp, lm, vp, vm)


@dataclass(frozen=True)
class Spectrum4:
    e_plus: float
    e_minus: float
    vectors: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]


def spectrum_h4(p: H4Params) -> Spectrum4:
    """Twofold-degenerate levels ``+-sqrt(a0^2 - |b|^2)`` and Kramers-paired eigenvectors.

    ``psi1``/``psi3`` follow the closed form with prefactor ``i/sqrt(2 E+)``;
    ``psi2 = PT psi1`` and ``psi4 = PT psi3``. With all ``b = 0`` the closed
    form is 0/0 and the coordinate vectors ``e1``, ``e3`` are used instead.
    """
    if not p.unbroken:
        if abs(p.radicand) <= EXACTNESS_BAND:
            raise ExceptionalPointError("exceptional point: E+ = E- = 0")
        raise BrokenPhaseError("closed-form eigenvectors need a0^2 > |b|^2")
    ep = math.sqrt(p.radicand)
    rep = standard_representation(4)
    bn = math.sqrt(p.b_norm_sq)

    def first(energy: float) -> np.ndarray:
        if bn == 0.0:
            e = np.zeros(4, dtype=complex)
            e[0 if energy * p.a0 > 0 else 2] = 1
            return e
        up = cmath.sqrt(p.a0 + energy) / bn
        return (1j / math.sqrt(2 * ep)) * np.array(
            [up * p.C_minus, up * p.B_plus, cmath.sqrt(p.a0 - energy), 0], dtype=complex
        )

    psi1 = first(ep)
    psi3 = first(-ep)
    return Spectrum4(ep, -ep, (psi1, apply_pt(rep, psi1), psi3, apply_pt(rep, psi3)))


def gap(p: ModelParams) -> GapConstraint:
    """``Omega = 2 sqrt(beta gamma)`` (2x2) or ``2 sqrt(a0^2 - |b|^2)`` (4x4)."""
    if isinstance(p, H2AliceParams):
        p = p.to_h2()
    rad = p.beta * p.gamma if isinstance(p, H2Params) else p.radicand
    if abs(rad) <= EXACTNESS_BAND:
        raise ExceptionalPointError("exceptional point: Omega = 0")
    if rad < 0:
        raise BrokenPhaseError("Omega^2 < 0: broken PT phase")
    return GapConstraint(2 * math.sqrt(rad))


def complex_gap(p: ModelParams) -> complex:
    """``Omega`` continued to the broken phase (principal square root)."""
    if isinstance(p, H2AliceParams):
        p = p.to_h2()
    rad = p.beta * p.gamma if isinstance(p, H2Params) else p.radicand
    return 2 * cmath.sqrt(rad)


def numeric_gap(p: ModelParams) -> float:
    vals = eig(build(p)).values
    return float(np.max(vals.real) - np.min(vals.real))


def constrained_family(
    omega: GapConstraint | float,
    family: Family,
    fixed: Mapping[str, float],
    solve_for: str,
) -> H2Params | H4Params:
    """Solve one parameter so that the spectral gap equals ``omega``.

    Unassigned parameters other than ``solve_for`` default to zero. The
    positive root is taken when solving for a squared quantity.

    Examples
    --------
    >>> constrained_family(2.0, "H2", {"beta": 2.0}, "gamma").gamma
    0.5
    """
    om = omega.omega if isinstance(omega, GapConstraint) else GapConstraint(float(omega)).omega
    quarter = om * om / 4
    fixed = {k: float(v) for k, v in fixed.items()}
    if solve_for in fixed:
        raise ValueError(f"{solve_for!r} is both fixed and free")
    if family == "H2":
        names = ("alpha", "beta", "gamma")
        if solve_for not in ("beta", "gamma") or set(fixed) - set(names):
            raise ValueError("H2: solve for 'beta' or 'gamma'; fix only alpha/beta/gamma")
        other = "gamma" if solve_for == "beta" else "beta"
        if fixed.get(other, 0.0) == 0.0:
            raise InfeasibleConstraintError(f"{other} must be nonzero to reach Omega > 0")
        vals = {"alpha": fixed.get("alpha", 0.0), other: fixed[other], solve_for: quarter / fixed[other]}
        return H2Params(**vals)
    if family == "H4":
        names = ("a0", "b0", "b1", "b2", "b3")
        if solve_for not in names or set(fixed) - set(names):
            raise ValueError(f"H4: solve for one of {names}")
        vals = {k: fixed.get(k, 0.0) for k in names if k != solve_for}
        bsq = sum(v * v for k, v in vals.items() if k != "a0")
        if solve_for == "a0":
            vals["a0"] = math.sqrt(quarter + bsq)
        else:
            rest = vals["a0"] ** 2 - quarter - bsq
            if rest < 0:
                raise InfeasibleConstraintError(
                    f"no real {solve_for}: a0^2 - Omega^2/4 - others = {rest:.3g} < 0"
                )
            vals[solve_for] = math.sqrt(rest)
        return H4Params(**vals)
    raise ValueError(f"unknown family {family!r}")
