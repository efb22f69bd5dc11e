"""Dense complex linear algebra for the small dimensions used here (2, 4, 16).

Matrices and state vectors are plain ``numpy`` arrays of dtype ``complex128``;
every function returns a fresh array and never mutates its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import DimensionError, EigenError, NotHermitianError

DEFAULT_TOL = 1e-10

__all__ = [
    "DEFAULT_TOL",
    "EigenDecomposition",
    "as_matrix",
    "as_state",
    "dirac_inner",
    "eig",
    "expm",
    "hermitian_eigvals",
    "identity",
    "is_hermitian",
    "is_unitary",
    "kron",
    "matrix_from_json",
    "matrix_to_json",
    "partial_trace",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "I2",
]

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a square complex128 array, raising on bad shape."""
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {a.shape}")
    return a


def as_state(psi) -> np.ndarray:
    v = np.array(psi, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"expected a 1-d state vector, got shape {v.shape}")
    return v


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def is_hermitian(m, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(m)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(m)
    return bool(np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0]))) <= tol)


def dirac_inner(phi, psi) -> complex:
    """Conventional inner product <phi|psi>, conjugate-linear in ``phi``."""
    return complex(np.vdot(as_state(phi), as_state(psi)))


def kron(a, b) -> np.ndarray:
    """Kronecker product with the first factor as the outer (slow) index."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(rho, dims: Sequence[int], keep: str | int = "second") -> np.ndarray:
    """Reduced density matrix of a bipartite operator.

    Parameters
    ----------
    rho : array_like
        Operator on a space of dimension ``dims[0] * dims[1]`` with the first
        subsystem as the outer index (the ``kron`` layout).
    dims : pair of int
        Subsystem dimensions ``(d_first, d_second)``.
    keep : {"first", "second"} or {0, 1}
        Subsystem that survives; the other one is traced out.
    """
    r = as_matrix(rho)
    if len(dims) != 2:
        raise DimensionError("dims must be a pair")
    d1, d2 = int(dims[0]), int(dims[1])
    if d1 * d2 != r.shape[0]:
        raise DimensionError(f"rho has dimension {r.shape[0]}, dims multiply to {d1 * d2}")
    keep_idx = {"first": 0, "second": 1, 0: 0, 1: 1}.get(keep)
    if keep_idx is None:
        raise ValueError(f"keep must be 'first' or 'second', got {keep!r}")
    t = r.reshape(d1, d2, d1, d2)
    if keep_idx == 1:
        return np.einsum("abac->bc", t)
    return np.einsum("abcb->ac", t)


def _onenorm(a: np.ndarray) -> float:
    return float(np.max(np.sum(np.abs(a), axis=0)))


def expm(m, max_terms: int = 60) -> np.ndarray:
    """Matrix exponential by scaling and squaring around a Taylor series.

    The argument is scaled by ``2**-s`` until its 1-norm is at most 1/2. The
    Taylor sum stops once a term drops below machine precision relative to the
    partial sum, and that sum is then squared ``s`` times.
    """
    a = as_matrix(m)
    if not np.all(np.isfinite(a)):
        raise ValueError("expm argument has non-finite entries")
    n = a.shape[0]
    norm = _onenorm(a)
    s = 0
    if norm > 0.5:
        s = int(np.ceil(np.log2(norm / 0.5)))
    a = a / (2.0**s)

    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    eps = np.finfo(float).eps
    for k in range(1, max_terms + 1):
        term = term @ a / k
        result = result + term
        if _onenorm(term) <= eps * _onenorm(result):
            break
    else:
        raise ArithmeticError("Taylor series did not converge")
    for _ in range(s):
        result = result @ result
    return result


@dataclass(frozen=True)
class EigenDecomposition:
    values: np.ndarray
    vectors: list[np.ndarray]
    residuals: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


def _canonical_basis(basis: np.ndarray, tol: float) -> np.ndarray:
    """Reduced column-echelon form of a subspace basis, columns unit-normalised.

    The echelon form of a subspace is unique, so degenerate eigenspaces come
    back with the same basis whatever rotation the solver produced. Pivots are
    taken at the first row (lexicographically) carrying a non-negligible entry,
    choosing the largest-magnitude column there.
    """
    b = basis.T.copy()  # rows span the subspace
    k, n = b.shape
    row = 0
    for col in range(n):
        if row == k:
            break
        piv = row + int(np.argmax(np.abs(b[row:, col])))
        if abs(b[piv, col]) <= tol:
            continue
        b[[row, piv]] = b[[piv, row]]
        b[row] = b[row] / b[row, col]
        for r in range(k):
            if r != row:
                b[r] = b[r] - b[r, col] * b[row]
        row += 1
    b = b.T
    return b / np.linalg.norm(b, axis=0)


def _eig2(a: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    # characteristic polynomial: l^2 - tr l + det = 0
    tr = a[0, 0] + a[1, 1]
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    disc = np.sqrt(complex(tr * tr - 4 * det))
    vals = np.array([(tr + disc) / 2, (tr - disc) / 2])
    vecs = []
    for lam in vals:
        # null vector of (a - lam): pick the row with the larger entries
        r0 = np.array([a[0, 1], lam - a[0, 0]])
        r1 = np.array([lam - a[1, 1], a[1, 0]])
        v = r0 if np.linalg.norm(r0) >= np.linalg.norm(r1) else r1
        if np.linalg.norm(v) == 0:
            # a is a multiple of the identity
            v = np.array([1.0, 0.0]) if len(vecs) == 0 else np.array([0.0, 1.0])
        vecs.append(np.asarray(v, dtype=complex))
    return vals, vecs


def eig(m, tol: float = DEFAULT_TOL, degeneracy_tol: float = 1e-8) -> EigenDecomposition:
    """Eigenpairs of a small (generally non-normal) matrix.

    2x2 matrices use the quadratic formula. Larger matrices go through LAPACK
    and are then certified: every pair must satisfy ``||Hv - lv|| <= tol``.
    Clusters of eigenvalues closer than ``degeneracy_tol`` are treated as one
    eigenspace and returned in a canonical basis (see ``_canonical_basis``).
    Eigenvectors have unit Dirac norm.
    """
    a = as_matrix(m)
    n = a.shape[0]
    if n == 2:
        vals, vecs = _eig2(a)
        if abs(vals[0] - vals[1]) <= degeneracy_tol:
            if not np.allclose(a, vals[0] * np.eye(2), atol=tol):
                # a double root of a non-scalar 2x2 matrix is a Jordan block (exceptional point)
                raise EigenError("defective matrix: coalesced eigenvalue with a single eigenvector",
                                 np.array([np.inf, np.inf]))
            vecs = [np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)]
            vals = np.array([vals[0], vals[0]])
    else:
        raw_vals, raw_vecs = np.linalg.eig(a)
        order = np.lexsort((raw_vals.imag, raw_vals.real))[::-1]
        raw_vals = raw_vals[order]
        raw_vecs = raw_vecs[:, order]
        vals_list: list[complex] = []
        vecs = []
        i = 0
        while i < n:
            j = i + 1
            while j < n and abs(raw_vals[j] - raw_vals[i]) <= degeneracy_tol:
                j += 1
            lam = complex(np.mean(raw_vals[i:j]))
            if j - i == 1:
                block = raw_vecs[:, i:j]
            else:
                # re-derive the eigenspace from the SVD null space of (A - lam)
                _, sv, vh = np.linalg.svd(a - lam * np.eye(n))
                block = vh[n - (j - i):].conj().T
            block = _canonical_basis(block, tol)
            for c in range(block.shape[1]):
                vals_list.append(lam)
                vecs.append(block[:, c])
            i = j
        vals = np.array(vals_list)

    vecs = [v / np.linalg.norm(v) for v in vecs]
    residuals = np.array([np.linalg.norm(a @ v - lam * v) for lam, v in zip(vals, vecs)])
    if np.any(residuals > tol):
        raise EigenError(f"eigenpair residuals exceed {tol:g}: {residuals}", residuals)
    return EigenDecomposition(values=np.asarray(vals, dtype=complex), vectors=vecs, residuals=residuals)


def hermitian_eigvals(m, tol: float = DEFAULT_TOL, max_sweeps: int = 50) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, descending, by cyclic Jacobi rotations."""
    a = as_matrix(m)
    if np.max(np.abs(a - a.conj().T)) > tol:
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    a = (a + a.conj().T) / 2
    n = a.shape[0]
    scale = max(np.max(np.abs(a)), 1.0)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))
        if off <= 1e-15 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                # phase rotation makes a[p, q] real, then a real Jacobi rotation zeroes it
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2 * mag)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1))
                c = 1 / np.sqrt(t * t + 1)
                s = t * c
                u = np.eye(n, dtype=complex)
                u[p, p] = c
                u[q, q] = c * np.conj(phase)
                u[p, q] = s
                u[q, p] = -s * np.conj(phase)
                a = u.conj().T @ a @ u
                a[p, q] = a[q, p] = 0
    else:
        raise EigenError("Jacobi iteration did not converge")
    return np.sort(np.diag(a).real)[::-1]


def matrix_to_json(m) -> dict:
    a = as_matrix(m)
    return {"dim": a.shape[0], "entries": [[float(z.real), float(z.imag)] for z in a.ravel()]}


def matrix_from_json(doc: dict) -> np.ndarray:
    dim = int(doc["dim"])
    entries = doc["entries"]
    if len(entries) != dim * dim:
        raise DimensionError(f"expected {dim * dim} entries, got {len(entries)}")
    return np.array([complex(re, im) for re, im in entries]).reshape(dim, dim)
