import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ptfermion import smallmat as sm
from ptfermion.exceptions import DimensionError, EigenError
from ptfermion.models import H2AliceParams, H4Params, build_h2, build_h4

complex_entries = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def random_density(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def test_kron_identity_and_permutation():
    np.testing.assert_array_equal(sm.kron(sm.I2, sm.I2), np.eye(4))
    out = sm.kron(sm.PAULI_X, sm.I2) @ np.array([1, 0, 0, 0])
    np.testing.assert_array_equal(out, [0, 0, 1, 0])


def test_kron_trace_factorises(rng):
    a, b = rng.normal(size=(2, 2, 2)) + 1j * rng.normal(size=(2, 2, 2))
    assert abs(np.trace(sm.kron(a, b)) - np.trace(a) * np.trace(b)) < 1e-12


def test_partial_trace_bell_state():
    bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
    np.testing.assert_allclose(sm.partial_trace(np.outer(bell, bell), (2, 2)), np.eye(2) / 2, atol=1e-15)


def test_partial_trace_product_state(rng):
    a = rng.normal(size=3) + 1j * rng.normal(size=3)
    b = rng.normal(size=2) + 1j * rng.normal(size=2)
    a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
    rho = np.kron(np.outer(a, a.conj()), np.outer(b, b.conj()))
    np.testing.assert_allclose(sm.partial_trace(rho, (3, 2), keep="second"), np.outer(b, b.conj()), atol=1e-14)
    np.testing.assert_allclose(sm.partial_trace(rho, (3, 2), keep="first"), np.outer(a, a.conj()), atol=1e-14)


def test_partial_trace_against_index_loops(rng):
    rho = random_density(rng, 16)
    oracle = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            oracle[i, j] = sum(rho[k * 4 + i, k * 4 + j] for k in range(4))
    out = sm.partial_trace(rho, (4, 4))
    np.testing.assert_allclose(out, oracle, atol=1e-14)
    assert abs(np.trace(out) - 1) < 1e-12


def test_partial_trace_rejects_bad_dims():
    with pytest.raises(DimensionError):
        sm.partial_trace(np.eye(4), (2, 3))


def test_expm_identity_and_pauli():
    np.testing.assert_array_equal(sm.expm(np.zeros((2, 2))), np.eye(2))
    np.testing.assert_allclose(sm.expm(-1j * math.pi / 2 * sm.PAULI_X), -1j * sm.PAULI_X, atol=1e-14)


@settings(max_examples=60, deadline=None)
@given(arrays(complex, (4, 4), elements=complex_entries))
def test_expm_matches_scipy(m):
    oracle = scipy.linalg.expm(m)
    np.testing.assert_allclose(sm.expm(m), oracle, rtol=1e-11, atol=1e-11 * max(1.0, np.abs(oracle).max()))


def test_expm_large_norm_uses_squaring():
    m = 40j * sm.PAULI_X
    np.testing.assert_allclose(sm.expm(m), scipy.linalg.expm(m), atol=1e-11)


def test_eig_diagonal():
    dec = sm.eig(np.diag([1.0, 2.0]))
    assert sorted(dec.values.real) == [1.0, 2.0]


def test_eig_h2alice_pi_over_6():
    vals = sorted(sm.eig(build_h2(H2AliceParams(math.pi / 6))).values.real, reverse=True)
    np.testing.assert_allclose(vals, [1.6580, 0.3420], atol=5e-5)


def test_eig_h4_twofold():
    dec = sm.eig(build_h4(H4Params(2, 1, 1, 0.5, 0.5)))
    r = math.sqrt(1.5)
    assert np.sum(np.abs(dec.values - r) < 1e-10) == 2
    assert np.sum(np.abs(dec.values + r) < 1e-10) == 2
    assert np.max(dec.residuals) < 1e-12


def test_eig_reports_nondiagonalisable():
    with pytest.raises(EigenError):
        sm.eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_hermitian_eigvals_examples():
    np.testing.assert_allclose(sm.hermitian_eigvals(np.eye(2) / 2), [0.5, 0.5])
    a = math.pi / 3
    np.testing.assert_allclose(sm.hermitian_eigvals(np.diag([math.cos(a) ** 2, math.sin(a) ** 2])), [0.75, 0.25])


@settings(max_examples=60, deadline=None)
@given(arrays(complex, (4, 4), elements=complex_entries))
def test_jacobi_matches_lapack(a):
    h = a + a.conj().T
    np.testing.assert_allclose(sm.hermitian_eigvals(h), np.linalg.eigvalsh(h)[::-1], atol=1e-11)


def test_matrix_json_roundtrip(rng):
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    np.testing.assert_array_equal(sm.matrix_from_json(sm.matrix_to_json(m)), m)
