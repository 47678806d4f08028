import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxwell_demon.errors import NotHermitian, ShapeMismatch
from maxwell_demon.linalg import (
    ANCILLA_OUTER,
    TensorShape,
    hermitian_eig,
    partial_trace,
    polar_decompose,
    reorder_layout,
    tensor,
)
from maxwell_demon.sampling import haar_unitary, make_rng, random_hermitian

from .conftest import random_complex


def naive_partial_trace(m, da, db, keep):
    """Explicit index summation, independent of the einsum path."""
    out = np.zeros((da, da) if keep == 0 else (db, db), dtype=complex)
    for a1 in range(da):
        for a2 in range(da):
            for b1 in range(db):
                for b2 in range(db):
                    v = m[a1 * db + b1, a2 * db + b2]
                    if keep == 0 and b1 == b2:
                        out[a1, a2] += v
                    elif keep == 1 and a1 == a2:
                        out[b1, b2] += v
    return out


def test_tensor_identity():
    np.testing.assert_array_equal(tensor(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_first_factor_is_outer():
    p = 0.3
    rho = np.diag([p / 2, (1 - p) / 2, p / 2, (1 - p) / 2])
    got = tensor(rho, np.diag([1, 0]))
    expected = np.diag([p / 2, 0, (1 - p) / 2, 0, p / 2, 0, (1 - p) / 2, 0])
    np.testing.assert_allclose(got, expected, atol=1e-15)
    # same operator in ancilla-outer block layout
    outer = np.diag([p / 2, (1 - p) / 2, p / 2, (1 - p) / 2, 0, 0, 0, 0])
    np.testing.assert_allclose(reorder_layout(got, (4, 2), source="canonical"), outer, atol=1e-15)


def test_tensor_trace_multiplies(rng):
    a, b = random_complex(rng, 3, 3), random_complex(rng, 2, 2)
    expected = sum(a[i, i] * b[j, j] for i in range(3) for j in range(2))
    assert np.trace(tensor(a, b)) == pytest.approx(expected, abs=1e-12)


def test_tensor_associative(rng):
    a, b, c = random_complex(rng, 2, 2), random_complex(rng, 3, 3), random_complex(rng, 2, 2)
    np.testing.assert_allclose(tensor(tensor(a, b), c), tensor(a, tensor(b, c)), atol=1e-12)


def test_partial_trace_product_state(rng):
    h = random_hermitian(3, rng)
    rho = h @ h.conj().T
    rho /= np.trace(rho)
    psi = random_complex(rng, 2)
    psi /= np.linalg.norm(psi)
    np.testing.assert_allclose(partial_trace(tensor(rho, np.outer(psi, psi.conj())), (3, 2), 0),
                               rho, atol=1e-12)


def test_partial_trace_block_sum():
    p = 0.3
    rho12 = reorder_layout(np.diag([0, 0, p / 2, 0, 0, (1 - p) / 2, p / 2, (1 - p) / 2]),
                           (4, 2), ANCILLA_OUTER)
    np.testing.assert_allclose(partial_trace(rho12, (4, 2), keep=0),
                               np.diag([0, (1 - p) / 2, p, (1 - p) / 2]), atol=1e-15)
    np.testing.assert_allclose(partial_trace(rho12, (4, 2), keep=1),
                               np.diag([p / 2, 1 - p / 2]), atol=1e-15)


@pytest.mark.parametrize("keep", [0, 1])
def test_partial_trace_matches_index_sum(rng, keep):
    m = random_hermitian(12, rng)
    got = partial_trace(m, TensorShape((4, 3)), keep)
    np.testing.assert_allclose(got, naive_partial_trace(m, 4, 3, keep), atol=1e-12)
    assert np.trace(got) == pytest.approx(np.trace(m), abs=1e-12)


def test_partial_trace_of_tensor_scales(rng):
    a, b = random_complex(rng, 3, 3), random_complex(rng, 4, 4)
    np.testing.assert_allclose(partial_trace(tensor(a, b), (3, 4), 0), np.trace(b) * a, atol=1e-11)


def test_partial_trace_three_factors(rng):
    a, b, c = (random_complex(rng, d, d) for d in (2, 3, 2))
    m = tensor(tensor(a, b), c)
    np.testing.assert_allclose(partial_trace(m, (2, 3, 2), 1), np.trace(a) * np.trace(c) * b,
                               atol=1e-11)


def test_partial_trace_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        partial_trace(np.eye(6), (4, 2))


def test_reorder_layout_roundtrip(rng):
    m = random_complex(rng, 6, 6)
    back = reorder_layout(reorder_layout(m, (3, 2), "canonical"), (3, 2), ANCILLA_OUTER)
    np.testing.assert_array_equal(back, m)


def test_eig_diagonal():
    w, v = hermitian_eig(np.diag([0.1, 0.7, 0.2]))
    np.testing.assert_allclose(w, [0.7, 0.2, 0.1])


def test_eig_rank_one_projector():
    p = np.zeros((4, 4))
    p[0, 0] = 1
    w, _ = hermitian_eig(p)
    np.testing.assert_allclose(w, [1, 0, 0, 0], atol=1e-15)


def test_eig_reconstruction(rng):
    m = random_hermitian(8, rng)
    w, v = hermitian_eig(m)
    assert np.all(np.diff(w) <= 0)
    rebuilt = sum(w[i] * np.outer(v[:, i], v[:, i].conj()) for i in range(8))
    assert np.linalg.norm(rebuilt - m) <= 1e-10
    assert np.linalg.norm(v.conj().T @ v - np.eye(8)) <= 1e-9
    for i in range(8):
        assert np.linalg.norm(m @ v[:, i] - w[i] * v[:, i]) <= 1e-9


def test_eig_stable_ties():
    w, v = hermitian_eig(np.eye(3))
    np.testing.assert_array_equal(w, [1, 1, 1])
    w2, v2 = hermitian_eig(np.eye(3))
    np.testing.assert_array_equal(v, v2)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[0, 1], [0, 0]]))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(1, 16))
def test_eig_sum_is_trace(seed, dim):
    m = random_hermitian(dim, make_rng(seed))
    w, _ = hermitian_eig(m)
    assert abs(w.sum() - np.trace(m).real) <= 1e-10 * max(1, dim)


def test_polar_of_unitary(rng):
    u0 = haar_unitary(4, rng)
    u, p = polar_decompose(u0)
    np.testing.assert_allclose(u, u0, atol=1e-12)
    np.testing.assert_allclose(p, np.eye(4), atol=1e-12)


def test_polar_of_conditional_action():
    u1 = np.array([[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1]], dtype=float)
    p1 = np.diag([1.0, 0, 0, 0])
    u, p = polar_decompose(u1 @ p1)
    np.testing.assert_allclose(p, p1, atol=1e-12)
    np.testing.assert_allclose(u @ p1, u1 @ p1, atol=1e-12)
    assert np.linalg.norm(u.conj().T @ u - np.eye(4)) <= 1e-9


def test_polar_random_svd_oracle(rng):
    a = random_complex(rng, 5, 5)
    u, p = polar_decompose(a)
    assert np.linalg.norm(u @ p - a) <= 1e-10
    assert np.linalg.eigvalsh(p).min() >= -1e-12
    # positive factor is the unique PSD square root of a^dagger a
    np.testing.assert_allclose(p @ p, a.conj().T @ a, atol=1e-10)


def test_polar_singular_psd_input(rng):
    x = random_complex(rng, 4, 2)
    a = x @ x.conj().T
    u, p = polar_decompose(a)
    np.testing.assert_allclose(p, a, atol=1e-10)
    np.testing.assert_allclose(u @ p, a, atol=1e-10)
    assert np.linalg.norm(u.conj().T @ u - np.eye(4)) <= 1e-9
