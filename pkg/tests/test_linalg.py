import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iaorder.linalg import (
    default_tolerance,
    null_space_basis,
    numerical_rank,
    orthonormal_range,
)


def crandn(rng, rows, cols):
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) * np.sqrt(0.5)


def svd_count_oracle(a):
    """Independent rank oracle: count singular values above the default cutoff."""
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > default_tolerance(a) * s[0]))


def test_numerical_rank_zero_matrix():
    assert numerical_rank(np.zeros((4, 4))) == 0


def test_numerical_rank_identity():
    assert numerical_rank(np.eye(5)) == 5


@pytest.mark.parametrize("fn", [numerical_rank, orthonormal_range, null_space_basis])
def test_negative_tolerance_rejected(fn):
    with pytest.raises(ValueError):
        fn(np.eye(3), tol=-1e-9)


def test_orthonormal_range_identity():
    b = orthonormal_range(np.eye(3))
    assert b.shape == (3, 3)
    assert np.max(np.abs(b.conj().T @ b - np.eye(3))) < 1e-12
    # same column space as the identity (up to column phase)
    assert np.max(np.abs(b @ b.conj().T - np.eye(3))) < 1e-12


def test_orthonormal_range_rank_one_by_construction():
    e1 = np.zeros((3, 1), dtype=complex)
    e1[0] = 1.0
    b = orthonormal_range(np.hstack([e1, 2 * e1]))
    assert b.shape == (3, 1)
    assert abs(abs(b[0, 0]) - 1.0) < 1e-12


def test_orthonormal_range_random_full_rank(rng):
    a = crandn(rng, 5, 7)
    b = orthonormal_range(a)
    assert b.shape[1] == 5 == svd_count_oracle(a)


def test_null_space_rank_nullity_small_cases():
    a = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    n = null_space_basis(a)
    assert n.shape == (3, 1)
    assert abs(abs(n[2, 0]) - 1.0) < 1e-12

    assert null_space_basis(np.eye(2)).shape == (2, 0)


def test_null_space_random_full_rank_wide(rng):
    a = crandn(rng, 6, 7)
    n = null_space_basis(a)
    # rank-nullity with the rank checked by the singular-value oracle
    assert svd_count_oracle(a) == 6
    assert n.shape == (7, 1)
    assert np.linalg.norm(a @ n[:, 0]) < 10 * default_tolerance(a) * np.linalg.norm(a, 2)


def test_null_space_residual_rank_deficient(rng):
    # rank exactly 3 by construction
    a = crandn(rng, 6, 3) @ crandn(rng, 3, 8)
    n = null_space_basis(a)
    assert n.shape == (8, 5)
    spectral = np.linalg.norm(a, 2)
    resid = np.max(np.linalg.norm(a @ n, axis=0))
    assert resid <= 10 * default_tolerance(a) * spectral


@settings(max_examples=30, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    rows=st.integers(1, 12),
    cols=st.integers(1, 12),
    inner=st.integers(1, 12),
)
def test_rank_nullity_and_orthonormality(seed, rows, cols, inner):
    gen = np.random.Generator(np.random.PCG64(seed))
    # inner dimension may force rank deficiency
    a = crandn(gen, rows, inner) @ crandn(gen, inner, cols)
    r = numerical_rank(a)
    basis = orthonormal_range(a)
    null = null_space_basis(a)
    assert r + null.shape[1] == cols
    assert basis.shape[1] == r
    for b in (basis, null):
        if b.shape[1]:
            gram = b.conj().T @ b
            assert np.max(np.abs(gram - np.eye(b.shape[1]))) < 1e-12
