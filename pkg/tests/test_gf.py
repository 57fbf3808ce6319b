import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prodcodes.gf import DEFAULT_MODULI, Field, field_new, gaussian_solve, is_irreducible, rank, rref


def clmul_reduce(a: int, b: int, modulus: int, m: int) -> int:
    # Bit-serial carry-less multiply, then long division by the modulus.
    p = 0
    for i in range(m):
        if b >> i & 1:
            p ^= a << i
    for i in range(2 * m - 2, m - 1, -1):
        if p >> i & 1:
            p ^= modulus << (i - m)
    return p


def test_default_field_gf256(gf256):
    assert gf256.q == 256
    assert gf256.modulus == 0x11D
    assert gf256.mul(0x57, 1) == 0x57
    assert gf256.mul(0x80, 0x02) == 0x1D


@pytest.mark.parametrize("m", sorted(DEFAULT_MODULI))
def test_default_moduli_irreducible(m):
    assert is_irreducible(DEFAULT_MODULI[m])
    F = field_new(m)
    # the generator really generates every nonzero element
    assert len(set(F.exp[: F.q - 1].tolist())) == F.q - 1


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        field_new(8, 0x100)  # x^8
    with pytest.raises(ValueError):
        field_new(4, 0b10101)  # (x^2+x+1)^2
    with pytest.raises(ValueError):
        field_new(17)
    with pytest.raises(ValueError):
        Field(1, 0b11)


@pytest.mark.parametrize("m", [3, 4, 8])
def test_mul_matches_bit_level_reduction(m):
    F = field_new(m)
    rng = np.random.default_rng(m)
    for a, b in rng.integers(0, F.q, size=(500, 2)):
        assert F.mul(int(a), int(b)) == clmul_reduce(int(a), int(b), F.modulus, m)


def test_inverse_every_element(gf256):
    a = np.arange(1, 256)
    assert np.all(gf256.mul(a, gf256.inv(a)) == 1)
    with pytest.raises(ZeroDivisionError):
        gf256.inv(0)


def test_field_axioms_random_triples(gf256):
    rng = np.random.default_rng(7)
    a, b, c = rng.integers(0, 256, size=(3, 10_000))
    F = gf256
    assert np.array_equal(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)))
    assert np.array_equal(F.mul(a, b), F.mul(b, a))
    assert np.array_equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))


@given(st.integers(1, 255), st.integers(0, 600))
def test_pow_matches_repeated_mul(a, e):
    F = field_new(8)
    x = 1
    for _ in range(e % 20):
        x = F.mul(x, a)
    assert F.pow(a, e % 20) == x


def test_solve_identity(gf8):
    B = np.array([[3], [5], [7]])
    sol = gaussian_solve(gf8, np.eye(3, dtype=np.int64), B)
    assert sol.rank == 3
    assert sol.determined_rows == [0, 1, 2]
    assert np.array_equal(sol.solutions, B)


def test_solve_vandermonde_2x3_solution_space(gf8):
    F = gf8
    A = np.array([[1, 1, 1], [1, F.element(1), F.element(2)]])
    x0 = np.array([[2], [6], [1]])
    B = F.matmul(A, x0)
    sol = gaussian_solve(F, A, B)
    assert sol.rank == 2 and sol.consistent
    assert np.array_equal(F.matmul(A, sol.solutions), B)
    # brute force over all 8^3 vectors: the solution set has 8 = 8^1 elements
    hits = [v for v in itertools.product(range(8), repeat=3) if np.array_equal(F.matmul(A, np.array(v)[:, None]), B)]
    assert len(hits) == 8
    assert sol.determined_rows == []


def test_duplicated_column_not_determined(gf8):
    A = np.array([[1, 1, 0], [0, 0, 1]])
    sol = gaussian_solve(gf8, A, np.array([4, 3]))
    assert 2 in sol.determined_rows
    assert 0 not in sol.determined_rows and 1 not in sol.determined_rows


def test_inconsistent_flagged(gf8):
    A = np.array([[1, 1], [1, 1]])
    sol = gaussian_solve(gf8, A, np.array([1, 2]))
    assert not sol.consistent and sol.solutions is None
    with pytest.raises(ValueError):
        gaussian_solve(gf8, A, np.array([1, 2, 3]))


def span(F, A):
    out = set()
    for coef in itertools.product(range(F.q), repeat=A.shape[0]):
        out.add(tuple(F.matmul(np.array([coef]), A)[0].tolist()))
    return out


def test_determined_rows_equals_unit_vectors_in_rowspace(gf8):
    rng = np.random.default_rng(11)
    F = gf8
    for trial in range(12):
        A = F.random((5, 8), rng)
        # force some rank deficiency and unit rows now and then
        if trial % 3 == 0:
            A[4] = F.add(A[0], A[1])
        if trial % 4 == 1:
            A[2] = 0
            A[2, trial % 8] = 1
        R, piv = rref(F, A)
        basis = R[: len(piv)]
        sp = span(F, basis) if len(piv) <= 5 else None
        units = {i for i in range(8) if tuple(np.eye(8, dtype=np.int64)[i].tolist()) in sp}
        assert set(gaussian_solve(F, A).determined_rows) == units


@settings(max_examples=30)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_rank_bounded_and_rref_idempotent(r, c, seed):
    F = field_new(4)
    A = F.random((r, c), np.random.default_rng(seed))
    R, piv = rref(F, A)
    assert rank(F, A) == len(piv) <= min(r, c)
    R2, piv2 = rref(F, R)
    assert np.array_equal(R, R2) and piv == piv2
