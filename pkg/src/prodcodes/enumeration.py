"""Exact stopping-set enumeration for product codes with MDS components.

A stopping set of weight w is an erasure pattern where every nonempty row
holds at least d2 erasures and every nonempty column at least d1. Its
rectangular support is the l1 x l2 block spanned by its rows and columns; the
number of stopping sets is a sum over supports of C(n1, l1) C(n2, l2) times
the number of l1 x l2 0/1 matrices with the degree constraints.

Closed forms cover d1 d2 <= w <= (d1+1)(d2+1); ``brute_force_count`` counts
the matrices directly for any w and serves as the oracle.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial, prod

import mpmath
import numpy as np

# Special partitions and bipartite-graph counts.


def special_partitions(ell: int) -> list[tuple[int, ...]]:
    """Partitions of ``ell`` into nondecreasing parts, all at least 2."""
    if ell < 2:
        raise ValueError("ell must be at least 2")
    out: list[tuple[int, ...]] = []

    def rec(rest: int, lo: int, acc: tuple[int, ...]) -> None:
        if rest == 0:
            out.append(acc)
            return
        for part in range(lo, rest + 1):
            if rest - part == 0 or rest - part >= part:
                rec(rest - part, part, acc + (part,))

    rec(ell, 2, ())
    return out


@lru_cache(maxsize=None)
def x_ell(ell: int) -> int:
    """2-regular bipartite graphs on ell + ell labelled vertices without parallel edges.

    Each special partition fixes the lengths of the disjoint cycles; the
    groups of equal lengths are divided out by g_m!.
    """
    if ell < 2:
        return 0
    total = 0
    for parts in special_partitions(ell):
        num, den = 1, 1
        used = 0
        for lk in parts:
            num *= prod((ell - used - u) ** 2 for u in range(lk))
            den *= 2 * lk
            used += lk
        for g in Counter(parts).values():
            den *= factorial(g)
        assert num % den == 0
        total += num // den
    return total


def y_ell(ell: int) -> int:
    """As ``x_ell`` but with one left and one right vertex of degree 1.

    Uses the recursion in x_{ell-1}, x_{ell-2} with x_0 = x_1 = 0, which gives
    the tabulated convention y_2 = 0.
    """
    if ell < 2:
        raise ValueError("ell must be at least 2")
    return ell**2 * ((2 * ell - 1) * x_ell(ell - 1) + (ell - 1) ** 2 * x_ell(ell - 2))


# Support bounds.


@dataclass(frozen=True)
class SupportBounds:
    l1_max: int
    l2_max: int
    d1: int
    d2: int

    def beta_max(self, l1: int, l2: int) -> int:
        """Most zeros an l1 x l2 support can hold."""
        return min((l1 - self.d1) * l2, l1 * (l2 - self.d2))


def support_bounds(w: int, d1: int, d2: int) -> SupportBounds:
    """Largest support height and width for weight w (each row carries >= d2 ones)."""
    if not d1 * d2 <= w <= (d1 + 1) * (d2 + 1):
        raise ValueError(f"w must lie in [{d1 * d2}, {(d1 + 1) * (d2 + 1)}]")
    return SupportBounds(w // d2, w // d1, d1, d2)


# Oracle: direct count of degree-constrained 0/1 matrices.


@lru_cache(maxsize=None)
def _ways(rows_left: int, state: tuple[int, ...], w_left: int, d1: int, d2: int) -> int:
    # state[c] = number of columns holding c ones so far (c capped at d1)
    if rows_left == 0:
        return int(w_left == 0 and sum(state[:-1]) == 0)
    need = sum((d1 - c) * k for c, k in enumerate(state))
    if w_left < need or w_left < rows_left * d2:
        return 0
    ncols = sum(state)
    if w_left > rows_left * ncols:
        return 0
    total = 0
    # choose k_c columns from each class to receive a one in this row
    for ks in itertools.product(*(range(k + 1) for k in state)):
        s = sum(ks)
        if s < d2 or s > w_left:
            continue
        mult = prod(comb(k, x) for k, x in zip(state, ks))
        new = list(state)
        for c, x in enumerate(ks):
            if x:
                new[c] -= x
                new[min(c + 1, d1)] += x
        total += mult * _ways(rows_left - 1, tuple(new), w_left - s, d1, d2)
    return total


def rectangle_count(l1: int, l2: int, w: int, d1: int, d2: int) -> int:
    """l1 x l2 0/1 matrices of weight w, row sums >= d2, column sums >= d1."""
    if w < l1 * d2 or w < l2 * d1 or w > l1 * l2:
        return 0
    start = (l2,) + (0,) * d1
    return _ways(l1, start, w, d1, d2)


def rectangle_count_explicit(l1: int, l2: int, w: int, d1: int, d2: int) -> int:
    """Same as ``rectangle_count`` by listing every placement of the zeros."""
    beta = l1 * l2 - w
    if beta < 0:
        return 0
    count = 0
    for zeros in itertools.combinations(range(l1 * l2), beta):
        m = np.ones(l1 * l2, dtype=np.int64)
        m[list(zeros)] = 0
        m = m.reshape(l1, l2)
        if np.all(m.sum(axis=1) >= d2) and np.all(m.sum(axis=0) >= d1):
            count += 1
    return count


@dataclass(frozen=True)
class StoppingSetCount:
    w: int
    tau_a: int
    tau_b: int

    @property
    def tau(self) -> int:
        return self.tau_a + self.tau_b


def brute_force_count(
    n1: int, n2: int, d1: int, d2: int, w: int, budget: int | None = None
) -> StoppingSetCount:
    """Stopping sets of weight w by direct counting over all rectangular supports.

    Supports range over d1 <= l1 <= w/d2 and d2 <= l2 <= w/d1 with l1 l2 >= w.
    ``budget`` caps the number of memoized row states; exceeding it raises
    ``BudgetExceeded``.
    """
    tau_a = tau_b = 0
    for l1 in range(d1, min(n1, w // d2) + 1):
        for l2 in range(d2, min(n2, w // d1) + 1):
            if l1 * l2 < w:
                continue
            f = rectangle_count(l1, l2, w, d1, d2)
            if budget is not None and _ways.cache_info().currsize > budget:
                raise BudgetExceeded(f"oracle state budget {budget} exceeded at support {l1}x{l2}")
            t = comb(n1, l1) * comb(n2, l2) * f
            if l1 * l2 == w:
                tau_a += t
            else:
                tau_b += t
    return StoppingSetCount(w, tau_a, tau_b)


class BudgetExceeded(RuntimeError):
    pass


# Closed forms.


def _s2(target: int, top: int, term) -> int:
    """Sum over 2 r0 + r1 = target of C(top, r0) C(top - r0, r1) term(r0, r1)."""
    total = 0
    for r0 in range(target // 2 + 1):
        r1 = target - 2 * r0
        if r0 + r1 > top or r1 < 0:
            continue
        total += comb(top, r0) * comb(top - r0, r1) * term(r0, r1)
    return total


def _s3(target: int, top: int, term) -> int:
    """Sum over 3 r0 + 2 r1 + r2 = target of the trinomial-weighted term."""
    total = 0
    for r0 in range(target // 3 + 1):
        for r1 in range((target - 3 * r0) // 2 + 1):
            r2 = target - 3 * r0 - 2 * r1
            if r0 + r1 + r2 > top:
                continue
            total += comb(top, r0) * comb(top - r0, r1) * comb(top - r0 - r1, r2) * term(r0, r1, r2)
    return total


def _div(num: int, den: int) -> int:
    if den <= 0 or num % den:
        raise ArithmeticError(f"non-integral term {num}/{den}")
    return num // den


def count_equal_d(n1: int, n2: int, d: int, w: int) -> StoppingSetCount:
    """Closed-form stopping-set count for d1 = d2 = d and d^2 <= w <= (d+1)^2."""
    if d < 2:
        raise ValueError("d must be at least 2")
    if w > (d + 1) ** 2:
        raise ValueError(f"closed form covers w <= {(d + 1) ** 2}")
    C = comb
    A = C(n1, d + 1) * C(n2, d + 1)
    B12 = C(n1, d + 1) * C(n2, d + 2) + C(n1, d + 2) * C(n2, d + 1)
    D = C(n1, d + 2) * C(n2, d + 2)
    ta = tb = 0
    if w < d * d:
        pass
    elif w == d * d:
        ta = C(n1, d) * C(n2, d)
    elif w < d * (d + 1):
        pass
    elif w == d * (d + 1):
        ta = C(n1, d) * C(n2, d + 1) + C(n1, d + 1) * C(n2, d)
        tb = factorial(d + 1) * A
    elif w < d * (d + 2):
        lam = w - d * d - d
        tb = factorial(d + 1 - lam) * C(d + 1, lam) ** 2 * A
    elif w == d * (d + 2):
        ta = C(n1, d) * C(n2, d + 2) + C(n1, d + 2) * C(n2, d)
        tb = (d + 1) ** 2 * A
        tb += _s2(d, d + 1, lambda r0, r1: _div(factorial(d + 2), 2 ** (d + 1 - r0 - r1))) * B12
        tb += x_ell(d + 2) * D
    else:  # (d+1)^2
        ta = A
        tb = _s2(d + 1, d + 1, lambda r0, r1: _div(factorial(d + 2), 2**r0)) * B12
        tb += y_ell(d + 2) * D
    return StoppingSetCount(w, ta, tb)


def general_validity(d1: int, d2: int) -> bool:
    """Parameter range of the unequal-distance closed form (d1 < d2)."""
    return (2 < d1 < d2 < 3 * d1 - 1) or (d1 == 2 < d2 < 4 * d1 - 1)


def count_general(n1: int, n2: int, d1: int, d2: int, w: int) -> StoppingSetCount:
    """Closed-form stopping-set count for d1 != d2, d1 d2 <= w <= (d1+1)(d2+1).

    When d1 > d2 the code is transposed. Three regimes: d2 < 2 d1 (A),
    d2 = 2 d1 (B) and d2 > 2 d1 (C).
    """
    if d1 > d2:
        return count_general(n2, n1, d2, d1, w)
    if d1 == d2:
        raise ValueError("use count_equal_d when d1 == d2")
    if not general_validity(d1, d2):
        raise ValueError(f"(d1, d2) = ({d1}, {d2}) outside the closed form's validity range")
    if w > (d1 + 1) * (d2 + 1):
        raise ValueError(f"closed form covers w <= {(d1 + 1) * (d2 + 1)}")
    if d2 < 2 * d1:
        ta, tb = _case_a(n1, n2, d1, d2, w)
    elif d2 == 2 * d1:
        ta, tb = _case_b(n1, n2, d1, d2, w)
    else:
        ta, tb = _case_c(n1, n2, d1, d2, w)
    return StoppingSetCount(w, ta, tb)


def _common(n1, n2, d1, d2, w):
    """Weights up to d1 (d2+1); returns None above."""
    if w < d1 * d2:
        return 0, 0
    if w == d1 * d2:
        return comb(n1, d1) * comb(n2, d2), 0
    if w < d1 * (d2 + 1):
        return 0, 0
    if w == d1 * (d2 + 1):
        return comb(n1, d1) * comb(n2, d2 + 1), 0
    return None


def _case_a(n1, n2, d1, d2, w):
    base = _common(n1, n2, d1, d2, w)
    if base is not None:
        return base
    C, f = comb, factorial
    P11 = C(n1, d1 + 1) * C(n2, d2 + 1)
    P12 = C(n1, d1 + 1) * C(n2, d2 + 2)
    ta = tb = 0
    if w < (d1 + 1) * d2:
        pass
    elif w == (d1 + 1) * d2:
        ta = C(n1, d1 + 1) * C(n2, d2)
        tb = f(d1 + 1) * C(d2 + 1, d2 - d1) * P11
    elif w < d1 * (d2 + 2):
        lam = w - (d1 + 1) * d2
        if d2 < 2 * d1 - 1:
            tb = f(d1 + 1 - lam) * C(d1 + 1, lam) * C(d2 + 1, d1 + 1 - lam) * P11
    elif w == d1 * (d2 + 2):
        ta = C(n1, d1) * C(n2, d2 + 2)
        e = d2 - d1 + 1
        tb = f(e) * C(d1 + 1, e) * C(d2 + 1, e) * P11
        tb += _s2(2 * d1 - d2, d1 + 1, lambda r0, r1: _div(f(d2 + 2), 2 ** (r0 + e))) * P12
    elif w < (d1 + 1) * (d2 + 1):
        lam = w - d1 * (d2 + 2)
        e = d2 - d1 + 1
        tb = f(e - lam) * C(d1 + 1, 2 * d1 - d2 + lam) * C(d2 + 1, d1 + lam) * P11
        # r2 counts rows with two zeros: r2 = r0 + d2 - d1 + 1 - lam
        tb += _s2(
            2 * d1 - d2 + lam,
            d1 + 1,
            lambda r0, r1: _div(f(d2 + 2), 2 ** (r0 + e - lam) * f(lam)),
        ) * P12
    else:
        ta = P11
        ta += C(n1, d1) * C(n2, d2 + 3) if d2 == 2 * d1 - 1 else 0
        ta += C(n1, d1 + 2) * C(n2, d2) if d2 == d1 + 1 else 0
        tb = _s2(d1 + 1, d1 + 1, lambda r0, r1: _div(f(d2 + 2), 2**r0 * f(d2 - d1 + 1))) * P12
        if d2 == d1 + 1:
            tb += _s2(d2 + 1, d2 + 1, lambda r0, r1: _div(f(d1 + 2), 2**r0)) * C(n1, d1 + 2) * C(n2, d2 + 1)
            tb += ((d2 + 2) * x_ell(d1 + 2) + _div((d2 + 2) * y_ell(d1 + 2), 2)) * C(n1, d1 + 2) * C(n2, d2 + 2)
        if d2 == 2 * d1 - 1:
            tb += _s3(
                d1 + 1,
                d1 + 1,
                lambda r0, r1, r2: _div(f(d2 + 3), 2**r2 * 6 ** (d1 + 1 - r0 - r1 - r2)),
            ) * C(n1, d1 + 1) * C(n2, d2 + 3)
        if (d1, d2) == (2, 3):
            tb += 1860 * C(n1, d1 + 2) * C(n2, d2 + 3)
    return ta, tb


def _case_b(n1, n2, d1, d2, w):
    base = _common(n1, n2, d1, d2, w)
    if base is not None:
        return base
    C, f = comb, factorial
    P11 = C(n1, d1 + 1) * C(n2, d2 + 1)
    P12 = C(n1, d1 + 1) * C(n2, d2 + 2)
    P13 = C(n1, d1 + 1) * C(n2, d2 + 3)
    ta = tb = 0
    if w < (d1 + 1) * d2:
        pass
    elif w == (d1 + 1) * d2:
        ta = C(n1, d1 + 1) * C(n2, d2) + C(n1, d1) * C(n2, d2 + 2)
        tb = f(d1 + 1) * C(d2 + 1, d1 + 1) * P11 + _div(f(d2 + 2), 2 ** (d1 + 1)) * P12
    elif w < d1 * (d2 + 3):
        lam = w - (d1 + 1) * d2
        tb = f(d1 + 1 - lam) * C(d1 + 1, lam) * C(d2 + 1, d1 + lam) * P11
        tb += _s2(lam, d1 + 1, lambda r0, r1: _div(f(d2 + 2), 2 ** (d1 + 1 + r0 - lam) * f(lam))) * P12
    elif w == d1 * (d2 + 3):
        ta = C(n1, d1) * C(n2, d2 + 3)
        tb = (d1 + 1) * (d2 + 1) * P11
        tb += _s2(d1, d1 + 1, lambda r0, r1: _div(f(d2 + 2), 2 ** (d1 + 1 - r0 - r1) * f(d1))) * P12
        tb += _s3(
            d1,
            d1 + 1,
            lambda r0, r1, r2: _div(f(d2 + 3), 2**r2 * 6 ** (d1 + 1 - r0 - r1 - r2)),
        ) * P13
    elif w < (d1 + 1) * (d2 + 1):
        # not listed separately; (d1+1)(d2+1) = d1(d2+3) + 1 in this regime
        raise AssertionError("unreachable for d2 = 2 d1")
    else:
        ta = P11
        tb = _s2(d1 + 1, d1 + 1, lambda r0, r1: _div(f(d2 + 2), 2**r0 * f(d1 + 1))) * P12
        tb += _s3(
            d1 + 1,
            d1 + 1,
            lambda r0, r1, r2: _div(f(d2 + 3), 2**r2 * 6 ** (2 * r0 + r1)),
        ) * P13
    return ta, tb


def _case_c(n1, n2, d1, d2, w):
    base = _common(n1, n2, d1, d2, w)
    if base is not None:
        return base
    C, f = comb, factorial
    P11 = C(n1, d1 + 1) * C(n2, d2 + 1)
    P12 = C(n1, d1 + 1) * C(n2, d2 + 2)
    P13 = C(n1, d1 + 1) * C(n2, d2 + 3)
    P14 = C(n1, d1 + 1) * C(n2, d2 + 4)
    ta = tb = 0
    # obvious supports; for small d1 several of these weights can coincide
    if w == d1 * (d2 + 2):
        ta += C(n1, d1) * C(n2, d2 + 2)
    if w == (d1 + 1) * d2:
        ta += C(n1, d1 + 1) * C(n2, d2)
    if w == d1 * (d2 + 3):
        ta += C(n1, d1) * C(n2, d2 + 3)
    if w == d1 * (d2 + 4) and d1 == 2:
        ta += C(n1, d1) * C(n2, d2 + 4)
    if w == (d1 + 1) * (d2 + 1):
        ta += P11
    if w < (d1 + 1) * d2:
        pass
    elif w == (d1 + 1) * d2:
        tb = f(d1 + 1) * C(d2 + 1, d1 + 1) * P11 + _div(f(d2 + 2), 2 ** (d1 + 1) * f(d2 - 2 * d1)) * P12
        if (d1, d2) == (2, 6):
            tb += 1680 * P13
    elif w < d1 * (d2 + 3):
        lam = w - (d1 + 1) * d2
        if d1 > 2:
            tb = f(d1 + 1 - lam) * C(d2 + 1, d1 + 1 - lam) * C(d1 + 1, lam) * P11
            tb += _s2(
                lam,
                d1 + 1,
                lambda r0, r1: _div(f(d2 + 2), 2 ** (d1 + 1 + r0 - lam) * f(d2 - 2 * d1 + lam)),
            ) * P12
    elif w == d1 * (d2 + 3):
        e = 3 * d1 - d2
        tb = f(d2 - 2 * d1 + 1) * C(d1 + 1, e) * C(d2 + 1, 2 * d1) * P11
        tb += _s2(e, d1 + 1, lambda r0, r1: _div(f(d2 + 2), 2 ** (d2 - 2 * d1 + 1 + r0) * f(d1))) * P12
        tb += _s3(
            e,
            d1 + 1,
            lambda r0, r1, r2: _div(f(d2 + 3), 2**r2 * 6 ** (d1 + 1 - r0 - r1 - r2)),
        ) * P13
    elif w < (d1 + 1) * (d2 + 1):
        lam = w - d1 * (d2 + 3)
        e = 3 * d1 - d2 + lam
        if d2 - 2 * d1 + 1 - lam >= 0:
            tb = f(d2 - 2 * d1 + 1 - lam) * C(d1 + 1, e) * C(d2 + 1, 2 * d1 + lam) * P11
        tb += _s2(e, d1 + 1, lambda r0, r1: _div(f(d2 + 2), 2 ** (d1 + 1 - r0 - r1) * f(d1 + lam))) * P12
        tb += _s3(
            e,
            d1 + 1,
            lambda r0, r1, r2: _div(f(d2 + 3), 2**r2 * 6 ** (d1 + 1 - r0 - r1 - r2) * f(lam)),
        ) * P13
        if (d1, d2) == (2, 6) and w == d1 * (d2 + 4):
            tb += 22050 * P14
    else:
        # (d1+1) x (d2+2): d1+1 zeros in distinct columns, at most two per row
        tb = _s2(d1 + 1, d1 + 1, lambda r0, r1: _div(f(d2 + 2), 2**r0 * f(d2 - d1 + 1))) * P12
        tb += _s3(
            d1 + 1,
            d1 + 1,
            lambda r0, r1, r2: _div(f(d2 + 3), 2**r2 * 6 ** (d1 + 1 - r0 - r1 - r2) * f(d2 - 2 * d1 + 1)),
        ) * P13
        if (d1, d2) == (2, 5):
            tb += 11130 * P14
        if (d1, d2) == (2, 6):
            tb += 111300 * P14
    return ta, tb


def count_closed_form(n1: int, n2: int, d1: int, d2: int, w: int) -> StoppingSetCount:
    if d1 == d2:
        return count_equal_d(n1, n2, d1, w)
    return count_general(n1, n2, d1, d2, w)


# Exhaustive pattern scan for very short codes.


@dataclass(frozen=True)
class Psi:
    weight: int
    patterns: int
    psi_iter: int
    psi_ml: int


def exhaustive_psi(code, i: int, max_symbols: int = 25) -> Psi:
    """Weight-i erasure patterns on which the iterative / ML decoders fail.

    Scans all C(N, i) patterns, so only codes with N <= ``max_symbols`` are
    accepted. ML is only tried where the iterative decoder fails.
    """
    from . import channel

    N = code.N
    if N > max_symbols:
        raise ValueError(f"N={N} exceeds the exhaustive-scan limit {max_symbols}")
    if not 0 <= i <= N:
        raise ValueError(f"weight must lie in [0, {N}]")
    pats = np.zeros((comb(N, i), N), dtype=bool)
    for row, pos in enumerate(itertools.combinations(range(N), i)):
        pats[row, list(pos)] = True
    pats = pats.reshape(-1, *code.shape)
    it, _ = channel.iterative_decode_batch(code, pats)
    fail = (it == channel.INFINITE).reshape(len(pats), -1).any(axis=1)
    ml = channel.ml_rank_deficient_batch(code, pats[fail]) if fail.any() else np.zeros(0, bool)
    return Psi(i, len(pats), int(fail.sum()), int(ml.sum()))


# Union bounds.


def closed_form_limit(d1: int, d2: int) -> int:
    return (d1 + 1) * (d2 + 1)


def weight_enumerator(code, w_max: int, method: str = "closed") -> dict[int, StoppingSetCount]:
    """Stopping-set counts for d1 d2 <= w <= w_max.

    ``method="closed"`` uses the closed forms (limited to w <= (d1+1)(d2+1));
    ``"oracle"`` counts directly and has no upper limit.
    """
    d1, d2 = code.d1, code.d2
    if method == "closed" and w_max > closed_form_limit(d1, d2):
        raise ValueError(f"closed forms cover w <= {closed_form_limit(d1, d2)}; use method='oracle'")
    fn = count_closed_form if method == "closed" else brute_force_count
    return {w: fn(code.n1, code.n2, d1, d2, w) for w in range(d1 * d2, w_max + 1)}


@dataclass(frozen=True)
class UnionBound:
    coefficients: dict[int, int]
    w_max: int

    def __call__(self, eps: float, dps: int = 30) -> float:
        with mpmath.workdps(dps):
            e = mpmath.mpf(eps)
            return float(mpmath.fsum(mpmath.mpf(t) * e**w for w, t in self.coefficients.items()))


def union_bound(code, eps: float | None = None, w_max: int | None = None, method: str = "closed"):
    """Truncated union bound sum_w tau_w eps^w.

    Returns the ``UnionBound`` (callable in eps) or its value when ``eps`` is given.
    """
    if w_max is None:
        w_max = closed_form_limit(code.d1, code.d2)
    enum = weight_enumerator(code, w_max, method)
    ub = UnionBound({w: c.tau for w, c in enum.items()}, w_max)
    return ub if eps is None else ub(eps)


# Colored union bound.


def local_patterns(l1: int, l2: int, w: int, d1: int, d2: int) -> np.ndarray:
    """All l1 x l2 stopping-set matrices of weight w with full support, flattened."""
    beta = l1 * l2 - w
    if beta < 0:
        return np.zeros((0, l1 * l2), dtype=np.int8)
    rows = []
    for zeros in itertools.combinations(range(l1 * l2), beta):
        m = np.ones(l1 * l2, dtype=np.int8)
        m[list(zeros)] = 0
        g = m.reshape(l1, l2)
        if np.all(g.sum(axis=1) >= d2) and np.all(g.sum(axis=0) >= d1):
            rows.append(m)
    return np.array(rows, dtype=np.int8).reshape(-1, l1 * l2)


@dataclass
class ColoredBound:
    M: int
    w_max: int
    tau: dict[tuple[int, ...], int]
    listed: int

    def __call__(self, eps_vector) -> float:
        eps = [mpmath.mpf(e) for e in eps_vector]
        if len(eps) != self.M:
            raise ValueError(f"need {self.M} erasure probabilities")
        return float(mpmath.fsum(t * mpmath.fprod(e**k for e, k in zip(eps, comp)) for comp, t in self.tau.items()))

    def marginal(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for comp, t in self.tau.items():
            out[sum(comp)] = out.get(sum(comp), 0) + t
        return dict(sorted(out.items()))


def colored_union_bound(code, coloring, w_max: int | None = None, budget: int = 10**8) -> ColoredBound:
    """Stopping-set counts split by how many symbols of each color they contain.

    Every stopping set of weight <= w_max is instantiated (row subset x column
    subset x local pattern), so the cost is the number of such sets; ``budget``
    bounds it and ``BudgetExceeded`` is raised beyond. Evaluate the result at
    a vector of per-color erasure probabilities.
    """
    from .coloring import embed_compact

    if coloring.kind == "compact":
        coloring = embed_compact(code, coloring)
    d1, d2, n1, n2 = code.d1, code.d2, code.n1, code.n2
    if w_max is None:
        w_max = d1 * d2 + 5
    M = coloring.M
    total = sum(brute_force_count(n1, n2, d1, d2, w).tau for w in range(d1 * d2, w_max + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} stopping sets up to weight {w_max} exceed budget {budget}")
    onehot = (coloring.cells[..., None] == np.arange(1, M + 1)).astype(np.int32)
    base = w_max + 1
    radix = base ** np.arange(M)
    tally: Counter = Counter()
    for l1 in range(d1, min(n1, w_max // d2) + 1):
        for l2 in range(d2, min(n2, w_max // d1) + 1):
            pats = [local_patterns(l1, l2, w, d1, d2) for w in range(max(l1 * d2, l2 * d1), min(l1 * l2, w_max) + 1)]
            pats = [p for p in pats if len(p)]
            if not pats:
                continue
            P = np.concatenate(pats).astype(np.int32)
            rsets = np.array(list(itertools.combinations(range(n1), l1)))
            csets = np.array(list(itertools.combinations(range(n2), l2)))
            for rs in rsets:
                # colors of every candidate block sharing this row subset: (ncol_sets, l1*l2, M)
                sub = onehot[rs][:, csets].transpose(1, 0, 2, 3).reshape(len(csets), l1 * l2, M)
                comps = np.einsum("pk,nkm->npm", P, sub)
                keys = (comps * radix).sum(axis=2).ravel()
                k, c = np.unique(keys, return_counts=True)
                tally.update(dict(zip(k.tolist(), c.tolist())))
    tau = {}
    for key, cnt in tally.items():
        comp = tuple(int(key // base**i % base) for i in range(M))
        tau[comp] = cnt
    return ColoredBound(M, w_max, dict(sorted(tau.items())), sum(tau.values()))
