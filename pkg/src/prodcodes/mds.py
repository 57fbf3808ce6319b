"""MDS component codes: Reed-Solomon codes with a Vandermonde parity check."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .gf import Field, gaussian_solve, rank


@dataclass(frozen=True, eq=False)
class MdsCode:
    n: int
    k: int
    field: Field
    H: np.ndarray = field(repr=False)
    G: np.ndarray = field(repr=False)

    @property
    def d(self) -> int:
        return self.n - self.k + 1

    @property
    def r(self) -> int:
        """Redundancy n - k."""
        return self.n - self.k

    def __repr__(self) -> str:
        return f"MdsCode[{self.n},{self.k},{self.d}] over GF(2^{self.field.m})"

    def is_codeword(self, word: np.ndarray) -> bool:
        word = np.asarray(word, dtype=np.int64).reshape(-1, 1)
        return not np.any(self.field.matmul(self.H, word))

    def encode(self, message: np.ndarray) -> np.ndarray:
        msg = np.asarray(message, dtype=np.int64).reshape(1, -1)
        return self.field.matmul(msg, self.G)[0]


def vandermonde(F: Field, rows: int, n: int, points=None) -> np.ndarray:
    """``H[i, j] = a_j^i``; the default points are a_j = g^j for the field generator g."""
    if points is None:
        i = np.arange(rows)[:, None]
        j = np.arange(n)[None, :]
        return F.exp[(i * j) % (F.q - 1)].astype(np.int64)
    pts = [int(a) for a in points]
    return np.array([[F.pow(a, i) if i else 1 for a in pts] for i in range(rows)], dtype=np.int64)


def mds_new(n: int, k: int, F: Field, check: bool = False, points=None) -> MdsCode:
    """[n, k, n-k+1] code with Vandermonde H and systematic G = [I_k | P].

    ``points`` overrides the evaluation points (n distinct field elements).
    With ``check=True`` every (n-k)-column submatrix of H is verified to be
    full rank (exhaustive; meant for small n).
    """
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    if n >= F.q:
        raise ValueError(f"need n < q, got n={n}, q={F.q}")
    if points is not None and (len(points) != n or len(set(int(a) for a in points)) != n):
        raise ValueError("need n distinct evaluation points")
    r = n - k
    H = vandermonde(F, r, n, points)
    # Parity on the last r positions: H_par p = H_info u  =>  p = H_par^{-1} H_info u.
    sol = gaussian_solve(F, H[:, k:], H[:, :k])
    P = sol.solutions.T  # k x r
    G = np.hstack([np.eye(k, dtype=np.int64), P])
    if check:
        for cols in combinations(range(n), r):
            if rank(F, H[:, cols]) != r:
                raise AssertionError(f"H columns {cols} are dependent")
    H.setflags(write=False)
    G.setflags(write=False)
    return MdsCode(n, k, F, H, G)


def fill_erasures(code: MdsCode, word: np.ndarray, erased: np.ndarray) -> tuple[np.ndarray, bool]:
    """Recover erased symbols from the parity checks.

    ``erased`` is a boolean mask. Up to d-1 erasures are always recovered; with
    more, an MDS code determines none of them, so the word comes back unchanged
    with ``success=False``.
    """
    word = np.asarray(word, dtype=np.int64)
    erased = np.asarray(erased, dtype=bool)
    idx = np.flatnonzero(erased)
    if idx.size == 0:
        return word.copy(), True
    if idx.size > code.r:
        return word.copy(), False
    F = code.field
    known = np.where(erased, 0, word)
    syndrome = F.matmul(code.H, known.reshape(-1, 1))
    sol = gaussian_solve(F, code.H[:, idx], syndrome)
    if not sol.consistent:
        raise ValueError("received word is inconsistent with every codeword")
    out = word.copy()
    out[idx] = sol.solutions[:, 0]
    return out, True
