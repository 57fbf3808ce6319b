"""Arithmetic in GF(2^m) and dense linear algebra over it.

Elements are plain integers in ``[0, 2^m)`` whose bits are polynomial
coefficients. Multiplication goes through log/antilog tables, so every
operation also works elementwise on integer numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Primitive polynomials, bit i = coefficient of x^i.
DEFAULT_MODULI = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x89,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}


def _degree(p: int) -> int:
    return p.bit_length() - 1


def _polymod(a: int, b: int) -> int:
    db = _degree(b)
    while a and _degree(a) >= db:
        a ^= b << (_degree(a) - db)
    return a


def _clmul_mod(a: int, b: int, modulus: int, m: int) -> int:
    """Carry-less product of ``a`` and ``b`` reduced modulo ``modulus``."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a >> m:
            a ^= modulus
    return result


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    d = _degree(poly)
    if d < 1:
        return False
    for divisor in range(2, 1 << (d // 2 + 1)):
        if _polymod(poly, divisor) == 0:
            return False
    return True


@dataclass(frozen=True, eq=False)
class Field:
    """GF(2^m) with table-driven multiplication.

    ``generator`` is the smallest element of multiplicative order ``q - 1``;
    ``exp[i] = generator**i`` and ``log`` is its inverse on nonzero elements.
    """

    m: int
    modulus: int
    generator: int = field(init=False)
    exp: np.ndarray = field(init=False, repr=False)
    log: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not 2 <= self.m <= 16:
            raise ValueError(f"extension degree must be in [2, 16], got {self.m}")
        if _degree(self.modulus) != self.m or not is_irreducible(self.modulus):
            raise ValueError(f"modulus {self.modulus:#x} is not irreducible of degree {self.m}")
        q = 1 << self.m
        for g in range(2, q):
            exp = np.zeros(2 * q, dtype=np.int64)
            x = 1
            for i in range(q - 1):
                exp[i] = x
                x = _clmul_mod(x, g, self.modulus, self.m)
                if x == 1 and i < q - 2:
                    break
            else:
                break
        exp[q - 1 : 2 * q - 2] = exp[: q - 1]
        log = np.zeros(q, dtype=np.int64)
        log[exp[: q - 1]] = np.arange(q - 1)
        exp.setflags(write=False)
        log.setflags(write=False)
        object.__setattr__(self, "generator", g)
        object.__setattr__(self, "exp", exp)
        object.__setattr__(self, "log", log)

    @property
    def q(self) -> int:
        return 1 << self.m

    def __repr__(self) -> str:
        return f"Field(GF(2^{self.m}), modulus={self.modulus:#x})"

    # Elementwise arithmetic; scalars or integer arrays.

    def add(self, a, b):
        return np.bitwise_xor(a, b)

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp[self.log[a] + self.log[b]]
        out = np.where((a == 0) | (b == 0), 0, out)
        return out if out.ndim else int(out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("0 has no inverse in GF(2^m)")
        out = self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]
        return out if out.ndim else int(out)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return int(self.exp[(int(self.log[a]) * e) % (self.q - 1)])

    def element(self, i: int) -> int:
        """The i-th power of the generator."""
        return int(self.exp[i % (self.q - 1)])

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for t in range(A.shape[1]):
            out ^= self.mul(A[:, t : t + 1], B[t : t + 1, :])
        return out

    def random(self, shape, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=np.int64)


def field_new(m: int = 8, modulus: int | None = None) -> Field:
    """Build GF(2^m); ``modulus`` defaults to the entry in ``DEFAULT_MODULI``."""
    if m not in DEFAULT_MODULI:
        raise ValueError(f"extension degree must be in [2, 16], got {m}")
    return Field(m, DEFAULT_MODULI[m] if modulus is None else modulus)


@dataclass
class SolveResult:
    rank: int
    pivot_columns: list[int]
    consistent: bool
    solutions: np.ndarray | None
    determined_rows: list[int]
    rref: np.ndarray


def rref(F: Field, A: np.ndarray, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; pivots searched in the first ``ncols`` columns.

    The pivot row is the first row (at or below the current one) with a nonzero
    entry in the column, columns are scanned in ascending order.
    """
    R = np.array(A, dtype=np.int64, copy=True)
    nrows = R.shape[0]
    ncols = R.shape[1] if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = F.mul(R[r], F.inv(int(R[r, c])))
        others = np.nonzero(R[:, c])[0]
        others = others[others != r]
        if others.size:
            R[others] ^= F.mul(R[others, c : c + 1], R[r : r + 1])
        pivots.append(c)
        r += 1
    return R, pivots


def gaussian_solve(F: Field, A: np.ndarray, B: np.ndarray | None = None) -> SolveResult:
    """Row-reduce ``[A | B]`` and describe the solution set of ``A X = B``.

    ``determined_rows`` lists the unknowns whose value is forced even if the
    system is underdetermined, i.e. those ``i`` with ``e_i`` in the row space
    of ``A``. ``solutions`` is the particular solution with free unknowns set
    to zero, or ``None`` when the system is inconsistent.
    """
    A = np.asarray(A, dtype=np.int64)
    if B is None:
        B = np.zeros((A.shape[0], 1), dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if B.ndim == 1:
        B = B[:, None]
    if A.shape[0] != B.shape[0]:
        raise ValueError(f"row mismatch: A has {A.shape[0]} rows, B has {B.shape[0]}")
    n = A.shape[1]
    R, pivots = rref(F, np.hstack([A, B]), ncols=n)
    rank = len(pivots)
    consistent = not np.any(R[rank:, n:])
    determined = [c for r, c in enumerate(pivots) if np.count_nonzero(R[r, :n]) == 1]
    solutions = None
    if consistent:
        solutions = np.zeros((n, B.shape[1]), dtype=np.int64)
        for r, c in enumerate(pivots):
            solutions[c] = R[r, n:]
    return SolveResult(rank, pivots, consistent, solutions, determined, R)


def rank(F: Field, A: np.ndarray) -> int:
    return len(rref(F, A)[1])
