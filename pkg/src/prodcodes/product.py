"""Product codes C1 (x) C2 and their graph representations.

The codeword is an n1 x n2 array: columns lie in C1 (length n1), rows in C2
(length n2). Symbol ``s`` sits at row ``s // n2``, column ``s % n2``. The
compact graph groups every (n1-k1) consecutive rows and (n2-k2) consecutive
columns into a supernode; supersymbols are indexed row-major on that grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gf import Field, field_new
from .mds import MdsCode, mds_new


@dataclass(frozen=True, eq=False)
class ProductCode:
    c1: MdsCode
    c2: MdsCode

    def __post_init__(self) -> None:
        if self.c1.field is not self.c2.field and self.c1.field.modulus != self.c2.field.modulus:
            raise ValueError("component codes must share the same field")

    @property
    def field(self) -> Field:
        return self.c1.field

    @property
    def n1(self) -> int:
        return self.c1.n

    @property
    def n2(self) -> int:
        return self.c2.n

    @property
    def k1(self) -> int:
        return self.c1.k

    @property
    def k2(self) -> int:
        return self.c2.k

    @property
    def d1(self) -> int:
        return self.c1.d

    @property
    def d2(self) -> int:
        return self.c2.d

    @property
    def N(self) -> int:
        return self.n1 * self.n2

    @property
    def K(self) -> int:
        return self.k1 * self.k2

    @property
    def dP(self) -> int:
        return self.d1 * self.d2

    @property
    def compact_rows(self) -> int:
        return -(-self.n1 // self.c1.r)

    @property
    def compact_cols(self) -> int:
        return -(-self.n2 // self.c2.r)

    @property
    def Nc(self) -> int:
        return self.compact_rows * self.compact_cols

    @property
    def shape(self) -> tuple[int, int]:
        return self.n1, self.n2

    @property
    def compact_shape(self) -> tuple[int, int]:
        return self.compact_rows, self.compact_cols

    def __repr__(self) -> str:
        return (
            f"ProductCode([{self.n1},{self.k1},{self.d1}] x [{self.n2},{self.k2},{self.d2}]"
            f" over GF(2^{self.field.m}))"
        )

    # Index maps.

    def symbol_index(self, i: int, j: int) -> int:
        return i * self.n2 + j

    def symbol_position(self, s: int) -> tuple[int, int]:
        return divmod(s, self.n2)

    def supersymbol_of(self, s: int) -> int:
        i, j = self.symbol_position(s)
        return (i // self.c1.r) * self.compact_cols + j // self.c2.r

    def supersymbol_map(self) -> np.ndarray:
        """n1 x n2 array giving the supersymbol index of each symbol."""
        bi = np.arange(self.n1) // self.c1.r
        bj = np.arange(self.n2) // self.c2.r
        return bi[:, None] * self.compact_cols + bj[None, :]

    def supersymbol_block(self, e: int) -> list[int]:
        """Symbol indices carried by supersymbol ``e`` (row-major)."""
        bi, bj = divmod(e, self.compact_cols)
        rows = range(bi * self.c1.r, min((bi + 1) * self.c1.r, self.n1))
        cols = range(bj * self.c2.r, min((bj + 1) * self.c2.r, self.n2))
        return [i * self.n2 + j for i in rows for j in cols]


def product_new(c1: MdsCode, c2: MdsCode) -> ProductCode:
    return ProductCode(c1, c2)


def product_from_params(n1: int, k1: int, n2: int, k2: int, m: int = 8) -> ProductCode:
    F = field_new(m)
    return ProductCode(mds_new(n1, k1, F), mds_new(n2, k2, F))


def encode(code: ProductCode, message: np.ndarray) -> np.ndarray:
    """Encode a k1 x k2 message as G1^T U G2."""
    U = np.asarray(message, dtype=np.int64)
    if U.shape != (code.k1, code.k2):
        raise ValueError(f"message must be {code.k1}x{code.k2}, got {U.shape}")
    F = code.field
    return F.matmul(F.matmul(code.c1.G.T, U), code.c2.G)


def parity_check_matrix(code: ProductCode) -> np.ndarray:
    """Stacked constraints on vec(c) (row-major).

    The first n2*(n1-k1) rows apply H1 to each column, the remaining
    n1*(n2-k2) rows apply H2 to each row. Redundant rows are kept.
    """
    n1, n2 = code.n1, code.n2
    H1, H2 = code.c1.H, code.c2.H
    r1, r2 = H1.shape[0], H2.shape[0]
    H = np.zeros((n2 * r1 + n1 * r2, n1 * n2), dtype=np.int64)
    for j in range(n2):
        # column j occupies symbols i*n2 + j
        H[j * r1 : (j + 1) * r1, j::n2] = H1
    off = n2 * r1
    for i in range(n1):
        H[off + i * r2 : off + (i + 1) * r2, i * n2 : (i + 1) * n2] = H2
    return H


@dataclass(frozen=True)
class RateReport:
    R1: Fraction
    R2: Fraction
    R: Fraction
    identity_residual: Fraction | None
    rho_u: int
    rho1_feasible: bool | None


def rate_analysis(code: ProductCode, M: int) -> RateReport:
    """Component and product rates, the compact-graph rate identity and rho_u.

    ``identity_residual`` is ``R1 R2 - (R1 + R2 - 1 + 1/Nc)``, which vanishes
    when (n_i - k_i) divides n_i (otherwise ``None``). ``rho1_feasible`` is
    the necessary rate condition for rho_max = 1 with four colors.
    """
    R1 = Fraction(code.k1, code.n1)
    R2 = Fraction(code.k2, code.n2)
    R = R1 * R2
    residual = None
    if code.n1 % code.c1.r == 0 and code.n2 % code.c2.r == 0:
        residual = R - (R1 + R2 - 1 + Fraction(1, code.Nc))
    rho_u = -(-code.Nc // (2 * M))
    feasible = float(R) < 9 / 8 - 1 / math.sqrt(2) if M == 4 else None
    return RateReport(R1, R2, R, residual, rho_u, feasible)


PRESETS = {
    "cp1": (12, 10, 12, 10),
    "cp2": (14, 12, 16, 14),
    "cp3": (10, 8, 10, 9),
}


def preset(name: str, m: int = 8) -> ProductCode:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return product_from_params(*PRESETS[name], m=m)
