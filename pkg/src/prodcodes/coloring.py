"""Edge colorings of the product-code graphs and their root orders.

A coloring is stored as a 2-D integer grid with colors 1..M: the n1 x n2
symbol grid for the non-compact graph, or the compact supersymbol grid.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _kernels
from ._kernels import INFINITE
from .product import ProductCode

LETTERS = {"R": 1, "G": 2, "B": 3, "Y": 4}
LETTER_OF = {v: k for k, v in LETTERS.items()}
KINDS = ("compact", "noncompact")


@dataclass(frozen=True, eq=False)
class Coloring:
    kind: str
    M: int
    cells: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.cells.shape

    @property
    def edges(self) -> int:
        return self.cells.size

    def counts(self) -> np.ndarray:
        return np.bincount(self.cells.ravel(), minlength=self.M + 1)[1:]

    def to_json(self) -> dict:
        r, c = self.shape
        return {"kind": self.kind, "rows": r, "cols": c, "M": self.M, "cells": self.cells.tolist()}

    def letters(self) -> list[str]:
        if self.M > len(LETTERS):
            return [" ".join(str(v) for v in row) for row in self.cells]
        return ["".join(LETTER_OF[int(v)] for v in row) for row in self.cells]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Coloring)
            and self.kind == other.kind
            and self.M == other.M
            and np.array_equal(self.cells, other.cells)
        )


def _parse_cells(matrix) -> np.ndarray:
    if isinstance(matrix, np.ndarray):
        return matrix.astype(np.int8)
    rows = []
    for row in matrix:
        if isinstance(row, str):
            row = row.split() if " " in row.strip() else list(row.strip())
        rows.append([LETTERS[v.upper()] if isinstance(v, str) and v.isalpha() else int(v) for v in row])
    if len({len(r) for r in rows}) > 1:
        raise ValueError("coloring grid is not rectangular")
    return np.array(rows, dtype=np.int8)


def is_balanced(counts: np.ndarray, edges: int) -> bool:
    """Exact balance when M divides the edge count, else counts differ by at most one."""
    M = counts.size
    lo, hi = edges // M, -(-edges // M)
    return bool(np.all((counts >= lo) & (counts <= hi)))


def coloring_load(
    matrix,
    M: int,
    kind: str = "compact",
    code: ProductCode | None = None,
) -> Coloring:
    """Validate a grid of colors (ints 1..M, or letters R/G/B/Y)."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    cells = _parse_cells(matrix)
    if cells.ndim != 2:
        raise ValueError("coloring must be a 2-D grid")
    if code is not None:
        want = code.compact_shape if kind == "compact" else code.shape
        if cells.shape != want:
            raise ValueError(f"{kind} grid must be {want[0]}x{want[1]}, got {cells.shape[0]}x{cells.shape[1]}")
    if cells.min() < 1 or cells.max() > M:
        raise ValueError(f"colors must lie in 1..{M}")
    counts = np.bincount(cells.ravel(), minlength=M + 1)[1:]
    if not is_balanced(counts, cells.size):
        lo, hi = cells.size // M, -(-cells.size // M)
        need = str(lo) if lo == hi else f"{lo} or {hi}"
        raise ValueError(f"unbalanced coloring: counts {counts.tolist()}, each color needs {need}")
    cells.setflags(write=False)
    return Coloring(kind, M, cells)


def load_json(path: str | Path, code: ProductCode | None = None) -> Coloring:
    data = json.loads(Path(path).read_text())
    return coloring_from_dict(data, code)


def coloring_from_dict(data: dict, code: ProductCode | None = None) -> Coloring:
    col = coloring_load(data["cells"], data["M"], data.get("kind", "compact"), code)
    if col.shape != (data.get("rows", col.shape[0]), data.get("cols", col.shape[1])):
        raise ValueError("rows/cols fields disagree with cells")
    return col


FIXTURES = ("eq25", "eq27", "eq29", "fig8a", "fig9a", "fig10")


def fixture(name: str) -> tuple[str, Coloring]:
    """Shipped coloring fixture; returns (preset or code tag, coloring)."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {FIXTURES}")
    data = json.loads(resources.files("prodcodes").joinpath("data").joinpath(f"{name}.json").read_text())
    return data["code"], coloring_from_dict(data)


def embed_compact(code: ProductCode, coloring: Coloring) -> Coloring:
    """Copy each supersymbol color onto all symbols it carries."""
    if coloring.kind != "compact":
        raise ValueError("expected a compact coloring")
    cells = coloring.cells.ravel()[code.supersymbol_map()].astype(np.int8)
    cells.setflags(write=False)
    return Coloring("noncompact", coloring.M, cells)


def ensemble_size(edges: int, M: int) -> int:
    """Number of perfectly balanced M-colorings of ``edges`` labelled edges."""
    if M < 1 or edges % M:
        raise ValueError(f"M={M} must divide the edge count {edges}")
    return math.factorial(edges) // math.factorial(edges // M) ** M


@dataclass(frozen=True, eq=False)
class RootOrderMap:
    rho: np.ndarray
    eta: int
    eta_per_color: np.ndarray
    eta_min: int
    rho_max_finite: int
    has_infinite: bool

    @property
    def rho_max(self) -> float:
        return math.inf if self.has_infinite else self.rho_max_finite

    def histogram(self) -> dict:
        vals, cnt = np.unique(self.rho, return_counts=True)
        return {("inf" if v == INFINITE else int(v)): int(c) for v, c in zip(vals, cnt)}


def thresholds(code: ProductCode, kind: str) -> tuple[int, int]:
    """Unresolved same-color edges (itself included) a row/column vertex can absorb."""
    if kind == "compact":
        return 1, 1
    return code.c2.r, code.c1.r


def _check_kind(code: ProductCode, coloring: Coloring) -> None:
    want = code.compact_shape if coloring.kind == "compact" else code.shape
    if coloring.shape != want:
        raise ValueError(f"{coloring.kind} coloring must be {want}, got {coloring.shape}")


def rho_array(code: ProductCode, cells: np.ndarray, M: int, kind: str) -> np.ndarray:
    """Root orders for one grid or a batch of grids (leading batch axis)."""
    cells = np.asarray(cells, dtype=np.int8)
    single = cells.ndim == 2
    batch = cells[None] if single else cells
    tr, tc = thresholds(code, kind)
    rho = _kernels.rho_batch(np.ascontiguousarray(batch), M, tr, tc, batch.shape[1] * batch.shape[2])
    return rho[0] if single else rho


def rootcheck_orders(code: ProductCode, coloring: Coloring) -> RootOrderMap:
    """Least fixpoint of rho(e) = min over its two vertices of 1 + max same-color rho.

    On the compact graph an edge resolves at a vertex once it is the last
    unresolved edge of its color there. On the non-compact graph a row
    absorbs up to n2-k2 unresolved same-color symbols and a column n1-k1.
    """
    _check_kind(code, coloring)
    rho = rho_array(code, coloring.cells, coloring.M, coloring.kind)
    per = np.bincount(coloring.cells[rho == 1], minlength=coloring.M + 1)[1:]
    finite = rho[rho != INFINITE]
    rho.setflags(write=False)
    return RootOrderMap(
        rho=rho,
        eta=int(per.sum()),
        eta_per_color=per,
        eta_min=int(per.min()),
        rho_max_finite=int(finite.max()) if finite.size else 0,
        has_infinite=bool(finite.size < rho.size),
    )


def diversity_verdict(root_map: RootOrderMap) -> bool:
    """Double diversity: every single color class is recoverable."""
    return not root_map.has_infinite


@dataclass(frozen=True)
class ColoringReport:
    eta: int
    eta_min: int
    eta_per_color: list[int]
    rho_max: float
    rho_u: int
    double_diversity: bool
    ineq13_lhs: int
    ineq13_rhs: int
    transfer_bound: float
    locality_iter: int
    locality_ml: int


def coloring_report(code: ProductCode, coloring: Coloring) -> ColoringReport:
    """Summary metrics; ``ineq13_lhs = 2 rho_max + eta_min - 3 <= ceil(Nc/M)``."""
    rm = rootcheck_orders(code, coloring)
    E = coloring.edges
    return ColoringReport(
        eta=rm.eta,
        eta_min=rm.eta_min,
        eta_per_color=rm.eta_per_color.tolist(),
        rho_max=rm.rho_max,
        rho_u=-(-E // (2 * coloring.M)),
        double_diversity=diversity_verdict(rm),
        ineq13_lhs=2 * rm.rho_max_finite + rm.eta_min - 3,
        ineq13_rhs=-(-E // coloring.M),
        transfer_bound=rm.rho_max * max(code.n1, code.n2),
        locality_iter=max(code.n1, code.n2),
        locality_ml=max(code.k1, code.k2),
    )


def rho1_sufficient(code: ProductCode, M: int) -> tuple[bool, Coloring | None]:
    """Rate test min(R1, R2) <= 1 - 1/M, with a rho_max = 1 witness when it holds.

    With divisible redundancies the test reads min(compact_rows, compact_cols)
    <= M. The witness fills the grid with runs of Nc/M equal colors along the
    short dimension's orthogonal direction, so no two edges at any vertex of
    the short side share a color.
    """
    if code.n1 % code.c1.r or code.n2 % code.c2.r:
        raise ValueError("(n_i - k_i) must divide n_i")
    if code.Nc % M:
        raise ValueError(f"M={M} must divide Nc={code.Nc}")
    rows, cols = code.compact_shape
    if min(rows, cols) > M:
        return False, None
    run = code.Nc // M
    flat = np.repeat(np.arange(1, M + 1, dtype=np.int8), run)
    cells = flat.reshape(rows, cols) if rows <= M else flat.reshape(cols, rows).T
    return True, coloring_load(np.ascontiguousarray(cells), M, "compact", code)


def compact_rho1_direct(cells: np.ndarray) -> np.ndarray:
    """Edges that are alone in their color at their row or column (no recursion)."""
    cells = np.asarray(cells)
    M = int(cells.max())
    onehot = cells[..., None] == np.arange(1, M + 1)
    row = onehot.sum(axis=1, keepdims=True)
    col = onehot.sum(axis=0, keepdims=True)
    return ((row == 1) | (col == 1))[onehot].reshape(cells.shape)


def noncompact_rho1_direct(code: ProductCode, cells: np.ndarray) -> np.ndarray:
    """Symbols whose row holds at most n2-k2 of its color, or column at most n1-k1."""
    cells = np.asarray(cells)
    M = int(cells.max())
    onehot = cells[..., None] == np.arange(1, M + 1)
    row = onehot.sum(axis=1, keepdims=True)
    col = onehot.sum(axis=0, keepdims=True)
    return ((row <= code.c2.r) | (col <= code.c1.r))[onehot].reshape(cells.shape)


def colors_from_letters(rows: Sequence[str]) -> np.ndarray:
    return _parse_cells(rows)
