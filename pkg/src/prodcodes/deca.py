"""Differential-evolution edge coloring (DECA) and random-coloring statistics.

Each DECA round takes the edges of root order above one ("bad" edges),
picks aleph of them at random and tries every distinct rearrangement of
their colors, keeping the one with the most order-1 edges. An optional
second stage rearranges colors among edges of infinite order to restore
double diversity. Rearranging colors never changes the color counts, so
every candidate stays balanced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from ._kernels import INFINITE
from .coloring import Coloring, coloring_load, rho_array, thresholds
from .product import ProductCode


def weak_compositions(aleph: int, M: int) -> list[tuple[int, ...]]:
    """All M-tuples of non-negative integers summing to aleph (C(aleph+M-1, M-1) of them)."""
    if M < 1 or aleph < 0:
        raise ValueError("need M >= 1 and aleph >= 0")
    if M == 1:
        return [(aleph,)]
    return [(g,) + rest for g in range(aleph + 1) for rest in weak_compositions(aleph - g, M - 1)]


def lambda_count(gammas) -> int:
    """Distinct arrangements of a color multiset with multiplicities ``gammas``."""
    out = math.factorial(sum(gammas))
    for g in gammas:
        out //= math.factorial(g)
    return out


def lambda_max(aleph: int, M: int) -> int:
    """Largest multinomial over compositions: the most even split of aleph into M parts."""
    q, r = divmod(aleph, M)
    return lambda_count([q + 1] * r + [q] * (M - r))


@lru_cache(maxsize=4096)
def _arrangements(multiset: tuple[int, ...]) -> np.ndarray:
    from sympy.utilities.iterables import multiset_permutations

    return np.array(list(multiset_permutations(list(multiset))), dtype=np.int8).reshape(-1, len(multiset))


def arrangements(colors) -> np.ndarray:
    """Every distinct ordering of ``colors`` (rows), in lexicographic order."""
    return _arrangements(tuple(sorted(int(c) for c in colors)))


@dataclass(frozen=True)
class DecaConfig:
    M: int = 4
    aleph: int = 8
    aleph1: int = 0
    max_iter: int = 100
    seed: int = 0
    initial: Coloring | None = None

    def __post_init__(self) -> None:
        if self.aleph < 1:
            raise ValueError("aleph must be at least 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.aleph1 < 0:
            raise ValueError("aleph1 must be non-negative")


@dataclass
class DecaTrace:
    eta: list[int] = field(default_factory=list)
    rho_max: list[float] = field(default_factory=list)
    bad: list[int] = field(default_factory=list)
    bad_inf: list[int] = field(default_factory=list)
    best_eta: list[int] = field(default_factory=list)
    examined: list[int] = field(default_factory=list)
    rounds: int = 0

    def rows(self) -> list[dict]:
        return [
            {
                "round": i + 1,
                "eta": self.eta[i],
                "rho_max": self.rho_max[i],
                "bad": self.bad[i],
                "bad_inf": self.bad_inf[i],
                "best_eta": self.best_eta[i],
                "examined": self.examined[i],
            }
            for i in range(self.rounds)
        ]


@dataclass
class DecaResult:
    best: Coloring
    trace: DecaTrace
    eta: int
    rho_max: float
    double_diversity: bool


def balanced_multiset(edges: int, M: int) -> np.ndarray:
    """Colors 1..M with counts differing by at most one (the first colors get the extras)."""
    q, r = divmod(edges, M)
    return np.repeat(np.arange(1, M + 1, dtype=np.int8), [q + 1] * r + [q] * (M - r))


def random_coloring(code: ProductCode, kind: str, M: int, seed=None, strict: bool = True) -> Coloring:
    """Uniform balanced coloring via a seeded shuffle of the color multiset.

    With ``strict`` M must divide the edge count; otherwise counts may differ by one.
    """
    shape = code.compact_shape if kind == "compact" else code.shape
    E = shape[0] * shape[1]
    if strict and E % M:
        raise ValueError(f"M={M} does not divide the edge count {E}")
    rng = np.random.default_rng(seed)
    cells = rng.permutation(balanced_multiset(E, M)).reshape(shape)
    return coloring_load(cells, M, kind, code)


def _metrics(rho: np.ndarray, cells: np.ndarray, M: int):
    """(eta, rho_max finite, has_inf, n_inf) for a batch."""
    B = rho.shape[0]
    flat = rho.reshape(B, -1)
    eta = (flat == 1).sum(axis=1)
    inf = flat == INFINITE
    n_inf = inf.sum(axis=1)
    rmax = np.where(inf, 0, flat).max(axis=1)
    return eta, rmax, n_inf


def _score_key(eta: int, rmax: int, n_inf: int) -> tuple:
    return (n_inf == 0, eta, -rmax)


def deca_run(code: ProductCode, config: DecaConfig, strict: bool = True) -> DecaResult:
    """Run DECA on the compact graph.

    Mutation stage: choose the arrangement of the sampled bad edges with the
    largest eta, ties broken by smaller rho_max (infinite counts as larger
    than any finite order), then by enumeration order. Max-Diversity stage
    (aleph1 > 0): among arrangements of colors on sampled infinite-order
    edges, accept the one with the fewest infinite-order edges if strictly
    fewer than before, ties broken by eta.
    """
    M = config.M
    shape = code.compact_shape
    E = code.Nc
    if strict and E % M:
        raise ValueError(f"M={M} does not divide Nc={E}")
    rng = np.random.default_rng(config.seed)
    if config.initial is not None:
        cells = np.array(config.initial.cells, dtype=np.int8)
        if cells.shape != shape:
            raise ValueError("initial coloring does not match the compact graph")
    else:
        cells = rng.permutation(balanced_multiset(E, M)).reshape(shape)
    tr, tc = thresholds(code, "compact")
    big = np.int64(E + 1)

    def evaluate(batch: np.ndarray):
        rho = _kernels.rho_batch(np.ascontiguousarray(batch), M, tr, tc, E)
        eta, rmax, n_inf = _metrics(rho, batch, M)
        return rho, eta, rmax, n_inf

    flat = cells.ravel().copy()
    rho, eta, rmax, n_inf = evaluate(flat.reshape(1, *shape))
    rho, eta, rmax, n_inf = rho[0], int(eta[0]), int(rmax[0]), int(n_inf[0])
    best = (_score_key(eta, rmax, n_inf), flat.copy(), eta, rmax, n_inf)
    best_eta = eta
    trace = DecaTrace()
    for _ in range(config.max_iter):
        bad = np.flatnonzero(rho.ravel() > 1)
        examined = 0
        if bad.size:
            pick = np.sort(rng.choice(bad, size=min(config.aleph, bad.size), replace=False))
            perms = arrangements(flat[pick])
            cand = np.repeat(flat[None], len(perms), axis=0)
            cand[:, pick] = perms
            c_rho, c_eta, c_rmax, c_inf = evaluate(cand.reshape(-1, *shape))
            examined += len(perms)
            # max eta, then smaller rho_max with infinity worst, then first
            eff = np.where(c_inf > 0, big, c_rmax)
            order = np.lexsort((np.arange(len(perms)), eff, -c_eta))
            k = order[0]
            flat = cand[k]
            rho, eta, rmax, n_inf = c_rho[k], int(c_eta[k]), int(c_rmax[k]), int(c_inf[k])
        if config.aleph1 and n_inf:
            binf = np.flatnonzero(rho.ravel() == INFINITE)
            pick = np.sort(rng.choice(binf, size=min(config.aleph1, binf.size), replace=False))
            perms = arrangements(flat[pick])
            cand = np.repeat(flat[None], len(perms), axis=0)
            cand[:, pick] = perms
            c_rho, c_eta, c_rmax, c_inf = evaluate(cand.reshape(-1, *shape))
            examined += len(perms)
            order = np.lexsort((np.arange(len(perms)), -c_eta, c_inf))
            k = order[0]
            if c_inf[k] < n_inf:
                flat = cand[k]
                rho, eta, rmax, n_inf = c_rho[k], int(c_eta[k]), int(c_rmax[k]), int(c_inf[k])
        key = _score_key(eta, rmax, n_inf)
        if key > best[0]:
            best = (key, flat.copy(), eta, rmax, n_inf)
        best_eta = max(best_eta, eta)
        trace.eta.append(eta)
        trace.rho_max.append(math.inf if n_inf else rmax)
        trace.bad.append(int((rho > 1).sum()))
        trace.bad_inf.append(n_inf)
        trace.best_eta.append(best_eta)
        trace.examined.append(examined)
        trace.rounds += 1
    _, bflat, beta, brmax, binf_n = best
    col = coloring_load(bflat.reshape(shape), M, "compact", code)
    return DecaResult(col, trace, beta, math.inf if binf_n else brmax, binf_n == 0)


# Census of uniformly random colorings.


@dataclass
class CensusResult:
    kind: str
    M: int
    samples: int
    diverse: int
    eta_hist: dict[int, int]
    rho_max_hist: dict[int, int]
    seed: int

    @property
    def diversity_fraction(self) -> float:
        return self.diverse / self.samples

    @property
    def standard_error(self) -> float:
        p = self.diversity_fraction
        return math.sqrt(p * (1 - p) / self.samples)


def census(
    code: ProductCode,
    kind: str,
    M: int,
    samples: int,
    seed: int = 0,
    chunk: int = 200_000,
    strict: bool = True,
) -> CensusResult:
    """Diversity fraction and eta / rho_max histograms over uniform colorings.

    Chunk ``i`` is shuffled with a generator seeded from child ``i`` of
    ``SeedSequence(seed)``. Histograms cover double-diversity colorings only.
    """
    shape = code.compact_shape if kind == "compact" else code.shape
    E = shape[0] * shape[1]
    if strict and E % M:
        raise ValueError(f"M={M} does not divide the edge count {E}")
    tr, tc = thresholds(code, kind)
    base = balanced_multiset(E, M)
    diverse = 0
    eta_hist: dict[int, int] = {}
    rho_hist: dict[int, int] = {}
    done = 0
    for child in np.random.SeedSequence(seed).spawn(-(-samples // chunk)):
        size = min(chunk, samples - done)
        done += size
        s = int(child.generate_state(1, dtype=np.uint32)[0])
        d, eta, rmax = _kernels.census_kernel(base, M, shape[0], shape[1], tr, tc, size, s, E)
        diverse += int(d.sum())
        for hist, vals in ((eta_hist, eta[d]), (rho_hist, rmax[d])):
            v, c = np.unique(vals, return_counts=True)
            for a, b in zip(v.tolist(), c.tolist()):
                hist[a] = hist.get(a, 0) + b
    return CensusResult(kind, M, samples, diverse, dict(sorted(eta_hist.items())), dict(sorted(rho_hist.items())), seed)


def is_forest_coloring(cells: np.ndarray) -> bool:
    """Independent check of compact double diversity: every color class is acyclic.

    Uses union-find over row and column vertices.
    """
    cells = np.asarray(cells)
    R, C = cells.shape
    for color in np.unique(cells):
        parent = list(range(R + C))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in zip(*np.nonzero(cells == color)):
            a, b = find(int(i)), find(R + int(j))
            if a == b:
                return False
            parent[a] = b
    return True


def compositions_check(aleph: int, M: int) -> int:
    """Sum of arrangement counts over all weak compositions (equals M**aleph)."""
    return sum(lambda_count(g) for g in weak_compositions(aleph, M))

