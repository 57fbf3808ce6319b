"""Erasure channels, row/column and ML decoders, and Monte Carlo estimation.

Erasure patterns are boolean n1 x n2 grids (True = erased). Codes are linear
and the channels are symmetric, so simulations decode patterns against the
all-zero codeword; ``decode_values`` keeps a value-level path for checks.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np
from scipy.optimize import brentq
from scipy.stats import norm

from . import _kernels
from ._kernels import INFINITE
from .coloring import Coloring, embed_compact
from .gf import gaussian_solve
from .mds import fill_erasures
from .product import ProductCode, parity_check_matrix

SCHEDULES = {"parallel": _kernels.PARALLEL, "row_first": _kernels.ROW_FIRST, "column_first": _kernels.COLUMN_FIRST}


def as_pattern(code: ProductCode, pattern) -> np.ndarray:
    """Accept a boolean or 0/1 grid, a flat boolean mask of length N, or symbol indices."""
    arr = np.asarray(pattern)
    if arr.ndim == 2 and arr.shape == code.shape:
        return arr.astype(bool)
    if arr.dtype == bool:
        if arr.shape == code.shape:
            return arr.copy()
        if arr.shape == (code.N,):
            return arr.reshape(code.shape).copy()
        raise ValueError(f"pattern shape {arr.shape} does not match code {code.shape}")
    out = np.zeros(code.N, dtype=bool)
    idx = arr.astype(np.int64).ravel()
    if idx.size and (idx.min() < 0 or idx.max() >= code.N):
        raise ValueError("symbol index out of range")
    out[idx] = True
    return out.reshape(code.shape)


def _noncompact(code: ProductCode, coloring: Coloring) -> np.ndarray:
    if coloring.kind == "compact":
        coloring = embed_compact(code, coloring)
    if coloring.shape != code.shape:
        raise ValueError(f"coloring shape {coloring.shape} does not match code {code.shape}")
    return coloring.cells


# Samplers.


def sample_sec(code: ProductCode, eps: float, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """I.i.d. symbol erasures with probability ``eps``."""
    if not 0 <= eps <= 1:
        raise ValueError("eps must lie in [0, 1]")
    shape = code.shape if size is None else (size, *code.shape)
    return rng.random(shape, dtype=np.float32) < np.float32(eps) if 0 < eps < 1 else np.full(shape, eps == 1)


def sample_cec(
    code: ProductCode, coloring: Coloring, eps: float, rng: np.random.Generator, size: int | None = None
) -> np.ndarray:
    """Each color class is erased as a block, independently with probability ``eps``."""
    cells = _noncompact(code, coloring)
    n = 1 if size is None else size
    lost = rng.random((n, coloring.M)) < eps
    out = np.take_along_axis(lost, (cells.ravel() - 1)[None, :].repeat(n, 0), axis=1).reshape(n, *code.shape)
    return out[0] if size is None else out


def sample_unequal(
    code: ProductCode, coloring: Coloring, eps_vector, rng: np.random.Generator, size: int | None = None
) -> np.ndarray:
    """Symbol erasures with a per-color probability."""
    eps_vector = np.asarray(eps_vector, dtype=np.float64)
    if eps_vector.shape != (coloring.M,):
        raise ValueError(f"need {coloring.M} erasure probabilities")
    cells = _noncompact(code, coloring)
    p = eps_vector[cells - 1].astype(np.float32)
    shape = code.shape if size is None else (size, *code.shape)
    return rng.random(shape, dtype=np.float32) < p


# Decoders.


@dataclass
class DecodeReport:
    solved: np.ndarray
    residual: np.ndarray
    iterations_used: int
    success: bool
    solve_iteration: np.ndarray | None = field(default=None, repr=False)


def _max_iter(code: ProductCode, schedule: str, max_iter: int | None) -> int:
    if max_iter is not None:
        return max_iter
    # each productive step clears at least one whole row or column
    lines = code.n1 + code.n2
    return lines if schedule == "parallel" else 2 * lines


def iterative_decode_batch(
    code: ProductCode, patterns: np.ndarray, schedule: str = "parallel", max_iter: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Solve-iteration grids (0 = not erased, INFINITE = residual) and iterations used."""
    if schedule not in SCHEDULES:
        raise ValueError(f"schedule must be one of {sorted(SCHEDULES)}")
    pats = np.ascontiguousarray(patterns, dtype=np.bool_)
    return _kernels.peel_batch(
        pats, code.c2.r, code.c1.r, SCHEDULES[schedule], _max_iter(code, schedule, max_iter)
    )


def iterative_decode(
    code: ProductCode, pattern, schedule: str = "parallel", max_iter: int | None = None
) -> DecodeReport:
    """Row/column bounded-distance decoding until no row or column makes progress.

    A row with at most n2-k2 erasures (column: n1-k1) is filled completely.
    ``parallel`` decodes all rows and all columns against the state of the
    previous iteration; ``row_first``/``column_first`` alternate half
    iterations, each counted as one iteration.
    """
    pat = as_pattern(code, pattern)
    it, used = iterative_decode_batch(code, pat[None], schedule, max_iter)
    it = it[0]
    residual = it == INFINITE
    return DecodeReport(pat & ~residual, residual, int(used[0]), not residual.any(), it)


def ml_decode(code: ProductCode, pattern, H: np.ndarray | None = None) -> DecodeReport:
    """Maximum-likelihood erasure decoding by elimination on the erased columns of H."""
    pat = as_pattern(code, pattern)
    idx = np.flatnonzero(pat.ravel())
    if idx.size == 0:
        return DecodeReport(pat.copy(), pat.copy(), 0, True)
    H = parity_check_matrix(code) if H is None else H
    sub = H[:, idx]
    sub = sub[np.any(sub != 0, axis=1)]
    res = gaussian_solve(code.field, sub)
    solved = np.zeros(code.N, dtype=bool)
    solved[idx[res.determined_rows]] = True
    solved = solved.reshape(code.shape)
    return DecodeReport(solved, pat & ~solved, 1, res.rank == idx.size)


def ml_rank_deficient(code: ProductCode, pattern, H: np.ndarray | None = None) -> bool:
    """True when the erased columns of H are dependent (ML failure)."""
    pat = as_pattern(code, pattern)
    idx = np.flatnonzero(pat.ravel())
    if idx.size == 0:
        return False
    H = parity_check_matrix(code) if H is None else H
    sub = H[:, idx]
    res = gaussian_solve(code.field, sub[np.any(sub != 0, axis=1)])
    return res.rank < idx.size


def ml_rank_deficient_batch(code: ProductCode, patterns: np.ndarray, H: np.ndarray | None = None) -> np.ndarray:
    """Vectorized ``ml_rank_deficient`` over a stack of patterns."""
    pats = np.asarray(patterns, dtype=bool).reshape(-1, code.N)
    H = parity_check_matrix(code) if H is None else H
    F = code.field
    ranks = _kernels.gf_rank_batch(np.ascontiguousarray(H, dtype=np.int64), np.ascontiguousarray(pats), F.exp, F.log)
    return ranks < pats.sum(axis=1)


def decode_values(code: ProductCode, word: np.ndarray, erased: np.ndarray, max_iter: int | None = None):
    """Value-level row/column decoding (parallel schedule) with the component MDS decoders."""
    word = np.where(erased, 0, np.asarray(word, dtype=np.int64))
    erased = np.asarray(erased, dtype=bool).copy()
    limit = _max_iter(code, "parallel", max_iter)
    for _ in range(limit):
        if not erased.any():
            break
        new_word, new_erased = word.copy(), erased.copy()
        for i in range(code.n1):
            if 0 < erased[i].sum() <= code.c2.r:
                new_word[i], _ = fill_erasures(code.c2, word[i], erased[i])
                new_erased[i] = False
        for j in range(code.n2):
            if 0 < erased[:, j].sum() <= code.c1.r:
                new_word[:, j], _ = fill_erasures(code.c1, word[:, j], erased[:, j])
                new_erased[:, j] = False
        if np.array_equal(new_erased, erased):
            break
        word, erased = new_word, new_erased
    return word, erased


def is_stopping_set(code: ProductCode, pattern) -> bool:
    """Nonempty rows carry at least d2 erasures and nonempty columns at least d1."""
    pat = as_pattern(code, pattern)
    r = pat.sum(axis=1)
    c = pat.sum(axis=0)
    return bool(np.all((r == 0) | (r >= code.d2)) and np.all((c == 0) | (c >= code.d1)))


# Monte Carlo.


@dataclass(frozen=True)
class ChannelSpec:
    kind: str  # "sec" | "cec" | "unequal"
    eps: float | tuple[float, ...]
    coloring: Coloring | None = None

    def describe(self) -> dict:
        d = {"kind": self.kind, "eps": self.eps if np.isscalar(self.eps) else list(self.eps)}
        if self.coloring is not None:
            d["M"] = self.coloring.M
        return d


@dataclass
class SimResult:
    decoder: str
    trials: int
    word_errors: int
    symbol_error_sum: int
    symbol_error_sq: int
    N: int
    seed: int
    channel: dict

    @property
    def word_error_rate(self) -> float:
        return self.word_errors / self.trials

    @property
    def symbol_error_rate(self) -> float:
        return self.symbol_error_sum / (self.trials * self.N)

    @property
    def standard_errors(self) -> tuple[float, float]:
        """Wald standard errors of (WER, SER)."""
        p = self.word_error_rate
        se_w = math.sqrt(p * (1 - p) / self.trials)
        m1 = self.symbol_error_sum / self.trials / self.N
        m2 = self.symbol_error_sq / self.trials / self.N**2
        se_s = math.sqrt(max(m2 - m1 * m1, 0.0) / self.trials)
        return se_w, se_s

    def as_dict(self) -> dict:
        d = asdict(self)
        d.update(
            word_error_rate=self.word_error_rate,
            symbol_error_rate=self.symbol_error_rate,
            standard_errors=list(self.standard_errors),
        )
        return d


def _could_stop(code: ProductCode, pats: np.ndarray) -> np.ndarray:
    """Cheap necessary condition for a nonempty residual."""
    heavy_rows = (pats.sum(axis=2) >= code.d2).sum(axis=1) >= code.d1
    heavy_cols = (pats.sum(axis=1) >= code.d1).sum(axis=1) >= code.d2
    return heavy_rows & heavy_cols


def _sample(code: ProductCode, spec: ChannelSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    if spec.kind == "sec":
        return sample_sec(code, float(spec.eps), rng, size)
    if spec.coloring is None:
        raise ValueError(f"{spec.kind} channel needs a coloring")
    if spec.kind == "cec":
        return sample_cec(code, spec.coloring, float(spec.eps), rng, size)
    if spec.kind == "unequal":
        return sample_unequal(code, spec.coloring, spec.eps, rng, size)
    raise ValueError(f"unknown channel kind {spec.kind!r}")


def monte_carlo(
    code: ProductCode,
    spec: ChannelSpec,
    decoder: str = "iterative",
    trials: int = 10_000,
    seed: int = 0,
    batch: int = 50_000,
    schedule: str = "parallel",
) -> SimResult | tuple[SimResult, SimResult]:
    """Word and symbol error rates over ``trials`` channel realizations.

    Batch ``b`` draws from its own stream ``SeedSequence(seed).spawn``-style
    child ``b``, so results depend only on (seed, batch) and not on how the
    batches are scheduled. ML decoding is attempted only where the iterative
    decoder fails, since ML solves every symbol the iterative decoder solves.
    """
    if decoder not in ("iterative", "ml", "both"):
        raise ValueError("decoder must be iterative, ml or both")
    if trials < 1:
        raise ValueError("trials must be positive")
    H = parity_check_matrix(code) if decoder != "iterative" else None
    acc = {"iterative": [0, 0, 0], "ml": [0, 0, 0]}
    children = np.random.SeedSequence(seed).spawn(-(-trials // batch))
    done = 0
    for child in children:
        size = min(batch, trials - done)
        done += size
        rng = np.random.Generator(np.random.Philox(child))
        pats = _sample(code, spec, rng, size)
        cand = np.flatnonzero(_could_stop(code, pats))
        if cand.size == 0:
            continue
        it, _ = iterative_decode_batch(code, pats[cand], schedule)
        res = (it == INFINITE).reshape(cand.size, -1)
        sizes = res.sum(axis=1)
        fail = np.flatnonzero(sizes)
        a = acc["iterative"]
        a[0] += fail.size
        a[1] += int(sizes.sum())
        a[2] += int((sizes.astype(np.int64) ** 2).sum())
        if decoder != "iterative":
            a = acc["ml"]
            deficient = ml_rank_deficient_batch(code, res[fail], H)
            for f in fail[deficient]:
                # ML on the residual alone: iterative fills are linear consequences
                rep = ml_decode(code, res[f], H)
                left = int(rep.residual.sum())
                a[0] += left > 0
                a[1] += left
                a[2] += left * left
    out = {
        name: SimResult(name, trials, v[0], v[1], v[2], code.N, seed, spec.describe())
        for name, v in acc.items()
    }
    if decoder == "both":
        return out["iterative"], out["ml"]
    return out[decoder]


@dataclass
class WeightedEstimate:
    decoder: str
    trials: int
    eps: float
    sample_eps: float
    word_error_rate: float
    standard_error: float
    raw_failures: int
    seed: int

    def as_dict(self) -> dict:
        return asdict(self)


def sec_importance(
    code: ProductCode,
    eps: float,
    sample_eps: float,
    trials: int,
    seed: int = 0,
    decoder: str = "both",
    batch: int = 200_000,
) -> WeightedEstimate | tuple[WeightedEstimate, WeightedEstimate]:
    """Importance-sampled word error rate on SEC(eps).

    Patterns are drawn at ``sample_eps`` and each failure is weighted by the
    likelihood ratio (eps/s)^w ((1-eps)/(1-s))^(N-w) of its weight w. Useful
    when failures at ``eps`` are too rare for direct sampling.
    """
    if not (0 < eps < 1 and 0 < sample_eps < 1):
        raise ValueError("need 0 < eps, sample_eps < 1")
    if decoder not in ("iterative", "ml", "both"):
        raise ValueError("decoder must be iterative, ml or both")
    H = parity_check_matrix(code) if decoder != "iterative" else None
    a, b = math.log(eps / sample_eps), math.log((1 - eps) / (1 - sample_eps))
    acc = {"iterative": [0.0, 0.0, 0], "ml": [0.0, 0.0, 0]}
    done = 0
    for child in np.random.SeedSequence(seed).spawn(-(-trials // batch)):
        size = min(batch, trials - done)
        done += size
        pats = sample_sec(code, sample_eps, np.random.Generator(np.random.Philox(child)), size)
        cand = np.flatnonzero(_could_stop(code, pats))
        if cand.size == 0:
            continue
        it, _ = iterative_decode_batch(code, pats[cand])
        res = (it == INFINITE).reshape(cand.size, -1)
        fail = res.any(axis=1)
        w = pats[cand[fail]].reshape(int(fail.sum()), -1).sum(axis=1)
        lr = np.exp(w * a + (code.N - w) * b)
        groups = [("iterative", np.ones(lr.size, bool))]
        if decoder != "iterative":
            groups.append(("ml", ml_rank_deficient_batch(code, res[fail], H)))
        for name, sel in groups:
            acc[name][0] += float(lr[sel].sum())
            acc[name][1] += float((lr[sel] ** 2).sum())
            acc[name][2] += int(sel.sum())
    out = {}
    for name, (s1, s2, n) in acc.items():
        p = s1 / trials
        se = math.sqrt(max(s2 / trials - p * p, 0.0) / trials)
        out[name] = WeightedEstimate(name, trials, eps, sample_eps, p, se, n, seed)
    if decoder == "both":
        return out["iterative"], out["ml"]
    return out[decoder]


# Exact analysis on the color erasure channel.


@dataclass
class CecReport:
    M: int
    iterative_fail: dict
    ml_fail: dict | None
    a: list[int]
    a_ml: list[int] | None

    def wer(self, eps: float, ml: bool = False) -> float:
        coef = self.a_ml if ml else self.a
        return sum(c * eps**i * (1 - eps) ** (self.M - i) for i, c in enumerate(coef))

    def outage(self, eps: float) -> float:
        """Probability that at least two colors are lost."""
        M = self.M
        return sum(math.comb(M, i) * eps**i * (1 - eps) ** (M - i) for i in range(2, M + 1))


def cec_exact(code: ProductCode, coloring: Coloring, ml: bool = False, max_colors: int = 20) -> CecReport:
    """Decode every subset of erased colors; ``a[i]`` counts failing i-subsets."""
    M = coloring.M
    if M > max_colors:
        raise ValueError(f"M={M} too large for exhaustive subsets (limit {max_colors})")
    cells = _noncompact(code, coloring)
    H = parity_check_matrix(code) if ml else None
    subsets = [s for i in range(M + 1) for s in combinations(range(1, M + 1), i)]
    pats = np.stack([np.isin(cells, s) for s in subsets])
    it, _ = iterative_decode_batch(code, pats)
    it_fail = (it == INFINITE).reshape(len(subsets), -1).any(axis=1)
    a = [0] * (M + 1)
    a_ml = [0] * (M + 1) if ml else None
    verdict: dict = {}
    verdict_ml: dict | None = {} if ml else None
    if ml:
        ml_fail = it_fail & ml_rank_deficient_batch(code, it == INFINITE, H)
    for k, s in enumerate(subsets):
        verdict[s] = bool(it_fail[k])
        a[len(s)] += int(it_fail[k])
        if ml:
            f = bool(ml_fail[k])
            verdict_ml[s] = f
            a_ml[len(s)] += int(f)
    return CecReport(M, verdict, verdict_ml, a, a_ml)


# Finite-length benchmark.


def normal_approx_rate(n: int, eps: float, target: float) -> float:
    """Normal approximation of the best rate at length n on an erasure channel."""
    if not (0 < eps < 1 and 0 < target < 1):
        raise ValueError("need 0 < eps < 1 and 0 < target < 1")
    return (1 - eps) - math.sqrt(eps * (1 - eps) / n) * float(norm.isf(target))


def normal_approx_epsilon(n: int, rate: float, target: float) -> float:
    """Largest erasure probability at which ``rate`` is achievable (normal approximation)."""
    return brentq(lambda e: normal_approx_rate(n, e, target) - rate, 1e-12, 1 - 1e-12, xtol=1e-14)
