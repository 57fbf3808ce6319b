"""Compiled peeling kernels shared by the decoder, root orders and census."""

from __future__ import annotations

import numba as nb
import numpy as np

INFINITE = np.int32(2**31 - 1)

PARALLEL, ROW_FIRST, COLUMN_FIRST = 0, 1, 2


@nb.njit(cache=True)
def _peel_one(erased, thr_row, thr_col, schedule, max_iter, out):
    R, C = erased.shape
    rowcnt = np.zeros(R, np.int64)
    colcnt = np.zeros(C, np.int64)
    remaining = 0
    for i in range(R):
        for j in range(C):
            if erased[i, j]:
                out[i, j] = INFINITE
                rowcnt[i] += 1
                colcnt[j] += 1
                remaining += 1
            else:
                out[i, j] = 0
    used = 0
    idle = 0
    t = 0
    rows_turn = schedule != COLUMN_FIRST
    while remaining > 0 and t < max_iter:
        t += 1
        do_rows = schedule == PARALLEL or rows_turn
        do_cols = schedule == PARALLEL or not rows_turn
        rows_turn = not rows_turn
        solved = 0
        # decide against the counts at the start of the iteration
        for i in range(R):
            row_ok = do_rows and 0 < rowcnt[i] <= thr_row
            for j in range(C):
                if out[i, j] == INFINITE:
                    if row_ok or (do_cols and colcnt[j] <= thr_col):
                        out[i, j] = -t
                        solved += 1
        if solved == 0:
            idle += 1
            if schedule == PARALLEL or idle >= 2:
                break
            continue
        idle = 0
        used = t
        remaining -= solved
        for i in range(R):
            for j in range(C):
                if out[i, j] == -t:
                    out[i, j] = t
                    rowcnt[i] -= 1
                    colcnt[j] -= 1
    return used


@nb.njit(cache=True)
def peel_batch(erased, thr_row, thr_col, schedule, max_iter):
    """Iterative row/column erasure filling on a batch of patterns.

    Returns per-cell solve iteration (0 = not erased, INFINITE = residual)
    and the last productive iteration of each pattern.
    """
    B, R, C = erased.shape
    out = np.empty((B, R, C), np.int32)
    used = np.zeros(B, np.int32)
    for b in range(B):
        used[b] = _peel_one(erased[b], thr_row, thr_col, schedule, max_iter, out[b])
    return out, used


@nb.njit(cache=True)
def _rho_one(colors, M, thr_row, thr_col, max_iter, rho, rowcnt, colcnt):
    R, C = colors.shape
    rowcnt[:, :] = 0
    colcnt[:, :] = 0
    for i in range(R):
        for j in range(C):
            c = colors[i, j] - 1
            rowcnt[i, c] += 1
            colcnt[j, c] += 1
            rho[i, j] = INFINITE
    remaining = R * C
    t = 0
    while remaining > 0 and t < max_iter:
        t += 1
        solved = 0
        for i in range(R):
            for j in range(C):
                if rho[i, j] == INFINITE:
                    c = colors[i, j] - 1
                    if rowcnt[i, c] <= thr_row or colcnt[j, c] <= thr_col:
                        rho[i, j] = -t
                        solved += 1
        if solved == 0:
            break
        remaining -= solved
        for i in range(R):
            for j in range(C):
                if rho[i, j] == -t:
                    rho[i, j] = t
                    c = colors[i, j] - 1
                    rowcnt[i, c] -= 1
                    colcnt[j, c] -= 1


@nb.njit(cache=True)
def rho_batch(colors, M, thr_row, thr_col, max_iter):
    """Root order of every edge for a batch of colorings (colors in 1..M).

    Erasing one color class at a time and peeling in parallel; all classes
    are handled together since they never interact.
    """
    B, R, C = colors.shape
    rho = np.empty((B, R, C), np.int32)
    rowcnt = np.zeros((R, M), np.int64)
    colcnt = np.zeros((C, M), np.int64)
    for b in range(B):
        _rho_one(colors[b], M, thr_row, thr_col, max_iter, rho[b], rowcnt, colcnt)
    return rho


@nb.njit(cache=True)
def summarize_rho(rho, colors, M):
    """Per-sample (eta, eta_min, rho_max finite, has_infinite)."""
    B, R, C = rho.shape
    eta = np.zeros(B, np.int64)
    eta_min = np.zeros(B, np.int64)
    rmax = np.zeros(B, np.int64)
    inf = np.zeros(B, np.bool_)
    per = np.zeros(M, np.int64)
    for b in range(B):
        per[:] = 0
        for i in range(R):
            for j in range(C):
                v = rho[b, i, j]
                if v == 1:
                    per[colors[b, i, j] - 1] += 1
                if v == INFINITE:
                    inf[b] = True
                elif v > rmax[b]:
                    rmax[b] = v
        eta[b] = per.sum()
        eta_min[b] = per.min()
    return eta, eta_min, rmax, inf


@nb.njit(cache=True)
def census_kernel(base, M, R, C, thr_row, thr_col, samples, seed, max_iter):
    """Shuffle ``base`` (a balanced color multiset) ``samples`` times.

    Returns, per sample, (diverse flag, eta, rho_max finite).
    """
    np.random.seed(seed)
    colors = np.empty((1, R, C), np.int8)
    flat = base.copy()
    rho = np.empty((1, R, C), np.int32)
    rowcnt = np.zeros((R, M), np.int64)
    colcnt = np.zeros((C, M), np.int64)
    diverse = np.zeros(samples, np.bool_)
    eta = np.zeros(samples, np.int32)
    rmax = np.zeros(samples, np.int32)
    n = flat.size
    for s in range(samples):
        # Fisher-Yates
        for i in range(n - 1, 0, -1):
            k = np.random.randint(0, i + 1)
            tmp = flat[i]
            flat[i] = flat[k]
            flat[k] = tmp
        for i in range(R):
            for j in range(C):
                colors[0, i, j] = flat[i * C + j]
        _rho_one(colors[0], M, thr_row, thr_col, max_iter, rho[0], rowcnt, colcnt)
        d = True
        e = 0
        mx = 0
        for i in range(R):
            for j in range(C):
                v = rho[0, i, j]
                if v == INFINITE:
                    d = False
                else:
                    if v == 1:
                        e += 1
                    if v > mx:
                        mx = v
        diverse[s] = d
        eta[s] = e
        rmax[s] = mx
    return diverse, eta, rmax


@nb.njit(cache=True)
def gf_rank_batch(H, masks, exp, log):
    """Rank over GF(2^m) of the columns of H selected by each boolean mask row."""
    B = masks.shape[0]
    rows, N = H.shape
    q1 = exp.shape[0] // 2 - 1
    ranks = np.zeros(B, np.int64)
    A = np.empty((rows, N), np.int64)
    for b in range(B):
        k = 0
        for j in range(N):
            if masks[b, j]:
                for i in range(rows):
                    A[i, k] = H[i, j]
                k += 1
        r = 0
        for c in range(k):
            p = -1
            for i in range(r, rows):
                if A[i, c] != 0:
                    p = i
                    break
            if p < 0:
                continue
            if p != r:
                for t in range(c, k):
                    tmp = A[r, t]
                    A[r, t] = A[p, t]
                    A[p, t] = tmp
            lp = log[A[r, c]]
            for i in range(r + 1, rows):
                a = A[i, c]
                if a == 0:
                    continue
                # row_i += (a / pivot) * row_r
                f = (log[a] - lp) % q1
                for t in range(c, k):
                    v = A[r, t]
                    if v != 0:
                        A[i, t] ^= exp[log[v] + f]
            r += 1
            if r == rows:
                break
        ranks[b] = r
    return ranks
