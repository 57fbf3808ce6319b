"""Search for colorings matching the reference metrics of the fig* fixtures.

The reference matrices are not available as data, so the shipped fixtures
fig8a / fig9a / fig10 are colorings found by long DECA runs that reproduce
the target metrics exactly. Run from the repository root:

    python3 scripts/reconstruct_fixtures.py [--write]
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

import numpy as np

from prodcodes import _kernels
from prodcodes._kernels import INFINITE
from prodcodes.coloring import coloring_load, rootcheck_orders
from prodcodes.deca import DecaConfig, deca_run
from prodcodes.product import preset

DATA = Path(__file__).resolve().parents[1] / "src" / "prodcodes" / "data"

TARGETS = {
    # name: (preset, aleph, aleph1, predicate on (rho histogram, eta_min), note)
    "fig8a": (
        "cp1",
        8,
        0,
        lambda h, emin: h.get(1) == 32 and max(h) == 2 and emin == 8,
        "Reconstruction: eta^c=32, rho_max=2, eta_min=8 on the [12,10]^2 compact graph.",
    ),
    "fig9a": (
        "cp2",
        7,
        8,
        lambda h, emin: h.get(1) == 40 and max(h) == 3 and emin == 10,
        "Reconstruction: eta^c=40, rho_max=3, eta_min=10 on the [14,12]x[16,14] compact graph.",
    ),
    "fig10": (
        "cp3",
        8,
        0,
        lambda h, emin: h == {1: 40, 2: 10},
        "Reconstruction: 40 edges of order 1 and 10 of order 2 on the [10,8]x[10,9] compact graph"
        " (near-balanced, color counts 13,13,12,12).",
    ),
}


def _score(rho: np.ndarray, cells: np.ndarray, goal: tuple[int, int, int | None]) -> np.ndarray:
    """Closeness to the target (eta, rho_max, eta_min); diversity first."""
    eta_goal, rho_goal, emin_goal = goal
    B = rho.shape[0]
    flat = rho.reshape(B, -1)
    inf = (flat == INFINITE).sum(axis=1)
    eta = (flat == 1).sum(axis=1)
    over = (np.where(flat == INFINITE, 0, flat) > rho_goal).sum(axis=1)
    score = -1000 * inf - 10 * np.abs(eta - eta_goal) - 4 * over
    if emin_goal is not None:
        per = np.stack([((flat == 1) & (cells.reshape(B, -1) == c)).sum(axis=1) for c in range(1, 5)], axis=1)
        score -= 3 * np.abs(per.min(axis=1) - emin_goal)
    return score


def swap_climb(code, cells: np.ndarray, goal, rng, steps: int = 300) -> np.ndarray:
    """Steepest ascent over all two-cell color swaps, random among ties."""
    shape = cells.shape
    flat = cells.ravel().copy()
    n = flat.size
    ii, jj = np.triu_indices(n, 1)
    cur = None
    for _ in range(steps):
        keep = flat[ii] != flat[jj]
        a, b = ii[keep], jj[keep]
        cand = np.repeat(flat[None], a.size, axis=0)
        r = np.arange(a.size)
        cand[r, a], cand[r, b] = flat[b], flat[a]
        rho = _kernels.rho_batch(cand.reshape(-1, *shape), 4, 1, 1, n)
        sc = _score(rho, cand, goal)
        if cur is None:
            rho0 = _kernels.rho_batch(flat.reshape(1, *shape), 4, 1, 1, n)
            cur = _score(rho0, flat.reshape(1, *shape), goal)[0]
        top = sc.max()
        if top <= cur and cur == 0:
            break
        if top < cur:
            break
        k = rng.choice(np.flatnonzero(sc == top))
        flat = cand[k]
        cur = top
    return flat.reshape(shape)


def search(name: str, max_seeds: int, rounds: int):
    tag, aleph, aleph1, ok, note = TARGETS[name]
    code = preset(tag)
    goal = {"fig8a": (32, 2, 8), "fig9a": (40, 3, 10), "fig10": (40, 2, None)}[name]
    for seed in range(max_seeds):
        res = deca_run(code, DecaConfig(4, aleph, aleph1, rounds, seed), strict=False)
        cells = swap_climb(code, np.array(res.best.cells), goal, np.random.default_rng(seed))
        col = coloring_load(cells, 4, "compact", code)
        rm = rootcheck_orders(code, col)
        hist = rm.histogram()
        print(f"  seed {seed}: {hist} eta_min={rm.eta_min}", flush=True)
        if "inf" not in hist and ok(hist, rm.eta_min):
            return seed, tag, col, note
    return None


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--write", action="store_true", help="overwrite the fixture files")
    ap.add_argument("--seeds", type=int, default=2000)
    ap.add_argument("--rounds", type=int, default=400)
    ap.add_argument("names", nargs="*", default=list(TARGETS))
    args = ap.parse_args()
    for name in args.names:
        found = search(name, args.seeds, args.rounds)
        if found is None:
            print(f"{name}: not found")
            continue
        seed, tag, col, note = found
        print(f"{name}: seed {seed}")
        print("\n".join(col.letters()))
        if args.write:
            data = {"code": tag, **col.to_json(), "note": f"{note} DECA seed {seed}, {args.rounds} rounds, then swap hill climbing."}
            (DATA / f"{name}.json").write_text(json.dumps(data, indent=1) + "\n")


if __name__ == "__main__":
    main()
