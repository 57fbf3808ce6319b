"""Repeated seeded DECA runs and the resulting (eta, rho_max) statistics.

    python3 scripts/deca_reproduction.py --code cp1 --aleph 8 --runs 50
    python3 scripts/deca_reproduction.py --code cp2 --aleph 7 --aleph1 8 --runs 50
    python3 scripts/deca_reproduction.py --code cp3 --aleph 8 --runs 20
"""

from __future__ import annotations

import argparse
from collections import Counter

from prodcodes.deca import DecaConfig, deca_run
from prodcodes.product import preset


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--code", default="cp1")
    ap.add_argument("--M", type=int, default=4)
    ap.add_argument("--aleph", type=int, default=8)
    ap.add_argument("--aleph1", type=int, default=0)
    ap.add_argument("--iters", type=int, default=100)
    ap.add_argument("--runs", type=int, default=50)
    ap.add_argument("--first-seed", type=int, default=0)
    args = ap.parse_args()

    code = preset(args.code)
    strict = code.Nc % args.M == 0
    outcomes = Counter()
    print("seed,double_diversity,eta,rho_max")
    for seed in range(args.first_seed, args.first_seed + args.runs):
        cfg = DecaConfig(args.M, args.aleph, args.aleph1, args.iters, seed)
        r = deca_run(code, cfg, strict=strict)
        outcomes[(r.double_diversity, r.eta, r.rho_max)] += 1
        print(f"{seed},{int(r.double_diversity)},{r.eta},{r.rho_max}", flush=True)
    diverse = sum(n for (d, _, _), n in outcomes.items() if d)
    print(f"# {diverse}/{args.runs} runs reached double diversity")
    for (d, eta, rmax), n in sorted(outcomes.items(), key=lambda kv: (-kv[0][1], kv[0][2])):
        if d:
            print(f"# eta={eta} rho_max={rmax}: {n}")


if __name__ == "__main__":
    main()
