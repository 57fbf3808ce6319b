"""Double-diversity fraction of uniformly random balanced colorings.

    python3 scripts/census.py --code cp1 --kind compact --samples 1e6
    python3 scripts/census.py --code cp2 --kind compact --samples 1e7
"""

from __future__ import annotations

import argparse
import time

from prodcodes.cli import parse_count
from prodcodes.deca import census
from prodcodes.product import preset


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--code", default="cp1")
    ap.add_argument("--kind", choices=("compact", "noncompact"), default="compact")
    ap.add_argument("--M", type=int, default=4)
    ap.add_argument("--samples", default="1e6")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    t = time.perf_counter()
    code = preset(args.code)
    r = census(code, args.kind, args.M, parse_count(args.samples), args.seed, strict=code.Nc % args.M == 0)
    print(f"{args.code} {args.kind}: {r.diverse}/{r.samples} diverse = {r.diversity_fraction:.6g} "
          f"(se {r.standard_error:.2g}) in {time.perf_counter() - t:.1f}s")
    print("eta histogram (diverse only):", r.eta_hist)
    print("rho_max histogram (diverse only):", r.rho_max_hist)


if __name__ == "__main__":
    main()
