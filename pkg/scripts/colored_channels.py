"""Color erasure channel and unequal-eps channel for a shipped coloring.

Prints the exact CEC failure polynomial, a Monte-Carlo check, and the
colored union bound against simulation on the unequal-eps channel.

    python3 scripts/colored_channels.py --coloring fig8a --eps 0.1,0.1,0.1,0.2
"""

from __future__ import annotations

import argparse

from prodcodes.channel import ChannelSpec, cec_exact, monte_carlo
from prodcodes.cli import parse_code, parse_count
from prodcodes.coloring import fixture
from prodcodes.enumeration import colored_union_bound


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--coloring", default="fig8a")
    ap.add_argument("--cec-eps", type=float, default=0.1)
    ap.add_argument("--eps", default="0.1,0.1,0.1,0.2", help="per-color erasure probabilities")
    ap.add_argument("--wmax", type=int, default=None)
    ap.add_argument("--trials", default="1e6")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    tag, col = fixture(args.coloring)
    code = parse_code(tag)
    trials = parse_count(args.trials)

    rep = cec_exact(code, col, ml=True)
    print(f"CEC failing subsets by size: iterative {rep.a}, ML {rep.a_ml}")
    e = args.cec_eps
    sim = monte_carlo(code, ChannelSpec("cec", e, col), "iterative", trials, args.seed)
    print(f"CEC eps={e}: exact {rep.wer(e):.6f}, outage {rep.outage(e):.6f}, "
          f"simulated {sim.word_error_rate:.6f} +- {sim.standard_errors[0]:.1e}")

    eps = tuple(float(x) for x in args.eps.split(","))
    cb = colored_union_bound(code, col, w_max=args.wmax)
    sim = monte_carlo(code, ChannelSpec("unequal", eps, col), "both", trials, args.seed)
    print(f"unequal eps={eps}: colored bound (w <= {cb.w_max}, {cb.listed} sets) {cb(eps):.4e}; "
          f"simulated iterative {sim[0].word_error_rate:.4e}, ML {sim[1].word_error_rate:.4e}")


if __name__ == "__main__":
    main()
