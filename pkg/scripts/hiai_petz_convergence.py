#!/usr/bin/env python3
"""Restricted relative-entropy rate against S(psi||phi) as n grows."""

from __future__ import annotations

import argparse
import math
import sys

from steinlab.abelian import hiai_petz_decomposition_check
from steinlab.entropy import relative_entropy
from steinlab.experiments import seeded_pair


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--n-max", type=int, default=10)
    args = ap.parse_args(argv)

    psi, phi = seeded_pair(args.dim, args.seed)
    s = float(relative_entropy(psi, phi))
    print("n,restricted_rate,gap_rate,bound_rate,residual")
    for n in range(1, args.n_max + 1):
        r = hiai_petz_decomposition_check(psi, phi, n)
        bound = args.dim * math.log(n + 1) / n
        print(f"{n},{float(r.restricted) / n!r},{r.gap / n!r},{bound!r},{r.residual!r}")
    print(f"# S(psi||phi) = {s!r}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
