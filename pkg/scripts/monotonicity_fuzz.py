#!/usr/bin/env python3
"""Random (psi, phi, channel) triples; prints gap quantiles and the worst cases."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from steinlab.experiments import MONOTONICITY_COLUMNS, monotonicity_fuzz


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=11)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--max-kraus", type=int, default=4)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)

    rows = monotonicity_fuzz(args.seed, args.trials, args.dims, args.max_kraus, workers=args.workers)
    gaps = np.array([r[MONOTONICITY_COLUMNS.index("gap")] for r in rows])
    q = np.quantile(gaps, [0.0, 0.01, 0.5, 0.99, 1.0])
    print("quantiles (0, 1%, 50%, 99%, 100%):", " ".join(f"{x:.3e}" for x in q))
    print(",".join(MONOTONICITY_COLUMNS))
    for i in np.argsort(gaps)[:5]:
        print(",".join(repr(x) if isinstance(x, float) else str(x) for x in rows[i]))
    return 0 if gaps.min() >= -1e-8 else 5


if __name__ == "__main__":
    sys.exit(main())
