#!/usr/bin/env python3
"""Typical-set masses on a two-symbol alphabet and the first n reaching a target."""

from __future__ import annotations

import argparse
import sys

from steinlab.typical import ReducedAlphabet, TypicalReport, first_reaching, lln_convergence


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--P", type=float, nargs="+", default=[0.7, 0.3])
    ap.add_argument("--Q", type=float, nargs="+", default=[0.5, 0.5])
    ap.add_argument("--w", type=float, nargs="+", default=None)
    ap.add_argument("--delta", type=float, default=0.05)
    ap.add_argument("--n-max", type=int, default=500)
    ap.add_argument("--target", type=float, default=0.9)
    args = ap.parse_args(argv)

    w = args.w if args.w is not None else [1.0] * len(args.P)
    alphabet = ReducedAlphabet(args.P, args.Q, w)
    reports = lln_convergence(alphabet, args.delta, range(1, args.n_max + 1))
    print(",".join(TypicalReport.CSV_FIELDS))
    for r in reports:
        print(",".join(repr(x) if isinstance(x, float) else str(x) for x in r.csv_row()))
    print(f"# first n with P(C n F n L) >= {args.target}: {first_reaching(reports, args.target)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
