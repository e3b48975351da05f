#!/usr/bin/env python3
"""Sweep Fleiss' kappa across synthetic rater panels of varying agreement.

For each consensus level p, every subject gets a true category and each of
the n raters picks it with probability p (otherwise a uniformly random
other category).  The table shows how kappa rises from chance-level
towards 1 as the panel converges, alongside the analytic standard error.
"""

import argparse
import random

from pjo import DegenerateAgreementError, RatingMatrix, fleiss_kappa


def synthetic_matrix(
    rng: random.Random, consensus: float, n_subjects: int, n_raters: int, k: int
) -> RatingMatrix:
    rows = []
    for _ in range(n_subjects):
        truth = rng.randrange(k)
        row = [0] * k
        for _ in range(n_raters):
            if rng.random() < consensus:
                row[truth] += 1
            else:
                row[rng.choice([c for c in range(k) if c != truth])] += 1
        rows.append(row)
    return RatingMatrix.from_counts(rows)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=7, help="RNG seed (default: 7)")
    parser.add_argument("--subjects", type=int, default=40, help="subjects per panel")
    parser.add_argument("--raters", type=int, default=5, help="raters per subject")
    parser.add_argument("--categories", type=int, default=4, help="rating categories")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    print(
        f"{args.subjects} subjects, {args.raters} raters, "
        f"{args.categories} categories, seed {args.seed}"
    )
    print(f"{'consensus':>9}  {'kappa':>8}  {'SE':>7}  {'95% CI':>18}")
    for consensus in (0.25, 0.4, 0.55, 0.7, 0.85, 0.95, 1.0):
        matrix = synthetic_matrix(
            rng, consensus, args.subjects, args.raters, args.categories
        )
        try:
            result = fleiss_kappa(matrix)
        except DegenerateAgreementError:
            print(f"{consensus:>9.2f}  {'(degenerate: one category used)':>37}")
            continue
        low, high = result.ci95
        print(
            f"{consensus:>9.2f}  {result.kappa:>8.4f}  {result.standard_error:>7.4f}"
            f"  [{low:>7.4f}, {high:>7.4f}]"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
