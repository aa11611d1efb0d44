"""Resolution as a function of observer noise for one gallery design.

Repeats full sessions at each noise level and reports the median and
interquartile range of the measured resolution, which should fall
monotonically as sigma grows.

Example:

    python3 scripts/sigma_sweep.py --glyph disc --sigmas 0.5,1,2,4,8 --repeats 10
"""

from __future__ import annotations

import argparse

import numpy as np

from glyphlab.gallery import find_design
from glyphlab.observers import noisy_observer, run_session
from glyphlab.staircase import StaircaseConfig


def parse_args(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--glyph", default="disc", help="gallery design short name")
    parser.add_argument(
        "--sigmas", default="1,3,9", help="comma-separated noise levels"
    )
    parser.add_argument("--tau", type=float, default=1.0, help="equality band width")
    parser.add_argument("--repeats", type=int, default=10, help="sessions per level")
    parser.add_argument("--trials", type=int, default=500, help="trials per session")
    parser.add_argument("--seed", type=int, default=0, help="base seed")
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    design = find_design(args.glyph)
    sigmas = [float(tok) for tok in args.sigmas.split(",") if tok.strip()]

    print(f"{'sigma':>6}  {'median R':>9}  {'q25':>7}  {'q75':>7}  {'median D':>9}")
    for sigma in sigmas:
        values = []
        for repeat in range(args.repeats):
            observer = noisy_observer(sigma, args.tau, rng_seed=args.seed + 1000 + repeat)
            config = StaircaseConfig(
                trials_per_glyph=args.trials, rng_seed=args.seed + repeat
            )
            result = run_session(design, observer, config, resamples=150)
            values.append(result.scores[design.short_name].resolution)
        q25, median, q75 = np.percentile(values, [25.0, 50.0, 75.0])
        print(
            f"{sigma:>6.2f}  {median:>9.2f}  {q25:>7.2f}  {q75:>7.2f}  "
            f"{100.0 / median:>9.3f}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
