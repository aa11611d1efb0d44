"""How archive sampling density caps the measurable resolution.

Exports one design at several grid densities and runs sessions against
each archive, with the difficulty cap matched to the grid spacing the way
``StaircaseConfig.for_grid_spacing`` prescribes.  A live (unsampled)
design run is included as the no-snapping ceiling.  Since simulated
observers judge the displayed values, any gap between the live row and an
archive row is purely a sampling artifact.

Example:

    python3 scripts/grid_sweep.py --samples 11,26,51,101,201 --sigma 3
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from glyphlab.exchange import export_archive, sample_grid
from glyphlab.gallery import find_design
from glyphlab.observers import noisy_observer, run_session
from glyphlab.staircase import StaircaseConfig


def parse_args(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--glyph", default="disc", help="gallery design short name")
    parser.add_argument(
        "--samples", default="11,26,51,101,201", help="archive sizes to compare"
    )
    parser.add_argument("--sigma", type=float, default=3.0, help="perceptual noise std")
    parser.add_argument("--tau", type=float, default=1.0, help="equality band width")
    parser.add_argument("--repeats", type=int, default=8, help="sessions per density")
    parser.add_argument("--trials", type=int, default=300, help="trials per session")
    parser.add_argument("--ppi", type=int, default=32, help="render size for archives")
    parser.add_argument("--seed", type=int, default=0, help="base seed")
    return parser.parse_args(argv)


def median_resolution(target, gid, config_for, observer_seed_base, repeats, sigma, tau):
    values = []
    for repeat in range(repeats):
        observer = noisy_observer(sigma, tau, rng_seed=observer_seed_base + repeat)
        result = run_session(
            {gid: target}, observer, config_for(repeat), resamples=150
        )
        values.append(result.scores[gid].resolution)
    return float(np.median(values))


def main(argv=None) -> int:
    args = parse_args(argv)
    design = find_design(args.glyph)
    counts = [int(tok) for tok in args.samples.split(",") if tok.strip()]

    print(f"{'samples':>8}  {'spacing':>8}  {'t_max':>5}  {'median R':>9}")
    for count in counts:
        spacing = 100.0 / (count - 1)
        archive = export_archive(design, sample_grid(count), None, ppi=args.ppi)
        base = StaircaseConfig.for_grid_spacing(
            spacing, trials_per_glyph=args.trials
        )

        def config_for(repeat, base=base):
            return StaircaseConfig(
                d0=base.d0,
                gamma=base.gamma,
                p_equal=base.p_equal,
                decrement=base.decrement,
                t_max=base.t_max,
                trials_per_glyph=base.trials_per_glyph,
                rng_seed=args.seed + repeat,
            )

        median = median_resolution(
            archive, design.short_name, config_for, args.seed + 500,
            args.repeats, args.sigma, args.tau,
        )
        print(f"{count:>8}  {spacing:>8.3f}  {base.t_max:>5}  {median:>9.2f}")
        sys.stderr.flush()

    def live_config(repeat):
        return StaircaseConfig(trials_per_glyph=args.trials, rng_seed=args.seed + repeat)

    ceiling = median_resolution(
        design, design.short_name, live_config, args.seed + 500,
        args.repeats, args.sigma, args.tau,
    )
    print(f"{'live':>8}  {'-':>8}  {19:>5}  {ceiling:>9.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
