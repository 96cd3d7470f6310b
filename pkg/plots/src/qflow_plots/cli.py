"""Dispatcher: plot <figure_id> <input.csv> <output.(png|svg)>."""

import argparse
import sys

from . import bell, eigen_dist, spin_dist, trajectories
from .reader import MissingColumnError

RENDERERS = {
    "eigen_dist": eigen_dist.render,
    "trajectories": trajectories.render,
    "measured": trajectories.render_measured,
    "spin_dist": spin_dist.render,
    "bell": bell.render,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render a figure from a qflow CSV file")
    parser.add_argument("figure_id", choices=sorted(RENDERERS))
    parser.add_argument("input_csv")
    parser.add_argument("output_image",
                        help="target image path (.png or .svg)")
    args = parser.parse_args(argv)
    if not args.output_image.endswith((".png", ".svg")):
        parser.error("output must end in .png or .svg")
    try:
        RENDERERS[args.figure_id](args.input_csv, args.output_image)
    except MissingColumnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
