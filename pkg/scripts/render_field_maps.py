#!/usr/bin/env python3
"""Render transverse intensity and polarization-texture maps for the
hybrid-sphere states (doughnut poles, radial/azimuthal/spiral equator)."""

import argparse
import sys

from vortexmem import cli
from vortexmem.hilbert import HYBRID_SPHERE_NAMES


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/field_maps")
    parser.add_argument("--states", nargs="+", default=list(HYBRID_SPHERE_NAMES))
    args = parser.parse_args(argv)

    cfg = cli.config_from_dict({
        "scenario": "field_maps",
        "input_states": args.states,
        "trials_per_projection": 0,
    })
    paths = cli.emit(cli.run(cfg), args.out)
    for path in paths:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
