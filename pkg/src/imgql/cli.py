"""Command-line entry point: ``imgql check|normalize|dice``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .analysis import dice, normalize
from .errors import ImgqlError, ParseError, StaticError, UsageError
from .io import load_palette, load_volume, save_volume
from .nifti import VolumeFile
from .session import run_session
from .space import Adjacency, GridSpace, PointSet


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage().strip()}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="imgql", description="Spatial model checker for 2D and 3D images.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("check", help="evaluate a session file")
    p.add_argument("session", help="session file (.imgql)")
    p.add_argument(
        "--adjacency",
        default="diag",
        help="grid adjacency: ortho, diag or win5 (default: diag)",
    )
    p.add_argument("--out-dir", help="directory for the Output file (default: next to the session)")
    p.add_argument("--palette", help="JSON file mapping label ids to [r, g, b]")

    p = sub.add_parser("normalize", help="divide an image by its mean foreground intensity")
    p.add_argument("input")
    p.add_argument("output", help="NIfTI file (.nii or .nii.gz); written as float32")
    p.add_argument("--threshold", type=float, help="background cut-off (default: histogram peak heuristic)")
    p.add_argument("--adjacency", default="diag", help="adjacency used to find the background")

    p = sub.add_parser("dice", help="Dice overlap of two label images")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--label", type=int, help="compare only this label (default: any nonzero label)")
    return parser


def _cmd_check(args) -> int:
    palette = load_palette(args.palette) if args.palette else None
    if args.out_dir:
        Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    run_session(args.session, Adjacency.parse(args.adjacency), args.out_dir, palette)
    return 0


def _cmd_normalize(args) -> int:
    adjacency = Adjacency.parse(args.adjacency)
    out = Path(args.output)
    if not (out.name.endswith(".nii") or out.name.endswith(".nii.gz")):
        raise UsageError("normalized output must be a NIfTI file (.nii or .nii.gz)")
    vol = load_volume(args.input)
    space = GridSpace(vol.dims, vol.spacing, adjacency)
    values = normalize(space, vol.values(), args.threshold)
    save_volume(out, VolumeFile(values.astype(np.float32), vol.spacing))
    return 0


def _cmd_dice(args) -> int:
    va, vb = load_volume(args.a), load_volume(args.b)
    sets = []
    for v in (va, vb):
        labels = v.values()
        space = GridSpace(v.dims, v.spacing)
        mask = labels != 0 if args.label is None else labels == args.label
        sets.append(PointSet(space, mask))
    print(f"{dice(*sets):.6f}")
    return 0


COMMANDS = {"check": _cmd_check, "normalize": _cmd_normalize, "dice": _cmd_dice}


def main(argv=None) -> int:
    args = None
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except ImgqlError as exc:
        where = ""
        if isinstance(exc, (ParseError, StaticError)) and getattr(exc, "line", None) is not None:
            session = getattr(args, "session", None)
            where = f"{session}:" if session else ""
        print(f"imgql: error: {where}{exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
