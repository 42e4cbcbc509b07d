"""Running a session file: load the model, evaluate checks, write labels."""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .checker import Evaluator
from .errors import LoadError, NameResolutionError, StaticError
from .expand import Expander
from .io import label_volume, load_model, overlay, paint_labels, save_overlay, save_volume
from .model import Model
from .parser import parse
from .space import Adjacency, PointSet
from .syntax import Session

MAX_LABEL = 65535


@dataclass
class CheckResult:
    label: int
    points: PointSet
    seconds: float


@dataclass
class SessionResult:
    model: Model
    checks: list[CheckResult] = field(default_factory=list)
    labels: np.ndarray | None = None
    outputs: list[Path] = field(default_factory=list)


def _label_id(check) -> int:
    try:
        label = int(check.color)
    except ValueError:
        label = -1
    if not 1 <= label <= MAX_LABEL:
        loc = check.loc
        raise StaticError(
            f"check colour {check.color!r} must be an integer label between 1 and {MAX_LABEL}",
            loc.line if loc else None,
            loc.column if loc else None,
        )
    return label


def overlay_path(path: Path) -> Path:
    name = path.name
    for suffix in (".nii.gz", ".nii", ".png"):
        if name.lower().endswith(suffix):
            name = name[: -len(suffix)]
            break
    return path.with_name(name + "-overlay.png")


def run_parsed(
    session: Session,
    base_dir=".",
    adjacency: Adjacency | None = None,
    out_dir=None,
    palette: dict | None = None,
    log=None,
) -> SessionResult:
    """Evaluate an already parsed session; see :func:`run_session`."""
    log = sys.stdout if log is None else log
    expander = Expander(session)
    expansion = expander.expand_checks()
    labels = [(_label_id(c), f) for c, (_, f) in zip(session.checks, expansion.checks)]
    decl = session.model
    if decl is None:
        raise StaticError("session declares no Model")
    model = load_model(decl, base_dir, adjacency or Adjacency.ORTHODIAGONAL)
    for name, loc in expansion.attributes.items():
        if name not in model.channels:
            raise NameResolutionError(
                f"attribute {name!r} is not bound by the Model declaration",
                loc.line if loc else None,
                loc.column if loc else None,
            )
    result = SessionResult(model)
    evaluator = Evaluator(model)
    for label, formula in labels:
        start = time.perf_counter()
        points = evaluator.check(formula)
        elapsed = time.perf_counter() - start
        result.checks.append(CheckResult(label, points, elapsed))
        print(f'Check "{label}": {points.count()} points in {elapsed:.3f} s', file=log)
    if not result.checks:
        return result
    space = model.space
    result.labels = paint_labels(space, [(c.label, c.points) for c in result.checks])
    out = session.output
    if out is not None:
        target = Path(out.path)
        if not target.is_absolute():
            target = Path(out_dir if out_dir is not None else base_dir) / target
        save_volume(target, label_volume(space, result.labels))
        result.outputs.append(target)
        print(f"wrote {target}", file=log)
        if space.ndim == 2:
            base = model.channel(decl.bindings[0][0])
            png = overlay_path(target)
            save_overlay(png, overlay(base, result.labels, palette))
            result.outputs.append(png)
            print(f"wrote {png}", file=log)
    return result


def run_session(path, adjacency: Adjacency | None = None, out_dir=None, palette=None, log=None) -> SessionResult:
    """Parse and evaluate a session file.

    Relative image paths resolve against the session file's directory, as
    does the ``Output`` file unless ``out_dir`` is given.  Checks run in
    order and later labels overwrite earlier ones where they overlap.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise LoadError(f"cannot read session {path}: {exc}") from None
    session = parse(text)
    return run_parsed(session, path.parent, adjacency, out_dir, palette, log)
