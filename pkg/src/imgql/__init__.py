"""Spatial model checking of 2D and 3D images with the ImgQL logic."""

from .analysis import dice, normalize, peak_threshold
from .checker import Evaluator, check, check_surrounded
from .distance import chamfer_dt, edt, eval_dist, flt
from .errors import (
    ArityError,
    ConflictError,
    CycleError,
    DimensionError,
    EvaluationError,
    ImgqlError,
    LoadError,
    NameResolutionError,
    ParameterError,
    ParseError,
    StaticError,
    UsageError,
)
from .expand import expand, expand_formula
from .formula import size, to_text
from .io import load_model, load_volume, save_volume
from .model import Assertion, Model, attach_channel, eval_assertion
from .parser import parse, parse_formula
from .session import run_session
from .space import Adjacency, GridSpace, PointSet, border_set, closure, neighbors
from .stats import cross_correlation, histogram, scmp

__version__ = "0.1.0"
