"""Intensity normalization and segmentation overlap scores."""

from __future__ import annotations

import numpy as np

from . import formula as F
from .checker import check
from .errors import DimensionError, EvaluationError, ParameterError
from .model import Model
from .space import GridSpace, PointSet

HIST_BINS = 256
SMOOTH_WIDTH = 5


def peak_threshold(values) -> float:
    """Intensity just past the dark background peak of the histogram.

    The 256-bin histogram over ``[min, max]`` is smoothed by a 5-bin moving
    average; the highest bin of the lowest quartile is taken as the
    background peak, and the threshold is the lower edge of the first local
    minimum after it.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        raise ParameterError("cannot threshold an empty image")
    lo, hi = float(v.min()), float(v.max())
    if hi <= lo:
        return lo
    counts, edges = np.histogram(v, bins=HIST_BINS, range=(lo, hi))
    smooth = np.convolve(counts, np.ones(SMOOTH_WIDTH) / SMOOTH_WIDTH, mode="same")
    i = int(np.argmax(smooth[: HIST_BINS // 4]))
    while i + 1 < HIST_BINS and smooth[i + 1] < smooth[i]:
        i += 1
    return float(edges[i])


def background(space: GridSpace, values, threshold: float) -> PointSet:
    """Low-intensity region connected to the image border."""
    m = Model(space, {"I": values})
    dark = F.atom("I", "<", threshold)
    return check(m, F.touch(dark, F.Border()))


def normalize(space: GridSpace, values, threshold: float | None = None) -> np.ndarray:
    """Divide by the mean intensity of the significant (non-background) points.

    Parameters
    ----------
    space : GridSpace
        Grid of the image, used to find the background by connectivity.
    values : array_like
        Intensities shaped like the grid.
    threshold : float, optional
        Background cut-off; picked with :func:`peak_threshold` when omitted.

    Returns
    -------
    numpy.ndarray
        Normalized intensities, float64.
    """
    v = np.asarray(values, dtype=np.float64).reshape(space.dims)
    if v.size == 0:
        raise ParameterError("cannot normalize an empty image")
    if threshold is None:
        threshold = peak_threshold(v)
    significant = ~background(space, v, threshold).mask
    if not significant.any():
        raise EvaluationError(f"every point is background at threshold {threshold}; nothing to normalize by")
    mean = float(v[significant].mean())
    if mean == 0.0:
        raise EvaluationError("significant points have zero mean intensity")
    return v / mean


def dice(a: PointSet, b: PointSet) -> float:
    """Dice overlap ``2|a & b| / (|a| + |b|)``; two empty sets score 1."""
    if a.space.dims != b.space.dims or a.space.spacing != b.space.spacing:
        raise DimensionError(f"cannot compare sets over {a.space.dims} and {b.space.dims}")
    total = a.count() + b.count()
    if total == 0:
        return 1.0
    return 2.0 * (a & b).count() / total
