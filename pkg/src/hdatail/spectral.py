"""Rank-based empirical spectral measures mapped to [0, 1], and their densities.

All three estimators select observations whose anti-rank is at most k and
emit one angular point per selected observation, with equal weights. The
points are rank ratios, so an anti-rank of 0 (an infinite standardized
coordinate) needs no special casing: the denominator ``r1 + r2`` is always
at least 1.
"""

import enum
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import trapezoid

from . import _kernels
from .errors import EmptySelectionError, InsufficientDataError
from .sample import Reference

DEFAULT_DELTA = 0.05
DEFAULT_GRIDSIZE = 512
MIN_BANDWIDTH = 0.01


class Variant(enum.Enum):
    DETECTION = "detection"
    STANDARD = "standard"
    NONSTANDARD = "nonstandard"


@dataclass(frozen=True, eq=False)
class SpectralSample:
    variant: Variant
    points: np.ndarray
    k: int

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, copy=True)
        if pts.ndim != 1:
            raise ValueError("points must be one-dimensional")
        if np.any((pts < 0) | (pts > 1)) or np.any(np.isnan(pts)):
            raise ValueError("spectral points must lie in [0, 1]")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "variant", Variant(self.variant))

    @property
    def selected(self):
        return self.points.shape[0]

    @property
    def weight(self):
        """Exact common weight ``1/selected`` of every point."""
        return Fraction(1, self.selected) if self.selected else Fraction(0)

    @property
    def weights(self):
        return np.full(self.selected, float(self.weight))

    def total_mass(self):
        # summed in exact arithmetic: m * fl(1/m) need not round to 1
        return float(self.selected * self.weight)

    def __eq__(self, other):
        if not isinstance(other, SpectralSample):
            return NotImplemented
        return (self.variant is other.variant and self.k == other.k
                and np.array_equal(self.points, other.points))


@dataclass(frozen=True, eq=False)
class DensityEstimate:
    grid: np.ndarray
    density: np.ndarray
    bandwidth: float

    def integral(self):
        return float(trapezoid(self.density, self.grid))

    def to_dict(self):
        return {
            "grid": self.grid.tolist(),
            "density": self.density.tolist(),
            "bandwidth": self.bandwidth,
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        return cls(np.asarray(d["grid"], dtype=np.float64),
                   np.asarray(d["density"], dtype=np.float64),
                   float(d["bandwidth"]))


def _check_level(ar, k, expected):
    if Reference(ar.reference) is not expected:
        raise ValueError(f"need {expected.name} anti-ranks, got {ar.reference.name}")
    if not 1 <= k <= ar.n:
        raise InsufficientDataError(f"k={k} outside [1, n={ar.n}]")


def _emit(variant, k, mask, num, r1, r2):
    if not mask.any():
        raise EmptySelectionError(f"no observation has anti-rank <= k={k}")
    num = num[mask].astype(np.float64)
    den = (r1[mask] + r2[mask]).astype(np.float64)
    return SpectralSample(variant, num / den, int(k))


def standard_spectral(ar, k):
    """Ranks against the minimum: select ``max(r1, r2) <= k``, point ``r1/(r1+r2)``."""
    _check_level(ar, k, Reference.MIN)
    mask = np.maximum(ar.r1, ar.r2) <= k
    return _emit(Variant.STANDARD, k, mask, ar.r1, ar.r1, ar.r2)


def nonstandard_spectral(ar, k):
    """Ranks against X2: select ``r2 <= k``, point ``r2/(r1+r2)``.

    This is ``s/(1+s)`` for the ratio ``s = r2/r1``; ``r1 == 0`` gives 1.
    """
    _check_level(ar, k, Reference.SECOND)
    mask = ar.r2 <= k
    return _emit(Variant.NONSTANDARD, k, mask, ar.r2, ar.r1, ar.r2)


def detection_spectral(ar, k):
    """Ranks against the maximum: select ``min(r1, r2) <= k``, point ``r1/(r1+r2)``."""
    _check_level(ar, k, Reference.MAX)
    mask = np.minimum(ar.r1, ar.r2) <= k
    return _emit(Variant.DETECTION, k, mask, ar.r1, ar.r1, ar.r2)


def silverman_bandwidth(points):
    m = len(points)
    sd = float(np.std(points, ddof=1)) if m > 1 else 0.0
    return max(1.06 * sd * m ** (-0.2), MIN_BANDWIDTH)


def kde(sp, bandwidth=None, gridsize=DEFAULT_GRIDSIZE):
    """Gaussian KDE on [0, 1] with reflection at both boundaries.

    The default bandwidth is Silverman's rule of thumb floored at 0.01.
    """
    if sp.selected < 2:
        raise InsufficientDataError(f"kde needs at least 2 points, got {sp.selected}")
    if gridsize < 2:
        raise ValueError("gridsize must be >= 2")
    if bandwidth is None:
        bandwidth = silverman_bandwidth(sp.points)
    elif not bandwidth > 0 or not math.isfinite(bandwidth):
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    grid = np.linspace(0.0, 1.0, int(gridsize))
    density = _kernels.reflected_kde(sp.points, grid, float(bandwidth))
    return DensityEstimate(grid, density, float(bandwidth))


def boundary_mass(sp, delta=DEFAULT_DELTA):
    """Fractions of points in ``[0, delta]``, in ``[1-delta, 1]``, and the rest."""
    if not 0 < delta < 0.5:
        raise ValueError(f"delta must lie in (0, 0.5), got {delta}")
    if sp.selected < 1:
        raise EmptySelectionError("boundary_mass of an empty spectral sample")
    m = sp.selected
    m0 = np.count_nonzero(sp.points <= delta) / m
    m1 = np.count_nonzero(sp.points >= 1.0 - delta) / m
    # (m0 + m1) + interior == 1 exactly in floating point
    return m0, m1, 1.0 - (m0 + m1)
