"""One-dimensional extreme value machinery.

Order statistics are 1-indexed and descending: ``X(1) >= X(2) >= ... >= X(n)``.
Fractional indices are rounded up.

Two coordinate systems appear here. :func:`psi` is the canonical tail-rate
function in the three textbook forms (power, exponential, inverse power).
The fitted location/scale of :func:`scale_location` instead standardize the
data so that the exceedance rate above level ``n/k`` is the generalized
Pareto rate ``(1 + gamma*y)^(-1/gamma)``. :func:`to_canonical` maps the
second system into the first, and :func:`tail_psi` is ``psi`` composed with
that map. For ``gamma == 0`` the two systems coincide.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpacingError, InsufficientDataError

GAMMA_ZERO_TOL = 1e-8
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class EvtFit:
    """Extreme value index plus location/scale at level n/k."""

    gamma: float
    scale: float
    location: float
    k: int
    n: int

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        check_k(self.k, self.n)

    def standardize(self, x):
        return (np.asarray(x, dtype=np.float64) - self.location) / self.scale

    def tail_rate(self, y):
        """Limit exceedance rate ``1/tail_psi(y)`` in standardized units."""
        with np.errstate(divide="ignore"):
            return 1.0 / tail_psi(self.gamma, y)


def check_k(k, n):
    """Validate that level k leaves room for X(2k) and the four Pickands blocks."""
    if int(k) != k or k < 1:
        raise InsufficientDataError(f"k must be a positive integer, got {k!r}")
    m = -(-int(k) // 4)
    if 4 * m > n:
        raise InsufficientDataError(f"k={k} needs 4*ceil(k/4)={4 * m} <= n={n}")
    if 2 * k > n:
        raise InsufficientDataError(f"k={k} needs 2k <= n={n} for the scale estimator")


def order_statistics(series):
    """Return the values sorted in descending order."""
    values = getattr(series, "values", series)
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("order statistics of an empty series")
    return np.sort(values)[::-1]


def pickands_gamma(ordered, k):
    """Pickands estimate of the extreme value index.

    With ``m = ceil(k/4)``::

        gamma = log((X(m) - X(2m)) / (X(2m) - X(4m))) / log 2

    Invariant under positive affine maps of the data, and defined for
    any sign of gamma.
    """
    ordered = np.asarray(ordered, dtype=np.float64)
    n = ordered.size
    if k < 1:
        raise InsufficientDataError(f"k must be >= 1, got {k}")
    m = -(-int(k) // 4)
    if 4 * m > n:
        raise InsufficientDataError(f"k={k} too large: need 4*ceil(k/4)={4 * m} <= n={n}")
    a, b, c = ordered[m - 1], ordered[2 * m - 1], ordered[4 * m - 1]
    upper, lower = a - b, b - c
    if lower == 0 or upper == 0:
        raise DegenerateSpacingError(
            f"zero spacing among X({m})={a}, X({2 * m})={b}, X({4 * m})={c}")
    return math.log(upper / lower) / _LN2


def scale_location(ordered, k, gamma):
    """Location ``X(k)`` and scale ``a(n/k)`` from the spacing ``X(k) - X(2k)``.

    Uses ``U(2t) - U(t) ~ a(t) (2^gamma - 1)/gamma`` with ``t = n/(2k)``
    rewritten at level n/k, giving ``gamma*(X(k) - X(2k))/(1 - 2^-gamma)``;
    the ``gamma -> 0`` limit is ``(X(k) - X(2k))/log 2``.
    """
    ordered = np.asarray(ordered, dtype=np.float64)
    n = ordered.size
    if k < 1 or 2 * k > n:
        raise InsufficientDataError(f"k={k} needs 1 <= k and 2k <= n={n}")
    loc = float(ordered[k - 1])
    spacing = loc - float(ordered[2 * k - 1])
    if not spacing > 0:
        raise DegenerateSpacingError(f"X({k}) - X({2 * k}) = {spacing}")
    if abs(gamma) < GAMMA_ZERO_TOL:
        scale = spacing / _LN2
    else:
        scale = gamma * spacing / -math.expm1(-gamma * _LN2)
    return scale, loc


def fit_evt(values, k):
    """Pickands index plus location/scale for a univariate series."""
    ordered = order_statistics(values)
    check_k(k, ordered.size)
    gamma = pickands_gamma(ordered, k)
    scale, loc = scale_location(ordered, k, gamma)
    return EvtFit(gamma=gamma, scale=scale, location=loc, k=int(k), n=int(ordered.size))


def psi(gamma, y):
    """Canonical tail-rate function; returns values in ``[0, inf]``.

    - gamma > 0: ``y**(1/gamma)`` for y > 0, else 0
    - gamma = 0: ``exp(y)``
    - gamma < 0: ``(-y)**(1/gamma)`` for y <= 0, else inf

    Scalars in, scalar out; arrays in, array out.
    """
    y_arr = np.asarray(y, dtype=np.float64)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        if abs(gamma) < GAMMA_ZERO_TOL:
            out = np.exp(y_arr)
        elif gamma > 0:
            out = np.where(y_arr > 0, np.power(np.maximum(y_arr, 0.0), 1.0 / gamma), 0.0)
        else:
            out = np.where(y_arr > 0, np.inf, np.power(np.maximum(-y_arr, 0.0), 1.0 / gamma))
    return float(out) if np.ndim(y) == 0 else out


def psi_inverse(gamma, s):
    """Left-continuous inverse of :func:`psi` on ``(0, inf)``."""
    s_arr = np.asarray(s, dtype=np.float64)
    if np.any(~(s_arr > 0)):
        raise ValueError("psi_inverse needs s > 0")
    with np.errstate(over="ignore", divide="ignore"):
        if abs(gamma) < GAMMA_ZERO_TOL:
            out = np.log(s_arr)
        elif gamma > 0:
            out = np.power(s_arr, gamma)
        else:
            out = -np.power(s_arr, gamma)
    return float(out) if np.ndim(s) == 0 else out


def to_canonical(gamma, y):
    """Map generalized-Pareto standardized units to canonical ``psi`` units."""
    y = np.asarray(y, dtype=np.float64) if np.ndim(y) else float(y)
    if abs(gamma) < GAMMA_ZERO_TOL:
        return y
    if gamma > 0:
        return 1.0 + gamma * y
    return -(1.0 + gamma * y)


def tail_psi(gamma, y):
    """``psi`` in fitted units: ``(1 + gamma*y)^(1/gamma)`` with the usual limits."""
    return psi(gamma, to_canonical(gamma, y))
