"""Simulators and closed-form limit measures for four reference distributions.

* ``EX21``: ``B*(W1, Z1) + (1-B)*(Z2, W2)``, W ~ Pareto(1), Z ~ Exp(1),
  B ~ Bernoulli(1/2). Asymptotically independent with a Gumbel-domain
  minimum.
* ``EX22``: ``(1/U, 1/(1-U))``, U ~ Uniform(0, 1). The minimum has a
  finite endpoint (reversed Weibull domain, index -1).
* ``EX31``: independent Exp(1) and Exp(2) components.
* ``EX32``: ``B*(E1, E3/3) + (1-B)*(E2/2, E2/2)`` with iid Exp(1) E's.

Random numbers come from numpy's Philox4x64 counter-based generator seeded
with the 64-bit seed, so a (example, n, seed) triple gives the same sample
on every platform. Do not change the generator or the draw order.

All limit measures are in canonical units, i.e. normalized so the marginal
of the minimum (E0) or of X2 (Sqcap) is ``1/psi`` exactly.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .sample import BivariateSample
from .spectral import Variant


class ExampleId(enum.Enum):
    EX21 = "ex21"
    EX22 = "ex22"
    EX31 = "ex31"
    EX32 = "ex32"


def rng_for(seed):
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.Philox(seed))


def _open_uniform(rng, n):
    # strictly inside (0, 1), so 1/U and 1/(1-U) stay finite
    return (rng.integers(0, 2 ** 53, size=n, dtype=np.int64) + 0.5) / 2.0 ** 53


def simulate(example, n, seed):
    example = ExampleId(example)
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = rng_for(seed)
    if example is ExampleId.EX21:
        b = rng.random(n) < 0.5
        w = 1.0 / _open_uniform(rng, 2 * n).reshape(2, n)
        z = rng.standard_exponential((2, n))
        x1 = np.where(b, w[0], z[1])
        x2 = np.where(b, z[0], w[1])
    elif example is ExampleId.EX22:
        u = _open_uniform(rng, n)
        x1, x2 = 1.0 / u, 1.0 / (1.0 - u)
    elif example is ExampleId.EX31:
        e = rng.standard_exponential((2, n))
        x1, x2 = e[0], e[1] / 2.0
    else:
        b = rng.random(n) < 0.5
        e = rng.standard_exponential((3, n))
        x1 = np.where(b, e[0], e[1] / 2.0)
        x2 = np.where(b, e[2] / 3.0, e[1] / 2.0)
    return BivariateSample.from_columns(x1, x2)


def oracle_nu0(example, rect):
    """Exact ``nu0((x, inf] x (y, inf])`` in canonical units.

    EX21: ``(exp(-x) + exp(-y))/2``, already canonical.
    EX22: ``-(x + y)/2`` on ``x + y <= 0``, else 0; index -1 with the
    centering at the endpoint 2.
    EX31: the unnormalized limit ``exp(-(x + 2y))`` uses centering
    ``log(n)/3`` and unit scale; the minimum is Exp(3), so the canonical
    scale is 1/3 and the limit becomes ``exp(-(x + 2y)/3)``.
    """
    example = ExampleId(example)
    x, y = (float(v) for v in rect)
    if example is ExampleId.EX21:
        return 0.5 * (math.exp(-x) + math.exp(-y))
    if example is ExampleId.EX22:
        return max(-(x + y) / 2.0, 0.0)
    if example is ExampleId.EX31:
        return math.exp(-(x + 2.0 * y) / 3.0)
    raise ValueError("no E0 limit measure is defined for ex32")


class SqcapForm(enum.Enum):
    UPPER = "upper"
    STRIP = "strip"


def oracle_nusqcap(example, rect, form=SqcapForm.UPPER):
    """Exact Sqcap limit measure in canonical units (X2 marginal ``exp(-y)``).

    The raw displays use scale 1 with X2 tails ``exp(-2y)`` (EX31) and
    ``exp(-2y)/2`` (EX32); rescaling by 1/2 and re-centering by ``log(2)/2``
    (EX32) gives:

    EX31: upper 0; strip ``exp(-y)``.
    EX32: upper ``exp(-max(x, y))``; strip ``exp(-y) - exp(-x)`` if y < x else 0.
    """
    example = ExampleId(example)
    form = SqcapForm(form)
    x, y = (float(v) for v in rect)
    if example is ExampleId.EX31:
        return 0.0 if form is SqcapForm.UPPER else math.exp(-y)
    if example is ExampleId.EX32:
        if form is SqcapForm.UPPER:
            return math.exp(-max(x, y))
        return math.exp(-y) - math.exp(-x) if y < x else 0.0
    raise ValueError(f"no Sqcap limit measure is defined for {example.value}")


@dataclass(frozen=True)
class SpectralOracle:
    """Limit law of the [0, 1]-mapped spectral points.

    Either a finite set of atoms ``((location, weight), ...)`` or a CDF.
    """

    atoms: tuple = ()
    cdf_func: object = field(default=None, repr=False)

    def cdf(self, t):
        if self.cdf_func is not None:
            return self.cdf_func(t)
        return sum(w for loc, w in self.atoms if loc <= t)

    def mass(self, lo, hi):
        """Mass of the closed interval [lo, hi]."""
        if self.cdf_func is not None:
            left = self.cdf_func(lo) if lo > 0 else 0.0
            return self.cdf_func(hi) - left
        return sum(w for loc, w in self.atoms if lo <= loc <= hi)


def _ex31_standard_density(a, b):
    # mixed derivative of a^(-1/3) b^(-2/3), the standardized EX31 limit
    return (2.0 / 9.0) * a ** (-4.0 / 3.0) * b ** (-5.0 / 3.0)


def _ex31_integrand(w, v):
    # substitutions a = v^-3, b = w^-1.5 map a, b in [1, inf) onto (0, 1]
    a, b = v ** -3.0, w ** -1.5
    return _ex31_standard_density(a, b) * 3.0 * v ** -4.0 * 1.5 * w ** -2.5


def ex31_standard_cdf(t):
    """CDF of the EX31 standard spectral law by direct numerical integration.

    Integrates the standardized density over ``{a >= 1, b >= 1, b/(a+b) <= t}``.
    """
    if t <= 0:
        return 0.0
    if t >= 1:
        return 1.0
    q = t / (1.0 - t)
    # b <= q*a  <=>  w >= q^(-2/3) v^2; b >= 1 needs v <= q^(1/3)
    v_max = min(1.0, q ** (1.0 / 3.0))
    val, _ = integrate.dblquad(_ex31_integrand, 0.0, v_max,
                               lambda v: q ** (-2.0 / 3.0) * v * v, lambda v: 1.0,
                               epsabs=1e-12, epsrel=1e-11)
    return val


_HALF_HALF = ((0.0, 0.5), (1.0, 0.5))

_SPECTRAL = {
    (ExampleId.EX21, Variant.STANDARD): SpectralOracle(_HALF_HALF),
    (ExampleId.EX22, Variant.STANDARD): SpectralOracle(_HALF_HALF),
    (ExampleId.EX31, Variant.NONSTANDARD): SpectralOracle(((0.0, 1.0),)),
    (ExampleId.EX32, Variant.NONSTANDARD): SpectralOracle(((0.5, 1.0),)),
    (ExampleId.EX31, Variant.DETECTION): SpectralOracle(((0.0, 1.0),)),
    (ExampleId.EX22, Variant.DETECTION): SpectralOracle(_HALF_HALF),
    (ExampleId.EX31, Variant.STANDARD): SpectralOracle(cdf_func=ex31_standard_cdf),
}


def oracle_spectral(example, variant):
    key = (ExampleId(example), Variant(variant))
    try:
        return _SPECTRAL[key]
    except KeyError:
        raise ValueError(f"no spectral oracle for {key[0].value}/{key[1].value}") from None
