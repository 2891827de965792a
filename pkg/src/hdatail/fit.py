"""Detection of the asymptotic-independence structure and HDA model fitting.

Rectangle queries ``(x, y)`` are in the fitted model's standardized units,
``(value - location) / scale``. See :mod:`hdatail.evt` for how those relate
to the canonical ``psi`` forms.
"""

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ModelMismatchError, NoAsymptoticIndependenceError
from .evt import EvtFit, fit_evt, tail_psi
from .sample import Reference, Role, antiranks, derive_series
from .spectral import (
    DEFAULT_DELTA,
    SpectralSample,
    Variant,
    boundary_mass,
    detection_spectral,
    nonstandard_spectral,
    standard_spectral,
)

DEFAULT_THETA = 0.35
DEFAULT_JOINT_THRESHOLD = 0.05


class CategoryValue(enum.Enum):
    ZERO_SECOND_MARGINAL = "ZeroSecondMarginal"
    ZERO_FIRST_MARGINAL = "ZeroFirstMarginal"
    BOTH_AXES = "BothAxes"
    NO_ASYMPTOTIC_INDEPENDENCE = "NoAsymptoticIndependence"


@dataclass(frozen=True)
class Category:
    value: CategoryValue
    evidence: tuple  # (m0, m1, interior)
    delta: float = DEFAULT_DELTA
    theta: float = DEFAULT_THETA


class Cone(enum.Enum):
    STANDARD_E0 = "StandardE0"
    NONSTANDARD_SQCAP = "NonStandardSqcap"
    NONSTANDARD_E0 = "NonStandardE0"

    @property
    def is_e0(self):
        return self is not Cone.NONSTANDARD_SQCAP


class Mode(enum.Enum):
    E0 = "E0"
    SQCAP = "Sqcap"


class Form(enum.Enum):
    UPPER = "upper"          # (x, inf] x (y, inf]
    STRIP = "strip"          # [-inf, x] x (y, inf], second-marginal sets


_CONE_VARIANT = {
    Cone.STANDARD_E0: Variant.STANDARD,
    Cone.NONSTANDARD_E0: Variant.STANDARD,
    Cone.NONSTANDARD_SQCAP: Variant.NONSTANDARD,
}


@dataclass(frozen=True, eq=False)
class HdaModel:
    """Fitted cone, univariate EVT fit and standardized spectral sample.

    ``swapped`` records that the components were exchanged before fitting
    (the zero-first-marginal path); all model coordinates are then in the
    swapped orientation.
    """

    cone: Cone
    evt: EvtFit
    spectral: SpectralSample
    swapped: bool = False

    def __post_init__(self):
        object.__setattr__(self, "cone", Cone(self.cone))
        if self.spectral.variant is not _CONE_VARIANT[self.cone]:
            raise ValueError(f"{self.spectral.variant.name} spectral sample "
                             f"does not match cone {self.cone.value}")
        if self.spectral.k != self.evt.k:
            raise ValueError("spectral and EVT fits use different k")

    @property
    def k(self):
        return self.evt.k

    @property
    def n(self):
        return self.evt.n

    def to_dict(self):
        return {
            "cone": self.cone.value,
            "gamma": self.evt.gamma,
            "scale": self.evt.scale,
            "location": self.evt.location,
            "k": self.evt.k,
            "n": self.evt.n,
            "spectral_points": self.spectral.points.tolist(),
            "swapped": self.swapped,
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        cone = Cone(d["cone"])
        evt = EvtFit(gamma=float(d["gamma"]), scale=float(d["scale"]),
                     location=float(d["location"]), k=int(d["k"]), n=int(d["n"]))
        spectral = SpectralSample(_CONE_VARIANT[cone], np.asarray(d["spectral_points"], dtype=np.float64),
                                  int(d["k"]))
        return cls(cone, evt, spectral, bool(d.get("swapped", False)))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        if not isinstance(other, HdaModel):
            return NotImplemented
        return (self.cone is other.cone and self.evt == other.evt
                and self.spectral == other.spectral and self.swapped == other.swapped)


def classify(sp, delta=DEFAULT_DELTA, theta=DEFAULT_THETA):
    """Read the detection spectral sample into one of the four categories.

    Both ends holding at least ``theta`` of the mass means both axes; one end
    holding at least ``2*theta`` means a zero marginal on the other axis.
    """
    m0, m1, interior = boundary_mass(sp, delta)
    if m0 >= theta and m1 >= theta:
        value = CategoryValue.BOTH_AXES
    elif m0 >= 2 * theta:
        value = CategoryValue.ZERO_SECOND_MARGINAL
    elif m1 >= 2 * theta:
        value = CategoryValue.ZERO_FIRST_MARGINAL
    else:
        value = CategoryValue.NO_ASYMPTOTIC_INDEPENDENCE
    return Category(value, (m0, m1, interior), delta, theta)


def detect(sample, k, delta=DEFAULT_DELTA, theta=DEFAULT_THETA):
    """Detection spectral sample (ranks against the maximum) and its category."""
    sp = detection_spectral(antiranks(sample, Reference.MAX), k)
    return sp, classify(sp, delta, theta)


def fit_standard(sample, k, cone=Cone.STANDARD_E0):
    """Fit the index of the minimum component and the standard spectral sample."""
    evt = fit_evt(derive_series(sample, Role.MIN), k)
    spectral = standard_spectral(antiranks(sample, Reference.MIN), k)
    return HdaModel(Cone(cone), evt, spectral)


@dataclass(frozen=True)
class NonstandardFit:
    sqcap: HdaModel
    e0: HdaModel | None
    joint_mass: float
    joint_threshold: float


def fit_nonstandard(sample, k, joint_threshold=DEFAULT_JOINT_THRESHOLD):
    """Fit HDA on the cone where only the second component is forced large.

    The empirical mass of the upper orthant at the standardized origin
    decides whether the joint tail is already visible there. Below
    `joint_threshold` the limit is taken to have no joint mass and the
    minimum-component fit is added (a heuristic; the limit statement
    cannot be checked from finite data).
    """
    evt = fit_evt(derive_series(sample, Role.COMPONENT2), k)
    spectral = nonstandard_spectral(antiranks(sample, Reference.SECOND), k)
    sqcap = HdaModel(Cone.NONSTANDARD_SQCAP, evt, spectral)
    joint = nu_nonparametric(sample, evt, (0.0, 0.0), Mode.SQCAP)
    e0 = fit_standard(sample, k, Cone.NONSTANDARD_E0) if joint < joint_threshold else None
    return NonstandardFit(sqcap, e0, joint, joint_threshold)


@dataclass(frozen=True)
class HdaFit:
    """Outcome of the full detect-then-fit pipeline."""

    category: Category
    detection: SpectralSample
    models: tuple = field(default=())
    joint_mass: float | None = None
    joint_threshold: float | None = None
    swapped: bool = False


def fit_hda(sample, k, delta=DEFAULT_DELTA, theta=DEFAULT_THETA,
            joint_threshold=DEFAULT_JOINT_THRESHOLD):
    """Classify, then run the fit matching the detected category."""
    det, category = detect(sample, k, delta, theta)
    value = category.value
    if value is CategoryValue.NO_ASYMPTOTIC_INDEPENDENCE:
        raise NoAsymptoticIndependenceError(
            f"no evidence of asymptotic independence (m0={category.evidence[0]:.3f}, "
            f"m1={category.evidence[1]:.3f})")
    if value is CategoryValue.BOTH_AXES:
        return HdaFit(category, det, (fit_standard(sample, k),))

    swapped = value is CategoryValue.ZERO_FIRST_MARGINAL
    work = sample.swapped() if swapped else sample
    res = fit_nonstandard(work, k, joint_threshold)
    models = [res.sqcap] + ([res.e0] if res.e0 is not None else [])
    if swapped:
        models = [HdaModel(m.cone, m.evt, m.spectral, swapped=True) for m in models]
    return HdaFit(category, det, tuple(models), res.joint_mass, joint_threshold, swapped)


# --- limit measure evaluation ---------------------------------------------

def nu_nonparametric(sample, evt, rect, mode=Mode.E0, form=Form.UPPER):
    """Empirical measure ``(1/k) * #{i: standardized X_i in rect}``.

    `evt` must be fitted on the minimum series (E0) or on the second
    component (Sqcap). ``Form.STRIP`` is only meaningful for Sqcap.
    """
    mode, form = Mode(mode), Form(form)
    if sample.n != evt.n:
        raise ModelMismatchError(f"sample has n={sample.n}, fit has n={evt.n}")
    if form is Form.STRIP and mode is not Mode.SQCAP:
        raise ValueError("strip queries are defined on the Sqcap cone only")
    x, y = rect
    z1 = evt.standardize(sample.x1)
    z2 = evt.standardize(sample.x2)
    first = z1 > x if form is Form.UPPER else z1 <= x
    return np.count_nonzero(first & (z2 > y)) / evt.k


def _ratio(num, den):
    """Elementwise num/den with 0/anything = 0 and finite/0 = inf."""
    num = np.asarray(num, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = num / den
    return np.where(num == 0, 0.0, out)


def _tilde_nu(points, variant, a, b, form=Form.UPPER):
    # a, b in [0, inf]; 0 stands for 0+ (an unbounded standardized direction)
    t = np.asarray(points, dtype=np.float64)
    if t.size == 0:
        return 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        if variant is Variant.NONSTANDARD:
            s = np.where(t < 1, t / (1 - t), np.inf)
            if form is Form.UPPER:
                if math.isinf(a) or math.isinf(b):
                    return 0.0
                terms = np.minimum(_ratio(s, a), 1.0 / b if b > 0 else np.inf)
            else:
                if math.isinf(b):
                    return 0.0
                inv_b = 1.0 / b if b > 0 else np.inf
                lower = np.zeros_like(s) if math.isinf(a) else _ratio(s, a)
                terms = np.where(lower >= inv_b, 0.0, inv_b - lower)
        else:
            if form is not Form.UPPER:
                raise ValueError("strip queries are defined on the Sqcap cone only")
            if math.isinf(a) or math.isinf(b):
                return 0.0
            w1 = np.where(t <= 0.5, (1 - t) / t, 1.0)
            w2 = np.where(t >= 0.5, t / (1 - t), 1.0)
            terms = np.minimum(_ratio(w1, a), _ratio(w2, b))
    return float(np.mean(terms))


def tilde_nu_from_spectral(model, rect, form=Form.UPPER):
    """Standardized limit measure of a rectangle, integrated from the spectral points.

    Standard variant: ``mean(min(w1/a, w2/b))`` where ``(w1, w2)`` is the
    angular point with minimum coordinate 1. Nonstandard variant:
    ``mean(min(s/a, 1/b))`` for upper rectangles and
    ``mean(max(1/b - s/a, 0))`` for ``[0, a] x (b, inf]``.
    `model` may be an :class:`HdaModel` or a :class:`SpectralSample`.
    """
    sp = getattr(model, "spectral", model)
    a, b = (float(v) for v in rect)
    if not (a > 0 and b > 0):
        raise ValueError(f"rectangle corners must be positive, got {rect}")
    return _tilde_nu(sp.points, sp.variant, a, b, Form(form))


def nu_semiparametric(model, rect, form=Form.UPPER):
    """Limit measure of a rectangle from the index and the spectral sample."""
    form = Form(form)
    if form is Form.STRIP and model.cone is not Cone.NONSTANDARD_SQCAP:
        raise ValueError("strip queries are defined on the Sqcap cone only")
    a = float(tail_psi(model.evt.gamma, rect[0]))
    b = float(tail_psi(model.evt.gamma, rect[1]))
    return _tilde_nu(model.spectral.points, model.spectral.variant, a, b, form)


class MeasureKind(enum.Enum):
    NONPARAMETRIC_E0 = "NonparametricE0"
    NONPARAMETRIC_SQCAP = "NonparametricSqcap"
    SEMIPARAMETRIC_E0 = "SemiparametricE0"
    SEMIPARAMETRIC_SQCAP = "SemiparametricSqcap"

    @property
    def semiparametric(self):
        return self in (MeasureKind.SEMIPARAMETRIC_E0, MeasureKind.SEMIPARAMETRIC_SQCAP)


class TailMeasure:
    """Limit measure answering rectangle queries, backed by a model (and sample)."""

    def __init__(self, model, sample=None, semiparametric=True):
        if not semiparametric:
            if sample is None:
                raise ValueError("the nonparametric measure needs the sample")
            if sample.n != model.n:
                raise ModelMismatchError(f"sample has n={sample.n}, model has n={model.n}")
        self.model = model
        self.sample = sample
        e0 = model.cone.is_e0
        if semiparametric:
            self.kind = MeasureKind.SEMIPARAMETRIC_E0 if e0 else MeasureKind.SEMIPARAMETRIC_SQCAP
        else:
            self.kind = MeasureKind.NONPARAMETRIC_E0 if e0 else MeasureKind.NONPARAMETRIC_SQCAP

    def mass(self, x, y, form=Form.UPPER):
        if self.kind.semiparametric:
            return nu_semiparametric(self.model, (x, y), form)
        mode = Mode.E0 if self.model.cone.is_e0 else Mode.SQCAP
        sample = self.sample.swapped() if self.model.swapped else self.sample
        return nu_nonparametric(sample, self.model.evt, (x, y), mode, form)

    def __repr__(self):
        return f"TailMeasure({self.kind.value}, cone={self.model.cone.value}, k={self.model.k})"
