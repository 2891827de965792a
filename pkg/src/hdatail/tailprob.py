"""Marginal and joint tail probability estimates from a fitted HDA model."""

import enum
import json
import math
from dataclasses import dataclass

from .errors import ModelMismatchError
from .fit import Cone, MeasureKind, TailMeasure

SEMIPARAMETRIC_MIN_POINTS = 50


class QueryMode(enum.Enum):
    JOINT = "joint"
    MARGINAL2 = "marginal2"


@dataclass(frozen=True)
class TailQuery:
    u: float
    v: float
    mode: QueryMode = QueryMode.JOINT

    def __post_init__(self):
        object.__setattr__(self, "mode", QueryMode(self.mode))
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise ValueError("query thresholds must be finite")


@dataclass(frozen=True)
class TailEstimate:
    probability: float
    method: MeasureKind
    k: int
    clamped: bool = False

    def to_dict(self):
        return {
            "probability": self.probability,
            "method": self.method.value,
            "k": self.k,
            "clamped": self.clamped,
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def _clamp(p):
    if p > 1.0:
        return 1.0, True
    if p < 0.0:
        return 0.0, True
    return float(p), False


def default_semiparametric(model):
    return model.spectral.selected >= SEMIPARAMETRIC_MIN_POINTS


def _resolve_method(model, method, have_sample=True):
    if method is None:
        return default_semiparametric(model) or not have_sample
    if isinstance(method, str):
        low = method.lower()
        if low in ("semiparametric", "nonparametric"):
            return low == "semiparametric"
        method = MeasureKind(method)
    method = MeasureKind(method)
    wants_e0 = method in (MeasureKind.NONPARAMETRIC_E0, MeasureKind.SEMIPARAMETRIC_E0)
    if wants_e0 != model.cone.is_e0:
        raise ModelMismatchError(f"method {method.value} does not apply to cone {model.cone.value}")
    return method.semiparametric


def joint_tail(model, sample, q, method=None):
    """Estimate ``P(X1 > u, X2 > v)`` as ``(k/n) * nu(standardized rectangle)``.

    `method` is ``"semiparametric"``, ``"nonparametric"``, a
    :class:`~hdatail.fit.MeasureKind`, or None for the default (semiparametric
    when the spectral sample has at least 50 points or no sample is given).
    The nonparametric measure needs `sample`. Probabilities outside [0, 1] are clamped and
    flagged: such queries lie outside the asymptotic regime.
    """
    if sample is not None and sample.n != model.n:
        raise ModelMismatchError(f"sample has n={sample.n}, model has n={model.n}")
    if not isinstance(q, TailQuery):
        q = TailQuery(*q)
    semi = _resolve_method(model, method, sample is not None)
    measure = TailMeasure(model, sample, semiparametric=semi)
    u, v = (q.v, q.u) if model.swapped else (q.u, q.v)
    x, y = model.evt.standardize(u), model.evt.standardize(v)
    raw = model.k / model.n * measure.mass(float(x), float(y))
    prob, clamped = _clamp(raw)
    return TailEstimate(prob, measure.kind, model.k, clamped)


def marginal2_tail(sqcap_model, sample, v):
    """Estimate ``P(X2 > v)`` from the fitted index of the second component.

    For a model fitted on swapped components this is the tail of the
    original first component.
    """
    if sqcap_model.cone is not Cone.NONSTANDARD_SQCAP:
        raise ModelMismatchError("marginal2_tail needs a NonStandardSqcap model")
    if sample is not None and sample.n != sqcap_model.n:
        raise ModelMismatchError(f"sample has n={sample.n}, model has n={sqcap_model.n}")
    evt = sqcap_model.evt
    rate = evt.tail_rate(float(evt.standardize(v)))
    prob, clamped = _clamp(evt.k / evt.n * float(rate))
    return TailEstimate(prob, MeasureKind.SEMIPARAMETRIC_SQCAP, evt.k, clamped)


def evaluate(model, sample, q, method=None):
    """Dispatch a query by mode."""
    if not isinstance(q, TailQuery):
        q = TailQuery(*q)
    if q.mode is QueryMode.MARGINAL2:
        return marginal2_tail(model, sample, q.v)
    return joint_tail(model, sample, q, method)
