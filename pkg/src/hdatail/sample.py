"""Bivariate samples, derived component series and anti-ranks."""

import csv
import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import SampleFormatError


class Role(enum.Enum):
    COMPONENT1 = "component1"
    COMPONENT2 = "component2"
    MIN = "min"
    MAX = "max"


class Reference(enum.Enum):
    """Series the anti-ranks are counted against."""

    MIN = "min"
    MAX = "max"
    SECOND = "second"


@dataclass(frozen=True, eq=False)
class BivariateSample:
    """n observed pairs stored as an (n, 2) float array, in input order."""

    pairs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.pairs, dtype=np.float64, copy=True)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError(f"pairs must have shape (n, 2), got {arr.shape}")
        if arr.shape[0] < 1:
            raise ValueError("sample must contain at least one pair")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sample contains non-finite values")
        arr.setflags(write=False)
        object.__setattr__(self, "pairs", arr)

    @classmethod
    def from_columns(cls, x1, x2):
        return cls(np.column_stack([np.asarray(x1, dtype=np.float64),
                                    np.asarray(x2, dtype=np.float64)]))

    @property
    def n(self):
        return self.pairs.shape[0]

    @property
    def x1(self):
        return self.pairs[:, 0]

    @property
    def x2(self):
        return self.pairs[:, 1]

    def swapped(self):
        """Return the sample with the two components exchanged."""
        return BivariateSample(self.pairs[:, ::-1])

    def __eq__(self, other):
        if not isinstance(other, BivariateSample):
            return NotImplemented
        return np.array_equal(self.pairs, other.pairs)

    def __len__(self):
        return self.n

    def to_csv(self, header=True):
        """Serialize in the format accepted by :func:`load_sample`."""
        out = io.StringIO()
        if header:
            out.write("x1,x2\n")
        for a, b in self.pairs.tolist():
            out.write(f"{a!r},{b!r}\n")
        return out.getvalue()


@dataclass(frozen=True, eq=False)
class UnivariateSeries:
    values: np.ndarray
    role: Role

    def __len__(self):
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class AntirankSet:
    reference: Reference
    r1: np.ndarray
    r2: np.ndarray

    @property
    def n(self):
        return self.r1.shape[0]


def _parse_float(text, lineno):
    try:
        value = float(text)
    except ValueError:
        raise SampleFormatError(f"cannot parse {text.strip()!r} as a number", lineno) from None
    if not math.isfinite(value):
        raise SampleFormatError(f"non-finite value {text.strip()!r}", lineno)
    return value


def load_sample(source):
    """Parse two-column CSV text into a :class:`BivariateSample`.

    `source` may be ``bytes``, ``str`` or a binary/text file object. A
    single header line is skipped when its first field is not numeric.
    Blank lines are ignored. At least two records are required.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise SampleFormatError(f"input is not UTF-8 text: {exc}") from None

    rows = []
    header_allowed = True
    for lineno, fields in enumerate(csv.reader(io.StringIO(source)), start=1):
        if not fields or all(not f.strip() for f in fields):
            continue
        if len(fields) != 2:
            raise SampleFormatError(f"expected 2 fields, found {len(fields)}", lineno)
        if header_allowed:
            header_allowed = False
            try:
                float(fields[0])
            except ValueError:
                continue
        rows.append((_parse_float(fields[0], lineno), _parse_float(fields[1], lineno)))

    if len(rows) < 2:
        raise SampleFormatError(f"need at least 2 records, found {len(rows)}")
    return BivariateSample(np.array(rows, dtype=np.float64))


def derive_series(sample, role):
    role = Role(role)
    if role is Role.COMPONENT1:
        values = sample.x1.copy()
    elif role is Role.COMPONENT2:
        values = sample.x2.copy()
    elif role is Role.MIN:
        values = np.minimum(sample.x1, sample.x2)
    else:
        values = np.maximum(sample.x1, sample.x2)
    return UnivariateSeries(values, role)


_REFERENCE_ROLE = {
    Reference.MIN: Role.MIN,
    Reference.MAX: Role.MAX,
    Reference.SECOND: Role.COMPONENT2,
}


def antiranks(sample, reference):
    """Count, for each observation, reference values at or above each component.

    ``r1[i] = #{j: ref[j] >= x1[i]}`` and ``r2[i] = #{j: ref[j] >= x2[i]}``
    where ``ref`` is the componentwise min, max, or the second component.
    Ties count with ``>=``; no midranks.
    """
    reference = Reference(reference)
    ref = derive_series(sample, _REFERENCE_ROLE[reference]).values
    counts = _kernels.count_at_least(ref, sample.pairs.ravel()).reshape(-1, 2)
    r1 = np.ascontiguousarray(counts[:, 0], dtype=np.int64)
    r2 = np.ascontiguousarray(counts[:, 1], dtype=np.int64)
    return AntirankSet(reference, r1, r2)
