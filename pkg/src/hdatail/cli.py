"""Command-line front end.

Exit codes:
  0  success
  2  invalid configuration or arguments
  3  I/O failure (missing input, unwritable output)
  4  parse failure (malformed CSV or JSON)
  5  degenerate data (zero spacings, k too large, empty selection)
  6  no asymptotic independence detected, fit refused
"""

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field

from .errors import (
    DegenerateSpacingError,
    EmptySelectionError,
    InsufficientDataError,
    ModelMismatchError,
    NoAsymptoticIndependenceError,
    SampleFormatError,
)
from .fit import (
    DEFAULT_JOINT_THRESHOLD,
    DEFAULT_THETA,
    Cone,
    HdaModel,
    detect,
    fit_hda,
)
from .oracles import ExampleId, simulate
from .sample import load_sample
from .spectral import DEFAULT_DELTA, DEFAULT_GRIDSIZE, kde
from .tailprob import QueryMode, TailQuery, evaluate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_PARSE = 4
EXIT_DEGENERATE = 5
EXIT_NO_AI = 6

MIN_K = 8
COMMANDS = ("simulate", "detect", "fit", "tailprob", "spectral-density")


class ConfigError(Exception):
    pass


class _ParseFailure(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    model: str | None = None
    k: int | None = None
    delta: float = DEFAULT_DELTA
    theta: float = DEFAULT_THETA
    joint_threshold: float = DEFAULT_JOINT_THRESHOLD
    bandwidth: float | None = None
    gridsize: int = DEFAULT_GRIDSIZE
    seed: int | None = None
    example: str | None = None
    n: int | None = None
    method: str | None = None
    mode: str = "joint"
    queries: list = field(default_factory=list)
    queries_file: str | None = None

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.command == "simulate":
            if self.example is None or self.n is None or self.seed is None:
                raise ConfigError("simulate needs --example, --n and --seed")
            if self.n < 1:
                raise ConfigError("--n must be >= 1")
            if not 0 <= self.seed < 2 ** 64:
                raise ConfigError("--seed must be a 64-bit unsigned integer")
        if self.command in ("detect", "fit") and self.input is None:
            raise ConfigError(f"{self.command} needs --input")
        if self.command in ("tailprob", "spectral-density") and self.model is None:
            raise ConfigError(f"{self.command} needs --model")
        if self.command == "tailprob" and not self.queries and self.queries_file is None:
            raise ConfigError("tailprob needs --query or --queries")
        if self.k is not None and self.k < MIN_K:
            raise ConfigError(f"--k must be >= {MIN_K}")
        if not 0 < self.delta < 0.5:
            raise ConfigError("--delta must lie in (0, 0.5)")
        if not 0 < self.theta <= 0.5:
            raise ConfigError("--theta must lie in (0, 0.5]")
        if not self.joint_threshold > 0:
            raise ConfigError("--joint-threshold must be positive")
        if self.bandwidth is not None and not self.bandwidth > 0:
            raise ConfigError("--bandwidth must be positive")
        if self.gridsize < 2:
            raise ConfigError("--gridsize must be >= 2")
        if self.method not in (None, "semiparametric", "nonparametric"):
            raise ConfigError("--method must be semiparametric or nonparametric")
        if self.mode not in ("joint", "marginal2"):
            raise ConfigError("--mode must be joint or marginal2")


def default_k(n):
    return math.isqrt(n)


# --- I/O helpers -------------------------------------------------------------

def _read_bytes(path):
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write_text(path, text):
    """Write atomically: temp file in the target directory, then rename."""
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".hdatail-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(obj):
    # float repr is the shortest string that round-trips exactly
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _load_json(path):
    try:
        return json.loads(_read_bytes(path).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise _ParseFailure(f"{path}: {exc}") from None


def _load_models(path):
    doc = _load_json(path)
    try:
        if isinstance(doc, dict) and "models" in doc:
            return [HdaModel.from_dict(d) for d in doc["models"]]
        return [HdaModel.from_dict(doc)]
    except (KeyError, TypeError, ValueError) as exc:
        raise _ParseFailure(f"{path}: not a model file ({exc})") from None


def _load_queries(cfg):
    queries = [TailQuery(u, v, cfg.mode) for u, v in cfg.queries]
    if cfg.queries_file is not None:
        text = _read_bytes(cfg.queries_file).decode("utf-8")
        try:
            sample = load_sample(text)
        except SampleFormatError as exc:
            raise _ParseFailure(f"{cfg.queries_file}: {exc}") from None
        queries += [TailQuery(float(u), float(v), cfg.mode) for u, v in sample.pairs]
    return queries


def _sample_and_k(cfg):
    sample = load_sample(_read_bytes(cfg.input))
    k = cfg.k if cfg.k is not None else default_k(sample.n)
    if k < MIN_K:
        raise ConfigError(f"default k={k} for n={sample.n} is below {MIN_K}; pass --k")
    return sample, k


# --- commands ----------------------------------------------------------------

def _cmd_simulate(cfg):
    sample = simulate(ExampleId(cfg.example), cfg.n, cfg.seed)
    _write_text(cfg.output, sample.to_csv())


def _cmd_detect(cfg):
    sample, k = _sample_and_k(cfg)
    sp, cat = detect(sample, k, cfg.delta, cfg.theta)
    m0, m1, interior = cat.evidence
    out = {
        "category": cat.value.value,
        "m0": m0,
        "m1": m1,
        "interior": interior,
        "k": k,
        "k_default": cfg.k is None,
        "n": sample.n,
        "delta": cfg.delta,
        "theta": cfg.theta,
        "selected": sp.selected,
        "density": kde(sp, cfg.bandwidth, cfg.gridsize).to_dict() if sp.selected >= 2 else None,
    }
    _write_text(cfg.output, _dump(out))


def _cmd_fit(cfg):
    sample, k = _sample_and_k(cfg)
    res = fit_hda(sample, k, cfg.delta, cfg.theta, cfg.joint_threshold)
    m0, m1, interior = res.category.evidence
    out = {
        "category": res.category.value.value,
        "evidence": {"m0": m0, "m1": m1, "interior": interior},
        "k": k,
        "k_default": cfg.k is None,
        "n": sample.n,
        "delta": cfg.delta,
        "theta": cfg.theta,
        "swapped": res.swapped,
        "joint_mass": res.joint_mass,
        "joint_threshold": res.joint_threshold,
        "e0_fit_triggered": (None if res.joint_mass is None
                             else any(m.cone is Cone.NONSTANDARD_E0 for m in res.models)),
        "joint_decision": None if res.joint_mass is None else "heuristic",
        "models": [m.to_dict() for m in res.models],
    }
    _write_text(cfg.output, _dump(out))


def _cmd_tailprob(cfg):
    models = _load_models(cfg.model)
    sample = load_sample(_read_bytes(cfg.input)) if cfg.input is not None else None
    if cfg.method == "nonparametric" and sample is None:
        raise ConfigError("--method nonparametric needs --input with the fitted sample")
    queries = _load_queries(cfg)
    results = []
    for q in queries:
        for model in models:
            if q.mode is QueryMode.MARGINAL2 and model.cone is not Cone.NONSTANDARD_SQCAP:
                continue
            method = cfg.method
            if method is None and sample is None:
                method = "semiparametric"
            est = evaluate(model, sample, q, method)
            results.append({"query": {"u": q.u, "v": q.v, "mode": q.mode.value},
                            "cone": model.cone.value, **est.to_dict()})
    if not results:
        raise ConfigError("no model in the file answers the requested query mode")
    _write_text(cfg.output, _dump(results))


def _cmd_spectral_density(cfg):
    models = _load_models(cfg.model)
    out = []
    for model in models:
        dens = kde(model.spectral, cfg.bandwidth, cfg.gridsize)
        out.append({"cone": model.cone.value, "variant": model.spectral.variant.value,
                    "k": model.k, **dens.to_dict()})
    _write_text(cfg.output, _dump({"densities": out}))


_DISPATCH = {
    "simulate": _cmd_simulate,
    "detect": _cmd_detect,
    "fit": _cmd_fit,
    "tailprob": _cmd_tailprob,
    "spectral-density": _cmd_spectral_density,
}


def run(cfg):
    """Execute one configured command; return the process exit status."""
    try:
        cfg.validate()
        _DISPATCH[cfg.command](cfg)
    except ConfigError as exc:
        print(f"hdatail: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"hdatail: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SampleFormatError, _ParseFailure) as exc:
        print(f"hdatail: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DegenerateSpacingError, InsufficientDataError, EmptySelectionError,
            ModelMismatchError) as exc:
        print(f"hdatail: degenerate data: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except NoAsymptoticIndependenceError as exc:
        print(f"hdatail: fit refused: {exc}", file=sys.stderr)
        return EXIT_NO_AI
    return EXIT_OK


def _query(text):
    try:
        u, v = (float(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected U,V, got {text!r}") from None
    if not (math.isfinite(u) and math.isfinite(v)):
        raise argparse.ArgumentTypeError("query thresholds must be finite")
    return (u, v)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hdatail",
        description="Detect and estimate hidden domain of attraction in bivariate samples.",
        epilog=__doc__.split("\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input):
        p.add_argument("--input", required=needs_input, help="two-column CSV sample ('-' for stdin)")
        p.add_argument("--output", help="output path (default: stdout)")

    p = sub.add_parser("simulate", help="write a CSV sample from a reference distribution")
    p.add_argument("--example", required=True, choices=[e.value for e in ExampleId])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", help="output CSV path (default: stdout)")

    for name, help_ in (("detect", "classify the asymptotic-independence structure"),
                        ("fit", "detect, then fit the matching HDA model(s)")):
        p = sub.add_parser(name, help=help_)
        common(p, True)
        p.add_argument("--k", type=int, help="number of upper order statistics (default floor(sqrt(n)))")
        p.add_argument("--delta", type=float, default=DEFAULT_DELTA)
        p.add_argument("--theta", type=float, default=DEFAULT_THETA)
        if name == "detect":
            p.add_argument("--bandwidth", type=float)
            p.add_argument("--gridsize", type=int, default=DEFAULT_GRIDSIZE)
        else:
            p.add_argument("--joint-threshold", "--jointThreshold", dest="joint_threshold",
                           type=float, default=DEFAULT_JOINT_THRESHOLD)

    p = sub.add_parser("tailprob", help="tail probability estimates from a fitted model file")
    p.add_argument("--model", required=True, help="JSON written by 'fit' (or a single model)")
    common(p, False)
    p.add_argument("--query", type=_query, action="append", default=[], metavar="U,V")
    p.add_argument("--queries", dest="queries_file", help="CSV file of U,V rows")
    p.add_argument("--mode", choices=[m.value for m in QueryMode], default="joint")
    p.add_argument("--method", choices=["semiparametric", "nonparametric"])

    p = sub.add_parser("spectral-density", help="KDE of each fitted model's spectral sample")
    p.add_argument("--model", required=True)
    p.add_argument("--output")
    p.add_argument("--bandwidth", type=float)
    p.add_argument("--gridsize", type=int, default=DEFAULT_GRIDSIZE)
    return parser


def config_from_args(ns):
    kw = {k: v for k, v in vars(ns).items() if v is not None or k in ("k",)}
    if "query" in kw:
        kw["queries"] = kw.pop("query")
    return RunConfig(**kw)


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
