"""Command-line front end: every command writes one CSV table.

    modelrisk curves         --kind sharp-es --alpha 0.01
    modelrisk moment-class   --measure var --ref normal
    modelrisk local          --family mixture --ref student-t --nu 3
    modelrisk mixture-sweep  --eps 1e-2,1e-3,1e-4
    modelrisk oracle-check   --alpha 0.01,0.05,0.5 --grid 100000
    modelrisk basel          --history var.csv --lambda 3

Options may also come from a JSON file given with ``--config``; explicit flags
win over file values. Exit status: 0 success, 2 configuration or input error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import bounds, measures, oracle
from .basel import capital_charge, ingest_history
from .dist import Distribution, StandardNormal, StudentT
from .errors import (
    DomainError,
    ModelRiskError,
    MomentError,
    ParseError,
    PreconditionError,
    RadiusTooLarge,
    ValidationError,
)
from .riskmeasure import Measure, RiskMeasureSpec

COMMANDS = ("curves", "moment-class", "local", "mixture-sweep", "oracle-check", "basel")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    alpha_min: float = 0.001
    alpha_max: float = 0.10
    alpha_steps: int = 400
    alpha: list | None = None
    reference: list = field(default_factory=lambda: ["normal", "student-t"])
    nu: float = 3.0
    measure: list = field(default_factory=lambda: ["var", "es"])
    kind: list = field(default_factory=lambda: [k.value for k in bounds.BoundKind])
    family: list = field(default_factory=lambda: ["kolmogorov", "levy", "mixture"])
    eps: list = field(default_factory=lambda: [1e-2, 1e-3, 1e-4])
    grid: int = 100_000
    history: str | None = None
    lam: float = 3.0
    output: str | None = None
    paper_literal: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        if self.alpha_steps < 2:
            raise ConfigError("alpha_steps must be at least 2")
        if not 0 < self.alpha_min < self.alpha_max:
            raise ConfigError("need 0 < alpha_min < alpha_max")

    @property
    def alpha_upper(self) -> float:
        return 1.0 if self.command == "oracle-check" else 0.5

    def alpha_grid(self) -> list[float]:
        if self.alpha is not None:
            grid = sorted(float(a) for a in self.alpha)
        else:
            grid = [float(a) for a in np.linspace(self.alpha_min, self.alpha_max, self.alpha_steps)]
        if not grid or not all(0 < a < self.alpha_upper for a in grid):
            raise ConfigError(f"alpha values must lie in (0, {self.alpha_upper})")
        return grid


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    return f"{x + 0.0:.9g}"  # + 0.0 turns -0.0 into 0.0


def _reference(name: str, nu: float) -> tuple[str, Distribution]:
    name = name.strip().lower()
    if name == "normal":
        return "normal", StandardNormal()
    if name in ("student-t", "t"):
        return f"t{nu:g}", StudentT(nu, standardized=True)
    if name.startswith("t"):
        try:
            v = float(name[1:])
        except ValueError:
            raise ConfigError(f"unknown reference {name!r}") from None
        return f"t{v:g}", StudentT(v, standardized=True)
    raise ConfigError(f"unknown reference {name!r}")


def _threads() -> int:
    raw = os.environ.get("MODELRISK_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ConfigError(f"MODELRISK_THREADS must be a positive integer, got {raw!r}")
    return n


def _rows(fn, alphas):
    # map keeps input order whatever the completion order
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        return list(pool.map(fn, alphas))


def _curves(cfg: RunConfig):
    kinds = [bounds.BoundKind(k) for k in cfg.kind]
    header = ["alpha"]
    for k in kinds:
        col = k.value.replace("-", "_")
        if cfg.paper_literal and k is bounds.BoundKind.CANTELLI_ES:
            col += "_literal"
        header.append(col)

    def row(a):
        return [a] + [bounds.multiplier_ratio(k, a, cfg.paper_literal) for k in kinds]

    return header, _rows(row, cfg.alpha_grid())


def _moment_class(cfg: RunConfig):
    refs = [_reference(r, cfg.nu) for r in cfg.reference]
    ms = [Measure(m) for m in cfg.measure]
    header = ["alpha"]
    for m in ms:
        header += [f"rho_sup_{m.value}", f"rho_inf_{m.value}"]
        for tag, _ in refs:
            header += [f"rho0_{m.value}_{tag}", f"am_{m.value}_{tag}", f"rm_{m.value}_{tag}"]

    def row(a):
        out = [a]
        for m in ms:
            fn = measures.moment_class_var_report if m is Measure.VAR else measures.moment_class_es_report
            reps = [fn(d, a) for _, d in refs]
            lo, hi = measures.extremes(measures.Moments(), RiskMeasureSpec(m, a))
            out += [hi, lo]
            for r in reps:
                out += [r.rho0, r.AM, r.RM]
        return out

    return header, _rows(row, cfg.alpha_grid())


def _local(cfg: RunConfig):
    refs = [_reference(r, cfg.nu) for r in cfg.reference]
    fams = [measures.FamilyKind(f) for f in cfg.family]
    header = ["alpha"] + [f"lm_{f.value}_{tag}" for f in fams for tag, _ in refs]

    def row(a):
        return [a] + [measures.local_measure(f, d, a) for f in fams for _, d in refs]

    return header, _rows(row, cfg.alpha_grid())


def _mixture_sweep(cfg: RunConfig):
    refs = [_reference(r, cfg.nu) for r in cfg.reference]
    fams = [measures.FamilyKind(f) for f in cfg.family]
    eps = sorted((float(e) for e in cfg.eps), reverse=True)
    header = ["alpha"]
    for f in fams:
        for tag, _ in refs:
            header.append(f"lm_{f.value}_{tag}")
            header += [f"rm_{f.value}_{tag}_eps{e:g}" for e in eps]

    def row(a):
        out = [a]
        for f in fams:
            for _, d in refs:
                out.append(measures.local_measure(f, d, a))
                for e in eps:
                    try:
                        out.append(measures.finite_radius_rm(f, d, a, e))
                    except RadiusTooLarge:
                        out.append(math.nan)
        return out

    return header, _rows(row, cfg.alpha_grid())


def _oracle_check(cfg: RunConfig):
    header = ["alpha", "closed_inf_q", "oracle_inf_q", "gap_inf_q",
              "closed_sup_q", "oracle_sup_q", "gap_sup_q",
              "closed_sup_es", "oracle_sup_es", "oracle_inf_es"]
    c = oracle.SearchConstraints(p_grid=cfg.grid)

    def row(a):
        ci, cs = -math.sqrt((1 - a) / a), math.sqrt(a / (1 - a))
        oi, os_ = oracle.search_extremal_var(a, c)
        ei, es = oracle.search_extremal_es(a, c)
        return [a, ci, oi, oi - ci, cs, os_, cs - os_, math.sqrt((1 - a) / a), es, ei]

    return header, _rows(row, cfg.alpha_grid())


def _basel(cfg: RunConfig):
    if not cfg.history:
        raise ConfigError("basel needs --history")
    try:
        b = ingest_history(cfg.history, cfg.lam)
    except OSError as exc:
        raise ConfigError(f"cannot read history: {exc}") from None
    avg = math.fsum(b.history) / len(b.history)
    return ["var0", "average_var", "lambda", "capital_charge"], [[b.var0, avg, b.lam, capital_charge(b)]]


_HANDLERS = {
    "curves": _curves,
    "moment-class": _moment_class,
    "local": _local,
    "mixture-sweep": _mixture_sweep,
    "oracle-check": _oracle_check,
    "basel": _basel,
}


def render(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join(_fmt(x) for x in r) + "\n")
    return buf.getvalue()


def write_atomic(path, text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def run(cfg: RunConfig) -> str:
    """Compute the table for ``cfg`` and write it; returns the CSV text."""
    header, rows = _HANDLERS[cfg.command](cfg)
    text = render(header, rows)
    if cfg.output and cfg.output != "-":
        write_atomic(cfg.output, text)
    else:
        sys.stdout.write(text)
    return text


def _csv_list(cast):
    def parse(s):
        try:
            return [cast(x) for x in s.split(",") if x.strip()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return parse


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    p = argparse.ArgumentParser(prog="modelrisk", description=__doc__.split("\n\n")[0],
                                argument_default=S)
    # validated by RunConfig so that a command may also come from --config
    p.add_argument("command", nargs="?", default=None, help=", ".join(COMMANDS))
    p.add_argument("--config", help="JSON file with option values")
    p.add_argument("--alpha", type=_csv_list(float), help="explicit comma-separated levels")
    p.add_argument("--alpha-min", type=float)
    p.add_argument("--alpha-max", type=float)
    p.add_argument("--alpha-steps", type=int)
    p.add_argument("--ref", dest="reference", type=_csv_list(str),
                   help="normal, student-t (with --nu) or tNU, comma-separated")
    p.add_argument("--nu", type=float)
    p.add_argument("--measure", type=_csv_list(str), help="var, es")
    p.add_argument("--kind", type=_csv_list(str), help="bound kinds for curves")
    p.add_argument("--family", type=_csv_list(str), help="kolmogorov, levy, mixture")
    p.add_argument("--eps", type=_csv_list(float), help="radii for mixture-sweep")
    p.add_argument("--grid", type=int, help="mass grid size for oracle-check")
    p.add_argument("--history", help="day,var CSV for basel")
    p.add_argument("--lambda", dest="lam", type=float, help="Basel multiplier in [3, 4]")
    p.add_argument("-o", "--output", help="output CSV path (default: stdout)")
    p.add_argument("--paper-literal", action="store_true",
                   help="use the printed Cantelli ES formula (diagnostic)")
    return p


def config_from_args(argv=None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    values = {}
    if "config" in ns:
        try:
            values.update(json.loads(Path(ns.pop("config")).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"bad config file: {exc}") from None
    aliases = {"ref": "reference", "lambda": "lam"}
    values = {aliases.get(k, k).replace("-", "_"): v for k, v in values.items()}
    values.update({k: v for k, v in ns.items() if v is not None})
    known = {f.name for f in fields(RunConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "command" not in values:
        raise ConfigError("no command given")
    for key in ("reference", "measure", "kind", "family", "eps", "alpha"):
        if key in values and not isinstance(values[key], list):
            values[key] = [values[key]]
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def main(argv=None) -> int:
    try:
        try:
            cfg = config_from_args(argv)
        except SystemExit as exc:  # argparse usage errors and --help
            return int(exc.code or 0)
        run(cfg)
    except (ConfigError, ParseError, ValidationError, DomainError, MomentError, PreconditionError) as exc:
        # bad flags, bad input files, or parameters outside a documented domain
        print(f"modelrisk: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ModelRiskError, ArithmeticError) as exc:
        print(f"modelrisk: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # unknown enum names (bound kind, measure, family)
        print(f"modelrisk: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
