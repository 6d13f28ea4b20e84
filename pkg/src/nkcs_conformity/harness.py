"""Experiment harness: scenario matrices, result files and the command line.

A config document is YAML (JSON works too).  Every key is optional::

    P: 5
    N: 4
    memory_span: 50
    periods: 500
    runs: 1000
    seed: 0
    topologies: [star, ring, cycle, line]
    regimes: [[3, 0, 0], [2, 2, 2]]     # (K, C, S)
    weights: [[0.5, 0.5]]               # (alpha, beta)
    rhos: [0.9]

The cross product of the four lists gives one scenario each.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import itertools
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .engine import ExperimentResult, ScenarioConfig, run_experiment
from .exceptions import ConfigurationError
from .network import TOPOLOGIES

log = logging.getLogger(__name__)

CSV_COLUMNS = ("period", "mean_performance", "se_performance", "mean_synchrony", "se_synchrony")

_SCALARS = {
    "P": int, "N": int, "memory_span": int, "periods": int, "runs": int, "seed": int,
    "homologous_patterns": bool, "warmup_conformity": bool, "max_enumeration_bits": int,
}


@dataclass(frozen=True)
class ScenarioMatrix:
    topologies: tuple[str, ...] = TOPOLOGIES
    regimes: tuple[tuple[int, int, int], ...] = ((3, 0, 0),)
    weights: tuple[tuple[float, float], ...] = ((0.5, 0.5),)
    rhos: tuple[float, ...] = (0.9,)
    P: int = 5
    N: int = 4
    memory_span: int = 50
    periods: int = 500
    runs: int = 1000
    seed: int = 0
    homologous_patterns: bool = True
    warmup_conformity: bool = True
    max_enumeration_bits: int = 24

    def expand(self) -> list[ScenarioConfig]:
        shared = {k: getattr(self, k) for k in _SCALARS}
        return [
            ScenarioConfig(K=K, C=C, S=S, alpha=a, beta=b, rho=rho, topology=top, **shared)
            for (K, C, S), (a, b), rho, top in itertools.product(
                self.regimes, self.weights, self.rhos, self.topologies)
        ]

    def to_document(self) -> dict:
        doc = dataclasses.asdict(self)
        for key in ("topologies", "regimes", "weights", "rhos"):
            doc[key] = json.loads(json.dumps(doc[key]))
        return doc


def scenario_name(cfg: ScenarioConfig) -> str:
    return (f"{cfg.topology}_kcs{cfg.K}{cfg.C}{cfg.S}"
            f"_w{cfg.alpha:g}-{cfg.beta:g}_rho{cfg.rho:g}")


def _bad(field, message):
    return ConfigurationError(message, field)


def _number_list(value, field, length=None, kind=float):
    if not isinstance(value, (list, tuple)):
        raise _bad(field, f"expected a list, got {value!r}")
    out = []
    for v in value:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise _bad(field, f"expected numbers, got {v!r}")
        if kind is int and v != int(v):
            raise _bad(field, f"expected integers, got {v!r}")
        out.append(kind(v))
    if length is not None and len(out) != length:
        raise _bad(field, f"expected {length} entries, got {len(out)}")
    return tuple(out)


def parse_config(text: str) -> ScenarioMatrix:
    """Parse and validate a config document; omitted keys take the defaults.

    A results manifest is also accepted and yields the matrix it recorded.
    """
    try:
        doc = yaml.safe_load(text) if text and text.strip() else {}
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"malformed document: {exc}") from None
    doc = doc or {}
    if not isinstance(doc, dict):
        raise ConfigurationError("top level must be a mapping")
    if "tool_version" in doc and isinstance(doc.get("config"), dict):
        doc = doc["config"]

    fields = {}
    for key, value in doc.items():
        if key in _SCALARS:
            kind = _SCALARS[key]
            if kind is bool:
                if not isinstance(value, bool):
                    raise _bad(key, f"expected true/false, got {value!r}")
            elif isinstance(value, bool) or not isinstance(value, int):
                raise _bad(key, f"expected an integer, got {value!r}")
            fields[key] = value
        elif key in ("topologies", "topology"):
            values = [value] if isinstance(value, str) else value
            if not isinstance(values, list) or not values:
                raise _bad(key, "expected a non-empty list of topology names")
            for v in values:
                if v not in TOPOLOGIES:
                    raise _bad(key, f"unknown topology {v!r}; expected one of {TOPOLOGIES}")
            fields["topologies"] = tuple(values)
        elif key == "regimes":
            fields["regimes"] = tuple(_number_list(r, key, 3, int) for r in value)
        elif key == "weights":
            fields["weights"] = tuple(_number_list(w, key, 2) for w in value)
        elif key in ("rhos", "rho"):
            values = [value] if isinstance(value, (int, float)) else value
            fields["rhos"] = _number_list(values, key)
        else:
            raise _bad(key, "unknown key")

    for key in ("regimes", "weights", "rhos"):
        if key in fields and not fields[key]:
            raise _bad(key, "must not be empty")
    matrix = ScenarioMatrix(**fields)
    for w in matrix.weights:
        if min(w) < 0 or abs(sum(w) - 1.0) > 1e-12:
            raise _bad("weights", f"weights must sum to 1 and be non-negative, got {list(w)}")
    matrix.expand()  # validates every combination
    return matrix


def _fmt(v: float) -> str:
    return format(float(v), ".10g")


def write_csv(result: ExperimentResult, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for t in range(result.mean_performance.size):
            w.writerow([t + 1] + [_fmt(a[t]) for a in (
                result.mean_performance, result.se_performance,
                result.mean_synchrony, result.se_synchrony)])


def emit_results(results: list[ExperimentResult], path, matrix: ScenarioMatrix | None = None,
                 wall_time: float | None = None) -> Path:
    """Write one CSV per scenario plus ``manifest.json`` into directory ``path``."""
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    scenarios = []
    for res in results:
        name = scenario_name(res.config)
        target = out / f"{name}.csv"
        try:
            write_csv(res, target)
        except OSError as exc:
            raise OSError(f"cannot write {target}: {exc}") from exc
        scenarios.append({
            "name": name,
            "file": target.name,
            "config": dataclasses.asdict(res.config),
            "run_seeds": [int(s) for s in res.run_seeds],
            "terminal_performance_cv": res.terminal_performance_cv,
        })
    manifest = {
        "tool": "nkcs_conformity",
        "tool_version": __version__,
        "numpy_version": np.__version__,
        "config": matrix.to_document() if matrix is not None else None,
        "wall_time_s": wall_time,
        "scenarios": scenarios,
    }
    target = out / "manifest.json"
    try:
        target.write_text(json.dumps(manifest, indent=2) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {target}: {exc}") from exc
    return target


# figure id -> (regime, weights, series)
FIGURES = {
    "fig4_synchrony_full_conformity": ((3, 0, 0), (0.0, 1.0), "mean_synchrony"),
    "fig5a_synchrony_internal": ((3, 0, 0), (0.5, 0.5), "mean_synchrony"),
    "fig5b_synchrony_external": ((2, 2, 2), (0.5, 0.5), "mean_synchrony"),
    "fig6a_performance_internal": ((3, 0, 0), (0.5, 0.5), "mean_performance"),
    "fig6b_performance_external": ((2, 2, 2), (0.5, 0.5), "mean_performance"),
    "baseline_synchrony_internal": ((3, 0, 0), (1.0, 0.0), "mean_synchrony"),
    "baseline_synchrony_external": ((2, 2, 2), (1.0, 0.0), "mean_synchrony"),
}


def figure_matrix(matrix: ScenarioMatrix) -> ScenarioMatrix:
    """The matrix's shared parameters with the figures' regimes and weights."""
    return dataclasses.replace(
        matrix, regimes=((3, 0, 0), (2, 2, 2)),
        weights=((0.0, 1.0), (0.5, 0.5), (1.0, 0.0)), rhos=(matrix.rhos[0],))


def reproduce_figures(matrix: ScenarioMatrix, path, workers: int | None = None,
                      results: list[ExperimentResult] | None = None) -> dict[str, Path]:
    """Run the figure scenarios and write one CSV per figure, one column per topology."""
    fm = figure_matrix(matrix)
    if results is None:
        start = time.perf_counter()
        results = [run_experiment(cfg, workers) for cfg in fm.expand()]
        emit_results(results, path, fm, time.perf_counter() - start)
    by_key = {(r.config.regime, (r.config.alpha, r.config.beta), r.config.topology): r
              for r in results}
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    written = {}
    for fig, (regime, weights, series) in FIGURES.items():
        columns = [getattr(by_key[regime, weights, top], series) for top in fm.topologies]
        target = out / f"{fig}.csv"
        with open(target, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("period",) + tuple(fm.topologies))
            for t in range(fm.periods):
                w.writerow([t + 1] + [_fmt(c[t]) for c in columns])
        written[fig] = target
    return written


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nkcs-conformity",
        description="Simulate conformity-driven diffusion of decisions in a multi-unit "
                    "organization on correlated NKCS landscapes.")
    ap.add_argument("--config", type=Path, help="YAML/JSON scenario matrix (default: built-ins)")
    ap.add_argument("--output", type=Path, default=Path("results"), help="output directory")
    ap.add_argument("--seed", type=int, help="override the master seed")
    ap.add_argument("--workers", type=int, default=None,
                    help="worker processes (default: all cores)")
    ap.add_argument("--scenario", help="run only the scenario with this name")
    ap.add_argument("--reproduce-figures", action="store_true",
                    help="run the figure scenarios and write per-figure CSVs")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        text = args.config.read_text() if args.config else ""
        matrix = parse_config(text)
        if args.seed is not None:
            matrix = dataclasses.replace(matrix, seed=args.seed)
    except (OSError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.reproduce_figures:
        written = reproduce_figures(matrix, args.output, args.workers)
        for fig, target in written.items():
            print(f"{fig}: {target}")
        return 0

    configs = matrix.expand()
    if args.scenario:
        configs = [c for c in configs if scenario_name(c) == args.scenario]
        if not configs:
            print(f"error: no scenario named {args.scenario!r}", file=sys.stderr)
            return 2

    start = time.perf_counter()
    results, failed = [], 0
    for cfg in configs:
        log.info("running %s (%d runs)", scenario_name(cfg), cfg.runs)
        try:
            results.append(run_experiment(cfg, args.workers))
        except Exception as exc:  # keep going; report through the exit code
            failed += 1
            print(f"error: {scenario_name(cfg)}: {exc}", file=sys.stderr)
    manifest = emit_results(results, args.output, matrix, time.perf_counter() - start)
    print(manifest)
    return 1 if failed else 0
