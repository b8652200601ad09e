"""Scenario runner: ``gridfuzz run`` and friends."""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Literal, Sequence

from . import __version__, kernels
from .fuzzy_core import DEFAULT_RESOLUTION, DivMode, FuzzyError
from .indices import (
    AGGREGATION_NOTE,
    INDEX_NAMES,
    DefuzzMode,
    ImprovementReport,
    SystemIndices,
    UnknownBenchmark,
    improvement_report,
    system_indices,
)
from .inference import ComponentAssessor, RuleError, default_rulebases, format_rules, parse_rule_file
from .linguistic import (
    CatalogError,
    DomainWarning,
    LinguisticVariable,
    build_paper_catalog,
    catalog_by_name,
    load_catalog,
    save_catalog,
)
from .network import LineRateMode, Network, NetworkError, component_assessor, load_network, loadpoint_reliability

log = logging.getLogger("gridfuzz")

SCENARIO_COLUMNS = ("case", "line_age_yr", "line_exposure", "wind_kmh",
                    "xfmr_age_yr", "xfmr_moisture", "xfmr_checks_per_yr")
BUNDLED_SCENARIOS = "table1_scenarios.csv"


class ScenarioSyntaxError(ValueError):
    def __init__(self, msg: str, row: int):
        self.row = row
        super().__init__(f"row {row}: {msg}")


@dataclass(frozen=True)
class Scenario:
    """One what-if case; exposure and moisture are fractions of 1."""

    case: str
    line_inputs: tuple[float, float, float]
    xfmr_inputs: tuple[float, float, float]
    note: str = ""

    @property
    def line_attrs(self) -> tuple[float, float, float]:
        age, exposure, wind = self.line_inputs
        return (age, exposure * 100.0, wind)

    @property
    def xfmr_attrs(self) -> tuple[float, float, float]:
        age, moisture, checks = self.xfmr_inputs
        return (age, moisture * 100.0, checks)


def _clamped(value: float, lo: float, hi: float, what: str, row: int) -> float:
    if value < lo or value > hi:
        c = min(max(value, lo), hi)
        warnings.warn(f"row {row}: {what}={value} outside [{lo}, {hi}]; clamped to {c}",
                      DomainWarning, stacklevel=3)
        return c
    return value


def parse_scenarios(path: str | Path | None = None,
                    catalog: Sequence[LinguisticVariable] | None = None) -> list[Scenario]:
    """Read the scenario CSV; ``None`` loads the nine bundled cases."""
    if path is None:
        text = resources.files("gridfuzz").joinpath("data", BUNDLED_SCENARIOS).read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    cat = catalog_by_name(build_paper_catalog() if catalog is None else list(catalog))
    bounds = {
        "line_age_yr": cat["line_age"].domain,
        "line_exposure": (0.0, 1.0),
        "wind_kmh": cat["weather"].domain,
        "xfmr_age_yr": cat["xfmr_age"].domain,
        "xfmr_moisture": (0.0, 1.0),
        "xfmr_checks_per_yr": cat["xfmr_maintenance"].domain,
    }
    reader = csv.reader(io.StringIO(text), skipinitialspace=True)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ScenarioSyntaxError("empty scenario file", 1) from None
    if tuple(header[:7]) != SCENARIO_COLUMNS or len(header) > 8 or (len(header) == 8 and header[7] != "note"):
        raise ScenarioSyntaxError(f"expected header {','.join(SCENARIO_COLUMNS)}[,note]", 1)
    out, seen = [], set()
    for rowno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) not in (7, len(header)):
            raise ScenarioSyntaxError(f"expected {len(header)} fields, got {len(row)}", rowno)
        case = row[0].strip()
        if not case or case in seen:
            raise ScenarioSyntaxError(f"missing or duplicate case id {case!r}", rowno)
        seen.add(case)
        vals = []
        for name, cell in zip(SCENARIO_COLUMNS[1:], row[1:7]):
            try:
                v = float(cell)
            except ValueError:
                raise ScenarioSyntaxError(f"{name}: not a number: {cell!r}", rowno) from None
            vals.append(_clamped(v, *bounds[name], name, rowno))
        note = row[7].strip() if len(row) > 7 else ""
        out.append(Scenario(case, tuple(vals[:3]), tuple(vals[3:]), note))
    if not out:
        raise ScenarioSyntaxError("no scenario rows", 2)
    return out


@dataclass(frozen=True)
class RunConfig:
    out_dir: Path
    benchmark: str
    network: Path | None = None
    scenarios: Path | None = None
    rules: Path | None = None
    catalog: Path | None = None
    arith: DivMode = "paper"
    defuzz: DefuzzMode = "defuzz_late"
    fmt: Literal["csv", "json"] = "csv"
    resolution: int = DEFAULT_RESOLUTION
    line_rate: LineRateMode = "per-section"
    workers: int = 1


@dataclass(frozen=True)
class _CaseContext:
    network: Network
    assessor: ComponentAssessor
    defuzz: DefuzzMode
    arith: DivMode
    resolution: int
    line_rate: LineRateMode


def evaluate_case(ctx: _CaseContext, sc: Scenario) -> SystemIndices:
    assess = component_assessor(ctx.assessor, sc.line_attrs, sc.xfmr_attrs, ctx.line_rate)
    rel = {lp.id: loadpoint_reliability(ctx.network, lp, assess) for lp in ctx.network.load_points}
    return system_indices(ctx.network, rel, ctx.defuzz, ctx.arith, ctx.resolution)


def _evaluate(args):
    return evaluate_case(*args)


def evaluate_cases(ctx: _CaseContext, scenarios: Sequence[Scenario], workers: int = 1) -> list[SystemIndices]:
    if workers <= 1 or len(scenarios) <= 1:
        return [evaluate_case(ctx, sc) for sc in scenarios]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_evaluate, [(ctx, sc) for sc in scenarios]))


# -- report rendering ---------------------------------------------------------

def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def render_indices(cases: Sequence[tuple[str, SystemIndices]], fmt: str) -> str:
    if fmt == "csv":
        return _csv([("case", *INDEX_NAMES)] + [(cid, *si.row()) for cid, si in cases])
    return _json({"cases": [{"case": cid, **si.to_dict()} for cid, si in cases]})


def render_improvement(report: ImprovementReport, fmt: str) -> str:
    if fmt == "csv":
        header = ("case", *(f"{n}_pct" for n in INDEX_NAMES))
        return _csv([header] + [(cid, *(row[n] for n in INDEX_NAMES)) for cid, row in report.rows])
    return _json(report.to_dict())


def read_indices_json(text: str) -> list[tuple[str, SystemIndices]]:
    doc = json.loads(text)
    return [(c["case"], SystemIndices.from_dict(c)) for c in doc["cases"]]


def _provenance(path: Path | None, default: str) -> dict:
    if path is None:
        return {"source": default}
    return {"source": str(path), "sha256": hashlib.sha256(Path(path).read_bytes()).hexdigest()}


def run(config: RunConfig) -> int:
    """Evaluate every scenario and write the reports; returns an exit status."""
    try:
        catalog = build_paper_catalog() if config.catalog is None else load_catalog(config.catalog)
        rulebases = default_rulebases(catalog) if config.rules is None else parse_rule_file(config.rules, catalog)
        net = load_network(config.network)
        scenarios = parse_scenarios(config.scenarios, catalog)
        if config.benchmark not in {s.case for s in scenarios}:
            raise UnknownBenchmark(f"benchmark {config.benchmark!r} is not a scenario case")
        if config.resolution < 2:
            raise ValueError("resolution must be at least 2")
        assessor = ComponentAssessor(catalog, rulebases, config.resolution)
        ctx = _CaseContext(net, assessor, config.defuzz, config.arith, config.resolution, config.line_rate)
        results = evaluate_cases(ctx, scenarios, config.workers)
        cases = [(s.case, r) for s, r in zip(scenarios, results)]
        report = improvement_report(cases, config.benchmark)
    except (OSError, ValueError, KeyError, NetworkError, RuleError, CatalogError,
            ScenarioSyntaxError, FuzzyError) as exc:
        print(f"gridfuzz: error: {exc}", file=sys.stderr)
        return 2

    ext = config.fmt
    meta = {
        "version": __version__,
        "kernel_backend": kernels.BACKEND,
        "arith": config.arith,
        "defuzz": config.defuzz,
        "resolution": config.resolution,
        "line_rate": config.line_rate,
        "benchmark": config.benchmark,
        "format": ext,
        "cases": [s.case for s in scenarios],
        "network": _provenance(config.network, "bundled:rbts_bus2.json"),
        "scenarios": _provenance(config.scenarios, f"bundled:{BUNDLED_SCENARIOS}"),
        "catalog": _provenance(config.catalog, "built-in breakpoint catalog"),
        "rules": _provenance(config.rules, "generated severity-sum rule bases"),
        "notes": [AGGREGATION_NOTE, "improvement_pct = (benchmark - case) / benchmark * 100"],
    }
    outputs = {
        f"indices.{ext}": render_indices(cases, ext),
        f"improvement.{ext}": render_improvement(report, ext),
        "run_meta.json": _json(meta),
    }
    try:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        tmp = {}
        for name, text in outputs.items():
            p = out / f".{name}.tmp"
            p.write_text(text, encoding="utf-8")
            tmp[p] = out / name
        for src, dst in tmp.items():
            os.replace(src, dst)
    except OSError as exc:
        print(f"gridfuzz: error: cannot write outputs: {exc}", file=sys.stderr)
        return 2
    log.info("wrote %d cases to %s", len(cases), config.out_dir)
    return 0


# -- argument parsing ---------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gridfuzz", description="Fuzzy reliability assessment of radial networks")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="evaluate every scenario and write index reports")
    r.add_argument("--network", type=Path, help="network JSON (default: bundled RBTS Bus 2)")
    r.add_argument("--scenarios", type=Path, help="scenario CSV (default: bundled nine-case set)")
    r.add_argument("--rules", type=Path, help="rule file replacing the generated rule bases")
    r.add_argument("--catalog", type=Path, help="catalog JSON replacing the built-in variables")
    r.add_argument("--benchmark", required=True, help="case id used as the improvement baseline")
    r.add_argument("--arith", choices=("paper", "interval-safe"), default="paper")
    r.add_argument("--defuzz", choices=("early", "late"), default="late")
    r.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    r.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION)
    r.add_argument("--line-rate", choices=("per-section", "per-km"), default="per-section")
    r.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    r.add_argument("--out", type=Path, required=True)

    c = sub.add_parser("catalog", help="write the built-in catalog as JSON")
    c.add_argument("--out", type=Path, required=True)

    g = sub.add_parser("rules", help="write the generated default rule bases as a rule file")
    g.add_argument("--catalog", type=Path)
    g.add_argument("--out", type=Path, required=True)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    logging.captureWarnings(True)
    if args.command == "run":
        cfg = RunConfig(
            out_dir=args.out, benchmark=args.benchmark, network=args.network,
            scenarios=args.scenarios, rules=args.rules, catalog=args.catalog,
            arith="interval_safe" if args.arith == "interval-safe" else "paper",
            defuzz=f"defuzz_{args.defuzz}", fmt=args.fmt, resolution=args.resolution,
            line_rate=args.line_rate, workers=args.workers,
        )
        return run(cfg)
    if args.command == "catalog":
        save_catalog(build_paper_catalog(), args.out)
        return 0
    catalog = build_paper_catalog() if args.catalog is None else load_catalog(args.catalog)
    args.out.write_text(format_rules(default_rulebases(catalog).values()), encoding="utf-8")
    return 0


if __name__ == "__main__":
    sys.exit(main())
