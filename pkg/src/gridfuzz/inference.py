"""Mamdani rule bases: generation, parsing, evaluation and component assessment.

Conjunction and implication are ``min``, aggregation is ``max``. The
aggregated output is sampled on the output variable's domain and handed
to :func:`to_bounding_trapezoid` so it can enter fuzzy arithmetic.
"""
from __future__ import annotations

import itertools
import math
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

from . import kernels
from .fuzzy_core import (
    DEFAULT_RESOLUTION,
    FuzzyTrapezoid,
    SampledFuzzySet,
    defuzz_mom,
    to_bounding_trapezoid,
)
from .linguistic import (
    FuzzifiedInput,
    LinguisticVariable,
    build_paper_catalog,
    catalog_by_name,
    fuzzify,
)

ComponentKind = Literal["line", "transformer"]

LINE_INPUTS = ("line_age", "line_exposure", "weather")
XFMR_INPUTS = ("xfmr_age", "xfmr_moisture", "xfmr_maintenance")
LINE_OUTPUTS = ("line_failure_rate", "line_repair_time")
XFMR_OUTPUTS = ("xfmr_failure_rate",)

_AGE = {"young": 0, "middle-aged": 1, "old": 2}
_EXPOSURE = {"low": 0, "average": 1, "high": 2}

DEFAULT_SEVERITY: dict[str, dict[str, int]] = {
    "line_age": _AGE,
    "xfmr_age": _AGE,
    "line_exposure": _EXPOSURE,
    "xfmr_moisture": _EXPOSURE,
    "weather": {"normal": 0, "adverse": 1},
    "xfmr_maintenance": {"suitable": 0, "unsuitable": 1},
}


class RuleError(ValueError):
    pass


class RuleSyntaxError(RuleError):
    def __init__(self, msg: str, lineno: int):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}")


class UnknownTerm(RuleError):
    pass


class MissingInput(RuleError):
    pass


class UnorderedOutput(RuleError):
    pass


class IncompleteBase(UserWarning):
    """Some combination of input terms fires no rule."""


@dataclass(frozen=True)
class Rule:
    antecedents: tuple[tuple[str, str], ...]
    consequent: tuple[str, str]
    weight: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.weight <= 1.0:
            raise RuleError(f"rule weight must be in (0, 1], got {self.weight}")

    @property
    def conditions(self) -> dict[str, str]:
        return dict(self.antecedents)

    def __str__(self) -> str:
        ante = " AND ".join(f"{v} IS {t}" for v, t in self.antecedents)
        text = f"IF {ante} THEN {self.consequent[0]} IS {self.consequent[1]}"
        if self.weight != 1.0:
            text += f" WEIGHT {self.weight!r}"
        return text


@dataclass(frozen=True)
class RuleBase:
    output: LinguisticVariable
    rules: tuple[Rule, ...]
    severity: Mapping[str, Mapping[str, int]] | None = field(default=None, compare=False)

    @property
    def target(self) -> str:
        return self.output.name

    @property
    def input_names(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for r in self.rules:
            for v, _ in r.antecedents:
                seen.setdefault(v)
        return tuple(seen)

    def __len__(self) -> int:
        return len(self.rules)


# -- generation ---------------------------------------------------------------

def _check_ladder(output: LinguisticVariable) -> None:
    shapes = [t.shape for t in output.terms]
    for lo, hi in zip(shapes, shapes[1:]):
        if not (lo.a1 <= hi.a1 and lo.a4 <= hi.a4 and lo.a2 + lo.a3 < hi.a2 + hi.a3):
            raise UnorderedOutput(f"{output.name}: terms are not an ordered ladder")


def consequent_index(ordinals: Sequence[tuple[int, int]], n_terms: int) -> int:
    """Ladder position for a combination of (ordinal, max ordinal) pairs.

    Exact rational arithmetic; halves round toward the more severe term.
    """
    sigma = sum(Fraction(o, m) for o, m in ordinals) / len(ordinals)
    return math.floor(sigma * (n_terms - 1) + Fraction(1, 2))


def generate_default_rules(inputs: Sequence[LinguisticVariable], output: LinguisticVariable,
                           severity: Mapping[str, Mapping[str, int]] | None = None) -> RuleBase:
    """Full cartesian rule base driven by a normalized severity score."""
    _check_ladder(output)
    severity = DEFAULT_SEVERITY if severity is None else severity
    for v in inputs:
        if v.name not in severity or set(severity[v.name]) != set(v.labels):
            raise UnknownTerm(f"no severity ordinals for every term of {v.name}")
    labels = output.labels
    rules = []
    for combo in itertools.product(*(v.labels for v in inputs)):
        ords = [(severity[v.name][lab], max(severity[v.name].values()))
                for v, lab in zip(inputs, combo)]
        idx = consequent_index(ords, len(labels))
        rules.append(Rule(tuple((v.name, lab) for v, lab in zip(inputs, combo)),
                          (output.name, labels[idx])))
    used = {v.name: dict(severity[v.name]) for v in inputs}
    return RuleBase(output, tuple(rules), used)


def default_rulebases(catalog: Sequence[LinguisticVariable] | None = None) -> dict[str, RuleBase]:
    cat = catalog_by_name(build_paper_catalog() if catalog is None else list(catalog))
    line_in = [cat[n] for n in LINE_INPUTS]
    xfmr_in = [cat[n] for n in XFMR_INPUTS]
    return {
        "line_failure_rate": generate_default_rules(line_in, cat["line_failure_rate"]),
        "line_repair_time": generate_default_rules(line_in, cat["line_repair_time"]),
        "xfmr_failure_rate": generate_default_rules(xfmr_in, cat["xfmr_failure_rate"]),
    }


# -- rule files ---------------------------------------------------------------

_KEYWORDS = re.compile(r"\s+(AND|THEN|WEIGHT)\s+", re.IGNORECASE)
_CLAUSE = re.compile(r"(\S+)\s+IS\s+(.+)", re.IGNORECASE)


def _resolve(cat: Mapping[str, LinguisticVariable], var: str, term: str, lineno: int) -> tuple[str, str]:
    if var not in cat:
        raise UnknownTerm(f"line {lineno}: unknown variable {var!r}")
    labels = cat[var].labels
    for candidate in (term, term.replace(" ", "-")):
        if candidate in labels:
            return var, candidate
    raise UnknownTerm(f"line {lineno}: {var} has no term {term!r} (known: {', '.join(labels)})")


def parse_rule_line(line: str, cat: Mapping[str, LinguisticVariable], lineno: int = 1) -> Rule:
    text = line.strip()
    if not re.match(r"IF\s", text, re.IGNORECASE):
        raise RuleSyntaxError("rule must start with IF", lineno)
    parts = _KEYWORDS.split(text[2:].strip())
    clauses, keywords = parts[0::2], [k.upper() for k in parts[1::2]]
    if keywords.count("THEN") != 1:
        raise RuleSyntaxError("rule needs exactly one THEN", lineno)
    then_at = keywords.index("THEN")
    if any(k != "AND" for k in keywords[:then_at]):
        raise RuleSyntaxError("antecedents must be joined by AND", lineno)
    tail = keywords[then_at + 1:]
    if tail not in ([], ["WEIGHT"]):
        raise RuleSyntaxError("only WEIGHT may follow the consequent", lineno)

    def clause(s: str) -> tuple[str, str]:
        m = _CLAUSE.fullmatch(s.strip())
        if m is None:
            raise RuleSyntaxError(f"expected '<var> IS <term>', got {s!r}", lineno)
        return _resolve(cat, m.group(1), m.group(2).strip(), lineno)

    antecedents = tuple(clause(c) for c in clauses[:then_at + 1])
    consequent = clause(clauses[then_at + 1])
    for var, _ in antecedents:
        if cat[var].kind != "input":
            raise RuleSyntaxError(f"{var} is not an input variable", lineno)
    if cat[consequent[0]].kind != "output":
        raise RuleSyntaxError(f"{consequent[0]} is not an output variable", lineno)
    if len({v for v, _ in antecedents}) != len(antecedents):
        raise RuleSyntaxError("a variable appears twice in the antecedent", lineno)
    weight = 1.0
    if tail:
        try:
            weight = float(clauses[-1])
        except ValueError:
            raise RuleSyntaxError(f"bad weight {clauses[-1]!r}", lineno) from None
        if not 0.0 < weight <= 1.0:
            raise RuleSyntaxError(f"weight {weight} outside (0, 1]", lineno)
    return Rule(antecedents, consequent, weight)


def uncovered_combinations(rb: RuleBase, cat: Mapping[str, LinguisticVariable]) -> list[dict[str, str]]:
    """Input-term combinations (over the variables the base mentions) that fire no rule."""
    names = rb.input_names
    missing = []
    for combo in itertools.product(*(cat[n].labels for n in names)):
        point = dict(zip(names, combo))
        if not any(all(point[v] == t for v, t in r.antecedents) for r in rb.rules):
            missing.append(point)
    return missing


def parse_rules(text: str, catalog: Sequence[LinguisticVariable] | None = None,
                source: str = "<rules>") -> dict[str, RuleBase]:
    """Parse rule text into one RuleBase per output variable."""
    cat = catalog_by_name(build_paper_catalog() if catalog is None else list(catalog))
    grouped: dict[str, list[Rule]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        rule = parse_rule_line(line, cat, lineno)
        grouped.setdefault(rule.consequent[0], []).append(rule)
    if not grouped:
        warnings.warn(f"{source}: no rules defined", IncompleteBase, stacklevel=2)
        return {}
    bases = {}
    for target, rules in grouped.items():
        rb = RuleBase(cat[target], tuple(rules))
        gaps = uncovered_combinations(rb, cat)
        if gaps:
            warnings.warn(f"{source}: {target} base leaves {len(gaps)} input combination(s) "
                          f"without a rule, e.g. {gaps[0]}", IncompleteBase, stacklevel=2)
        bases[target] = rb
    return bases


def parse_rule_file(path: str | Path, catalog: Sequence[LinguisticVariable] | None = None) -> dict[str, RuleBase]:
    p = Path(path)
    return parse_rules(p.read_text(encoding="utf-8"), catalog, source=str(p))


def format_rules(bases: Iterable[RuleBase]) -> str:
    lines = []
    for rb in bases:
        lines.append(f"# {rb.target}: {len(rb)} rules")
        lines.extend(str(r) for r in rb.rules)
    return "\n".join(lines) + "\n"


# -- evaluation ---------------------------------------------------------------

def firing_strengths(rb: RuleBase, inputs: Mapping[str, FuzzifiedInput]) -> np.ndarray:
    out = np.empty(len(rb.rules), dtype=np.float64)
    for i, rule in enumerate(rb.rules):
        strength = 1.0
        for var, term in rule.antecedents:
            try:
                grade = inputs[var].grades[term]
            except KeyError:
                raise MissingInput(f"no fuzzified input for {var}.{term}") from None
            strength = min(strength, grade)
        out[i] = strength * rule.weight
    return out


def infer(rb: RuleBase, inputs: Iterable[FuzzifiedInput] | Mapping[str, FuzzifiedInput],
          resolution: int = DEFAULT_RESOLUTION) -> SampledFuzzySet:
    """Clip each consequent at its firing strength and take the pointwise max."""
    if not isinstance(inputs, Mapping):
        inputs = {fi.variable: fi for fi in inputs}
    lo, hi = rb.output.domain
    if not lo < hi:
        raise RuleError(f"{rb.target} has a degenerate domain; nothing to sample")
    strengths = firing_strengths(rb, inputs)
    shapes = np.array([rb.output.term(r.consequent[1]).shape.as_tuple() for r in rb.rules],
                      dtype=np.float64).reshape(-1, 4)
    grades = kernels.aggregate_clipped(shapes, strengths, lo, hi, resolution)
    return SampledFuzzySet(lo, hi, grades)


@dataclass(frozen=True)
class Assessment:
    failure_rate: FuzzyTrapezoid
    repair_time: FuzzyTrapezoid
    failure_rate_set: SampledFuzzySet
    repair_time_set: SampledFuzzySet | None

    @property
    def failure_rate_value(self) -> float:
        return defuzz_mom(self.failure_rate_set)


class ComponentAssessor:
    """Fuzzify -> infer -> bound, for lines and transformers.

    Results are memoized per (kind, attrs); instances are otherwise
    stateless and safe to share.
    """

    def __init__(self, catalog: Sequence[LinguisticVariable] | None = None,
                 rulebases: Mapping[str, RuleBase] | None = None,
                 resolution: int = DEFAULT_RESOLUTION):
        self.catalog = build_paper_catalog() if catalog is None else list(catalog)
        self.variables = catalog_by_name(self.catalog)
        self.rulebases = dict(default_rulebases(self.catalog) if rulebases is None else rulebases)
        self.resolution = resolution
        self._cache: dict[tuple, Assessment] = {}

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_cache"] = {}
        return state

    def _fuzzify(self, names: Sequence[str], attrs: Sequence[float]) -> dict[str, FuzzifiedInput]:
        if len(attrs) != len(names):
            raise MissingInput(f"expected {len(names)} attributes {names}, got {len(attrs)}")
        return {n: fuzzify(self.variables[n], float(x)) for n, x in zip(names, attrs)}

    def _base(self, name: str) -> RuleBase:
        try:
            return self.rulebases[name]
        except KeyError:
            raise MissingInput(f"no rule base for {name}") from None

    def detailed(self, kind: ComponentKind, attrs: Sequence[float]) -> Assessment:
        key = (kind, tuple(float(a) for a in attrs))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if kind == "line":
            fin = self._fuzzify(LINE_INPUTS, attrs)
            lam_set = infer(self._base("line_failure_rate"), fin, self.resolution)
            rep_set = infer(self._base("line_repair_time"), fin, self.resolution)
            result = Assessment(to_bounding_trapezoid(lam_set), to_bounding_trapezoid(rep_set),
                                lam_set, rep_set)
        elif kind == "transformer":
            fin = self._fuzzify(XFMR_INPUTS, attrs)
            lam_set = infer(self._base("xfmr_failure_rate"), fin, self.resolution)
            if "xfmr_repair_time" in self.rulebases:
                rep_set = infer(self.rulebases["xfmr_repair_time"], fin, self.resolution)
                repair = to_bounding_trapezoid(rep_set)
            else:
                rep_var = self.variables["xfmr_repair_time"]
                if len(rep_var.terms) != 1:
                    raise MissingInput("xfmr_repair_time has several terms but no rule base")
                rep_set, repair = None, rep_var.terms[0].shape
            result = Assessment(to_bounding_trapezoid(lam_set), repair, lam_set, rep_set)
        else:
            raise ValueError(f"cannot assess component kind {kind!r}")
        self._cache[key] = result
        return result

    def __call__(self, kind: ComponentKind, attrs: Sequence[float]) -> tuple[FuzzyTrapezoid, FuzzyTrapezoid]:
        a = self.detailed(kind, attrs)
        return a.failure_rate, a.repair_time


_default_assessor: ComponentAssessor | None = None


def assess_component(kind: ComponentKind, attrs: Sequence[float]) -> tuple[FuzzyTrapezoid, FuzzyTrapezoid]:
    """Assess with the built-in catalog and generated rule bases.

    Line attrs are (age yr, exposure %, wind km/h); transformer attrs are
    (age yr, moisture %, checks per year).
    """
    global _default_assessor
    if _default_assessor is None:
        _default_assessor = ComponentAssessor()
    return _default_assessor(kind, attrs)
