"""Linguistic variables for lines and transformers, and fuzzification of crisp inputs."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Mapping

from .fuzzy_core import FuzzyTrapezoid, membership_at

Kind = Literal["input", "output"]

XFMR_REPAIR_HOURS = 200.0


class DomainWarning(UserWarning):
    """A crisp input was outside its variable's domain and got clamped."""


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class LinguisticTerm:
    label: str
    shape: FuzzyTrapezoid


@dataclass(frozen=True)
class LinguisticVariable:
    name: str
    unit: str
    domain: tuple[float, float]
    terms: tuple[LinguisticTerm, ...]
    kind: Kind = "input"

    def __post_init__(self):
        lo, hi = self.domain
        if not lo <= hi:
            raise CatalogError(f"{self.name}: bad domain {self.domain}")
        for t in self.terms:
            if t.shape.a1 < lo or t.shape.a4 > hi:
                raise CatalogError(f"{self.name}.{t.label}: support {t.shape} leaves domain {self.domain}")
        labels = [t.label for t in self.terms]
        if len(set(labels)) != len(labels):
            raise CatalogError(f"{self.name}: duplicate term labels")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(t.label for t in self.terms)

    def term(self, label: str) -> LinguisticTerm:
        for t in self.terms:
            if t.label == label:
                return t
        raise KeyError(f"{self.name} has no term {label!r}")

    @property
    def is_crisp(self) -> bool:
        return len(self.terms) == 1 and self.terms[0].shape.is_crisp


@dataclass(frozen=True)
class FuzzifiedInput:
    variable: str
    grades: Mapping[str, float]


def breakpoint_terms(supports: list[tuple[str, float, float]]) -> tuple[LinguisticTerm, ...]:
    """Build trapezoids from support ranges alone.

    Terms are ordered by support start. Each term's left peak is the
    previous term's support end and its right peak the next term's support
    start; outer terms get shoulders.
    """
    ordered = sorted(supports, key=lambda s: s[1])
    terms = []
    for i, (label, start, end) in enumerate(ordered):
        left_peak = ordered[i - 1][2] if i > 0 else start
        right_peak = ordered[i + 1][1] if i + 1 < len(ordered) else end
        terms.append(LinguisticTerm(label, FuzzyTrapezoid(start, left_peak, right_peak, end)))
    return tuple(terms)


def _var(name, unit, domain, supports, kind="input") -> LinguisticVariable:
    return LinguisticVariable(name, unit, domain, breakpoint_terms(supports), kind)


def build_paper_catalog() -> list[LinguisticVariable]:
    """The ten line/transformer variables with shapes from the breakpoint rule."""
    three_level = [("low", 0.0, 40.0), ("average", 20.0, 80.0), ("high", 60.0, 100.0)]
    return [
        _var("line_age", "years", (0.0, 30.0),
             [("young", 0.0, 8.0), ("middle-aged", 4.0, 22.0), ("old", 18.0, 30.0)]),
        _var("line_exposure", "%", (0.0, 100.0), three_level),
        _var("weather", "km/h", (0.0, 100.0),
             [("normal", 0.0, 80.0), ("adverse", 30.0, 100.0)]),
        _var("line_failure_rate", "failures/yr", (0.8, 3.0),
             [("very-low", 0.8, 1.2), ("low", 1.1, 1.5), ("average", 1.4, 2.0),
              ("high", 1.9, 2.5), ("very-high", 2.4, 3.0)], "output"),
        _var("line_repair_time", "h", (4.0, 20.0),
             [("good", 4.0, 6.0), ("suitable", 5.0, 9.0), ("bad", 7.0, 15.0),
              ("very-bad", 12.0, 20.0)], "output"),
        _var("xfmr_age", "years", (0.0, 35.0),
             [("young", 0.0, 10.0), ("middle-aged", 5.0, 25.0), ("old", 20.0, 35.0)]),
        _var("xfmr_moisture", "%", (0.0, 100.0), three_level),
        _var("xfmr_maintenance", "checks/yr", (0.0, 10.0),
             [("unsuitable", 0.0, 7.0), ("suitable", 3.0, 10.0)]),
        _var("xfmr_failure_rate", "failures/yr", (0.8, 2.5),
             [("very-low", 0.8, 1.2), ("low", 1.1, 1.5), ("average", 1.3, 1.7),
              ("high", 1.6, 2.2), ("very-high", 1.9, 2.5)], "output"),
        LinguisticVariable(
            "xfmr_repair_time", "h", (XFMR_REPAIR_HOURS, XFMR_REPAIR_HOURS),
            (LinguisticTerm("constant", FuzzyTrapezoid.crisp(XFMR_REPAIR_HOURS)),), "output"),
    ]


def catalog_by_name(catalog: list[LinguisticVariable]) -> dict[str, LinguisticVariable]:
    return {v.name: v for v in catalog}


def clamp(v: LinguisticVariable, x: float) -> float:
    lo, hi = v.domain
    if x < lo or x > hi:
        clamped = min(max(x, lo), hi)
        warnings.warn(f"{v.name}={x} outside {v.domain}; clamped to {clamped}",
                      DomainWarning, stacklevel=3)
        return clamped
    return x


def fuzzify(v: LinguisticVariable, x: float) -> FuzzifiedInput:
    if v.is_crisp:
        return FuzzifiedInput(v.name, {v.terms[0].label: 1.0})
    x = clamp(v, x)
    return FuzzifiedInput(v.name, {t.label: membership_at(t.shape, x) for t in v.terms})


# -- JSON import/export ------------------------------------------------------

def catalog_to_dict(catalog: list[LinguisticVariable]) -> dict:
    return {
        "variables": [
            {
                "name": v.name,
                "unit": v.unit,
                "kind": v.kind,
                "domain": list(v.domain),
                "terms": [{"label": t.label, "shape": list(t.shape)} for t in v.terms],
            }
            for v in catalog
        ]
    }


def catalog_from_dict(doc: dict) -> list[LinguisticVariable]:
    try:
        out = []
        for v in doc["variables"]:
            terms = tuple(LinguisticTerm(t["label"], FuzzyTrapezoid.of(t["shape"])) for t in v["terms"])
            out.append(LinguisticVariable(v["name"], v.get("unit", ""), tuple(v["domain"]),
                                          terms, v.get("kind", "input")))
    except (KeyError, TypeError, ValueError) as exc:
        raise CatalogError(f"malformed catalog document: {exc}") from exc
    return out


def save_catalog(catalog: list[LinguisticVariable], path: str | Path) -> None:
    Path(path).write_text(json.dumps(catalog_to_dict(catalog), indent=2) + "\n", encoding="utf-8")


def load_catalog(path: str | Path) -> list[LinguisticVariable]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CatalogError(f"{path}: {exc}") from exc
    return catalog_from_dict(doc)
