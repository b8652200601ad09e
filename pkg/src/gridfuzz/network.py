"""Radial network model, JSON ingestion and load-point series aggregation."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Literal, Mapping, Sequence

import networkx as nx

from .fuzzy_core import FuzzyTrapezoid, fuzz_add, fuzz_mul, fuzz_scale

ComponentType = Literal["line", "transformer", "breaker", "fuse"]
LineRateMode = Literal["per-section", "per-km"]

BUNDLED_NETWORK = "rbts_bus2.json"


class NetworkError(ValueError):
    pass


class NetworkParseError(NetworkError):
    pass


class NonRadialTopology(NetworkError):
    pass


class DanglingReference(NetworkError):
    pass


@dataclass(frozen=True)
class Component:
    id: str
    kind: ComponentType
    length_km: float = 0.0
    attributes: tuple[float, ...] | None = None
    failure_rate: FuzzyTrapezoid | None = None
    repair_time: FuzzyTrapezoid | None = None
    feeder: str | None = None
    ends: tuple[str, str] | None = None

    @property
    def has_override(self) -> bool:
        return self.failure_rate is not None and self.repair_time is not None


@dataclass(frozen=True)
class LoadPoint:
    id: str
    customers: int
    peak_load_kw: float
    load_factor: float
    path: tuple[str, ...]

    @property
    def average_load_kw(self) -> float:
        return self.peak_load_kw * self.load_factor


@dataclass(frozen=True)
class Bus:
    name: str
    voltage_kv: float


@dataclass(frozen=True)
class Feeder:
    name: str
    bus: str
    sections: tuple[str, ...]


@dataclass(frozen=True)
class Network:
    name: str
    buses: tuple[Bus, ...]
    feeders: tuple[Feeder, ...]
    components: Mapping[str, Component]
    load_points: tuple[LoadPoint, ...]
    notes: tuple[str, ...] = field(default=(), compare=False)

    def count(self, kind: ComponentType) -> int:
        return sum(1 for c in self.components.values() if c.kind == kind)

    def load_point(self, lp_id: str) -> LoadPoint:
        for lp in self.load_points:
            if lp.id == lp_id:
                return lp
        raise KeyError(lp_id)

    @property
    def total_customers(self) -> int:
        return sum(lp.customers for lp in self.load_points)


@dataclass(frozen=True)
class LoadPointReliability:
    failure_rate: FuzzyTrapezoid
    unavailability: FuzzyTrapezoid


# -- parsing ------------------------------------------------------------------

def _trap(value, where: str) -> FuzzyTrapezoid | None:
    if value is None:
        return None
    try:
        if isinstance(value, (int, float)):
            return FuzzyTrapezoid.crisp(float(value))
        return FuzzyTrapezoid.of([float(v) for v in value])
    except (TypeError, ValueError) as exc:
        raise NetworkParseError(f"{where}: bad fuzzy value {value!r}: {exc}") from None


def _component(doc: Mapping, kind: ComponentType, feeder: str | None = None) -> Component:
    try:
        cid = str(doc["id"])
    except KeyError:
        raise NetworkParseError(f"{kind} entry without id: {doc!r}") from None
    attrs = doc.get("attributes")
    if attrs is not None:
        attrs = tuple(float(a) for a in attrs)
        if len(attrs) != 3:
            raise NetworkParseError(f"{cid}: attributes must hold 3 numbers")
    ends = None
    if "from" in doc or "to" in doc:
        if "from" not in doc or "to" not in doc:
            raise NetworkParseError(f"{cid}: give both 'from' and 'to'")
        ends = (str(doc["from"]), str(doc["to"]))
    length = float(doc.get("length_km", 0.0))
    if length < 0:
        raise NetworkParseError(f"{cid}: negative length")
    comp = Component(cid, kind, length, attrs, _trap(doc.get("failure_rate"), cid),
                     _trap(doc.get("repair_time"), cid), feeder, ends)
    if kind in ("breaker", "fuse") and not comp.has_override:
        raise NetworkParseError(f"{cid}: {kind} needs crisp failure_rate and repair_time")
    if kind in ("breaker", "fuse") and not (comp.failure_rate.is_crisp and comp.repair_time.is_crisp):
        raise NetworkParseError(f"{cid}: {kind} rates must be crisp")
    return comp


def network_from_dict(doc: Mapping) -> Network:
    try:
        buses = tuple(Bus(str(b["name"]), float(b["voltage_kv"])) for b in doc["buses"])
        components: dict[str, Component] = {}
        feeders = []

        def add(c: Component):
            if c.id in components:
                raise NetworkParseError(f"duplicate component id {c.id!r}")
            components[c.id] = c

        for f in doc["feeders"]:
            name = str(f["name"])
            secs = [_component(s, "line", name) for s in f["sections"]]
            for s in secs:
                add(s)
            feeders.append(Feeder(name, str(f.get("bus", buses[-1].name if buses else "")),
                                  tuple(s.id for s in secs)))
        for t in doc.get("transformers", []):
            add(_component(t, "transformer"))
        for d in doc.get("devices", []):
            add(_component(d, str(d.get("kind", "breaker"))))
        lps = []
        for lp in doc["load_points"]:
            lps.append(LoadPoint(str(lp["id"]), int(lp["customers"]), float(lp["peak_load_kw"]),
                                 float(lp["load_factor"]), tuple(str(p) for p in lp["path"])))
    except NetworkError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise NetworkParseError(f"malformed network document: {exc!r}") from None
    net = Network(str(doc.get("name", "network")), buses, tuple(feeders), components,
                  tuple(lps), tuple(doc.get("notes", ())))
    validate(net)
    return net


def _section_graph(net: Network) -> nx.MultiGraph:
    g = nx.MultiGraph()
    for f in net.feeders:
        prev = f.bus
        for sid in f.sections:
            c = net.components[sid]
            a, b = c.ends if c.ends is not None else (prev, f"{f.name}:{sid}")
            g.add_edge(a, b, key=sid)
            prev = b
    for b in net.buses:
        g.add_node(b.name)
    return g


def validate(net: Network) -> None:
    """Check ids, load-point data, radiality and source-to-load-point paths."""
    bus_names = {b.name for b in net.buses}
    for f in net.feeders:
        if f.bus not in bus_names:
            raise DanglingReference(f"feeder {f.name} fed from unknown bus {f.bus!r}")
    seen = set()
    for lp in net.load_points:
        if lp.id in seen:
            raise NetworkParseError(f"duplicate load point {lp.id!r}")
        seen.add(lp.id)
        if lp.customers <= 0 or lp.peak_load_kw <= 0 or not 0 < lp.load_factor <= 1:
            raise NetworkParseError(f"{lp.id}: customers, peak load and load factor must be positive"
                                    " (load factor at most 1)")
        if not lp.path:
            raise NetworkParseError(f"{lp.id}: empty path")
        for cid in lp.path:
            if cid not in net.components:
                raise DanglingReference(f"{lp.id} references unknown component {cid!r}")
        if len(set(lp.path)) != len(lp.path):
            raise NonRadialTopology(f"{lp.id}: path visits a component twice")

    g = _section_graph(net)
    if not nx.is_forest(g):
        cycle = nx.cycle_basis(nx.Graph(g))
        raise NonRadialTopology(f"section graph contains a loop {cycle[0] if cycle else ''}".strip())
    for comp in nx.connected_components(g):
        if len(comp & bus_names) > 1:
            raise NonRadialTopology(f"buses {sorted(comp & bus_names)} are tied together by sections")

    edge_ends = {k: (u, v) for u, v, k in g.edges(keys=True)}
    feeder_bus = {sid: f.bus for f in net.feeders for sid in f.sections}
    for lp in net.load_points:
        lines = [cid for cid in lp.path if net.components[cid].kind == "line"]
        if not lines:
            continue
        at = feeder_bus[lines[0]]
        for sid in lines:
            u, v = edge_ends[sid]
            if at == u:
                at = v
            elif at == v:
                at = u
            else:
                raise NetworkParseError(f"{lp.id}: section {sid} does not continue the path from the source")


def load_network(path: str | Path | None = None) -> Network:
    """Read a network document; ``None`` loads the bundled RBTS Bus 2 dataset."""
    if path is None:
        text = resources.files("gridfuzz").joinpath("data", BUNDLED_NETWORK).read_text(encoding="utf-8")
        where = BUNDLED_NETWORK
    else:
        text = Path(path).read_text(encoding="utf-8")
        where = str(path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkParseError(f"{where}: {exc}") from None
    return network_from_dict(doc)


# -- reliability --------------------------------------------------------------

Assess = Callable[[Component], tuple[FuzzyTrapezoid, FuzzyTrapezoid]]


def component_assessor(assessor, line_attrs: Sequence[float] | None = None,
                        xfmr_attrs: Sequence[float] | None = None,
                        line_rate: LineRateMode = "per-section") -> Assess:
    """Bind scenario attributes to an assessor, yielding a per-component function.

    Overrides on the component win, then the component's own attributes,
    then the scenario attributes for its kind.
    """
    def assess(c: Component) -> tuple[FuzzyTrapezoid, FuzzyTrapezoid]:
        if c.has_override:
            return c.failure_rate, c.repair_time
        if c.kind in ("breaker", "fuse"):
            raise NetworkError(f"{c.id}: {c.kind} has no rate override")
        attrs = c.attributes or (line_attrs if c.kind == "line" else xfmr_attrs)
        if attrs is None:
            raise NetworkError(f"{c.id}: no attributes for {c.kind}")
        lam, rep = assessor(c.kind, attrs)
        if c.kind == "line" and line_rate == "per-km":
            lam = fuzz_scale(lam, c.length_km)
        return (c.failure_rate or lam), (c.repair_time or rep)

    return assess


def loadpoint_reliability(net: Network, lp: LoadPoint, assess: Assess) -> LoadPointReliability:
    """Series aggregation along the path: lambda = sum lambda_i, U = sum lambda_i * r_i."""
    lam = FuzzyTrapezoid.crisp(0.0)
    unav = FuzzyTrapezoid.crisp(0.0)
    for cid in lp.path:
        lam_i, r_i = assess(net.components[cid])
        lam = fuzz_add(lam, lam_i)
        unav = fuzz_add(unav, fuzz_mul(lam_i, r_i))
    return LoadPointReliability(lam, unav)
