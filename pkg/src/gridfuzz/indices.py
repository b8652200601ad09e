"""System indices (SAIFI, SAIDI, ENS) and improvement-versus-benchmark reports."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Literal, Mapping, Sequence

from .fuzzy_core import (
    DEFAULT_RESOLUTION,
    DivMode,
    FuzzyTrapezoid,
    defuzz_trapezoid,
    fuzz_div,
    fuzz_sum,
    fuzz_mul,
)
from .network import LoadPointReliability, Network

DefuzzMode = Literal["defuzz_early", "defuzz_late"]

INDEX_NAMES = ("lambda", "U", "SAIFI", "SAIDI", "ENS")

AGGREGATION_NOTE = ("lambda and U are plain sums of the load-point values over all load points")


class UnknownBenchmark(KeyError):
    pass


@dataclass(frozen=True)
class LoadPointIndices:
    id: str
    failure_rate: float
    unavailability: float
    ens: float


@dataclass(frozen=True)
class SystemIndices:
    lambda_total: float
    U_total: float
    SAIFI: float
    SAIDI: float
    ENS: float
    per_load_point: tuple[LoadPointIndices, ...] = ()
    mode: str = "defuzz_late"

    def value(self, index: str) -> float:
        return {"lambda": self.lambda_total, "U": self.U_total, "SAIFI": self.SAIFI,
                "SAIDI": self.SAIDI, "ENS": self.ENS}[index]

    def row(self) -> tuple[float, ...]:
        return tuple(self.value(n) for n in INDEX_NAMES)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["per_load_point"] = [asdict(lp) for lp in self.per_load_point]
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> SystemIndices:
        lps = tuple(LoadPointIndices(**lp) for lp in d.get("per_load_point", ()))
        return cls(d["lambda_total"], d["U_total"], d["SAIFI"], d["SAIDI"], d["ENS"], lps,
                   d.get("mode", "defuzz_late"))


def _crisp(x: float) -> FuzzyTrapezoid:
    return FuzzyTrapezoid.crisp(float(x))


def system_indices(net: Network, reliabilities: Mapping[str, LoadPointReliability],
                   mode: DefuzzMode = "defuzz_late", div_mode: DivMode = "paper",
                   resolution: int = DEFAULT_RESOLUTION) -> SystemIndices:
    """Customer-weighted indices over every load point of ``net``.

    ``defuzz_early`` defuzzifies each load point and then applies crisp
    arithmetic; ``defuzz_late`` carries fuzzy numbers through the weighted
    sums and defuzzifies each index once.
    """
    missing = [lp.id for lp in net.load_points if lp.id not in reliabilities]
    if missing:
        raise KeyError(f"no reliability for load points {missing}")

    def mom(t: FuzzyTrapezoid) -> float:
        return defuzz_trapezoid(t, resolution)

    lps = net.load_points
    n_total = sum(lp.customers for lp in lps)
    breakdown = []
    for lp in lps:
        r = reliabilities[lp.id]
        lam, unav = mom(r.failure_rate), mom(r.unavailability)
        if mode == "defuzz_early":
            ens_i = lp.peak_load_kw * lp.load_factor * unav
        else:
            ens_i = mom(fuzz_mul(r.unavailability, _crisp(lp.peak_load_kw * lp.load_factor)))
        breakdown.append(LoadPointIndices(lp.id, lam, unav, ens_i))

    if mode == "defuzz_early":
        lam_total = sum(b.failure_rate for b in breakdown)
        u_total = sum(b.unavailability for b in breakdown)
        saifi = sum(b.failure_rate * lp.customers for b, lp in zip(breakdown, lps)) / n_total
        saidi = sum(b.unavailability * lp.customers for b, lp in zip(breakdown, lps)) / n_total
        ens = sum(b.ens for b in breakdown)
    elif mode == "defuzz_late":
        rel = [reliabilities[lp.id] for lp in lps]
        n_sum = _crisp(n_total)
        lam_total = mom(fuzz_sum(r.failure_rate for r in rel))
        u_total = mom(fuzz_sum(r.unavailability for r in rel))
        saifi_num = fuzz_sum(fuzz_mul(r.failure_rate, _crisp(lp.customers)) for r, lp in zip(rel, lps))
        saidi_num = fuzz_sum(fuzz_mul(r.unavailability, _crisp(lp.customers)) for r, lp in zip(rel, lps))
        saifi = mom(fuzz_div(saifi_num, n_sum, div_mode))
        saidi = mom(fuzz_div(saidi_num, n_sum, div_mode))
        ens = mom(fuzz_sum(fuzz_mul(r.unavailability, _crisp(lp.peak_load_kw * lp.load_factor))
                           for r, lp in zip(rel, lps)))
    else:
        raise ValueError(f"unknown defuzzification mode {mode!r}")
    return SystemIndices(lam_total, u_total, saifi, saidi, ens, tuple(breakdown), mode)


@dataclass(frozen=True)
class ImprovementReport:
    benchmark: str
    rows: tuple[tuple[str, dict[str, float]], ...] = field(default=())

    def for_case(self, case: str) -> dict[str, float]:
        for cid, row in self.rows:
            if cid == case:
                return row
        raise KeyError(case)

    def to_dict(self) -> dict:
        return {"benchmark": self.benchmark,
                "cases": [{"case": cid, **{f"{k}_pct": v for k, v in row.items()}} for cid, row in self.rows]}


def percent_improvement(benchmark: float, case: float) -> float:
    if benchmark == 0.0:
        return 0.0 if case == 0.0 else float("nan")
    return (benchmark - case) / benchmark * 100.0


def improvement_report(cases: Sequence[tuple[str, SystemIndices]], benchmark: str) -> ImprovementReport:
    """Percentage improvement of every case over the benchmark, per index."""
    ref = dict(cases).get(benchmark)
    if ref is None:
        raise UnknownBenchmark(f"benchmark case {benchmark!r} not among {[c for c, _ in cases]}")
    rows = tuple((cid, {n: percent_improvement(ref.value(n), si.value(n)) for n in INDEX_NAMES})
                 for cid, si in cases)
    return ImprovementReport(benchmark, rows)
