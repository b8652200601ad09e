"""Fuzzy-logic reliability assessment for radial distribution networks."""

__version__ = "0.1.0"

from .fuzzy_core import (  # noqa: E402
    FuzzyTrapezoid,
    SampledFuzzySet,
    defuzz_mom,
    fuzz_add,
    fuzz_div,
    fuzz_mul,
    fuzz_sub,
    membership_at,
    to_bounding_trapezoid,
)
from .indices import SystemIndices, improvement_report, system_indices  # noqa: E402
from .inference import assess_component, generate_default_rules, infer, parse_rule_file  # noqa: E402
from .linguistic import build_paper_catalog, fuzzify  # noqa: E402
from .network import load_network, loadpoint_reliability  # noqa: E402
