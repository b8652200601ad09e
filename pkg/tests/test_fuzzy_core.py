import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gridfuzz.fuzzy_core import (
    DivisorNotPositive,
    EmptySet,
    FuzzyTrapezoid,
    InvalidTrapezoid,
    NegativeOperand,
    NonMonotoneResult,
    SampledFuzzySet,
    defuzz_mom,
    defuzz_trapezoid,
    fuzz_add,
    fuzz_div,
    fuzz_mul,
    fuzz_mul_traced,
    fuzz_sub,
    membership_at,
    to_bounding_trapezoid,
)

T = FuzzyTrapezoid


def approx_quad(t, quad, abs=1e-12):
    return all(math.isclose(a, b, abs_tol=abs) for a, b in zip(t, quad))


# -- independent oracles --------------------------------------------------------

def interval_mul(x, y):
    p = [x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1]]
    return min(p), max(p)


def interval_div(x, y):
    q = [x[0] / y[0], x[0] / y[1], x[1] / y[0], x[1] / y[1]]
    return min(q), max(q)


def alpha_cut_mul(a, b):
    lo0, hi0 = interval_mul((a.a1, a.a4), (b.a1, b.a4))
    lo1, hi1 = interval_mul((a.a2, a.a3), (b.a2, b.a3))
    return (lo0, lo1, hi1, hi0)


def alpha_cut_div(a, b):
    lo0, hi0 = interval_div((a.a1, a.a4), (b.a1, b.a4))
    lo1, hi1 = interval_div((a.a2, a.a3), (b.a2, b.a3))
    return (lo0, lo1, hi1, hi0)


def scalar_grades(t_list, levels, lo, hi, n):
    xs = [lo + i * (hi - lo) / (n - 1) for i in range(n)]
    return xs, [max(min(membership_at(t, x), w) for t, w in zip(t_list, levels)) for x in xs]


# -- construction -----------------------------------------------------------------

def test_construction_rejects_non_monotone():
    with pytest.raises(InvalidTrapezoid):
        T(1, 3, 2, 4)
    with pytest.raises(InvalidTrapezoid):
        T(0, 1, float("nan"), 2)


def test_special_forms():
    assert T(1, 2, 2, 3).is_triangular
    assert T.crisp(200).is_crisp and T.crisp(200).as_tuple() == (200.0,) * 4


# -- membership -------------------------------------------------------------------

@pytest.mark.parametrize("x,expected", [(2.5, 1.0), (1.5, 0.5), (3.5, 0.5), (5.0, 0.0)])
def test_membership_examples(x, expected):
    assert membership_at(T(1, 2, 3, 4), x) == expected


def test_membership_degenerate_ramps_use_plateau():
    assert membership_at(T(0, 0, 4, 8), 0.0) == 1.0
    assert membership_at(T(18, 22, 30, 30), 30.0) == 1.0
    assert membership_at(T.crisp(5), 5.0) == 1.0
    assert membership_at(T.crisp(5), 5.0 + 1e-12) == 0.0


trapezoids = (
    st.lists(st.floats(0, 100, allow_nan=False, allow_infinity=False), min_size=4, max_size=4)
    .map(sorted)
    .map(lambda q: T(*q))
)
strict = trapezoids.filter(lambda t: t.a1 < t.a2 and t.a3 < t.a4)


@given(strict)
def test_membership_anchor_points(t):
    assert membership_at(t, t.a2) == 1.0
    assert membership_at(t, t.a3) == 1.0
    assert membership_at(t, t.a1) == 0.0
    assert membership_at(t, t.a4) == 0.0


@given(strict, st.floats(0, 1))
def test_membership_continuity(t, u):
    x = t.a1 + u * (t.a4 - t.a1)
    h = 1e-9 * max(1.0, t.a4 - t.a1)
    slope = max(1 / (t.a2 - t.a1), 1 / (t.a4 - t.a3))
    assume(slope * h < 1e-3)
    assert abs(membership_at(t, x + h) - membership_at(t, x)) <= slope * h * 1.01 + 1e-12


# -- addition / subtraction -----------------------------------------------------------

def test_add_examples():
    assert fuzz_add(T(1, 2, 3, 4), T(2, 2, 2, 2)).as_tuple() == (3, 4, 5, 6)
    assert fuzz_add(T(0, 0, 0, 0), T(1, 2, 3, 4)).as_tuple() == (1, 2, 3, 4)
    s = fuzz_add(T(0.8, 0.8, 1.1, 1.2), T(1.1, 1.2, 1.4, 1.5))
    assert approx_quad(s, (1.9, 2.0, 2.5, 2.7))


def test_sub_examples():
    assert fuzz_sub(T(5, 6, 7, 8), T(1, 2, 3, 4)).as_tuple() == (4, 4, 4, 4)
    assert fuzz_sub(T(1, 2, 3, 4), T(0, 0, 0, 0)).as_tuple() == (1, 2, 3, 4)
    with pytest.raises(NonMonotoneResult) as err:
        fuzz_sub(T(1, 2, 3, 4), T(0, 2, 2, 2))
    assert err.value.quad == (1, 0, 1, 2)


def test_sub_example_from_brief_is_not_a_valid_operand():
    # (0,2,2,0) cannot even be constructed; the failure mode needs a valid subtrahend
    with pytest.raises(InvalidTrapezoid):
        T(0, 2, 2, 0)


@given(trapezoids, trapezoids)
def test_add_closure_and_alpha_cuts(a, b):
    s = fuzz_add(a, b)
    assert s.as_tuple() == (a.a1 + b.a1, a.a2 + b.a2, a.a3 + b.a3, a.a4 + b.a4)


# -- multiplication ---------------------------------------------------------------------

def test_mul_trace_example():
    e, tr = fuzz_mul_traced(T(1, 2, 3, 4), T(2, 3, 4, 5))
    assert e.as_tuple() == (2, 6, 12, 20)
    assert tr.t1 == (2, 3, 4, 6) and tr.t2 == (12, 15, 16, 20)
    assert (tr.k, tr.l) == (0, 3)  # first and fourth elements
    assert e.as_tuple() == alpha_cut_mul(T(1, 2, 3, 4), T(2, 3, 4, 5))


def test_mul_identity_and_annihilator():
    assert fuzz_mul(T(1, 2, 3, 4), T(1, 1, 1, 1)).as_tuple() == (1, 2, 3, 4)
    assert fuzz_mul(T(0, 0, 0, 0), T(1, 2, 3, 4)).as_tuple() == (0, 0, 0, 0)


def test_mul_tie_breaking():
    _, tr = fuzz_mul_traced(T(0, 0, 1, 2), T(1, 1, 2, 3))
    assert tr.t1 == (0, 0, 0, 0)
    assert (tr.k, tr.l) == (0, 3)


def test_mul_rejects_negative():
    with pytest.raises(NegativeOperand):
        fuzz_mul(T(-1, 0, 1, 2), T(1, 2, 3, 4))


@given(trapezoids, trapezoids)
def test_mul_matches_alpha_cut_oracle(a, b):
    assert fuzz_mul(a, b).as_tuple() == alpha_cut_mul(a, b)


# -- division ---------------------------------------------------------------------------

@pytest.mark.parametrize("mode", ["paper", "interval_safe"])
def test_div_identity(mode):
    assert fuzz_div(T(1, 2, 3, 4), T(1, 1, 1, 1), mode).as_tuple() == (1, 2, 3, 4)


def test_div_paper_mode_failure():
    with pytest.raises(NonMonotoneResult) as err:
        fuzz_div(T(2, 4, 6, 8), T(2, 2, 4, 4), "paper")
    assert err.value.quad == (1.0, 2.0, 1.5, 2.0)


def test_div_interval_safe_example():
    q = fuzz_div(T(2, 4, 6, 8), T(2, 2, 4, 4), "interval_safe")
    assert q.as_tuple() == (0.5, 1.0, 3.0, 4.0)
    assert q.as_tuple() == alpha_cut_div(T(2, 4, 6, 8), T(2, 2, 4, 4))


def test_div_errors():
    with pytest.raises(DivisorNotPositive):
        fuzz_div(T(1, 2, 3, 4), T(0, 1, 1, 1))
    with pytest.raises(NegativeOperand):
        fuzz_div(T(-1, 2, 3, 4), T(1, 1, 1, 1))
    with pytest.raises(ValueError):
        fuzz_div(T(1, 2, 3, 4), T(1, 1, 1, 1), "bogus")


positive = st.lists(st.floats(0.01, 100), min_size=4, max_size=4).map(sorted).map(lambda q: T(*q))


@given(trapezoids, positive)
def test_interval_safe_div_matches_oracle(a, b):
    assert fuzz_div(a, b, "interval_safe").as_tuple() == alpha_cut_div(a, b)


@given(st.floats(0, 1e3), st.floats(1e-3, 1e3))
def test_crisp_degeneration(x, y):
    a, b = T.crisp(x), T.crisp(y)
    assert fuzz_add(a, b).as_tuple() == (x + y,) * 4
    assert fuzz_mul(a, b).as_tuple() == (x * y,) * 4
    assert fuzz_div(a, b, "paper").as_tuple() == (x / y,) * 4
    assert fuzz_div(a, b, "interval_safe").as_tuple() == (x / y,) * 4
    if x >= y:
        assert fuzz_sub(a, b).as_tuple() == (x - y,) * 4


# -- sampled sets and defuzzification ---------------------------------------------------------

def test_sampled_set_validation():
    with pytest.raises(ValueError):
        SampledFuzzySet(0.0, 1.0, np.array([0.5]))
    with pytest.raises(ValueError):
        SampledFuzzySet(0.0, 1.0, np.array([0.5, 1.5]))
    with pytest.raises(ValueError):
        SampledFuzzySet(1.0, 1.0, np.array([0.5, 0.5]))
    s = SampledFuzzySet(0.0, 1.0, np.array([0.0, 0.5, 1.0]))
    assert s.resolution == 3 and s.step == 0.5
    with pytest.raises(ValueError):
        s.grades[0] = 1.0


def test_mom_examples():
    step = 6.0 / 1000
    s = SampledFuzzySet.from_trapezoid(T(1, 2, 4, 5), 0.0, 6.0)
    assert abs(defuzz_mom(s) - 3.0) <= step
    tri = SampledFuzzySet.from_trapezoid(T(1, 2, 2, 3), 0.0, 6.0)
    assert abs(defuzz_mom(tri) - 2.0) <= step
    assert abs(defuzz_mom(s.clip(0.5)) - 3.0) <= step


def test_mom_of_clipped_set_matches_scalar_oracle():
    xs, g = scalar_grades([T(1, 2, 4, 5)], [0.5], 0.0, 6.0, 1001)
    top = max(g)
    expected = np.mean([x for x, v in zip(xs, g) if v >= top - 1e-6])
    s = SampledFuzzySet.from_trapezoid(T(1, 2, 4, 5), 0.0, 6.0).clip(0.5)
    assert defuzz_mom(s) == pytest.approx(expected, abs=1e-12)
    # maximizing set of the clip is [1.5, 4.5]
    assert min(x for x, v in zip(xs, g) if v >= top - 1e-6) == pytest.approx(1.5, abs=0.006)


def test_mom_empty_set():
    with pytest.raises(EmptySet):
        defuzz_mom(SampledFuzzySet(0.0, 1.0, np.zeros(11)))
    with pytest.raises(EmptySet):
        to_bounding_trapezoid(SampledFuzzySet(0.0, 1.0, np.zeros(11)))


@given(st.floats(2, 8), st.floats(0, 1), st.floats(0, 1), st.floats(0.05, 1))
def test_mom_symmetric_sets(c, half_plateau, ramp, level):
    t = T(c - half_plateau - ramp, c - half_plateau, c + half_plateau, c + half_plateau + ramp)
    s = SampledFuzzySet.from_trapezoid(t, 0.0, 10.0).clip(level)
    assume(s.grades.max() > 0)
    assert abs(defuzz_mom(s) - c) <= s.step


def test_defuzz_trapezoid_crisp_is_exact():
    assert defuzz_trapezoid(T.crisp(1.2345678901)) == 1.2345678901


# -- bounding trapezoid -------------------------------------------------------------------------

def test_bounding_round_trip():
    s = SampledFuzzySet.from_trapezoid(T(1, 2, 3, 4), 0.0, 5.0)
    b = to_bounding_trapezoid(s)
    assert approx_quad(b, (1, 2, 3, 4), abs=s.step)


def test_bounding_of_union_against_scalar_oracle():
    low, avg = T(1.1, 1.2, 1.4, 1.5), T(1.4, 1.5, 1.9, 2.0)
    xs, g = scalar_grades([low, avg], [1.0, 0.4], 0.8, 3.0, 1001)
    pos = [i for i, v in enumerate(g) if v > 0]
    top = [i for i, v in enumerate(g) if v >= max(g) - 1e-6]
    oracle = (xs[pos[0] - 1], xs[top[0]], xs[top[-1]], xs[pos[-1] + 1])
    s = SampledFuzzySet.from_trapezoid(low, 0.8, 3.0).union(
        SampledFuzzySet.from_trapezoid(avg, 0.8, 3.0).clip(0.4))
    b = to_bounding_trapezoid(s)
    step = s.step
    assert approx_quad(b, oracle, abs=1e-12)
    assert approx_quad(b, (1.1, 1.2, 1.4, 2.0), abs=step)


def test_bounding_of_clipped_shoulder():
    s = SampledFuzzySet.from_trapezoid(T(4, 4, 5, 6), 4.0, 20.0).clip(0.5)
    assert approx_quad(to_bounding_trapezoid(s), (4, 4, 5.5, 6), abs=s.step)


@settings(max_examples=50)
@given(strict.filter(lambda t: t.a4 - t.a1 > 1), st.floats(0.1, 1))
def test_bounding_preserves_mom_for_contiguous_plateaus(t, level):
    s = SampledFuzzySet.from_trapezoid(t, 0.0, 100.0).clip(level)
    assume(s.grades.max() > 0)
    b = to_bounding_trapezoid(s)
    again = SampledFuzzySet.from_trapezoid(b, 0.0, 100.0)
    assert abs(defuzz_mom(again) - defuzz_mom(s)) <= s.step
