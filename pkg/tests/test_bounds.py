import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ribbonkit import bounds


def test_named_values():
    assert bounds.dilatation_arc_bound(5).bound_value == 120
    assert bounds.dilatation_arc_bound(6).bound_value == 720
    assert bounds.volume_arc_bound(1, 6).bound_value == pytest.approx(62.00798, abs=1e-4)
    assert bounds.volume_arc_bound(1, 2).bound_value == pytest.approx(3 * math.pi * math.log(2))
    assert bounds.dimension_root_bound(5, 1).upper == 7.5
    c = bounds.volume_ratio_constant(2, 1)
    assert c.lower <= 18 * math.pi <= c.upper


def test_intervals_enclose_reference():
    for g in range(1, 5):
        for lam in (1.5, 2.618033988749895, 10.0):
            ref = 3 * math.pi * (2 * g - 1) * math.log(lam)
            iv = bounds.kojima_mcshane_bound(g, lam).interval
            assert iv.lower <= ref * (1 + 1e-15) and ref * (1 - 1e-15) <= iv.upper
            assert iv.width <= 8 * math.ulp(ref)


@given(st.integers(1, 8), st.integers(2, 14))
def test_volume_arc_is_kojima_mcshane_at_factorial(g, delta):
    assert bounds.volume_arc_bound(g, delta).interval == bounds.kojima_mcshane_bound(g, math.factorial(delta)).interval


def test_dimension_root_increases_to_factorial():
    for delta in range(2, 9):
        values = [bounds.dimension_root_bound(delta, 2**e) for e in range(11)]
        assert all(v.upper < math.factorial(delta) for v in values)
        assert all(a.upper < b.lower for a, b in zip(values, values[1:]))
        assert math.factorial(delta) - values[-1].upper < math.factorial(delta) * 0.01


def test_measured_comparison_and_near_boundary():
    rep = bounds.dilatation_arc_bound(6, measured=2.618)
    assert rep.satisfied and not rep.near_boundary
    assert not bounds.dilatation_arc_bound(3, measured=6.5).satisfied
    near = bounds.dilatation_arc_bound(3, measured=6 * (1 - 1e-11))
    assert near.satisfied and near.near_boundary


def test_entropy_and_growth():
    rep = bounds.entropy_relation_bound(2.618034, 2)
    assert rep.bound_value == pytest.approx(2.618034**2)
    c = bounds.cornish_growth_bound(2.0, 1.5, 2, 3)
    assert c.lower <= 2.0 * 1.5**6 <= c.upper


def test_kojima_entropy_bound_check():
    assert bounds.kojima_entropy_bound_check(2.618, 1.0, 2.03)
    assert not bounds.kojima_entropy_bound_check(100.0, 0.1, 2.0)


def test_bad_parameters():
    for call in (
        lambda: bounds.dilatation_arc_bound(1),
        lambda: bounds.volume_arc_bound(0, 5),
        lambda: bounds.kojima_mcshane_bound(1, 1.0),
        lambda: bounds.entropy_relation_bound(0.5, 1),
        lambda: bounds.volume_ratio_constant(1, -1),
        lambda: bounds.dimension_root_bound(5, 0),
    ):
        with pytest.raises(ValueError):
            call()


def test_chain_audit_flags_a_false_step():
    # lambda_J far above lambda_K^g breaks the third line
    steps = bounds.volume_chain_audit(1, 1, 1.1, 50.0, 1.0, 5.0, 1.0)
    assert [s.holds for s in steps] == [True, True, False, True, True]


def test_chain_audit_random_consistent_tuples():
    rng = random.Random(5)
    for _ in range(50):
        g = rng.randint(1, 4)
        lam_k = 1 + rng.random() * 3
        vol_k = rng.uniform(2, 20)
        b = math.log(lam_k) / vol_k * 1.5
        lam_j = lam_k ** rng.randint(1, g) * rng.uniform(0.5, 1)
        lam_j = max(lam_j, 1.01)
        if lam_j > lam_k**g:
            continue
        vol_j = 3 * math.pi * math.log(lam_j) * 0.9
        assert all(s.holds for s in bounds.volume_chain_audit(g, 1, lam_k, lam_j, b, vol_k, vol_j))
