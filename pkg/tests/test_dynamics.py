import random

import pytest
import sympy

from ribbonkit import dynamics
from ribbonkit.dynamics import PFMatrix
from ribbonkit.errors import GridParseError, NotPrimitiveError
from ribbonkit.selftest import random_primitive


def charpoly_radius(m):
    x = sympy.symbols("x")
    roots = sympy.Poly(sympy.Matrix(m.entries).charpoly(x).as_expr(), x).nroots(n=30)
    return max(abs(complex(r)) for r in roots)


def test_figure_eight_matrix():
    est = dynamics.spectral_radius(PFMatrix(((2, 1), (1, 1))))
    lo, hi = est.certified_interval
    assert hi - lo < 1e-9
    assert lo <= (3 + 5**0.5) / 2 <= hi


def test_one_by_one():
    est = dynamics.trace_limit_check(PFMatrix(((1,),)), 10)
    assert est.spectral_radius == 1.0 and est.trace_sequence[-1] == (10, 1.0)


@pytest.mark.parametrize("entries", [((0, 1), (1, 0)), ((1, 1), (0, 1)), ((0,),)])
def test_not_primitive(entries):
    m = PFMatrix(entries)
    assert not dynamics.is_primitive(m)
    with pytest.raises(NotPrimitiveError):
        dynamics.spectral_radius(m)


def test_random_primitive_against_characteristic_polynomial():
    rng = random.Random(11)
    for _ in range(15):
        m = random_primitive(rng)
        est = dynamics.spectral_radius(m)
        lo, hi = est.certified_interval
        rho = charpoly_radius(m)
        assert lo - 1e-12 <= rho <= hi + 1e-12
        assert hi - lo < 1e-9


def test_trace_routes_agree():
    m = PFMatrix(((1, 2, 0), (0, 1, 1), (1, 0, 1)))
    traces = dynamics.matrix_power_traces(m, 30)
    assert all(dynamics.trace_by_squaring(m, n) == traces[n - 1] for n in (1, 2, 7, 16, 30))


def test_power_of_two_subsequence():
    est = dynamics.trace_limit_check(PFMatrix(((2, 1), (1, 1))), 40)
    assert [n for n, _ in est.power_of_two_subsequence()] == [1, 2, 4, 8, 16, 32]
    assert est.converged
    assert abs(est.trace_sequence[39][1] - est.spectral_radius) < 1e-6


def test_nth_root_of_huge_values():
    assert abs(dynamics.nth_root(3**5000, 5000) - 3) < 1e-12


def test_matrix_file_roundtrip_and_errors():
    m = PFMatrix(((2, 1), (1, 1)))
    assert dynamics.parse_matrix(dynamics.serialize_matrix(m)) == m
    for bad in ["", "2\n1 1\n", "2\n1 1\n1 x\n", "2\n1 -1\n1 1\n", "2\n1 1 1\n1 1\n"]:
        with pytest.raises(GridParseError):
            dynamics.parse_matrix(bad)


def test_fixed_point_bound_check():
    assert dynamics.fixed_point_bound_check([(1, 2), (2, 4)], [(1, 3), (2, 5)])
    assert not dynamics.fixed_point_bound_check([(1, 3)], [(1, 3)])
    with pytest.raises(ValueError):
        dynamics.fixed_point_bound_check([(1, 2)], [(2, 3)])
