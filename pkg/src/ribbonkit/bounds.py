"""Calculators for the explicit inequalities, with outward-rounded arithmetic.

Every transcendental step is evaluated with mpmath interval arithmetic at
double precision, so interval endpoints are exact doubles that enclose the
true value.  Upper bounds are reported as the upper endpoint.  Logarithms are
natural logarithms throughout.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field

from mpmath import iv

NEAR_BOUNDARY_SLACK = 1e-9


@contextmanager
def _double_precision():
    saved = iv.prec
    iv.prec = 53
    try:
        yield
    finally:
        iv.prec = saved


@dataclass(frozen=True)
class CertifiedReal:
    """Closed interval [lower, upper] of doubles known to contain the true value."""

    lower: float
    upper: float

    @classmethod
    def from_iv(cls, x) -> "CertifiedReal":
        return cls(float(x.a), float(x.b))

    @classmethod
    def exact(cls, value) -> "CertifiedReal":
        with _double_precision():
            return cls.from_iv(iv.mpf(value))

    def to_iv(self):
        return iv.mpf([self.lower, self.upper])

    @property
    def width(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class BoundReport:
    name: str
    inputs: dict
    bound_value: int | float
    interval: CertifiedReal
    measured: float | None = None
    satisfied: bool | None = None
    near_boundary: bool = False
    notes: list = field(default_factory=list)


def check_measured(measured, bound: CertifiedReal) -> tuple[bool, bool]:
    """(satisfied, near_boundary) for `measured <= bound`.

    Failure is only reported when measured exceeds the upper endpoint, so a
    False is certified.  A pass within relative slack 1e-9 of the bound is
    flagged as near the boundary.
    """
    satisfied = measured <= bound.upper
    near = satisfied and (bound.upper - measured) <= NEAR_BOUNDARY_SLACK * abs(bound.upper)
    return satisfied, near


def _report(name, inputs, interval: CertifiedReal, measured=None, exact_value=None) -> BoundReport:
    value = exact_value if exact_value is not None else interval.upper
    if measured is None:
        return BoundReport(name, inputs, value, interval)
    ok, near = check_measured(measured, interval)
    return BoundReport(name, inputs, value, interval, measured, ok, near)


def _require(cond, message):
    if not cond:
        raise ValueError(message)


def _as_iv(x):
    """Exact input as an interval; ints too large for a double are enclosed outward."""
    if isinstance(x, CertifiedReal):
        return x.to_iv()
    return iv.mpf(x)


def dilatation_arc_bound(delta: int, measured=None) -> BoundReport:
    """delta!  (dilatation of a hyperbolic fibered predecessor)."""
    _require(delta >= 2, "arc index must be at least 2")
    value = math.factorial(delta)
    return _report("dilatation-arc", {"delta": delta}, CertifiedReal.exact(value), measured, exact_value=value)


def dimension_root_bound(delta: int, n: int) -> CertifiedReal:
    """delta! / 2^((delta - 1)/n), the n-th root of the cover dimension bound."""
    _require(delta >= 2 and n >= 1, "need delta >= 2 and n >= 1")
    with _double_precision():
        x = iv.mpf(math.factorial(delta)) / iv.mpf(2) ** (iv.mpf(delta - 1) / n)
        return CertifiedReal.from_iv(x)


def _kojima_mcshane_iv(g, lam):
    return iv.mpf(3) * iv.pi * iv.mpf(2 * g - 1) * iv.log(_as_iv(lam))


def kojima_mcshane_bound(g: int, lam, measured=None) -> BoundReport:
    """3 pi (2g - 1) log(lambda): volume ceiling for a hyperbolic fibered knot."""
    _require(g >= 1, "genus must be at least 1")
    _require(lam > 1 if not isinstance(lam, CertifiedReal) else lam.lower > 1, "dilatation must exceed 1")
    with _double_precision():
        x = _kojima_mcshane_iv(g, lam)
        interval = CertifiedReal.from_iv(x)
    inputs = {"g": g, "lambda": lam if not isinstance(lam, CertifiedReal) else [lam.lower, lam.upper]}
    return _report("kojima-mcshane", inputs, interval, measured)


def volume_arc_bound(g: int, delta: int, measured=None) -> BoundReport:
    """3 pi (2g - 1) log(delta!): volume ceiling for predecessors of a genus-g, arc-index-delta knot."""
    _require(g >= 1 and delta >= 2, "need g >= 1 and delta >= 2")
    with _double_precision():
        x = iv.mpf(3) * iv.pi * iv.mpf(2 * g - 1) * iv.log(iv.mpf(math.factorial(delta)))
        interval = CertifiedReal.from_iv(x)
    return _report("volume-arc", {"g": g, "delta": delta}, interval, measured)


def entropy_relation_bound(lam_k: float, g_k: int, measured=None) -> BoundReport:
    """lambda(K)^g(K)."""
    _require(lam_k > 1, "dilatation of K must exceed 1 (pseudo-Anosov monodromy)")
    _require(g_k >= 1, "genus must be at least 1")
    with _double_precision():
        interval = CertifiedReal.from_iv(_as_iv(lam_k) ** g_k)
    return _report("entropy-relation", {"lambda_K": lam_k, "g_K": g_k}, interval, measured)


def cornish_growth_bound(c: float, lam: float, g: int, n: int) -> CertifiedReal:
    """c * lambda^(g n)."""
    _require(c > 0 and lam > 1 and g >= 1 and n >= 1, "need c > 0, lambda > 1, g >= 1, n >= 1")
    with _double_precision():
        return CertifiedReal.from_iv(_as_iv(c) * _as_iv(lam) ** (g * n))


def volume_ratio_constant(g: int, b: float) -> CertifiedReal:
    """3 pi g (2g - 1) b."""
    _require(g >= 1 and b > 0, "need g >= 1 and b > 0")
    with _double_precision():
        return CertifiedReal.from_iv(iv.mpf(3) * iv.pi * iv.mpf(g * (2 * g - 1)) * _as_iv(b))


def kojima_entropy_bound_check(lam_k: float, b: float, vol_k: float) -> bool:
    """log(lambda_K) <= b * vol_K, with the left side rounded up and the right side down."""
    _require(lam_k > 1 and b > 0 and vol_k > 0, "need lambda > 1 and positive b, vol")
    with _double_precision():
        left = iv.log(_as_iv(lam_k))
        right = _as_iv(b) * _as_iv(vol_k)
        return bool(left.b <= right.a)


@dataclass(frozen=True)
class ChainStep:
    label: str
    lhs: CertifiedReal
    rhs: CertifiedReal
    holds: bool
    certified_strict: bool


def volume_chain_audit(g_k: int, g_j: int, lam_k: float, lam_j: float, b: float, vol_k: float, vol_j: float):
    """Evaluate each line of the volume-ratio inequality chain.

        vol(J) <= 3pi(2g_J - 1) log lam_J
               <= 3pi(2g_K - 1) log lam_J
               <= 3pi g_K (2g_K - 1) log lam_K
               <= 3pi g_K (2g_K - 1) b vol(K)
               =  c_{g,eps} vol(K)

    A step `holds` unless interval arithmetic proves lhs > rhs;
    `certified_strict` means lhs.upper <= rhs.lower.
    """
    with _double_precision():
        three_pi = iv.mpf(3) * iv.pi
        log_j = iv.log(_as_iv(lam_j))
        log_k = iv.log(_as_iv(lam_k))
        lines = [
            ("vol(J)", _as_iv(vol_j)),
            ("3pi(2g(J)-1)log lam(J)", three_pi * iv.mpf(2 * g_j - 1) * log_j),
            ("3pi(2g-1)log lam(J)", three_pi * iv.mpf(2 * g_k - 1) * log_j),
            ("3pi g(2g-1)log lam(K)", three_pi * iv.mpf(g_k * (2 * g_k - 1)) * log_k),
            ("3pi g(2g-1) b vol(K)", three_pi * iv.mpf(g_k * (2 * g_k - 1)) * _as_iv(b) * _as_iv(vol_k)),
            ("c vol(K)", volume_ratio_constant(g_k, b).to_iv() * _as_iv(vol_k)),
        ]
        steps = []
        for (name_l, lhs), (name_r, rhs) in zip(lines, lines[1:]):
            steps.append(
                ChainStep(
                    f"{name_l} <= {name_r}",
                    CertifiedReal.from_iv(lhs),
                    CertifiedReal.from_iv(rhs),
                    holds=bool(lhs.a <= rhs.b),
                    certified_strict=bool(lhs.b <= rhs.a),
                )
            )
    return steps
