"""Necessary conditions for J <= K (J ribbon concordant to K).

Each rule is a pure comparison of declared or derived invariants.  A rule
whose inputs are missing reports INAPPLICABLE and never contributes to an
exclusion.  Floating comparisons go through `bounds.check_measured`, so a
FAIL is certified against an outward-rounded bound.

Rules
  R1  g(J) <= g(K)
  R2  dim HFK(J) <= dim HFK(K), per Alexander grading and in total
      (optionally per bigrading)
  R3  lambda(J) <= delta(K)!                          (J fibered)
  R4  lambda(J) <= lambda(K)^g(K)                     (K hyperbolic fibered)
  R5  vol(J) <= 3 pi (2 g(K) - 1) log(delta(K)!)      (J hyperbolic fibered)
  R6  K fibered  =>  J fibered
  R7  K, J fibered and deg Delta_J = deg Delta_K  =>  J = K   (MUST_EQUAL)
  R8  vol(J) <= 3 pi g (2g - 1) b vol(K)               (needs b, both hyperbolic fibered)
  R9  dim HFK of the lifts to the n-fold branched covers, n a power of 2 (opt-in, experimental)

Records may carry dilatation 1 for fibered knots with periodic monodromy
(torus knots, the unknot); R3 and R4 then hold trivially.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from . import bounds
from . import homology as hom
from .dynamics import PFMatrix, spectral_radius
from .errors import RecordError
from .grid import GridDiagram, parse_grid, serialize_grid
from .homology import AlexanderPolynomial, BigradedDims


class Status(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INAPPLICABLE = "INAPPLICABLE"


class Overall(str, Enum):
    EXCLUDED = "EXCLUDED"
    POSSIBLE = "POSSIBLE"
    MUST_EQUAL = "MUST_EQUAL"


@dataclass(frozen=True)
class KnotRecord:
    name: str
    genus: int | None = None
    arc_index: int | None = None
    fibered: bool | None = None
    hyperbolic: bool | None = None
    dilatation: float | None = None
    volume: float | None = None
    hfk_dims: BigradedDims | None = None
    alexander: AlexanderPolynomial | None = None
    grid: GridDiagram | None = None
    hfk_source: str | None = None
    cover_hfk: dict = field(default_factory=dict)
    notes: str | None = None

    def __post_init__(self):
        validate_record(self)

    def alexander_degree(self) -> int | None:
        if self.alexander is not None:
            return self.alexander.degree
        if self.hfk_dims is not None:
            return hom.alexander_polynomial(self.hfk_dims).degree
        return None


@dataclass(frozen=True)
class RuleResult:
    rule: str
    status: Status
    detail: str
    bound: float | int | None = None
    near_boundary: bool = False


@dataclass(frozen=True)
class ScreenVerdict:
    candidate: str
    target: str
    rule_results: list
    overall: Overall

    def result(self, rule: str) -> RuleResult:
        return next(r for r in self.rule_results if r.rule == rule)


def validate_record(r: KnotRecord) -> None:
    def bad(msg):
        raise RecordError(f"record {r.name!r}: {msg}")

    if not r.name:
        raise RecordError("record without a name")
    if r.genus is not None and r.genus < 0:
        bad("genus must be nonnegative")
    if r.arc_index is not None and r.arc_index < 2:
        bad("arc index must be at least 2")
    if r.grid is not None and r.arc_index is not None and r.arc_index > r.grid.size:
        bad(f"declared arc index {r.arc_index} exceeds the size {r.grid.size} of its grid")
    if r.dilatation is not None:
        if r.dilatation < 1:
            bad("dilatation must be at least 1")
        if r.fibered is False:
            bad("a dilatation is only defined for fibered knots")
        if r.dilatation > 1 and r.hyperbolic is False:
            bad("dilatation > 1 requires a hyperbolic (pseudo-Anosov) knot")
        if r.dilatation == 1 and r.hyperbolic is True:
            bad("a hyperbolic fibered knot has dilatation > 1")
    if r.volume is not None:
        if r.volume <= 0:
            bad("volume must be positive")
        if r.hyperbolic is False:
            bad("volume given for a non-hyperbolic knot")
    if r.alexander is not None:
        if not r.alexander.is_symmetric() or r.alexander.at_one() != 1:
            bad("Alexander polynomial must be symmetric with Delta(1) = 1")
        if r.genus is not None and r.alexander.degree > r.genus:
            bad("Alexander degree exceeds the genus")
        if r.fibered and r.genus is not None and r.alexander.degree != r.genus:
            bad("a fibered knot has Alexander degree equal to its genus")
    if r.hfk_dims is not None:
        report = hom.genus_and_fiberedness(r.hfk_dims)
        if r.genus is not None and report.genus != r.genus:
            bad(f"HFK table has genus {report.genus}, declared {r.genus}")
        if r.fibered is not None and report.fibered != r.fibered:
            bad("HFK top-grading dimension disagrees with the fibered flag")
        if r.alexander is not None and hom.alexander_polynomial(r.hfk_dims) != r.alexander:
            bad("Alexander polynomial disagrees with the HFK Euler characteristic")


def enrich_record(r: KnotRecord, ceiling: int = hom.DEFAULT_CEILING, workers: int = 1,
                  cover_sheets=()) -> KnotRecord:
    """Fill genus, fiberedness, HFK and Alexander data from the grid; declared values must agree."""
    if r.grid is None:
        return r
    if not r.grid.is_knot():
        raise RecordError(f"record {r.name!r}: grid presents a link with {r.grid.components()} components")
    result = hom.compute(r.grid, ceiling, workers)
    derived = {
        "genus": result.fiberedness.genus,
        "fibered": result.fiberedness.fibered,
        "hfk_dims": result.hat,
        "alexander": result.alexander,
    }
    for key, value in derived.items():
        declared = getattr(r, key)
        if declared is not None and declared != value:
            raise RecordError(f"record {r.name!r}: declared {key} {declared} disagrees with grid homology {value}")
    cover_hfk = dict(r.cover_hfk)
    if cover_sheets:
        from .cover import build_cover, cover_homology_experimental

        for n in cover_sheets:
            cover_hfk[n] = int(cover_homology_experimental(build_cover(r.grid, n)).hat_total)
    return replace(
        r,
        arc_index=r.arc_index if r.arc_index is not None else r.grid.size,
        hfk_source="engine",
        cover_hfk=cover_hfk,
        **derived,
    )


def _na(rule, why):
    return RuleResult(rule, Status.INAPPLICABLE, why)


def _compare(rule, measured, interval: bounds.CertifiedReal, what: str, bound_value):
    ok, near = bounds.check_measured(measured, interval)
    status = Status.PASS if ok else Status.FAIL
    detail = f"{what}: {measured:g} {'<=' if ok else '>'} {bound_value:g}"
    if near:
        detail += " (within 1e-9 relative of the bound)"
    return RuleResult(rule, status, detail, bound_value, near)


def rule_genus(J, K):
    if J.genus is None or K.genus is None:
        return _na("R1", "genus missing")
    ok = J.genus <= K.genus
    return RuleResult("R1", Status.PASS if ok else Status.FAIL, f"g(J)={J.genus} {'<=' if ok else '>'} g(K)={K.genus}")


def rule_rank(J, K, bigraded=False):
    if J.hfk_dims is None or K.hfk_dims is None:
        return _na("R2", "HFK table missing")
    failures = []
    dj, dk = J.hfk_dims.by_alexander(), K.hfk_dims.by_alexander()
    for a in sorted(set(dj) | set(dk)):
        if dj.get(a, 0) > dk.get(a, 0):
            failures.append(f"a={a}: {dj.get(a, 0)} > {dk.get(a, 0)}")
    tj, tk = J.hfk_dims.total(), K.hfk_dims.total()
    if tj > tk:
        failures.append(f"total {tj} > {tk}")
    if bigraded and J.hfk_source == "engine" and K.hfk_source == "engine":
        for key, d in J.hfk_dims.entries.items():
            if d > K.hfk_dims.entries.get(key, 0):
                failures.append(f"(m,a)={key}: {d} > {K.hfk_dims.entries.get(key, 0)}")
        scope = "bigraded"
    else:
        scope = "per Alexander grading"
    if failures:
        return RuleResult("R2", Status.FAIL, "; ".join(failures))
    return RuleResult("R2", Status.PASS, f"HFK(J) fits in HFK(K) {scope}; totals {tj} <= {tk}")


def rule_dilatation_arc(J, K):
    if not J.fibered or J.dilatation is None:
        return _na("R3", "J not known to be fibered with known dilatation")
    if K.arc_index is None:
        return _na("R3", "arc index of K missing")
    rep = bounds.dilatation_arc_bound(K.arc_index)
    return _compare("R3", J.dilatation, rep.interval, "lambda(J) vs delta(K)!", rep.bound_value)


def rule_dilatation_dilatation(J, K):
    if not J.fibered or J.dilatation is None:
        return _na("R4", "J not known to be fibered with known dilatation")
    if not (K.hyperbolic and K.fibered and K.dilatation is not None and K.dilatation > 1 and K.genus):
        return _na("R4", "K not a hyperbolic fibered knot with known dilatation and genus")
    rep = bounds.entropy_relation_bound(K.dilatation, K.genus)
    return _compare("R4", J.dilatation, rep.interval, "lambda(J) vs lambda(K)^g(K)", rep.bound_value)


def rule_volume_arc(J, K):
    if not (J.hyperbolic and J.fibered) or J.volume is None:
        return _na("R5", "J not a hyperbolic fibered knot with known volume")
    if not K.genus or K.arc_index is None:
        return _na("R5", "K needs genus >= 1 and an arc index")
    rep = bounds.volume_arc_bound(K.genus, K.arc_index)
    return _compare("R5", J.volume, rep.interval, "vol(J) vs 3pi(2g-1)log(delta!)", rep.bound_value)


def rule_fibered(J, K):
    if K.fibered is not True:
        return _na("R6", "K not known to be fibered")
    if J.fibered is None:
        return _na("R6", "fiberedness of J unknown")
    if J.fibered:
        return RuleResult("R6", Status.PASS, "K fibered and J fibered")
    return RuleResult("R6", Status.FAIL, "K fibered but J is not")


def rule_fibered_equal(J, K):
    if not (J.fibered and K.fibered):
        return _na("R7", "needs J and K both fibered")
    dj, dk = J.alexander_degree(), K.alexander_degree()
    if dj is None or dk is None:
        return _na("R7", "Alexander degree missing")
    if dj != dk:
        return _na("R7", f"Alexander degrees differ ({dj} vs {dk})")
    return RuleResult("R7", Status.PASS, f"both fibered with deg Delta = {dj}: J <= K forces J = K")


def rule_volume_ratio(J, K, b=None):
    if b is None:
        return _na("R8", "no b_{g,eps} supplied")
    if not (J.hyperbolic and J.fibered and K.hyperbolic and K.fibered):
        return _na("R8", "needs J and K hyperbolic fibered")
    if J.volume is None or K.volume is None or not K.genus:
        return _na("R8", "volume or genus missing")
    c = bounds.volume_ratio_constant(K.genus, b)
    with bounds._double_precision():
        prod = c.to_iv() * bounds._as_iv(K.volume)
        interval = bounds.CertifiedReal.from_iv(prod)
    return _compare("R8", J.volume, interval, "vol(J) vs c_{g,eps} vol(K)", interval.upper)


def rule_cover_rank(J, K):
    common = sorted(n for n in set(J.cover_hfk) & set(K.cover_hfk) if n > 1 and n & (n - 1) == 0)
    if not common:
        return _na("R9", "no common power-of-2 cover data")
    bad = [f"n={n}: {J.cover_hfk[n]} > {K.cover_hfk[n]}" for n in common if J.cover_hfk[n] > K.cover_hfk[n]]
    if bad:
        return RuleResult("R9", Status.FAIL, "experimental: " + "; ".join(bad))
    return RuleResult("R9", Status.PASS, "experimental: lifted HFK fits for n in " + ",".join(map(str, common)))


def screen_pair(J: KnotRecord, K: KnotRecord, b: float | None = None, experimental: bool = False,
                bigraded: bool = False) -> ScreenVerdict:
    """Evaluate R1-R8 (and R9 when `experimental`).

    `bigraded` makes R2 compare full (Maslov, Alexander) tables when both come
    from the grid engine; by default R2 compares per Alexander grading only.
    """
    results = [
        rule_genus(J, K),
        rule_rank(J, K, bigraded),
        rule_dilatation_arc(J, K),
        rule_dilatation_dilatation(J, K),
        rule_volume_arc(J, K),
        rule_fibered(J, K),
        rule_fibered_equal(J, K),
        rule_volume_ratio(J, K, b),
    ]
    if experimental:
        results.append(rule_cover_rank(J, K))
    if any(r.status is Status.FAIL for r in results):
        overall = Overall.EXCLUDED
    elif results[6].status is Status.PASS:
        overall = Overall.MUST_EQUAL
    else:
        overall = Overall.POSSIBLE
    return ScreenVerdict(J.name, K.name, results, overall)


def screen_database(K: KnotRecord, db, b=None, experimental=False, bigraded=False) -> list[ScreenVerdict]:
    names = [r.name for r in db]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise RecordError(f"duplicate record names: {', '.join(dupes)}")
    return [screen_pair(J, K, b, experimental, bigraded) for J in db]


def summarize(verdicts) -> dict[str, int]:
    out = {o.value: 0 for o in Overall}
    for v in verdicts:
        out[v.overall.value] += 1
    return out


# -- database I/O -------------------------------------------------------------

_SIMPLE_FIELDS = ("genus", "arc_index", "fibered", "hyperbolic", "dilatation", "volume", "hfk_source", "notes")


def record_from_dict(data: dict) -> KnotRecord:
    known = set(_SIMPLE_FIELDS) | {"name", "hfk", "alexander", "grid", "monodromy_matrix", "cover_hfk"}
    extra = set(data) - known
    if extra:
        raise RecordError(f"record {data.get('name')!r}: unknown fields {sorted(extra)}")
    kwargs = {k: data[k] for k in _SIMPLE_FIELDS if data.get(k) is not None}
    if "hfk" in data:
        kwargs["hfk_dims"] = BigradedDims.from_rows(data["hfk"])
        kwargs.setdefault("hfk_source", "declared")
    if "alexander" in data:
        kwargs["alexander"] = AlexanderPolynomial({int(e): int(c) for e, c in data["alexander"]})
    if "grid" in data:
        kwargs["grid"] = parse_grid(data["grid"])
    if "cover_hfk" in data:
        kwargs["cover_hfk"] = {int(n): int(d) for n, d in data["cover_hfk"]}
    if "monodromy_matrix" in data:
        if "dilatation" in data:
            raise RecordError(f"record {data['name']!r}: give either dilatation or monodromy_matrix")
        est = spectral_radius(PFMatrix(tuple(map(tuple, data["monodromy_matrix"]))))
        kwargs["dilatation"] = est.spectral_radius
    if "name" not in data:
        raise RecordError("record without a name")
    return KnotRecord(name=data["name"], **kwargs)


def record_to_dict(r: KnotRecord) -> dict:
    out: dict = {"name": r.name}
    for k in _SIMPLE_FIELDS:
        v = getattr(r, k)
        if v is not None:
            out[k] = v
    if r.hfk_dims is not None:
        out["hfk"] = [list(row) for row in r.hfk_dims.rows()]
    if r.alexander is not None:
        out["alexander"] = [[e, c] for e, c in r.alexander.coeffs.items()]
    if r.grid is not None:
        out["grid"] = serialize_grid(r.grid)
    if r.cover_hfk:
        out["cover_hfk"] = [[n, d] for n, d in sorted(r.cover_hfk.items())]
    return out


def load_database(path) -> list[KnotRecord]:
    """One JSON object per line; blank lines and '#' lines are skipped."""
    records = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise RecordError(f"{path}:{lineno}: {exc.msg}") from None
        records.append(record_from_dict(data))
    return records


def demo_database_path() -> Path:
    return Path(__file__).parent / "data" / "demo_knots.jsonl"


def verdict_to_dict(v: ScreenVerdict) -> dict:
    return {
        "candidate": v.candidate,
        "target": v.target,
        "overall": v.overall.value,
        "rules": [
            {
                "rule": r.rule,
                "status": r.status.value,
                "detail": r.detail,
                **({"bound": r.bound} if r.bound is not None else {}),
                **({"near_boundary": True} if r.near_boundary else {}),
            }
            for r in v.rule_results
        ],
    }

