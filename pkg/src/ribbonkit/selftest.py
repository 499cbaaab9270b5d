"""Desk-scale invariant suites, run by `ribbonkit selftest` and the test suite.

Each suite returns (ok, detail).  Random inputs come from fixed seeds so a run
is reproducible.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import bounds, dynamics, screen
from . import homology as hom
from .cover import build_cover, count_generators, sheet_shifts
from .errors import RibbonkitError
from .grid import GridDiagram, load_grid
from .permanent import permanent, permanent_by_permutations

DATA = Path(__file__).parent / "data"
CORPUS = ("unknot", "trefoil", "figure8", "5_2")
SEED = 20240917


def corpus_grids() -> dict[str, GridDiagram]:
    return {name: load_grid(DATA / f"{name}.grid") for name in CORPUS}


def random_grid(size: int, rng: random.Random, knot: bool = False) -> GridDiagram:
    while True:
        xs = list(range(size))
        os = list(range(size))
        rng.shuffle(xs)
        rng.shuffle(os)
        if any(a == b for a, b in zip(xs, os)):
            continue
        g = GridDiagram(size, tuple(xs), tuple(os))
        if not knot or g.is_knot():
            return g


def all_grids(size: int):
    for xs in itertools.permutations(range(size)):
        for os in itertools.permutations(range(size)):
            if all(a != b for a, b in zip(xs, os)):
                yield GridDiagram(size, xs, os)


def _d_squared(g: GridDiagram, workers: int = 1) -> bool:
    table = hom.state_table(g, ceiling=max(g.size, hom.DEFAULT_CEILING), graded=False)
    src, dst = hom.differential_edges(table, workers)
    return hom.d_squared_is_zero(src, dst, len(table))


def suite_d_squared(max_size=6, per_size=50, workers=1):
    rng = random.Random(SEED)
    checked = 0
    for name, g in corpus_grids().items():
        if g.size <= max_size:
            if not _d_squared(g, workers):
                return False, f"d^2 != 0 on {name}"
            checked += 1
    for size in range(2, max_size + 1):
        for _ in range(per_size):
            g = random_grid(size, rng)
            if not _d_squared(g, workers):
                return False, f"d^2 != 0 on X={list(g.xs)} O={list(g.os)}"
            checked += 1
    return True, f"{checked} grids"


def suite_corpus_oracle(max_size=8, workers=1):
    golden = json.loads((DATA / "corpus_hfk.json").read_text())
    checked = []
    for name, g in corpus_grids().items():
        if g.size > max_size:
            continue
        res = hom.compute(g, workers=workers)
        if [list(r) for r in res.hat.rows()] != golden[name]["hat"]:
            return False, f"{name}: hat table differs from the frozen oracle table"
        if [[e, c] for e, c in res.alexander.coeffs.items()] != golden[name]["alexander"]:
            return False, f"{name}: Alexander polynomial differs from the determinant oracle"
        checked.append(name)
    return True, "matched " + ", ".join(checked)


def suite_symmetry(max_size=6, per_size=10, workers=1):
    """Hat tables of knots are symmetric and Delta is symmetric with Delta(1) = 1."""
    rng = random.Random(SEED + 1)
    grids = [g for g in corpus_grids().values() if g.size <= max_size]
    for size in range(3, max_size + 1):
        grids += [random_grid(size, rng, knot=True) for _ in range(per_size)]
    for g in grids:
        try:
            res = hom.compute(g, workers=workers)
        except RibbonkitError as exc:
            return False, f"X={list(g.xs)} O={list(g.os)}: {exc}"
        alex = res.alexander
        if not alex.is_symmetric() or alex.at_one() != 1:
            return False, f"Alexander polynomial {alex} fails symmetry or normalization"
        if res.fiberedness.fibered and alex.degree != res.fiberedness.genus:
            return False, f"fibered knot with deg Delta != genus at X={list(g.xs)} O={list(g.os)}"
    return True, f"{len(grids)} knots"


def suite_cover_counts(max_size=5, max_sheets=3):
    """Every grid up to max_size: matching count <= (size!)^n, and = size! at n = 1."""
    cache: dict = {}
    checked = 0
    for size in range(2, max_size + 1):
        for g in all_grids(size):
            for n in range(1, max_sheets + 1):
                # the permanent does not see the order of the alpha circles
                key = (size, n, tuple(sorted(map(tuple, sheet_shifts(g, n).tolist()))))
                if key not in cache:
                    cache[key] = count_generators(build_cover(g, n)).exact
                count = cache[key]
                if count > math.factorial(size) ** n:
                    return False, f"count {count} above (size!)^n at X={list(g.xs)} O={list(g.os)} n={n}"
                if n == 1 and count != math.factorial(size):
                    return False, f"n=1 count {count} != {size}!"
                checked += 1
    return True, f"{checked} (grid, n) pairs, {len(cache)} distinct permanents"


def suite_permanent(trials=200, max_size=8):
    rng = np.random.default_rng(SEED)
    for _ in range(trials):
        k = int(rng.integers(1, max_size + 1))
        A = rng.integers(0, 3, (k, k))
        if permanent(A) != permanent_by_permutations(A):
            return False, f"permanent mismatch on {A.tolist()}"
    return True, f"{trials} random matrices up to {max_size}x{max_size}"


def random_primitive(rng: random.Random, max_size=4) -> dynamics.PFMatrix:
    while True:
        k = rng.randint(2, max_size)
        m = dynamics.PFMatrix(tuple(tuple(rng.randint(0, 3) for _ in range(k)) for _ in range(k)))
        if dynamics.is_primitive(m):
            return m


def dynamics_cases(count=20):
    rng = random.Random(SEED + 2)
    fixed = [dynamics.PFMatrix(((2, 1), (1, 1))), dynamics.PFMatrix(((0, 1), (1, 1)))]
    return fixed + [random_primitive(rng) for _ in range(count)]


def predicted_trace_error(m: dynamics.PFMatrix, rho: float, n: int) -> float:
    """First-order size of tr(M^n)^(1/n) - rho from the subdominant eigenvalues."""
    eig = np.linalg.eigvals(np.array(m.entries, dtype=float))
    top = int(np.argmax(abs(eig)))
    rest = np.delete(eig, top) / rho
    return abs(float(np.sum(rest**n).real)) * rho / n


def suite_dynamics(n=40, threshold=1e-6):
    """Certified radius, trace limit at n; misses of the threshold must be explained by the spectral gap."""
    cases = dynamics_cases()
    within = 0
    for m in cases:
        est = dynamics.trace_limit_check(m, n)
        lo, hi = est.certified_interval
        if hi - lo >= 1e-9:
            return False, f"interval too wide for {m.entries}"
        rho = max(abs(np.roots(np.poly(np.array(m.entries, dtype=float)))))
        if abs(rho - est.spectral_radius) > 1e-9:
            return False, f"radius disagrees with characteristic roots for {m.entries}"
        if not est.converged:
            return False, f"trace sequence leaves its envelope for {m.entries}"
        err = abs(est.trace_sequence[n - 1][1] - est.spectral_radius)
        if err < threshold:
            within += 1
        elif abs(err - predicted_trace_error(m, est.spectral_radius, n)) > 0.05 * err:
            return False, f"tr(M^{n})^(1/{n}) off by {err:.3g} for {m.entries}, not explained by the spectrum"
    return True, f"{within} of {len(cases)} matrices within {threshold:g} at n={n}; the rest match the spectral-gap tail"


def suite_bound_identities(trials=100):
    for g in range(1, 6):
        for delta in range(2, 13):
            a = bounds.volume_arc_bound(g, delta).interval
            b = bounds.kojima_mcshane_bound(g, math.factorial(delta)).interval
            if a != b:
                return False, f"volume-arc and Kojima-McShane differ at g={g}, delta={delta}"
    for delta in range(2, 10):
        prev = None
        for e in range(11):
            v = bounds.dimension_root_bound(delta, 2**e)
            if not v.upper < math.factorial(delta):
                return False, f"dimension root bound not below {delta}!"
            if prev is not None and not v.lower > prev.upper:
                return False, f"dimension root bound not increasing along n = 2^e at delta={delta}"
            prev = v
    rng = random.Random(SEED + 3)
    for _ in range(trials):
        g, b = rng.randint(1, 20), rng.uniform(1e-3, 1e3)
        c = bounds.volume_ratio_constant(g, b)
        ref = 3 * math.pi * g * (2 * g - 1) * b
        if abs(c.upper - ref) > 1e-12 * ref:
            return False, f"volume ratio constant off at g={g}, b={b}"
    return True, "volume-arc identity, dimension root monotonicity, volume ratio constant"


def chain_tuples(count=100):
    """Random tuples consistent with the hypotheses of the volume-ratio chain."""
    rng = random.Random(SEED + 4)
    out = []
    for _ in range(count):
        g_k = rng.randint(1, 6)
        g_j = rng.randint(1, g_k)
        lam_k = 1 + rng.uniform(1e-3, 5)
        lam_j = max(lam_k ** rng.randint(1, g_k) * rng.uniform(0.2, 1.0), 1 + 1e-6)
        vol_k = rng.uniform(2.0, 50.0)
        b = math.log(lam_k) / vol_k * rng.uniform(1.0, 3.0)
        b = math.nextafter(b, math.inf) * (1 + 1e-12)
        vol_j = 3 * math.pi * (2 * g_j - 1) * math.log(lam_j) * rng.uniform(0.05, 1.0)
        out.append((g_k, g_j, lam_k, lam_j, b, vol_k, vol_j))
    return out


def suite_chain_audit(count=100):
    violations = 0
    for args in chain_tuples(count):
        if not bounds.kojima_entropy_bound_check(args[2], args[4], args[5]):
            return False, f"generated tuple violates log lambda_K <= b vol_K: {args}"
        violations += sum(not step.holds for step in bounds.volume_chain_audit(*args))
    return violations == 0, f"{count} tuples, {violations} violated steps"


def load_demo(ceiling=hom.DEFAULT_CEILING, workers=1):
    return [screen.enrich_record(r, ceiling, workers) for r in screen.load_database(screen.demo_database_path())]


def suite_screen(workers=1):
    db = load_demo(workers=workers)
    by_name = {r.name: r for r in db}
    verdicts = {v.candidate: v for v in screen.screen_database(by_name["trefoil"], db)}
    expect = {"figure8": "EXCLUDED", "unknot": "POSSIBLE", "trefoil": "MUST_EQUAL"}
    for name, overall in expect.items():
        if verdicts[name].overall.value != overall:
            return False, f"{name} vs trefoil: {verdicts[name].overall.value}, expected {overall}"
    if verdicts["figure8"].result("R2").status is not screen.Status.FAIL:
        return False, "figure8 vs trefoil not excluded by R2"
    r3 = screen.screen_pair(by_name["trefoil"], by_name["figure8"]).result("R3")
    if r3.status is not screen.Status.PASS or r3.bound != 720:
        return False, "trefoil vs figure8: R3 should pass with bound 720"
    for r in db:
        if screen.screen_pair(r, r).overall is screen.Overall.EXCLUDED:
            return False, f"reflexivity fails for {r.name}"
    # dropping fields may only turn results into INAPPLICABLE
    optional = ("genus", "arc_index", "fibered", "hyperbolic", "dilatation", "volume", "hfk_dims", "alexander")
    for J in db:
        for K in db:
            full = screen.screen_pair(J, K).rule_results
            for f in optional:
                for which in (0, 1):
                    J2 = _drop(J, f) if which == 0 else J
                    K2 = _drop(K, f) if which == 1 else K
                    if J2 is None or K2 is None:
                        continue
                    for a, b in zip(full, screen.screen_pair(J2, K2).rule_results):
                        if b.status is not screen.Status.INAPPLICABLE and b.status is not a.status:
                            return False, f"removing {f} flipped {a.rule} for ({J.name}, {K.name})"
    return True, f"regression, reflexivity and monotonicity on {len(db)} records"


def _drop(r, field_name):
    if getattr(r, field_name) is None:
        return None
    kwargs = {field_name: None}
    if field_name == "hfk_dims":
        kwargs["hfk_source"] = None
    try:
        return replace(r, grid=None, **kwargs)
    except RibbonkitError:
        return None


def run_all(max_size=6, workers=1) -> dict:
    """All suites; max_size caps the grid sizes used by the homology suites."""
    suites = [
        ("d_squared", lambda: suite_d_squared(min(max_size, 6), workers=workers)),
        ("corpus_oracle", lambda: suite_corpus_oracle(max(max_size, 2), workers)),
        ("symmetry", lambda: suite_symmetry(min(max_size, 6), workers=workers)),
        ("cover_counts", lambda: suite_cover_counts(min(max_size, 5))),
        ("permanent", suite_permanent),
        ("dynamics", suite_dynamics),
        ("bound_identities", suite_bound_identities),
        ("chain_audit", suite_chain_audit),
        ("screen", lambda: suite_screen(workers)),
    ]
    results = []
    for name, fn in suites:
        try:
            ok, detail = fn()
        except RibbonkitError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append({"name": name, "ok": bool(ok), "detail": detail})
    return {"command": "selftest", "max_size": max_size, "suites": results, "ok": all(s["ok"] for s in results)}
