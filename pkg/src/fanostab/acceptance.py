"""Acceptance suite shared by ``fanostab selftest`` and the test-suite.

Every check compares the package against an independent oracle (closed
forms, Bott's formula, Flenner's vanishing pattern, trace re-validation,
exact rational arithmetic) and returns a one-line verdict.
"""
from __future__ import annotations

import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Callable, TextIO

from . import weyl
from .resources import Resources
from .special import certificate_chain, flenner_predicate, special_cells
from .stability import FanoProfile, MAX_DIM, Outcome, cyclic_stability, fano_stability, hypersurface_stability
from .tables import projective_space

SELFTEST_BUDGET = 300.0

# each proof obligation and the scripts that discharge it
CHASE_SCRIPTS = ("g6_section", "g6_cover", "g8_section", "spinor_sections", "spinor_8fold")
SPINOR_LEVELS = range(9, 4, -1)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} criterion {self.number}: {self.title} ({self.detail}) [{self.seconds:.2f}s]"


class Failed(AssertionError):
    pass


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise Failed(msg)


# ---------------------------------------------------------------- 1


def check_closed_form() -> str:
    cells = 0
    start = time.perf_counter()
    for n in range(2, 7):
        top = 2 * (n - 1)
        for t in range(-12, 13):
            for q in range(top + 1):
                coh = weyl.grassmann_cohomology(1, n, q, t)
                for p in range(top + 1):
                    cells += 1
                    if weyl.lemma01_nonvanishing(n, p, q, t) != bool(coh.get(p, 0)):
                        raise Failed(f"G(1,{n}) H^{p}(Omega^{q}({t})): closed form disagrees with BWB ({coh.get(p, 0)})")
    elapsed = time.perf_counter() - start
    _require(elapsed < 60, f"took {elapsed:.1f}s")
    return f"{cells} cells on G(1,2..6), 0 mismatches"


# ---------------------------------------------------------------- 2


def bott(n: int, p: int, q: int, t: int) -> int:
    """Bott's formula for ``h^p(P^n, Omega^q(t))``."""
    if not (0 <= p <= n and 0 <= q <= n):
        return 0
    if p == n and n > 0 and not (q == n and t == 0):
        return bott(n, 0, n - q, -t)
    if t == 0:
        return int(p == q)
    if p == 0 and t > q:
        return comb(t + n - q, t) * comb(t - 1, q)
    return 0


def check_bott() -> str:
    cells = 0
    for n in range(1, 9):
        for t in range(-15, 16):
            for q in range(n + 1):
                coh = weyl.projective_cohomology(n, q, t)
                for p in range(n + 1):
                    cells += 1
                    got = coh.get(p, 0)
                    _require(got == bott(n, p, q, t), f"P({n}) h^{p}(Omega^{q}({t})) = {got}, Bott gives {bott(n, p, q, t)}")
                    dual = weyl.projective_cohomology(n, n - q, -t).get(n - p, 0)
                    _require(got == dual, f"P({n}): Serre duality fails at {(p, q, t)}")
                    if t == 0:
                        _require(got == int(p == q), f"P({n}): h^{p},{q} = {got}")
                        _require(got == weyl.projective_cohomology(n, p, 0).get(q, 0), f"P({n}): Hodge symmetry fails at {(p, q)}")
            if t >= -n:
                h0 = weyl.projective_cohomology(n, 0, t).get(0, 0)
                _require(h0 == comb(n + t, n), f"h0(P({n}), O({t})) = {h0}")
    return f"{cells} cells on P^1..P^8, |t| <= 15"


# ---------------------------------------------------------------- 3


SPOT_CELLS = [
    # (k, n, p, q, t, value)
    (1, 5, 2, 2, 0, 2),
    (1, 4, 0, 3, 2, 0),
    (1, 5, 1, 4, 2, 0),
    (1, 5, 2, 4, 1, 0),
]


def check_spot_cells() -> str:
    for k, n, p, q, t, want in SPOT_CELLS:
        got = weyl.grassmann_h(k, n, p, q, t)
        _require(got == want, f"h^{p}(G({k},{n}), Omega^{q}({t})) = {got}, expected {want}")
    return f"{len(SPOT_CELLS)} cells exact"


# ---------------------------------------------------------------- 4


def complete_intersections(max_ambient: int = 7, max_total: int = 6):
    """Multidegrees of complete intersections of dimension >= 3 in P^N."""
    for big_n in range(4, max_ambient + 1):
        for c in range(1, big_n - 2):
            for degs in combinations_with_replacement(range(2, max_total + 1), c):
                if sum(degs) <= max_total:
                    yield big_n, degs


def check_flenner() -> str:
    window = (-10, 10)
    varieties = cells = 0
    for big_n, degs in complete_intersections():
        cert = certificate_chain(projective_space(big_n), [("section", d) for d in degs], window)
        varieties += 1
        for cond, (p, q, t), _ in special_cells(cert.dim, window):
            if cond != "a":
                continue
            cells += 1
            fl = flenner_predicate(cert.dim, p, q, t)
            got = cert.table.get(p, q, t)
            _require(fl.is_zero and got == 0, f"{cert.space.id} {(p, q, t)}: certificate {got}, Flenner {fl.value}")
        # and nowhere else in the table may the two disagree
        for (p, q, t), got in cert.table.known_cells().items():
            fl = flenner_predicate(cert.dim, p, q, t)
            want = 0 if fl.is_zero else fl.expected
            _require(want is None or got == want, f"{cert.space.id} {(p, q, t)}: certificate {got}, Flenner {want}")
    return f"{varieties} complete intersections, {cells} condition-(a) cells agree"


# ---------------------------------------------------------------- 5


def _input_steps(result) -> set[str]:
    return {str(st.fact) for st in result.trace.steps if st.rule == "input"}


def check_chases(resources: Resources) -> str:
    from .chase import check_trace, load_bearing_inputs, parse_script, replay

    sources = resources.sources()
    mutants = 0
    slowest = 0.0
    for name in CHASE_SCRIPTS:
        path = resources.script_path(name)
        script = parse_script(path.read_text(), name)
        t0 = time.perf_counter()
        result = replay(script, sources)
        slowest = max(slowest, time.perf_counter() - t0)
        _require(result.proved, result.report().strip())
        report = check_trace(result.trace, sources)
        _require(report.ok, report.summary())
        if name == "spinor_sections":
            goals = {str(g) for g in result.trace.goals}
            for k in SPINOR_LEVELS:
                for cell in (f"H1(Omega(X{k},2,1)) = 0", f"H1(Omega(X{k},3,1)) = 0", f"H0(Omega(X{k},3,2)) = 0"):
                    _require(cell in goals, f"spinor_sections does not conclude {cell}")
        # load-bearing inputs read off the pruned trace, then each one deleted
        used = _input_steps(result)
        bearing = [ref for ref in result.inputs if ref in used]
        _require(bearing, f"{name}: no input reaches the goals")
        for ref in bearing:
            _require(not replay(script, sources, mask=[ref]).proved, f"{name} still proves its goals without {ref}")
            mutants += 1
        _require(sorted(load_bearing_inputs(script, sources)) == sorted(bearing), f"{name}: load-bearing inputs disagree with the trace")
    _require(slowest < 5, f"slowest replay {slowest:.2f}s")
    return f"{len(CHASE_SCRIPTS)} scripts proved and checked, {mutants} mutants stuck, slowest {slowest:.2f}s"


# ---------------------------------------------------------------- 6


def check_stability(resources: Resources) -> str:
    def stable(profile: FanoProfile, what: str) -> None:
        v = fano_stability(profile, resources)
        _require(v.outcome == Outcome.STABLE, f"{what} {profile.label}: {v.outcome}: {v.reasons[-1].claim}")

    for n in range(3, 11):
        stable(FanoProfile(n, n - 1), "del Pezzo")
    for n in range(2, 41):
        stable(FanoProfile(n, 1), "index 1")
    pairs = 0
    # genera 2..5 occur in every dimension; sweep those up to 12
    for n in range(4, 13):
        for g in range(2, 11):
            if n <= MAX_DIM.get(g, 12):
                stable(FanoProfile(n, n - 2, genus=g, assume_es=True), "coindex 3")
                pairs += 1
    for r in range(1, 6):
        stable(FanoProfile(4, r), "fourfold")
    return f"del Pezzo n=3..10, index 1 n=2..40, {pairs} coindex-3 (n, g) up to n=12, fourfolds of index 1..5"


# ---------------------------------------------------------------- 7


def hypersurface_inequality(n: int, s: int, d: int) -> bool:
    return all(Fraction(q * s, n + 1) > Fraction(q * (s - d), n) for q in range(1, n))


def cyclic_inequality(n: int, s: int, k: int, d: int) -> bool:
    r = s - (k - 1) * d
    return all(
        Fraction(q * r, n) < min(Fraction(q * s, n), Fraction((q - 1) * s, n) + d) for q in range(1, n)
    )


def _arith_steps(v) -> int:
    return sum(1 for r in v.reasons if r.rule == "maruyama")


def check_thresholds(samples: int = 200, seed: int = 20240) -> str:
    rng = random.Random(seed)
    checked = 0
    while checked < samples:
        n = rng.randint(3, 8)
        if rng.random() < 0.5:
            d = rng.randint(1, n + 1)
            s = rng.randint(d + 1, n + 2)
            if (s, d) in ((n + 2, 1), (n + 1, 1)):
                continue
            _require(hypersurface_inequality(n, s, d), f"hypersurface {(n, s, d)} fails the oracle")
            v = hypersurface_stability(n, s, d)
        else:
            k = rng.randint(2, 4)
            d = rng.randint(1, max(1, (n + 1) // (k - 1)))
            if (k - 1) * d > n + 1:
                continue
            s = rng.randint((k - 1) * d, n + 1)
            if (s, k, d) == (n + 1, 2, 1):
                continue
            _require(cyclic_inequality(n, s, k, d), f"cyclic {(n, s, k, d)} fails the oracle")
            v = cyclic_stability(n, s, k, d)
        _require(v.outcome == Outcome.STABLE, f"{v.subject}: {v.outcome}")
        _require(_arith_steps(v) == n - 1, f"{v.subject}: {_arith_steps(v)} rational checks for {n - 1} values of q")
        checked += 1
    # guards against the oracle over a full box, boundaries included
    boundary = 0
    for n in range(3, 10):
        for d in range(1, n + 3):
            for s in range(d + 1, n + 3):
                rejected = hypersurface_stability(n, s, d, chase=False).outcome == Outcome.NOT_APPLICABLE
                _require(rejected == (not hypersurface_inequality(n, s, d)), f"hypersurface guard at {(n, s, d)}")
                _require(rejected == ((s, d) in ((n + 2, 1), (n + 1, 1))), f"hypersurface exception set at {(n, s, d)}")
                boundary += 1
        for k in range(2, 6):
            for d in range(1, n + 2):
                for s in range((k - 1) * d, n + 2):
                    rejected = cyclic_stability(n, s, k, d, chase=False).outcome == Outcome.NOT_APPLICABLE
                    _require(rejected == (not cyclic_inequality(n, s, k, d)), f"cyclic guard at {(n, s, k, d)}")
                    _require(rejected == ((s, k, d) == (n + 1, 2, 1)), f"cyclic exception set at {(n, s, k, d)}")
                    boundary += 1
    for bad in ((2, 4, 1), (3, 6, 1), (3, 2, 0)):
        _require(hypersurface_stability(*bad).outcome == Outcome.NOT_APPLICABLE, f"hypersurface accepts {bad}")
    for bad in ((2, 3, 2, 1), (3, 5, 2, 1), (3, 1, 3, 1), (3, 3, 1, 1)):
        _require(cyclic_stability(*bad).outcome == Outcome.NOT_APPLICABLE, f"cyclic accepts {bad}")
    return f"{checked} random tuples, {boundary} guard cells"


# ---------------------------------------------------------------- runner


TITLES = {
    1: "closed-form nonvanishing on G(1,n) matches BWB",
    2: "Bott formula, Serre and Hodge symmetry on P^n",
    3: "spot cells on G(1,4) and G(1,5)",
    4: "certificates agree with Flenner on complete intersections",
    5: "chase replays, trace checker and mutations",
    6: "stability verdicts",
    7: "threshold arithmetic and guards",
    8: "selftest wall clock",
}


def run_all(out: TextIO | None = sys.stdout, resources: Resources | None = None) -> list[CriterionResult]:
    start = time.perf_counter()
    results: list[CriterionResult] = []

    def res() -> Resources:
        nonlocal resources
        if resources is None:
            resources = Resources()
        return resources

    checks: dict[int, Callable[[], str]] = {
        1: check_closed_form,
        2: check_bott,
        3: check_spot_cells,
        4: check_flenner,
        5: lambda: check_chases(res()),
        6: lambda: check_stability(res()),
        7: check_thresholds,
    }
    for number, fn in checks.items():
        t0 = time.perf_counter()
        try:
            detail, ok = fn(), True
        except Exception as exc:  # a failing criterion must not stop the others
            detail, ok = f"{type(exc).__name__}: {exc}", False
        results.append(CriterionResult(number, TITLES[number], ok, detail, time.perf_counter() - t0))
        if out is not None:
            print(results[-1].line(), file=out, flush=True)
    total = time.perf_counter() - start
    results.append(CriterionResult(8, TITLES[8], total < SELFTEST_BUDGET, f"{total:.1f}s of {SELFTEST_BUDGET:.0f}s", total))
    if out is not None:
        print(results[-1].line(), file=out)
        print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed", file=out)
    return results
