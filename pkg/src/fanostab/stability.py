"""Slope-stability decisions for tangent bundles of Fano manifolds with b2 = 1.

All slopes are exact fractions in units of ``H^n``.  A verdict carries an
ordered reason log; steps cite earlier steps, proof traces (replayed and
independently checked) and special-cohomology certificates.
"""
from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor

from .chase import ChaseContradiction, ProofTrace, check_trace, parse_script, replay
from .chase.engine import Space
from .resources import Resources
from .special import SpecialCohomologyCertificate, base_certificate, certificate_chain, propagate_cyclic, propagate_section
from .tables import FootprintError, projective_space

# ---------------------------------------------------------------- verdicts


class Outcome(str, Enum):
    STABLE = "Stable"
    SEMISTABLE = "Semistable"
    UNKNOWN = "Unknown"
    NOT_APPLICABLE = "NotApplicable"

    def __str__(self) -> str:
        return self.value


class InvalidProfile(ValueError):
    pass


@dataclass(frozen=True)
class Reason:
    claim: str
    rule: str
    using: tuple = ()  # ints are earlier step numbers, strings name resources


@dataclass
class StabilityVerdict:
    subject: str
    outcome: Outcome = Outcome.UNKNOWN
    reasons: list[Reason] = field(default_factory=list)
    traces: list[ProofTrace] = field(default_factory=list)
    certificates: list[str] = field(default_factory=list)
    assumptions: list[str] = field(default_factory=list)

    def step(self, claim: str, rule: str, *using) -> int:
        self.reasons.append(Reason(claim, rule, tuple(using)))
        return len(self.reasons)

    def absorb(self, other: StabilityVerdict) -> int:
        """Append another verdict's log; returns the number of its last step.
        Integer references are renumbered, so a sub-verdict should cite the
        parent's steps as ``"STEP k"`` strings."""
        off = len(self.reasons)
        for r in other.reasons:
            using = tuple(u + off if isinstance(u, int) else u for u in r.using)
            self.reasons.append(Reason(r.claim, r.rule, using))
        for t in other.traces:
            if all(t is not mine for mine in self.traces):
                self.traces.append(t)
        for bucket, items in ((self.certificates, other.certificates), (self.assumptions, other.assumptions)):
            bucket.extend(x for x in items if x not in bucket)
        return len(self.reasons)

    def finish(self, outcome: Outcome, claim: str, rule: str, *using) -> StabilityVerdict:
        self.outcome = outcome
        self.step(claim, rule, *using)
        return self

    @property
    def dependencies(self) -> list[str]:
        return [f"trace {t.script}" for t in self.traces] + [f"certificate {c}" for c in self.certificates]

    def log(self) -> str:
        lines = []
        for i, r in enumerate(self.reasons, start=1):
            deps = ", ".join(f"STEP {u}" if isinstance(u, int) else str(u) for u in r.using) or "-"
            lines.append(f"STEP {i}: {r.claim} BY {r.rule} USING {deps}")
        return "\n".join(lines) + ("\n" if lines else "")

    def render(self) -> str:
        head = [f"{self.subject}: {self.outcome}"]
        head += [f"assumption: {a}" for a in self.assumptions]
        return "\n".join(head) + "\n" + self.log()


# ---------------------------------------------------------------- profiles

# largest dimension of a coindex-3 Fano manifold of each genus (Mukai)
MAX_DIM = {6: 6, 7: 10, 8: 8, 9: 6, 10: 5, 12: 3}


@dataclass(frozen=True)
class FanoProfile:
    n: int
    r: int
    degree: int | None = None
    genus: int | None = None
    assume_es: bool = False
    b2_is_1: bool = True

    def __post_init__(self) -> None:
        n, r, g = self.n, self.r, self.genus
        if n < 1:
            raise InvalidProfile(f"dimension {n} must be positive")
        if not 1 <= r <= n + 1:
            raise InvalidProfile(f"index {r} outside 1..{n + 1}")
        if self.degree is not None and self.degree < 1:
            raise InvalidProfile("degree must be positive")
        if g is None and self.degree is not None and r == n - 2:
            if self.degree % 2:
                raise InvalidProfile(f"coindex 3 needs an even degree, got {self.degree}")
            object.__setattr__(self, "genus", self.degree // 2 + 1)
            g = self.genus
        if g is None:
            return
        if r != n - 2:
            raise InvalidProfile(f"genus is defined for index n-2 = {n - 2}, not {r}")
        if g == 11 or g > 12 or g < 2:
            raise InvalidProfile(f"genus {g} does not occur (g <= 12, g != 11)")
        if g == 12 and n != 3:
            raise InvalidProfile("genus 12 occurs only in dimension 3")
        if n > MAX_DIM.get(g, n):
            raise InvalidProfile(f"no coindex-3 Fano {n}-fold of genus {g} exists (dimension <= {MAX_DIM[g]})")
        if self.degree is None:
            object.__setattr__(self, "degree", 2 * g - 2)
        elif self.degree != 2 * g - 2:
            raise InvalidProfile(f"degree {self.degree} disagrees with genus {g} (expected {2 * g - 2})")

    @property
    def label(self) -> str:
        s = f"n={self.n} r={self.r}"
        return s + (f" g={self.genus}" if self.genus is not None else "")


@dataclass(frozen=True)
class SubsheafProfile:
    m: int
    k: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"rank {self.m} must be positive")


def slope(k: int, m: int) -> Fraction:
    if m < 1:
        raise ValueError(f"rank {m} must be positive")
    return Fraction(k, m)


# ---------------------------------------------------------------- threshold test

Oracle = Callable[[int, int], "int | None"]


def _oracle_value(v) -> int | None:
    return getattr(v, "value", v)


def h0_threshold_stability(oracle: Oracle, n: int, r: int, semistable: bool = False) -> StabilityVerdict:
    """Cotangent (and tangent) stability from vanishing of twisted forms.

    A rank-q subsheaf with determinant ``O(-t)`` is a section of
    ``Omega^q(t)``; it destabilizes when ``-t >= -q r / n`` (``>`` for the
    semistable variant).  Negative twists vanish by Kodaira-Nakano, so only
    ``0 <= t <= floor(q r / n)`` reach the oracle.
    """
    v = StabilityVerdict(f"threshold test n={n} r={r}")
    if r >= n:
        return v.finish(Outcome.NOT_APPLICABLE, f"index {r} >= n: projective space or quadric", "index-bound")
    if not 1 <= r or n < 2:
        return v.finish(Outcome.NOT_APPLICABLE, "needs 1 <= r <= n - 1", "index-bound")
    kn = v.step(f"H0(Omega^q(t)) = 0 for t < 0, q < {n}", "kodaira-nakano")
    cells = []
    for q in range(1, n):
        bound = Fraction(q * r, n)
        top = floor(bound) if not semistable else ceil(bound) - 1
        for t in range(0, top + 1):
            got = _oracle_value(oracle(q, t))
            cell = f"H0(Omega^{q}({t}))"
            if got is None:
                return v.finish(Outcome.UNKNOWN, f"{cell} is not known to vanish", "threshold-binding-cell", kn)
            if got != 0:
                return v.finish(Outcome.UNKNOWN, f"{cell} = {got} does not vanish; the test is inconclusive", "threshold-binding-cell", kn)
            cells.append(v.step(f"{cell} = 0 (binding, t <= {bound})", "oracle"))
    outcome = Outcome.SEMISTABLE if semistable else Outcome.STABLE
    word = "semistable" if semistable else "stable"
    return v.finish(outcome, f"Omega_X and T_X are {word}", "threshold-test", kn, *cells)


# ---------------------------------------------------------------- chase sources


class MaruyamaSource:
    """``H0(Y, Omega^q(t)) = 0`` for ``t < q s / dim Y`` when ``Omega_Y`` is
    semistable: wedge powers of a semistable bundle stay semistable."""

    def __init__(self, sid: str, dim: int, s: int, why: str):
        self.sid, self.dimension, self.s = sid, dim, s
        self.name = f"semistable forms on {sid} ({why})"

    def cell(self, space: Space, p: int, q: int, t: int):
        if space.id != self.sid or p != 0 or not 0 <= q <= self.dimension:
            return None
        if Fraction(t) < Fraction(q * self.s, self.dimension):
            return 0, f"t = {t} < {q}*{self.s}/{self.dimension}"
        return None

    def betti(self, space: Space, i: int):
        return None


def special_value(n: int, p: int, q: int, t: int) -> int | None:
    """Cell value forced by special cohomology of an ``n``-fold, or by
    Kodaira-Nakano; ``None`` where neither decides."""
    if not (0 <= p <= n and 0 <= q <= n):
        return 0
    if (t > 0 and p + q > n) or (t < 0 and p + q < n):
        return 0
    if 0 < p < n and p + q != n and (t != 0 or p != q):
        return 0
    if t == 0 and p == q and 2 * p != n:
        return 1
    return None


class SpecialSource:
    """Cells of spaces known to have special cohomology."""

    def __init__(self, spaces: Mapping[str, tuple[int, str]]):
        self.spaces = dict(spaces)
        self.name = "special cohomology"

    def cell(self, space: Space, p: int, q: int, t: int):
        if space.id not in self.spaces:
            return None
        dim, why = self.spaces[space.id]
        v = special_value(dim, p, q, t)
        return None if v is None else (v, why)

    def betti(self, space: Space, i: int):
        return None


class CertificateSource:
    """Cells read from special-cohomology certificates."""

    def __init__(self, certs: Mapping[str, SpecialCohomologyCertificate]):
        self.certs = dict(certs)
        self.name = "certificate"

    def cell(self, space: Space, p: int, q: int, t: int):
        cert = self.certs.get(space.id)
        if cert is None:
            return None
        try:
            v, ref = cert.lookup(p, q, t)
        except (FootprintError, ValueError):
            return None
        return v, f"{cert.space.id} {ref}"

    def betti(self, space: Space, i: int):
        return None


def _run_chase(v: StabilityVerdict, name: str, text: str, sources: list) -> int | None:
    """Replay a generated chase, check its trace and log it; ``None`` when
    it does not go through (the verdict then names the gap)."""
    try:
        result = replay(parse_script(text, name), sources)
    except ChaseContradiction as exc:
        v.step(f"{name}: sources contradict: {exc}", "chase")
        return None
    if not result.proved:
        gaps = result.missing + result.failures + result.open_goals
        v.step(f"{name} is stuck: " + "; ".join(gaps), "chase")
        return None
    report = check_trace(result.trace, sources)
    if not report.ok:
        v.step(f"{name} fails the trace checker: {report.errors[0]}", "trace-checker")
        return None
    v.traces.append(result.trace)
    goals = ", ".join(str(g) for g in result.trace.goals)
    return v.step(goals, "chase", f"trace {name}")


# ---------------------------------------------------------------- hypersurfaces


def _hypersurface_script(n: int, d: int, q: int, ts: Iterable[int], y_flags: str) -> str:
    lines = [f"space Y abstract {n + 1} {y_flags}", f"section X in Y degree {d}"]
    for t in ts:
        lines += [
            f"goal H0(Omega(X,{q},{t})) = 0",
            f"use ses conormal Omega(X,{q - 1},{t - d}) OmegaR(Y|X,{q},{t}) Omega(X,{q},{t})",
            f"use ses restrict Omega(Y,{q},{t - d}) Omega(Y,{q},{t}) OmegaR(Y|X,{q},{t})",
            f"use fact H0(Omega(Y,{q},{t})) = 0",
            f"use fact H1(Omega(Y,{q},{t - d})) = {special_value(n + 1, 1, q, t - d) or 0}",
            f"use fact H1(Omega(X,{q - 1},{t - d})) = {special_value(n, 1, q - 1, t - d) or 0}",
        ]
        if t == d and q == 1:
            # the unit class cups onto the hyperplane class
            lines += [f"use fact H0(Omega(Y,1,{d})) = 0", "use cupping special-cupping Y X 0 0"]
        if t == d and q == 2:
            lines += ["use cupping lefschetz Y X 1 1", "use cupping hard-lefschetz Y X 1 1"]
    return "\n".join(lines) + "\n"


def hypersurface_stability(
    n: int,
    s: int,
    d: int,
    cert_Y: SpecialCohomologyCertificate | None = None,
    chase: bool = True,
    base: str = "Omega_Y semistable",
) -> StabilityVerdict:
    """Stability of ``Omega_X`` for a smooth ``X`` in ``|O_Y(d)|``, where ``Y``
    has special cohomology, Picard group Z, index ``s`` and semistable
    cotangent bundle.  ``X`` has index ``s - d``."""
    v = StabilityVerdict(f"hypersurface n={n} s={s} d={d}")
    if n < 3:
        return v.finish(Outcome.NOT_APPLICABLE, f"dim X = {n} < 3", "guard")
    if d < 1:
        return v.finish(Outcome.NOT_APPLICABLE, "degree must be positive", "guard")
    if s <= d:
        kn = v.step(f"K_X = O({d - s}) is nef: H0(Omega^q(t)) = 0 for t < 0 and for t = 0", "kodaira-nakano")
        return v.finish(Outcome.STABLE, "Omega_X is stable", "kodaira-nakano-branch", kn)
    if s > n + 2:
        return v.finish(Outcome.NOT_APPLICABLE, f"index {s} of Y exceeds dim Y + 1 = {n + 2}", "guard")
    if (s, d) == (n + 2, 1):
        return v.finish(Outcome.NOT_APPLICABLE, "hyperplane section of P^(n+1)", "guard")
    if (s, d) == (n + 1, 1):
        return v.finish(Outcome.NOT_APPLICABLE, "hyperplane section of the quadric Q^(n+1)", "guard")
    base_step = v.step(base, "hypothesis")
    r = s - d
    arith = []
    chase_cells: dict[int, list[int]] = {}
    for q in range(1, n):
        lhs, rhs = Fraction(q * s, n + 1), Fraction(q * r, n)
        if not lhs > rhs:
            return v.finish(Outcome.UNKNOWN, f"q={q}: {lhs} <= {rhs}", "threshold-arithmetic")
        arith.append(v.step(f"q={q}: H0(Omega^{q}_Y(t)) = 0 for t < {lhs}; targets t <= {rhs}", "maruyama", base_step))
        ts = [t for t in (0, d) if t <= floor(rhs)]
        if ts:
            chase_cells[q] = ts
    ap = v.step("H0(Omega^q_X(t)) = 0 for 0 < t <= q(s-d)/n, t != d: neighbours vanish by special (a)", "special-cohomology", *arith)
    done = [ap]
    if chase:
        sources: list = [MaruyamaSource("Y", n + 1, s, base)]
        if cert_Y is not None:
            cert_X = propagate_section(cert_Y, d)
            sources.append(CertificateSource({"Y": cert_Y, "X": cert_X}))
            v.certificates += [cert_Y.space.id, cert_X.space.id]
        else:
            sources.append(SpecialSource({"Y": (n + 1, "special cohomology of Y"), "X": (n, "special cohomology of X")}))
        for q, ts in chase_cells.items():
            got = _run_chase(v, f"hypersurface-q{q}", _hypersurface_script(n, d, q, ts, "special picard-one"), sources)
            if got is None:
                return v.finish(Outcome.UNKNOWN, f"boundary cells for q={q} not discharged", "chase")
            done.append(got)
    return v.finish(Outcome.STABLE, f"Omega_X is stable (index {r}), hence so is T_X", "threshold-test", *done)


# ---------------------------------------------------------------- cyclic covers


def _cyclic_script(n: int, k: int, d: int, q: int, ts: Iterable[int]) -> str:
    lines = [f"space Y abstract {n} special picard-one", f"cover X over Y k {k} d {d}"]
    kd = k * d
    for t in ts:
        lines += [
            f"goal H0(Omega(X,{q},{t})) = 0",
            f"use ses cover-split CoverSub(X,{q},{t}) Push(X,{q},{t}) CoverQuot(X,{q},{t})",
        ]
        lines += [f"use fact H0(Omega(Y,{q},{t - j * d})) = 0" for j in range(k)]
        lines += [f"use fact H0(Omega(Y,{q - 1},{t - j * d})) = 0" for j in range(1, k + 1)]
        lines += [
            f"use ses cover-conormal Omega(X,{q - 1},{t - kd}) Push(X,{q},{t}) Omega(X,{q},{t})",
            f"use fact H1(Omega(X,{q - 1},{t - kd})) = {special_value(n, 1, q - 1, t - kd) or 0}",
        ]
        if t == kd and q == 2:
            lines.append("use cupping cover-cupping X 1 2")
    return "\n".join(lines) + "\n"


def cyclic_stability(
    dim_y: int,
    s: int,
    k: int,
    d: int,
    cert_Y: SpecialCohomologyCertificate | None = None,
    chase: bool = True,
    base: str = "Omega_Y semistable",
) -> StabilityVerdict:
    """Stability of ``Omega_X`` for a ``k``-cyclic cover ``X -> Y`` branched
    along a member of ``|O(kd)|``; ``X`` has index ``s - (k-1)d``."""
    n = dim_y
    v = StabilityVerdict(f"cyclic cover dimY={n} s={s} k={k} d={d}")
    if k < 2:
        return v.finish(Outcome.NOT_APPLICABLE, "a cyclic cover needs k >= 2", "guard")
    if n < 3:
        return v.finish(Outcome.NOT_APPLICABLE, f"dim Y = {n} < 3", "guard")
    if not (n + 1 >= s >= (k - 1) * d > 0):
        return v.finish(Outcome.NOT_APPLICABLE, f"needs dim Y + 1 >= s >= (k-1)d > 0, got s={s}, (k-1)d={(k - 1) * d}", "guard")
    if (s, k, d) == (n + 1, 2, 1):
        return v.finish(Outcome.NOT_APPLICABLE, "double cover of P^n branched in a quadric: X is a quadric", "guard")
    base_step = v.step(base, "hypothesis")
    r = s - (k - 1) * d
    kd = k * d
    arith = []
    chase_cells: dict[int, list[int]] = {}
    for q in range(1, n):
        target = Fraction(q * r, n)
        bound = min(Fraction(q * s, n), Fraction((q - 1) * s, n) + d)
        if not target < bound:
            return v.finish(Outcome.UNKNOWN, f"q={q}: {target} >= {bound}", "threshold-arithmetic")
        arith.append(v.step(f"q={q}: pushed-forward forms vanish for t < {bound}; targets t <= {target}", "maruyama", base_step))
        ts = [t for t in (0, kd) if t <= floor(target)]
        if ts:
            chase_cells[q] = ts
    ap = v.step("H0(Omega^q_X(t)) = 0 for 0 < t <= q(s-(k-1)d)/n, t != kd: H1 term vanishes by special (a)", "special-cohomology", *arith)
    done = [ap]
    if chase:
        sources: list = [MaruyamaSource("Y", n, s, base)]
        if cert_Y is not None:
            cert_X = propagate_cyclic(cert_Y, k, d)
            sources.append(CertificateSource({"Y": cert_Y, "X": cert_X}))
            v.certificates += [cert_Y.space.id, cert_X.space.id]
        else:
            sources.append(SpecialSource({"Y": (n, "special cohomology of Y"), "X": (n, "special cohomology of X")}))
        for q, ts in chase_cells.items():
            got = _run_chase(v, f"cyclic-q{q}", _cyclic_script(n, k, d, q, ts), sources)
            if got is None:
                return v.finish(Outcome.UNKNOWN, f"boundary cells for q={q} not discharged", "chase")
            done.append(got)
    return v.finish(Outcome.STABLE, f"Omega_X is stable (index {r}), hence so is T_X", "threshold-test", *done)


# ---------------------------------------------------------------- Reid, Wahl, slicing


@dataclass(frozen=True)
class Constraint:
    holds: bool
    rule: str
    detail: str


def reid_bound(index: int, sub: SubsheafProfile, dim: int | None = None) -> Constraint:
    """A proper reflexive subsheaf of ``T_X`` (Picard rank one) has
    ``c1 < c1(X)``; a subsheaf of full rank has ``c1 <= c1(X)``."""
    proper = dim is None or sub.m < dim
    ok = sub.k < index if proper else sub.k <= index
    op = "<" if proper else "<="
    return Constraint(ok, "reid", f"c1 = {sub.k} {op} index {index} {'holds' if ok else 'violated'}")


def wahl_bound(sub: SubsheafProfile, bound: int = 0) -> Constraint:
    """An invertible subsheaf of the tangent bundle of a manifold other than
    projective space is not ample: ``c1 <= 0``."""
    if sub.m != 1:
        raise ValueError("the Wahl bound concerns rank-one subsheaves")
    ok = sub.k <= bound
    return Constraint(ok, "wahl", f"c1 = {sub.k} <= {bound} {'holds' if ok else 'violated'}")


def reid_verdict(profile: FanoProfile) -> StabilityVerdict:
    v = StabilityVerdict(f"Fano {profile.label}")
    if not profile.b2_is_1:
        return v.finish(Outcome.NOT_APPLICABLE, "needs b2 = 1", "guard")
    if profile.r != 1:
        return v.finish(Outcome.NOT_APPLICABLE, f"index {profile.r} != 1", "guard")
    a = v.step("every proper reflexive F in T_X has c1(F) < c1(X) = 1, so c1(F) <= 0", "reid")
    return v.finish(Outcome.STABLE, "mu(F) <= 0 < 1/n = mu(T_X): T_X is stable", "slope-comparison", a)


@dataclass
class SliceNode:
    path: str  # one letter per slicing step: z (alpha = 0) or n (alpha != 0)
    step: int
    dim: int
    index: int
    rank: int
    c1: int  # lower bound for c1 of the sheaf on this slice
    status: str = "open"  # contradiction | survivor | branch
    rule: str = ""
    children: list[int] = field(default_factory=list)


@dataclass
class SlicingResult:
    n: int
    r: int
    m: int
    k: int
    applicable: bool
    nodes: list[SliceNode] = field(default_factory=list)
    note: str = ""

    @property
    def survivors(self) -> list[SliceNode]:
        return [x for x in self.nodes if x.status == "survivor"]

    @property
    def refuted(self) -> bool:
        return self.applicable and not self.survivors

    def node_bound(self) -> int:
        return 2 ** (self.r - 1) * (self.m + 1)

    def structure_ok(self) -> bool:
        """Exhaustiveness: every branching node has both alpha branches,
        every other node is decided, and the tree respects its size bound."""
        if not self.nodes or len(self.nodes) > self.node_bound():
            return False
        for x in self.nodes:
            if x.status == "branch":
                kids = [self.nodes[i] for i in x.children]
                if sorted(c.path[-1] for c in kids) != ["n", "z"]:
                    return False
            elif x.status not in ("contradiction", "survivor") or x.children:
                return False
        return True

    def conclusion(self) -> str:
        if not self.applicable:
            return f"not applicable: {self.note}"
        if self.refuted:
            return f"mu(F) >= 1 is impossible for rank {self.m}: c1(F) <= {self.m - 1}"
        return "surviving branches: " + ", ".join(x.path or "root" for x in self.survivors)


def slicing_search(n: int, r: int, m: int, k: int, assume_es: bool = True, wahl: int = 0) -> SlicingResult:
    """Exhaustive branch tree for slicing a rank-``m`` subsheaf with ``c1 = k``
    of ``T_X`` down a chain of smooth hyperplane sections.

    At each slice the induced map to the normal bundle is zero (rank and c1
    kept) or not (both drop by one at worst: the image has ``c1 <= 1`` and a
    smaller drop only strengthens every later bound).  Nodes are closed by
    Reid's bound, Wahl's bound at rank one, and stability of the tangent
    bundle of the index-one end slice.
    """
    res = SlicingResult(n, r, m, k, applicable=False)
    if not assume_es:
        res.note = "needs the existence of smooth slices (ES)"
        return res
    if not (1 <= r <= n - 1) or not (1 <= m <= n - 1):
        res.note = f"needs 1 <= r <= n-1 and 1 <= m <= n-1 (n={n}, r={r}, m={m})"
        return res
    if k < m:
        res.note = f"hypothesis mu(F) >= 1 fails: k={k} < m={m}"
        return res
    res.applicable = True
    queue = [SliceNode("", 0, n, r, m, k)]
    while queue:
        x = queue.pop(0)
        res.nodes.append(x)
        sub = SubsheafProfile(x.rank, x.c1)
        reid = reid_bound(x.index, sub, x.dim)
        if not reid.holds:
            x.status, x.rule = "contradiction", reid.detail
            continue
        if x.rank == 1:
            w = wahl_bound(sub, wahl)
            x.status, x.rule = ("survivor" if w.holds else "contradiction"), w.detail
            continue
        if x.step == r - 1:
            mu, top = slope(x.c1, x.rank), Fraction(1, x.dim)
            ok = mu < top
            x.rule = f"end slice of index 1: mu = {mu} {'<' if ok else '>='} 1/{x.dim}"
            x.status = "survivor" if ok else "contradiction"
            continue
        x.status = "branch"
        queue.append(SliceNode(x.path + "z", x.step + 1, x.dim - 1, x.index - 1, x.rank, x.c1))
        queue.append(SliceNode(x.path + "n", x.step + 1, x.dim - 1, x.index - 1, x.rank - 1, x.c1 - 1))
    # nodes are numbered breadth first; link children by path
    by_path = {x.path: i for i, x in enumerate(res.nodes)}
    for x in res.nodes:
        if x.status == "branch":
            x.children = [by_path[x.path + c] for c in "zn"]
    return res


def _slicing_steps(v: StabilityVerdict, n: int, r: int, m: int, *using) -> int | None:
    res = slicing_search(n, r, m, m)
    if not (res.refuted and res.structure_ok()):
        v.step(f"rank {m}: {res.conclusion()}", "slicing", *using)
        return None
    return v.step(
        f"rank {m}: {len(res.nodes)}-node slicing tree closes, so c1(F) <= {m - 1} (larger c1 only closes sooner)",
        "slicing",
        *using,
    )


def del_pezzo_verdict(profile: FanoProfile) -> StabilityVerdict:
    n = profile.n
    v = StabilityVerdict(f"Fano {profile.label}")
    if profile.r != n - 1 or n < 2:
        return v.finish(Outcome.NOT_APPLICABLE, "not a del Pezzo manifold", "guard")
    if not profile.b2_is_1:
        return v.finish(Outcome.NOT_APPLICABLE, "needs b2 = 1", "guard")
    v.assumptions.append("smooth slices exist for index n-1 (Fujita)")
    es = v.step("smooth hyperplane slices exist down to index 1", "fujita")
    mu_t = slope(n - 1, n)
    steps = []
    for m in range(1, n):
        s = _slicing_steps(v, n, n - 1, m, es)
        if s is None:
            return v.finish(Outcome.UNKNOWN, f"slicing tree for rank {m} does not close", "slicing", es)
        bound = slope(m - 1, m)
        if not bound < mu_t:
            return v.finish(Outcome.UNKNOWN, f"rank {m}: {bound} >= {mu_t}", "slope-comparison", s)
        steps.append(v.step(f"rank {m}: mu(F) <= {bound} < {mu_t} = mu(T_X)", "slope-comparison", s))
    return v.finish(Outcome.STABLE, "T_X is stable", "slope-comparison", *steps)


# ---------------------------------------------------------------- coindex three


def obligation_cell(n: int) -> str:
    """The twisted-form group an equal-slope subsheaf of rank n/2 would
    have a section in (its determinant sits in Lambda^(n/2) T_X)."""
    m = n // 2
    return f"H0(Omega^{m}_X({m - 1}))"


def prop24_analyze(
    n: int,
    section_stable: bool | None,
    h0_vanishing: bool | None = None,
    section_ref: tuple = (),
    fact_ref: tuple = (),
) -> StabilityVerdict:
    """Which ranks can carry a subsheaf of slope ``>= mu(T_X)`` on a coindex-3
    ``n``-fold whose hyperplane section has stable tangent bundle."""
    v = StabilityVerdict(f"coindex 3, n={n}")
    if n < 4:
        return v.finish(Outcome.NOT_APPLICABLE, "needs n >= 4", "guard")
    if section_stable is None:
        return v.finish(Outcome.UNKNOWN, "stability of T_H for a smooth hyperplane section H is unknown", "missing-resource")
    if not section_stable:
        return v.finish(Outcome.UNKNOWN, "T_H is not known to be stable", "missing-resource")
    sec = v.step("T_H stable for a smooth H in |H|", "hypothesis", *section_ref)
    mu_t, mu_h = slope(n - 2, n), slope(n - 3, n - 1)
    survivors = []
    for m in range(1, n):
        cap = _slicing_steps(v, n, n - 2, m, sec)
        if cap is None:
            return v.finish(Outcome.UNKNOWN, f"slicing for rank {m} does not close", "slicing")
        # the only candidate is c1 = m - 1
        if slope(m - 1, m) < mu_t:
            v.step(f"rank {m}: mu(F) <= {slope(m - 1, m)} < {mu_t}", "slope-comparison", cap)
            continue
        # alpha_1 = 0 puts F inside T_H, of smaller slope; otherwise the kernel
        # has slope >= (m-2)/(m-1) and must stay below mu(T_H)
        if m >= 2 and not slope(m - 2, m - 1) < mu_h:
            v.step(f"rank {m}: kernel slope {slope(m - 2, m - 1)} >= {mu_h} = mu(T_H)", "equal-slope-analysis", cap, sec)
            continue
        survivors.append(m)
        v.step(f"rank {m}, c1 = {m - 1}: slope {slope(m - 1, m)} = mu(T_X) not excluded", "equal-slope-analysis", cap, sec)
    if not survivors:
        return v.finish(Outcome.STABLE, "no subsheaf reaches mu(T_X): T_X is stable", "equal-slope-analysis", sec)
    assert survivors == [n // 2] and n % 2 == 0, survivors
    semi = v.step(f"T_X is semistable; equality needs rank {n // 2} with c1 = {n // 2 - 1}", "equal-slope-analysis", sec)
    cell = obligation_cell(n)
    if h0_vanishing:
        f = v.step(f"{cell} = 0", "vanishing", *fact_ref)
        return v.finish(Outcome.STABLE, f"an equal-slope subsheaf would give a section of {cell}: T_X is stable", "determinant-section", semi, f)
    return v.finish(Outcome.SEMISTABLE, f"open obligation: {cell} = 0", "equal-slope-analysis", semi)


def lemma26_criterion(n: int, h0_tangent: Mapping[int, "int | None"], refs: Mapping[int, tuple] | None = None) -> StabilityVerdict:
    """Stability from ``H0(X_m, T_{X_m}) = 0`` on general linear sections of
    dimension ``3 <= m <= n/2 + 1``."""
    v = StabilityVerdict(f"coindex 3, n={n}, section criterion")
    refs = refs or {}
    needed = list(range(3, n // 2 + 2))
    got = []
    for m in needed:
        val = h0_tangent.get(m)
        if val is None:
            return v.finish(Outcome.UNKNOWN, f"H0(X_{m}, T) is not known to vanish (m={m})", "missing-resource")
        if val != 0:
            return v.finish(Outcome.UNKNOWN, f"H0(X_{m}, T) = {val} does not vanish (m={m})", "section-criterion")
        got.append(v.step(f"H0(X_{m}, T_X{m}) = 0", "vanishing", *refs.get(m, ())))
    return v.finish(Outcome.STABLE, "T_X is stable", "section-criterion", *got)


# chases that discharge the equal-slope obligation, per (n, genus)
OBLIGATIONS: dict[tuple[int, int], list[tuple[str, str]]] = {
    (4, 6): [("g6_section", "H0(Omega(X,2,1)) = 0"), ("g6_cover", "H0(Omega(X4,2,1)) = 0")],
    (6, 6): [("g6_cover", "H0(Omega(X6,3,2)) = 0")],
    (6, 7): [("spinor_sections", "H0(Omega(X6,3,2)) = 0")],
    (8, 7): [("spinor_8fold", "H0(Omega(X,4,3)) = 0")],
    (6, 8): [("g8_section", "H0(Omega(X,3,2)) = 0")],
}

FAMILY = {
    (4, 6): "(a) (2,1) complete intersection in G(1,4); (b) double cover of a 4-dimensional linear section of G(1,4)",
    (6, 6): "double cover of G(1,4) branched in a quadric section",
    (6, 7): "6-dimensional linear section of the spinor 10-fold",
    (8, 7): "8-dimensional linear section of the spinor 10-fold",
    (6, 8): "6-dimensional linear section of G(1,5)",
}

HOMOGENEOUS = {(10, 7): "spinor 10-fold S10", (8, 8): "Grassmannian G(1,5)", (6, 9): "Lagrangian Grassmannian LG(2,5)"}


def _obligation(v: StabilityVerdict, n: int, g: int, res: Resources) -> int | None:
    deps = []
    for name, goal in OBLIGATIONS[(n, g)]:
        try:
            result, report = res.chase(name)
        except FileNotFoundError:
            v.step(f"chase script {name} is not available", "missing-resource")
            return None
        if not result.proved:
            gaps = [f"missing {x}" for x in result.missing] + list(result.failures)
            gaps += [f"open {x}" for x in result.open_goals]
            v.step(f"{name} is stuck: " + "; ".join(dict.fromkeys(map(str, gaps))), "missing-resource")
            return None
        if report is None or not report.ok:
            v.step(f"{name} fails the trace checker", "trace-checker")
            return None
        if goal not in [str(x) for x in result.trace.goals]:
            v.step(f"{name} does not conclude {goal}", "missing-resource")
            return None
        if all(result.trace is not t for t in v.traces):
            v.traces.append(result.trace)
        deps.append(v.step(goal, "chase", f"trace {name}"))
    return v.step(f"{obligation_cell(n)} = 0 on every {FAMILY[(n, g)]}", "chase", *deps)


def coindex3_classify(profile: FanoProfile, resources: Resources | None = None) -> StabilityVerdict:
    """Route a coindex-3 profile (index n-2, b2 = 1) to the argument that
    settles its genus."""
    if profile.r != profile.n - 2:
        raise InvalidProfile(f"index {profile.r} is not n-2")
    if profile.genus is None:
        raise InvalidProfile("the classifier needs a genus")
    return _classify(profile.n, profile.genus, profile.assume_es, profile.b2_is_1, resources or _default_resources())


@lru_cache(maxsize=1)
def _default_resources() -> Resources:
    return Resources()


def _classify(n: int, g: int, es: bool, b2: bool, res: Resources) -> StabilityVerdict:
    v = StabilityVerdict(f"Fano n={n} r={n - 2} g={g}")
    if not b2:
        return v.finish(Outcome.NOT_APPLICABLE, "needs b2 = 1", "guard")
    if n == 3:
        last = v.absorb(reid_verdict(FanoProfile(3, 1)))
        return v.finish(Outcome.STABLE, "T_X is stable", "reid", last)
    if n == 4:
        v.assumptions.append("smooth slices exist for 4-folds of index 2 (Wilson)")
        es_step = v.step("smooth hyperplane slices exist", "wilson")
    elif es:
        v.assumptions.append("(ES): smooth slices exist down to index 1")
        es_step = v.step("smooth hyperplane slices exist", "assumption-es")
    else:
        return v.finish(Outcome.UNKNOWN, "the classification route needs the (ES) assumption for n >= 5", "missing-resource")
    route = v.step(f"genus {g} Fano {n}-folds of coindex 3 by the Mukai classification", "mukai-classification", es_step)
    if g <= 5:
        return _complete_intersection_route(v, n, g, route)
    if (n, g) in HOMOGENEOUS:
        return v.finish(Outcome.STABLE, f"X is the {HOMOGENEOUS[(n, g)]}, rational homogeneous: T_X is stable", "homogeneous", route)
    if n == 4 and g >= 7:
        pr = v.step("H0(Y, T_Y) = 0 for Fano 3-folds of genus 7..10", "prokhorov")
        sub = lemma26_criterion(4, {3: 0}, {3: (f"STEP {pr}",)})
        last = v.absorb(sub)
        return v.finish(sub.outcome, "T_X is stable" if sub.outcome == Outcome.STABLE else "criterion incomplete", "section-criterion", route, last)
    # odd n: the equal-slope case cannot occur; even n: discharge the obligation
    if n == 4:
        # the slice is a Fano 3-fold of index 1
        below = reid_verdict(FanoProfile(3, 1))
    else:
        below = _classify(n - 1, g, es, b2, res)
    sec = v.absorb(below)
    fact: tuple = ()
    h0 = None
    if n % 2 == 0:
        if (n, g) not in OBLIGATIONS:
            return v.finish(Outcome.UNKNOWN, f"no chase discharges {obligation_cell(n)} for genus {g}", "missing-resource", route)
        if n == 6 and g == 6:
            v.assumptions.append("the double cover of G(1,4) is cyclic")
            v.step("the 2:1 cover of G(1,4) is cyclic", "assumption-cyclic-cover")
        got = _obligation(v, n, g, res)
        if got is None:
            return v.finish(Outcome.UNKNOWN, f"{obligation_cell(n)} = 0 not established", "missing-resource", route)
        fact, h0 = (f"STEP {got}",), True
    sub = prop24_analyze(n, below.outcome == Outcome.STABLE, h0, (f"STEP {sec}",), fact)
    last = v.absorb(sub)
    return v.finish(sub.outcome, f"T_X is {str(sub.outcome).lower()}", "equal-slope-analysis", route, last)


def _complete_intersection_route(v: StabilityVerdict, n: int, g: int, route: int) -> StabilityVerdict:
    reach = n + 4
    subs: list[tuple[str, StabilityVerdict]] = []
    homog = "Omega semistable on a rational homogeneous manifold"
    if g == 2:
        cert = base_certificate(projective_space(n), (-reach, reach))
        subs.append(("double cover of P^n branched in a sextic", cyclic_stability(n, n + 1, 2, 3, cert, base=homog)))
    elif g == 3:
        cert = base_certificate(projective_space(n + 1), (-reach, reach))
        subs.append(("quartic hypersurface in P^(n+1)", hypersurface_stability(n, n + 2, 4, cert, base=homog)))
        quad = certificate_chain(projective_space(n + 1), [("section", 2)], (-reach, reach))
        subs.append(("double cover of Q^n branched in a quartic section", cyclic_stability(n, n, 2, 2, quad, base=homog)))
    elif g == 4:
        quad = certificate_chain(projective_space(n + 2), [("section", 2)], (-reach, reach))
        subs.append(("cubic section of Q^(n+1)", hypersurface_stability(n, n + 1, 3, quad, base=homog)))
    else:
        q2 = certificate_chain(projective_space(n + 3), [("section", 2)], (-reach, reach))
        y = hypersurface_stability(n + 1, n + 2, 2, q2, base=homog)
        top = v.absorb(y)
        base_ok = y.outcome == Outcome.STABLE
        cert = propagate_section(q2, 2)
        why = f"Omega_Y stable (STEP {top})" if base_ok else "Omega_Y semistable"
        subs.append(("quadric section of a (2,2) complete intersection", hypersurface_stability(n, n, 2, cert, base=why)))
        if not base_ok:
            return v.finish(Outcome.UNKNOWN, "the (2,2) complete intersection is not known to be semistable", "missing-resource")
    done = []
    for what, sub in subs:
        last = v.absorb(sub)
        if sub.outcome != Outcome.STABLE:
            return v.finish(Outcome.UNKNOWN, f"{what}: {sub.outcome}", "complete-intersection-route", route, last)
        done.append(v.step(f"{what}: T_X stable", "complete-intersection-route", route, last))
    return v.finish(Outcome.STABLE, "T_X is stable", "complete-intersection-route", *done)


# ---------------------------------------------------------------- dispatcher


def fano_stability(profile: FanoProfile, resources: Resources | None = None) -> StabilityVerdict:
    """Verdict for the tangent bundle of a Fano manifold with the given profile;
    a coindex-3 profile without genus is checked for every genus."""
    n, r = profile.n, profile.r
    v = StabilityVerdict(f"Fano {profile.label}")
    if not profile.b2_is_1:
        return v.finish(Outcome.NOT_APPLICABLE, "needs b2 = 1", "guard")
    if r == n + 1:
        return v.finish(Outcome.STABLE, "X = P^n, rational homogeneous: T_X is stable", "homogeneous")
    if r == n:
        return v.finish(Outcome.STABLE, "X = Q^n, rational homogeneous: T_X is stable", "homogeneous")
    if r == 1:
        return reid_verdict(profile)
    if r == n - 1:
        return del_pezzo_verdict(profile)
    if r == n - 2:
        if profile.genus is not None:
            return coindex3_classify(profile, resources)
        genera = [g for g in range(2, 11) if n <= MAX_DIM.get(g, n)]
        worst = Outcome.STABLE
        steps = []
        for g in genera:
            sub = coindex3_classify(FanoProfile(n, r, genus=g, assume_es=profile.assume_es), resources)
            last = v.absorb(sub)
            steps.append(v.step(f"genus {g}: {sub.outcome}", "mukai-classification", last))
            if sub.outcome != Outcome.STABLE:
                worst = Outcome.UNKNOWN
        return v.finish(worst, f"all genera {genera[0]}..{genera[-1]}: T_X is {'stable' if worst == Outcome.STABLE else 'not settled'}", "mukai-classification", *steps)
    return v.finish(Outcome.NOT_APPLICABLE, f"index {r} <= n-3 is out of reach", "guard")
