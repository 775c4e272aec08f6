"""Independent validation of proof traces.

Nothing here calls into the saturation engine.  Long exact sequences are
rebuilt from the recorded short exact sequences, each step is re-derived
from the facts it cites, and every range condition of a morphism rule is
evaluated again from the space declarations.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

from .engine import SES, Betti, Bound, ChainProp, Dim, MapProp, Space, Step
from .expr import Group, Sheaf


class TraceError(ValueError):
    pass


@dataclass
class CheckReport:
    script: str
    steps: int
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def summary(self) -> str:
        if self.ok:
            return f"{self.script}: {self.steps} steps verified"
        return f"{self.script}: {len(self.errors)} invalid steps\n  " + "\n  ".join(self.errors)


def _forms(space: str, q: int, t: int, p: int) -> Group:
    return Group(Sheaf("Omega", space, q, t), p)


class _World:
    def __init__(self, spaces: dict[str, Space]):
        self.spaces = spaces

    def space(self, sid: str) -> Space:
        if sid not in self.spaces:
            raise TraceError(f"undeclared space {sid}")
        return self.spaces[sid]

    def dim_of(self, sh: Sheaf) -> int:
        return 0 if sh.kind == "Zero" else self.space(sh.space).dim

    def vanishes(self, sh: Sheaf) -> bool:
        if sh.kind == "Zero":
            return True
        n = self.space(sh.space).dim
        if sh.kind == "OmegaR":
            n = self.space(sh.ambient).dim
        elif sh.kind == "Push":
            n += 1
        lo = 1 if sh.kind == "CoverQuot" else 0
        return not lo <= sh.q <= n + lo

    def special(self, sid: str) -> bool:
        s = self.space(sid)
        if s.dim < 3:
            return False
        if s.kind == "projective" or s.special:
            return True
        return s.kind in ("section", "cover") and self.special(s.parent)

    def picard_one(self, sid: str) -> bool:
        s = self.space(sid)
        if s.kind in ("projective", "grassmannian") or s.picard_one:
            return True
        return s.kind == "section" and s.dim >= 3 and self.picard_one(s.parent)

    def parts(self, g: Group) -> list[Group] | None:
        sh = g.sheaf
        if sh.kind == "CoverSub":
            c = self.space(sh.space)
            return [_forms(c.parent, sh.q, sh.t - j * c.d, g.p) for j in range(c.k)]
        if sh.kind == "CoverQuot":
            c = self.space(sh.space)
            return [_forms(c.parent, sh.q - 1, sh.t - j * c.d, g.p) for j in range(1, c.k + 1)]
        return None

    def expected_ses(self, ses: SES) -> tuple[Sheaf, Sheaf, Sheaf]:
        """The unique admissible triple for a rule, keyed by the term that
        determines it."""
        a, c = ses.left, ses.right
        if ses.rule == "restrict":
            x = self.space(c.space)
            if c.kind != "OmegaR" or x.kind != "section" or x.parent != c.ambient:
                raise TraceError(f"bad restriction sequence {ses}")
            y = c.ambient
            return Sheaf("Omega", y, c.q, c.t - x.d), Sheaf("Omega", y, c.q, c.t), c
        if ses.rule == "conormal":
            x = self.space(a.space)
            if a.kind != "Omega" or x.kind != "section":
                raise TraceError(f"bad conormal sequence {ses}")
            q, t = a.q + 1, a.t + x.d
            return a, Sheaf("OmegaR", x.id, q, t, x.parent), Sheaf("Omega", x.id, q, t)
        if ses.rule == "cover-split":
            if a.kind != "CoverSub" or self.space(a.space).kind != "cover":
                raise TraceError(f"bad cover splitting {ses}")
            return a, Sheaf("Push", a.space, a.q, a.t), Sheaf("CoverQuot", a.space, a.q, a.t)
        if ses.rule == "cover-conormal":
            x = self.space(a.space)
            if a.kind != "Omega" or x.kind != "cover":
                raise TraceError(f"bad cover conormal sequence {ses}")
            q, t = a.q + 1, a.t + x.k * x.d
            return a, Sheaf("Push", x.id, q, t), Sheaf("Omega", x.id, q, t)
        raise TraceError(f"unknown sequence rule {ses.rule}")

    def long_sequence(self, ses: SES) -> list[Group | None]:
        """Cohomology of the three terms in order; ``None`` marks the zero
        groups before the first and after the last term."""
        terms = (ses.left, ses.middle, ses.right)
        top = max(self.dim_of(s) for s in terms)
        out: list[Group | None] = [None]
        for p in range(top + 1):
            out.extend(Group(s, p) for s in terms)
        out.append(None)
        return out


def _kn(n: int, p: int, q: int, t: int) -> bool:
    if t < 0:
        return p + q < n
    if t > 0:
        return p + q > n
    return False


class _Checker:
    def __init__(self, trace, sources: Sequence | None):
        self.trace = trace
        self.world = _World(trace.spaces)
        self.sources = sources
        self.les = []
        for ses in trace.sequences:
            want = self.world.expected_ses(ses)
            if (ses.left, ses.middle, ses.right) != want:
                raise TraceError(f"sequence {ses} does not match its rule")
            self.les.append(self.world.long_sequence(ses))
        self.known: dict = {}

    # facts established so far, looked up by value
    def _dim(self, g: Group | None) -> int | None:
        if g is None:
            return 0
        return self.known.get(("dim", g))

    def check(self) -> list[str]:
        errors = []
        for i, st in enumerate(self.trace.steps):
            try:
                if any(j >= i or j < 0 for j in st.premises):
                    raise TraceError("premise does not precede the step")
                prem = [self.trace.steps[j].fact for j in st.premises]
                self.validate(st, prem)
            except TraceError as exc:
                errors.append(f"[{i + 1}] {st.fact} by {st.rule}: {exc}")
            self.record(st.fact)
        facts = {s.fact for s in self.trace.steps}
        for g in self.trace.goals:
            if g not in facts:
                errors.append(f"goal {g} is not established")
        return errors

    def record(self, fact) -> None:
        if isinstance(fact, Dim):
            self.known[("dim", fact.group)] = fact.value

    # -------------------------------------------------------------- rules

    def validate(self, st: Step, prem: list) -> None:
        f, rule = st.fact, st.rule
        handler = getattr(self, "rule_" + rule.replace("-", "_"), None)
        if handler is None:
            raise TraceError("unknown rule")
        handler(f, prem, st)

    @staticmethod
    def _need(cond: bool, why: str) -> None:
        if not cond:
            raise TraceError(why)

    def rule_input(self, f, prem, st) -> None:
        self._need(not prem, "inputs have no premises")
        self._need(isinstance(f, (Dim, Betti)), "inputs are dimensions or Betti numbers")
        if isinstance(f, Dim):
            self._need(f.group.sheaf.kind == "Omega", "inputs are cells of twisted forms")
        if self.sources is None:
            return
        if isinstance(f, Betti):
            sp = self.world.space(f.space)
            got = [s.betti(sp, f.i) for s in self.sources]
        else:
            sh = f.group.sheaf
            sp = self.world.space(sh.space)
            got = [s.cell(sp, f.group.p, sh.q, sh.t) for s in self.sources]
        values = {g[0] for g in got if g is not None}
        self._need(bool(values), "no source provides this input")
        self._need(values == {f.value}, f"sources give {sorted(values)}")

    def rule_les_boundary(self, f, prem, st) -> None:
        self._need(isinstance(f, Dim) and f.value == 0 and f.group.sheaf.kind == "Zero", "not a boundary term")

    def rule_zero_sheaf(self, f, prem, st) -> None:
        self._need(isinstance(f, Dim) and f.value == 0 and self.world.vanishes(f.group.sheaf), "sheaf is not zero")

    def rule_degree_range(self, f, prem, st) -> None:
        ok = isinstance(f, Dim) and f.value == 0
        self._need(ok and not 0 <= f.group.p <= self.world.dim_of(f.group.sheaf), "degree within range")

    def rule_bound_zero(self, f, prem, st) -> None:
        self._need(isinstance(f, Dim) and f.value == 0 and prem == [Bound(f.group, 0)], "needs a zero bound")

    def rule_lefschetz_betti(self, f, prem, st) -> None:
        self._need(isinstance(f, Betti) and len(prem) == 1 and isinstance(prem[0], Betti), "shape")
        src = prem[0]
        child = self.world.space(f.space)
        self._need(child.kind == "section" and child.parent == src.space, "not a section")
        self._need(src.i == f.i and src.value == f.value and f.i < child.dim, "outside the Lefschetz range")

    def rule_kahler_class(self, f, prem, st) -> None:
        self._need(isinstance(f, Dim) and f.value == 1 and len(prem) == 1, "shape")
        g, b = f.group, prem[0]
        sh = g.sheaf
        ok = sh.kind == "Omega" and sh.t == 0 and g.p == sh.q
        self._need(ok and b == Betti(sh.space, 2 * g.p, 1), "needs b_2p = 1 for an (p,p) class")

    def rule_hodge_bound(self, f, prem, st) -> None:
        self._need(isinstance(f, Bound) and len(prem) == 1 and isinstance(prem[0], Betti), "shape")
        sh = f.group.sheaf
        b = prem[0]
        ok = sh.kind == "Omega" and sh.t == 0 and b.space == sh.space and b.i == f.group.p + sh.q
        self._need(ok and b.value == f.value, "Hodge number not bounded by that Betti number")

    def rule_direct_sum(self, f, prem, st) -> None:
        parts = self.world.parts(f.group) if isinstance(f, Dim) else None
        self._need(parts is not None, "not a split sheaf")
        self._need(len(prem) == len(parts) and all(isinstance(x, Dim) for x in prem), "shape")
        self._need([x.group for x in prem] == parts and sum(x.value for x in prem) == f.value, "summands do not add up")

    def rule_direct_summand(self, f, prem, st) -> None:
        self._need(isinstance(f, Dim) and f.value == 0 and len(prem) == 1, "shape")
        whole = prem[0]
        parts = self.world.parts(whole.group) or []
        self._need(whole.value == 0 and f.group in parts, "not a summand of a zero group")

    def _map(self, f, props=None) -> MapProp:
        self._need(isinstance(f, MapProp), "expected a map property")
        if props is not None:
            self._need(f.prop in props, f"property {f.prop} not produced by this rule")
        return f

    def rule_zero_source(self, f, prem, st) -> None:
        m = self._map(f, ("zero", "injective"))
        self._need(prem == [Dim(m.src, 0)], "source is not zero")

    def rule_zero_target(self, f, prem, st) -> None:
        m = self._map(f, ("zero", "surjective"))
        self._need(prem == [Dim(m.tgt, 0)], "target is not zero")

    def rule_zero_injective(self, f, prem, st) -> None:
        self._need(isinstance(f, Dim) and f.value == 0 and len(prem) == 2, "shape")
        a = f.group
        ok = {(p.prop, p.src) for p in prem if isinstance(p, MapProp)} == {("zero", a), ("injective", a)}
        self._need(ok and prem[0].tgt == prem[1].tgt, "needs a zero injective map out of the group")

    def rule_zero_surjective(self, f, prem, st) -> None:
        self._need(isinstance(f, Dim) and f.value == 0 and len(prem) == 2, "shape")
        b = f.group
        ok = {(p.prop, p.tgt) for p in prem if isinstance(p, MapProp)} == {("zero", b), ("surjective", b)}
        self._need(ok and prem[0].src == prem[1].src, "needs a zero surjective map onto the group")

    def rule_isomorphism(self, f, prem, st) -> None:
        self._need(isinstance(f, Dim) and len(prem) == 3, "shape")
        inj, surj, known = prem
        ok = isinstance(inj, MapProp) and isinstance(surj, MapProp) and isinstance(known, Dim)
        self._need(ok and inj.prop == "injective" and surj.prop == "surjective", "needs a bijection")
        self._need((inj.src, inj.tgt) == (surj.src, surj.tgt), "different maps")
        ends = {inj.src, inj.tgt}
        self._need(f.group in ends and known.group in ends and f.group != known.group, "not the two ends")
        self._need(f.value == known.value, "dimension not transported")

    def rule_dim_count(self, f, prem, st) -> None:
        self._need(len(prem) == 3, "shape")
        given, d0, d1 = prem
        self._need(isinstance(d0, Dim) and isinstance(d1, Dim) and d0.value == d1.value, "unequal dimensions")
        flip = {"injective": "surjective", "surjective": "injective"}
        if isinstance(f, MapProp):
            ok = isinstance(given, MapProp) and (given.src, given.tgt) == (f.src, f.tgt)
            ends = (f.src, f.tgt)
        else:
            ok = isinstance(f, ChainProp) and isinstance(given, ChainProp) and given.chain == f.chain
            ends = (f.chain[0], f.chain[-1]) if ok else ()
        self._need(ok and flip.get(given.prop) == f.prop, "property does not flip")
        self._need((d0.group, d1.group) == ends, "dimensions of the wrong groups")

    def rule_injective_bound(self, f, prem, st) -> None:
        self._need(isinstance(f, Bound) and len(prem) == 2, "shape")
        m, d = prem
        self._need(m == MapProp(f.group, getattr(d, "group", None), "injective"), "needs an injection")
        self._need(isinstance(d, Dim) and d.value == f.value, "bound mismatch")

    def rule_surjective_bound(self, f, prem, st) -> None:
        self._need(isinstance(f, Bound) and len(prem) == 2, "shape")
        m, d = prem
        self._need(m == MapProp(getattr(d, "group", None), f.group, "surjective"), "needs a surjection")
        self._need(isinstance(d, Dim) and d.value == f.value, "bound mismatch")

    # exactness at the middle group of a window prev -> g -> nxt

    def _window(self, st: Step):
        ctx = st.context
        self._need(len(ctx) == 3 and ctx[0] == "les", "missing sequence context")
        _, idx, i = ctx
        self._need(0 <= idx < len(self.les), "no such sequence")
        seq = self.les[idx]
        self._need(1 <= i < len(seq) - 1, "position outside the sequence")
        return seq[i - 1], seq[i], seq[i + 1]

    def _same_map(self, fact, src, tgt, prop) -> bool:
        """Map facts touching a zero sentinel name it by a tagged Zero sheaf."""
        if not isinstance(fact, MapProp) or fact.prop != prop:
            return False
        return self._match(fact.src, src) and self._match(fact.tgt, tgt)

    @staticmethod
    def _match(g: Group, want: Group | None) -> bool:
        if want is None:
            return g.sheaf.kind == "Zero"
        return g == want

    def _exact(self, f, prem, st, given: tuple[str, str], result: tuple[str, str]) -> None:
        prev, g, nxt = self._window(st)
        links = {"in": (prev, g), "out": (g, nxt)}
        self._need(len(prem) == 1, "shape")
        self._need(self._same_map(prem[0], *links[given[0]], given[1]), "premise is not the adjacent map")
        self._need(self._same_map(f, *links[result[0]], result[1]), "conclusion is not the adjacent map")

    def rule_exact_surjective_zero(self, f, prem, st) -> None:
        self._exact(f, prem, st, ("in", "surjective"), ("out", "zero"))

    def rule_exact_zero_surjective(self, f, prem, st) -> None:
        self._exact(f, prem, st, ("out", "zero"), ("in", "surjective"))

    def rule_exact_injective_zero(self, f, prem, st) -> None:
        self._exact(f, prem, st, ("out", "injective"), ("in", "zero"))

    def rule_exact_zero_injective(self, f, prem, st) -> None:
        self._exact(f, prem, st, ("in", "zero"), ("out", "injective"))

    def rule_exact_bound(self, f, prem, st) -> None:
        prev, g, nxt = self._window(st)
        self._need(isinstance(f, Bound) and f.group == g and len(prem) == 2, "shape")
        a, b = prem
        ok = isinstance(a, Dim) and isinstance(b, Dim) and self._match(a.group, prev) and self._match(b.group, nxt)
        self._need(ok and f.value == a.value + b.value, "bound is not the sum of the neighbours")

    # composites

    def _chain_rule(self, f, prem, prop: str, need: str, before: bool) -> None:
        self._need(isinstance(f, MapProp) and f.prop == prop and prem, "shape")
        head = prem[0]
        self._need(isinstance(head, ChainProp) and head.prop == prop, "needs the composite property")
        links = list(zip(head.chain, head.chain[1:]))
        self._need((f.src, f.tgt) in links, "not a link of the composite")
        j = links.index((f.src, f.tgt))
        others = links[:j] if before else links[j + 1:]
        want = [MapProp(x, y, need) for x, y in others]
        self._need(prem[1:] == want, f"other links not all {need}")

    def rule_chain_injective(self, f, prem, st) -> None:
        self._chain_rule(f, prem, "injective", "surjective", True)

    def rule_chain_surjective(self, f, prem, st) -> None:
        self._chain_rule(f, prem, "surjective", "injective", False)

    def rule_chain_compose(self, f, prem, st) -> None:
        self._need(isinstance(f, ChainProp), "shape")
        links = list(zip(f.chain, f.chain[1:]))
        self._need(prem == [MapProp(x, y, f.prop) for x, y in links], "links do not compose")

    # morphism rules: ranges are re-evaluated from the declarations

    def _section_pair(self, y: str, x: str) -> tuple[Space, Space]:
        Y, X = self.world.space(y), self.world.space(x)
        self._need(X.kind == "section" and X.parent == y, f"{x} is not a section of {y}")
        return Y, X

    def rule_lefschetz(self, f, prem, st) -> None:
        m = self._map(f, ("injective", "surjective"))
        a, b = m.src, m.tgt
        self._need(not prem and a.sheaf.kind == b.sheaf.kind == "Omega", "shape")
        _, X = self._section_pair(a.sheaf.space, b.sheaf.space)
        same = a.p == b.p and a.sheaf.q == b.sheaf.q and a.sheaf.t == b.sheaf.t == 0
        self._need(same and a.p + a.sheaf.q < X.dim, "outside the Lefschetz range")

    def _cupping_chain(self, f) -> tuple[Space, Space, int, int]:
        self._need(isinstance(f, ChainProp) and len(f.chain) == 4, "shape")
        c0 = f.chain[0]
        y, x = c0.sheaf.space, f.chain[1].sheaf.space
        Y, X = self._section_pair(y, x)
        p, q = c0.p, c0.sheaf.q
        want = (
            _forms(y, q, 0, p),
            _forms(x, q, 0, p),
            Group(Sheaf("OmegaR", x, q + 1, X.d, y), p),
            _forms(y, q + 1, 0, p + 1),
        )
        self._need(f.chain == want, "not the cupping composite")
        return Y, X, p, q

    def rule_hard_lefschetz(self, f, prem, st) -> None:
        Y, _, p, q = self._cupping_chain(f)
        self._need(not prem and f.prop == "injective", "hard Lefschetz gives injectivity only")
        self._need(p >= 0 and q >= 0 and p + q < Y.dim, "outside the hard Lefschetz range")

    def rule_special_cupping(self, f, prem, st) -> None:
        Y, _, p, q = self._cupping_chain(f)
        self._need(not prem and f.prop in ("injective", "surjective"), "shape")
        self._need(self.world.special(Y.id), f"{Y.id} has no special cohomology")
        self._need(p >= 0 and q >= 0 and p + q + 2 < Y.dim, "outside the special cupping range")

    def rule_cover_trivial(self, f, prem, st) -> None:
        m = self._map(f, ("zero",))
        X = self.world.space(m.tgt.sheaf.space)
        self._need(X.kind == "cover" and not prem, "not a cover")
        want = (_forms(X.parent, 0, 0, 0), Group(Sheaf("CoverSub", X.id, 1, X.k * X.d), 1))
        self._need((m.src, m.tgt) == want, "not the unit class map")

    def rule_cover_cupping(self, f, prem, st) -> None:
        m = self._map(f, ("injective",))
        X = self.world.space(m.tgt.sheaf.space)
        self._need(X.kind == "cover" and not prem, "not a cover")
        p, q = m.src.p, m.tgt.sheaf.q
        want = (_forms(X.id, q - 1, 0, p), Group(Sheaf("Push", X.id, q, X.k * X.d), p))
        self._need((m.src, m.tgt) == want, "not the cover cupping map")
        self._need(p > 0 and q >= 1 and p + q < X.dim, "outside the cover cupping range")

    def rule_kodaira_nakano(self, f, prem, st) -> None:
        self._need(isinstance(f, Dim) and f.value == 0 and not prem, "shape")
        g = f.group
        self._need(g.sheaf.kind == "Omega", "not twisted forms")
        n = self.world.space(g.sheaf.space).dim
        self._need(_kn(n, g.p, g.sheaf.q, g.sheaf.t), "outside the Kodaira-Nakano range")

    def rule_restriction_surjective(self, f, prem, st) -> None:
        m = self._map(f, ("surjective",))
        a, b = m.src, m.tgt
        self._need(a.p == b.p == 0 and a.sheaf.kind == b.sheaf.kind == "Omega", "shape")
        y, x = a.sheaf.space, b.sheaf.space
        Y, X = self._section_pair(y, x)
        q, c = a.sheaf.q, a.sheaf.t
        self._need((b.sheaf.q, b.sheaf.t) == (q, c), "indices differ")
        self._need(c <= X.d, "twist above the section degree")
        self._need(self.world.picard_one(y), f"{y} lacks Picard group Z")
        self._need(0 <= q < Y.dim - 1, "form degree too large")
        if c < X.d:
            want = [Dim(_forms(x, q - 1, c - X.d, 1), 0), Dim(_forms(y, q, c - X.d, 1), 0)]
        else:
            want = [Dim(_forms(y, q, 0, 1), 0)]
        self._need(prem == want, "obstruction groups not shown to vanish")


def check_trace(trace, sources: Sequence | None = None) -> CheckReport:
    """Validate every step of ``trace``; with ``sources`` the input facts are
    also looked up again."""
    try:
        checker = _Checker(trace, sources)
    except TraceError as exc:
        return CheckReport(trace.script, len(trace.steps), [str(exc)])
    return CheckReport(trace.script, len(trace.steps), checker.check())
