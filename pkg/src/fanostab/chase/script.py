"""Chase scripts: parsing, fact sources, replay and proof traces.

A script is line oriented::

    space G grassmannian 1 5
    section Y in G degree 1
    goal H0(Omega(X,3,2)) = 0
    use ses conormal Omega(X,3,2) OmegaR(Y|X,4,3) Omega(X,4,3)
    use fact H0(Omega(G,5,4)) = 0
    use cupping hard-lefschetz G Y 2 2
    use restrict G Y q 2 c 1
    use kn H1(Omega(Y,2,-1))
    conclude H0(Omega(X,3,2)) = 0

Sheaf expressions contain no blanks.  ``#`` starts a comment.
"""
from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Protocol

from .. import weyl
from ..tables import FactStore
from .engine import (
    SES,
    Betti,
    ChaseContradiction,
    ChaseState,
    Dim,
    Registry,
    RuleError,
    Space,
    Step,
)
from .expr import Group, parse_group, parse_sheaf


class ScriptError(ValueError):
    def __init__(self, source: str, lineno: int, reason: str):
        super().__init__(f"{source}:{lineno}: {reason}")
        self.lineno = lineno


@dataclass(frozen=True)
class Directive:
    lineno: int
    verb: str
    args: tuple[str, ...]


@dataclass
class Script:
    name: str
    directives: list[Directive]


_BETTI_RE = re.compile(r"^b(\d+)\((\w+)\)$")


def _value(tokens: Sequence[str], source: str, lineno: int) -> tuple[str, int]:
    if len(tokens) != 3 or tokens[1] != "=":
        raise ScriptError(source, lineno, "expected '<expr> = <value>'")
    try:
        return tokens[0], int(tokens[2])
    except ValueError:
        raise ScriptError(source, lineno, f"value {tokens[2]!r} is not an integer") from None


def parse_script(text: str, name: str = "<script>") -> Script:
    directives = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        verb = toks[0]
        try:
            if verb == "space":
                if len(toks) < 4 or toks[2] not in ("projective", "grassmannian", "abstract"):
                    raise ValueError("expected 'space <id> projective|grassmannian|abstract ...'")
                directives.append(Directive(lineno, "space", tuple(toks[1:])))
            elif verb == "section":
                if len(toks) != 6 or toks[2] != "in" or toks[4] != "degree":
                    raise ValueError("expected 'section <id> in <parent> degree <d>'")
                directives.append(Directive(lineno, "section", (toks[1], toks[3], toks[5])))
            elif verb == "cover":
                if len(toks) != 8 or toks[2] != "over" or toks[4] != "k" or toks[6] != "d":
                    raise ValueError("expected 'cover <id> over <parent> k <k> d <d>'")
                directives.append(Directive(lineno, "cover", (toks[1], toks[3], toks[5], toks[7])))
            elif verb in ("goal", "conclude"):
                expr, v = _value(toks[1:], name, lineno)
                parse_group(expr)
                directives.append(Directive(lineno, verb, (expr, str(v))))
            elif verb == "use":
                if len(toks) < 2:
                    raise ValueError("'use' needs a kind")
                kind = toks[1]
                if kind == "ses":
                    if len(toks) != 6:
                        raise ValueError("expected 'use ses <rule> <left> <middle> <right>'")
                    for t in toks[3:]:
                        parse_sheaf(t)
                elif kind == "fact":
                    expr, _ = _value(toks[2:], name, lineno)
                    if not _BETTI_RE.match(expr):
                        parse_group(expr)
                elif kind == "kn":
                    if len(toks) != 3:
                        raise ValueError("expected 'use kn <group>'")
                    parse_group(toks[2])
                elif kind == "restrict":
                    if len(toks) != 8 or toks[4] != "q" or toks[6] != "c":
                        raise ValueError("expected 'use restrict <Y> <X> q <q> c <c>'")
                    int(toks[5]), int(toks[7])
                elif kind == "cupping":
                    if len(toks) < 3:
                        raise ValueError("expected 'use cupping <context> <args...>'")
                else:
                    raise ValueError(f"unknown 'use' kind {kind!r}")
                directives.append(Directive(lineno, "use-" + kind, tuple(toks[2:])))
            else:
                raise ValueError(f"unknown directive {verb!r}")
        except ScriptError:
            raise
        except ValueError as exc:
            raise ScriptError(name, lineno, str(exc)) from None
    return Script(name, directives)


# ---------------------------------------------------------------- fact sources


class FactSource(Protocol):
    name: str

    def cell(self, space: Space, p: int, q: int, t: int) -> tuple[int, str] | None: ...

    def betti(self, space: Space, i: int) -> tuple[int, str] | None: ...


class WeylSource:
    """Cells of projective spaces and Grassmannians computed by BWB."""

    name = "weyl"

    def _kn(self, space: Space) -> tuple[int, int] | None:
        if space.kind == "projective":
            return (0, space.dim)
        if space.kind == "grassmannian":
            return space.grass
        return None

    def cell(self, space: Space, p: int, q: int, t: int) -> tuple[int, str] | None:
        kn = self._kn(space)
        if kn is None:
            return None
        k, n = kn
        if not 0 <= p <= space.dim:
            return 0, f"weyl G({k},{n})"
        return weyl.grassmann_h(k, n, p, q, t), f"weyl G({k},{n})"

    def betti(self, space: Space, i: int) -> tuple[int, str] | None:
        kn = self._kn(space)
        if kn is None:
            return None
        k, n = kn
        total = sum(weyl.grassmann_h(k, n, p, i - p, 0) for p in range(max(0, i - space.dim), min(i, space.dim) + 1))
        return total, f"weyl G({k},{n})"


class StoreSource:
    """Facts from an ingested fact file, matched by space id."""

    def __init__(self, store: FactStore, name: str | None = None):
        self.store = store
        self.name = name or store.name

    def cell(self, space: Space, p: int, q: int, t: int) -> tuple[int, str] | None:
        f = self.store.lookup_cell(space.id, p, q, t)
        return None if f is None else (f.value, f.provenance)

    def betti(self, space: Space, i: int) -> tuple[int, str] | None:
        f = self.store.lookup_betti(space.id, i)
        return None if f is None else (f.value, f.provenance)


# ---------------------------------------------------------------- traces


@dataclass
class ProofTrace:
    script: str
    spaces: dict[str, Space]
    sequences: list[SES]
    steps: list[Step]
    goals: list[Dim]

    def to_text(self) -> str:
        lines = [f"trace {self.script}"]
        for i, ses in enumerate(self.sequences):
            lines.append(f"  sequence #{i}: {ses}")
        for i, st in enumerate(self.steps):
            lines.append(f"  [{i + 1}] {st.fact}")
            how = f"by {st.rule}"
            if st.context and st.context[0] == "les":
                how += f" in sequence #{st.context[1]} at position {st.context[2]}"
            if st.note:
                how += f" ({st.note})"
            lines.append(f"      {how}")
            if st.premises:
                lines.append("      from " + " ".join(f"[{j + 1}]" for j in st.premises))
        for g in self.goals:
            lines.append(f"  goal {g}")
        return "\n".join(lines) + "\n"


@dataclass
class ChaseResult:
    script: str
    proved: bool
    trace: ProofTrace
    missing: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    open_goals: list[str] = field(default_factory=list)
    inputs: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "proved" if self.proved else "stuck"

    def report(self) -> str:
        lines = [f"{self.script}: {self.status}"]
        lines += [f"  missing fact: {m}" for m in self.missing]
        lines += [f"  rule not applicable: {f}" for f in self.failures]
        lines += [f"  open goal: {g}" for g in self.open_goals]
        return "\n".join(lines) + "\n"


def _declare(reg: Registry, d: Directive) -> None:
    a = d.args
    if d.verb == "space":
        sid, kind, rest = a[0], a[1], a[2:]
        if kind == "projective":
            n = int(rest[0])
            reg.add(Space(sid, n, "projective"))
        elif kind == "grassmannian":
            k, n = int(rest[0]), int(rest[1])
            if not 0 <= k < n:
                raise ValueError(f"G({k},{n}) needs 0 <= k < n")
            reg.add(Space(sid, weyl.grassmann_dim(k, n), "grassmannian", grass=(k, n)))
        else:
            flags = set(rest[1:])
            unknown = flags - {"special", "picard-one"}
            if unknown:
                raise ValueError(f"unknown space flags {sorted(unknown)}")
            reg.add(Space(sid, int(rest[0]), "abstract", special="special" in flags, picard_one="picard-one" in flags))
    elif d.verb == "section":
        sid, parent, deg = a[0], a[1], int(a[2])
        if deg < 1:
            raise ValueError("section degree must be positive")
        reg.add(Space(sid, reg[parent].dim - 1, "section", parent=parent, d=deg))
    else:
        sid, parent, k, deg = a[0], a[1], int(a[2]), int(a[3])
        if k < 2 or deg < 1:
            raise ValueError("cover needs k >= 2 and d >= 1")
        reg.add(Space(sid, reg[parent].dim, "cover", parent=parent, d=deg, k=k))


def resolve_fact(reg: Registry, expr: str, sources: Iterable[FactSource]) -> tuple[object, int, str] | None:
    """Look a fact up in every source; all answers must agree."""
    m = _BETTI_RE.match(expr)
    answers = []
    if m:
        i, sid = int(m.group(1)), m.group(2)
        space = reg[sid]
        key: object = ("betti", sid, i)
        for src in sources:
            got = src.betti(space, i)
            if got is not None:
                answers.append((got[0], f"{src.name}: {got[1]}"))
    else:
        g = parse_group(expr)
        if g.sheaf.kind != "Omega":
            return None
        space = reg[g.sheaf.space]
        key = g
        for src in sources:
            got = src.cell(space, g.p, g.sheaf.q, g.sheaf.t)
            if got is not None:
                answers.append((got[0], f"{src.name}: {got[1]}"))
    if not answers:
        return None
    values = {v for v, _ in answers}
    if len(values) > 1:
        raise ChaseContradiction(f"sources disagree on {expr}: " + "; ".join(f"{v} ({w})" for v, w in answers))
    return key, answers[0][0], answers[0][1]


def replay(script: Script, sources: Sequence[FactSource], mask: Iterable[str] = ()) -> ChaseResult:
    """Run a script to its fixpoint.  ``mask`` hides the named input facts
    (as written after ``use fact``) to probe which ones carry the proof."""
    masked = set(mask)
    reg = Registry()
    state = ChaseState(reg)
    goals: list[Dim] = []
    missing: list[str] = []
    failures: list[str] = []
    inputs: list[str] = []
    for d in script.directives:
        try:
            if d.verb in ("space", "section", "cover"):
                _declare(reg, d)
            elif d.verb in ("goal", "conclude"):
                g = parse_group(d.args[0])
                reg.check_sheaf(g.sheaf)
                if Dim(g, int(d.args[1])) not in goals:
                    goals.append(Dim(g, int(d.args[1])))
                state.register_group(g)
            elif d.verb == "use-ses":
                rule, *terms = d.args
                state.add_sequence(SES(rule, *(parse_sheaf(t) for t in terms)))
            elif d.verb == "use-fact":
                expr, value = d.args[0], int(d.args[2])
                ref = f"{expr} = {value}"
                got = None if ref in masked else resolve_fact(reg, expr, sources)
                if got is None:
                    missing.append(ref)
                    continue
                key, actual, prov = got
                if actual != value:
                    raise ChaseContradiction(f"{script.name}:{d.lineno}: script asserts {ref} but {prov} gives {actual}")
                fact = Dim(key, actual) if isinstance(key, Group) else Betti(key[1], key[2], actual)
                state.add(fact, "input", (), prov)
                inputs.append(ref)
            else:
                try:
                    if d.verb == "use-cupping":
                        state.cupping(d.args[0], list(d.args[1:]))
                    elif d.verb == "use-restrict":
                        # the c = d case consults derived facts
                        state.saturate()
                        state.restriction_surjectivity(d.args[0], d.args[1], int(d.args[3]), int(d.args[5]))
                    elif d.verb == "use-kn":
                        g = parse_group(d.args[0])
                        reg.check_sheaf(g.sheaf)
                        state.kodaira_nakano(g)
                except RuleError as exc:
                    failures.append(f"line {d.lineno}: {exc}")
        except (ChaseContradiction, ScriptError):
            raise
        except ValueError as exc:
            raise ScriptError(script.name, d.lineno, str(exc)) from None
    state.saturate()
    open_goals = [str(g) for g in goals if state.dims.get(g.group) != g.value]
    proved = not open_goals
    steps = state.steps
    if not open_goals:
        steps = _prune(state, [state.index[g] for g in goals])
    trace = ProofTrace(script.name, dict(reg.spaces), [s for s, _ in state.sequences], steps, goals)
    return ChaseResult(script.name, proved, trace, missing, failures, open_goals, inputs)


def _prune(state: ChaseState, roots: list[int]) -> list[Step]:
    keep: set[int] = set()
    for r in roots:
        keep.update(state.derivation(r))
    order = sorted(keep)
    renum = {old: new for new, old in enumerate(order)}
    out = []
    for old in order:
        st = state.steps[old]
        out.append(Step(st.fact, st.rule, tuple(renum[j] for j in st.premises), st.note, st.context))
    return out


def load_bearing_inputs(script: Script, sources: Sequence[FactSource]) -> list[str]:
    """Inputs whose removal alone makes the replay go stuck."""
    base = replay(script, sources)
    if not base.proved:
        raise ValueError(f"{script.name} does not replay: {base.report()}")
    return [ref for ref in base.inputs if not replay(script, sources, mask=[ref]).proved]
