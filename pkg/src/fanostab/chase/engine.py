"""Fixpoint saturation over long exact sequences and morphism facts.

Facts are dimensions of cohomology groups, upper bounds, properties of maps
(``injective``, ``surjective``, ``zero``), properties of composite chains and
Betti numbers.  Every fact enters through a numbered step naming its rule and
premises, so a finished state reads as a proof.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .expr import Group, Sheaf, omega, omega_r

MAP_PROPS = ("injective", "surjective", "zero")
SES_RULES = ("restrict", "conormal", "cover-split", "cover-conormal")


class ChaseContradiction(ValueError):
    pass


class RuleError(ValueError):
    """A morphism rule was invoked outside the range where it holds."""


@dataclass(frozen=True)
class Space:
    id: str
    dim: int
    kind: str  # projective | grassmannian | abstract | section | cover
    parent: str | None = None
    d: int = 0
    k: int = 0
    grass: tuple[int, int] | None = None
    special: bool = False
    picard_one: bool = False


@dataclass(frozen=True, order=True)
class Dim:
    group: Group
    value: int

    def __str__(self) -> str:
        return f"{self.group} = {self.value}"


@dataclass(frozen=True, order=True)
class Bound:
    group: Group
    value: int

    def __str__(self) -> str:
        return f"{self.group} <= {self.value}"


@dataclass(frozen=True, order=True)
class MapProp:
    src: Group
    tgt: Group
    prop: str

    def __str__(self) -> str:
        return f"{self.src} -> {self.tgt} {self.prop}"


@dataclass(frozen=True, order=True)
class ChainProp:
    chain: tuple[Group, ...]
    prop: str

    def __str__(self) -> str:
        return " -> ".join(str(g) for g in self.chain) + f" {self.prop}"


@dataclass(frozen=True, order=True)
class Betti:
    space: str
    i: int
    value: int

    def __str__(self) -> str:
        return f"b{self.i}({self.space}) = {self.value}"


Fact = Union[Dim, Bound, MapProp, ChainProp, Betti]


@dataclass(frozen=True)
class Step:
    fact: Fact
    rule: str
    premises: tuple[int, ...] = ()
    note: str = ""
    context: tuple = ()


@dataclass(frozen=True)
class SES:
    rule: str
    left: Sheaf
    middle: Sheaf
    right: Sheaf

    def __str__(self) -> str:
        return f"{self.rule}: 0 -> {self.left} -> {self.middle} -> {self.right} -> 0"


class Registry:
    def __init__(self) -> None:
        self.spaces: dict[str, Space] = {}

    def add(self, space: Space) -> None:
        if space.id in self.spaces:
            raise ValueError(f"space {space.id} declared twice")
        if space.parent is not None and space.parent not in self.spaces:
            raise ValueError(f"{space.id}: unknown parent {space.parent}")
        self.spaces[space.id] = space

    def __getitem__(self, sid: str) -> Space:
        try:
            return self.spaces[sid]
        except KeyError:
            raise ValueError(f"unknown space {sid!r}") from None

    def is_special(self, sid: str) -> bool:
        s = self[sid]
        if s.kind == "projective" or s.special:
            return s.dim >= 3
        if s.kind in ("section", "cover"):
            return s.dim >= 3 and self.is_special(s.parent)
        return False

    def has_picard_one(self, sid: str) -> bool:
        s = self[sid]
        if s.kind in ("projective", "grassmannian") or s.picard_one:
            return True
        if s.kind == "section":
            return s.dim >= 3 and self.has_picard_one(s.parent)
        return False

    def carrier_dim(self, sheaf: Sheaf) -> int:
        if sheaf.kind == "Zero":
            return 0
        return self[sheaf.space].dim

    def is_zero_sheaf(self, sheaf: Sheaf) -> bool:
        if sheaf.kind == "Zero":
            return True
        n = self[sheaf.space].dim
        q = sheaf.q
        if sheaf.kind == "Omega" or sheaf.kind == "CoverSub":
            return not 0 <= q <= n
        if sheaf.kind == "OmegaR":
            return not 0 <= q <= self[sheaf.ambient].dim
        if sheaf.kind == "Push":
            return not 0 <= q <= n + 1
        if sheaf.kind == "CoverQuot":
            return not 0 <= q - 1 <= n
        raise AssertionError(sheaf)

    def check_sheaf(self, sheaf: Sheaf) -> None:
        s = self[sheaf.space]
        if sheaf.kind == "OmegaR":
            if s.kind != "section" or s.parent != sheaf.ambient:
                raise ValueError(f"{sheaf}: {s.id} is not a section of {sheaf.ambient}")
        elif sheaf.kind in ("Push", "CoverSub", "CoverQuot") and s.kind != "cover":
            raise ValueError(f"{sheaf}: {s.id} is not a cyclic cover")

    def summands(self, group: Group) -> list[Group] | None:
        """Split cover sheaves are direct sums of twisted forms on the base."""
        sh = group.sheaf
        if sh.kind not in ("CoverSub", "CoverQuot"):
            return None
        cov = self[sh.space]
        if sh.kind == "CoverSub":
            return [Group(omega(cov.parent, sh.q, sh.t - j * cov.d), group.p) for j in range(cov.k)]
        return [Group(omega(cov.parent, sh.q - 1, sh.t - j * cov.d), group.p) for j in range(1, cov.k + 1)]

    def check_ses(self, ses: SES) -> None:
        a, b, c = ses.left, ses.middle, ses.right
        for sh in (a, b, c):
            self.check_sheaf(sh)
        if ses.rule == "restrict":
            x = self[c.space]
            if c.kind != "OmegaR":
                raise ValueError(f"{ses}: right term must be OmegaR")
            want = (omega(c.ambient, c.q, c.t - x.d), omega(c.ambient, c.q, c.t))
        elif ses.rule == "conormal":
            x = self[a.space]
            if a.kind != "Omega" or x.kind != "section":
                raise ValueError(f"{ses}: left term must be forms on a section")
            want = (omega_r(x.parent, x.id, a.q + 1, a.t + x.d), omega(x.id, a.q + 1, a.t + x.d))
            if (b, c) != want:
                raise ValueError(f"{ses}: expected middle/right {want[0]}, {want[1]}")
            return
        elif ses.rule == "cover-split":
            if a.kind != "CoverSub":
                raise ValueError(f"{ses}: left term must be CoverSub")
            want = (Sheaf("Push", a.space, a.q, a.t), Sheaf("CoverQuot", a.space, a.q, a.t))
            if (b, c) != want:
                raise ValueError(f"{ses}: expected middle/right {want[0]}, {want[1]}")
            return
        elif ses.rule == "cover-conormal":
            x = self[a.space]
            if a.kind != "Omega" or x.kind != "cover":
                raise ValueError(f"{ses}: left term must be forms on a cover")
            shift = x.k * x.d
            want = (Sheaf("Push", x.id, a.q + 1, a.t + shift), omega(x.id, a.q + 1, a.t + shift))
            if (b, c) != want:
                raise ValueError(f"{ses}: expected middle/right {want[0]}, {want[1]}")
            return
        else:
            raise ValueError(f"unknown sequence rule {ses.rule!r}; expected one of {', '.join(SES_RULES)}")
        if (a, b) != want:
            raise ValueError(f"{ses}: expected left/middle {want[0]}, {want[1]}")

    def les(self, ses: SES, tag: str) -> list[Group]:
        """Groups of the long exact sequence, flanked by zero sentinels."""
        top = max(self.carrier_dim(s) for s in (ses.left, ses.middle, ses.right))
        seq = [Group(Sheaf("Zero", f"{tag}.start", 0, 0), -1)]
        for p in range(top + 1):
            seq.extend(Group(s, p) for s in (ses.left, ses.middle, ses.right))
        seq.append(Group(Sheaf("Zero", f"{tag}.end", 0, 0), top + 1))
        return seq


def kodaira_nakano(n: int, p: int, q: int, t: int) -> bool:
    return (t > 0 and p + q > n) or (t < 0 and p + q < n)


class ChaseState:
    def __init__(self, registry: Registry):
        self.reg = registry
        self.steps: list[Step] = []
        self.index: dict[Fact, int] = {}
        self.dims: dict[Group, int] = {}
        self.bounds: dict[Group, int] = {}
        self.betti: dict[tuple[str, int], int] = {}
        self.sequences: list[tuple[SES, list[Group]]] = []
        # dicts used as insertion-ordered sets keep saturation deterministic
        self.maps: dict[tuple[Group, Group], None] = {}
        self.chains: list[tuple[Group, ...]] = []
        self.groups: dict[Group, None] = {}
        self.forms_at_zero: dict[str, list[Group]] = {}

    # ------------------------------------------------------------ bookkeeping

    def dim(self, g: Group) -> int | None:
        return self.dims.get(g)

    def has(self, fact: Fact) -> bool:
        return fact in self.index

    def has_map(self, a: Group, b: Group, prop: str) -> bool:
        return MapProp(a, b, prop) in self.index

    def register_group(self, g: Group) -> None:
        if g in self.groups:
            return
        self.groups[g] = None
        if g.sheaf.kind == "Omega" and g.sheaf.t == 0:
            self.forms_at_zero.setdefault(g.sheaf.space, []).append(g)
        parts = self.reg.summands(g)
        if parts:
            for s in parts:
                self.register_group(s)

    def register_map(self, a: Group, b: Group) -> None:
        self.register_group(a)
        self.register_group(b)
        self.maps[(a, b)] = None

    def derivation(self, idx: int) -> list[int]:
        seen: set[int] = set()
        order: list[int] = []

        def walk(i: int) -> None:
            if i in seen:
                return
            seen.add(i)
            for j in self.steps[i].premises:
                walk(j)
            order.append(i)

        walk(idx)
        return order

    def describe(self, idx: int) -> str:
        st = self.steps[idx]
        where = ""
        if st.context and st.context[0] == "les":
            where = f" in {self.sequences[st.context[1]][0]}"
        prem = ", ".join(f"[{j + 1}]" for j in st.premises)
        return f"[{idx + 1}] {st.fact} by {st.rule}{where}" + (f" from {prem}" if prem else "") + (f" ({st.note})" if st.note else "")

    def _conflict(self, fact: Fact, rule: str, premises: tuple[int, ...], other: int, context: tuple) -> None:
        chain = sorted(set(self.derivation(other)).union(*(self.derivation(j) for j in premises)))
        lines = [self.describe(i) for i in chain]
        where = f" in {self.sequences[context[1]][0]}" if context and context[0] == "les" else ""
        raise ChaseContradiction(
            f"{fact} by {rule}{where} contradicts {self.steps[other].fact}\n  " + "\n  ".join(lines)
        )

    def add(self, fact: Fact, rule: str, premises: tuple[int, ...] = (), note: str = "", context: tuple = ()) -> int:
        if fact in self.index:
            return self.index[fact]
        if isinstance(fact, Dim):
            old = self.dims.get(fact.group)
            if old is not None and old != fact.value:
                self._conflict(fact, rule, premises, self.index[Dim(fact.group, old)], context)
            b = self.bounds.get(fact.group)
            if b is not None and fact.value > b:
                self._conflict(fact, rule, premises, self.index[Bound(fact.group, b)], context)
            self.register_group(fact.group)
        elif isinstance(fact, Bound):
            old = self.dims.get(fact.group)
            if old is not None and old > fact.value:
                self._conflict(fact, rule, premises, self.index[Dim(fact.group, old)], context)
            b = self.bounds.get(fact.group)
            if b is not None and b <= fact.value:
                return self.index[Bound(fact.group, b)]
            self.register_group(fact.group)
        elif isinstance(fact, Betti):
            old = self.betti.get((fact.space, fact.i))
            if old is not None and old != fact.value:
                self._conflict(fact, rule, premises, self.index[Betti(fact.space, fact.i, old)], context)
        elif isinstance(fact, MapProp):
            if fact.prop not in MAP_PROPS:
                raise ValueError(f"unknown map property {fact.prop!r}")
            self.register_map(fact.src, fact.tgt)
        elif isinstance(fact, ChainProp):
            self.add_chain(fact.chain)
        idx = len(self.steps)
        self.steps.append(Step(fact, rule, tuple(premises), note, context))
        self.index[fact] = idx
        if isinstance(fact, Dim):
            self.dims[fact.group] = fact.value
        elif isinstance(fact, Bound):
            self.bounds[fact.group] = fact.value
        elif isinstance(fact, Betti):
            self.betti[(fact.space, fact.i)] = fact.value
        return idx

    def add_chain(self, chain: tuple[Group, ...]) -> None:
        if chain not in self.chains:
            self.chains.append(chain)
            for a, b in zip(chain, chain[1:]):
                self.register_map(a, b)

    def add_sequence(self, ses: SES) -> int:
        self.reg.check_ses(ses)
        for old, _ in self.sequences:
            if old == ses:
                return [s for s, _ in self.sequences].index(ses)
        tag = f"ses{len(self.sequences)}"
        seq = self.reg.les(ses, tag)
        self.sequences.append((ses, seq))
        for a, b in zip(seq, seq[1:]):
            self.register_map(a, b)
        return len(self.sequences) - 1

    # ------------------------------------------------------------ rules

    def _derive(self, fact: Fact, rule: str, premises: list[Fact], note: str = "", context: tuple = ()) -> bool:
        if fact in self.index:
            return False
        if isinstance(fact, Bound):
            b = self.bounds.get(fact.group)
            if (b is not None and b <= fact.value) or fact.group in self.dims:
                return False
        self.add(fact, rule, tuple(self.index[f] for f in premises), note, context)
        return True

    def _group_rules(self) -> bool:
        changed = False
        for g in list(self.groups):
            if g in self.dims:
                continue
            sh = g.sheaf
            if sh.kind == "Zero":
                changed |= self._derive(Dim(g, 0), "les-boundary", [])
            elif self.reg.is_zero_sheaf(sh):
                changed |= self._derive(Dim(g, 0), "zero-sheaf", [])
            elif not 0 <= g.p <= self.reg.carrier_dim(sh):
                changed |= self._derive(Dim(g, 0), "degree-range", [])
            elif self.bounds.get(g) == 0:
                changed |= self._derive(Dim(g, 0), "bound-zero", [Bound(g, 0)])
        return changed

    def _betti_rules(self) -> bool:
        changed = False
        for (sid, i), v in list(self.betti.items()):
            src = Betti(sid, i, v)
            for child in self.reg.spaces.values():
                if child.kind == "section" and child.parent == sid and i < child.dim:
                    changed |= self._derive(Betti(child.id, i, v), "lefschetz-betti", [src])
            for g in list(self.forms_at_zero.get(sid, ())):
                sh = g.sheaf
                if g.p + sh.q != i or g in self.dims:
                    continue
                if v == 1 and g.p == sh.q:
                    changed |= self._derive(Dim(g, 1), "kahler-class", [src])
                else:
                    changed |= self._derive(Bound(g, v), "hodge-bound", [src])
        return changed

    def _sum_rules(self) -> bool:
        changed = False
        for g in list(self.groups):
            parts = self.reg.summands(g)
            if not parts:
                continue
            if g not in self.dims and all(s in self.dims for s in parts):
                changed |= self._derive(Dim(g, sum(self.dims[s] for s in parts)), "direct-sum", [Dim(s, self.dims[s]) for s in parts])
            if self.dims.get(g) == 0:
                for s in parts:
                    changed |= self._derive(Dim(s, 0), "direct-summand", [Dim(g, 0)])
        return changed

    def _map_rules(self) -> bool:
        changed = False
        for a, b in list(self.maps):
            da, db = self.dims.get(a), self.dims.get(b)
            inj, surj, zero = (self.has_map(a, b, p) for p in MAP_PROPS)
            if da == 0:
                changed |= self._derive(MapProp(a, b, "zero"), "zero-source", [Dim(a, 0)])
                changed |= self._derive(MapProp(a, b, "injective"), "zero-source", [Dim(a, 0)])
            if db == 0:
                changed |= self._derive(MapProp(a, b, "zero"), "zero-target", [Dim(b, 0)])
                changed |= self._derive(MapProp(a, b, "surjective"), "zero-target", [Dim(b, 0)])
            if zero and inj:
                changed |= self._derive(Dim(a, 0), "zero-injective", [MapProp(a, b, "zero"), MapProp(a, b, "injective")])
            if zero and surj:
                changed |= self._derive(Dim(b, 0), "zero-surjective", [MapProp(a, b, "zero"), MapProp(a, b, "surjective")])
            if inj and surj:
                if da is not None:
                    changed |= self._derive(Dim(b, da), "isomorphism", [MapProp(a, b, "injective"), MapProp(a, b, "surjective"), Dim(a, da)])
                elif db is not None:
                    changed |= self._derive(Dim(a, db), "isomorphism", [MapProp(a, b, "injective"), MapProp(a, b, "surjective"), Dim(b, db)])
            if da is not None and da == db:
                if inj:
                    changed |= self._derive(MapProp(a, b, "surjective"), "dim-count", [MapProp(a, b, "injective"), Dim(a, da), Dim(b, db)])
                if surj:
                    changed |= self._derive(MapProp(a, b, "injective"), "dim-count", [MapProp(a, b, "surjective"), Dim(a, da), Dim(b, db)])
            if inj and db is not None and a not in self.dims:
                changed |= self._derive(Bound(a, db), "injective-bound", [MapProp(a, b, "injective"), Dim(b, db)])
            if surj and da is not None and b not in self.dims:
                changed |= self._derive(Bound(b, da), "surjective-bound", [MapProp(a, b, "surjective"), Dim(a, da)])
        return changed

    def _les_rules(self) -> bool:
        changed = False
        for idx, (ses, seq) in enumerate(self.sequences):
            for i in range(1, len(seq) - 1):
                prev, g, nxt = seq[i - 1], seq[i], seq[i + 1]
                ctx = ("les", idx, i)
                if self.has_map(prev, g, "surjective"):
                    changed |= self._derive(MapProp(g, nxt, "zero"), "exact-surjective-zero", [MapProp(prev, g, "surjective")], context=ctx)
                if self.has_map(g, nxt, "zero"):
                    changed |= self._derive(MapProp(prev, g, "surjective"), "exact-zero-surjective", [MapProp(g, nxt, "zero")], context=ctx)
                if self.has_map(g, nxt, "injective"):
                    changed |= self._derive(MapProp(prev, g, "zero"), "exact-injective-zero", [MapProp(g, nxt, "injective")], context=ctx)
                if self.has_map(prev, g, "zero"):
                    changed |= self._derive(MapProp(g, nxt, "injective"), "exact-zero-injective", [MapProp(prev, g, "zero")], context=ctx)
                dp, dn = self.dims.get(prev), self.dims.get(nxt)
                if g not in self.dims and dp is not None and dn is not None:
                    changed |= self._derive(Bound(g, dp + dn), "exact-bound", [Dim(prev, dp), Dim(nxt, dn)], context=ctx)
        return changed

    def _chain_rules(self) -> bool:
        changed = False
        for chain in self.chains:
            links = list(zip(chain, chain[1:]))
            inj = self.has(ChainProp(chain, "injective"))
            surj = self.has(ChainProp(chain, "surjective"))
            if inj:
                for j, (a, b) in enumerate(links):
                    if all(self.has_map(x, y, "surjective") for x, y in links[:j]):
                        prem = [ChainProp(chain, "injective")] + [MapProp(x, y, "surjective") for x, y in links[:j]]
                        changed |= self._derive(MapProp(a, b, "injective"), "chain-injective", prem)
            if surj:
                for j, (a, b) in enumerate(links):
                    if all(self.has_map(x, y, "injective") for x, y in links[j + 1:]):
                        prem = [ChainProp(chain, "surjective")] + [MapProp(x, y, "injective") for x, y in links[j + 1:]]
                        changed |= self._derive(MapProp(a, b, "surjective"), "chain-surjective", prem)
            for prop in ("injective", "surjective"):
                if all(self.has_map(x, y, prop) for x, y in links):
                    changed |= self._derive(ChainProp(chain, prop), "chain-compose", [MapProp(x, y, prop) for x, y in links])
            d0, d1 = self.dims.get(chain[0]), self.dims.get(chain[-1])
            if d0 is not None and d0 == d1:
                ends = [Dim(chain[0], d0), Dim(chain[-1], d1)]
                if inj:
                    changed |= self._derive(ChainProp(chain, "surjective"), "dim-count", [ChainProp(chain, "injective")] + ends)
                if surj:
                    changed |= self._derive(ChainProp(chain, "injective"), "dim-count", [ChainProp(chain, "surjective")] + ends)
        return changed

    def saturate(self, limit: int = 10_000) -> None:
        for _ in range(limit):
            changed = False
            for rule in (self._group_rules, self._betti_rules, self._sum_rules, self._map_rules, self._les_rules, self._chain_rules):
                changed |= rule()
            if not changed:
                return
        raise RuntimeError("saturation did not reach a fixpoint")

    # ------------------------------------------------------------ morphism rules

    def cupping(self, context: str, args: list[str]) -> list[int]:
        """Morphism facts from cupping with the hyperplane class."""
        if context in ("lefschetz", "hard-lefschetz", "special-cupping"):
            if len(args) != 4:
                raise RuleError(f"{context} takes <ambient> <section> <p> <q>")
            y, x, p, q = args[0], args[1], int(args[2]), int(args[3])
            X = self.reg[x]
            if X.kind != "section" or X.parent != y:
                raise RuleError(f"{x} is not a section of {y}")
            Y = self.reg[y]
            if context == "lefschetz":
                if not (p >= 0 and q >= 0 and p + q < X.dim):
                    raise RuleError(f"lefschetz restriction needs p + q < dim {x} = {X.dim}")
                a, b = Group(omega(y, q, 0), p), Group(omega(x, q, 0), p)
                note = f"restriction to {x}, p+q={p + q} < {X.dim}"
                return [self.add(MapProp(a, b, prop), "lefschetz", (), note) for prop in ("injective", "surjective")]
            chain = (
                Group(omega(y, q, 0), p),
                Group(omega(x, q, 0), p),
                Group(omega_r(y, x, q + 1, X.d), p),
                Group(omega(y, q + 1, 0), p + 1),
            )
            if context == "hard-lefschetz":
                if not (p >= 0 and q >= 0 and p + q < Y.dim):
                    raise RuleError(f"hard Lefschetz injectivity needs p + q < dim {y} = {Y.dim}")
                return [self.add(ChainProp(chain, "injective"), "hard-lefschetz", (), f"cupping with c1(O({X.d})) on {y}")]
            if not self.reg.is_special(y):
                raise RuleError(f"{y} is not known to have special cohomology")
            if not (p >= 0 and q >= 0 and p + q + 2 < Y.dim):
                raise RuleError(f"special cupping needs p + q + 2 < dim {y} = {Y.dim}")
            return [self.add(ChainProp(chain, prop), "special-cupping", (), f"cupping on {y}") for prop in ("injective", "surjective")]
        if context in ("cover-trivial", "cover-cupping"):
            x = args[0] if args else ""
            X = self.reg[x]
            if X.kind != "cover":
                raise RuleError(f"{x} is not a cyclic cover")
            kd = X.k * X.d
            if context == "cover-trivial":
                if len(args) != 1:
                    raise RuleError("cover-trivial takes <cover>")
                a = Group(omega(X.parent, 0, 0), 0)
                b = Group(Sheaf("CoverSub", x, 1, kd), 1)
                return [self.add(MapProp(a, b, "zero"), "cover-trivial", (), f"unit class at twist {kd}")]
            if len(args) != 3:
                raise RuleError("cover-cupping takes <cover> <p> <q>")
            p, q = int(args[1]), int(args[2])
            if not (p > 0 and q >= 1 and p + q < X.dim):
                raise RuleError(f"cover cupping needs p > 0, q >= 1, p + q < dim {x} = {X.dim}")
            a = Group(omega(x, q - 1, 0), p)
            b = Group(Sheaf("Push", x, q, kd), p)
            return [self.add(MapProp(a, b, "injective"), "cover-cupping", (), f"hard Lefschetz on {x}")]
        raise RuleError(f"unknown cupping context {context!r}")

    def kodaira_nakano(self, g: Group) -> int:
        sh = g.sheaf
        if sh.kind != "Omega":
            raise RuleError(f"Kodaira-Nakano applies to twisted forms, not {sh}")
        n = self.reg[sh.space].dim
        if not kodaira_nakano(n, g.p, sh.q, sh.t):
            raise RuleError(f"{g} is outside the Kodaira-Nakano range")
        return self.add(Dim(g, 0), "kodaira-nakano")

    def restriction_surjectivity(self, y: str, x: str, q: int, c: int) -> int:
        """``H^0(Y, Omega^q_Y(c)) -> H^0(X, Omega^q_X(c))`` is onto for ``c <= d``."""
        X = self.reg[x]
        if X.kind != "section" or X.parent != y:
            raise RuleError(f"{x} is not a section of {y}")
        Y = self.reg[y]
        d = X.d
        if c > d:
            raise RuleError(f"restriction surjectivity needs c <= d (c={c}, d={d})")
        if not self.reg.has_picard_one(y):
            raise RuleError(f"{y} is not known to have Picard group Z")
        if not 0 <= q < Y.dim - 1:
            raise RuleError(f"restriction surjectivity needs q < dim {y} - 1 = {Y.dim - 1}")
        premises: list[int] = []
        if c < d:
            for g in (Group(omega(x, q - 1, c - d), 1), Group(omega(y, q, c - d), 1)):
                if self.reg.is_zero_sheaf(g.sheaf):
                    premises.append(self.add(Dim(g, 0), "zero-sheaf"))
                else:
                    premises.append(self.kodaira_nakano(g))
            note = "both obstructions vanish by Kodaira-Nakano"
        else:
            hyp = Dim(Group(omega(y, q, 0), 1), 0)
            if hyp not in self.index:
                raise RuleError(f"restriction surjectivity at c = d needs {hyp}")
            premises.append(self.index[hyp])
            note = "obstruction map injective by cupping and Lefschetz"
        a, b = Group(omega(y, q, c), 0), Group(omega(x, q, c), 0)
        return self.add(MapProp(a, b, "surjective"), "restriction-surjective", tuple(premises), note)
