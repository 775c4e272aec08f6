"""Partial knowledge of ``h^p(X, Omega^q(t))`` over bounded twist windows.

A cell value is an ``int`` (``0`` means the group vanishes) or ``None`` for
unknown.  Outside its window a table answers unknown; the only sanctioned
extrapolations are Kodaira-Nakano and Serre duality, applied explicitly.
"""
from __future__ import annotations

import re
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from . import weyl

CohomologyValue = Optional[int]
UNKNOWN: CohomologyValue = None

Cell = tuple[int, int, int]


class SerreContradiction(ValueError):
    pass


class FootprintError(ValueError):
    """A computation needed a cell outside the available window."""


class FactParseError(ValueError):
    def __init__(self, lineno: int, line: str, reason: str, source: str | None = None):
        super().__init__(lineno, line, reason)
        self.lineno = lineno
        self.line = line
        self.reason = reason
        self.source = source

    def __str__(self) -> str:
        where = f"{self.source}:{self.lineno}" if self.source else f"line {self.lineno}"
        return f"{where}: {self.reason}: {self.line!r}"


class FactConflict(ValueError):
    pass


@dataclass(frozen=True)
class SpaceDescriptor:
    """A polarized manifold ``(X, O(1))``.

    ``kind`` is one of ``projective``, ``grassmannian``, ``section``, ``cover``
    or ``abstract``; ``params`` holds ``(n,)``, ``(k, n)``, ``(parent, d)``,
    ``(parent, k, d)`` or ``()`` respectively.  ``index`` is the integer ``s``
    with ``K = O(-s)`` (it may be zero or negative for non-Fano sections).
    """

    id: str
    dim: int
    index: int
    kind: str = "abstract"
    params: tuple = ()
    degree: int | None = None

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"{self.id}: dimension must be positive")
        if re.search(r"\s", self.id):
            raise ValueError(f"space id {self.id!r} contains whitespace")

    @property
    def parent(self) -> str | None:
        return self.params[0] if self.kind in ("section", "cover") else None


def projective_space(n: int) -> SpaceDescriptor:
    return SpaceDescriptor(f"P({n})", n, n + 1, "projective", (n,), 1)


def grassmannian(k: int, n: int) -> SpaceDescriptor:
    if k == 0:
        return projective_space(n)
    return SpaceDescriptor(
        f"G({k},{n})", weyl.grassmann_dim(k, n), n + 1, "grassmannian", (k, n), weyl.grassmann_degree(k, n)
    )


def section(parent: SpaceDescriptor, d: int) -> SpaceDescriptor:
    if d < 1:
        raise ValueError("section degree must be positive")
    degree = None if parent.degree is None else d * parent.degree
    return SpaceDescriptor(f"{parent.id}.H{d}", parent.dim - 1, parent.index - d, "section", (parent.id, d), degree)


def cyclic_cover(parent: SpaceDescriptor, k: int, d: int) -> SpaceDescriptor:
    """``k``-cyclic cover branched in ``|O(kd)|``; ``K_X = O(-s + (k-1)d)``."""
    if k < 1 or d < 1:
        raise ValueError("cover needs k >= 1 and d >= 1")
    degree = None if parent.degree is None else k * parent.degree
    return SpaceDescriptor(
        f"{parent.id}.C{k}x{d}", parent.dim, parent.index - (k - 1) * d, "cover", (parent.id, k, d), degree
    )


_SPACE_RE = re.compile(r"^\s*([PG])\s*\(\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)\s*$")


def parse_space(text: str) -> SpaceDescriptor:
    """Parse ``P(n)`` or ``G(k,n)``."""
    m = _SPACE_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse space {text!r}; expected P(n) or G(k,n)")
    kind, a, b = m.groups()
    if kind == "P":
        if b is not None:
            raise ValueError(f"P takes one argument: {text!r}")
        n = int(a)
        if n < 1:
            raise ValueError("P(n) needs n >= 1")
        return projective_space(n)
    if b is None:
        raise ValueError(f"G takes two arguments: {text!r}")
    k, n = int(a), int(b)
    if not 0 <= k < n:
        raise ValueError(f"G({k},{n}) needs 0 <= k < n")
    return grassmannian(k, n)


def kodaira_nakano_zone(dim: int, p: int, q: int, t: int) -> CohomologyValue:
    if (t > 0 and p + q > dim) or (t < 0 and p + q < dim):
        return 0
    return UNKNOWN


def serre_dual(dim: int, cell: Cell) -> Cell:
    p, q, t = cell
    return (dim - p, dim - q, -t)


@dataclass
class CohomologyTable:
    space: SpaceDescriptor
    window: tuple[int, int]
    cells: dict[Cell, CohomologyValue] = field(default_factory=dict)

    def __post_init__(self) -> None:
        lo, hi = self.window
        if lo > hi:
            raise ValueError(f"empty window {self.window}")
        for cell in self.cells:
            self._check_cell(cell)

    @property
    def dim(self) -> int:
        return self.space.dim

    def in_window(self, t: int) -> bool:
        return self.window[0] <= t <= self.window[1]

    def _check_cell(self, cell: Cell) -> None:
        p, q, t = cell
        if not (0 <= p <= self.dim and 0 <= q <= self.dim):
            raise ValueError(f"cell {cell} outside 0..{self.dim}")
        if not self.in_window(t):
            raise ValueError(f"cell {cell} outside window {self.window}")

    def get(self, p: int, q: int, t: int) -> CohomologyValue:
        return self.cells.get((p, q, t), UNKNOWN)

    def set(self, p: int, q: int, t: int, value: CohomologyValue) -> None:
        self._check_cell((p, q, t))
        if value is not None and value < 0:
            raise ValueError("dimensions are nonnegative")
        self.cells[(p, q, t)] = value

    def all_cells(self) -> Iterator[Cell]:
        lo, hi = self.window
        for t in range(lo, hi + 1):
            for q in range(self.dim + 1):
                for p in range(self.dim + 1):
                    yield (p, q, t)

    def copy(self) -> CohomologyTable:
        return CohomologyTable(self.space, self.window, dict(self.cells))

    def known_cells(self) -> dict[Cell, int]:
        return {c: v for c, v in sorted(self.cells.items(), key=lambda kv: (kv[0][2], kv[0][1], kv[0][0])) if v is not None}

    def euler_characteristic(self, q: int, t: int) -> int:
        if not self.in_window(t):
            raise FootprintError(f"chi(Omega^{q}({t})) on {self.space.id}: twist outside window {self.window}")
        total = 0
        for p in range(self.dim + 1):
            v = self.get(p, q, t)
            if v is None:
                raise FootprintError(f"chi(Omega^{q}({t})) on {self.space.id}: cell {(p, q, t)} unknown")
            total += (-1) ** p * v
        return total


def weyl_table(space: SpaceDescriptor, window: tuple[int, int]) -> CohomologyTable:
    """Full table of a projective space or Grassmannian computed by BWB."""
    if space.kind == "projective":
        k, n = 0, space.params[0]
    elif space.kind == "grassmannian":
        k, n = space.params
    else:
        raise ValueError(f"{space.id} is not homogeneous of type A")
    table = CohomologyTable(space, window)
    lo, hi = window
    for t in range(lo, hi + 1):
        for q in range(space.dim + 1):
            coh = weyl.grassmann_cohomology(k, n, q, t)
            for p in range(space.dim + 1):
                table.cells[(p, q, t)] = coh.get(p, 0)
    return table


def serre_close(table: CohomologyTable) -> CohomologyTable:
    """Fill unknown cells whose Serre dual is known; raise on disagreement."""
    out = table.copy()
    n = table.dim
    for cell, value in sorted(table.cells.items()):
        if value is None:
            continue
        dual = serre_dual(n, cell)
        if not out.in_window(dual[2]):
            continue
        other = out.get(*dual)
        if other is None:
            out.cells[dual] = value
        elif other != value:
            raise SerreContradiction(
                f"{table.space.id}: h^{cell[0]}(Omega^{cell[1]}({cell[2]})) = {value} but "
                f"Serre dual h^{dual[0]}(Omega^{dual[1]}({dual[2]})) = {other}"
            )
    return out


def euler_recursion(ambient: CohomologyTable, degrees: Iterable[int], q: int, t: int) -> int:
    """``chi(Omega^q_X(t))`` for the complete intersection ``X`` of the given
    multidegree inside the ambient space, by additivity over the restriction
    and conormal sequences."""
    degrees = tuple(degrees)
    if any(d < 1 for d in degrees):
        raise ValueError(f"degrees must be positive: {degrees}")

    @lru_cache(maxsize=None)
    def chi(level: int, qq: int, tt: int) -> int:
        if qq < 0:
            return 0
        if level == 0:
            if qq > ambient.dim:
                return 0
            return ambient.euler_characteristic(qq, tt)
        d = degrees[level - 1]
        restricted = chi(level - 1, qq, tt) - chi(level - 1, qq, tt - d)
        return restricted - chi(level, qq - 1, tt - d)

    return chi(len(degrees), q, t)


# ---------------------------------------------------------------- fact files


@dataclass(frozen=True)
class Fact:
    value: int
    provenance: str


@dataclass
class FactStore:
    """Cohomology and Betti facts keyed by space id, each with provenance.

    Certificate metadata lines (``window``, ``parent``, ``evidence``) are kept
    verbatim in ``meta`` so serialized certificates ingest cleanly.
    """

    spaces: dict[str, SpaceDescriptor] = field(default_factory=dict)
    cells: dict[tuple[str, int, int, int], Fact] = field(default_factory=dict)
    betti: dict[tuple[str, int], Fact] = field(default_factory=dict)
    meta: list[tuple[str, ...]] = field(default_factory=list)
    name: str = "<facts>"

    def add_space(self, space: SpaceDescriptor) -> None:
        old = self.spaces.get(space.id)
        if old is not None and (old.dim, old.index) != (space.dim, space.index):
            raise FactConflict(f"space {space.id} declared twice with different dim/index")
        if old is None:
            self.spaces[space.id] = space

    def add_cell(self, space: str, p: int, q: int, t: int, value: int, provenance: str) -> None:
        if value < 0:
            raise ValueError("dimensions are nonnegative")
        key = (space, p, q, t)
        old = self.cells.get(key)
        if old is not None:
            if old.value != value:
                raise FactConflict(
                    f"h^{p}({space}, Omega^{q}({t})): {old.value} ({old.provenance}) vs {value} ({provenance})"
                )
            return
        self.cells[key] = Fact(value, provenance)

    def add_betti(self, space: str, i: int, value: int, provenance: str) -> None:
        key = (space, i)
        old = self.betti.get(key)
        if old is not None:
            if old.value != value:
                raise FactConflict(f"b_{i}({space}): {old.value} ({old.provenance}) vs {value} ({provenance})")
            return
        self.betti[key] = Fact(value, provenance)

    def lookup_cell(self, space: str, p: int, q: int, t: int) -> Fact | None:
        return self.cells.get((space, p, q, t))

    def lookup_betti(self, space: str, i: int) -> Fact | None:
        return self.betti.get((space, i))

    def without_cell(self, space: str, p: int, q: int, t: int) -> FactStore:
        cells = {k: v for k, v in self.cells.items() if k != (space, p, q, t)}
        return FactStore(dict(self.spaces), cells, dict(self.betti), list(self.meta), self.name)

    def without_betti(self, space: str, i: int) -> FactStore:
        betti = {k: v for k, v in self.betti.items() if k != (space, i)}
        return FactStore(dict(self.spaces), dict(self.cells), betti, list(self.meta), self.name)

    def merged(self, other: FactStore) -> FactStore:
        out = FactStore(dict(self.spaces), dict(self.cells), dict(self.betti), list(self.meta), self.name)
        for s in other.spaces.values():
            out.add_space(s)
        for (sp, p, q, t), f in other.cells.items():
            out.add_cell(sp, p, q, t, f.value, f.provenance)
        for (sp, i), f in other.betti.items():
            out.add_betti(sp, i, f.value, f.provenance)
        out.meta.extend(other.meta)
        return out

    def to_text(self) -> str:
        lines = []
        for s in sorted(self.spaces.values(), key=lambda s: s.id):
            lines.append(f"space {s.id} dim {s.dim} index {s.index}")
        for (sp, i), f in sorted(self.betti.items()):
            lines.append(f"betti {sp} b{i} {f.value}")
        for (sp, p, q, t), f in sorted(self.cells.items(), key=lambda kv: (kv[0][0], kv[0][3], kv[0][2], kv[0][1])):
            lines.append(format_cell_line(sp, p, q, t, f.value))
        for rec in self.meta:
            lines.append(" ".join(rec))
        return "\n".join(lines) + "\n"


def format_cell_line(space: str, p: int, q: int, t: int, value: int) -> str:
    if value == 0:
        return f"vanish {space} p {p} q {q} t {t}"
    return f"dim {space} p {p} q {q} t {t} = {value}"


_META_KEYWORDS = {"window", "parent", "evidence"}


def _int(tok: str, lineno: int, line: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FactParseError(lineno, line, f"expected an integer, got {tok!r}") from None


def _pqt(toks: list[str], lineno: int, line: str) -> tuple[int, int, int]:
    if len(toks) < 6 or toks[0] != "p" or toks[2] != "q" or toks[4] != "t":
        raise FactParseError(lineno, line, "expected 'p <p> q <q> t <t>'")
    return _int(toks[1], lineno, line), _int(toks[3], lineno, line), _int(toks[5], lineno, line)


def ingest_facts(text: str, source: str = "<facts>") -> FactStore:
    store = FactStore(name=source)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0]
        where = f"{source}:{lineno}"
        try:
            if head == "space":
                if len(toks) != 6 or toks[2] != "dim" or toks[4] != "index":
                    raise FactParseError(lineno, raw, "expected 'space <id> dim <n> index <r>'")
                store.add_space(
                    SpaceDescriptor(toks[1], _int(toks[3], lineno, raw), _int(toks[5], lineno, raw))
                )
            elif head == "betti":
                m = re.fullmatch(r"b(\d+)", toks[2]) if len(toks) == 4 else None
                if m is None:
                    raise FactParseError(lineno, raw, "expected 'betti <id> b<i> <value>'")
                store.add_betti(toks[1], int(m.group(1)), _int(toks[3], lineno, raw), where)
            elif head == "vanish":
                if len(toks) != 8:
                    raise FactParseError(lineno, raw, "expected 'vanish <id> p <p> q <q> t <t>'")
                p, q, t = _pqt(toks[2:], lineno, raw)
                store.add_cell(toks[1], p, q, t, 0, where)
            elif head == "dim":
                if len(toks) != 10 or toks[8] != "=":
                    raise FactParseError(lineno, raw, "expected 'dim <id> p <p> q <q> t <t> = <value>'")
                p, q, t = _pqt(toks[2:8], lineno, raw)
                value = _int(toks[9], lineno, raw)
                if value < 0:
                    raise FactParseError(lineno, raw, "negative dimension")
                store.add_cell(toks[1], p, q, t, value, where)
            elif head in _META_KEYWORDS:
                store.meta.append(tuple(toks))
            else:
                raise FactParseError(lineno, raw, f"unknown keyword {head!r}")
        except FactConflict as exc:
            raise FactConflict(f"{where}: {exc}") from None
        except ValueError as exc:
            if isinstance(exc, FactParseError):
                exc.source = source
                raise
            raise FactParseError(lineno, raw, str(exc), source) from None
    return store
