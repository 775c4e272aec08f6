"""Special cohomology: the Bott-type vanishing pattern and its propagation.

A manifold of dimension ``n >= 3`` has special cohomology when

* (a) ``H^p(Omega^q(t)) = 0`` for ``0 < p < n``, ``p + q != n``, ``t != 0``;
* (b) ``H^p(Omega^q) = 0`` for ``0 < p < n``, ``p + q != n``, ``p != q``;
* (c) ``H^p(Omega^p) = C`` for ``0 <= p <= n``, ``2p != n``.

Certificates carry one evidence entry per cell of these ranges, so that a
consumer can ask why a given cell vanishes.
"""
from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

from .tables import (
    Cell,
    CohomologyTable,
    FootprintError,
    SpaceDescriptor,
    cyclic_cover,
    ingest_facts,
    kodaira_nakano_zone,
    section,
    weyl_table,
    format_cell_line,
)


class InsufficientTable(ValueError):
    pass


class PropagationError(ValueError):
    pass


class NotSpecial(ValueError):
    def __init__(self, space: SpaceDescriptor, violations: list[Violation]):
        first = ", ".join(str(v) for v in violations[:3])
        super().__init__(f"{space.id} does not have special cohomology: {first}")
        self.violations = violations


@dataclass(frozen=True)
class Violation:
    condition: str
    cell: Cell
    value: int
    expected: int

    def __str__(self) -> str:
        return f"({self.condition}) h^{self.cell[0]}(Omega^{self.cell[1]}({self.cell[2]})) = {self.value}, expected {self.expected}"


def special_cells(dim: int, window: tuple[int, int]) -> Iterator[tuple[str, Cell, int]]:
    """Every ``(condition, cell, expected value)`` the definition constrains
    inside the window."""
    lo, hi = window
    for t in range(lo, hi + 1):
        for q in range(dim + 1):
            for p in range(1, dim):
                if p + q == dim:
                    continue
                if t != 0:
                    yield "a", (p, q, t), 0
                elif p != q:
                    yield "b", (p, q, 0), 0
    if lo <= 0 <= hi:
        for p in range(dim + 1):
            if 2 * p != dim:
                yield "c", (p, p, 0), 1


def is_special(table: CohomologyTable, dim: int | None = None) -> tuple[bool, list[Violation]]:
    dim = table.dim if dim is None else dim
    if dim != table.dim:
        raise ValueError(f"table is for dimension {table.dim}, not {dim}")
    if not table.in_window(0):
        raise InsufficientTable(f"window {table.window} misses t = 0")
    violations = []
    for cond, cell, expected in special_cells(dim, table.window):
        v = table.get(*cell)
        if v is None:
            raise InsufficientTable(f"{table.space.id}: cell {cell} needed by ({cond}) is unknown")
        if v != expected:
            violations.append(Violation(cond, cell, v, expected))
    return not violations, violations


@dataclass(frozen=True)
class FlennerValue:
    """``value`` is ``0`` (vanishes) or ``None`` (no claim); ``expected``
    annotates the Hodge classes ``H^q(Omega^q) = C``."""

    value: int | None
    expected: int | None = None

    @property
    def is_zero(self) -> bool:
        return self.value == 0


def flenner_predicate(n: int, p: int, q: int, t: int) -> FlennerValue:
    """Vanishing pattern of ``H^p(Omega^q(t))`` on a smooth (weighted)
    complete intersection of dimension ``n``."""
    if not (0 <= p <= n and 0 <= q <= n):
        raise ValueError(f"(p, q) = ({p}, {q}) outside 0..{n}")
    inner = 0 < p < n and p + q != n
    if (inner and p != q) or (inner and t != 0):
        return FlennerValue(0)
    if (p + q > n and t > q - p) or (p + q < n and t < q - p):
        return FlennerValue(0)
    if p == q and t == 0 and 2 * p != n:
        return FlennerValue(None, 1)
    return FlennerValue(None)


# ---------------------------------------------------------------- certificates


@dataclass(frozen=True)
class Evidence:
    rule: str
    premises: tuple[str, ...] = ()


def _ref(space: str, p: int, q: int, t: int) -> str:
    return f"{space}:{p},{q},{t}"


@dataclass
class SpecialCohomologyCertificate:
    space: SpaceDescriptor
    window: tuple[int, int]
    table: CohomologyTable
    evidence: dict[Cell, Evidence]
    parent: SpecialCohomologyCertificate | None = None
    origin: str = "base"

    @property
    def dim(self) -> int:
        return self.space.dim

    def conditions(self) -> dict[str, dict[str, int]]:
        """Per condition, how many cells each rule backs."""
        out: dict[str, dict[str, int]] = {"a": {}, "b": {}, "c": {}}
        for cond, cell, _ in special_cells(self.dim, self.window):
            rule = self.evidence[cell].rule
            out[cond][rule] = out[cond].get(rule, 0) + 1
        return out

    def lookup(self, p: int, q: int, t: int) -> tuple[int, str]:
        """Value of a cell with a premise reference; outside the window only
        Kodaira-Nakano may answer."""
        n = self.dim
        if not (0 <= p <= n and 0 <= q <= n):
            return 0, "zero-sheaf"
        if self.table.in_window(t):
            v = self.table.get(p, q, t)
            if v is not None:
                return v, _ref(self.space.id, p, q, t)
        if kodaira_nakano_zone(n, p, q, t) == 0:
            return 0, f"kodaira-nakano:{_ref(self.space.id, p, q, t)}"
        if self.table.in_window(t):
            raise PropagationError(f"{self.space.id}: cell {(p, q, t)} is unknown")
        raise FootprintError(f"{self.space.id}: cell {(p, q, t)} lies outside window {self.window}")

    def to_text(self) -> str:
        sid = self.space.id
        lines = [
            "# special cohomology certificate",
            f"space {sid} dim {self.dim} index {self.space.index}",
            f"window {sid} {self.window[0]}:{self.window[1]}",
        ]
        if self.parent is not None:
            lines.append(f"parent {sid} {self.parent.space.id} {self.origin}")
        for cell, v in self.table.known_cells().items():
            lines.append(format_cell_line(sid, *cell, v))
        for cell in sorted(self.evidence, key=lambda c: (c[2], c[1], c[0])):
            ev = self.evidence[cell]
            lines.append(" ".join(["evidence", sid, "p", str(cell[0]), "q", str(cell[1]), "t", str(cell[2]), ev.rule, *ev.premises]))
        return "\n".join(lines) + "\n"


def load_certificate(text: str, source: str = "<certificate>") -> SpecialCohomologyCertificate:
    """Rebuild a certificate from its serialized form (parent as id only)."""
    store = ingest_facts(text, source)
    if len(store.spaces) != 1:
        raise ValueError("a certificate declares exactly one space")
    (space,) = store.spaces.values()
    window = None
    evidence: dict[Cell, Evidence] = {}
    origin = "base"
    for rec in store.meta:
        if rec[0] == "window":
            lo, hi = rec[2].split(":")
            window = (int(lo), int(hi))
        elif rec[0] == "parent":
            origin = " ".join(rec[3:])
        elif rec[0] == "evidence":
            cell = (int(rec[3]), int(rec[5]), int(rec[7]))
            evidence[cell] = Evidence(rec[8], tuple(rec[9:]))
    if window is None:
        raise ValueError("certificate lacks a window line")
    table = CohomologyTable(space, window)
    for (sid, p, q, t), fact in store.cells.items():
        table.set(p, q, t, fact.value)
    return SpecialCohomologyCertificate(space, window, table, evidence, None, origin)


def base_certificate(space: SpaceDescriptor, window: tuple[int, int] = (-10, 10)) -> SpecialCohomologyCertificate:
    """Certificate for a projective space read off its BWB table."""
    if space.dim < 3:
        raise ValueError(f"{space.id}: special cohomology needs dimension >= 3")
    table = weyl_table(space, window)
    ok, violations = is_special(table)
    if not ok:
        raise NotSpecial(space, violations)
    evidence = {cell: Evidence("bwb", (_ref(space.id, *cell),)) for _, cell, _ in special_cells(space.dim, window)}
    return SpecialCohomologyCertificate(space, window, table, evidence)


def _check_window(window: tuple[int, int]) -> int:
    lo, hi = window
    if not lo <= 0 <= hi:
        raise ValueError(f"window {window} must contain 0")
    return max(-lo, hi)


def _finish(
    space: SpaceDescriptor,
    window: tuple[int, int],
    reach: int,
    values: dict[Cell, int],
    evidence: dict[Cell, Evidence],
    parent: SpecialCohomologyCertificate,
    origin: str,
) -> SpecialCohomologyCertificate:
    """Fill the ``p + q > n`` half by Kodaira-Nakano or Serre duality, then
    cut to the requested window and re-check the definition."""
    n = space.dim
    for t in range(-reach, reach + 1):
        for q in range(n + 1):
            for p in range(n + 1):
                cell = (p, q, t)
                if cell in values:
                    continue
                if kodaira_nakano_zone(n, p, q, t) == 0:
                    values[cell] = 0
                    evidence[cell] = Evidence("kodaira-nakano")
                elif p + q > n:
                    dual = (n - p, n - q, -t)
                    if dual in values:
                        values[cell] = values[dual]
                        evidence[cell] = Evidence("serre", (_ref(space.id, *dual),))
    table = CohomologyTable(space, window)
    for cell, v in values.items():
        if table.in_window(cell[2]):
            table.cells[cell] = v
    ok, violations = is_special(table)
    if not ok:
        raise PropagationError(f"{space.id}: derived table violates the definition: {violations[0]}")
    kept = {cell: evidence[cell] for _, cell, _ in special_cells(n, window)}
    return SpecialCohomologyCertificate(space, window, table, kept, parent, origin)


def _need_zero(cert: SpecialCohomologyCertificate, p: int, q: int, t: int) -> str:
    v, ref = cert.lookup(p, q, t)
    if v != 0:
        raise PropagationError(f"{cert.space.id}: premise {(p, q, t)} is {v}, not zero")
    return ref


def propagate_section(
    cert_Y: SpecialCohomologyCertificate, d: int, window: tuple[int, int] | None = None
) -> SpecialCohomologyCertificate:
    """Certificate for a smooth member ``X`` of ``|O_Y(d)|``.

    Works through the restriction sequence ``Omega^q_Y(t-d) -> Omega^q_Y(t)
    -> Omega^q_Y|X(t)`` and the conormal sequence ``Omega^(q-1)_X(t-d) ->
    Omega^q_Y|X(t) -> Omega^q_X(t)``, by induction on the twist.
    """
    if d < 1:
        raise ValueError("section degree must be positive")
    n = cert_Y.dim - 1
    if n < 3:
        raise ValueError(f"a section of {cert_Y.space.id} has dimension {n} < 3")
    window = cert_Y.window if window is None else window
    reach = _check_window(window)
    space = section(cert_Y.space, d)
    X = space.id
    values: dict[Cell, int] = {}
    evidence: dict[Cell, Evidence] = {}

    def x_zero(p: int, q: int, t: int) -> str:
        if q < 0 or q > n or p > n:
            return "zero-sheaf"
        if kodaira_nakano_zone(n, p, q, t) == 0:
            return f"kodaira-nakano:{_ref(X, p, q, t)}"
        assert values.get((p, q, t)) == 0, (p, q, t)
        return _ref(X, p, q, t)

    for t in range(-reach, reach + 1):
        for q in range(n + 1):
            for p in range(n + 1):
                if p + q >= n:
                    continue
                cell = (p, q, t)
                if t == 0:
                    v, ref = cert_Y.lookup(p, q, 0)
                    values[cell] = v
                    evidence[cell] = Evidence("lefschetz-restriction", (ref,))
                elif p == 0:
                    continue
                elif t < 0:
                    values[cell] = 0
                    evidence[cell] = Evidence("kodaira-nakano")
                elif q == 0:
                    prem = (_need_zero(cert_Y, p, 0, t), _need_zero(cert_Y, p + 1, 0, t - d))
                    values[cell] = 0
                    evidence[cell] = Evidence("structure-sequence", prem)
                else:
                    prem = [_need_zero(cert_Y, p, q, t), _need_zero(cert_Y, p + 1, q, t)]
                    s = t - d
                    if s == 0:
                        values[cell] = 0
                        evidence[cell] = Evidence("cupping-hard-lefschetz", tuple(prem))
                    else:
                        prem.append(_need_zero(cert_Y, p + 1, q, s))
                        prem.append(x_zero(p + 1, q - 1, s))
                        values[cell] = 0
                        evidence[cell] = Evidence("twist-induction", tuple(prem))
    return _finish(space, window, reach, values, evidence, cert_Y, f"section {d}")


def propagate_cyclic(
    cert_Y: SpecialCohomologyCertificate, k: int, d: int, window: tuple[int, int] | None = None
) -> SpecialCohomologyCertificate:
    """Certificate for the ``k``-cyclic cover of ``Y`` branched along a
    smooth member of ``|O(kd)|`` with the pulled-back polarization."""
    if k < 1 or d < 1:
        raise ValueError("cover needs k >= 1 and d >= 1")
    if k == 1:
        return cert_Y
    n = cert_Y.dim
    window = cert_Y.window if window is None else window
    reach = _check_window(window)
    space = cyclic_cover(cert_Y.space, k, d)
    X = space.id
    values: dict[Cell, int] = {}
    evidence: dict[Cell, Evidence] = {}

    def push_zero(p: int, q: int, t: int) -> tuple[str, tuple[str, ...]]:
        # the pushed-forward relative forms split into twists of Y-forms
        prem = []
        cupped = False
        for j in range(k):
            if t - j * d == 0:
                cupped = True
            else:
                prem.append(_need_zero(cert_Y, p, q, t - j * d))
        if q >= 1:
            for j in range(1, k + 1):
                if t - j * d == 0:
                    cupped = True
                else:
                    prem.append(_need_zero(cert_Y, p, q - 1, t - j * d))
        return ("split-layer-cupping" if cupped else "split-layer"), tuple(prem)

    def x_zero(p: int, q: int, t: int) -> str:
        if q < 0 or q > n or p > n:
            return "zero-sheaf"
        if kodaira_nakano_zone(n, p, q, t) == 0:
            return f"kodaira-nakano:{_ref(X, p, q, t)}"
        assert values.get((p, q, t)) == 0, (p, q, t)
        return _ref(X, p, q, t)

    for t in range(-reach, reach + 1):
        for q in range(n + 1):
            for p in range(n + 1):
                if p + q >= n:
                    continue
                cell = (p, q, t)
                if t == 0:
                    if p == 0:
                        if q == 0:
                            values[cell] = 1
                            evidence[cell] = Evidence("connected")
                        continue
                    v, ref = cert_Y.lookup(p, q, 0)
                    values[cell] = v
                    evidence[cell] = Evidence("invariant-part", (ref,))
                elif p == 0:
                    continue
                elif t < 0:
                    values[cell] = 0
                    evidence[cell] = Evidence("kodaira-nakano")
                elif t == k * d:
                    prem = [_need_zero(cert_Y, p, q - 1, 0)] if q >= 1 and p != q - 1 else []
                    values[cell] = 0
                    evidence[cell] = Evidence("cover-cupping", tuple(prem))
                else:
                    rule, prem = push_zero(p, q, t)
                    values[cell] = 0
                    evidence[cell] = Evidence("cover-induction", (f"{rule}[{';'.join(prem)}]", x_zero(p + 1, q - 1, t - k * d)))
    return _finish(space, window, reach, values, evidence, cert_Y, f"cover {k} {d}")


def certificate_chain(
    start: SpaceDescriptor, steps: list[tuple], window: tuple[int, int] = (-10, 10)
) -> SpecialCohomologyCertificate:
    """``steps`` holds ``("section", d)`` or ``("cover", k, d)`` entries."""
    cert = base_certificate(start, window)
    for step in steps:
        if step[0] == "section":
            cert = propagate_section(cert, step[1], window)
        elif step[0] == "cover":
            cert = propagate_cyclic(cert, step[1], step[2], window)
        else:
            raise ValueError(f"unknown step {step!r}")
    return cert
