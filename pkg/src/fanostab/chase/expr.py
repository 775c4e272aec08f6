"""Symbolic sheaves and cohomology groups used by the chase engine."""
from __future__ import annotations

import re
from typing import NamedTuple

# Omega(X,q,t)       twisted q-forms on X
# OmegaR(Y|X,q,t)    q-forms of the ambient Y restricted to the section X
# Push(X,q,t)        pushforward of the relative forms of a cyclic cover X
# CoverSub(X,q,t)    the split subsheaf: sum of Omega^q_Y(t - j d), 0 <= j < k
# CoverQuot(X,q,t)   the split quotient: sum of Omega^(q-1)_Y(t - j d), 0 < j <= k
# Zero(tag,0,0)      boundary terms of a long exact sequence
KINDS = ("Omega", "OmegaR", "Push", "CoverSub", "CoverQuot", "Zero")


class Sheaf(NamedTuple):
    kind: str
    space: str
    q: int
    t: int
    ambient: str = ""

    def twist(self, dt: int) -> Sheaf:
        return self._replace(t=self.t + dt)

    def __str__(self) -> str:
        if self.kind == "OmegaR":
            return f"OmegaR({self.ambient}|{self.space},{self.q},{self.t})"
        if self.kind == "Zero":
            return f"Zero({self.space})"
        return f"{self.kind}({self.space},{self.q},{self.t})"


class Group(NamedTuple):
    sheaf: Sheaf
    p: int

    def __str__(self) -> str:
        return f"H{self.p}({self.sheaf})"


def omega(space: str, q: int, t: int) -> Sheaf:
    return Sheaf("Omega", space, q, t)


def omega_r(ambient: str, space: str, q: int, t: int) -> Sheaf:
    return Sheaf("OmegaR", space, q, t, ambient)


def H(p: int, sheaf: Sheaf) -> Group:
    return Group(sheaf, p)


_SHEAF_RE = re.compile(r"^(\w+)\(\s*([^)]*)\)$")
_GROUP_RE = re.compile(r"^H(-?\d+)\((.*)\)$")


def parse_sheaf(text: str) -> Sheaf:
    m = _SHEAF_RE.match(text.strip())
    if not m:
        raise ValueError(f"cannot parse sheaf {text!r}")
    kind, body = m.groups()
    args = [a.strip() for a in body.split(",")]
    if kind == "O" and len(args) == 2:
        return omega(args[0], 0, int(args[1]))
    if kind not in KINDS or kind == "Zero":
        raise ValueError(f"unknown sheaf kind {kind!r} in {text!r}")
    if len(args) != 3:
        raise ValueError(f"{kind} takes three arguments: {text!r}")
    where, q, t = args
    try:
        qi, ti = int(q), int(t)
    except ValueError:
        raise ValueError(f"non-integer index in {text!r}") from None
    if kind == "OmegaR":
        if where.count("|") != 1:
            raise ValueError(f"OmegaR needs 'ambient|section': {text!r}")
        amb, sec = (s.strip() for s in where.split("|"))
        return omega_r(amb, sec, qi, ti)
    if "|" in where:
        raise ValueError(f"{kind} takes a single space: {text!r}")
    return Sheaf(kind, where, qi, ti)


def parse_group(text: str) -> Group:
    m = _GROUP_RE.match(text.strip())
    if not m:
        raise ValueError(f"cannot parse cohomology group {text!r}; expected H<p>(<sheaf>)")
    return Group(parse_sheaf(m.group(2)), int(m.group(1)))
