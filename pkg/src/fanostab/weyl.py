"""Cohomology of twisted forms on Grassmannians via Borel-Weil-Bott.

The cotangent bundle of ``G(k, n)`` (projective ``k``-planes in ``P^n``) is
``S (x) Q^*`` where ``0 -> S -> O^{n+1} -> Q -> 0`` is the tautological
sequence and ``rank S = k + 1``.  Its exterior powers split by the Cauchy
formula into irreducible homogeneous bundles, each handled by the dotted
Weyl action.  Projective space is ``G(0, n)``.
"""
from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from functools import lru_cache
from math import prod

Weight = tuple[int, ...]


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        parts = tuple(int(x) for x in self.parts)
        if any(x < 0 for x in parts):
            raise ValueError(f"negative part in {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts not weakly decreasing: {parts}")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def conjugate(self) -> Partition:
        if not self.parts:
            return Partition()
        return Partition(tuple(sum(1 for x in self.parts if x > i) for i in range(self.parts[0])))

    def padded(self, length: int) -> tuple[int, ...]:
        if len(self.parts) > length:
            raise ValueError(f"{self.parts} has more than {length} rows")
        return self.parts + (0,) * (length - len(self.parts))

    def fits(self, rows: int, cols: int) -> bool:
        return len(self.parts) <= rows and (not self.parts or self.parts[0] <= cols)


def partitions_in_box(size: int, rows: int, cols: int) -> Iterator[Partition]:
    """Partitions of ``size`` with at most ``rows`` rows and ``cols`` columns,
    in reverse lexicographic order."""

    def rec(remaining: int, max_part: int, rows_left: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        if rows_left == 0:
            return
        for first in range(min(remaining, max_part), 0, -1):
            for rest in rec(remaining - first, first, rows_left - 1):
                yield (first,) + rest

    if size < 0 or rows < 0 or cols < 0:
        return
    for parts in rec(size, cols, rows):
        yield Partition(parts)


def is_dominant(w: Weight) -> bool:
    return all(a >= b for a, b in zip(w, w[1:]))


def weyl_dimension(w: Weight) -> int:
    """Dimension of the irreducible GL(m) representation with highest weight ``w``.

    Evaluated exactly: the full numerator product is formed before dividing
    by the superfactorial.
    """
    w = tuple(w)
    if not is_dominant(w):
        raise ValueError(f"weight {w} is not dominant")
    m = len(w)
    num = prod(w[i] - w[j] + j - i for i in range(m) for j in range(i + 1, m))
    den = prod(j - i for i in range(m) for j in range(i + 1, m))
    q, r = divmod(num, den)
    assert r == 0, "Weyl dimension formula must be integral"
    return q


@dataclass(frozen=True)
class CohomologyClass:
    """Cohomology of one irreducible homogeneous bundle: zero, or ``dim``
    copies concentrated in a single ``degree``."""

    degree: int | None = None
    dim: int = 0

    def __post_init__(self) -> None:
        if (self.degree is None) != (self.dim == 0):
            raise ValueError("a nonzero class needs both a degree and a positive dim")
        if self.dim < 0 or (self.degree is not None and self.degree < 0):
            raise ValueError("degree and dim must be nonnegative")

    @property
    def is_zero(self) -> bool:
        return self.degree is None


ZERO = CohomologyClass()


@lru_cache(maxsize=None)
def bwb(w: Weight) -> CohomologyClass:
    w = tuple(w)
    m = len(w)
    shifted = [x + (m - 1 - i) for i, x in enumerate(w)]
    if len(set(shifted)) < m:
        return ZERO
    inversions = sum(1 for i in range(m) for j in range(i + 1, m) if shifted[i] < shifted[j])
    ordered = sorted(shifted, reverse=True)
    dominant = tuple(x - (m - 1 - i) for i, x in enumerate(ordered))
    return CohomologyClass(inversions, weyl_dimension(dominant))


def grassmann_dim(k: int, n: int) -> int:
    return (k + 1) * (n - k)


def _check_grassmannian(k: int, n: int) -> None:
    if not 0 <= k < n:
        raise ValueError(f"G({k},{n}) needs 0 <= k < n")


def omega_decompose(k: int, n: int, q: int, t: int) -> list[Weight]:
    """Highest weights of the irreducible summands of ``Omega^q(t)`` on ``G(k, n)``.

    A summand ``Sigma^{lambda'} Q^* (x) Sigma^lambda S (x) O(t)`` is encoded as
    ``(-reverse(lambda' padded to n-k), lambda padded to k+1 minus t)``.
    """
    _check_grassmannian(k, n)
    if q < 0:
        raise ValueError(f"form degree q={q} is negative")
    if q > grassmann_dim(k, n):
        return []
    weights = []
    for lam in partitions_in_box(q, k + 1, n - k):
        quot = tuple(-x for x in reversed(lam.conjugate().padded(n - k)))
        sub = tuple(x - t for x in lam.padded(k + 1))
        weights.append(quot + sub)
    return weights


@lru_cache(maxsize=None)
def _grassmann_cohomology(k: int, n: int, q: int, t: int) -> tuple[tuple[int, int], ...]:
    total: dict[int, int] = {}
    for w in omega_decompose(k, n, q, t):
        c = bwb(w)
        if not c.is_zero:
            total[c.degree] = total.get(c.degree, 0) + c.dim
    return tuple(sorted(total.items()))


def grassmann_cohomology(k: int, n: int, q: int, t: int) -> dict[int, int]:
    """``{p: h^p(G(k,n), Omega^q(t))}`` with zero entries omitted."""
    return dict(_grassmann_cohomology(k, n, q, t))


def grassmann_h(k: int, n: int, p: int, q: int, t: int) -> int:
    if q < 0 or q > grassmann_dim(k, n):
        return 0
    return grassmann_cohomology(k, n, q, t).get(p, 0)


def projective_cohomology(n: int, q: int, t: int) -> dict[int, int]:
    return grassmann_cohomology(0, n, q, t)


def grassmann_degree(k: int, n: int) -> int:
    """Degree of ``G(k, n)`` in the Pluecker embedding (standard tableaux of
    the ``(k+1) x (n-k)`` rectangle, by the hook length formula)."""
    _check_grassmannian(k, n)
    rows, cols = k + 1, n - k
    hooks = prod((rows - i) + (cols - j) - 1 for i in range(rows) for j in range(cols))
    num = 1
    for i in range(2, rows * cols + 1):
        num *= i
    return num // hooks


def lemma01_nonvanishing(n: int, p: int, q: int, t: int) -> bool:
    """Closed-form test for ``H^p(G(1,n), Omega^q(t)) != 0``."""
    top = 2 * (n - 1)
    if n < 2:
        raise ValueError("G(1,n) needs n >= 2")
    if not (0 <= p <= top and 0 <= q <= top):
        raise ValueError(f"(p, q) = ({p}, {q}) outside 0..{top}")
    if t == 0 and p == q:
        return True
    if p == 0 and t >= min(q + 1, (q + 1) // 2 + 2):
        return True
    if p == top and t <= max(-2 * n + q + 1, q // 2 - n - 1):
        return True
    if 0 < p < top:
        if p + 1 <= t <= n - p and q == 2 * p + t - 1:
            return True
        # Serre dual of the previous case; the bounds printed in the usual
        # statement (-p-1 <= t <= p-n) fail e.g. at H^1(G(1,2), O(-1)).
        if n - p - 2 <= t <= p - 2 * n + 1 and q == 2 * p + t - 2 * n + 3:
            return True
    return False
