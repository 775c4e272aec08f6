from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fanostab import weyl
from fanostab.weyl import Partition, bwb, grassmann_cohomology, grassmann_dim, grassmann_h, weyl_dimension


def hook_content_dim(parts: tuple[int, ...], m: int) -> int:
    """dim of the GL(m) irrep for a partition, by the hook-content formula."""
    lam = Partition(parts)
    conj = lam.conjugate().parts
    num = den = 1
    for i, row in enumerate(lam.parts):
        for j in range(row):
            num *= m + j - i
            den *= (row - j - 1) + (conj[j] - i - 1) + 1
    return num // den


def box_hodge(k: int, n: int) -> list[int]:
    """Coefficients of the Gaussian binomial [n+1 choose k+1]_x, i.e. the
    even Betti numbers of G(k, n)."""
    rows, cols = k + 1, n - k
    # count partitions in a rows x cols box by size
    table = {(0, c): [1] for c in range(cols + 1)}
    for r in range(1, rows + 1):
        table[(r, 0)] = [1]
        for c in range(1, cols + 1):
            # largest part < c, or largest part == c (remove first row of length c)
            a = table[(r, c - 1)]
            b = [0] * c + table[(r - 1, c)]
            size = max(len(a), len(b))
            table[(r, c)] = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(size)]
    return table[(rows, cols)]


partitions = st.lists(st.integers(0, 6), max_size=5).map(lambda xs: tuple(sorted(xs, reverse=True)))


@given(partitions, st.integers(0, 3))
def test_weyl_dimension_matches_hook_content(parts, extra):
    m = max(len(parts), 1) + extra
    padded = Partition(parts).padded(m)
    assert weyl_dimension(padded) == hook_content_dim(parts, m)


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=5).map(lambda xs: tuple(sorted(xs, reverse=True))), st.integers(-4, 4))
def test_weyl_dimension_shift_invariant(w, c):
    assert weyl_dimension(w) == weyl_dimension(tuple(x + c for x in w))


def test_weyl_dimension_rejects_non_dominant():
    with pytest.raises(ValueError):
        weyl_dimension((0, 1))


@given(st.integers(0, 4), st.integers(0, 4))
def test_partitions_in_box_total(rows, cols):
    total = sum(1 for s in range(rows * cols + 1) for _ in weyl.partitions_in_box(s, rows, cols))
    assert total == comb(rows + cols, rows)


@given(partitions)
def test_conjugate_is_involution(parts):
    lam = Partition(parts)
    assert lam.conjugate().conjugate() == lam
    assert lam.conjugate().size == lam.size


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, -1))
    assert Partition((3, 1, 0, 0)).parts == (3, 1)


def test_bwb_dominant_is_h0():
    c = bwb((2, 1, 0))
    assert (c.degree, c.dim) == (0, 8)


def test_bwb_singular_weight_vanishes():
    # rho-shift (1, 2, 0) -> (3, 3, 0) repeats
    assert bwb((1, 2, 0)).is_zero


def test_bwb_top_degree_on_p1():
    # H^1(P^1, O(-3)) has dimension 2
    assert grassmann_h(0, 1, 1, 0, -3) == 2


@pytest.mark.parametrize("k,n", [(0, 3), (1, 3), (1, 4), (2, 5), (1, 5)])
def test_rank_of_forms(k, n):
    big = grassmann_dim(k, n)
    for q in range(big + 1):
        # fibre of each summand is Sigma Q^* (x) Sigma S
        rank = sum(weyl_dimension(w[: n - k]) * weyl_dimension(w[n - k:]) for w in weyl.omega_decompose(k, n, q, 0))
        assert rank == comb(big, q)


@pytest.mark.parametrize("k,n", [(0, 4), (1, 3), (1, 4), (1, 5), (2, 5)])
def test_hodge_numbers_of_grassmannians(k, n):
    big = grassmann_dim(k, n)
    betti = box_hodge(k, n)
    for p in range(big + 1):
        for q in range(big + 1):
            want = betti[p] if p == q and p < len(betti) else 0
            assert grassmann_h(k, n, p, q, 0) == want


@pytest.mark.parametrize("n,deg", [(2, 1), (3, 2), (4, 5), (5, 14), (6, 42)])
def test_degree_of_lines_grassmannian(n, deg):
    assert weyl.grassmann_degree(1, n) == deg


@settings(max_examples=60)
@given(st.sampled_from([(0, 3), (1, 3), (1, 4), (2, 5)]), st.data())
def test_serre_duality(kn, data):
    k, n = kn
    big = grassmann_dim(k, n)
    p = data.draw(st.integers(0, big))
    q = data.draw(st.integers(0, big))
    t = data.draw(st.integers(-7, 7))
    assert grassmann_h(k, n, p, q, t) == grassmann_h(k, n, big - p, big - q, -t)


@settings(max_examples=60)
@given(st.integers(1, 7), st.integers(0, 7))
def test_sections_of_line_bundles_on_projective_space(n, t):
    assert grassmann_cohomology(0, n, 0, t) == {0: comb(n + t, n)}


@given(st.integers(2, 6), st.data())
def test_closed_form_matches_bwb(n, data):
    top = 2 * (n - 1)
    p, q = data.draw(st.integers(0, top)), data.draw(st.integers(0, top))
    t = data.draw(st.integers(-12, 12))
    assert weyl.lemma01_nonvanishing(n, p, q, t) == (grassmann_h(1, n, p, q, t) != 0)


def test_invalid_grassmannian():
    with pytest.raises(ValueError):
        weyl.omega_decompose(3, 3, 1, 0)
    with pytest.raises(ValueError):
        weyl.lemma01_nonvanishing(1, 0, 0, 0)
