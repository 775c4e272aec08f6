from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fanostab.tables import (
    CohomologyTable,
    FactConflict,
    FactParseError,
    FootprintError,
    SerreContradiction,
    cyclic_cover,
    euler_recursion,
    format_cell_line,
    grassmannian,
    ingest_facts,
    kodaira_nakano_zone,
    parse_space,
    projective_space,
    section,
    serre_close,
    weyl_table,
)


def binom_poly(x: int, n: int) -> int:
    """binomial(x, n) as a polynomial in x, valid for negative x."""
    num = 1
    for i in range(n):
        num *= x - i
    return num // factorial(n)


def test_parse_space():
    assert parse_space("P(4)") == projective_space(4)
    g = parse_space(" G( 1 , 5 ) ")
    assert (g.dim, g.index, g.degree) == (8, 6, 14)
    for bad in ("Q(3)", "P(0)", "G(2,2)", "P(1,2)", "G(3)"):
        with pytest.raises(ValueError):
            parse_space(bad)


def test_section_and_cover_invariants():
    x = section(section(grassmannian(1, 4), 2), 1)
    assert (x.dim, x.index, x.degree) == (4, 2, 10)
    c = cyclic_cover(projective_space(3), 2, 2)
    assert (c.dim, c.index, c.degree) == (3, 2, 2)
    with pytest.raises(ValueError):
        section(projective_space(3), 0)


def test_table_rejects_out_of_range_cells():
    t = CohomologyTable(projective_space(2), (-1, 1))
    with pytest.raises(ValueError):
        t.set(0, 3, 0, 1)
    with pytest.raises(ValueError):
        t.set(0, 0, 2, 1)
    with pytest.raises(ValueError):
        CohomologyTable(projective_space(2), (1, 0))


def test_weyl_table_is_serre_closed():
    table = weyl_table(grassmannian(1, 4), (-4, 4))
    assert serre_close(table).cells == table.cells


def test_serre_contradiction_detected():
    table = weyl_table(projective_space(3), (-2, 2))
    table.cells[(3, 3, 0)] = 5
    with pytest.raises(SerreContradiction):
        serre_close(table)


def test_serre_close_fills_duals():
    t = CohomologyTable(projective_space(3), (-2, 2))
    t.set(0, 1, 2, 6)
    filled = serre_close(t)
    assert filled.get(3, 2, -2) == 6


def test_kodaira_nakano_zone():
    assert kodaira_nakano_zone(4, 3, 2, 1) == 0
    assert kodaira_nakano_zone(4, 1, 1, -1) == 0
    assert kodaira_nakano_zone(4, 2, 2, 1) is None


@pytest.mark.parametrize("big_n,d", [(3, 2), (3, 4), (4, 3), (5, 2), (6, 5)])
def test_euler_recursion_structure_sheaf(big_n, d):
    ambient = weyl_table(projective_space(big_n), (-12, 12))
    for t in range(-3, 4):
        want = binom_poly(big_n + t, big_n) - binom_poly(big_n + t - d, big_n)
        assert euler_recursion(ambient, [d], 0, t) == want


@pytest.mark.parametrize(
    "big_n,degs,q,chi",
    [
        (3, (4,), 1, -20),  # K3: h^{1,1} = 20
        (3, (3,), 1, -7),  # cubic surface
        (4, (5,), 1, 100),  # quintic threefold: -1 + 101
        (5, (3, 3), 1, -1 + 73),  # (3,3) Calabi-Yau threefold: h^{2,1} = 73
        (5, (2, 3), 1, -1 + 20),  # genus 4 Fano threefold: h^{1,2} = 20
    ],
)
def test_euler_recursion_hodge(big_n, degs, q, chi):
    ambient = weyl_table(projective_space(big_n), (-15, 15))
    assert euler_recursion(ambient, degs, q, 0) == chi


def test_euler_recursion_needs_window():
    ambient = weyl_table(projective_space(3), (-1, 1))
    with pytest.raises(FootprintError):
        euler_recursion(ambient, [4], 0, 0)


def test_ingest_and_serialize_round_trip():
    text = """# comment
space S dim 4 index 2
betti S b2 1
vanish S p 0 q 2 t 1
dim S p 2 q 2 t 0 = 2   # trailing comment
window S -3:3
"""
    store = ingest_facts(text, "mem")
    assert store.lookup_cell("S", 0, 2, 1).value == 0
    assert store.lookup_cell("S", 2, 2, 0).provenance == "mem:5"
    assert store.lookup_betti("S", 2).value == 1
    again = ingest_facts(store.to_text())
    assert again.cells.keys() == store.cells.keys()
    assert again.meta == [("window", "S", "-3:3")]


cells = st.lists(
    st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(-6, 6), st.integers(0, 50)),
    max_size=30,
    unique_by=lambda c: c[:3],
)


@given(cells)
def test_fact_lines_round_trip(entries):
    text = "space X dim 4 index 1\n" + "\n".join(format_cell_line("X", *e) for e in entries)
    store = ingest_facts(text)
    assert {k[1:]: f.value for k, f in store.cells.items()} == {e[:3]: e[3] for e in entries}
    assert ingest_facts(store.to_text()).cells.keys() == store.cells.keys()


def test_conflicting_facts():
    with pytest.raises(FactConflict):
        ingest_facts("vanish X p 0 q 1 t 1\ndim X p 0 q 1 t 1 = 3\n", "f")
    # repeating a fact is harmless
    ingest_facts("vanish X p 0 q 1 t 1\nvanish X p 0 q 1 t 1\n")


@pytest.mark.parametrize(
    "line",
    ["vanish X p 0 q 1", "dim X p 0 q 1 t 1 3", "dim X p 0 q 1 t 1 = -2", "frobnicate X", "vanish X p a q 1 t 1", "betti X 2 1"],
)
def test_parse_errors_name_source_and_line(line):
    with pytest.raises(FactParseError) as err:
        ingest_facts("space X dim 3 index 1\n" + line + "\n", "broken.facts")
    assert err.value.lineno == 2
    assert "broken.facts:2" in str(err.value)


def test_h0_line_bundles_on_grassmannian():
    # Borel-Weil: H0(G(1,3), O(1)) is the Pluecker space of dimension 6
    table = weyl_table(grassmannian(1, 3), (0, 1))
    assert table.get(0, 0, 1) == comb(4, 2)
