import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fanostab.special import (
    NotSpecial,
    base_certificate,
    certificate_chain,
    flenner_predicate,
    is_special,
    load_certificate,
    propagate_cyclic,
    propagate_section,
    special_cells,
)
from fanostab.tables import FootprintError, euler_recursion, grassmannian, projective_space, weyl_table


def test_cubic_fourfold_is_special():
    cert = certificate_chain(projective_space(5), [("section", 3)], (-8, 8))
    assert is_special(cert.table) == (True, [])
    assert (cert.dim, cert.space.index) == (4, 3)


def test_double_solid_is_special():
    cert = certificate_chain(projective_space(3), [("cover", 2, 3)], (-6, 6))
    assert is_special(cert.table)[0]
    assert cert.space.index == 1


def test_grassmannian_is_not_special():
    with pytest.raises(NotSpecial) as err:
        base_certificate(grassmannian(1, 4), (-4, 4))
    bad = {(v.condition, v.cell) for v in err.value.violations}
    # h^{2,2}(G(1,4)) = 2
    assert ("c", (2, 2, 0)) in bad
    table = weyl_table(grassmannian(1, 4), (-4, 4))
    assert table.get(2, 2, 0) == 2


def test_special_cells_cover_the_definition():
    cells = {(c, cell) for c, cell, _ in special_cells(4, (-1, 1))}
    assert ("a", (1, 1, 1)) in cells
    assert ("b", (1, 2, 0)) in cells
    assert ("c", (1, 1, 0)) in cells
    # middle row and the pure h^{p,q} with p + q = dim are unconstrained
    assert not any(cell == (2, 2, 0) for _, cell in cells)
    assert not any(cell[0] in (0, 4) for c, cell in cells if c != "c")


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 7), st.lists(st.integers(2, 4), min_size=1, max_size=2))
def test_section_certificates_agree_with_flenner(big_n, degs):
    if big_n - len(degs) < 3:
        return
    cert = certificate_chain(projective_space(big_n), [("section", d) for d in degs], (-6, 6))
    for (p, q, t), v in cert.table.known_cells().items():
        fl = flenner_predicate(cert.dim, p, q, t)
        if fl.is_zero:
            assert v == 0, (p, q, t)
        elif fl.expected is not None:
            assert v == fl.expected


def implied_cells(cert, degs, ambient):
    """Rows with a single unknown cell, solved through chi from the Euler
    recursion on the ambient space."""
    out = {}
    for t in range(cert.window[0], cert.window[1] + 1):
        for q in range(cert.dim + 1):
            row = [cert.table.get(p, q, t) for p in range(cert.dim + 1)]
            unknown = [p for p, v in enumerate(row) if v is None]
            if len(unknown) != 1:
                continue
            (p,) = unknown
            rest = sum((-1) ** i * v for i, v in enumerate(row) if v is not None)
            out[(p, q, t)] = (-1) ** p * (euler_recursion(ambient, degs, q, t) - rest)
    return out


@pytest.mark.parametrize("big_n,degs", [(4, (3,)), (5, (2, 2)), (5, (3,)), (6, (2, 3)), (5, (4,))])
def test_certificate_rows_are_consistent_with_euler_characteristic(big_n, degs):
    cert = certificate_chain(projective_space(big_n), [("section", d) for d in degs], (-5, 5))
    implied = implied_cells(cert, degs, weyl_table(projective_space(big_n), (-25, 25)))
    assert implied
    assert all(v >= 0 for v in implied.values()), implied


def test_middle_hodge_numbers_of_cubics():
    ambient4 = weyl_table(projective_space(4), (-25, 25))
    three = certificate_chain(projective_space(4), [("section", 3)], (-4, 4))
    assert implied_cells(three, (3,), ambient4)[(2, 1, 0)] == 5
    ambient5 = weyl_table(projective_space(5), (-25, 25))
    four = certificate_chain(projective_space(5), [("section", 3)], (-4, 4))
    assert implied_cells(four, (3,), ambient5)[(3, 1, 0)] == 1


def test_cyclic_cover_of_quadric():
    quad = certificate_chain(projective_space(5), [("section", 2)], (-6, 6))
    cover = propagate_cyclic(quad, 2, 2)
    assert cover.space.index == 2
    assert is_special(cover.table)[0]


def test_certificate_round_trip():
    cert = certificate_chain(projective_space(4), [("section", 3)], (-6, 6))
    again = load_certificate(cert.to_text())
    assert again.table.cells == cert.table.cells
    assert again.evidence == cert.evidence
    assert again.origin == "section 3"
    assert again.to_text() == cert.to_text().replace(f"parent {cert.space.id} P(4) section 3\n", "")


def test_every_special_cell_has_evidence():
    cert = certificate_chain(projective_space(5), [("section", 2), ("cover", 2, 1)], (-4, 4))
    for _, cell, _ in special_cells(cert.dim, cert.window):
        assert cell in cert.evidence
    counts = cert.conditions()
    assert set(counts) == {"a", "b", "c"}


def test_window_must_fit_inside_parent():
    base = base_certificate(projective_space(5), (-2, 2))
    assert propagate_section(base, 3).window == (-2, 2)
    with pytest.raises(FootprintError):
        propagate_section(base, 3, (-3, 3))
    with pytest.raises(ValueError):
        propagate_section(base, 3, (1, 2))


def test_small_dimension_rejected():
    with pytest.raises(ValueError):
        base_certificate(projective_space(2))
    with pytest.raises(ValueError):
        propagate_section(base_certificate(projective_space(3)), 2)
