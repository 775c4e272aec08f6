import re
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fanostab.resources import Resources, facts_dir, load_store
from fanostab.stability import (
    MAX_DIM,
    FanoProfile,
    InvalidProfile,
    Outcome,
    SubsheafProfile,
    coindex3_classify,
    cyclic_stability,
    del_pezzo_verdict,
    fano_stability,
    h0_threshold_stability,
    hypersurface_stability,
    lemma26_criterion,
    prop24_analyze,
    reid_bound,
    slicing_search,
    slope,
    wahl_bound,
)


def steps_point_backwards(verdict) -> bool:
    for i, r in enumerate(verdict.reasons, start=1):
        for u in r.using:
            k = u if isinstance(u, int) else (int(u[5:]) if str(u).startswith("STEP ") else None)
            if k is not None and not 1 <= k < i:
                return False
    return True


# ---------------------------------------------------------------- profiles


def test_profile_genus_from_degree():
    p = FanoProfile(5, 3, degree=10)
    assert p.genus == 6 and p.label == "n=5 r=3 g=6"


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n=4, r=2, genus=11),
        dict(n=4, r=2, genus=13),
        dict(n=4, r=2, genus=12),
        dict(n=5, r=2, genus=6),
        dict(n=7, r=5, genus=6),
        dict(n=4, r=2, genus=6, degree=12),
        dict(n=4, r=2, degree=9),
        dict(n=3, r=5),
        dict(n=3, r=0),
    ],
)
def test_invalid_profiles(kwargs):
    with pytest.raises(InvalidProfile):
        FanoProfile(kwargs.pop("n"), kwargs.pop("r"), **kwargs)


def test_max_dimensions_are_admissible_and_sharp():
    for g, top in MAX_DIM.items():
        if g == 12:
            FanoProfile(3, 1, genus=12)
            continue
        FanoProfile(top, top - 2, genus=g)
        with pytest.raises(InvalidProfile):
            FanoProfile(top + 1, top - 1, genus=g)


def test_slope_is_exact():
    assert slope(2, 4) == Fraction(1, 2)
    with pytest.raises(ValueError):
        slope(1, 0)


# ---------------------------------------------------------------- threshold


def test_threshold_asks_only_binding_cells():
    asked = []

    def oracle(q, t):
        asked.append((q, t))
        return 0

    v = h0_threshold_stability(oracle, 4, 3)
    assert v.outcome == Outcome.STABLE
    assert asked == [(q, t) for q in range(1, 4) for t in range(0, (3 * q) // 4 + 1)]


def test_semistable_variant_drops_integral_boundary():
    # q r / n = 1 at q = 2 on a 4-fold of index 2: the semistable test skips t = 1
    asked = []
    h0_threshold_stability(lambda q, t: asked.append((q, t)) or 0, 4, 2, semistable=True)
    assert (2, 1) not in asked
    asked.clear()
    h0_threshold_stability(lambda q, t: asked.append((q, t)) or 0, 4, 2)
    assert (2, 1) in asked


@settings(max_examples=50)
@given(st.integers(2, 9), st.data())
def test_threshold_window_property(n, data):
    r = data.draw(st.integers(1, n - 1))
    asked = []
    h0_threshold_stability(lambda q, t: asked.append((q, t)) or 0, n, r)
    for q, t in asked:
        assert 0 <= t and Fraction(t) <= Fraction(q * r, n)


def test_threshold_reports_the_failing_cell():
    v = h0_threshold_stability(lambda q, t: 3 if (q, t) == (2, 1) else 0, 4, 3)
    assert v.outcome == Outcome.UNKNOWN
    assert "H0(Omega^2(1)) = 3" in v.reasons[-1].claim
    assert h0_threshold_stability(lambda q, t: 0, 4, 4).outcome == Outcome.NOT_APPLICABLE


# ---------------------------------------------------------------- hypersurfaces and covers


@pytest.mark.parametrize("n,s,d", [(4, 6, 3), (4, 3, 1), (5, 7, 4), (3, 5, 4), (6, 8, 2)])
def test_hypersurfaces_are_stable(n, s, d):
    v = hypersurface_stability(n, s, d)
    assert v.outcome == Outcome.STABLE
    assert steps_point_backwards(v)
    assert all(t.script.startswith("hypersurface") for t in v.traces)


def test_hypersurface_with_certificates():
    from fanostab.special import base_certificate
    from fanostab.tables import projective_space

    v = hypersurface_stability(4, 5, 3, base_certificate(projective_space(5), (-8, 8)))
    assert v.outcome == Outcome.STABLE
    assert v.certificates == ["P(5)", "P(5).H3"]


@pytest.mark.parametrize("n,s,d", [(4, 6, 1), (4, 5, 1), (2, 4, 1), (4, 7, 2)])
def test_hypersurface_guards(n, s, d):
    assert hypersurface_stability(n, s, d).outcome == Outcome.NOT_APPLICABLE


def test_nef_canonical_is_stable():
    v = hypersurface_stability(4, 5, 5)
    assert v.outcome == Outcome.STABLE and v.reasons[-1].rule == "kodaira-nakano-branch"


@pytest.mark.parametrize("n,s,k,d", [(3, 4, 2, 2), (6, 5, 2, 1), (4, 5, 2, 3), (4, 4, 3, 1), (5, 6, 2, 2)])
def test_cyclic_covers_are_stable(n, s, k, d):
    v = cyclic_stability(n, s, k, d)
    assert v.outcome == Outcome.STABLE
    assert steps_point_backwards(v)


@pytest.mark.parametrize("n,s,k,d", [(4, 5, 2, 1), (4, 5, 1, 2), (2, 3, 2, 1), (4, 2, 3, 2), (4, 6, 2, 1)])
def test_cyclic_guards(n, s, k, d):
    assert cyclic_stability(n, s, k, d).outcome == Outcome.NOT_APPLICABLE


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 7), st.data())
def test_hypersurface_arithmetic_property(n, data):
    d = data.draw(st.integers(1, n))
    s = data.draw(st.integers(d + 1, n + 2))
    holds = all(Fraction(q * s, n + 1) > Fraction(q * (s - d), n) for q in range(1, n))
    out = hypersurface_stability(n, s, d, chase=False).outcome
    assert (out == Outcome.STABLE) == holds
    assert holds == (s < d * (n + 1))


# ---------------------------------------------------------------- Reid, Wahl, slicing


def test_reid_and_wahl_bounds():
    assert reid_bound(2, SubsheafProfile(1, 1), 4).holds
    assert not reid_bound(2, SubsheafProfile(1, 2), 4).holds
    # at full rank c1 may reach the index
    assert reid_bound(2, SubsheafProfile(4, 2), 4).holds
    assert not wahl_bound(SubsheafProfile(1, 1)).holds
    assert wahl_bound(SubsheafProfile(1, 1), bound=1).holds


def test_slicing_small_cases():
    a = slicing_search(4, 2, 2, 2)
    assert a.refuted and len(a.nodes) == 1 and a.structure_ok()
    b = slicing_search(6, 4, 2, 2)
    assert b.refuted and len(b.nodes) == 5
    c = slicing_search(6, 4, 2, 2, wahl=1)
    assert [x.path for x in c.survivors] == ["n", "zn"]
    assert not slicing_search(6, 4, 2, 2, assume_es=False).applicable


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 10), st.data())
def test_slicing_tree_is_exhaustive_and_bounded(n, data):
    r = data.draw(st.integers(1, n - 1))
    m = data.draw(st.integers(1, n - 1))
    res = slicing_search(n, r, m, m)
    assert res.structure_ok()
    assert len(res.nodes) <= res.node_bound()
    # every leaf was closed by a named check
    assert all(x.rule for x in res.nodes if x.status != "branch")


@pytest.mark.parametrize("n", range(3, 11))
def test_del_pezzo(n):
    v = del_pezzo_verdict(FanoProfile(n, n - 1))
    assert v.outcome == Outcome.STABLE
    assert v.assumptions == ["smooth slices exist for index n-1 (Fujita)"]
    # every slicing tree rests on the existence of slices
    assert all(r.using == (1,) for r in v.reasons if r.rule == "slicing")


# ---------------------------------------------------------------- coindex three


def test_equal_slope_analysis():
    assert prop24_analyze(5, True).outcome == Outcome.STABLE
    v = prop24_analyze(6, True)
    assert v.outcome == Outcome.SEMISTABLE
    assert "H0(Omega^3_X(2)) = 0" in v.reasons[-1].claim
    assert prop24_analyze(6, True, h0_vanishing=True).outcome == Outcome.STABLE
    assert prop24_analyze(6, None).outcome == Outcome.UNKNOWN


def test_section_criterion():
    assert lemma26_criterion(4, {3: 0}).outcome == Outcome.STABLE
    v = lemma26_criterion(6, {3: 0})
    assert v.outcome == Outcome.UNKNOWN and "m=4" in v.reasons[-1].claim
    assert lemma26_criterion(6, {3: 0, 4: 2}).outcome == Outcome.UNKNOWN


ADMISSIBLE = [(n, g) for n in range(4, 11) for g in range(2, 11) if n <= MAX_DIM.get(g, 10)]


@pytest.mark.parametrize("n,g", ADMISSIBLE)
def test_coindex3_classifier(n, g):
    v = fano_stability(FanoProfile(n, n - 2, genus=g, assume_es=True))
    assert v.outcome == Outcome.STABLE, v.render()
    assert steps_point_backwards(v)


def test_genus_eight_sixfold_uses_its_chase():
    v = fano_stability(FanoProfile(6, 4, genus=8, assume_es=True))
    assert v.outcome == Outcome.STABLE
    assert "trace g8_section" in v.dependencies


def test_fivefold_without_slices_is_unknown():
    v = fano_stability(FanoProfile(5, 3, genus=6))
    assert v.outcome == Outcome.UNKNOWN
    assert v.reasons[-1].rule == "missing-resource"


def test_missing_fact_makes_the_spinor_case_unknown():
    store = load_store(facts_dir() / "spinor10.facts").without_cell("S10", 1, 6, 4)
    res = Resources(stores=[store])
    v = coindex3_classify(FanoProfile(8, 6, genus=7, assume_es=True), res)
    assert v.outcome == Outcome.UNKNOWN
    assert any("H1(Omega(S10,6,4)) = 0" in r.claim for r in v.reasons)


def test_missing_script_makes_the_case_unknown(tmp_path):
    v = coindex3_classify(FanoProfile(6, 4, genus=8, assume_es=True), Resources(scripts=tmp_path))
    assert v.outcome == Outcome.UNKNOWN
    assert any("g8_section is not available" in r.claim for r in v.reasons)


@pytest.mark.parametrize("r", range(1, 6))
def test_every_fourfold_with_picard_one(r):
    assert fano_stability(FanoProfile(4, r)).outcome == Outcome.STABLE


def test_dispatcher_edges():
    assert fano_stability(FanoProfile(5, 2)).outcome == Outcome.NOT_APPLICABLE
    assert fano_stability(FanoProfile(4, 3, b2_is_1=False)).outcome == Outcome.NOT_APPLICABLE
    assert fano_stability(FanoProfile(40, 1)).outcome == Outcome.STABLE


def test_log_format():
    log = fano_stability(FanoProfile(4, 2, genus=8)).log()
    for line in log.splitlines():
        assert re.fullmatch(r"STEP \d+: .+ BY [a-z-]+ USING (-|.+)", line), line
