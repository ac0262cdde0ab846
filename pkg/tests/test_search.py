"""Exhaustive searches and witness recognition."""

import random

import pytest

from ovoid7.errors import BudgetExceeded, Unsupported
from ovoid7.ff import ExtCtx, make_field
from ovoid7.mpoly import MPoly
from ovoid7.families import default_tower_basis, kantor_even, kantor_simple
from ovoid7.quadric import OvoidSpec, verify_ovoid
from ovoid7.search import (SearchConfig, exhaustive_triple_search,
                           hyperplane_witness_search, index_of_spec,
                           recognize_kantor_even, spec_from_index,
                           triple_monomials)


def test_monomial_layout():
    monos = triple_monomials(2)
    assert len(monos) == 9
    assert monos[0] == (2, 0, 0)       # descending graded-lex
    assert monos[-1] == (0, 0, 1)
    assert len(triple_monomials(3)) == 19


def test_candidate_count_and_budget():
    cfg = SearchConfig(make_field(3, 1), max_degree=2, budget=10 ** 6)
    assert cfg.candidate_count() == 3 ** 27
    with pytest.raises(BudgetExceeded) as exc:
        exhaustive_triple_search(cfg)
    assert exc.value.count == 3 ** 27


def test_spec_index_round_trip():
    ctx = make_field(2, 1)
    cfg = SearchConfig(ctx, max_degree=2)
    spec = kantor_simple(ctx)
    idx = index_of_spec(cfg, spec)
    assert idx is not None
    assert spec_from_index(cfg, idx).polys() == spec.polys()
    rng = random.Random(0)
    for _ in range(20):
        k = rng.randrange(cfg.candidate_count())
        assert index_of_spec(cfg, spec_from_index(cfg, k)) == k


def test_homogeneous_top_search_q2():
    cfg = SearchConfig(make_field(2, 1), max_degree=2,
                       restriction="homogeneous-top", budget=1 << 20)
    assert cfg.candidate_count() == 2 ** 18
    res = exhaustive_triple_search(cfg)
    assert res.candidates_tested == 2 ** 18
    assert len(res.found_indices) == 8
    for spec in res.ovoids_found:
        assert verify_ovoid(spec).is_ovoid
        assert all(sum(m) == 2 for f in spec.polys()
                   for m in (tuple((k >> (6 * i)) & 63 for i in range(3)) for k in f.terms))


def test_custom_mask_search():
    ctx = make_field(2, 1)
    mask = {"f1": {"x*y": 1, "z^2": 1, "x^2": 0, "y^2": 0,
                   "x*z": 0, "y*z": 0, "x": 0, "y": 0, "z": 0}}
    cfg = SearchConfig(ctx, max_degree=2, restriction=mask, budget=1 << 20)
    assert cfg.candidate_count() == 2 ** 18
    res = exhaustive_triple_search(cfg)
    assert res.contains(kantor_simple(ctx))
    for spec in res.ovoids_found[:5]:
        assert spec.f1.render() == "x*y+z^2"


def test_mask_free_marker_and_errors():
    ctx = make_field(2, 1)
    cfg = SearchConfig(ctx, max_degree=2, restriction={"f1": {"x^2": "free"}})
    assert cfg.candidate_count() == 2 ** 27
    with pytest.raises(Unsupported):
        SearchConfig(ctx, max_degree=2, restriction={"f1": {"x^3": 0}}).fixed_values()
    with pytest.raises(Unsupported):
        SearchConfig(ctx, max_degree=2, restriction={"f1": {"x+y": 0}}).fixed_values()


def test_generic_path_matches_fast_path_on_subspace():
    # pin f2, f3 to the short Kantor values; enumerate f1 freely (2^9)
    ctx = make_field(2, 1)
    pin2 = {"x*z": 1, "y^2": 1, "z^2": 1, "x*y": 0, "y*z": 0, "x^2": 0,
            "x": 0, "y": 0, "z": 0}
    pin3 = {"y*z": 1, "x^2": 1, "y^2": 1, "z^2": 1, "x*y": 0, "x*z": 0,
            "x": 0, "y": 0, "z": 0}
    cfg = SearchConfig(ctx, max_degree=2, restriction={"f2": pin2, "f3": pin3})
    assert cfg.candidate_count() == 2 ** 9
    res = exhaustive_triple_search(cfg)
    # brute-force oracle over the same subspace
    expected = []
    for idx in range(2 ** 9):
        spec = spec_from_index(cfg, idx)
        if verify_ovoid(spec).is_ovoid:
            expected.append(idx)
    assert res.found_indices == expected
    assert res.contains(kantor_simple(ctx))


def test_found_specs_reverify_and_zero_never_found():
    ctx = make_field(2, 1)
    cfg = SearchConfig(ctx, max_degree=2, restriction="homogeneous-top")
    res = exhaustive_triple_search(cfg)
    z = OvoidSpec(ctx, MPoly.zero(ctx, 3), MPoly.zero(ctx, 3), MPoly.zero(ctx, 3))
    assert not res.contains(z)
    for spec in res.ovoids_found:
        assert verify_ovoid(spec).is_ovoid


# -- quartic witness search ------------------------------------------------------


def test_hyperplane_witness_search_q3_empty():
    ext = ExtCtx(make_field(3, 1), 4)
    rep = hyperplane_witness_search(ext)
    assert rep.independent_pairs == []
    assert rep.dependent_pairs > 0
    assert rep.pairs_scanned == 81 * 81


def test_hyperplane_witness_search_guards():
    with pytest.raises(Unsupported):
        hyperplane_witness_search(ExtCtx(make_field(3, 1), 3))
    with pytest.raises(Unsupported):
        hyperplane_witness_search(ExtCtx(make_field(2, 1), 4))
    with pytest.raises(Unsupported):
        hyperplane_witness_search(ExtCtx(make_field(3, 1), 4), budget=10)


# -- basis recognition -----------------------------------------------------------


def test_recognize_kantor_even_q4():
    ctx = make_field(2, 2)
    spec = kantor_even(default_tower_basis(ctx))
    w = recognize_kantor_even(spec)
    assert w is not None
    from ovoid7.hypersurface import hyperplane_product_residual

    assert hyperplane_product_residual(spec, w).is_zero()


def test_recognize_rejects_non_kantor():
    ctx = make_field(2, 3)
    assert recognize_kantor_even(kantor_simple(ctx)) is None
    other = OvoidSpec(ctx, MPoly.parse("x^2", ctx, 3), MPoly.parse("y^2", ctx, 3),
                      MPoly.parse("z^2", ctx, 3))
    assert recognize_kantor_even(other) is None
    z = OvoidSpec(ctx, MPoly.zero(ctx, 3), MPoly.zero(ctx, 3), MPoly.zero(ctx, 3))
    assert recognize_kantor_even(z) is None


def test_recognize_scale_guard():
    ctx = make_field(2, 5)
    with pytest.raises(Unsupported):
        recognize_kantor_even(kantor_simple(ctx))
