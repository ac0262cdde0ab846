"""Field tower arithmetic: construction, Frobenius, trace and norm."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ovoid7.errors import CompositeP, NotRational, Unsupported
from ovoid7.ff import (ExtCtx, FieldCtx, frobenius, make_field,
                       parse_field_spec, poly_irreducible_fp, rel_norm,
                       rel_trace)


def test_prime_field_construction():
    F2 = make_field(2, 1)
    assert (F2.p, F2.h, F2.q) == (2, 1, 2)
    assert F2.modulus == (1, 1)


def test_f4_modulus_is_unique_irreducible_quadratic():
    # brute-force oracle: x^2 + c1 x + c0 over F_2 without roots
    irreducible = []
    for c0 in range(2):
        for c1 in range(2):
            if all((x * x + c1 * x + c0) % 2 for x in range(2)):
                irreducible.append((c0, c1, 1))
    assert irreducible == [(1, 1, 1)]
    assert make_field(2, 2).modulus == (1, 1, 1)


def test_f27_multiplicative_structure():
    F27 = make_field(3, 3)
    nonzero = [a for a in F27.elements() if a != 0]
    assert len(nonzero) == 26
    # brute-force order of a generator divides 26
    for a in nonzero[:8]:
        order = 1
        acc = a
        while acc != 1:
            acc = F27.mul(acc, a)
            order += 1
            assert order <= 26
        assert 26 % order == 0


def test_make_field_errors():
    with pytest.raises(CompositeP):
        FieldCtx(4, 1)
    with pytest.raises(CompositeP):
        FieldCtx(1, 1)
    with pytest.raises(Unsupported):
        FieldCtx(2, 21)          # 2^21 > 2^20
    with pytest.raises(Unsupported):
        FieldCtx(2, 0)


@pytest.mark.parametrize("p,h", [(2, 1), (2, 2), (2, 3), (2, 5), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (11, 1)])
def test_field_axioms_random(p, h):
    ctx = make_field(p, h)
    rng = random.Random(p * 100 + h)
    for _ in range(150):
        a, b, c = (rng.randrange(ctx.q) for _ in range(3))
        assert ctx.add(a, b) == ctx.add(b, a)
        assert ctx.mul(a, b) == ctx.mul(b, a)
        assert ctx.add(ctx.add(a, b), c) == ctx.add(a, ctx.add(b, c))
        assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
        assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))
        assert ctx.add(a, ctx.neg(a)) == 0
        if a:
            assert ctx.mul(a, ctx.inv(a)) == 1


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9, 16, 27, 32, 64, 81, 128, 243, 256, 512, 1024])
def test_fermat_full_enumeration_small(q):
    ctx = parse_field_spec(str(q))
    for a in ctx.elements():
        assert ctx.pow(a, q) == a


@pytest.mark.parametrize("p,h", [(2, 17), (3, 12), (5, 8), (1048573, 1)])
def test_fermat_sampled_large(p, h):
    ctx = make_field(p, h)
    rng = random.Random(h)
    for _ in range(12):
        a = rng.randrange(ctx.q)
        assert ctx.pow(a, ctx.q) == a


def test_inverse_matches_table_route():
    ctx = make_field(3, 3)
    tabs = ctx.np_tables()
    for a in range(1, ctx.q):
        assert ctx.inv(a) == int(tabs["inv"][a])


@given(st.integers(0, 7), st.integers(0, 7))
@settings(max_examples=64, deadline=None)
def test_f8_commutativity_hypothesis(a, b):
    ctx = make_field(2, 3)
    assert ctx.mul(a, b) == ctx.mul(b, a)
    assert ctx.add(a, b) == ctx.add(b, a)


# -- extensions ---------------------------------------------------------------


def test_frobenius_fixes_base_subfield():
    ctx = make_field(2, 2)
    ext = ExtCtx(ctx, 3)
    for a in ctx.elements():
        x = ext.embed_elem(a)
        for i in range(1, 4):
            assert frobenius(x, i) == x


def test_frobenius_is_automorphism():
    ext = ExtCtx(make_field(3, 1), 3)
    rng = random.Random(9)
    for _ in range(60):
        x = ext.from_packed(rng.randrange(ext.order))
        y = ext.from_packed(rng.randrange(ext.order))
        assert frobenius(x * y) == frobenius(x) * frobenius(y)
        assert frobenius(x + y) == frobenius(x) + frobenius(y)


def test_frobenius_cubed_identity_q4():
    # oracle: repeated squaring computes x^(q^3) directly
    ctx = make_field(2, 2)
    ext = ExtCtx(ctx, 3)
    rng = random.Random(4)
    for _ in range(40):
        x = ext.from_packed(rng.randrange(ext.order))
        assert frobenius(x, 3) == x
        oracle = TowerPow(ext, x.coords, ctx.q ** 3)
        assert tuple(oracle) == x.coords


def TowerPow(ext, coords, e):
    acc = ext.embed(1)
    base = tuple(coords)
    while e:
        if e & 1:
            acc = ext.mul(acc, base)
        base = ext.mul(base, base)
        e >>= 1
    return acc


def test_trace_norm_subfield_case():
    # c in F_q embedded in the cubic extension: Tr = 3c, N = c^3
    ctx = make_field(2, 2)
    ext = ExtCtx(ctx, 3)
    for a in ctx.elements():
        x = ext.embed_elem(a)
        assert rel_trace(x).v == ctx.mul(3 % 2, a)     # = a in char 2
        assert rel_norm(x).v == ctx.pow(a, 3)
    assert rel_trace(ext.one()).v == 1


def test_trace_norm_invariance_laws():
    ext = ExtCtx(make_field(5, 1), 3)
    rng = random.Random(11)
    for _ in range(50):
        x = ext.from_packed(rng.randrange(ext.order))
        y = ext.from_packed(rng.randrange(ext.order))
        assert rel_trace(frobenius(x)) == rel_trace(x)
        assert rel_norm(x * y) == rel_norm(x) * rel_norm(y)
        # F_q-linearity of the trace
        lam = rng.randrange(5)
        lhs = rel_trace(ext.embed_elem(lam) * x + y)
        rhs = ext.base.add(ext.base.mul(lam, rel_trace(x).v), rel_trace(y).v)
        assert lhs.v == rhs


def test_trace_norm_digit_level_oracle_f8():
    # conjugate enumeration oracle at q=2, n=3
    ext = ExtCtx(make_field(2, 1), 3)
    for e in range(8):
        coords = ext.unpack(e)
        conjs = [coords]
        for _ in range(2):
            conjs.append(ext.pow(conjs[-1], 2))
        tr = (0, 0, 0)
        for c in conjs:
            tr = ext.add(tr, c)
        nm = ext.embed(1)
        for c in conjs:
            nm = ext.mul(nm, c)
        assert ext.trace(coords) == ext.descend(tr)
        assert ext.norm(coords) == ext.descend(nm)
        assert ext.is_rational(tr) and ext.is_rational(nm)


def test_trace_lands_in_base_always():
    for (p, h, n) in ((2, 1, 4), (3, 1, 2), (2, 2, 3), (5, 1, 2)):
        ext = ExtCtx(make_field(p, h), n)
        for e in range(min(ext.order, 200)):
            coords = ext.unpack(e)
            ext.trace(coords)
            ext.norm(coords)           # both raise NotRational on failure


def test_descend_rejects_proper_extension_elements():
    ext = ExtCtx(make_field(2, 1), 3)
    with pytest.raises(NotRational):
        ext.descend((0, 1, 0))


def test_parse_field_spec():
    assert parse_field_spec("2^4").q == 16
    assert parse_field_spec("27").q == 27
    with pytest.raises(CompositeP):
        parse_field_spec("12")
    with pytest.raises(CompositeP):
        parse_field_spec("x")


def test_default_moduli_are_irreducible():
    from ovoid7.ff import DEFAULT_MODULI

    for (p, h), coeffs in DEFAULT_MODULI.items():
        assert poly_irreducible_fp(coeffs, p), (p, h)


def test_packed_tables_agree_with_scalar_ops():
    import numpy as np

    for (p, h, n) in ((2, 1, 3), (3, 1, 4), (2, 2, 3)):
        ext = ExtCtx(make_field(p, h), n)
        e = np.arange(ext.order, dtype=np.int64)
        fr = ext.v_frobenius_packed(e)
        tr = ext.v_trace_packed(e)
        nm = ext.v_norm_packed(e)
        rng = random.Random(n)
        for _ in range(30):
            k = rng.randrange(ext.order)
            coords = ext.unpack(k)
            assert int(fr[k]) == ext.pack(ext.frobenius(coords))
            assert int(tr[k]) == ext.trace(coords)
            assert int(nm[k]) == ext.norm(coords)
            m = rng.randrange(ext.order)
            prod = ext.v_mul_packed(np.int64(k), np.int64(m))
            assert int(prod) == ext.pack(ext.mul(coords, ext.unpack(m)))
            s = ext.v_add_packed(np.int64(k), np.int64(m))
            assert int(s) == ext.pack(ext.add(coords, ext.unpack(m)))


def test_ext_modulus_deterministic():
    a = ExtCtx(make_field(2, 2), 3)
    b = ExtCtx(make_field(2, 2), 3)
    assert a.modulus == b.modulus
    # first lexicographic irreducible cubic over F_4 (low-degree-first order)
    assert a.modulus == (1, 0, 1, 1)
