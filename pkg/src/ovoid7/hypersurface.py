"""The 6-variable pair polynomial of a triple, its structured
factorizations, exact point counts, and the explicit count bounds.

For a triple (f1, f2, f3) the dehomogenized polynomial is

    F(X1..X6) = (X1-X4) (f3(X4,X5,X6) - f3(X1,X2,X3))
              + (X2-X5) (f2(X4,X5,X6) - f2(X1,X2,X3))
              + (X3-X6) (f1(X4,X5,X6) - f1(X1,X2,X3)),

which vanishes identically on the diagonal X1=X4, X2=X5, X3=X6.  The
candidate set is an ovoid exactly when F has no other rational zeros.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from decimal import Decimal, getcontext
from typing import Optional, Tuple

from . import _pairscan
from .errors import (DependentBasis, NotAQuadricPair, OddCharacteristic,
                     SquareMu, Unsupported, WrongCharacteristic, WrongResidue)
from .ff import ExtCtx, FieldCtx, TowerElem
from .mpoly import MPoly
from .quadric import OvoidSpec, rank

SCAN_BUDGET = 10 ** 9


@dataclass
class HypersurfaceF:
    poly: MPoly                 # 6 variables over the base field
    spec: OvoidSpec

    @property
    def degree(self) -> int:
        return self.poly.degree()


def build_F(spec: OvoidSpec) -> HypersurfaceF:
    """Expand the pair polynomial symbolically (exact)."""
    ctx = spec.ctx
    first = [f.remap_vars([0, 1, 2], 6) for f in spec.polys()]
    second = [f.remap_vars([3, 4, 5], 6) for f in spec.polys()]
    out = MPoly.zero(ctx, 6)
    for i, fi in ((0, 2), (1, 1), (2, 0)):
        diff = MPoly.variable(ctx, 6, i) - MPoly.variable(ctx, 6, i + 3)
        out = out + diff * (second[fi] - first[fi])
    return HypersurfaceF(out, spec)


def diagonal_restriction(F: HypersurfaceF) -> MPoly:
    """Substitute X4,X5,X6 = X1,X2,X3; identically zero by construction."""
    ctx = F.spec.ctx
    imgs = [MPoly.variable(ctx, 6, i % 3) for i in range(6)]
    return F.poly.substitute(imgs)


@dataclass
class ScanReport:
    total: int
    off_diagonal: int
    witness: Optional[Tuple[Tuple[int, int, int], Tuple[int, int, int]]]
    elapsed: float

    def to_json_dict(self) -> dict:
        return {
            "total": self.total,
            "off_diagonal": self.off_diagonal,
            "witness": [list(self.witness[0]), list(self.witness[1])] if self.witness else None,
            "elapsed_ms": round(self.elapsed * 1000.0, 3),
        }


def affine_point_scan(F: HypersurfaceF, threads: int = 1) -> ScanReport:
    """Exact zero counts of F over the affine 6-space.

    The q^3 diagonal points are always zeros; off-diagonal zeros come in
    symmetric pairs, counted via one pass over unordered index pairs.
    The witness is the first off-diagonal zero in scan order and matches
    the verification witness when one exists.
    """
    spec = F.spec
    q = spec.ctx.q
    if q ** 6 > SCAN_BUDGET:
        raise Unsupported(f"scan of q^6 = {q ** 6} points exceeds budget {SCAN_BUDGET}")
    t0 = time.perf_counter()
    res = _pairscan.pair_scan(spec.ctx, spec.value_tables(), early_exit=False,
                              threads=threads)
    off = 2 * res.zero_pairs
    witness = None
    if res.first_zero is not None:
        i, j = res.first_zero
        witness = (_pairscan.triple_of_index(q, i), _pairscan.triple_of_index(q, j))
    return ScanReport(
        total=q ** 3 + off,
        off_diagonal=off,
        witness=witness,
        elapsed=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# structured factorizations


@dataclass(frozen=True)
class HyperplaneWitness:
    """Conjugate hyperplane data: {1, alpha, beta} independent over F_q."""

    ext: ExtCtx
    alpha: TowerElem
    beta: TowerElem

    def __post_init__(self):
        if self.ext.n not in (3, 4):
            raise Unsupported("hyperplane witnesses live in a cubic or quartic extension")
        rows = [self.ext.embed(1), self.alpha.coords, self.beta.coords]
        if rank(self.ext.base, rows) != 3:
            raise DependentBasis("{1, alpha, beta} are linearly dependent")


def _conjugate_plane(ext: ExtCtx, alpha, beta, power: int) -> MPoly:
    """(X1-X4) + alpha^(q^i) (X2-X5) + beta^(q^i) (X3-X6) over ext."""
    a = ext.frobenius(alpha, power)
    b = ext.frobenius(beta, power)
    out = MPoly.variable(ext, 6, 0) - MPoly.variable(ext, 6, 3)
    out = out + (MPoly.variable(ext, 6, 1) - MPoly.variable(ext, 6, 4)).scale(TowerElem(ext, a))
    out = out + (MPoly.variable(ext, 6, 2) - MPoly.variable(ext, 6, 5)).scale(TowerElem(ext, b))
    return out


def hyperplane_product_residual(spec: OvoidSpec, witness: HyperplaneWitness) -> MPoly:
    """F minus the product of the conjugate hyperplanes through the witness.

    Degree-2 triples use three planes over the cubic extension; degree-3
    triples use four planes over the quartic extension.  A zero residual
    certifies the split.
    """
    d = spec.degree
    if d == 2:
        nplanes = 3
    elif d == 3:
        nplanes = 4
    else:
        raise Unsupported(f"hyperplane splits apply to degree 2 or 3, got {d}")
    ext = witness.ext
    if ext.n != nplanes:
        raise Unsupported(f"degree-{d} split needs an extension of degree {nplanes}")
    if ext.base is not spec.ctx:
        raise Unsupported("witness extension has a different base field")
    F = build_F(spec).poly.lift(ext)
    prod = MPoly.constant(ext, 6, 1)
    for i in range(nplanes):
        prod = prod * _conjugate_plane(ext, witness.alpha.coords, witness.beta.coords, i)
    return F - prod


def deg2_condition_residuals(witness: HyperplaneWitness) -> list:
    """Evaluate the unreduced coefficient-matching condition list for a
    three-plane split at the solved assignment.

    The raw list carries every sign variant produced by matching the two
    symmetric halves of the product, so the variants collapse exactly in
    characteristic 2 (e.g. both D3 - 1 and D3 + 1 appear); all entries
    vanish there.  Returns the list of residual values in order.
    """
    ext = witness.ext
    ctx = ext.base
    if ext.n != 3:
        raise Unsupported("the degree-2 system lives over the cubic extension")
    al = witness.alpha.coords
    be = witness.beta.coords
    fr, mul, add, tr = ext.frobenius, ext.mul, ext.add, ext.trace
    alq, alq2 = fr(al, 1), fr(al, 2)
    beq, beq2 = fr(be, 1), fr(be, 2)
    tr_a = tr(al)
    tr_b = tr(be)
    n_a = ext.norm(al)
    n_b = ext.norm(be)
    tr_a1q = tr(mul(al, alq))
    tr_b1q = tr(mul(be, beq))
    tr_a1q_bq2 = tr(mul(mul(al, alq), beq2))
    tr_a_bqq2 = tr(mul(al, mul(beq, beq2)))
    tr_cross = tr(add(mul(al, beq), mul(alq, be)))

    # the solved assignment
    A1 = B2 = C3 = tr_cross
    A2 = A3 = B1 = B3 = C1 = C2 = 0
    D1, D2, D3 = tr_b, tr_a, 1
    E1, E2, E3 = tr_a1q_bq2, n_a, tr_a1q
    F1, F2, F3 = n_b, tr_a_bqq2, tr_b1q

    s = ctx.sub
    a = ctx.add

    def m(k, x):
        return ctx.mul(k % ctx.p, x)

    return [
        a(E2, n_a), a(a(C2, E1), tr_a1q_bq2), a(E3, tr_a1q), a(E2, m(3, n_a)),
        a(E1, tr_a1q_bq2), a(a(C1, F2), tr_a_bqq2), a(C3, tr_cross),
        a(C2, m(2, tr_a1q_bq2)), a(C1, m(2, tr_a_bqq2)), a(D2, tr_a),
        s(A2, m(2, tr_a1q)), s(B2, tr_cross), s(E2, m(3, n_a)),
        s(C2, m(2, tr_a1q_bq2)), s(F2, tr_a_bqq2), a(F1, n_b), a(F3, tr_b1q),
        a(F2, tr_a_bqq2), a(F1, m(3, n_b)), s(D1, tr_b), s(A1, tr_cross),
        s(B1, m(2, tr_b1q)), s(E1, tr_a1q_bq2), s(C1, m(2, tr_a_bqq2)),
        s(F1, m(3, n_b)), s(D3, 1), s(a(A3, D2), tr_a), s(a(B3, D1), tr_b),
        s(a(A2, E3), tr_a1q), s(a(a(A1, B2), C3), tr_cross),
        s(a(B1, F3), tr_b1q), s(E2, n_a), s(a(C2, E1), tr_a1q_bq2),
        s(a(C1, F2), tr_a_bqq2), s(F1, n_b), a(a(A2, E3), tr_a1q),
        a(a(a(A1, B2), C3), tr_cross), a(A3, m(2, tr_a)), a(A2, m(2, tr_a1q)),
        a(A1, tr_cross), a(a(B1, F3), tr_b1q), a(B3, m(2, tr_b)),
        a(B2, tr_cross), a(B1, m(2, tr_b1q)), s(D3, 3 % ctx.p),
        s(A3, m(2, tr_a)), s(B3, m(2, tr_b)), s(E3, tr_a1q), s(C3, tr_cross),
        s(F3, tr_b1q), a(a(A3, D2), tr_a), a(a(B3, D1), tr_b),
        a(D3, 3 % ctx.p), a(D2, tr_a), a(D1, tr_b), a(D3, 1),
    ]


def solve_deg2_system(witness: HyperplaneWitness, literal_check: bool = False) -> OvoidSpec:
    """Rebuild the unique degree-2 triple with a three-plane split through
    the given basis, from the solved coefficient system.

    Only exists in characteristic 2.  The result is verified against the
    trace-pairing construction and against a vanishing residual; with
    literal_check the unreduced condition list is evaluated as well.
    """
    ext = witness.ext
    ctx = ext.base
    if ext.n != 3:
        raise Unsupported("the degree-2 system lives over the cubic extension")
    if ctx.p != 2:
        raise OddCharacteristic("the solved system forces characteristic 2")
    al = witness.alpha.coords
    be = witness.beta.coords
    fr = ext.frobenius
    mul = ext.mul
    add = ext.add
    tr = ext.trace

    alq, alq2 = fr(al, 1), fr(al, 2)
    beq, beq2 = fr(be, 1), fr(be, 2)
    a1 = tr(add(mul(al, beq), mul(al, beq2)))           # xy / xz / yz coefficient
    d1, d2 = tr(be), tr(al)
    e1 = tr(mul(mul(al, alq), beq2))
    e2 = ext.norm(al)
    e3 = tr(mul(al, alq))
    f1c = ext.norm(be)
    f2c = tr(mul(al, mul(beq, beq2)))
    f3c = tr(mul(be, beq))

    def p3(d):
        return MPoly.from_dict(ctx, 3, d)

    f1 = p3({(1, 1, 0): a1, (2, 0, 0): d1, (0, 2, 0): e1, (0, 0, 2): f1c})
    f2 = p3({(1, 0, 1): a1, (2, 0, 0): d2, (0, 2, 0): e2, (0, 0, 2): f2c})
    f3 = p3({(0, 1, 1): a1, (2, 0, 0): 1, (0, 2, 0): e3, (0, 0, 2): f3c})
    spec = OvoidSpec(ctx, f1, f2, f3)

    from .families import TowerBasis, kantor_even

    rebuilt = kantor_even(TowerBasis(ext, witness.alpha, witness.beta))
    if rebuilt.polys() != spec.polys():
        raise Unsupported("solved system disagrees with the trace construction")
    if not hyperplane_product_residual(spec, witness).is_zero():
        raise Unsupported("solved system does not split as expected")
    if literal_check and any(deg2_condition_residuals(witness)):
        raise Unsupported("unreduced condition list does not vanish")
    return spec


@dataclass(frozen=True)
class QuadricWitness:
    """Two-quadric factorization data.

    Odd characteristic: F = R^2 - k S^2 with k a non-square.
    Characteristic 2:  F = (R + xi S)(R + xi^q S) with xi^q = xi + 1.
    R = Q_R(U,V,W) + U L_R + V M_R + W N_R and S = Q_S(U,V,W), where
    U, V, W are the coordinate differences and the linear blocks are
    affine in X4, X5, X6.
    """

    ctx: FieldCtx
    QR: Tuple[int, int, int, int, int, int]     # A1..A6: U2 V2 W2 UV UW VW
    QS: Tuple[int, int, int, int, int, int]     # A1'..A6'
    LR: Tuple[int, int, int, int]               # B1..B4 (X4, X5, X6, 1)
    MR: Tuple[int, int, int, int]               # C1..C4
    NR: Tuple[int, int, int, int]               # D1..D4
    k: Optional[int] = None                     # odd characteristic only
    xi: Optional[TowerElem] = None              # characteristic 2 only

    def __post_init__(self):
        if not any(self.QS):
            raise NotAQuadricPair("the second quadric is identically zero")
        if self.ctx.p == 2:
            xi = self.xi
            if xi is None:
                raise Unsupported("characteristic 2 needs xi with xi^q = xi + 1")
            ext = xi.ctx
            frob = ext.frobenius(xi.coords, 1)
            if frob != ext.add(xi.coords, ext.embed(1)):
                raise WrongResidue("xi^q != xi + 1")
        else:
            if self.k is None:
                raise Unsupported("odd characteristic needs the non-square k")
            if self.ctx.is_square(self.k):
                raise SquareMu(f"k={self.k} is a square")


def _uvw_terms(ctx, nvars=6):
    U = MPoly.variable(ctx, nvars, 0) - MPoly.variable(ctx, nvars, 3)
    V = MPoly.variable(ctx, nvars, 1) - MPoly.variable(ctx, nvars, 4)
    W = MPoly.variable(ctx, nvars, 2) - MPoly.variable(ctx, nvars, 5)
    return U, V, W


def _quadric_RS(ctx, w: QuadricWitness) -> Tuple[MPoly, MPoly]:
    U, V, W = _uvw_terms(ctx)
    X4 = MPoly.variable(ctx, 6, 3)
    X5 = MPoly.variable(ctx, 6, 4)
    X6 = MPoly.variable(ctx, 6, 5)
    one = MPoly.constant(ctx, 6, 1)

    def qform(c):
        a1, a2, a3, a4, a5, a6 = c
        return (U * U).scale(a1) + (V * V).scale(a2) + (W * W).scale(a3) \
            + (U * V).scale(a4) + (U * W).scale(a5) + (V * W).scale(a6)

    def lin(c):
        b1, b2, b3, b4 = c
        return X4.scale(b1) + X5.scale(b2) + X6.scale(b3) + one.scale(b4)

    R = qform(w.QR) + U * lin(w.LR) + V * lin(w.MR) + W * lin(w.NR)
    S = qform(w.QS)
    return R, S


def quadric_product_residual(spec: OvoidSpec, witness: QuadricWitness) -> MPoly:
    """F minus the two-quadric product; identically zero iff the split holds.

    Returned over F_q in odd characteristic and over F_{q^2} when p = 2.
    """
    if spec.degree != 3:
        raise Unsupported("two-quadric splits apply to degree-3 triples")
    ctx = spec.ctx
    if witness.ctx is not ctx:
        raise Unsupported("witness over a different field")
    F = build_F(spec).poly
    if ctx.p != 2:
        R, S = _quadric_RS(ctx, witness)
        return F - (R * R - (S * S).scale(witness.k))
    ext = witness.xi.ctx
    if ext.base is not ctx or ext.n != 2:
        raise Unsupported("xi must lie in the quadratic extension of the base field")
    # build R, S directly over the quadratic extension; the integer witness
    # coefficients embed as base-field elements
    R, S = _quadric_RS(ext, witness)
    xi = TowerElem(ext, witness.xi.coords)
    xiq = TowerElem(ext, ext.frobenius(witness.xi.coords, 1))
    prod = (R + S.scale(xi)) * (R + S.scale(xiq))
    return F.lift(ext) - prod


def solve_quadric_witness(spec: OvoidSpec, record: Optional[dict] = None) -> QuadricWitness:
    """Derive the two-quadric witness for the parameterized degree-3
    families, solving the leftover linear entries from the coefficients
    of the triple itself.

    Odd characteristic fixes k = -1/3 and the displayed M/N rows; B4 and
    the constant entries of M_R, N_R come out of the linear relations
      B4 = -c020/2,  C4 = -(b100 + c010)/(2 B4),  D4 = -(a100 + c001)/(2 B4),
    written here with c/b/a coefficients read off the actual triple.
    """
    ctx = spec.ctx
    if ctx.q % 3 != 2:
        raise WrongResidue("two-quadric witnesses require q = 2 (mod 3)")
    if ctx.p == 3:
        raise WrongCharacteristic("characteristic 3 is out of scope here")
    f1, f2, f3 = spec.polys()
    if ctx.p != 2:
        half = ctx.inv(2 % ctx.p)
        third = ctx.inv(3 % ctx.p)
        k = ctx.neg(third)                         # -1/3
        # epsilon from the Y^3 coefficient of f1: a030 = 4*eps/3
        a030 = f1.coeff_raw((0, 3, 0))
        eps = ctx.mul(a030, ctx.mul(ctx.inv(4 % ctx.p), 3 % ctx.p))
        if ctx.mul(eps, eps) != 1:
            raise Unsupported("triple is not in the parameterized family")
        two3 = ctx.mul(2 % ctx.p, third)
        C2, C3 = 2 % ctx.p, ctx.mul(eps, two3)
        D2, D3 = ctx.neg(ctx.mul(eps, two3)), two3
        B4 = ctx.neg(ctx.mul(f3.coeff_raw((0, 2, 0)), half))
        B4inv2 = ctx.inv(ctx.mul(2 % ctx.p, B4))
        C4 = ctx.neg(ctx.mul(ctx.add(f2.coeff_raw((1, 0, 0)), f3.coeff_raw((0, 1, 0))), B4inv2))
        D4 = ctx.neg(ctx.mul(ctx.add(f1.coeff_raw((1, 0, 0)), f3.coeff_raw((0, 0, 1))), B4inv2))
        w = QuadricWitness(
            ctx=ctx,
            QR=(0, 1, third, 0, 0, 0),             # V^2 + (1/3) W^2
            QS=(0, 1, third, 0, 0, 0),
            LR=(0, 0, 0, B4),
            MR=(0, C2, C3, C4),
            NR=(0, D2, D3, D4),
            k=k,
        )
        if record is not None:
            record.update({"k": k, "epsilon": 1 if eps == 1 else -1,
                           "B4": B4, "C4": C4, "D4": D4,
                           "QR": list(w.QR), "QS": list(w.QS)})
        return w
    # characteristic 2
    ext = ExtCtx(ctx, 2)
    from .families import find_artin_schreier_unit

    xi = find_artin_schreier_unit(ext)
    b4sq = f3.coeff_raw((1, 0, 0))
    B4 = ctx.pow(b4sq, ctx.q // 2)                 # square root in char 2
    if ctx.mul(B4, B4) != b4sq or B4 == 0:
        raise Unsupported("triple is not in the parameterized family")
    C4 = f2.coeff_raw((0, 2, 0))
    D4 = f1.coeff_raw((0, 0, 2))
    w = QuadricWitness(
        ctx=ctx,
        QR=(0, 1, 1, 0, 0, 1),                     # V^2 + W^2 + VW
        QS=(0, 1, 1, 0, 0, 1),
        LR=(0, 0, 0, B4),
        MR=(0, 1, 0, C4),
        NR=(0, 1, 1, D4),
        k=None,
        xi=xi,
    )
    if record is not None:
        record.update({"xi": list(xi.coords), "B4": B4, "C4": C4, "D4": D4,
                       "QR": list(w.QR), "QS": list(w.QS)})
    return w


# ---------------------------------------------------------------------------
# count bounds


@dataclass
class BoundReport:
    r: int
    d: int
    q: int
    center: int
    lw_radius: float
    cm_radius: float
    applicable: bool
    threshold_ok: bool
    lang_weil_constant: str = "not computed"

    def to_json_dict(self) -> dict:
        return {
            "r": self.r,
            "d": self.d,
            "q": self.q,
            "center": self.center,
            "lw_radius": self.lw_radius,
            "cm_radius": self.cm_radius,
            "applicable": self.applicable,
            "threshold_ok": self.threshold_ok,
            "lang_weil_constant": self.lang_weil_constant,
        }


def bound_report(r: int, d: int, q: int, precision: int = 50) -> BoundReport:
    """Point-count window for an absolutely irreducible r-dimensional,
    degree-d variety: center q^r, first-order radius (d-1)(d-2)q^(r-1/2),
    and the explicit second-order radius adding 5 d^(13/3) q^(r-1).

    `applicable` is the exact inequality q > 2(r+1)d^2 and `threshold_ok`
    the exact inequality q > 6.3 (d+1)^(13/3); both are evaluated in
    integer arithmetic.  Radii use Decimal at `precision` digits.
    """
    if r < 1 or d < 1:
        raise Unsupported("need r >= 1 and d >= 1")
    getcontext().prec = precision
    qd = Decimal(q)
    lw = Decimal((d - 1) * (d - 2)) * qd ** (r - 1) * qd.sqrt()
    cm = lw + Decimal(5) * (Decimal(d) ** (Decimal(13) / Decimal(3))) * qd ** (r - 1)
    applicable = q > 2 * (r + 1) * d * d
    # q > 6.3 (d+1)^(13/3)  <=>  (10 q)^3 > 63^3 (d+1)^13
    threshold_ok = (10 * q) ** 3 > 63 ** 3 * (d + 1) ** 13
    return BoundReport(
        r=r, d=d, q=q,
        center=q ** r,
        lw_radius=float(lw),
        cm_radius=float(cm),
        applicable=applicable,
        threshold_ok=threshold_ok,
    )


def threshold_boundary(d: int) -> int:
    """Smallest prime power q with threshold_ok(d, q)."""
    from .ff import factorize

    q = 2
    while True:
        if len(factorize(q)) == 1 and (10 * q) ** 3 > 63 ** 3 * (d + 1) ** 13:
            return q
        q += 1
