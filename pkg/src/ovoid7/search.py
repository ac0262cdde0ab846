"""Exhaustive and pruned searches over parameterizing triples and
factorization witnesses.

Coefficient vectors are ordered per-component (f1, f2, f3), monomials in
descending graded-lexicographic order inside each component, and are
enumerated lexicographically (last position fastest); every reported hit
is re-derivable from its candidate index.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from . import _pairscan
from .errors import BudgetExceeded, DependentBasis, Unsupported
from .ff import ExtCtx, FieldCtx, TowerElem
from .mpoly import MPoly, pack_exps, unpack_exps
from .quadric import OvoidSpec, rank


def triple_monomials(max_degree: int) -> List[Tuple[int, int, int]]:
    """Constant-free monomials up to max_degree, descending graded-lex."""
    out = [m for m in itertools.product(range(max_degree + 1), repeat=3)
           if 1 <= sum(m) <= max_degree]
    return sorted(out, key=lambda m: (sum(m), m), reverse=True)


MaskValue = Union[int, str]


@dataclass
class SearchConfig:
    ctx: FieldCtx
    max_degree: int = 2
    restriction: Union[str, Dict[str, Dict[str, MaskValue]]] = "full"
    budget: int = 1 << 28
    threads: int = 1

    def monomials(self) -> List[Tuple[int, int, int]]:
        if self.max_degree not in (2, 3):
            raise Unsupported("search supports max_degree 2 or 3")
        return triple_monomials(self.max_degree)

    def fixed_values(self) -> Dict[int, int]:
        """Map from coefficient-vector position to its pinned value."""
        monos = self.monomials()
        n = len(monos)
        if self.restriction == "full":
            return {}
        if self.restriction == "homogeneous-top":
            return {i * n + j: 0
                    for i in range(3)
                    for j, m in enumerate(monos) if sum(m) != self.max_degree}
        if not isinstance(self.restriction, dict):
            raise Unsupported(f"unknown restriction {self.restriction!r}")
        fixed = {}
        index = {m: j for j, m in enumerate(monos)}
        for fi, fname in enumerate(("f1", "f2", "f3")):
            for mono_text, val in (self.restriction.get(fname) or {}).items():
                probe = MPoly.parse(mono_text, self.ctx, 3)
                if len(probe.terms) != 1:
                    raise Unsupported(f"mask key {mono_text!r} is not a monomial")
                (key, c), = probe.terms.items()
                if c != 1:
                    raise Unsupported(f"mask key {mono_text!r} has a coefficient")
                exps = unpack_exps(key, 3)
                if exps not in index:
                    raise Unsupported(f"monomial {mono_text!r} outside degree bound")
                if isinstance(val, str):
                    if val != "free":
                        raise Unsupported(f"mask value {val!r} not an integer or 'free'")
                    continue
                fixed[fi * n + index[exps]] = int(val) % self.ctx.q
        return fixed

    def candidate_count(self) -> int:
        free = 3 * len(self.monomials()) - len(self.fixed_values())
        return self.ctx.q ** free


@dataclass
class SearchResult:
    candidates_tested: int
    found_indices: List[int]          # candidate indices in enumeration order
    config: SearchConfig
    elapsed: float

    @property
    def ovoids_found(self) -> List[OvoidSpec]:
        return [self.spec_of(i) for i in self.found_indices]

    def spec_of(self, candidate_index: int) -> OvoidSpec:
        return spec_from_index(self.config, candidate_index)

    def contains(self, spec: OvoidSpec) -> bool:
        idx = index_of_spec(self.config, spec)
        return idx is not None and idx in set(self.found_indices)

    def to_json_dict(self, max_listed: int = 1000) -> dict:
        listed = self.found_indices[:max_listed]
        return {
            "candidates_tested": self.candidates_tested,
            "ovoids_found": len(self.found_indices),
            "specs": [self.spec_of(i).render_lines() for i in listed],
            "candidate_indices": [int(i) for i in self.found_indices],
            "truncated": len(self.found_indices) > max_listed,
            "elapsed_ms": round(self.elapsed * 1000.0, 3),
        }


def _vector_of_index(cfg: SearchConfig, candidate_index: int) -> List[int]:
    monos = cfg.monomials()
    n = 3 * len(monos)
    fixed = cfg.fixed_values()
    free_pos = [i for i in range(n) if i not in fixed]
    q = cfg.ctx.q
    digits = []
    k = candidate_index
    for _ in free_pos:
        digits.append(k % q)
        k //= q
    digits.reverse()                   # last free position varies fastest
    vec = [0] * n
    for pos, val in fixed.items():
        vec[pos] = val
    for pos, val in zip(free_pos, digits):
        vec[pos] = val
    return vec


def spec_from_index(cfg: SearchConfig, candidate_index: int) -> OvoidSpec:
    monos = cfg.monomials()
    n = len(monos)
    vec = _vector_of_index(cfg, candidate_index)
    polys = []
    for i in range(3):
        d = {m: vec[i * n + j] for j, m in enumerate(monos) if vec[i * n + j]}
        polys.append(MPoly.from_dict(cfg.ctx, 3, d))
    return OvoidSpec(cfg.ctx, *polys)


def index_of_spec(cfg: SearchConfig, spec: OvoidSpec) -> Optional[int]:
    monos = cfg.monomials()
    fixed = cfg.fixed_values()
    vec = []
    for f in spec.polys():
        for key in f.terms:
            if unpack_exps(key, 3) not in monos:
                return None
        for m in monos:
            vec.append(f.coeff_raw(m))
    idx = 0
    q = cfg.ctx.q
    for pos, val in enumerate(vec):
        if pos in fixed:
            if fixed[pos] != val:
                return None
        else:
            idx = idx * q + val
    return idx


def exhaustive_triple_search(cfg: SearchConfig) -> SearchResult:
    """Enumerate coefficient vectors and keep those defining ovoids.

    The candidate count is computed before starting; a BudgetExceeded
    error carries it.  The unrestricted q = 2 space is classified by the
    value tables of the components (polynomials inducing the same
    functions share one verdict); everything else runs a vectorized
    origin-row prefilter and then full pairwise verification.
    """
    count = cfg.candidate_count()
    if count > cfg.budget:
        raise BudgetExceeded(count, cfg.budget)
    t0 = time.perf_counter()
    ctx = cfg.ctx
    q = ctx.q
    monos = cfg.monomials()
    n = len(monos)
    fixed = cfg.fixed_values()
    free_pos = [i for i in range(3 * n) if i not in fixed]

    # value tables of each monomial on the q^3 grid, in scan order
    xs, ys, zs = _pairscan.coordinate_arrays(q)
    mono_vals = np.stack([
        _pairscan.eval_on_grid(MPoly.from_dict(ctx, 3, {m: 1}), ctx, xs, ys, zs)
        for m in monos
    ])                                                    # (n, q^3)

    if q == 2 and not fixed:
        found = _search_gf2_full(mono_vals)
    else:
        found = _search_generic(cfg, mono_vals, free_pos, count)
    return SearchResult(candidates_tested=count, found_indices=found,
                        config=cfg, elapsed=time.perf_counter() - t0)


def _search_gf2_full(mono_vals) -> List[int]:
    """Fully vectorized classification of all candidates at q = 2.

    Each component's coefficient block maps to an 8-bit value table; the
    pairwise condition depends only on the three tables, so verdicts are
    computed once per table triple and gathered per candidate.
    """
    n = mono_vals.shape[0]
    npts = 8
    # value table (bitmask) for each of the 2^n coefficient blocks
    block = np.arange(1 << n, dtype=np.int64)
    vt = np.zeros(1 << n, dtype=np.int64)
    for j in range(n):
        has = ((block >> (n - 1 - j)) & 1).astype(np.int64)   # vector order: first monomial = high bit
        for p in range(npts):
            if mono_vals[j, p]:
                vt ^= (has << p)
    # verdicts over all realizable (vt1, vt2, vt3) triples
    uniq = np.unique(vt)
    u = len(uniq)
    g1, g2, g3 = np.meshgrid(uniq, uniq, uniq, indexing="ij")
    g1 = g1.ravel()
    g2 = g2.ravel()
    g3 = g3.ravel()
    ok = np.ones(u ** 3, dtype=bool)
    xs, ys, zs = _pairscan.coordinate_arrays(2)
    for i in range(npts):
        for j in range(i + 1, npts):
            dx = int(xs[i] ^ xs[j])
            dy = int(ys[i] ^ ys[j])
            dz = int(zs[i] ^ zs[j])
            d3 = ((g3 >> i) ^ (g3 >> j)) & 1
            d2 = ((g2 >> i) ^ (g2 >> j)) & 1
            d1 = ((g1 >> i) ^ (g1 >> j)) & 1
            lhs = (dx & d3) ^ (dy & d2) ^ (dz & d1)
            ok &= lhs.astype(bool)
    pass_arr = np.zeros(1 << 24, dtype=bool)
    pass_arr[(g1 << 16) | (g2 << 8) | g3] = ok
    # classify all candidates in chunks
    found: List[int] = []
    total = 1 << (3 * n)
    chunk = 1 << 22
    mask = (1 << n) - 1
    for start in range(0, total, chunk):
        ks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        key = (vt[(ks >> (2 * n)) & mask] << 16) | (vt[(ks >> n) & mask] << 8) | vt[ks & mask]
        hits = ks[pass_arr[key]]
        found.extend(int(h) for h in hits)
    return found


def _search_generic(cfg: SearchConfig, mono_vals, free_pos, count) -> List[int]:
    """Batched enumeration: a vectorized prefilter against the origin row,
    then a full pairwise verification of survivors."""
    ctx = cfg.ctx
    q = ctx.q
    n = mono_vals.shape[0]
    fixed = cfg.fixed_values()
    xs, ys, zs = _pairscan.coordinate_arrays(q)
    found: List[int] = []
    batch = max(1, (1 << 18) // max(1, q ** 3 // 64))
    nfree = len(free_pos)
    for start in range(0, count, batch):
        idxs = np.arange(start, min(start + batch, count), dtype=np.int64)
        # decode free digits (last position fastest)
        vecs = np.zeros((len(idxs), 3 * n), dtype=np.int64)
        for pos, val in fixed.items():
            vecs[:, pos] = val
        rem = idxs.copy()
        for slot in range(nfree - 1, -1, -1):
            vecs[:, free_pos[slot]] = rem % q
            rem //= q
        # value tables per component: (B, q^3)
        tabs = []
        for c in range(3):
            coeffs = vecs[:, c * n:(c + 1) * n]
            acc = np.zeros((len(idxs), q ** 3), dtype=np.int64)
            for j in range(n):
                col = coeffs[:, j]
                if not (col != 0).any():
                    continue
                prod = ctx.v_mul(col[:, None], mono_vals[j][None, :])
                acc = ctx.v_add(acc, prod)
            tabs.append(acc)
        f1v, f2v, f3v = tabs
        # origin-row prefilter: s(j) = x f3 + y f2 + z f1 must be nonzero
        s = ctx.v_add(ctx.v_add(ctx.v_mul(xs[None, :], f3v), ctx.v_mul(ys[None, :], f2v)),
                      ctx.v_mul(zs[None, :], f1v))
        alive = ~np.any(s[:, 1:] == 0, axis=1)
        for row in np.flatnonzero(alive):
            tables = (xs, ys, zs, f1v[row], f2v[row], f3v[row])
            res = _pairscan.pair_scan(ctx, tables, early_exit=True, threads=1)
            if res.first_zero is None:
                found.append(int(idxs[row]))
    return found


# ---------------------------------------------------------------------------
# quartic-extension witness search


@dataclass
class WitnessSearchReport:
    independent_pairs: List[Tuple[TowerElem, TowerElem]]
    dependent_pairs: int
    pairs_scanned: int
    elapsed: float

    def to_json_dict(self) -> dict:
        return {
            "independent_pairs": [[list(a.coords), list(b.coords)]
                                  for a, b in self.independent_pairs],
            "dependent_pairs": self.dependent_pairs,
            "pairs_scanned": self.pairs_scanned,
            "elapsed_ms": round(self.elapsed * 1000.0, 3),
        }


def hyperplane_witness_search(ext: ExtCtx, budget: int = 10 ** 8) -> WitnessSearchReport:
    """Scan all (alpha, beta) pairs of the quartic extension against the
    trace conditions forced by a four-hyperplane split.

    Returns independent witnesses (none exist) plus a count of the pairs
    that satisfy the traces with {1, alpha, beta} dependent.
    """
    if ext.n != 4:
        raise Unsupported("the four-hyperplane case lives in a quartic extension")
    if ext.base.p != 3:
        raise Unsupported("a four-hyperplane split forces characteristic 3")
    N = ext.order
    if N * N > budget:
        raise Unsupported(f"{N * N} pairs exceed budget {budget}")
    t0 = time.perf_counter()
    a = np.arange(N, dtype=np.int64)
    fr = ext.v_frobenius_packed
    mul = ext.v_mul_packed
    add = ext.v_add_packed

    a1 = fr(a)
    a2 = fr(a1)
    a3 = fr(a2)

    def tr4(x):
        acc = x
        y = x
        for _ in range(3):
            y = fr(y)
            acc = add(acc, y)
        return acc

    def tr42(x):
        return add(x, fr(fr(x)))

    # single-element condition: Tr_4(x^{q+1}) + Tr_{4/2}(x^{q^2+1}) = 0
    cond_single = add(tr4(mul(a, a1)), tr42(mul(a, a2))) == 0
    cands = np.flatnonzero(cond_single)
    conj = {0: a, 1: a1, 2: a2, 3: a3}

    independent: List[Tuple[TowerElem, TowerElem]] = []
    dependent = 0
    bc = cands
    b1 = a1[bc]
    b2 = a2[bc]
    b3 = a3[bc]
    b0 = a[bc]
    sum_b123 = add(add(b1, b2), b3)
    b32 = mul(b3, b2)
    b31 = mul(b3, b1)
    b21 = mul(b2, b1)
    sum_bq2q_etc = add(add(b21, b31), b32)      # beta^{q^2+q} + beta^{q^3+q} + beta^{q^3+q^2}
    base = ext.base

    for alpha_packed in cands:
        al = [int(conj[i][alpha_packed]) for i in range(4)]
        al_cross = add(add(mul(np.int64(al[2]), np.int64(al[1])),
                           mul(np.int64(al[3]), np.int64(al[1]))),
                       mul(np.int64(al[3]), np.int64(al[2])))
        # cond3: Tr_4(alpha^{q+1} beta^{q^3+q^2}) + Tr_{4/2}(alpha^{q^2+1} beta^{q^3+q}) = 0
        c3 = add(tr4(mul(np.int64(ext.pack(ext.mul(ext.unpack(al[0]), ext.unpack(al[1])))), b32)),
                 tr42(mul(np.int64(ext.pack(ext.mul(ext.unpack(al[0]), ext.unpack(al[2])))), b31)))
        # cond4: Tr_4(alpha (beta^q + beta^{q^2} + beta^{q^3})) = 0
        c4 = tr4(mul(np.int64(al[0]), sum_b123))
        # cond5: Tr_4(beta (alpha^{q^2+q} + alpha^{q^3+q} + alpha^{q^3+q^2})) = 0
        c5 = tr4(mul(b0, al_cross))
        # cond6: Tr_4(alpha (beta^{q^2+q} + beta^{q^3+q} + beta^{q^3+q^2})) = 0
        c6 = tr4(mul(np.int64(al[0]), sum_bq2q_etc))
        ok = (c3 == 0) & (c4 == 0) & (c5 == 0) & (c6 == 0)
        for row in np.flatnonzero(ok):
            beta_packed = int(bc[row])
            rows = [ext.embed(1), ext.unpack(int(alpha_packed)), ext.unpack(beta_packed)]
            if rank(base, rows) == 3:
                independent.append((ext.from_packed(int(alpha_packed)),
                                    ext.from_packed(beta_packed)))
            else:
                dependent += 1
    return WitnessSearchReport(
        independent_pairs=independent,
        dependent_pairs=dependent,
        pairs_scanned=N * N,
        elapsed=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# degree-2 basis recognition


def recognize_kantor_even(spec: OvoidSpec):
    """Brute-force basis scan: the first (alpha, beta) in packed order whose
    three-plane product reproduces the triple's pair polynomial, or None.

    The scan prefilters on the trace/norm values forced by the solved
    coefficient system, then confirms survivors with the exact residual.
    """
    from .hypersurface import HyperplaneWitness, hyperplane_product_residual

    ctx = spec.ctx
    if ctx.p != 2:
        raise Unsupported("basis recognition applies in characteristic 2")
    if ctx.q ** 3 > 1 << 12:
        raise Unsupported("basis scan supports q^3 <= 4096")
    if spec.degree != 2:
        return None    # no split exists outside degree 2 (zero triple included)
    f1, f2, f3 = spec.polys()
    allowed = {pack_exps(m) for m in
               ((1, 1, 0), (1, 0, 1), (0, 1, 1), (2, 0, 0), (0, 2, 0), (0, 0, 2))}
    for f in (f1, f2, f3):
        if set(f.terms) - allowed:
            return None
    coef = {
        "A1": f1.coeff_raw((1, 1, 0)), "B1": f1.coeff_raw((1, 0, 1)),
        "C1": f1.coeff_raw((0, 1, 1)), "D1": f1.coeff_raw((2, 0, 0)),
        "E1": f1.coeff_raw((0, 2, 0)), "F1": f1.coeff_raw((0, 0, 2)),
        "A2": f2.coeff_raw((1, 1, 0)), "B2": f2.coeff_raw((1, 0, 1)),
        "C2": f2.coeff_raw((0, 1, 1)), "D2": f2.coeff_raw((2, 0, 0)),
        "E2": f2.coeff_raw((0, 2, 0)), "F2": f2.coeff_raw((0, 0, 2)),
        "A3": f3.coeff_raw((1, 1, 0)), "B3": f3.coeff_raw((1, 0, 1)),
        "C3": f3.coeff_raw((0, 1, 1)), "D3": f3.coeff_raw((2, 0, 0)),
        "E3": f3.coeff_raw((0, 2, 0)), "F3": f3.coeff_raw((0, 0, 2)),
    }
    # structural zeros and ones of the solved system
    if any(coef[z] for z in ("A2", "A3", "B1", "B3", "C1", "C2")) or coef["D3"] != 1:
        return None
    if not (coef["A1"] == coef["B2"] == coef["C3"]):
        return None
    ext = ExtCtx(ctx, 3)
    N = ext.order
    e = np.arange(N, dtype=np.int64)
    fr = ext.v_frobenius_packed
    mul = ext.v_mul_packed
    tr = ext.v_trace_packed
    nrm = ext.v_norm_packed
    e1 = fr(e)
    tr_e = tr(e)
    nrm_e = nrm(e)
    tr_q1 = tr(mul(e, e1))
    alphas = np.flatnonzero((tr_e == coef["D2"]) & (nrm_e == coef["E2"]) & (tr_q1 == coef["E3"]))
    betas = np.flatnonzero((tr_e == coef["D1"]) & (nrm_e == coef["F1"]) & (tr_q1 == coef["F3"]))
    if not len(alphas) or not len(betas):
        return None
    for ap in alphas:
        al = ext.unpack(int(ap))
        alq = ext.frobenius(al, 1)
        alq2 = ext.frobenius(al, 2)
        for bp in betas:
            be = ext.unpack(int(bp))
            beq = ext.frobenius(be, 1)
            beq2 = ext.frobenius(be, 2)
            a1v = ext.trace(ext.add(ext.mul(al, beq), ext.mul(al, beq2)))
            if a1v != coef["A1"]:
                continue
            e1v = ext.trace(ext.mul(ext.mul(al, alq), beq2))
            if e1v != coef["E1"]:
                continue
            f2v = ext.trace(ext.mul(al, ext.mul(beq, beq2)))
            if f2v != coef["F2"]:
                continue
            try:
                w = HyperplaneWitness(ext, TowerElem(ext, al), TowerElem(ext, be))
            except DependentBasis:
                continue
            if hyperplane_product_residual(spec, w).is_zero():
                return w
    return None
