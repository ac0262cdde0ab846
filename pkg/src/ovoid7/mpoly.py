"""Sparse multivariate polynomials over a field context.

Polynomials are immutable: every operation returns a fresh value.  Terms
live in a dict keyed by packed exponent vectors (6 bits per variable, so
individual exponents are capped at 63, enough for the twisted families),
mapping to nonzero raw coefficients of the owning context (ints for a
FieldCtx, coordinate tuples for an ExtCtx).

Text grammar (CLI input and canonical rendering):

    poly  := term ('+' term)*        '-' may prefix a term, meaning (p-1)*
    term  := coeff ('*' factor)* | factor ('*' factor)*
    factor:= var ('^' exp)?
    vars  := x, y, z   (3 variables)  |  x1 .. x6  (6 variables)
    coeff := field-element integer, or [a,b,...] for extension elements

Rendering sorts terms in descending graded-lexicographic order, which is
also the order used for hashing and JSON serialization.
"""

from __future__ import annotations

import re
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import FieldMismatch, NotRational, ParseError, Unsupported
from .ff import ExtCtx, Fe, FieldCtx, TowerElem

EXP_BITS = 6
MAX_EXP = (1 << EXP_BITS) - 1

Ctx = Union[FieldCtx, ExtCtx]


def _is_ext(ctx) -> bool:
    return isinstance(ctx, ExtCtx)


def _zero_of(ctx):
    return (0,) * ctx.n if _is_ext(ctx) else 0


def _one_of(ctx):
    return ctx.embed(1) if _is_ext(ctx) else 1


def pack_exps(exps: Sequence[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > MAX_EXP:
            raise Unsupported(f"exponent {e} outside supported range 0..{MAX_EXP}")
        key |= e << (EXP_BITS * i)
    return key


def unpack_exps(key: int, nvars: int) -> Tuple[int, ...]:
    return tuple((key >> (EXP_BITS * i)) & MAX_EXP for i in range(nvars))


def var_names(nvars: int) -> List[str]:
    if nvars == 3:
        return ["x", "y", "z"]
    return [f"x{i + 1}" for i in range(nvars)]


class MPoly:
    """A sparse polynomial over `ctx` in `nvars` variables."""

    __slots__ = ("ctx", "nvars", "terms")

    def __init__(self, ctx: Ctx, nvars: int, terms: Optional[Dict[int, object]] = None):
        self.ctx = ctx
        self.nvars = nvars
        self.terms = terms or {}

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, ctx: Ctx, nvars: int) -> "MPoly":
        return cls(ctx, nvars, {})

    @classmethod
    def constant(cls, ctx: Ctx, nvars: int, c) -> "MPoly":
        c = _coerce_raw(ctx, c)
        return cls(ctx, nvars, {} if _raw_is_zero(ctx, c) else {0: c})

    @classmethod
    def variable(cls, ctx: Ctx, nvars: int, i: int, exp: int = 1) -> "MPoly":
        if not 0 <= i < nvars:
            raise Unsupported(f"variable index {i} out of range")
        if exp == 0:
            return cls.constant(ctx, nvars, 1)
        return cls(ctx, nvars, {pack_exps(tuple(exp if j == i else 0 for j in range(nvars))): _one_of(ctx)})

    @classmethod
    def from_dict(cls, ctx: Ctx, nvars: int, d: Dict[Tuple[int, ...], object]) -> "MPoly":
        terms = {}
        for exps, c in d.items():
            c = _coerce_raw(ctx, c)
            if not _raw_is_zero(ctx, c):
                terms[pack_exps(exps)] = c
        return cls(ctx, nvars, terms)

    # -- ring operations -----------------------------------------------------

    def _chk(self, other: "MPoly"):
        if not isinstance(other, MPoly):
            raise FieldMismatch(f"expected MPoly, got {type(other).__name__}")
        if other.ctx is not self.ctx or other.nvars != self.nvars:
            raise FieldMismatch("polynomials over different contexts")

    def __add__(self, other: "MPoly") -> "MPoly":
        self._chk(other)
        ctx = self.ctx
        out = dict(self.terms)
        for k, c in other.terms.items():
            if k in out:
                s = ctx.add(out[k], c)
                if _raw_is_zero(ctx, s):
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return MPoly(ctx, self.nvars, out)

    def __neg__(self) -> "MPoly":
        ctx = self.ctx
        return MPoly(ctx, self.nvars, {k: ctx.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            return self.scale(other)
        self._chk(other)
        ctx = self.ctx
        out: Dict[int, object] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = _add_keys(k1, k2, self.nvars)
                c = ctx.mul(c1, c2)
                if k in out:
                    s = ctx.add(out[k], c)
                    if _raw_is_zero(ctx, s):
                        del out[k]
                    else:
                        out[k] = s
                elif not _raw_is_zero(ctx, c):
                    out[k] = c
        return MPoly(ctx, self.nvars, out)

    def scale(self, c) -> "MPoly":
        ctx = self.ctx
        c = _coerce_raw(ctx, c)
        if _raw_is_zero(ctx, c):
            return MPoly.zero(ctx, self.nvars)
        return MPoly(ctx, self.nvars, {k: ctx.mul(v, c) for k, v in self.terms.items()})

    def __pow__(self, e: int) -> "MPoly":
        if e < 0:
            raise Unsupported("negative polynomial power")
        out = MPoly.constant(self.ctx, self.nvars, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, MPoly) and other.ctx is self.ctx
                and other.nvars == self.nvars and other.terms == self.terms)

    def __hash__(self):
        return hash((id(self.ctx), self.nvars, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(unpack_exps(k, self.nvars)) for k in self.terms)

    # -- evaluation / substitution --------------------------------------------

    def eval(self, point: Sequence) -> object:
        """Evaluate at a point of raw/wrapped field elements; returns wrapped."""
        raw = self.eval_raw([_coerce_raw(self.ctx, v) for v in point])
        return _wrap(self.ctx, raw)

    def eval_raw(self, point: Sequence) -> object:
        if len(point) != self.nvars:
            raise FieldMismatch(f"expected {self.nvars} coordinates")
        ctx = self.ctx
        # cache powers per variable up to the max exponent used
        maxe = [0] * self.nvars
        for k in self.terms:
            for i, e in enumerate(unpack_exps(k, self.nvars)):
                if e > maxe[i]:
                    maxe[i] = e
        pows = []
        for i, v in enumerate(point):
            row = [_one_of(ctx)]
            for _ in range(maxe[i]):
                row.append(ctx.mul(row[-1], v))
            pows.append(row)
        acc = _zero_of(ctx)
        for k, c in self.terms.items():
            term = c
            for i, e in enumerate(unpack_exps(k, self.nvars)):
                if e:
                    term = ctx.mul(term, pows[i][e])
            acc = ctx.add(acc, term)
        return acc

    def substitute(self, images: Sequence["MPoly"]) -> "MPoly":
        """Composition: replace variable i by images[i] (all over one target ring)."""
        if len(images) != self.nvars:
            raise FieldMismatch("need one image per variable")
        tgt = images[0]
        out = MPoly.zero(tgt.ctx, tgt.nvars)
        for k, c in self.terms.items():
            term = MPoly.constant(tgt.ctx, tgt.nvars, c)
            for i, e in enumerate(unpack_exps(k, self.nvars)):
                if e:
                    term = term * images[i] ** e
            out = out + term
        return out

    def remap_vars(self, positions: Sequence[int], nvars: int) -> "MPoly":
        """Rename variable i to positions[i] inside a ring with `nvars` variables."""
        out = {}
        for k, c in self.terms.items():
            exps = unpack_exps(k, self.nvars)
            new = [0] * nvars
            for i, e in enumerate(exps):
                new[positions[i]] += e
            out[pack_exps(new)] = c
        return MPoly(self.ctx, nvars, out)

    # -- coefficient-field moves ----------------------------------------------

    def lift(self, ext: ExtCtx) -> "MPoly":
        """Coerce base-field coefficients into an extension of the same base."""
        if _is_ext(self.ctx):
            raise FieldMismatch("polynomial already has extension coefficients")
        if ext.base is not self.ctx:
            raise FieldMismatch("extension has a different base field")
        return MPoly(ext, self.nvars, {k: ext.embed(c) for k, c in self.terms.items()})

    def try_descend(self) -> "MPoly":
        """Inverse of lift; raises NotRational if any coefficient obstructs."""
        if not _is_ext(self.ctx):
            return self
        ext = self.ctx
        out = {}
        for k, c in self.terms.items():
            out[k] = ext.descend(c)
        return MPoly(ext.base, self.nvars, out)

    def coeff(self, exps: Sequence[int]):
        return _wrap(self.ctx, self.terms.get(pack_exps(exps), _zero_of(self.ctx)))

    def coeff_raw(self, exps: Sequence[int]):
        return self.terms.get(pack_exps(exps), _zero_of(self.ctx))

    def items_sorted(self):
        """Terms in descending graded-lex order (canonical)."""
        def keyfun(kv):
            exps = unpack_exps(kv[0], self.nvars)
            return (sum(exps), exps)

        return sorted(self.terms.items(), key=keyfun, reverse=True)

    # -- text form -------------------------------------------------------------

    def render(self) -> str:
        if not self.terms:
            return "0"
        names = var_names(self.nvars)
        parts = []
        for k, c in self.items_sorted():
            exps = unpack_exps(k, self.nvars)
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(names[i])
                elif e > 1:
                    factors.append(f"{names[i]}^{e}")
            cs = _render_coeff(self.ctx, c)
            if not factors:
                parts.append(cs)
            elif cs == "1":
                parts.append("*".join(factors))
            else:
                parts.append("*".join([cs] + factors))
        return "+".join(parts)

    @classmethod
    def parse(cls, text: str, ctx: Ctx, nvars: int) -> "MPoly":
        return _parse_poly(text, ctx, nvars)

    def __repr__(self):
        return f"MPoly({self.render()!r})"


def _add_keys(k1: int, k2: int, nvars: int) -> int:
    e1 = unpack_exps(k1, nvars)
    e2 = unpack_exps(k2, nvars)
    summed = tuple(a + b for a, b in zip(e1, e2))
    if any(e > MAX_EXP for e in summed):
        raise Unsupported("exponent overflow in product")
    return pack_exps(summed)


def _raw_is_zero(ctx, c) -> bool:
    return not any(c) if _is_ext(ctx) else c == 0


def _coerce_raw(ctx, c):
    if isinstance(c, Fe):
        if _is_ext(ctx):
            if c.ctx is not ctx.base:
                raise FieldMismatch("coefficient from a different base field")
            return ctx.embed(c.v)
        if c.ctx is not ctx:
            raise FieldMismatch("coefficient from a different field")
        return c.v
    if isinstance(c, TowerElem):
        if not _is_ext(ctx) or c.ctx is not ctx:
            raise FieldMismatch("extension coefficient in the wrong ring")
        return c.coords
    if isinstance(c, int):
        # integer encoding of a field element
        if _is_ext(ctx):
            return ctx.unpack(c % ctx.order)
        return c % ctx.q
    if isinstance(c, tuple):
        if not _is_ext(ctx):
            raise FieldMismatch("tuple coefficient over a base field")
        return c
    raise FieldMismatch(f"cannot use {type(c).__name__} as coefficient")


def _wrap(ctx, raw):
    return TowerElem(ctx, raw) if _is_ext(ctx) else Fe(ctx, raw)


def _render_coeff(ctx, c) -> str:
    if _is_ext(ctx):
        if ctx.is_rational(c):
            return str(c[0])
        return "[" + ",".join(str(x) for x in c) + "]"
    return str(c)


_TERM_SPLIT = re.compile(r"\+")


def _parse_poly(text: str, ctx: Ctx, nvars: int) -> MPoly:
    names = {n: i for i, n in enumerate(var_names(nvars))}
    s = text.strip().replace(" ", "").replace("\t", "")
    if not s:
        raise ParseError("empty polynomial text")
    # unary/binary minus becomes an explicit (p-1)-scaled term
    s = s.replace("-", "+-")
    if s.startswith("+-"):
        s = s[1:]
    if s.startswith("+"):
        raise ParseError(f"dangling '+' in {text!r}")
    out = MPoly.zero(ctx, nvars)
    for chunk in _TERM_SPLIT.split(s):
        if not chunk:
            raise ParseError(f"empty term in {text!r}")
        negate = chunk.startswith("-")
        if negate:
            chunk = chunk[1:]
            if not chunk:
                raise ParseError(f"bare '-' in {text!r}")
        exps = [0] * nvars
        coeff = _one_of(ctx)
        for factor in chunk.split("*"):
            if not factor:
                raise ParseError(f"empty factor in term {chunk!r}")
            if factor[0].isdigit() or factor[0] == "[":
                coeff = ctx.mul(coeff, _parse_coeff(factor, ctx))
                continue
            m = re.fullmatch(r"([a-z]\d*)(?:\^(\d+))?", factor)
            if not m or m.group(1) not in names:
                raise ParseError(f"bad factor {factor!r} for {nvars} variables")
            e = int(m.group(2) or 1)
            if e > MAX_EXP:
                raise ParseError(f"exponent {e} too large")
            exps[names[m.group(1)]] += e
        if negate:
            coeff = ctx.neg(coeff)
        if any(e > MAX_EXP for e in exps):
            raise ParseError("accumulated exponent too large")
        term = MPoly(ctx, nvars, {} if _raw_is_zero(ctx, coeff) else {pack_exps(exps): coeff})
        out = out + term
    return out


def _parse_coeff(tok: str, ctx: Ctx):
    if tok.startswith("["):
        if not tok.endswith("]") or not _is_ext(ctx):
            raise ParseError(f"bad coefficient {tok!r}")
        try:
            coords = tuple(int(x) for x in tok[1:-1].split(","))
        except ValueError:
            raise ParseError(f"bad coefficient {tok!r}") from None
        if len(coords) != ctx.n or any(not 0 <= c < ctx.q for c in coords):
            raise ParseError(f"coefficient {tok!r} has bad coordinates")
        return coords
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(f"bad coefficient {tok!r}") from None
    q = ctx.order if _is_ext(ctx) else ctx.q
    if not 0 <= v < q:
        raise ParseError(f"coefficient {v} outside [0, {q})")
    return ctx.unpack(v) if _is_ext(ctx) else v
