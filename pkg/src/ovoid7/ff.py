"""Finite fields F_q = F_{p^h} with q <= 2^20 and their small extensions.

Elements of F_q are encoded as integers in [0, q): the element with
power-basis digits (d_0, ..., d_{h-1}) is sum(d_i * p^i).  Elements of an
extension F_{q^n} (n in {1,2,3,4}) are length-n tuples of such integers,
or equivalently the packed integer sum(c_i * q^i).

Contexts are immutable after construction and all element operations are
pure, so contexts can be shared freely across threads.
"""

from __future__ import annotations

import functools
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from .errors import CompositeP, FieldMismatch, NotRational, Unsupported

MAX_ORDER = 1 << 20
# element tables (numpy + python lists) are only materialized below this
TABLE_LIMIT = 1 << 10

# Curated default moduli, coefficients low-degree-first including the
# leading 1.  Conway polynomials where we have them tabulated; anything
# missing falls back to the lexicographically smallest monic irreducible.
DEFAULT_MODULI = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 2, 1, 0, 2, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (11, 1): (9, 1),
    (11, 2): (2, 7, 1),
    (13, 1): (11, 1),
    (13, 2): (2, 12, 1),
    (17, 1): (14, 1),
    (19, 1): (17, 1),
    (23, 1): (18, 1),
    (29, 1): (27, 1),
    (31, 1): (28, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict:
    """Prime factorization by trial division; fine for n <= 2^20-ish."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------
# dense polynomial helpers over F_p (coefficient lists, low degree first)

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a, m, p):
    a = list(a)
    _ptrim(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        shift = len(a) - 1 - dm
        c = (a[-1] * inv_lead) % p
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _ptrim(a)
    return a


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    _ptrim(a)
    _ptrim(b)
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppow_x(e: int, m, p):
    """x^e mod m over F_p by square and multiply."""
    result = [1]
    base = _pmod([0, 1], m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def poly_irreducible_fp(coeffs: Sequence[int], p: int) -> bool:
    """Exact irreducibility test over F_p via gcd(x^{p^i} - x, f)."""
    f = list(coeffs)
    h = len(f) - 1
    if h < 1 or f[-1] % p != 1:
        return False
    if h == 1:
        return True
    if f[0] == 0:
        return False
    for i in range(1, h // 2 + 1):
        g = _ppow_x(p ** i, f, p)
        # g - x
        gx = list(g) + [0] * max(0, 2 - len(g))
        gx[1] = (gx[1] - 1) % p
        if len(_pgcd(f, gx, p)) - 1 > 0:
            return False
    # x^{p^h} == x check (f divides x^{p^h} - x)
    g = _ppow_x(p ** h, f, p)
    gx = list(g) + [0] * max(0, 2 - len(g))
    gx[1] = (gx[1] - 1) % p
    _ptrim(gx)
    return not gx


def _smallest_irreducible_fp(p: int, h: int) -> Tuple[int, ...]:
    # candidates ordered low-degree-first: c0 most significant in the
    # lexicographic comparison, so c_{h-1} is incremented fastest
    idx = [1] + [0] * (h - 1)
    while True:
        cand = idx + [1]
        if poly_irreducible_fp(cand, p):
            return tuple(cand)
        # increment with c_{h-1} fastest
        for k in range(h - 1, -1, -1):
            idx[k] += 1
            if idx[k] < p:
                break
            idx[k] = 0
        else:
            raise RuntimeError("no irreducible polynomial found")  # unreachable


class Fe:
    """An element of F_q, wrapping the integer encoding."""

    __slots__ = ("ctx", "v")

    def __init__(self, ctx: "FieldCtx", v: int):
        self.ctx = ctx
        self.v = v

    def __add__(self, other):
        return Fe(self.ctx, self.ctx.add(self.v, self._val(other)))

    def __sub__(self, other):
        return Fe(self.ctx, self.ctx.sub(self.v, self._val(other)))

    def __neg__(self):
        return Fe(self.ctx, self.ctx.neg(self.v))

    def __mul__(self, other):
        return Fe(self.ctx, self.ctx.mul(self.v, self._val(other)))

    def __truediv__(self, other):
        return Fe(self.ctx, self.ctx.mul(self.v, self.ctx.inv(self._val(other))))

    def __pow__(self, e: int):
        return Fe(self.ctx, self.ctx.pow(self.v, e))

    def inverse(self):
        return Fe(self.ctx, self.ctx.inv(self.v))

    def _val(self, other):
        if isinstance(other, Fe):
            if other.ctx is not self.ctx:
                raise FieldMismatch("elements from different field contexts")
            return other.v
        raise FieldMismatch(f"cannot combine Fe with {type(other).__name__}")

    def __eq__(self, other):
        return isinstance(other, Fe) and other.ctx is self.ctx and other.v == self.v

    def __hash__(self):
        return hash((id(self.ctx), self.v))

    def __int__(self):
        return self.v

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"Fe({self.v} in GF({self.ctx.q}))"


class FieldCtx:
    """Arithmetic context for F_q, q = p^h <= 2^20.

    Raw operations (add/sub/mul/...) act on integer encodings; `element`
    wraps them into Fe values for the object-level API.
    """

    def __init__(self, p: int, h: int, modulus: Optional[Sequence[int]] = None):
        if not is_prime(p):
            raise CompositeP(f"{p} is not prime")
        if h < 1:
            raise Unsupported("extension degree must be positive")
        q = p ** h
        if q > MAX_ORDER:
            raise Unsupported(f"field order {q} exceeds supported range 2^20")
        self.p = p
        self.h = h
        self.q = q
        if modulus is None:
            modulus = DEFAULT_MODULI.get((p, h)) or _smallest_irreducible_fp(p, h)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != h + 1 or modulus[-1] != 1:
            raise Unsupported("modulus must be monic of degree h")
        if not poly_irreducible_fp(modulus, p):
            raise Unsupported("modulus is reducible over the prime field")
        self.modulus = modulus
        # reduction rows: t^(h+i) expressed in the power basis, i < h-1
        self._red = []
        if h > 1:
            row = [(-c) % p for c in modulus[:h]]
            for _ in range(h - 1):
                self._red.append(tuple(row))
                carry = row[-1]
                row = [0] + row[:-1]
                t = self._red[0]
                row = [(row[i] + carry * t[i]) % p for i in range(h)]
        self._scalar_log = None
        self._scalar_exp = None
        self._np = {}

    # -- encoding ----------------------------------------------------------

    def digits(self, a: int) -> Tuple[int, ...]:
        p = self.p
        return tuple((a // p ** i) % p for i in range(self.h))

    def from_digits(self, ds: Sequence[int]) -> int:
        p = self.p
        return sum((int(d) % p) * p ** i for i, d in enumerate(ds))

    def element(self, a: int) -> Fe:
        if not 0 <= a < self.q:
            raise Unsupported(f"element encoding {a} outside [0, {self.q})")
        return Fe(self, a)

    def of_int(self, n: int) -> Fe:
        """Ring map Z -> F_q (n times the identity)."""
        return Fe(self, n % self.p)

    def elements(self) -> Iterator[int]:
        return iter(range(self.q))

    @property
    def name(self) -> str:
        return f"{self.p}^{self.h}"

    def modulus_text(self) -> str:
        parts = []
        for i in range(self.h, -1, -1):
            c = self.modulus[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else f"{c}*"
                parts.append(f"{head}t^{i}" if i > 1 else f"{head}t")
        return "+".join(parts) or "0"

    # -- raw arithmetic on integer encodings -------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        if self.h == 1:
            return (a + b) % p
        out = 0
        mult = 1
        for _ in range(self.h):
            out += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        if self.h == 1:
            return (-a) % p
        out = 0
        mult = 1
        for _ in range(self.h):
            out += ((p - a % p) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.h == 1:
            return (a * b) % self.p
        log, exp = self._scalar_tables()
        if log is not None:
            return exp[(log[a] + log[b]) % (self.q - 1)]
        return self._mul_poly(a, b)

    def _mul_poly(self, a: int, b: int) -> int:
        p, h = self.p, self.h
        da = self.digits(a)
        db = self.digits(b)
        prod = [0] * (2 * h - 1)
        for i, ai in enumerate(da):
            if ai:
                for j, bj in enumerate(db):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        out = list(prod[:h])
        for i in range(h, 2 * h - 1):
            c = prod[i]
            if c:
                row = self._red[i - h]
                for k in range(h):
                    out[k] = (out[k] + c * row[k]) % p
        return self.from_digits(out)

    def inv(self, a: int) -> int:
        """Multiplicative inverse via extended Euclid on digit polynomials."""
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        p = self.p
        if self.h == 1:
            return pow(a, p - 2, p)
        r0, r1 = list(self.modulus), list(self.digits(a))
        _ptrim(r1)
        s0, s1 = [], [1]
        while len(r1) > 1:
            q_, r = _pdivmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q_, s1, p), p)
            if not r1:
                raise ZeroDivisionError("element not invertible")
        c = r1[0]
        cinv = pow(c, p - 2, p)
        out = [(cinv * x) % p for x in s1]
        out = _pmod(out, list(self.modulus), p)
        out += [0] * (self.h - len(out))
        return self.from_digits(out)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = 1 if self.q > 1 else 0
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def is_square(self, a: int) -> bool:
        if self.p == 2 or a == 0:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    # -- table machinery ----------------------------------------------------

    def _scalar_tables(self):
        if self.q > TABLE_LIMIT:
            return None, None
        if self._scalar_log is None:
            g = self._find_generator()
            exp = [1] * (self.q - 1)
            log = [0] * self.q
            acc = 1
            for i in range(self.q - 1):
                exp[i] = acc
                log[acc] = i
                acc = self._mul_poly(acc, g) if self.h > 1 else (acc * g) % self.p
            self._scalar_exp = exp
            self._scalar_log = log
        return self._scalar_log, self._scalar_exp

    def _find_generator(self) -> int:
        n = self.q - 1
        fac = factorize(n)
        mul = self._mul_poly if self.h > 1 else lambda a, b: (a * b) % self.p

        def order_ok(g):
            for prime in fac:
                e = n // prime
                acc, base = 1, g
                while e:
                    if e & 1:
                        acc = mul(acc, base)
                    base = mul(base, base)
                    e >>= 1
                if acc == 1:
                    return False
            return True

        for g in range(2, self.q):
            if order_ok(g):
                return g
        return 1  # q == 2

    def np_tables(self) -> dict:
        """Numpy lookup tables for vectorized arithmetic (q <= TABLE_LIMIT)."""
        if self.q > TABLE_LIMIT:
            raise Unsupported(f"vectorized tables unavailable for q={self.q}")
        if self._np:
            return self._np
        q = self.q
        log, exp = self._scalar_tables()
        zbig = 2 * q
        logt = np.full(q, zbig, dtype=np.int64)
        logt[1:] = [log[a] for a in range(1, q)] if q > 1 else []
        expx = np.zeros(4 * q + 4, dtype=np.int64)
        for i in range(2 * (q - 1) + 1):
            expx[i] = exp[i % (q - 1)] if q > 1 else 0
        tab = {"logt": logt, "expx": expx, "order": q - 1}
        if self.p != 2 and self.h > 1:
            ar = np.arange(q)
            dig_a = [(ar // self.p ** i) % self.p for i in range(self.h)]
            add = np.zeros((q, q), dtype=np.int64)
            for i in range(self.h):
                da = dig_a[i][:, None]
                db = dig_a[i][None, :]
                add += ((da + db) % self.p) * self.p ** i
            tab["add_flat"] = add.reshape(-1)
            neg = np.zeros(q, dtype=np.int64)
            for i in range(self.h):
                neg += ((self.p - dig_a[i]) % self.p) * self.p ** i
            tab["neg"] = neg
            sub = add[:, neg].copy() if q <= TABLE_LIMIT else None
            tab["sub_flat"] = sub.reshape(-1)
        inv_arr = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv_arr[a] = exp[(q - 1 - log[a]) % (q - 1)] if q > 2 else a
        tab["inv"] = inv_arr
        self._np = tab
        return tab

    # -- vectorized raw ops (numpy int64 arrays of encodings) ---------------

    def v_add(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.h == 1:
            return (a + b) % self.p
        t = self.np_tables()
        return t["add_flat"][a * self.q + b]

    def v_sub(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.h == 1:
            return (a - b) % self.p
        t = self.np_tables()
        return t["sub_flat"][a * self.q + b]

    def v_mul(self, a, b):
        if self.h == 1:
            return (a * b) % self.p
        t = self.np_tables()
        return t["expx"][t["logt"][a] + t["logt"][b]]

    def v_pow(self, a, e: int):
        if e == 0:
            return np.ones_like(a)
        if self.h == 1:
            # pow() on arrays stays in int64 range via repeated squaring
            out = np.ones_like(a)
            base = a % self.p
            ee = e
            while ee:
                if ee & 1:
                    out = (out * base) % self.p
                base = (base * base) % self.p
                ee >>= 1
            return out
        t = self.np_tables()
        lg = t["logt"][a]
        zero = lg >= 2 * self.q
        out = t["expx"][(lg * e) % t["order"]]
        out[zero] = 0
        return out

    def __repr__(self):
        return f"FieldCtx(GF({self.p}^{self.h}))"


def _pdivmod(a, b, p):
    a = list(a)
    _ptrim(a)
    b = list(b)
    _ptrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    q_ = [0] * max(1, len(a) - db)
    while a and len(a) - 1 >= db:
        shift = len(a) - 1 - db
        c = (a[-1] * inv_lead) % p
        q_[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _ptrim(a)
    return _ptrim(q_), a


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out[i] = (x - y) % p
    return _ptrim(out)


@functools.lru_cache(maxsize=None)
def make_field(p: int, h: int = 1) -> FieldCtx:
    """Build (and cache) the F_{p^h} context with the default modulus."""
    return FieldCtx(p, h)


def parse_field_spec(text: str) -> FieldCtx:
    """Parse "p^h" or a plain prime power "q" into a field context."""
    text = text.strip()
    try:
        if "^" in text:
            ps, hs = text.split("^", 1)
            p, h = int(ps), int(hs)
        else:
            q = int(text)
            if q < 2:
                raise ValueError
            fac = factorize(q)
            if len(fac) != 1:
                raise CompositeP(f"{q} is not a prime power")
            (p, h), = fac.items()
    except CompositeP:
        raise
    except ValueError:
        raise CompositeP(f"cannot parse field spec {text!r}") from None
    return make_field(p, h)


# ---------------------------------------------------------------------------
# extensions


class TowerElem:
    """An element of F_{q^n}, as a coordinate vector over F_q."""

    __slots__ = ("ctx", "coords")

    def __init__(self, ctx: "ExtCtx", coords: Sequence[int]):
        self.ctx = ctx
        self.coords = tuple(coords)

    def __add__(self, other):
        return TowerElem(self.ctx, self.ctx.add(self.coords, self._val(other)))

    def __sub__(self, other):
        return TowerElem(self.ctx, self.ctx.sub(self.coords, self._val(other)))

    def __neg__(self):
        return TowerElem(self.ctx, self.ctx.neg(self.coords))

    def __mul__(self, other):
        return TowerElem(self.ctx, self.ctx.mul(self.coords, self._val(other)))

    def __truediv__(self, other):
        return TowerElem(self.ctx, self.ctx.mul(self.coords, self.ctx.inv(self._val(other))))

    def __pow__(self, e: int):
        return TowerElem(self.ctx, self.ctx.pow(self.coords, e))

    def _val(self, other):
        if isinstance(other, TowerElem):
            if other.ctx is not self.ctx:
                raise FieldMismatch("elements from different extension contexts")
            return other.coords
        if isinstance(other, Fe):
            if other.ctx is not self.ctx.base:
                raise FieldMismatch("base element from a different field")
            return self.ctx.embed(other.v)
        raise FieldMismatch(f"cannot combine TowerElem with {type(other).__name__}")

    def __eq__(self, other):
        return (isinstance(other, TowerElem) and other.ctx is self.ctx
                and other.coords == self.coords)

    def __hash__(self):
        return hash((id(self.ctx), self.coords))

    def __bool__(self):
        return any(self.coords)

    @property
    def packed(self) -> int:
        return self.ctx.pack(self.coords)

    def __repr__(self):
        return f"TowerElem({list(self.coords)} in GF({self.ctx.base.q}^{self.ctx.n}))"


class ExtCtx:
    """Degree-n extension F_{q^n} of a base FieldCtx, n in {1,2,3,4}."""

    def __init__(self, base: FieldCtx, n: int, modulus: Optional[Sequence[int]] = None):
        if n not in (1, 2, 3, 4):
            raise Unsupported("extension degree must be 1..4")
        if base.q ** n > MAX_ORDER:
            raise Unsupported(f"extension order {base.q ** n} exceeds 2^20")
        self.base = base
        self.n = n
        self.q = base.q
        self.order = base.q ** n
        if modulus is None:
            modulus = self._smallest_irreducible()
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise Unsupported("extension modulus must be monic of degree n")
        if not self._irreducible(modulus):
            raise Unsupported("extension modulus is reducible")
        self.modulus = modulus
        # reduction rows for t^(n+i)
        self._red = []
        if n > 1:
            row = [base.neg(c) for c in modulus[:n]]
            for _ in range(n - 1):
                self._red.append(tuple(row))
                carry = row[-1]
                row = [0] + row[:-1]
                t0 = self._red[0]
                row = [base.add(row[k], base.mul(carry, t0[k])) for k in range(n)]
        # Frobenius basis images: img[i][j] = (t^j)^(q^i)
        self._frob_imgs = None
        self._packed = {}
        self._check_frobenius_order()

    # -- modulus selection / validation -------------------------------------

    def _irreducible(self, coeffs) -> bool:
        b = self.base
        # root test covers degrees 2 and 3 fully
        for x in range(b.q):
            acc = 0
            xp = 1
            for c in coeffs:
                acc = b.add(acc, b.mul(c, xp))
                xp = b.mul(xp, x)
            if acc == 0:
                return False
        if self.n < 4:
            return True
        # degree 4: additionally exclude irreducible quadratic factors via
        # gcd(x^{q^2} - x, f) over F_q
        f = list(coeffs)
        g = self._powx_mod(self.q ** 2, f)
        g = list(g) + [0] * max(0, 2 - len(g))
        g[1] = b.sub(g[1], 1)
        while g and g[-1] == 0:
            g.pop()
        return self._gcd_deg(f, g) == 0

    def _powx_mod(self, e, m):
        b = self.base

        def pmulq(a1, a2):
            if not a1 or not a2:
                return []
            out = [0] * (len(a1) + len(a2) - 1)
            for i, ai in enumerate(a1):
                if ai:
                    for j, aj in enumerate(a2):
                        out[i + j] = b.add(out[i + j], b.mul(ai, aj))
            while out and out[-1] == 0:
                out.pop()
            return out

        def pmodq(a, mm):
            a = list(a)
            while a and a[-1] == 0:
                a.pop()
            dm = len(mm) - 1
            while a and len(a) - 1 >= dm:
                shift = len(a) - 1 - dm
                c = a[-1]
                for i, mi in enumerate(mm):
                    a[shift + i] = b.sub(a[shift + i], b.mul(c, mi))
                while a and a[-1] == 0:
                    a.pop()
            return a

        result = [1]
        base_p = pmodq([0, 1], m)
        while e:
            if e & 1:
                result = pmodq(pmulq(result, base_p), m)
            base_p = pmodq(pmulq(base_p, base_p), m)
            e >>= 1
        return result

    def _gcd_deg(self, a, b_) -> int:
        b = self.base
        a = list(a)
        b_ = list(b_)

        def norm(x):
            while x and x[-1] == 0:
                x.pop()
            return x

        def pmodq(x, y):
            x = norm(list(x))
            y = norm(list(y))
            dy = len(y) - 1
            ylead_inv = b.inv(y[-1])
            while x and len(x) - 1 >= dy:
                shift = len(x) - 1 - dy
                c = b.mul(x[-1], ylead_inv)
                for i, yi in enumerate(y):
                    x[shift + i] = b.sub(x[shift + i], b.mul(c, yi))
                x = norm(x)
            return x

        a, b_ = norm(a), norm(b_)
        while b_:
            a, b_ = b_, pmodq(a, b_)
        return len(a) - 1 if a else -1

    def _smallest_irreducible(self):
        n = self.n
        if n == 1:
            # degree-1 modulus t - 1: the trivial extension with root 1
            return (self.base.neg(1), 1)
        idx = [1] + [0] * (n - 1)
        while True:
            cand = tuple(idx) + (1,)
            if self._irreducible(cand):
                return cand
            for k in range(n - 1, -1, -1):
                idx[k] += 1
                if idx[k] < self.base.q:
                    break
                idx[k] = 0
            else:
                raise RuntimeError("no irreducible extension modulus found")

    def _check_frobenius_order(self):
        coords = self.gen().coords
        x = coords
        for _ in range(self.n):
            x = self.frobenius(x, 1) if self.n > 1 else x
        if tuple(x) != tuple(coords):
            raise Unsupported("Frobenius applied n times is not the identity")

    # -- encoding ------------------------------------------------------------

    def pack(self, coords) -> int:
        q = self.q
        out = 0
        for c in reversed(coords):
            out = out * q + c
        return out

    def unpack(self, e: int) -> Tuple[int, ...]:
        q = self.q
        return tuple((e // q ** i) % q for i in range(self.n))

    def element(self, coords) -> TowerElem:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.n or any(not 0 <= c < self.q for c in coords):
            raise Unsupported("bad coordinate vector for extension element")
        return TowerElem(self, coords)

    def from_packed(self, e: int) -> TowerElem:
        return TowerElem(self, self.unpack(e))

    def embed(self, a: int) -> Tuple[int, ...]:
        return (a,) + (0,) * (self.n - 1)

    def embed_elem(self, a) -> TowerElem:
        v = a.v if isinstance(a, Fe) else int(a)
        return TowerElem(self, self.embed(v))

    def gen(self) -> TowerElem:
        """Power-basis root t of the extension modulus."""
        if self.n == 1:
            return TowerElem(self, (self.base.neg(self.modulus[0]),))
        return TowerElem(self, (0, 1) + (0,) * (self.n - 2))

    def zero(self) -> TowerElem:
        return TowerElem(self, (0,) * self.n)

    def one(self) -> TowerElem:
        return TowerElem(self, self.embed(1))

    def elements(self) -> Iterator[TowerElem]:
        for e in range(self.order):
            yield self.from_packed(e)

    def is_rational(self, coords) -> bool:
        return all(c == 0 for c in coords[1:])

    def descend(self, coords) -> int:
        if not self.is_rational(coords):
            raise NotRational(f"{coords} has nonzero extension coordinates")
        return coords[0]

    # -- arithmetic on coordinate tuples -------------------------------------

    def add(self, a, b):
        bb = self.base
        return tuple(bb.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        bb = self.base
        return tuple(bb.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        bb = self.base
        return tuple(bb.neg(x) for x in a)

    def mul(self, a, b):
        bb = self.base
        n = self.n
        if n == 1:
            return (bb.mul(a[0], b[0]),)
        prod = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] = bb.add(prod[i + j], bb.mul(ai, bj))
        out = list(prod[:n])
        for i in range(n, 2 * n - 1):
            c = prod[i]
            if c:
                row = self._red[i - n]
                for k in range(n):
                    out[k] = bb.add(out[k], bb.mul(c, row[k]))
        return tuple(out)

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero")
        bb = self.base
        n = self.n
        if n == 1:
            return (bb.inv(a[0]),)

        def norm(x):
            while x and x[-1] == 0:
                x.pop()
            return x

        def pmul(x, y):
            if not x or not y:
                return []
            out = [0] * (len(x) + len(y) - 1)
            for i, xi in enumerate(x):
                if xi:
                    for j, yj in enumerate(y):
                        out[i + j] = bb.add(out[i + j], bb.mul(xi, yj))
            return norm(out)

        def pdivmod(x, y):
            x = norm(list(x))
            y = norm(list(y))
            dy = len(y) - 1
            yl = bb.inv(y[-1])
            qq = [0] * max(1, len(x) - dy)
            while x and len(x) - 1 >= dy:
                shift = len(x) - 1 - dy
                c = bb.mul(x[-1], yl)
                qq[shift] = c
                for i, yi in enumerate(y):
                    x[shift + i] = bb.sub(x[shift + i], bb.mul(c, yi))
                x = norm(x)
            return norm(qq), x

        r0, r1 = list(self.modulus), norm(list(a))
        s0, s1 = [], [1]
        while len(r1) > 1:
            qq, r = pdivmod(r0, r1)
            r0, r1 = r1, r
            t = pmul(qq, s1)
            nlen = max(len(s0), len(t))
            s_new = [bb.sub(s0[i] if i < len(s0) else 0, t[i] if i < len(t) else 0)
                     for i in range(nlen)]
            s0, s1 = s1, norm(s_new)
            if not r1:
                raise ZeroDivisionError("element not invertible")
        c = bb.inv(r1[0])
        out = [bb.mul(c, x) for x in s1]
        out += [0] * (self.n - len(out))
        return tuple(out[:self.n])

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.embed(1)
        base_ = tuple(a)
        while e:
            if e & 1:
                result = self.mul(result, base_)
            base_ = self.mul(base_, base_)
            e >>= 1
        return result

    # -- Frobenius / trace / norm --------------------------------------------

    def _frobenius_images(self):
        if self._frob_imgs is None:
            tq = self.pow(self.gen().coords, self.q)
            # row 0: images of the power basis t^j under x -> x^q
            row = [self.embed(1)]
            acc = self.embed(1)
            for _ in range(1, self.n):
                acc = self.mul(acc, tq)
                row.append(acc)
            imgs = [row]
            for _ in range(1, self.n):
                imgs.append([self._apply_linear(imgs[0], c) for c in imgs[-1]])
            self._frob_imgs = imgs
        return self._frob_imgs

    def _apply_linear(self, imgs_row, coords):
        bb = self.base
        out = (0,) * self.n
        for j, cj in enumerate(coords):
            if cj:
                term = tuple(bb.mul(cj, x) for x in imgs_row[j])
                out = self.add(out, term)
        return out

    def frobenius(self, coords, i: int = 1):
        """coords^(q^i); Frobenius is F_q-linear so this is a basis combo."""
        i %= self.n
        if i == 0:
            return tuple(coords)
        imgs = self._frobenius_images()
        return self._apply_linear(imgs[i - 1], coords)

    def conjugates(self, coords):
        out = [tuple(coords)]
        for _ in range(self.n - 1):
            out.append(self.frobenius(out[-1]))
        return out

    def trace(self, coords) -> int:
        acc = (0,) * self.n
        for c in self.conjugates(coords):
            acc = self.add(acc, c)
        return self.descend(acc)

    def norm(self, coords) -> int:
        acc = self.embed(1)
        for c in self.conjugates(coords):
            acc = self.mul(acc, c)
        return self.descend(acc)

    def rel_trace(self, coords, sub_degree: int = 1) -> Tuple[int, ...]:
        """Trace onto the intermediate field F_{q^sub_degree} (as coords)."""
        if self.n % sub_degree:
            raise Unsupported("no intermediate field of that degree")
        acc = (0,) * self.n
        c = tuple(coords)
        for _ in range(self.n // sub_degree):
            acc = self.add(acc, c)
            c = self.frobenius(c, sub_degree)
        return acc

    # -- packed-integer fast layer --------------------------------------------

    def packed_tables(self) -> dict:
        """log/exp, Frobenius and trace tables over packed integers."""
        if self._packed:
            return self._packed
        N = self.order
        fac = factorize(N - 1)

        def order_ok(g):
            for prime in fac:
                if self.pow(g, (N - 1) // prime) == self.embed(1):
                    return False
            return True

        gen = None
        for e in range(2, N):
            cand = self.unpack(e)
            if order_ok(cand):
                gen = cand
                break
        if gen is None:
            gen = self.embed(1)
        exp = np.zeros(N - 1, dtype=np.int64)
        log = np.full(N, 2 * N, dtype=np.int64)
        acc = self.embed(1)
        for i in range(N - 1):
            pk = self.pack(acc)
            exp[i] = pk
            log[pk] = i
            acc = self.mul(acc, gen)
        expx = np.zeros(4 * N + 4, dtype=np.int64)
        idx = np.arange(2 * (N - 1) + 1)
        expx[: 2 * (N - 1) + 1] = exp[idx % (N - 1)]
        frob = np.zeros(N, dtype=np.int64)
        frob[exp] = expx[(np.arange(N - 1) * self.q) % (N - 1)]
        tabs = {"logt": log, "expx": expx, "order": N - 1, "frob": frob}
        # packed addition helpers: digitwise over the base field
        tabs["digits"] = [((np.arange(N) // self.q ** i) % self.q).astype(np.int64)
                          for i in range(self.n)]
        self._packed = tabs
        return tabs

    def v_mul_packed(self, a, b):
        t = self.packed_tables()
        return t["expx"][t["logt"][a] + t["logt"][b]]

    def v_add_packed(self, a, b):
        if self.base.p == 2:
            return np.bitwise_xor(a, b)
        t = self.packed_tables()
        q = self.q
        out = np.zeros_like(a)
        for i in range(self.n):
            da = (a // q ** i) % q
            db = (b // q ** i) % q
            out += self.base.v_add(da, db) * q ** i
        return out

    def v_frobenius_packed(self, a, i: int = 1):
        t = self.packed_tables()
        out = a
        for _ in range(i % self.n):
            out = t["frob"][out]
        return out

    def v_trace_packed(self, a):
        """Absolute trace to F_q of packed elements, as base encodings."""
        conj = a
        tot = a.copy()
        for _ in range(self.n - 1):
            conj = self.v_frobenius_packed(conj)
            tot = self.v_add_packed(tot, conj)
        # rational check: higher digits vanish
        if np.any(tot >= self.q):
            raise NotRational("trace left the base field")
        return tot

    def v_norm_packed(self, a):
        conj = a
        tot = a.copy()
        for _ in range(self.n - 1):
            conj = self.v_frobenius_packed(conj)
            tot = self.v_mul_packed(tot, conj)
        if np.any(tot >= self.q):
            raise NotRational("norm left the base field")
        return tot

    def __repr__(self):
        return f"ExtCtx(GF(({self.base.p}^{self.base.h})^{self.n}))"


# -- module-level operations matching the library surface --------------------


def frobenius(x: TowerElem, i: int = 1) -> TowerElem:
    return TowerElem(x.ctx, x.ctx.frobenius(x.coords, i))


def rel_trace(x: TowerElem) -> Fe:
    return Fe(x.ctx.base, x.ctx.trace(x.coords))


def rel_norm(x: TowerElem) -> Fe:
    return Fe(x.ctx.base, x.ctx.norm(x.coords))
