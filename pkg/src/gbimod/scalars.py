"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Scalars are coefficient tuples over the power basis 1, z, ..., z^(d-1) of
Q(zeta_m), d = deg Phi_m, with Fraction coefficients.  All operations are
exact; there is no floating point anywhere in this package.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class InvalidConductor(ValueError):
    pass


class RootNotInField(ValueError):
    pass


_FR0 = Fraction(0)
_FR1 = Fraction(1)


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _poly_sub(p, q):
    n = max(len(p), len(q))
    out = [_FR0] * n
    for i, a in enumerate(p):
        out[i] = a
    for i, b in enumerate(q):
        out[i] -= b
    return _trim(out)


def _poly_mul(p, q):
    if not p or not q:
        return []
    out = [_FR0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    out[i + j] += a * b
    return _trim(out)


def _poly_divmod(num, den):
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    quo = [_FR0] * max(0, len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] / lead
        if c:
            quo[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    return quo, _trim(num[:dd])


_cyclo_cache: dict[int, list] = {1: [Fraction(-1), _FR1]}


def _cyclotomic(m: int) -> list:
    """Coefficients of the m-th cyclotomic polynomial, ascending degree."""
    if m in _cyclo_cache:
        return _cyclo_cache[m]
    num = [_FR0] * (m + 1)
    num[0], num[m] = Fraction(-1), _FR1
    for d in range(1, m):
        if m % d == 0:
            num, rem = _poly_divmod(num, _cyclotomic(d))
            assert not rem
    _cyclo_cache[m] = num
    return num


class FieldCtx:
    """Shared context for one field Q(zeta_m); holds reduction tables."""

    def __init__(self, m: int):
        if not isinstance(m, int) or m < 1:
            raise InvalidConductor(f"conductor must be a positive integer, got {m!r}")
        self.m = m
        phi = _cyclotomic(m)
        d = len(phi) - 1
        self.degree = d
        self.modulus = tuple(phi)
        # reduction rows: x^(d+k) mod Phi_m for k = 0 .. d-2 (row 0 also used
        # on its own to multiply by x)
        row0 = tuple(-c for c in phi[:d])
        rows = [row0]
        while len(rows) < max(1, d - 1):
            prev = rows[-1]
            top = prev[-1]
            nxt = (_FR0,) + prev[:-1]
            if top:
                nxt = tuple(a + top * b for a, b in zip(nxt, row0))
            rows.append(nxt)
        self._rows = rows
        self.zero = Scalar(self, (_FR0,) * d)
        self.one = Scalar(self, (_FR1,) + (_FR0,) * (d - 1))
        self._xpow = [self.one.c]  # x^0, extended lazily

    def from_fraction(self, q) -> "Scalar":
        q = Fraction(q)
        return Scalar(self, (q,) + (_FR0,) * (self.degree - 1))

    def scalar(self, v) -> "Scalar":
        if isinstance(v, Scalar):
            if v.ctx.m != self.m:
                raise ValueError("scalar from different field")
            return v
        return self.from_fraction(v)

    def _xpower(self, e: int) -> tuple:
        e %= self.m
        row0 = self._rows[0]
        while len(self._xpow) <= e:
            prev = self._xpow[-1]
            top = prev[-1]
            nxt = (_FR0,) + prev[:-1]
            if top:
                nxt = tuple(a + top * b for a, b in zip(nxt, row0))
            self._xpow.append(nxt)
        return self._xpow[e]

    def zeta(self, k: int, j: int = 1) -> "Scalar":
        """Primitive k-th root of unity to the j-th power; k must divide m."""
        if k < 1 or self.m % k != 0:
            raise RootNotInField(f"zeta({k}) is not in Q(zeta_{self.m})")
        return Scalar(self, self._xpower((self.m // k) * (j % k)))

    def __repr__(self):
        return f"FieldCtx(m={self.m})"


_field_cache: dict[int, FieldCtx] = {}


def make_field(m: int) -> FieldCtx:
    if m not in _field_cache:
        _field_cache[m] = FieldCtx(m)
    return _field_cache[m]


class Scalar:
    __slots__ = ("ctx", "c")

    def __init__(self, ctx: FieldCtx, coeffs: tuple):
        self.ctx = ctx
        self.c = coeffs

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.ctx.m == other.ctx.m and self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c[0] == other and not any(self.c[1:])
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.m, self.c))

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.ctx.m != self.ctx.m:
                raise ValueError("mixed-field arithmetic")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.from_fraction(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.ctx, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.ctx, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.ctx, tuple(b - a for a, b in zip(self.c, o.c)))

    def __neg__(self):
        return Scalar(self.ctx, tuple(-a for a in self.c))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ctx = self.ctx
        d = ctx.degree
        if d == 1:
            return Scalar(ctx, (self.c[0] * o.c[0],))
        # rational factors act coefficientwise; no convolution or reduction
        if not any(self.c[1:]):
            q = self.c[0]
            if not q:
                return ctx.zero
            if q == 1:
                return o
            return Scalar(ctx, tuple(q * y for y in o.c))
        if not any(o.c[1:]):
            q = o.c[0]
            if not q:
                return ctx.zero
            if q == 1:
                return self
            return Scalar(ctx, tuple(x * q for x in self.c))
        conv = [_FR0] * (2 * d - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(o.c):
                    if y:
                        conv[i + j] += x * y
        out = conv[:d]
        rows = ctx._rows
        for k in range(d, 2 * d - 1):
            cf = conv[k]
            if cf:
                for i, r in enumerate(rows[k - d]):
                    if r:
                        out[i] += cf * r
        return Scalar(ctx, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self:
            raise ZeroDivisionError("scalar inverse of zero")
        # extended Euclid on (Phi_m, a): keep cofactor of a only
        r0, r1 = list(self.ctx.modulus), _trim(list(self.c))
        t0, t1 = [], [_FR1]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1))
        cst = r1[0]
        d = self.ctx.degree
        out = [_FR0] * d
        for i, a in enumerate(t1):
            out[i] = a / cst
        return Scalar(self.ctx, tuple(out))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    def __repr__(self):
        return self.render()

    def render(self) -> str:
        m = self.ctx.m
        parts = []
        for i, cf in enumerate(self.c):
            if not cf:
                continue
            mag = abs(cf)
            if i == 0:
                body = str(mag)
            else:
                base = f"zeta({m})" if i == 1 else f"zeta({m})^{i}"
                body = base if mag == 1 else f"{mag}*{base}"
            parts.append(("-" if cf < 0 else "+", body))
        if not parts:
            return "0"
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out
