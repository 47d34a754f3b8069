"""Dense univariate polynomials over F_{p^2}."""

from __future__ import annotations

import random

from .field import Fq, QuadField


class Poly:
    __slots__ = ("F", "c")

    def __init__(self, F: QuadField, coeffs):
        self.F = F
        c = [F(x) if isinstance(x, int) else x for x in coeffs]
        while c and c[-1].is_zero():
            c.pop()
        self.c = c

    @classmethod
    def x(cls, F: QuadField) -> "Poly":
        return cls(F, [F.zero, F.one])

    @classmethod
    def const(cls, F: QuadField, a) -> "Poly":
        return cls(F, [F(a)])

    @classmethod
    def from_roots(cls, F: QuadField, roots, lead=None) -> "Poly":
        out = cls(F, [F.one if lead is None else lead])
        for r in roots:
            out = out * cls(F, [-r, F.one])
        return out

    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def lc(self) -> Fq:
        return self.c[-1] if self.c else self.F.zero

    def __getitem__(self, i: int) -> Fq:
        return self.c[i] if 0 <= i < len(self.c) else self.F.zero

    def padded(self, n: int) -> list[Fq]:
        return [self[i] for i in range(n)]

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fq)):
            return Poly(self.F, [self.F(other)])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.c), len(other.c))
        return Poly(self.F, [self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.F, [-a for a in self.c])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.c), len(other.c))
        return Poly(self.F, [self[i] - other[i] for i in range(n)])

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fq)):
            return Poly(self.F, [a * other for a in self.c])
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.c or not other.c:
            return Poly(self.F, [])
        out = [self.F.zero] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a.is_zero():
                continue
            for j, b in enumerate(other.c):
                out[i + j] = out[i + j] + a * b
        return Poly(self.F, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        out = Poly(self.F, [self.F.one])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.F
        r = list(self.c)
        dv = other.degree()
        inv = other.lc().inverse()
        if len(r) - 1 < dv:
            return Poly(F, []), Poly(F, r)
        qt = [F.zero] * (len(r) - dv)
        for k in range(len(r) - 1 - dv, -1, -1):
            coef = r[k + dv] * inv
            qt[k] = coef
            if coef.is_zero():
                continue
            for j, b in enumerate(other.c):
                r[k + j] = r[k + j] - coef * b
        return Poly(F, qt), Poly(F, r[:dv])

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def __eq__(self, other):
        if isinstance(other, (int, Fq)):
            other = self._coerce(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(tuple(a.key() for a in self.c))

    def __call__(self, x):
        acc = self.F.zero
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def __repr__(self):
        if not self.c:
            return "0"
        terms = []
        for i, a in enumerate(self.c):
            if a.is_zero():
                continue
            terms.append(f"({a})*x^{i}" if i else f"({a})")
        return " + ".join(terms)

    def monic(self) -> "Poly":
        if not self.c:
            return self
        inv = self.lc().inverse()
        return Poly(self.F, [a * inv for a in self.c])

    def derivative(self) -> "Poly":
        return Poly(self.F, [a * i for i, a in enumerate(self.c)][1:])

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly(self.F, [])
        for a in reversed(self.c):
            acc = acc * inner + a
        return acc

    def key(self):
        return tuple(a.key() for a in self.c)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly):
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    F = a.F
    r0, r1 = a, b
    s0, s1 = Poly(F, [F.one]), Poly(F, [])
    t0, t1 = Poly(F, []), Poly(F, [F.one])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = r0.lc().inverse()
    return r0 * inv, s0 * inv, t0 * inv


def poly_invmod(a: Poly, m: Poly) -> Poly:
    g, s, _ = poly_xgcd(a % m, m)
    if g.degree() != 0:
        raise ZeroDivisionError("not invertible modulo m")
    return s % m


def poly_powmod(base: Poly, n: int, m: Poly) -> Poly:
    F = base.F
    out = Poly(F, [F.one]) % m
    base = base % m
    while n:
        if n & 1:
            out = out * base % m
        base = base * base % m
        n >>= 1
    return out


def norm_mod(u: Poly, g: Poly) -> Fq:
    """Product of ``g`` over the roots of the monic polynomial ``u`` (deg u <= 2)."""
    F = u.F
    d = u.degree()
    if d <= 0:
        return F.one
    r = g % u
    if d == 1:
        return r(-u[0])
    a, b = r[0], r[1]
    return a * a - a * b * u[1] + b * b * u[0]


def roots(f: Poly, seed: int = 0) -> list[Fq]:
    """Distinct roots of ``f`` in F_{p^2}, sorted canonically."""
    F = f.F
    if f.degree() <= 0:
        return []
    f = f.monic()
    x = Poly.x(F)
    g = poly_gcd(f, poly_powmod(x, F.order, f) - x)
    found: list[Fq] = []
    rng = random.Random(seed)
    _split(g, found, rng)
    return sorted(set(found), key=Fq.key)


def _split(g: Poly, out: list, rng) -> None:
    F = g.F
    d = g.degree()
    if d <= 0:
        return
    if d == 1:
        out.append(-g[0] / g[1])
        return
    if d == 2:
        b, c = g[1] / g[2], g[0] / g[2]
        disc = b * b - c * 4
        s = disc.sqrt()
        inv2 = F(2).inverse()
        out.append((-b + s) * inv2)
        out.append((-b - s) * inv2)
        return
    half = (F.order - 1) // 2
    while True:
        shift = Poly(F, [F.random(rng), F.one])
        h = poly_gcd(g, poly_powmod(shift, half, g) - 1)
        if 0 < h.degree() < d:
            _split(h, out, rng)
            _split(g // h, out, rng)
            return


def is_squarefree(f: Poly) -> bool:
    return poly_gcd(f, f.derivative()).degree() == 0
