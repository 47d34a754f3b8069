"""Mumford divisors on imaginary genus-2 models: Cantor's group law and the
Weil pairing via Miller functions.
"""

from __future__ import annotations

import random

from .errors import CurveMismatch, NotTorsion, UnsupportedModel
from .field import Fq
from .invariants import Genus2Curve
from .poly import Poly, norm_mod, poly_xgcd


class MumfordDivisor:
    """Reduced class (u, v) with u monic, deg v < deg u <= 2, u | f - v^2."""

    __slots__ = ("curve", "u", "v")

    def __init__(self, curve: Genus2Curve, u: Poly, v: Poly, check: bool = False):
        self.curve = curve
        self.u = u
        self.v = v
        if check:
            if curve.degree != 5:
                raise UnsupportedModel("Cantor arithmetic needs a quintic model")
            if u.is_zero() or not u.lc().is_one() or u.degree() > 2 or v.degree() >= max(u.degree(), 0) and not v.is_zero():
                raise ValueError("not a reduced Mumford pair")
            if not ((curve.f - v * v) % u).is_zero():
                raise ValueError("u does not divide f - v^2")

    @classmethod
    def identity(cls, curve: Genus2Curve) -> "MumfordDivisor":
        F = curve.F
        return cls(curve, Poly(F, [F.one]), Poly(F, []))

    @classmethod
    def from_point(cls, curve: Genus2Curve, x: Fq, y: Fq) -> "MumfordDivisor":
        """The class of (x, y) - infinity."""
        F = curve.F
        if curve.f(x) != y * y:
            raise ValueError("point not on curve")
        return cls(curve, Poly(F, [-x, F.one]), Poly(F, [y]))

    def is_identity(self) -> bool:
        return self.u.degree() == 0

    def __eq__(self, other):
        if not isinstance(other, MumfordDivisor):
            return NotImplemented
        return self.u == other.u and self.v == other.v and self.curve.f == other.curve.f

    def __hash__(self):
        return hash((self.u, self.v))

    def __repr__(self):
        return f"Div(u={self.u}, v={self.v})"

    def __neg__(self):
        return MumfordDivisor(self.curve, self.u, -self.v)

    def __add__(self, other):
        return cantor_add(self, other)

    def __sub__(self, other):
        return cantor_add(self, -other)

    def __mul__(self, n: int):
        return scalar_mul(n, self)

    __rmul__ = __mul__

    def to_bytes(self) -> bytes:
        d = self.u.degree()
        parts = [bytes([d])]
        parts += [a.to_bytes() for a in self.u.padded(d + 1)]
        parts += [a.to_bytes() for a in self.v.padded(d)]
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, curve: Genus2Curve, data: bytes) -> "MumfordDivisor":
        F = curve.F
        w = 2 * F.width
        if not data:
            raise ValueError("empty divisor encoding")
        d = data[0]
        if d > 2 or len(data) != 1 + (2 * d + 1) * w:
            raise ValueError("bad divisor encoding")
        vals = [F.decode(data[1 + i * w:1 + (i + 1) * w]) for i in range(2 * d + 1)]
        u = Poly(F, vals[:d + 1])
        v = Poly(F, vals[d + 1:])
        if u.degree() != d:
            raise ValueError("bad divisor encoding")
        return cls(curve, u, v, check=True)


def _compose(curve, u1, v1, u2, v2):
    """Cantor composition: returns semi-reduced (u, v) and the gcd factor d."""
    f = curve.f
    d0, e1, e2 = poly_xgcd(u1, u2)
    d, c1, c2 = poly_xgcd(d0, v1 + v2)
    s1, s2, s3 = c1 * e1, c1 * e2, c2
    dd = d * d
    u = (u1 * u2).exact_div(dd)
    v = ((s1 * u1 * v2 + s2 * u2 * v1 + s3 * (v1 * v2 + f)).exact_div(d)) % u
    return u, v, d


def _reduce(curve, u, v, trace=None):
    f = curve.f
    while u.degree() > 2:
        un = (f - v * v).exact_div(u)
        if trace is not None:
            trace.append((v, un))
        v = (-v) % un
        u = un
    inv = u.lc().inverse()
    return u * inv, v


def cantor_add(D1: MumfordDivisor, D2: MumfordDivisor) -> MumfordDivisor:
    if D1.curve.f != D2.curve.f:
        raise CurveMismatch("divisors live on different curves")
    if D1.is_identity():
        return D2
    if D2.is_identity():
        return D1
    u, v, _ = _compose(D1.curve, D1.u, D1.v, D2.u, D2.v)
    u, v = _reduce(D1.curve, u, v)
    return MumfordDivisor(D1.curve, u, v)


def scalar_mul(n: int, D: MumfordDivisor) -> MumfordDivisor:
    if n < 0:
        return scalar_mul(-n, -D)
    result = MumfordDivisor.identity(D.curve)
    base = D
    while n:
        if n & 1:
            result = cantor_add(result, base)
        n >>= 1
        if n:
            base = cantor_add(base, base)
    return result


def random_point(curve: Genus2Curve, rng):
    F = curve.F
    while True:
        x = F.random(rng)
        fx = curve.f(x)
        if fx.is_square():
            y = fx.sqrt()
            if rng.randrange(2):
                y = -y
            return x, y


def random_divisor(curve: Genus2Curve, seed=None) -> MumfordDivisor:
    """Sum of two random affine points (minus 2*infinity); deterministic in ``seed``."""
    if curve.degree != 5:
        raise UnsupportedModel("Cantor arithmetic needs a quintic model")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    P = MumfordDivisor.from_point(curve, *random_point(curve, rng))
    Q = MumfordDivisor.from_point(curve, *random_point(curve, rng))
    return P + Q


# -- Miller functions ---------------------------------------------------------

class _Collision(Exception):
    pass


def _step_value(curve, u1, v1, u2, v2, targets):
    """Compose and reduce, returning the new divisor and, for each target
    divisor (effective, affine), the value of the connecting function h with
    D1 + D2 = D3 + div(h)."""
    u, v, d = _compose(curve, u1, v1, u2, v2)
    trace = []
    u, v = _reduce(curve, u, v, trace)
    values = []
    for tu, tv in targets:
        num = norm_mod(tu, d)
        den = num.F.one
        for vk, uk in trace:
            num = num * norm_mod(tu, tv - vk)
            den = den * norm_mod(tu, uk)
        if num.is_zero() or den.is_zero():
            raise _Collision
        values.append((num, den))
    return u, v, values


def miller(D: MumfordDivisor, m: int, targets):
    """Values at ``targets`` of a function with divisor m*D - [m]D (affine parts)."""
    curve = D.curve
    F = curve.F
    acc = [(F.one, F.one) for _ in targets]
    u, v = D.u, D.v
    for bit in bin(m)[3:]:
        u, v, vals = _step_value(curve, u, v, u, v, targets)
        acc = [(a * a * hn, b * b * hd) for (a, b), (hn, hd) in zip(acc, vals)]
        if bit == "1":
            u, v, vals = _step_value(curve, u, v, D.u, D.v, targets)
            acc = [(a * hn, b * hd) for (a, b), (hn, hd) in zip(acc, vals)]
    return acc, (u, v)


def _eval_ratio(D, R, m, A2, R2):
    """F(A2) / F(R2) for F = f_{m,D} / f_{m,R}."""
    targets = [(A2.u, A2.v), (R2.u, R2.v)]
    fa, _ = miller(D, m, targets)
    fr, _ = miller(R, m, targets)
    (an, ad), (bn, bd) = fa
    (cn, cd), (dn, dd) = fr
    # [f_D(A2)/f_D(R2)] / [f_R(A2)/f_R(R2)]
    num = an * bd * cd * dn
    den = ad * bn * cn * dd
    if num.is_zero() or den.is_zero():
        raise _Collision
    return num, den


def weil_pairing(D1: MumfordDivisor, D2: MumfordDivisor, m: int, seed: int = 0) -> Fq:
    """The m-Weil pairing on the jacobian, via shifted affine representatives."""
    curve = D1.curve
    if D2.curve.f != curve.f:
        raise CurveMismatch("divisors live on different curves")
    if not scalar_mul(m, D1).is_identity() or not scalar_mul(m, D2).is_identity():
        raise NotTorsion(f"arguments are not {m}-torsion")
    F = curve.F
    if D1.is_identity() or D2.is_identity() or m == 1:
        return F.one
    rng = random.Random(seed)
    for _ in range(200):
        R1 = random_divisor(curve, rng)
        R2 = random_divisor(curve, rng)
        A1 = D1 + R1
        A2 = D2 + R2
        if any(X.u.degree() != 2 for X in (R1, R2, A1, A2)):
            continue
        try:
            n1, d1 = _eval_ratio(A1, R1, m, A2, R2)
            n2, d2 = _eval_ratio(A2, R2, m, A1, R1)
        except _Collision:
            continue
        return (n1 * d2) / (d1 * n2)
    raise RuntimeError("could not find generic representatives for the pairing")
