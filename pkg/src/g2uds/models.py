"""Changes of model between genus-2 curves and transport of Mumford pairs.

A model change sends (x, y) to (X, Y) with

    X = (al*x + be) / (ga*x + de),   Y = s * y / (ga*x + de)^3,

and is used to move Weierstrass points to or from infinity.
"""

from __future__ import annotations

from itertools import permutations

from .field import Fq
from .invariants import Genus2Curve, moebius_transform
from .poly import Poly, roots


class Degenerate(Exception):
    """A divisor is not in general position for an explicit formula."""


class ModelChange:
    def __init__(self, source: Genus2Curve, al, be, ga, de, s=None, target: Genus2Curve | None = None):
        F = source.F
        self.source = source
        self.al, self.be, self.ga, self.de = (F(t) for t in (al, be, ga, de))
        self.s = F.one if s is None else F(s)
        self.det = self.al * self.de - self.be * self.ga
        if self.det.is_zero():
            raise ValueError("singular model change")
        if target is None:
            g = moebius_transform(source.f, self.de, -self.be, -self.ga, self.al)
            g = g * (self.s * self.s / self.det**6)
            target = Genus2Curve(g)
        self.target = target

    @classmethod
    def moving_to_infinity(cls, curve: Genus2Curve, r: Fq) -> "ModelChange":
        """X = 1/(x - r): sends x = r to infinity (and infinity to 0)."""
        F = curve.F
        return cls(curve, F.zero, F.one, F.one, -r)

    def point(self, x: Fq, y: Fq):
        den = self.ga * x + self.de
        if den.is_zero():
            raise Degenerate("point maps to infinity")
        inv = den.inverse()
        return (self.al * x + self.be) * inv, self.s * y * inv**3

    def root(self, x):
        """Image of a branch point given projectively (None for infinity)."""
        if x is None:
            if self.ga.is_zero():
                return None
            return self.al / self.ga
        den = self.ga * x + self.de
        if den.is_zero():
            return None
        return (self.al * x + self.be) / den

    def pair(self, u: Poly, v: Poly):
        """Transport a Mumford pair with deg u = 2 whose points stay affine."""
        F = u.F
        if u.degree() != 2:
            raise Degenerate("expected a degree-2 pair")
        U = moebius_transform(u, self.de, -self.be, -self.ga, self.al, degree=2)
        if U.degree() != 2:
            raise Degenerate("a point of the divisor maps to infinity")
        U = U.monic()
        # y' = s/det^3 * (v0*(-ga X + al) + v1*(de X - be)) * (-ga X + al)^2
        lin = Poly(F, [self.al, -self.ga])
        vv = lin * v[0] + Poly(F, [-self.be, self.de]) * v[1]
        V = (vv * lin * lin * (self.s / self.det**3)) % U
        return U, V

    def inverse(self) -> "ModelChange":
        # inverse Moebius: x = (de X - be)/(-ga X + al); y = (det^3/s) Y / (-ga X + al)^3
        return ModelChange(self.target, self.de, -self.be, -self.ga, self.al,
                           s=self.det**3 / self.s, target=self.source)


def branch_points(curve: Genus2Curve):
    """Rational Weierstrass x-coordinates; None stands for infinity on quintics."""
    rs = roots(curve.f)
    if curve.degree == 5:
        rs = rs + [None]
    return rs


def _to_zero_inf_one(pts, F):
    (x1, z1), (x2, z2), (x3, z3) = pts
    alpha = z2 * x3 - x2 * z3
    beta = z1 * x3 - x1 * z3
    return ((alpha * z1, -alpha * x1), (beta * z2, -beta * x2))


def _proj(x, F):
    return (F.one, F.zero) if x is None else (x, F.one)


def find_isomorphisms(C1: Genus2Curve, C2: Genus2Curve) -> list[ModelChange]:
    """All F_{p^2}-isomorphisms C1 -> C2, assuming both have 6 rational branch points."""
    F = C1.F
    w1 = branch_points(C1)
    w2 = branch_points(C2)
    if len(w1) != 6 or len(w2) != 6:
        return []
    target_keys = {_key(t) for t in w2}
    src = [_proj(t, F) for t in w1[:3]]
    (a, b), (c, d) = _to_zero_inf_one(src, F)
    found = []
    for t1, t2, t3 in permutations(w2, 3):
        (e, f_), (g, h) = _to_zero_inf_one([_proj(t, F) for t in (t1, t2, t3)], F)
        # M = N^-1 * Msrc, with N^-1 = [[h, -f], [-g, e]] / det
        al = h * a - f_ * c
        be = h * b - f_ * d
        ga = -g * a + e * c
        de = -g * b + e * d
        if (al * de - be * ga).is_zero():
            continue
        ok = True
        for w in w1:
            X, Z = _proj(w, F)
            nx, nz = al * X + be * Z, ga * X + de * Z
            img = None if nz.is_zero() else nx / nz
            if _key(img) not in target_keys:
                ok = False
                break
        if not ok:
            continue
        det = al * de - be * ga
        g_poly = moebius_transform(C1.f, de, -be, -ga, al) * det.inverse() ** 6
        # need s^2 * g_poly == C2.f
        i = C2.f.degree()
        if g_poly.degree() != i:
            continue
        ratio = C2.f.lc() / g_poly.lc()
        if g_poly * ratio != C2.f or not ratio.is_square():
            continue
        s = ratio.sqrt()
        for sign in (s, -s):
            found.append(ModelChange(C1, al, be, ga, de, s=sign, target=C2))
    return found


def _key(x):
    return ("inf",) if x is None else x.key()
