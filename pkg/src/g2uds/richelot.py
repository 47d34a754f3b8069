"""Richelot (2,2)-isogenies out of genus-2 jacobians.

Kernels are quadratic splittings of the sextic branch form.  The jacobians
handled here are given on quintic models (one Weierstrass point at
infinity); the explicit correspondence is evaluated on a sextic model
obtained by a change of coordinates, and the image is moved back to a
quintic model of the codomain whenever that codomain has a rational
Weierstrass point.  A vanishing determinant delta gives a product of
elliptic curves instead.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

from .elliptic import ECPoint, EllipticCurve
from .errors import (NotIsotropic, NotOrder4, PointNotOnDomain,
                     UnsupportedModel)
from .field import Fq
from .invariants import Genus2Curve, moebius_transform
from .jacobian import MumfordDivisor
from .models import Degenerate, ModelChange
from .poly import Poly, poly_invmod, roots
from .surfaces import JacobianSurface, ProductPoint, ProductSurface, Surface


@dataclass(frozen=True)
class QuadraticSplitting:
    """f = lead * G1 * G2 * G3 with each G monic of degree <= 2.

    On a quintic model exactly one G is linear: its missing root is the
    Weierstrass point at infinity.
    """

    G: tuple
    lead: Fq

    def product(self) -> Poly:
        G1, G2, G3 = self.G
        return G1 * G2 * G3 * self.lead

    def pairs(self):
        """The three pairs of branch points, with None standing for infinity."""
        out = []
        for g in self.G:
            rs = roots(g)
            out.append(tuple(rs) if g.degree() == 2 else (rs[0], None))
        return out

    def key(self):
        return tuple(sorted(g.key() for g in self.G))


def _two_torsion_poly(D: MumfordDivisor) -> Poly:
    if not D.v.is_zero() or D.u.degree() == 0:
        raise NotOrder4("kernel elements must be nonzero 2-torsion points")
    if not (D.curve.f % D.u).is_zero():
        raise NotOrder4("kernel elements must be nonzero 2-torsion points")
    return D.u


def splitting_from_kernel(H: Genus2Curve, K) -> QuadraticSplitting:
    """Splitting attached to a (2,2)-kernel given by two or three of its
    nonzero elements (Mumford divisors on a quintic model)."""
    if H.degree != 5:
        raise UnsupportedModel("kernels are read on quintic models")
    K = [D for D in K if not D.is_identity()]
    if len(K) < 2:
        raise NotOrder4("a (2,2)-kernel needs two independent generators")
    for D in K:
        if D.curve.f != H.f:
            raise PointNotOnDomain("kernel element lives on another curve")
        _two_torsion_poly(D)
    a, b = K[0], K[1]
    if a == b:
        raise NotOrder4("generators are dependent")
    c = a + b
    group = {a, b, c}
    for D in K[2:]:
        if D not in group:
            raise NotOrder4("elements generate more than four points")
    G = [_two_torsion_poly(D) for D in (a, b, c)]
    # isotropy: the three classes must come from disjoint pairs of branch points
    seen = set()
    for g in G:
        pts = [r.key() for r in roots(g)] + ([("inf",)] if g.degree() == 1 else [])
        if len(pts) != 2 or seen.intersection(pts):
            raise NotIsotropic("kernel is not isotropic for the 2-Weil pairing")
        seen.update(pts)
    G.sort(key=lambda g: (g.degree(), g.key()))
    return QuadraticSplitting(tuple(G), H.f.lc())


def kernel_of_splitting(H: Genus2Curve, S: QuadraticSplitting) -> list[MumfordDivisor]:
    F = H.F
    return [MumfordDivisor(H, g, Poly(F, [])) for g in S.G]


def all_splittings(H: Genus2Curve) -> list[QuadraticSplitting]:
    """The fifteen splittings of a quintic model with rational branch points."""
    if H.degree != 5:
        raise UnsupportedModel("kernels are read on quintic models")
    F = H.F
    pts = roots(H.f) + [None]
    if len(pts) != 6:
        raise UnsupportedModel("not all branch points are rational")
    out = []

    def poly_of(pair):
        return Poly.from_roots(F, [t for t in pair if t is not None])

    def partitions(items):
        if not items:
            yield []
            return
        first = items[0]
        for i in range(1, len(items)):
            rest = items[1:i] + items[i + 1:]
            for part in partitions(rest):
                yield [(first, items[i])] + part

    for part in partitions(pts):
        G = sorted((poly_of(pr) for pr in part), key=lambda g: (g.degree(), g.key()))
        out.append(QuadraticSplitting(tuple(G), H.f.lc()))
    return out


# -- isogeny steps ------------------------------------------------------------

class IsogenyStep:
    """A (l,l)-isogeny with explicit evaluation."""

    domain: Surface
    codomain: Surface
    degree_prime: int

    def _direct(self, P):
        raise NotImplementedError

    def evaluate(self, P):
        self.domain.require(P)
        if P.is_identity():
            return self.codomain.identity()
        try:
            return self._direct(P)
        except (Degenerate, ZeroDivisionError, ArithmeticError):
            pass
        # translate into general position and subtract the translation again
        digest = hashlib.sha256(self.domain.point_to_bytes(P)).digest()
        rng = random.Random(digest)
        for _ in range(64):
            R = self.domain.random_point(rng)
            try:
                return self._direct(P + R) - self._direct(R)
            except (Degenerate, ZeroDivisionError, ArithmeticError):
                continue
        raise Degenerate("could not move the point into general position")

    __call__ = evaluate


def step_evaluate(step: IsogenyStep, P):
    return step.evaluate(P)


def _det3(rows):
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def splitting_is_degenerate(S: QuadraticSplitting) -> bool:
    """True when G1, G2, G3 are linearly dependent (delta = 0)."""
    return _det3([g.padded(3) for g in S.G]).is_zero()


def _bracket(A: Poly, B: Poly) -> Poly:
    return A.derivative() * B - A * B.derivative()


def _to_sextic(H: Genus2Curve, S: QuadraticSplitting, x0: Fq):
    """Move x = x0 to infinity; returns the model change and the transformed G's."""
    T = ModelChange.moving_to_infinity(H, x0)
    inv = T.inverse()
    G = []
    for g in S.G:
        # binary quadratic form of g, moved by the same substitution
        t = moebius_transform(g, inv.al, inv.be, inv.ga, inv.de, degree=2)
        G.append(t.monic())
    lam = T.target.f.lc()
    G[2] = G[2] * lam
    if G[0] * G[1] * G[2] != T.target.f:
        raise ArithmeticError("splitting does not factor the branch form")
    return T, G


def _correspondence(G1, G2, H1, H2, hnew, U, V):
    """Image of the Mumford pair (U, V) under the Richelot correspondence
    y1*y2 = G1(x1) H1(x2) (x1 - x2), G1(x1) H1(x2) + G2(x1) H2(x2) = 0."""
    F = U.F
    s, p = -U[1], U[0]
    g1 = G1 - U
    g2 = G2 - U
    g11, g10 = g1[1], g1[0]
    g21, g20 = g2[1], g2[0]
    H11, H12, H22 = H1 * H1, H1 * H2, H2 * H2
    Px = (H11 * (g11 * g11 * p + g11 * g10 * s + g10 * g10)
          + H12 * (g11 * g21 * p * 2 + (g11 * g20 + g21 * g10) * s + g10 * g20 * 2)
          + H22 * (g21 * g21 * p + g21 * g20 * s + g20 * g20))
    if Px.degree() != 4:
        raise Degenerate("image meets the points at infinity")
    v1, v0 = V[1], V[0]
    Py2 = v1 * v1 * p + v1 * v0 * s + v0 * v0
    Py1 = (Poly(F, [F.zero, (v1 * g11 * p + v0 * g10) * 2 + v1 * g10 * s + v0 * g11 * s])
           - (v1 * g11 * s * p + v1 * g10 * p * 2 + v0 * g11 * (s * s - p * 2) + v0 * g10 * s))
    Py1 = Py1 * H1
    Py0 = H11 * U * (g11 * g11 * p + g11 * g10 * s + g10 * g10)
    inv = poly_invmod(Py1, Px)
    Py = (-(inv * (hnew * Py2 + Py0))) % Px
    Dx = (hnew - Py * Py).exact_div(Px)
    if Dx.degree() != 2:
        raise Degenerate("image is not in general position")
    Dx = Dx.monic()
    Dy = (-Py) % Dx
    return Dx, Dy


class RichelotStep(IsogenyStep):
    """Richelot isogeny J(H) -> J(H') or J(H) -> E1 x E2."""

    degree_prime = 2

    def __init__(self, H: Genus2Curve, S: QuadraticSplitting):
        if H.degree != 5:
            raise UnsupportedModel("Richelot steps start from quintic models")
        if S.product() != H.f:
            raise ValueError("splitting does not match the curve")
        self.domain = JacobianSurface(H)
        self.splitting = S
        F = H.F
        # the delta test does not depend on the model; read it on the quintic
        rows = [g.padded(3) for g in S.G]
        self.delta = _det3(rows)
        self.split = self.delta.is_zero()
        self.codomain_sextic = None
        last = None
        for k in range(F.p):
            x0 = F(k)
            if H.f(x0).is_zero():
                continue
            try:
                if self.split:
                    self._setup_product(H, S, x0)
                else:
                    self._setup_jacobian(H, S, x0)
                break
            except (Degenerate, ZeroDivisionError) as exc:
                last = exc
                continue
        else:
            raise Degenerate(f"no usable model for this step: {last}")

    # -- jacobian codomain -------------------------------------------------

    def _setup_jacobian(self, H, S, x0):
        T, G = _to_sextic(H, S, x0)
        G1, G2, G3 = G
        delta = _det3([g.padded(3) for g in G])
        B1, B2, B3 = _bracket(G2, G3), _bracket(G3, G1), _bracket(G1, G2)
        dinv = delta.inverse()
        # correspondence normalisation: H_i = [G_j, G_k] / delta
        self._corr = (G1, G2, B1 * dinv, B2 * dinv, B1 * B2 * B3 * dinv**3)
        # codomain as y^2 = delta^-1 [G2,G3][G3,G1][G1,G2]; y scales by delta
        sextic = B1 * B2 * B3 * dinv
        self.codomain_sextic = Genus2Curve(sextic)
        self._yscale = delta
        self._to_sextic = T
        rs = roots(sextic)
        if not rs:
            self.codomain = None
            self._back = None
            raise_later = UnsupportedModel("codomain has no rational Weierstrass point")
            self._unsupported = raise_later
            return
        self._unsupported = None
        r = rs[0]
        back = ModelChange.moving_to_infinity(self.codomain_sextic, r)
        self._back = back
        self.codomain = JacobianSurface(back.target)
        self.dual_splitting = self._dual_splitting([B1, B2, B3], back)

    def _dual_splitting(self, B, back):
        F = back.target.F
        G = []
        for b in B:
            pts = [back.root(t) for t in roots(b)]
            G.append(Poly.from_roots(F, [t for t in pts if t is not None]))
        G.sort(key=lambda g: (g.degree(), g.key()))
        return QuadraticSplitting(tuple(G), back.target.f.lc())

    # -- product codomain --------------------------------------------------

    def _setup_product(self, H, S, x0):
        T, G = _to_sextic(H, S, x0)
        F = H.F
        rows = [g.padded(3) for g in G]
        # right kernel of the singular coefficient matrix
        u = v = w = None
        for i, j in ((0, 1), (0, 2), (1, 2)):
            a, b = rows[i], rows[j]
            cand = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
            if any(not c.is_zero() for c in cand):
                u, v, w = cand
                break
        if u is None or u.is_zero():
            raise Degenerate("homography needs another base point")
        d = u / 2
        rs = roots(Poly(F, [w * d / 2, -v, F.one]))
        if len(rs) != 2:
            raise Degenerate("homography not rational at this base point")
        ad, b = rs
        a = ad / d
        if (a * d - b).is_zero():
            raise Degenerate("degenerate homography")
        Hs = []
        for g in G:
            c0, c1, c2 = g.padded(3)
            h1 = c0 + c1 * a + c2 * a * a
            h0 = c0 * d * d + c1 * b * d + c2 * b * b
            if h1.is_zero() or h0.is_zero():
                raise Degenerate("factor degenerates under the homography")
            Hs.append((h1, h0))
        (H11, H10), (H21, H20), (H31, H30) = Hs
        X = Poly.x(F)
        p1 = (X * H11 + H10) * (X * H21 + H20) * (X * H31 + H30)
        p2 = (X * H10 + H11) * (X * H20 + H21) * (X * H30 + H31)
        p1n = (X + H10 * H21 * H31) * (X + H20 * H11 * H31) * (X + H30 * H11 * H21)
        p2n = (X + H11 * H20 * H30) * (X + H21 * H10 * H30) * (X + H31 * H10 * H20)
        E1, sh1 = _short_weierstrass(p1n)
        E2, sh2 = _short_weierstrass(p2n)
        self._prod = dict(a=a, b=b, d=d, p1=p1, p2=p2, m1=H11 * H21 * H31, m2=H10 * H20 * H30,
                          sh1=sh1, sh2=sh2)
        self._to_sextic = T
        self.codomain = ProductSurface(E1, E2)

    def _direct_product(self, U, V):
        F = U.F
        q = self._prod
        a, b, d = q["a"], q["b"], q["d"]
        X = Poly.x(F)
        xd = X + d
        axb = X * a + b
        U_ = xd * xd * U[0] + axb * xd * U[1] + axb * axb * U[2]
        if U_.degree() != 2:
            raise Degenerate("homography sends a point to infinity")
        V_ = (xd * xd * xd * V[0] + axb * xd * xd * V[1]) % U_
        v1, v0 = V_[1], V_[0]
        s = -U_[1] / U_[2]
        p = U_[0] / U_[2]
        if p.is_zero() or v0.is_zero():
            raise Degenerate("special position for the split map")
        p1, p2 = q["p1"], q["p2"]
        U1 = Poly(F, [p * p, -(s * s - p * 2), F.one])
        V1 = ((p1 - X * (v1 * v1) + v0 * v0) * (v0 * 2).inverse()) % U1
        U1red = (p1 - V1 * V1).exact_div(U1)
        if U1red.degree() != 1:
            raise Degenerate("split image meets infinity")
        xP1 = -U1red[0] / U1red[1]
        yP1 = V1(xP1)
        pinv = p.inverse()
        U2 = Poly(F, [pinv * pinv, -(s * s - p * 2) * pinv * pinv, F.one])
        V21 = X * X * (v1 * (s * s - p * 2) + v0 * s)
        V20 = p2 + (X**4) * (p * (v1 * v1 * p + v1 * v0 * s + v0 * v0))
        V2 = (poly_invmod(V21, U2) * V20) % U2
        U2red = (p2 - V2 * V2).exact_div(U2)
        if U2red.degree() != 1:
            raise Degenerate("split image meets infinity")
        xP2 = -U2red[0] / U2red[1]
        yP2 = V2(xP2)
        E1, E2 = self.codomain.E1, self.codomain.E2
        m1, m2 = q["m1"], q["m2"]
        P1 = ECPoint(E1, m1 * xP1 + q["sh1"], m1 * yP1)
        P2 = ECPoint(E2, m2 * xP2 + q["sh2"], m2 * yP2)
        return ProductPoint(P1, P2)

    # -- evaluation --------------------------------------------------------

    def _direct(self, D: MumfordDivisor):
        if self.codomain is None:
            raise self._unsupported
        if D.u.degree() != 2:
            raise Degenerate("degree-one divisor")
        U, V = self._to_sextic.pair(D.u, D.v)
        if self.split:
            return self._direct_product(U, V)
        G1, G2, H1, H2, hnew = self._corr
        Dx, Dy = _correspondence(G1, G2, H1, H2, hnew, U, V)
        Dy = Dy * self._yscale
        U2, V2 = self._back.pair(Dx, Dy)
        return MumfordDivisor(self.codomain.curve, U2, V2)

    def evaluate(self, P):
        if self.codomain is None:
            raise self._unsupported
        return super().evaluate(P)

    __call__ = evaluate


def _short_weierstrass(c: Poly):
    """y^2 = x^3 + c2 x^2 + c1 x + c0  ->  y^2 = X^3 + A X + B with X = x + c2/3."""
    F = c.F
    shift = c[2] / 3
    g = c.compose(Poly(F, [-shift, F.one]))
    return EllipticCurve(g[1], g[0]), shift


def richelot_step(H: Genus2Curve, S: QuadraticSplitting) -> RichelotStep:
    return RichelotStep(H, S)


def dual_step(step: RichelotStep) -> RichelotStep:
    if step.split or step.codomain is None:
        raise UnsupportedModel("dual step needs a quintic jacobian codomain")
    return RichelotStep(step.codomain.curve, step.dual_splitting)


def splitting_pairs_disjoint(S: QuadraticSplitting) -> bool:
    keys = []
    for pr in S.pairs():
        keys.extend(("inf",) if t is None else t.key() for t in pr)
    return len(set(keys)) == 6


__all__ = [
    "QuadraticSplitting", "splitting_from_kernel", "kernel_of_splitting", "all_splittings",
    "IsogenyStep", "RichelotStep", "richelot_step", "step_evaluate", "dual_step",
    "splitting_pairs_disjoint", "splitting_is_degenerate",
]
