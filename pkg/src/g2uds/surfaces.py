"""Principally polarized surfaces: jacobians of genus-2 curves and products
of elliptic curves, with points, fingerprints and encodings."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .elliptic import ECPoint, EllipticCurve, ec_weil_pairing
from .errors import CurveMismatch, PointNotOnDomain
from .field import QuadField
from .invariants import Fingerprint, Genus2Curve, fingerprint
from .jacobian import MumfordDivisor, random_divisor, scalar_mul, weil_pairing

TAG_JACOBIAN = 1
TAG_PRODUCT = 2


class ProductPoint:
    """A point (P1, P2) of E1 x E2."""

    __slots__ = ("P1", "P2")

    def __init__(self, P1: ECPoint, P2: ECPoint):
        self.P1 = P1
        self.P2 = P2

    def is_identity(self) -> bool:
        return self.P1.is_zero() and self.P2.is_zero()

    def __eq__(self, other):
        if not isinstance(other, ProductPoint):
            return NotImplemented
        return self.P1 == other.P1 and self.P2 == other.P2 and self.P1.E == other.P1.E and self.P2.E == other.P2.E

    def __hash__(self):
        return hash((self.P1, self.P2))

    def __repr__(self):
        return f"({self.P1!r} | {self.P2!r})"

    def _check(self, other):
        if self.P1.E != other.P1.E or self.P2.E != other.P2.E:
            raise CurveMismatch("points live on different products")

    def __add__(self, other):
        self._check(other)
        return ProductPoint(self.P1 + other.P1, self.P2 + other.P2)

    def __sub__(self, other):
        self._check(other)
        return ProductPoint(self.P1 - other.P1, self.P2 - other.P2)

    def __neg__(self):
        return ProductPoint(-self.P1, -self.P2)

    def __mul__(self, n: int):
        return ProductPoint(self.P1 * n, self.P2 * n)

    __rmul__ = __mul__

    def to_bytes(self) -> bytes:
        return self.P1.to_bytes() + self.P2.to_bytes()


class Surface:
    """Common interface of the two surface variants."""

    F: QuadField

    def identity(self):
        raise NotImplementedError

    def contains(self, P) -> bool:
        raise NotImplementedError

    def random_point(self, rng):
        raise NotImplementedError

    def fingerprint(self) -> Fingerprint:
        raise NotImplementedError

    def to_bytes(self) -> bytes:
        raise NotImplementedError

    def pairing(self, P, Q, m: int, seed: int = 0):
        raise NotImplementedError

    def require(self, P):
        if not self.contains(P):
            raise PointNotOnDomain("point does not lie on this surface")
        return P


@dataclass(frozen=True, eq=False)
class JacobianSurface(Surface):
    curve: Genus2Curve

    @property
    def F(self):
        return self.curve.F

    def __eq__(self, other):
        return isinstance(other, JacobianSurface) and self.curve == other.curve

    def __hash__(self):
        return hash(("jac", self.curve))

    def identity(self):
        return MumfordDivisor.identity(self.curve)

    def contains(self, P) -> bool:
        if not isinstance(P, MumfordDivisor) or P.curve.f != self.curve.f:
            return False
        u, v = P.u, P.v
        if u.is_zero() or not u.lc().is_one() or u.degree() > 2:
            return False
        if not v.is_zero() and v.degree() >= u.degree():
            return False
        return ((self.curve.f - v * v) % u).is_zero()

    def random_point(self, rng):
        return random_divisor(self.curve, rng)

    def fingerprint(self) -> Fingerprint:
        return fingerprint(self.curve)

    def to_bytes(self) -> bytes:
        return bytes([TAG_JACOBIAN]) + self.curve.to_bytes()

    def pairing(self, P, Q, m: int, seed: int = 0):
        return weil_pairing(P, Q, m, seed=seed)

    def point_to_bytes(self, P: MumfordDivisor) -> bytes:
        return P.to_bytes()

    def point_from_bytes(self, data: bytes) -> MumfordDivisor:
        return MumfordDivisor.from_bytes(self.curve, data)

    def __repr__(self):
        return f"Jac({self.curve.f})"


@dataclass(frozen=True, eq=False)
class ProductSurface(Surface):
    E1: EllipticCurve
    E2: EllipticCurve

    @property
    def F(self):
        return self.E1.F

    def __eq__(self, other):
        return isinstance(other, ProductSurface) and self.E1 == other.E1 and self.E2 == other.E2

    def __hash__(self):
        return hash(("prod", self.E1, self.E2))

    def identity(self):
        return ProductPoint(self.E1.O, self.E2.O)

    def point(self, P1: ECPoint, P2: ECPoint) -> ProductPoint:
        return self.require(ProductPoint(P1, P2))

    def contains(self, P) -> bool:
        if not isinstance(P, ProductPoint):
            return False
        for Q, E in ((P.P1, self.E1), (P.P2, self.E2)):
            if Q.E != E:
                return False
            if not Q.is_zero() and Q.y * Q.y != E.rhs(Q.x):
                return False
        return True

    def random_point(self, rng):
        return ProductPoint(self.E1.random_point(rng), self.E2.random_point(rng))

    def fingerprint(self) -> Fingerprint:
        js = sorted((self.E1.j_invariant(), self.E2.j_invariant()), key=lambda j: j.key())
        return Fingerprint("prod", tuple(js))

    def to_bytes(self) -> bytes:
        return bytes([TAG_PRODUCT]) + self.E1.to_bytes() + self.E2.to_bytes()

    def pairing(self, P: ProductPoint, Q: ProductPoint, m: int, seed: int = 0):
        # the product polarization pairs factors independently
        return ec_weil_pairing(P.P1, Q.P1, m, seed) * ec_weil_pairing(P.P2, Q.P2, m, seed)

    def point_to_bytes(self, P: ProductPoint) -> bytes:
        return P.to_bytes()

    def point_from_bytes(self, data: bytes) -> ProductPoint:
        half = len(data) // 2
        if len(data) != 2 * (1 + 4 * self.F.width):
            raise ValueError("bad product point encoding")
        return ProductPoint(ECPoint.from_bytes(self.E1, data[:half]),
                            ECPoint.from_bytes(self.E2, data[half:]))

    def __repr__(self):
        return f"{self.E1!r} x {self.E2!r}"


def surface_fingerprint(A: Surface) -> Fingerprint:
    return A.fingerprint()


def surface_from_bytes(F: QuadField, data: bytes) -> Surface:
    if not data:
        raise ValueError("empty surface encoding")
    tag, body = data[0], data[1:]
    if tag == TAG_JACOBIAN:
        return JacobianSurface(Genus2Curve.from_bytes(F, body))
    if tag == TAG_PRODUCT:
        half = len(body) // 2
        if len(body) != 4 * 2 * F.width:
            raise ValueError("bad product surface encoding")
        return ProductSurface(EllipticCurve.from_bytes(F, body[:half]),
                              EllipticCurve.from_bytes(F, body[half:]))
    raise ValueError(f"unknown surface tag {tag}")


def point_order(P, bound: int) -> int:
    """Exact order of a surface point whose order divides ``bound``."""
    from sympy import factorint

    from .errors import NotTorsion

    def mul(k):
        return scalar_mul(k, P) if isinstance(P, MumfordDivisor) else P * k

    if not mul(bound).is_identity():
        raise NotTorsion("point order does not divide the given bound")
    n = bound
    for r, k in factorint(bound).items():
        for _ in range(k):
            if mul(n // r).is_identity():
                n //= r
            else:
                break
    return n


def has_full_torsion(A: Surface, n: int, trials: int = 4, seed: int = 0) -> bool:
    """Heuristic check that every sampled point is killed by n."""
    rng = random.Random(seed)
    for _ in range(trials):
        P = A.random_point(rng)
        Q = scalar_mul(n, P) if isinstance(P, MumfordDivisor) else P * n
        if not Q.is_identity():
            return False
    return True
