"""Short Weierstrass elliptic curves over F_{p^2}: group law, Weil pairing,
Velu isogenies and canonical models of superspecial curves."""

from __future__ import annotations

import random
from functools import lru_cache

from .errors import BadOrder, NotTorsion
from .field import Fq, QuadField
from .poly import Poly, poly_gcd, roots


class EllipticCurve:
    """y^2 = x^3 + a*x + b."""

    __slots__ = ("F", "a", "b")

    def __init__(self, a: Fq, b: Fq):
        F = a.F
        if (a**3 * 4 + b * b * 27).is_zero():
            raise ValueError("singular elliptic curve")
        self.F = F
        self.a = a
        self.b = b

    def __eq__(self, other):
        return isinstance(other, EllipticCurve) and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"E(a={self.a}, b={self.b})"

    def j_invariant(self) -> Fq:
        a3 = self.a**3 * 4
        return a3 * 1728 / (a3 + self.b * self.b * 27)

    def rhs(self, x: Fq) -> Fq:
        return (x * x + self.a) * x + self.b

    @property
    def O(self) -> "ECPoint":
        return ECPoint(self, None, None)

    def point(self, x, y) -> "ECPoint":
        x, y = self.F(x), self.F(y)
        if y * y != self.rhs(x):
            raise ValueError("point not on curve")
        return ECPoint(self, x, y)

    def random_point(self, rng) -> "ECPoint":
        F = self.F
        while True:
            x = F.random(rng)
            r = self.rhs(x)
            if r.is_square():
                y = r.sqrt()
                if rng.randrange(2):
                    y = -y
                return ECPoint(self, x, y)

    def to_bytes(self) -> bytes:
        return self.a.to_bytes() + self.b.to_bytes()

    @classmethod
    def from_bytes(cls, F: QuadField, data: bytes) -> "EllipticCurve":
        w = 2 * F.width
        if len(data) != 2 * w:
            raise ValueError("bad elliptic curve encoding")
        return cls(F.decode(data[:w]), F.decode(data[w:]))

    def two_torsion_x(self) -> list[Fq]:
        F = self.F
        return roots(Poly(F, [self.b, self.a, F.zero, F.one]))


class ECPoint:
    __slots__ = ("E", "x", "y")

    def __init__(self, E: EllipticCurve, x, y):
        self.E = E
        self.x = x
        self.y = y

    def is_zero(self) -> bool:
        return self.x is None

    is_identity = is_zero

    def __eq__(self, other):
        if not isinstance(other, ECPoint):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash(None) if self.is_zero() else hash((self.x, self.y))

    def __repr__(self):
        return "O" if self.is_zero() else f"({self.x}, {self.y})"

    def __neg__(self):
        if self.is_zero():
            return self
        return ECPoint(self.E, self.x, -self.y)

    def __add__(self, other: "ECPoint") -> "ECPoint":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.x == other.x:
            if (self.y + other.y).is_zero():
                return self.E.O
            lam = (self.x * self.x * 3 + self.E.a) / (self.y * 2)
        else:
            lam = (other.y - self.y) / (other.x - self.x)
        x3 = lam * lam - self.x - other.x
        return ECPoint(self.E, x3, lam * (self.x - x3) - self.y)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n: int) -> "ECPoint":
        if n < 0:
            return (-self) * (-n)
        out = self.E.O
        base = self
        while n:
            if n & 1:
                out = out + base
            n >>= 1
            if n:
                base = base + base
        return out

    __rmul__ = __mul__

    def to_bytes(self) -> bytes:
        F = self.E.F
        if self.is_zero():
            return b"\x00" + F.zero.to_bytes() * 2
        return b"\x01" + self.x.to_bytes() + self.y.to_bytes()

    @classmethod
    def from_bytes(cls, E: EllipticCurve, data: bytes) -> "ECPoint":
        F = E.F
        w = 2 * F.width
        if len(data) != 1 + 2 * w or data[0] not in (0, 1):
            raise ValueError("bad point encoding")
        if data[0] == 0:
            if any(data[1:]):
                raise ValueError("non-canonical point at infinity")
            return E.O
        return E.point(F.decode(data[1:1 + w]), F.decode(data[1 + w:]))


def point_order(P: ECPoint, candidates_of: int) -> int:
    """Exact order of P given that it divides ``candidates_of``."""
    from sympy import factorint

    n = candidates_of
    if not (P * n).is_zero():
        raise NotTorsion("point order does not divide the given bound")
    for r, k in factorint(n).items():
        for _ in range(k):
            if (P * (n // r)).is_zero():
                n //= r
            else:
                break
    return n


# -- Weil pairing ---------------------------------------------------------------

def _miller_ec(P: ECPoint, m: int, targets):
    F = P.E.F
    acc = [(F.one, F.one) for _ in targets]
    T = P

    def line(A, B, pts):
        # function with divisor A + B - (A+B) - O, evaluated on pts
        out = []
        if A.x == B.x and (A.y + B.y).is_zero():
            for X in pts:
                out.append((X.x - A.x, F.one))
            return out, A.E.O
        if A == B:
            lam = (A.x * A.x * 3 + A.E.a) / (A.y * 2)
        else:
            lam = (B.y - A.y) / (B.x - A.x)
        x3 = lam * lam - A.x - B.x
        C = ECPoint(A.E, x3, lam * (A.x - x3) - A.y)
        for X in pts:
            out.append((X.y - A.y - lam * (X.x - A.x), X.x - x3))
        return out, C

    for bit in bin(m)[3:]:
        vals, T = line(T, T, targets)
        acc = [(a * a * n, b * b * d) for (a, b), (n, d) in zip(acc, vals)]
        if bit == "1":
            vals, T = line(T, P, targets)
            acc = [(a * n, b * d) for (a, b), (n, d) in zip(acc, vals)]
    return acc


def ec_weil_pairing(P: ECPoint, Q: ECPoint, m: int, seed: int = 0) -> Fq:
    E = P.E
    F = E.F
    if not (P * m).is_zero() or not (Q * m).is_zero():
        raise NotTorsion(f"arguments are not {m}-torsion")
    if P.is_zero() or Q.is_zero() or P == Q or m == 1:
        return F.one
    d = point_order(P, m)
    if d < m:
        # compatibility: e_m(P, Q) = e_d(P, [m/d]Q) for P of order d
        return ec_weil_pairing(P, Q * (m // d), d, seed)
    d = point_order(Q, m)
    if d < m:
        return ec_weil_pairing(Q, P * (m // d), d, seed).inverse()
    rng = random.Random(seed)
    for _ in range(200):
        S = E.random_point(rng)
        QS, mS, PmS = Q + S, -S, P - S
        if any(X.is_zero() for X in (QS, PmS)):
            continue
        try:
            (a, b), (c, d) = _miller_ec(P, m, [QS, S])
            (e, f), (g, h) = _miller_ec(Q, m, [PmS, mS])
            num = a * d * f * g
            den = b * c * e * h
            if num.is_zero() or den.is_zero():
                continue
            return num / den
        except ZeroDivisionError:
            continue
    raise RuntimeError("could not evaluate the Weil pairing")


# -- Velu isogenies ------------------------------------------------------------

class VeluIsogeny:
    """Separable isogeny with cyclic kernel <K> of prime order l."""

    def __init__(self, K: ECPoint, l: int):
        E = K.E
        if K.is_zero() or not (K * l).is_zero():
            raise BadOrder(f"kernel generator does not have order {l}")
        self.domain = E
        self.l = l
        self.kernel = K
        pts = []
        T = K
        seen = set()
        for _ in range(l - 1):
            if T.x.key() not in seen:
                seen.add(T.x.key())
                pts.append(T)
            T = T + K
        data = []
        v_tot = E.F.zero
        w_tot = E.F.zero
        for Q in pts:
            gx = Q.x * Q.x * 3 + E.a
            if Q.y.is_zero():
                vq, uq = gx, E.F.zero
            else:
                vq, uq = gx * 2, Q.y * Q.y * 4
            data.append((Q.x, vq, uq))
            v_tot = v_tot + vq
            w_tot = w_tot + uq + Q.x * vq
        self._data = data
        self.codomain = EllipticCurve(E.a - v_tot * 5, E.b - w_tot * 7)

    def __call__(self, P: ECPoint) -> ECPoint:
        if P.is_zero():
            return self.codomain.O
        X, Y = P.x, P.y
        for xq, vq, uq in self._data:
            if P.x == xq:
                return self.codomain.O
            t = (P.x - xq).inverse()
            t2 = t * t
            X = X + vq * t + uq * t2
            Y = Y - (uq * 2 * t2 * t + vq * t2) * P.y
        return ECPoint(self.codomain, X, Y)


# -- superspecial models -----------------------------------------------------

def has_full_torsion(E: EllipticCurve, n: int, trials: int = 4) -> bool:
    """Heuristic check that E(F_{p^2}) = E[n] for n = p +- 1."""
    rng = random.Random(0)
    for _ in range(trials):
        P = E.random_point(rng)
        if not (P * n).is_zero():
            return False
    return True


@lru_cache(maxsize=8192)
def isomorphism_scalar(E: EllipticCurve, E2: EllipticCurve) -> Fq | None:
    """Smallest u with (x, y) -> (u^2 x, u^3 y) mapping E onto E2, or None."""
    F = E.F
    polys = []
    if E.a.is_zero() != E2.a.is_zero() or E.b.is_zero() != E2.b.is_zero():
        return None
    if not E.a.is_zero():
        polys.append(Poly(F, [-(E2.a / E.a)] + [F.zero] * 3 + [F.one]))
    if not E.b.is_zero():
        polys.append(Poly(F, [-(E2.b / E.b)] + [F.zero] * 5 + [F.one]))
    g = polys[0]
    for h in polys[1:]:
        g = poly_gcd(g, h)
    rs = roots(g)
    return rs[0] if rs else None


def apply_isomorphism(P: ECPoint, E2: EllipticCurve, u: Fq) -> ECPoint:
    if P.is_zero():
        return E2.O
    u2 = u * u
    return ECPoint(E2, P.x * u2, P.y * u2 * u)


@lru_cache(maxsize=4096)
def _canonical_model_cached(p: int, ja: int, jb: int, n: int) -> EllipticCurve:
    F = QuadField.of(p)
    j = Fq(F, ja, jb)
    z = F.primitive_element
    if j.is_zero():
        cands = [(F.zero, z**i) for i in range(6)]
    elif j == 1728:
        cands = [(z**i, F.zero) for i in range(4)]
    else:
        k = j / (F(1728) - j)
        cands = [(k * 3 * c * c, k * 2 * c * c * c) for c in (F.one, z)]
    for a, b in cands:
        E = EllipticCurve(a, b)
        if has_full_torsion(E, n):
            return E
    raise ValueError("no model of this j-invariant has full rational n-torsion")


def canonical_model(j: Fq, n: int) -> EllipticCurve:
    """Deterministic model of j-invariant ``j`` with E(F_{p^2}) = E[n]."""
    return _canonical_model_cached(j.F.p, j.a, j.b, n)
