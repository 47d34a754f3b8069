"""Genus-2 curves, Igusa invariants and isomorphism fingerprints."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

from .errors import DegenerateImage, SingularCurve
from .field import Fq, QuadField
from .poly import Poly, is_squarefree


class Genus2Curve:
    """The curve y^2 = f(x) with deg f in {5, 6} and f squarefree."""

    __slots__ = ("f", "F")

    def __init__(self, f: Poly):
        if f.degree() not in (5, 6):
            raise SingularCurve(f"degree {f.degree()} does not define a genus-2 curve")
        if f.F.p <= 5:
            raise SingularCurve("characteristic must exceed 5")
        if not is_squarefree(f):
            raise SingularCurve("f has a repeated root")
        self.f = f
        self.F = f.F

    @classmethod
    def from_coeffs(cls, F: QuadField, coeffs) -> "Genus2Curve":
        return cls(Poly(F, coeffs))

    @property
    def degree(self) -> int:
        return self.f.degree()

    @property
    def coeffs(self) -> list[Fq]:
        return self.f.padded(7)

    def __eq__(self, other):
        return isinstance(other, Genus2Curve) and self.f == other.f

    def __hash__(self):
        return hash(self.f)

    def __repr__(self):
        return f"Genus2Curve(y^2 = {self.f})"

    def to_bytes(self) -> bytes:
        return bytes([self.degree]) + b"".join(a.to_bytes() for a in self.coeffs)

    @classmethod
    def from_bytes(cls, F: QuadField, data: bytes) -> "Genus2Curve":
        w = 2 * F.width
        if len(data) != 1 + 7 * w:
            raise ValueError("bad curve encoding length")
        coeffs = [F.decode(data[1 + i * w:1 + (i + 1) * w]) for i in range(7)]
        curve = cls(Poly(F, coeffs))
        if curve.degree != data[0]:
            raise ValueError("degree byte does not match coefficients")
        return curve


# -- binary forms: coefficient i multiplies x^i z^(n-i) ------------------------

def _dx(form):
    return [form[i + 1] * (i + 1) for i in range(len(form) - 1)]


def _dz(form):
    n = len(form) - 1
    return [form[i] * (n - i) for i in range(n)]


def _mul(a, b, zero):
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _partial(form, kx, kz):
    for _ in range(kx):
        form = _dx(form)
    for _ in range(kz):
        form = _dz(form)
    return form


def transvectant(f, g, k):
    """The k-th transvectant (Ueberschiebung) of two binary forms."""
    m, n = len(f) - 1, len(g) - 1
    zero = f[0].F.zero
    total = [zero] * (m + n - 2 * k + 1)
    for j in range(k + 1):
        term = _mul(_partial(f, k - j, j), _partial(g, j, k - j), zero)
        c = comb(k, j) * (-1) ** j
        total = [t + s * c for t, s in zip(total, term)]
    F = zero.F
    scale = F(factorial(m - k) * factorial(n - k)) / F(factorial(m) * factorial(n))
    return [t * scale for t in total]


def clebsch_invariants(curve: Genus2Curve):
    form = curve.f.padded(7)
    i = transvectant(form, form, 4)
    delta = transvectant(i, i, 2)
    A = transvectant(form, form, 6)[0]
    B = transvectant(i, i, 4)[0]
    C = transvectant(i, delta, 4)[0]
    y1 = transvectant(form, i, 4)
    y2 = transvectant(i, y1, 2)
    y3 = transvectant(i, y2, 2)
    D = transvectant(y3, y1, 2)[0]
    return A, B, C, D


def igusa_clebsch_invariants(curve: Genus2Curve):
    A, B, C, D = clebsch_invariants(curve)
    I2 = A * -120
    I4 = A * A * -720 + B * 6750
    I6 = A**3 * 8640 - A * B * 108000 + C * 202500
    I10 = (A**5 * -62208 + A**3 * B * 972000 + A * A * C * 1620000
           - A * B * B * 3037500 - B * C * 6075000 - D * 4556250)
    return I2, I4, I6, I10


@dataclass(frozen=True, eq=False)
class IgusaInvariants:
    J2: Fq
    J4: Fq
    J6: Fq
    J8: Fq
    J10: Fq

    def as_tuple(self):
        return (self.J2, self.J4, self.J6, self.J8, self.J10)

    def __eq__(self, other):
        return isinstance(other, IgusaInvariants) and self.as_tuple() == other.as_tuple()


@dataclass(frozen=True, eq=False)
class G2Invariants:
    g1: Fq
    g2: Fq
    g3: Fq

    def as_tuple(self):
        return (self.g1, self.g2, self.g3)

    def __eq__(self, other):
        return isinstance(other, G2Invariants) and self.as_tuple() == other.as_tuple()

    def __hash__(self):
        return hash(tuple(g.key() for g in self.as_tuple()))


def igusa_from_igusa_clebsch(I2, I4, I6, I10) -> IgusaInvariants:
    J2 = I2 / 8
    J4 = (J2 * J2 * 4 - I4) / 96
    J6 = (J2**3 * 8 - J2 * J4 * 160 - I6) / 576
    J8 = (J2 * J6 - J4 * J4) / 4
    J10 = I10 / 4096
    return IgusaInvariants(J2, J4, J6, J8, J10)


def igusa_invariants(curve: Genus2Curve) -> IgusaInvariants:
    inv = igusa_from_igusa_clebsch(*igusa_clebsch_invariants(curve))
    if inv.J10.is_zero():
        raise SingularCurve("J10 vanishes")
    return inv


def g2_invariants(J: IgusaInvariants) -> G2Invariants:
    if J.J10.is_zero():
        raise SingularCurve("J10 vanishes")
    inv = J.J10.inverse()
    J2sq = J.J2 * J.J2
    return G2Invariants(J2sq * J2sq * J.J2 * inv, J2sq * J.J2 * J.J4 * inv, J2sq * J.J6 * inv)


@dataclass(frozen=True)
class Fingerprint:
    """Isomorphism-class tag of a surface.

    ``kind`` is ``"jac"`` (G2-invariants, extended on the J2 = 0 locus) or
    ``"prod"`` (sorted pair of j-invariants).
    """

    kind: str
    values: tuple

    def key(self):
        return (self.kind, tuple(v.key() for v in self.values))

    def __eq__(self, other):
        return isinstance(other, Fingerprint) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_bytes(self) -> bytes:
        tag = b"\x01" if self.kind == "jac" else b"\x02"
        return tag + bytes([len(self.values)]) + b"".join(v.to_bytes() for v in self.values)


def fingerprint(curve: Genus2Curve) -> Fingerprint:
    J = igusa_invariants(curve)
    g = g2_invariants(J)
    values = g.as_tuple()
    if J.J2.is_zero():
        # all three G2 ratios vanish here; add weight-balanced ratios so that
        # distinct classes on this locus keep distinct tags
        inv = J.J10.inverse()
        values += (J.J4 * J.J6 * inv, J.J4**5 * inv * inv, J.J6**5 * inv**3)
    return Fingerprint("jac", values)


def moebius_transform(f: Poly, a, b, c, d, degree: int = 6) -> Poly:
    """(cx+d)^6 f((ax+b)/(cx+d)), treating f as a binary sextic."""
    F = f.F
    num = Poly(F, [F(b), F(a)])
    den = Poly(F, [F(d), F(c)])
    out = Poly(F, [])
    coeffs = f.padded(degree + 1)
    num_pows = [Poly(F, [F.one])]
    den_pows = [Poly(F, [F.one])]
    for _ in range(degree):
        num_pows.append(num_pows[-1] * num)
        den_pows.append(den_pows[-1] * den)
    for i, ci in enumerate(coeffs):
        if ci.is_zero():
            continue
        out = out + num_pows[i] * den_pows[degree - i] * ci
    return out


def moebius_twist(curve: Genus2Curve, M, e) -> Genus2Curve:
    """Isomorphic model under x -> (ax+b)/(cx+d), y -> e*y/(cx+d)^3.

    ``M`` is ((a, b), (c, d)); the returned curve is
    y^2 = e^-2 (cx+d)^6 f((ax+b)/(cx+d)).
    """
    (a, b), (c, d) = M
    F = curve.F
    a, b, c, d, e = (F(t) for t in (a, b, c, d, e))
    if (a * d - b * c).is_zero() or e.is_zero():
        raise ValueError("singular transformation")
    g = moebius_transform(curve.f, a, b, c, d) * (e * e).inverse()
    try:
        return Genus2Curve(g)
    except SingularCurve as exc:
        raise DegenerateImage(str(exc)) from exc
