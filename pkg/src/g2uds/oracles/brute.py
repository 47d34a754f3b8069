"""Exhaustive group enumeration and brute-force kernel recovery.

Group listings and subgroup comparisons use the schoolbook arithmetic of
:mod:`g2uds.oracles.naive`; the engine is only asked to realise candidate
quotients in :func:`cssi_bruteforce`, where the point is to compare its
answer with the key generator's hidden choice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import NotFound, TooLarge
from . import naive as nv

MAX_GROUP = 1 << 26
MAX_SEARCH = 1 << 24


def fq_tuple(x) -> tuple:
    return (x.a, x.b)


def ec_tuple(P):
    return None if P.is_zero() else (fq_tuple(P.x), fq_tuple(P.y))


def product_point_tuple(P):
    return (ec_tuple(P.P1), ec_tuple(P.P2))


def curve_tuple(E):
    return (fq_tuple(E.a), fq_tuple(E.b))


@dataclass
class GroupEnumeration:
    """All points of a surface.  Product surfaces are listed lazily as pairs
    of naive points; jacobians are counted through their zeta function."""

    kind: str
    p: int
    order: int
    factors: tuple = ()
    curves: tuple = ()

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        if self.kind != "prod":
            raise TooLarge("jacobian listings are not materialised; use the count")
        return itertools.product(*self.factors)

    def identity_count(self) -> int:
        if self.kind != "prod":
            return 1
        return sum(1 for P in self.factors[0] if P is None) * sum(1 for P in self.factors[1] if P is None)

    def torsion(self, n: int):
        """Points killed by n on each factor (product surfaces)."""
        if self.kind != "prod":
            raise TooLarge("torsion listing needs a product surface")
        F = nv.NaiveField(self.p)
        out = []
        for (a, _), pts in zip(self.curves, self.factors):
            out.append([P for P in pts if nv.ec_mul(F, a, P, n) is None])
        return out


def enumerate_group(A) -> GroupEnumeration:
    """Complete enumeration of A(F_{p^2}) for tiny p (order at most 2^26)."""
    from ..surfaces import JacobianSurface, ProductSurface

    p = A.F.p
    if (p + 1) ** 4 > MAX_GROUP:
        raise TooLarge(f"(p+1)^4 = {(p + 1) ** 4} exceeds the enumeration bound")
    if isinstance(A, ProductSurface):
        curves = (curve_tuple(A.E1), curve_tuple(A.E2))
        pts = tuple(nv.ec_points(p, a, b) for a, b in curves)
        return GroupEnumeration("prod", p, len(pts[0]) * len(pts[1]), pts, curves)
    if isinstance(A, JacobianSurface):
        coeffs = [fq_tuple(c) for c in A.curve.f.c]
        return GroupEnumeration("jac", p, nv.jacobian_order(p, coeffs))
    raise TypeError("unknown surface type")


# -- subgroup bookkeeping ------------------------------------------------------------

def cyclic_subgroups_coords(N: int, l: int):
    """Cyclic subgroups of order N in (Z/N)^2, one generator each, as
    coordinate pairs."""
    seen = set()
    out = []
    for x in range(N):
        for y in range(N):
            if x % l == 0 and y % l == 0:
                continue
            S = frozenset(((k * x) % N, (k * y) % N) for k in range(N))
            if S in seen:
                continue
            seen.add(S)
            out.append((x, y))
    return out


def naive_subgroup(points, curves, p: int) -> frozenset:
    """Subgroup of a product generated by ``points`` (engine ProductPoints),
    closed with schoolbook arithmetic."""
    F = nv.NaiveField(p)
    (a1, _), (a2, _) = curves
    gens = [product_point_tuple(P) for P in points]

    def add(X, Y):
        return (nv.ec_add(F, a1, X[0], Y[0]), nv.ec_add(F, a2, X[1], Y[1]))

    return frozenset(nv.subgroup_closure(gens, add, (None, None)))


def same_subgroup(gens1, gens2, surface) -> bool:
    curves = (curve_tuple(surface.E1), curve_tuple(surface.E2))
    p = surface.F.p
    return naive_subgroup(gens1, curves, p) == naive_subgroup(gens2, curves, p)


# -- CSSI ------------------------------------------------------------------------------

def cssi_candidates(basis):
    """Every product-form maximal isotropic subgroup of A[l^e] with respect to a
    factor-aligned basis, as twelve-scalar tuples."""
    N, l = basis.N, basis.l
    cyc = cyclic_subgroups_coords(N, l)
    if len(cyc) ** 2 > MAX_SEARCH:
        raise TooLarge("kernel search space too large")
    for (x, y), (z, w) in itertools.product(cyc, cyc):
        yield (x, y, 0, 0, 0, 0, z, w, 0, 0, 0, 0)


def cssi_bruteforce(instance, pp):
    """Search all candidate subgroups for one whose quotient matches the
    instance's public fingerprint and pushed M-points."""
    from ..chains import build_chain
    from ..kernels import kernel_from_scalars

    fpA = instance.public["fpA"]
    pushed = tuple(instance.public["pushedM"])
    basis = pp.basisA
    if not basis.is_factor_aligned():
        raise NotFound("brute force needs a factor-aligned basis")
    for s in cssi_candidates(basis):
        K = kernel_from_scalars(s, basis, require_product_form=True)
        chain = build_chain(pp.surface, K, pp.exponent)
        if chain.codomain.fingerprint() != fpA:
            continue
        if tuple(chain(M) for M in pp.basisM.points) == pushed:
            return K
    raise NotFound("no candidate subgroup reproduces the public data")
