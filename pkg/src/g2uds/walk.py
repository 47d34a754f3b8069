"""Superspecial starting surfaces and random Richelot walks."""

from __future__ import annotations

import math
import random

from .elliptic import EllipticCurve, canonical_model
from .errors import WalkStuck
from .field import QuadField
from .invariants import Genus2Curve
from .models import ModelChange
from .poly import Poly, roots
from .richelot import RichelotStep, all_splittings, splitting_is_degenerate
from .surfaces import JacobianSurface, Surface, has_full_torsion


def supersingular_curve(F: QuadField, exponent: int) -> EllipticCurve:
    """A supersingular curve with E(F_{p^2}) = E[exponent].

    y^2 = x^3 + x for p = 3 mod 4 and y^2 = x^3 + 1 for p = 2 mod 3, twisted
    to the model with full rational torsion.
    """
    p = F.p
    if p % 4 == 3:
        j = F(1728)
    elif p % 3 == 2:
        j = F.zero
    else:
        raise ValueError("no CM starting curve for this prime (need p = 3 mod 4 or 2 mod 3)")
    return canonical_model(j, exponent)


def double_cover(E: EllipticCurve, exponent: int, max_shift: int = 512) -> JacobianSurface:
    """Quintic model of a curve y^2 = c(x^2), c a translate of the cubic of E.

    Translations are tried in order until the cover has six rational
    branch points and its jacobian has full rational ``exponent``-torsion.
    """
    F = E.F
    X = Poly.x(F)
    cubic = Poly(F, [E.b, E.a, F.zero, F.one])
    twist = [F.one, F.primitive_element]
    for t in range(1, min(max_shift, F.p)):
        c = cubic.compose(X + t)
        f = c.compose(X * X)
        if f.degree() != 6 or not _squarefree(f):
            continue
        rs = roots(f)
        if len(rs) != 6:
            continue
        for lam in twist:
            C = Genus2Curve(f * lam)
            Q = ModelChange.moving_to_infinity(C, rs[0]).target
            A = JacobianSurface(Q)
            if has_full_torsion(A, exponent, trials=4, seed=t):
                return A
    raise WalkStuck("no suitable double cover found")


def _squarefree(f: Poly) -> bool:
    from .poly import is_squarefree

    return is_squarefree(f)


def default_walk_length(p: int) -> int:
    return 2 * math.ceil(math.log2(p))


def random_walk(A: JacobianSurface, steps: int, seed=0, endpoint: str = "jacobian",
                max_extra: int = 1024):
    """Non-backtracking walk of Richelot steps; returns (surface, list of steps).

    endpoint: "jacobian" never takes split steps; "product" walks ``steps``
    jacobian steps and then continues until a split step is available and
    takes it; "any" picks uniformly among all neighbours and stops early if
    it lands on a product.
    """
    if endpoint not in ("jacobian", "product", "any"):
        raise ValueError("endpoint must be 'jacobian', 'product' or 'any'")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    taken = []
    cur = A
    avoid = None
    k = 0
    while True:
        if k >= steps and endpoint != "product":
            return cur, taken
        if k >= steps + max_extra:
            raise WalkStuck("no split neighbour reached")
        options = [S for S in all_splittings(cur.curve) if S.key() != avoid]
        rng.shuffle(options)
        split = [S for S in options if splitting_is_degenerate(S)]
        normal = [S for S in options if not splitting_is_degenerate(S)]
        if endpoint == "any":
            S = options[0]
        elif endpoint == "product" and k >= steps and split:
            S = split[0]
        elif normal:
            S = normal[0]
        else:
            raise WalkStuck("every admissible neighbour is split")
        st = RichelotStep(cur.curve, S)
        taken.append(st)
        if st.split:
            return st.codomain, taken
        if st.codomain is None:
            raise WalkStuck("walk reached a curve without a quintic model")
        avoid = st.dual_splitting.key()
        cur = st.codomain
        k += 1


def random_walk_setup(E: EllipticCurve, steps: int | None = None, seed=0, endpoint: str = "jacobian",
                      exponent: int | None = None) -> Surface:
    F = E.F
    if exponent is None:
        exponent = F.p + 1
    if steps is None:
        steps = default_walk_length(F.p)
    start = double_cover(E, exponent)
    surface, _ = random_walk(start, steps, seed, endpoint)
    return surface


__all__ = ["supersingular_curve", "double_cover", "random_walk", "random_walk_setup",
           "default_walk_length"]
