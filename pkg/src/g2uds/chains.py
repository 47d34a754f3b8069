"""(l,l)-steps on elliptic products, isogeny chains and canonical models."""

from __future__ import annotations

from dataclasses import dataclass, field

from .elliptic import VeluIsogeny, apply_isomorphism, canonical_model, isomorphism_scalar
from .errors import (BadOrder, BrokenChain, InternalError, NotIsotropic, NotOrder4,
                     UnsupportedKernel, UnsupportedModel)
from .jacobian import MumfordDivisor, scalar_mul
from .kernels import KernelSpec
from .richelot import IsogenyStep, RichelotStep, splitting_from_kernel
from .surfaces import JacobianSurface, ProductPoint, ProductSurface, Surface


def _mul(P, k):
    return scalar_mul(k, P) if isinstance(P, MumfordDivisor) else P * k


class ProductStep(IsogenyStep):
    """E1 x E2 -> E1/<P1> x E2/<P2> for P1, P2 of prime order l."""

    def __init__(self, A: ProductSurface, P1, P2, l: int):
        self.domain = A
        self.degree_prime = l
        for P, E in ((P1, A.E1), (P2, A.E2)):
            if P.E != E:
                raise BadOrder("kernel point is not on the matching factor")
            if P.is_zero() or not (P * l).is_zero():
                raise BadOrder(f"kernel points must have exact order {l}")
        self.phi1 = VeluIsogeny(P1, l)
        self.phi2 = VeluIsogeny(P2, l)
        self.kernel = (ProductPoint(P1, A.E2.O), ProductPoint(A.E1.O, P2))
        self.codomain = ProductSurface(self.phi1.codomain, self.phi2.codomain)

    def _direct(self, P):
        return ProductPoint(self.phi1(P.P1), self.phi2(P.P2))

    def evaluate(self, P):
        self.domain.require(P)
        return self._direct(P)

    __call__ = evaluate


def _order_on_supersingular(P) -> int:
    """Order of P, trying the group orders a supersingular curve over F_{p^2}
    can have; other curves need an explicit degree."""
    from .elliptic import point_order
    from .errors import NotTorsion

    p = P.E.F.p
    for m in ((p + 1) ** 2, (p - 1) ** 2, p * p + 1, p * p + p + 1, p * p - p + 1):
        try:
            return point_order(P, m)
        except NotTorsion:
            continue
    raise BadOrder("cannot infer the kernel order; pass l explicitly")


def product_step(A: ProductSurface, K, l: int | None = None) -> ProductStep:
    """Step with kernel <(P1, 0), (0, P2)>; K is the pair of those points."""
    Pa, Pb = K
    if not (Pa.P2.is_zero() and Pb.P1.is_zero()):
        raise BadOrder("kernel is not of product form")
    if l is None:
        from sympy import factorint

        if Pa.P1.is_zero():
            raise BadOrder("identity kernel component")
        d = _order_on_supersingular(Pa.P1)
        fac = factorint(d)
        if len(fac) != 1 or sum(fac.values()) != 1:
            raise BadOrder("kernel components must have prime order")
        l = d
    return ProductStep(A, Pa.P1, Pb.P2, l)


class CanonicalStep(IsogenyStep):
    """Isomorphism of a product onto its canonical model.

    The factors are ordered by j-invariant and each is replaced by the fixed
    model of its j-invariant with full rational ``exponent``-torsion.
    """

    degree_prime = 1

    def __init__(self, A: ProductSurface, exponent: int):
        self.domain = A
        j1, j2 = A.E1.j_invariant(), A.E2.j_invariant()
        self.swap = j2.key() < j1.key()
        E1, E2 = (A.E2, A.E1) if self.swap else (A.E1, A.E2)
        C1 = canonical_model(E1.j_invariant(), exponent)
        C2 = canonical_model(E2.j_invariant(), exponent)
        u1 = isomorphism_scalar(E1, C1)
        u2 = isomorphism_scalar(E2, C2)
        if u1 is None or u2 is None:
            raise InternalError("factor is not isomorphic to its canonical model")
        self.u = (u1, u2)
        self.codomain = ProductSurface(C1, C2)

    def _direct(self, P):
        Q1, Q2 = (P.P2, P.P1) if self.swap else (P.P1, P.P2)
        C = self.codomain
        return ProductPoint(apply_isomorphism(Q1, C.E1, self.u[0]),
                            apply_isomorphism(Q2, C.E2, self.u[1]))

    def evaluate(self, P):
        self.domain.require(P)
        return self._direct(P)

    __call__ = evaluate


def canonical_product(A: ProductSurface, exponent: int) -> ProductSurface:
    return CanonicalStep(A, exponent).codomain


def is_canonical(A: Surface, exponent: int) -> bool:
    return isinstance(A, ProductSurface) and canonical_product(A, exponent) == A


@dataclass
class Chain:
    domain: Surface
    steps: list = field(default_factory=list)

    @property
    def codomain(self) -> Surface:
        return self.steps[-1].codomain if self.steps else self.domain

    def evaluate(self, P):
        for st in self.steps:
            P = st.evaluate(P)
        return P

    __call__ = evaluate


def _cyclic_coords(pts, N: int, l: int):
    """If the elliptic points ``pts`` generate a cyclic group of order N,
    return (generator, [k_i]) with pts[i] = k_i * generator."""
    gen = None
    for P in pts:
        if not (P * (N // l)).is_zero():
            gen = P
            break
    if gen is None:
        return None
    multiples = {}
    acc = gen.E.O
    for k in range(N):
        multiples[acc] = k
        acc = acc + gen
    coords = []
    for P in pts:
        k = multiples.get(P)
        if k is None:
            return None
        coords.append(k)
    return gen, coords


def _product_form_split(gens, A: ProductSurface, l: int, k: int):
    """If <gens> = <(P1,0)> x <(0,P2)> with P_i of order l^k, return the two
    generators (P1, 0) and (0, P2); otherwise None."""
    N = l**k
    if any(not (g * N).is_identity() for g in gens):
        return None
    first = _cyclic_coords([g.P1 for g in gens], N, l)
    second = _cyclic_coords([g.P2 for g in gens], N, l)
    if first is None or second is None:
        return None
    # <gens> sits inside <P1> x <P2> ~ (Z/N)^2 and fills it exactly when some
    # 2x2 minor of the coordinate matrix is a unit
    (P1, a), (P2, b) = first, second
    if not any((a[i] * b[j] - a[j] * b[i]) % l for i in range(len(gens)) for j in range(i + 1, len(gens))):
        return None
    return ProductPoint(P1, A.E2.O), ProductPoint(A.E1.O, P2)


def build_chain(A: Surface, K: KernelSpec, exponent: int | None = None) -> Chain:
    """Decompose the (N,N)-isogeny with kernel K into e prime-degree steps.

    When ``exponent`` is given and the codomain is a product, a final
    isomorphism onto the canonical model is appended.
    """
    if isinstance(A, JacobianSurface):
        gens = K.reduced_generators()
    else:
        if not K.product_form:
            raise UnsupportedKernel("product domains need product-form kernels")
        gens = K.factor_generators()
    return chain_from_generators(A, gens, K.basis.l, K.basis.e, exponent)


def _factor_aligned(gens, N, l):
    if len(gens) != 2:
        return False
    Pa, Pb = gens
    return (Pa.P2.is_zero() and Pb.P1.is_zero()
            and not (Pa.P1 * (N // l)).is_zero() and (Pa.P1 * N).is_zero()
            and not (Pb.P2 * (N // l)).is_zero() and (Pb.P2 * N).is_zero())


def chain_from_generators(A: Surface, gens, l: int, e: int, exponent: int | None = None) -> Chain:
    """Chain with kernel <gens>, a subgroup isomorphic to (Z/l^e)^2."""
    chain = Chain(A)
    gens = list(gens)
    if isinstance(A, JacobianSurface):
        if l != 2:
            raise UnsupportedKernel("jacobian domains only support (2,2)-chains")
        if len(gens) != 2:
            raise UnsupportedKernel("jacobian chains take two generators")
    elif not _factor_aligned(gens, l**e, l):
        split = _product_form_split(gens, A, l, e)
        if split is None:
            raise UnsupportedKernel("product domains need product-form kernels")
        gens = list(split)
    cur = A
    for j in range(e):
        rem = e - j
        ker = [_mul(g, l ** (rem - 1)) for g in gens]
        if isinstance(cur, JacobianSurface):
            try:
                S = splitting_from_kernel(cur.curve, ker)
            except (NotIsotropic, NotOrder4) as exc:
                raise BrokenChain(f"step {j}: {exc}") from exc
            step = RichelotStep(cur.curve, S)
            if step.codomain is None:
                raise UnsupportedModel("intermediate codomain has no quintic model")
        else:
            Pa, Pb = ker
            if not (Pa.P2.is_zero() and Pb.P1.is_zero()):
                raise BrokenChain("kernel lost its product form")
            step = ProductStep(cur, Pa.P1, Pb.P2, l)
        chain.steps.append(step)
        gens = [step(g) for g in gens]
        cur = step.codomain
        if isinstance(cur, ProductSurface) and isinstance(step, RichelotStep) and j + 1 < e:
            split = _product_form_split(gens, cur, l, rem - 1)
            if split is None:
                raise UnsupportedKernel("remaining kernel on the split codomain is not of product form")
            gens = list(split)
    if any(not g.is_identity() for g in gens):
        raise BrokenChain("kernel generators survive the chain")
    if exponent is not None and isinstance(cur, ProductSurface):
        chain.steps.append(CanonicalStep(cur, exponent))
    return chain


def isogeny_chain(A: Surface, K: KernelSpec, push=(), exponent: int | None = None):
    chain = build_chain(A, K, exponent)
    return chain.codomain, [chain(P) for P in push]
