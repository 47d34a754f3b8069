import random

import pytest

from g2uds.chains import (CanonicalStep, build_chain, chain_from_generators, is_canonical,
                          product_step)
from g2uds.elliptic import VeluIsogeny, canonical_model, has_full_torsion
from g2uds.errors import BadOrder, UnsupportedKernel, UnsupportedModel
from g2uds.kernels import kernel_from_scalars, sample_kernel, torsion_basis
from g2uds.oracles import naive as nv
from g2uds.oracles.brute import curve_tuple, ec_tuple, same_subgroup
from g2uds.surfaces import JacobianSurface, ProductPoint, ProductSurface
from g2uds.walk import default_walk_length, double_cover, random_walk, supersingular_curve

import support


def naive_j_after_quotient(E, P):
    """j-invariant of E / <P> by Velu over the whole cyclic subgroup."""
    N = nv.NaiveField(E.F.p)
    a, b = curve_tuple(E)
    A, B = nv.velu_codomain(N, a, b, nv.cyclic_closure(N, a, ec_tuple(P)))
    return nv.ec_j(N, A, B)


@pytest.mark.parametrize("l", [2, 3, 5])
def test_velu_codomain_matches_oracle(pp, l):
    E = pp.surface.E1
    n = pp.exponent
    rng = random.Random(l)
    N = nv.NaiveField(E.F.p)
    for _ in range(5):
        K = support.random_torsion(E, n, l, rng)
        phi = VeluIsogeny(K, l)
        a, b = curve_tuple(E)
        expect = nv.velu_codomain(N, a, b, nv.cyclic_closure(N, a, ec_tuple(K)))
        assert curve_tuple(phi.codomain) == expect
        assert phi(K).is_zero()
        for _ in range(5):
            P, Q = E.random_point(rng), E.random_point(rng)
            assert phi(P + Q) == phi(P) + phi(Q)
            img = phi(P)
            assert img.is_zero() or phi.codomain.rhs(img.x) == img.y * img.y


def test_two_isogenous_j_satisfy_phi2(pp):
    E = pp.surface.E2
    N = nv.NaiveField(E.F.p)
    rng = random.Random(2)
    for _ in range(6):
        K = support.random_torsion(E, pp.exponent, 2, rng)
        E2 = VeluIsogeny(K, 2).codomain
        j1, j2 = E.j_invariant().key(), E2.j_invariant().key()
        assert nv.phi2(N, j1, j2) == N.zero


def test_velu_rejects_wrong_order(pp):
    E = pp.surface.E1
    K = support.random_torsion(E, pp.exponent, 4, random.Random(0))
    with pytest.raises(BadOrder):
        VeluIsogeny(K, 2)


def test_product_step_infers_prime_degree(pp):
    A = pp.surface
    rng = random.Random(3)
    n = pp.exponent
    P1 = support.random_torsion(A.E1, n, 3, rng)
    P2 = support.random_torsion(A.E2, n, 3, rng)
    step = product_step(A, (ProductPoint(P1, A.E2.O), ProductPoint(A.E1.O, P2)))
    assert step.degree_prime == 3
    for k in step.kernel:
        assert step(k).is_identity()
    Q1 = support.random_torsion(A.E1, n, 4, rng)
    with pytest.raises(BadOrder):
        product_step(A, (ProductPoint(Q1, A.E2.O), ProductPoint(A.E1.O, P2)))
    with pytest.raises(BadOrder):
        product_step(A, (ProductPoint(P1, P2), ProductPoint(A.E1.O, P2)))


def test_chain_codomain_matches_naive_velu(pp):
    basis = pp.basisA
    rng = random.Random(5)
    for _ in range(4):
        K = sample_kernel(basis, rng, require_product_form=True)
        chain = build_chain(pp.surface, K)
        assert len(chain.steps) == basis.e
        G1, G2 = K.factor_generators()
        expect = sorted([naive_j_after_quotient(pp.surface.E1, G1.P1),
                         naive_j_after_quotient(pp.surface.E2, G2.P2)])
        fp = chain.codomain.fingerprint()
        assert fp.kind == "prod"
        assert [v.key() for v in fp.values] == expect


def test_chain_kills_kernel_and_is_homomorphic(pp):
    rng = random.Random(6)
    K = sample_kernel(pp.basisA, rng, require_product_form=True)
    chain = build_chain(pp.surface, K, pp.exponent)
    assert is_canonical(chain.codomain, pp.exponent)
    assert isinstance(chain.steps[-1], CanonicalStep)
    for g in K.generators:
        assert chain(g).is_identity()
    for _ in range(10):
        P, Q = pp.surface.random_point(rng), pp.surface.random_point(rng)
        assert chain(P + Q) == chain(P) + chain(Q)
    # points of coprime order keep their order
    for C in pp.basisM.points:
        img = chain(C)
        assert (img * pp.basisM.N).is_identity()
        assert not (img * (pp.basisM.N // pp.basisM.l)).is_identity()


def test_generator_change_keeps_codomain(pp):
    basis = pp.basisA
    rng = random.Random(7)
    for _ in range(5):
        K = sample_kernel(basis, rng, require_product_form=True)
        s2 = support.change_generators(K.scalars, basis.N, basis.l, rng)
        K2 = kernel_from_scalars(s2, basis, require_product_form=True)
        assert same_subgroup(K.generators, K2.generators, pp.surface)
        c1 = build_chain(pp.surface, K, pp.exponent)
        c2 = build_chain(pp.surface, K2, pp.exponent)
        assert c1.codomain == c2.codomain
        assert [c1(P) for P in pp.basisC.points] == [c2(P) for P in pp.basisC.points]


def test_non_product_kernel_rejected_on_products(pp):
    rng = random.Random(8)
    while True:
        K = sample_kernel(pp.basisA, rng, require_product_form=False)
        if not K.product_form:
            break
    with pytest.raises(UnsupportedKernel):
        build_chain(pp.surface, K)
    with pytest.raises(UnsupportedKernel):
        chain_from_generators(pp.surface, K.reduced_generators(), pp.basisA.l, pp.basisA.e)


def test_jacobian_chain_restrictions():
    A = JacobianSurface(support.superspecial_quintic(59))
    B3 = torsion_basis(A, 3, 1, 60, seed=0)
    with pytest.raises(UnsupportedKernel):
        chain_from_generators(A, B3.points[:2], 3, 1)
    B2 = torsion_basis(A, 2, 2, 60, seed=0)
    K = sample_kernel(B2, random.Random(0))
    with pytest.raises(UnsupportedKernel):
        chain_from_generators(A, K.generators, 2, 2)


@pytest.mark.parametrize("p", [59, 719])
def test_jacobian_chain_two_steps(p):
    A = JacobianSurface(support.superspecial_quintic(p))
    basis = torsion_basis(A, 2, 2, p + 1, seed=1)
    rng = random.Random(p)
    done = 0
    for _ in range(30):
        K = sample_kernel(basis, rng)
        try:
            chain = build_chain(A, K)
        except UnsupportedModel:
            continue
        assert len(chain.steps) == 2
        for g in K.generators:
            assert chain(g).is_identity()
        s2 = support.change_generators(K.scalars, 4, 2, rng)
        other = build_chain(A, kernel_from_scalars(s2, basis))
        assert other.codomain.fingerprint() == chain.codomain.fingerprint()
        P, Q = A.random_point(rng), A.random_point(rng)
        assert chain(P + Q) == chain(P) + chain(Q)
        done += 1
        if done == 3:
            break
    assert done == 3


def test_canonical_models(pp):
    n = pp.exponent
    for E in (pp.surface.E1, pp.surface.E2):
        C = canonical_model(E.j_invariant(), n)
        assert C == canonical_model(E.j_invariant(), n)
        assert C.j_invariant() == E.j_invariant()
        assert has_full_torsion(C, n, trials=8)
    assert is_canonical(pp.surface, n)
    swapped = ProductSurface(pp.surface.E2, pp.surface.E1)
    step = CanonicalStep(swapped, n)
    assert step.codomain.fingerprint() == swapped.fingerprint()
    rng = random.Random(1)
    P, Q = swapped.random_point(rng), swapped.random_point(rng)
    assert step(P + Q) == step(P) + step(Q)


@pytest.mark.parametrize("p", [59, 719])
def test_walk_deterministic_and_non_backtracking(p):
    F = support.field_params(p).field
    E0 = supersingular_curve(F, p + 1)
    start = double_cover(E0, p + 1)
    steps = default_walk_length(p)
    end1, taken1 = random_walk(start, steps, seed=4)
    end2, taken2 = random_walk(start, steps, seed=4)
    assert end1.fingerprint() == end2.fingerprint()
    assert len(taken1) == steps
    for a, b in zip(taken1, taken1[1:]):
        assert b.splitting.key() != a.dual_splitting.key()
        assert not a.split
    prod, taken = random_walk(start, steps, seed=5, endpoint="product")
    assert isinstance(prod, ProductSurface)
    assert taken[-1].split and len(taken) >= steps + 1
    for E in (prod.E1, prod.E2):
        j = E.j_invariant()
        # supersingular j-invariants lie in F_{p^2}; the factor orders are (p+1)^2
        assert j ** (p * p) == j
        P = E.random_point(random.Random(0))
        assert (P * (p + 1)).is_zero()


def test_walk_endpoint_argument():
    A = JacobianSurface(support.superspecial_quintic(59))
    with pytest.raises(ValueError):
        random_walk(A, 2, endpoint="elsewhere")
