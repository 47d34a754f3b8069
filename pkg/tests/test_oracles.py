import random

import pytest

from g2uds import uds
from g2uds.chains import build_chain, chain_from_generators
from g2uds.errors import IllegalQuery, NotFound, TooLarge
from g2uds.invariants import Fingerprint
from g2uds.jacobian import random_divisor, scalar_mul
from g2uds.kernels import kernel_from_scalars
from g2uds.oracles import naive as nv
from g2uds.oracles.brute import (cssi_bruteforce, cssi_candidates, cyclic_subgroups_coords,
                                 enumerate_group, same_subgroup)
from g2uds.oracles.games import (fake_signature, invisibility_game, random_guess_adversary,
                                 replay_adversary, rule_violating_adversary, unforgeability_game)
from g2uds.oracles.instances import KINDS, ProblemInstance, gen_instance
from g2uds.surfaces import JacobianSurface

import support


def test_product_enumeration_count(pp59):
    G = enumerate_group(pp59.surface)
    assert len(G) == 60**4 == 12_960_000
    assert G.identity_count() == 1
    t2 = G.torsion(2)
    assert [len(x) for x in t2] == [4, 4]
    t4 = G.torsion(4)
    assert [len(x) for x in t4] == [16, 16]


def test_enumeration_bound(pp):
    if pp.field.p == 719:
        with pytest.raises(TooLarge):
            enumerate_group(pp.surface)


def test_two_torsion_combinatorics():
    elems, kernels = nv.two_torsion_kernels()
    assert len(elems) == 16
    assert len(kernels) == 15
    for K in kernels:
        assert len(K) == 4
        for S in K:
            for T in K:
                assert len(S & T) % 2 == 0


def test_jacobian_orders():
    H = support.superspecial_quintic(59)
    assert enumerate_group(JacobianSurface(H)).order == 60**4
    F = H.F
    Hr = support.random_quintic(F, random.Random(3))
    order = nv.jacobian_order(59, [(c.a, c.b) for c in Hr.f.c])
    # Hasse-Weil over F_{p^2}: (p-1)^4 <= #J <= (p+1)^4
    assert 58**4 <= order <= 60**4
    for s in range(5):
        assert scalar_mul(order, random_divisor(Hr, s)).is_identity()


def test_cyclic_subgroup_counts():
    # cyclic subgroups of order l^e in (Z/l^e)^2: l^e + l^(e-1)
    for l, e in ((2, 1), (2, 2), (2, 4), (3, 1), (3, 2), (5, 1)):
        assert len(cyclic_subgroups_coords(l**e, l)) == l**e + l ** (e - 1)


def test_product_kernels_exhaustive(pp59):
    assert support.product_kernels_exhaustive(pp59) == (36, 36, True, True)
    assert len(list(cssi_candidates(pp59.basisA))) == 36


def test_product_kernels_sampled_719():
    ok, total = support.product_kernels_sampled(support.public_params(719), 10, random.Random(1))
    assert (ok, total) == (10, 576)


def test_cssi_bruteforce(pp59):
    for seed in range(10):
        inst = gen_instance("CSSI", pp59, seed=seed)
        K = cssi_bruteforce(inst, pp59)
        hidden = kernel_from_scalars(inst.witness["a"], pp59.basisA, require_product_form=True)
        assert same_subgroup(K.generators, hidden.generators, pp59.surface)


def test_cssi_not_found(pp59):
    inst = gen_instance("CSSI", pp59, seed=0)
    F = pp59.F
    pub = dict(inst.public, fpA=Fingerprint("prod", (F.zero, F.one)))
    with pytest.raises(NotFound):
        cssi_bruteforce(ProblemInstance("CSSI", pub), pp59)


def other_order_fp(pp, a, m):
    """J_AM reached through J_A, from the witness scalars."""
    KA = kernel_from_scalars(a, pp.basisA, require_product_form=True)
    KM = kernel_from_scalars(m, pp.basisM, require_product_form=True)
    cA = build_chain(pp.surface, KA, pp.exponent)
    gens = [cA(P) for P in KM.factor_generators()]
    return chain_from_generators(cA.codomain, gens, pp.field.l_M, pp.field.e_M, pp.exponent).codomain.fingerprint()


@pytest.mark.parametrize("kind", KINDS)
def test_instances_generate(pp59, kind):
    for seed in range(3):
        inst = gen_instance(kind, pp59, seed=seed)
        assert inst.kind == kind
        if "a" in inst.witness:
            KA = kernel_from_scalars(inst.witness["a"], pp59.basisA, require_product_form=True)
            fpA = build_chain(pp59.surface, KA, pp59.exponent).codomain.fingerprint()
            if "fpA" in inst.public:
                assert inst.public["fpA"] == fpA


def test_instance_answers_follow_the_witness(pp59):
    for seed in range(4):
        inst = gen_instance("SSCDH", pp59, seed=seed)
        assert inst.answer == other_order_fp(pp59, inst.witness["a"], inst.witness["m"])
    reals = 0
    for seed in range(12):
        inst = gen_instance("SSDDH", pp59, seed=seed)
        if inst.answer == 1:
            reals += 1
            assert inst.public["last"] == other_order_fp(pp59, inst.witness["a"], inst.witness["m"])
    assert reals
    for seed in range(6):
        inst = gen_instance("DSSI", pp59, seed=seed)
        if inst.answer == 1:
            KA = kernel_from_scalars(inst.witness["a"], pp59.basisA, require_product_form=True)
            assert inst.public["fpH2"] == build_chain(pp59.surface, KA, pp59.exponent).codomain.fingerprint()


def test_side_oracle(pp59):
    inst = gen_instance("1MSSDDH", pp59, seed=0)
    with pytest.raises(IllegalQuery):
        inst.oracle(inst.public["kerM"])
    m2 = next(uds.hash_to_scalars(pp59, b"side %d" % i) for i in range(100)
              if build_chain(pp59.surface, uds.hash_kernel(pp59, b"side %d" % i), pp59.exponent)
              .codomain.fingerprint() != inst.public["fpM"])
    assert inst.oracle(m2) == other_order_fp(pp59, inst.witness["a"], m2)
    dec = gen_instance("1MSSCDH", pp59, seed=0)
    assert dec.oracle(m2, other_order_fp(pp59, dec.witness["a"], m2)) == 1


def test_unforgeability_game(pp59):
    out = unforgeability_game(replay_adversary, pp59, q_s=2, seed=0)
    assert not out.win and out.detail["valid"] and not out.detail["fresh"]

    def greedy(pk, oracle):
        for i in range(3):
            oracle.sign(b"m%d" % i)

    with pytest.raises(IllegalQuery):
        unforgeability_game(greedy, pp59, q_s=2)

    def checker(pk, oracle):
        sig = oracle.sign(b"checked")
        assert oracle.check(b"checked", sig) == (1, True)
        return None

    assert not unforgeability_game(checker, pp59, q_s=1).win


def test_invisibility_game(pp59):
    wins = sum(invisibility_game(random_guess_adversary(random.Random(i)), pp59, seed=i).win
               for i in range(20))
    assert 3 <= wins <= 17
    with pytest.raises(IllegalQuery):
        invisibility_game(rule_violating_adversary, pp59, seed=0)

    def double_challenge(pk, oracle):
        oracle.challenge(b"one")
        oracle.challenge(b"two")

    with pytest.raises(IllegalQuery):
        invisibility_game(double_challenge, pp59)


def test_fake_signatures_look_honest(pp):
    rng = random.Random(2)
    for _ in range(3):
        sig = fake_signature(pp, rng)
        uds.validate_signature(pp, sig)
