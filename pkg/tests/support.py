"""Shared builders for the test suite (parameters, curves, tampered inputs)."""

from __future__ import annotations

import random
from functools import lru_cache

from g2uds import P59, P719, make_params, uds
from g2uds.chains import chain_from_generators
from g2uds.field import QuadField
from g2uds.invariants import Genus2Curve
from g2uds.jacobian import MumfordDivisor, random_divisor, scalar_mul
from g2uds.models import Degenerate, ModelChange, find_isomorphisms
from g2uds.oracles import naive as nv
from g2uds.poly import Poly, roots
from g2uds.richelot import QuadraticSplitting, dual_step
from g2uds.surfaces import ProductPoint

SHAPES = {59: P59, 719: P719}
PRIMES = tuple(SHAPES)


@lru_cache(maxsize=None)
def field_params(p: int):
    return make_params(**SHAPES[p])


@lru_cache(maxsize=None)
def public_params(p: int, seed: int = 0):
    return uds.setup(field_params(p), seed=seed)


@lru_cache(maxsize=None)
def key_pair(p: int, seed: int = 0):
    return uds.keygen(public_params(p), seed=seed)


@lru_cache(maxsize=None)
def superspecial_quintic(p: int) -> Genus2Curve:
    """A quintic model with six rational branch points whose jacobian has
    full rational (p+1)-torsion: the double cover y^2 = c(x^2) of a
    supersingular curve, with one root moved to infinity."""
    F = QuadField.of(p)
    n = p + 1
    X = Poly.x(F)
    for t in range(1, 4 * p):
        f = ((X + t) ** 3 + (X + t)).compose(X * X)
        try:
            C = Genus2Curve(f)
        except Exception:
            continue
        rs = roots(f)
        if len(rs) < 6:
            continue
        Q = ModelChange.moving_to_infinity(C, rs[0]).target
        if all(scalar_mul(n, random_divisor(Q, s)).is_identity() for s in range(4)):
            return Q
    raise RuntimeError(f"no superspecial double cover found for p = {p}")


def random_quintic(F: QuadField, rng, lead=None) -> Genus2Curve:
    """y^2 = lead * prod (x - r_i) for five distinct random r_i in F_p."""
    rs = rng.sample(range(F.p), 5)
    if lead is None:
        lead = F(rng.randrange(1, F.p), rng.randrange(F.p))
    return Genus2Curve(Poly.from_roots(F, [F(r) for r in rs], lead))


def random_torsion(E, n: int, m: int, rng):
    """A random point of exact order m on E (m | n, E(F_{p^2}) = (Z/n)^2)."""
    while True:
        P = E.random_point(rng) * (n // m)
        if all(not (P * (m // q)).is_zero() for q in _prime_factors(m)):
            return P


def _prime_factors(m: int):
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


# -- tampered signatures ------------------------------------------------------------

def fingerprint_flip(pp, sig, rng):
    """Move the signature along a random (l_M, l_M)-isogeny: the fingerprint
    changes and the points follow, so the result stays well formed."""
    n = pp.exponent
    l = pp.field.l_M
    A = uds.surface_from_fingerprint(sig.fpAM, n)
    while True:
        gens = [ProductPoint(random_torsion(A.E1, n, l, rng), A.E2.O),
                ProductPoint(A.E1.O, random_torsion(A.E2, n, l, rng))]
        chain = chain_from_generators(A, gens, l, 1, n)
        if chain.codomain.fingerprint() != sig.fpAM:
            return uds.Signature(chain.codomain.fingerprint(), tuple(chain(P) for P in sig.pushedC_AM))


def point_substitution(pp, sig, rng):
    """Same fingerprint, four fresh points of exact order l_C^e_C."""
    n = pp.exponent
    N = pp.basisC.N
    A = uds.surface_from_fingerprint(sig.fpAM, n)
    while True:
        pts = tuple(ProductPoint(random_torsion(A.E1, n, N, rng), random_torsion(A.E2, n, N, rng))
                    for _ in range(4))
        cand = uds.Signature(sig.fpAM, pts)
        if cand != sig:
            return cand


def replay_message(pp, sk, message: bytes, rng) -> bytes:
    """Another message on which the signature of ``message`` is invalid.

    Different hash scalars can still describe the same subgroup (there are
    only a handful of subgroups at toy sizes), in which case the old
    signature stays valid; such messages are skipped."""
    sig = uds.sign(pp, sk, message)
    while True:
        other = b"replay %d" % rng.getrandbits(48)
        if uds.sign(pp, sk, other) != sig:
            return other


TAMPERS = ("fingerprint", "points", "replay")


def tampered_pair(pp, sk, kind: str, seed: int):
    """(message, signature) that must not verify under ``sk``."""
    rng = random.Random(f"tamper:{kind}:{seed}")
    message = b"tamper target %d" % seed
    sig = uds.sign(pp, sk, message)
    if kind == "fingerprint":
        return message, fingerprint_flip(pp, sig, rng)
    if kind == "points":
        return message, point_substitution(pp, sig, rng)
    if kind == "replay":
        return replay_message(pp, sk, message, rng), sig
    raise ValueError(kind)


# -- exhaustive torsion tables ------------------------------------------------------

def torsion_elements(curve: Genus2Curve, l: int, seed: int = 0):
    """All of J[l] as a dict coordinate-tuple -> divisor, from a basis of J[l]."""
    import itertools

    from g2uds.kernels import torsion_basis
    from g2uds.surfaces import JacobianSurface

    B = torsion_basis(JacobianSurface(curve), l, 1, curve.F.p + 1, seed=seed)
    out = {}
    for coords in itertools.product(range(l), repeat=4):
        out[coords] = B.combine(coords)
    return out


def weierstrass_subset(D, branch):
    """The even subset of the six branch points (index 5 = infinity) attached
    to a 2-torsion class on a quintic model."""
    if D.is_identity():
        return frozenset()
    idx = frozenset(i for i, r in enumerate(branch) if D.u(r).is_zero())
    return idx | {5} if len(idx) % 2 else idx


def exhaustive_pairing_check(curve: Genus2Curve, m: int, rng=None):
    """Evaluate the m-Weil pairing over J[m] x J[m] and check every law by
    table lookup.  For m = 2 all ordered pairs are computed and compared with
    the Weierstrass-subset formula (-1)^|S cap T|; for m = 3 the upper
    triangle is computed and antisymmetry is sampled on reversed pairs.

    Returns a dict of booleans plus the number of pairings evaluated."""
    from g2uds.jacobian import weil_pairing

    rng = rng or random.Random(0)
    els = torsion_elements(curve, m)
    keys = sorted(els)
    F = curve.F
    one = F.one
    table = {}
    calls = 0

    def add(a, b):
        return tuple((x + y) % m for x, y in zip(a, b))

    def neg(a):
        return tuple(-x % m for x in a)

    for i, a in enumerate(keys):
        for b in keys[i:] if m > 2 else keys:
            table[a, b] = weil_pairing(els[a], els[b], m)
            calls += 1
    if m > 2:
        for i, a in enumerate(keys):
            for b in keys[i + 1:]:
                table[b, a] = table[a, b].inverse()
    res = {"calls": calls}
    res["roots_of_unity"] = all(z**m == one for z in table.values())
    res["alternating"] = all(table[a, a] == one for a in keys)
    res["bilinear"] = all(table[add(a, a2), b] == table[a, b] * table[a2, b]
                          for a in keys for a2 in keys for b in keys)
    res["nondegenerate"] = all(any(table[a, b] != one for b in keys) for a in keys if any(a))
    if m == 2:
        res["antisymmetric"] = all(table[a, b] * table[b, a] == one for a in keys for b in keys)
        branch = roots(curve.f)
        subs = {k: weierstrass_subset(els[k], branch) for k in keys}
        res["subset_formula"] = all(
            table[a, b] == (one if len(subs[a] & subs[b]) % 2 == 0 else -one)
            for a in keys for b in keys)
        res["sixteen_distinct"] = len(set(subs.values())) == 16
    else:
        sample = [(rng.choice(keys), rng.choice(keys)) for _ in range(200)]
        res["antisymmetric"] = all(
            weil_pairing(els[b], els[a], m) * table[a, b] == one for a, b in sample)
        res["calls"] += len(sample)
        # the coordinates came from a basis; the group law must agree with them
        res["coordinates"] = all(els[add(a, b)] == els[a] + els[b] and els[neg(a)] == -els[a]
                                 for a, b in sample)
    return res


# -- kernels ------------------------------------------------------------------------

def random_gl3(N: int, l: int, rng):
    """A random 3x3 matrix invertible modulo N = l^e."""
    while True:
        M = [[rng.randrange(N) for _ in range(3)] for _ in range(3)]
        det = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
               - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
               + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))
        if det % l:
            return M


def change_generators(scalars, N: int, l: int, rng):
    """Twelve scalars describing the same subgroup through other generators."""
    rows = [scalars[0:4], scalars[4:8], scalars[8:12]]
    M = random_gl3(N, l, rng)
    new = [[sum(M[i][k] * rows[k][j] for k in range(3)) % N for j in range(4)] for i in range(3)]
    return tuple(x for r in new for x in r)


# -- random wire objects --------------------------------------------------------------
# Decoders check structure (field, curve membership, canonical forms) but not
# pairings or orders, so cheap random objects exercise every code path.

def random_elliptic(F, rng):
    from g2uds.elliptic import EllipticCurve

    while True:
        try:
            return EllipticCurve(F.random(rng), F.random(rng))
        except ValueError:
            continue


def random_product(F, rng):
    from g2uds.surfaces import ProductSurface

    return ProductSurface(random_elliptic(F, rng), random_elliptic(F, rng))


def random_product_points(A, k, rng):
    return tuple(ProductPoint(A.E1.random_point(rng), A.E2.random_point(rng)) for _ in range(k))


def random_fingerprint(F, rng, kind=None):
    from g2uds.invariants import Fingerprint

    kind = kind or rng.choice(("prod", "jac"))
    if kind == "prod":
        return Fingerprint("prod", tuple(sorted((F.random(rng), F.random(rng)), key=lambda v: v.key())))
    return Fingerprint("jac", tuple(F.random(rng) for _ in range(rng.choice((3, 6)))))


def random_basis(F, l, e, rng):
    from g2uds.kernels import TorsionBasis

    A = random_product(F, rng)
    omega = [[rng.randrange(l**e) for _ in range(4)] for _ in range(4)]
    return TorsionBasis(A, list(random_product_points(A, 4, rng)), l, e, F.random(rng), omega)


def random_wire_object(kind: str, p: int, rng):
    """A structurally valid object of the given wire kind over F_{p^2}."""
    from g2uds import wire

    fp = field_params(p)
    F = fp.field
    if kind == "params":
        bases = [random_basis(F, l, e, rng) for l, e in ((fp.l_A, fp.e_A), (fp.l_M, fp.e_M), (fp.l_C, fp.e_C))]
        return uds.PublicParams(fp, random_product(F, rng), *bases, hash_id="sha256-ctr",
                                rounds=rng.randrange(0, 200))
    if kind == "pubkey":
        A = random_product(F, rng)
        return uds.PublicKey(random_fingerprint(F, rng, "prod"), random_product_points(A, 4, rng))
    if kind == "privkey":
        return uds.PrivateKey(tuple(rng.randrange(fp.N_A) for _ in range(12)))
    if kind == "signature":
        A = random_product(F, rng)
        return uds.Signature(random_fingerprint(F, rng, "prod"), random_product_points(A, 4, rng))
    if kind == "commitment":
        A = random_product(F, rng)
        fps = [random_fingerprint(F, rng) for _ in range(4)]
        return uds.Commitment(*fps, random_product_points(A, 3, rng))
    if kind == "response":
        if rng.randrange(2):
            return uds.Response(0, scalars=tuple(rng.randrange(fp.N_C) for _ in range(12)))
        A = random_product(F, rng)
        return uds.Response(1, points=random_product_points(A, 3, rng))
    if kind == "transcript":
        recs = []
        for i in range(rng.randrange(0, 6)):
            body = bytes(rng.getrandbits(8) for _ in range(rng.randrange(0, 40)))
            recs.append(wire.Record(i // 4, 1 + i % 4, body))
        return wire.Transcript(p, recs)
    raise ValueError(kind)


WIRE_KINDS = ("params", "pubkey", "privkey", "signature", "commitment", "response", "transcript")


def wire_equal(a, b) -> bool:
    from g2uds import wire

    if isinstance(a, wire.Transcript):
        return isinstance(b, wire.Transcript) and a.p == b.p and a.records == b.records
    return a == b


def wire_roundtrip(kind: str, p: int, count: int, seed: int = 0):
    """Encode/decode ``count`` random objects; returns the number that came
    back equal and re-encoded to identical bytes."""
    from g2uds import wire

    rng = random.Random(f"wire:{kind}:{p}:{seed}")
    good = 0
    for _ in range(count):
        obj = random_wire_object(kind, p, rng)
        data = wire.encode(obj, p=p)
        back = wire.decode(kind, data)
        if wire_equal(obj, back) and wire.encode(back, p=p) == data:
            good += 1
    return good


# -- product kernels against schoolbook arithmetic -----------------------------------

def _naive_cyclic_subgroups(F, a, pts, N, l):

    out = set()
    for P in pts:
        if P is not None and nv.ec_mul(F, a, P, N // l) is not None:
            out.add(frozenset(nv.cyclic_closure(F, a, P)))
    return out


def _naive_j(F, curve, subgroup):

    a, b = curve
    A, B = nv.velu_codomain(F, a, b, list(subgroup))
    return nv.ec_j(F, A, B)


def product_kernels_exhaustive(pp):
    """Every product-form (N_A, N_A) kernel found by naive enumeration of
    A[N_A], matched against the engine's candidate kernels.

    Returns (naive count, engine count, bijective, j-pairs agree)."""
    from g2uds.chains import build_chain
    from g2uds.kernels import kernel_from_scalars
    from g2uds.oracles.brute import cssi_candidates, enumerate_group, naive_subgroup

    basis = pp.basisA
    N, l = basis.N, basis.l
    F = nv.NaiveField(pp.field.p)
    G = enumerate_group(pp.surface)
    tors = G.torsion(N)
    cyc = [_naive_cyclic_subgroups(F, c[0], pts, N, l) for c, pts in zip(G.curves, tors)]
    naive = {}
    for S1 in cyc[0]:
        for S2 in cyc[1]:
            group = frozenset((x, y) for x in S1 for y in S2)
            j = sorted((_naive_j(F, G.curves[0], S1), _naive_j(F, G.curves[1], S2)))
            naive[group] = j
    engine = {}
    for s in cssi_candidates(basis):
        K = kernel_from_scalars(s, basis, require_product_form=True)
        group = naive_subgroup(K.generators, G.curves, pp.field.p)
        fp = build_chain(pp.surface, K, pp.exponent).codomain.fingerprint()
        engine[group] = [v.key() for v in fp.values]
    bijective = set(engine) == set(naive)
    agree = bijective and all(engine[g] == naive[g] for g in naive)
    return len(naive), len(engine), bijective, agree


def product_kernels_sampled(pp, count, rng):
    """For random candidate kernels: the naive closure of the three kernel
    generators equals the product of the naive cyclic closures of the two
    factor generators, and naive Velu gives the engine's j-pair."""
    from g2uds.chains import build_chain
    from g2uds.kernels import kernel_from_scalars
    from g2uds.oracles.brute import cssi_candidates, curve_tuple, ec_tuple, naive_subgroup

    basis = pp.basisA
    F = nv.NaiveField(pp.field.p)
    curves = (curve_tuple(pp.surface.E1), curve_tuple(pp.surface.E2))
    cands = list(cssi_candidates(basis))
    ok = 0
    for s in rng.sample(cands, count):
        K = kernel_from_scalars(s, basis, require_product_form=True)
        G1, G2 = K.factor_generators()
        S1 = frozenset(nv.cyclic_closure(F, curves[0][0], ec_tuple(G1.P1)))
        S2 = frozenset(nv.cyclic_closure(F, curves[1][0], ec_tuple(G2.P2)))
        group = naive_subgroup(K.generators, curves, pp.field.p)
        if group != frozenset((x, y) for x in S1 for y in S2):
            continue
        j = sorted((_naive_j(F, curves[0], S1), _naive_j(F, curves[1], S2)))
        fp = build_chain(pp.surface, K, pp.exponent).codomain.fingerprint()
        ok += [v.key() for v in fp.values] == j
    return ok, len(cands)


# -- Richelot helpers -----------------------------------------------------------------

def dual_composition(H, step, rng, count=50):
    """Check dual(step(D)) = [2]D for ``count`` random D, transporting the
    result back to H through the unique curve isomorphism that makes it work
    on the first sample.  Returns the number of divisors compared."""
    ds = dual_step(step)
    isos = find_isomorphisms(ds.codomain.curve, H)
    assert isos, "dual codomain is not isomorphic to the domain"

    def transport(iso, E):
        U, V = iso.pair(E.u, E.v)
        return MumfordDivisor(H, U, V)

    chosen = None
    compared = 0
    attempts = 0
    while compared < count:
        attempts += 1
        assert attempts < 3 * count
        D = random_divisor(H, rng)
        E = ds(step(D))
        if E.u.degree() != 2:
            continue
        if chosen is None:
            good = []
            for iso in isos:
                try:
                    if transport(iso, E) == 2 * D:
                        good.append(iso)
                except Degenerate:
                    pass
            assert len(good) == 1
            chosen = good[0]
        try:
            img = transport(chosen, E)
        except Degenerate:
            continue
        assert img == 2 * D
        compared += 1
    return compared


def oracle_codomain_invariants(F, S):
    N = nv.NaiveField(F.p)
    G = [[c.key() for c in g.padded(3)] for g in S.G]
    lead = S.lead.key()
    G[0] = [N.mul(lead, c) for c in G[0]]
    delta, coeffs = nv.richelot_codomain(N, *G)
    return delta, coeffs


def dependent_splitting(F, rng):
    """A quintic y^2 = lead G1 G2 G3 with G3 = G2 + alpha G1 (delta = 0)."""
    X = Poly.x(F)
    while True:
        r1, a, b, al = (F(rng.randrange(F.p)) for _ in range(4))
        G1 = X - r1
        G2 = (X - a) * (X - b)
        G3 = G2 + G1 * al
        lead = F(rng.randrange(1, F.p), rng.randrange(F.p))
        f = G1 * G2 * G3 * lead
        try:
            H = Genus2Curve(f)
        except Exception:
            continue
        return H, QuadraticSplitting((G1, G2, G3), lead)




# -- command line ---------------------------------------------------------------------

def shape_args(p: int):
    s = SHAPES[p]
    return ["--lA", str(s["l_A"]), "--eA", str(s["e_A"]), "--lM", str(s["l_M"]), "--eM", str(s["e_M"]),
            "--lC", str(s["l_C"]), "--eC", str(s["e_C"])]


def cli_process(*args, stdin=None, stdout=None):
    import subprocess
    import sys

    return subprocess.Popen([sys.executable, "-m", "g2uds.cli", *args], stdin=stdin,
                            stdout=stdout if stdout is not None else subprocess.PIPE,
                            stderr=subprocess.PIPE)


def cli_session(cmd, files, sig, transport="stdio", rounds=None, seed=3, timeout=600):
    """Run signer and verifier as two processes.  With ``stdio`` each one's
    stdout is piped into the other's stdin.  Returns (signer exit, verifier
    exit, signer stderr, verifier stderr)."""
    import os

    common = ["--params", files["params"], "--pub", files["pub"], "--msg-file", files["msg"], "--sig", sig,
              "--transport", transport]
    if rounds is not None:
        common += ["--rounds", str(rounds)]
    s_args = [cmd, "--role", "signer", "--priv", files["priv"], *common]
    v_args = [cmd, "--role", "verifier", "--seed", str(seed), *common]
    if transport == "stdio":
        s_in, v_out = os.pipe()
        v_in, s_out = os.pipe()
        signer = cli_process(*s_args, stdin=s_in, stdout=s_out)
        verifier = cli_process(*v_args, stdin=v_in, stdout=v_out)
        for fd in (s_in, v_out, v_in, s_out):
            os.close(fd)
    else:
        signer = cli_process(*s_args)
        verifier = cli_process(*v_args)
    s_err = signer.communicate(timeout=timeout)[1].decode()
    v_err = verifier.communicate(timeout=timeout)[1].decode()
    return signer.returncode, verifier.returncode, s_err, v_err


def cli_prepare(directory, p: int, rounds: int = 32):
    """setup / keygen / sign through the command line; returns the file map."""
    from g2uds.cli import cli_main

    f = {k: str(directory / k) for k in ("params", "pub", "priv", "msg", "sig")}
    (directory / "msg").write_bytes(b"a message on disk\n")
    codes = [
        cli_main(["setup", *shape_args(p), "--seed", "0", "--rounds", str(rounds), "--out", f["params"]]),
        cli_main(["keygen", "--params", f["params"], "--seed", "1", "--pub", f["pub"], "--priv", f["priv"]]),
        cli_main(["sign", "--params", f["params"], "--priv", f["priv"], "--msg-file", f["msg"],
                  "--out", f["sig"]]),
    ]
    if codes != [0, 0, 0]:
        raise RuntimeError(f"command line pipeline failed: {codes}")
    return f
