"""The undeniable signature scheme: setup, key generation, signing, signer-side
checking and the commit / challenge / response / verdict rounds of the
confirmation (CON) and disavowal (DIS) protocols.

All protocol surfaces are products of elliptic curves on canonical models,
so a product fingerprint determines the surface on which transmitted points
live.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

from .chains import CanonicalStep, Chain, build_chain, chain_from_generators
from .elliptic import canonical_model
from .errors import (BadOrder, BrokenChain, DisavowalImpossible, InternalError,
                     MalformedResponse, MalformedSignature, NotMaximalIsotropic,
                     OutOfOrder, SignatureActuallyValid, SignatureInvalid,
                     TrivialKernel, UnsupportedKernel)
from .field import FieldParams
from .invariants import Fingerprint
from .kernels import KernelSpec, TorsionBasis, kernel_from_scalars, sample_kernel, torsion_basis
from .surfaces import ProductPoint, ProductSurface, Surface
from .walk import default_walk_length, double_cover, random_walk, supersingular_curve

HASH_ID = "sha256-ctr"
MAX_HASH_RETRIES = 1 << 16


# -- data types ----------------------------------------------------------------

@dataclass(eq=False)
class PublicParams:
    field: FieldParams
    surface: ProductSurface
    basisA: TorsionBasis
    basisM: TorsionBasis
    basisC: TorsionBasis
    hash_id: str = HASH_ID
    rounds: int = 32
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def exponent(self) -> int:
        return self.field.exponent

    def __eq__(self, other):
        return isinstance(other, PublicParams) and self._tuple() == other._tuple()

    def _tuple(self):
        return (self.field, self.surface, self.basisA, self.basisM, self.basisC, self.hash_id, self.rounds)

    @property
    def F(self):
        return self.surface.F


@dataclass(frozen=True)
class PrivateKey:
    a: tuple


@dataclass(frozen=True, eq=False)
class PublicKey:
    fpA: Fingerprint
    pushedC: tuple

    def __eq__(self, other):
        return (isinstance(other, PublicKey) and self.fpA == other.fpA
                and tuple(self.pushedC) == tuple(other.pushedC))


@dataclass(frozen=True, eq=False)
class Signature:
    fpAM: Fingerprint
    pushedC_AM: tuple

    def __eq__(self, other):
        return (isinstance(other, Signature) and self.fpAM == other.fpAM
                and tuple(self.pushedC_AM) == tuple(other.pushedC_AM))

    def __hash__(self):
        return hash((self.fpAM, tuple(self.pushedC_AM)))


@dataclass(frozen=True, eq=False)
class Commitment:
    fpC: Fingerprint
    fpAC: Fingerprint
    fpMC: Fingerprint
    fpAMC: Fingerprint
    kerCMC: tuple

    def fingerprints(self):
        return (self.fpC, self.fpAC, self.fpMC, self.fpAMC)

    def __eq__(self, other):
        return (isinstance(other, Commitment) and self.fingerprints() == other.fingerprints()
                and tuple(self.kerCMC) == tuple(other.kerCMC))


@dataclass(frozen=True, eq=False)
class Response:
    """b = 0: the twelve commitment scalars; b = 1: three points on J_C."""

    b: int
    scalars: tuple = ()
    points: tuple = ()

    def __eq__(self, other):
        return (isinstance(other, Response) and self.b == other.b
                and tuple(self.scalars) == tuple(other.scalars)
                and tuple(self.points) == tuple(other.points))


# -- helpers -------------------------------------------------------------------

def surface_from_fingerprint(fp: Fingerprint, exponent: int) -> ProductSurface:
    """The canonical product with the given (sorted) pair of j-invariants."""
    if fp.kind != "prod" or len(fp.values) != 2:
        raise MalformedSignature("protocol surfaces are elliptic products")
    j1, j2 = fp.values
    try:
        return ProductSurface(canonical_model(j1, exponent), canonical_model(j2, exponent))
    except ValueError as exc:
        raise MalformedSignature(str(exc)) from exc


def _fp(chain: Chain) -> Fingerprint:
    return chain.codomain.fingerprint()


def _combine(points, rows, N):
    out = []
    for r in rows:
        acc = None
        for c, P in zip(r, points):
            c %= N
            if c == 0:
                continue
            T = P * c
            acc = T if acc is None else acc + T
        if acc is None:
            acc = points[0] * 0
        out.append(acc)
    return out


def _pushed_kernel(K: KernelSpec, images):
    """Factor generators of phi(K) from the images phi(B_i) of its basis."""
    return _combine(images, K.factor_rows, K.N)


def _quotient(A: Surface, gens, l: int, e: int, exponent: int) -> Chain:
    return chain_from_generators(A, gens, l, e, exponent)


def _cache(pp: PublicParams, key, fn):
    c = pp._cache
    if key not in c:
        if len(c) > 4096:
            c.clear()
        c[key] = fn()
    return c[key]


# -- setup -----------------------------------------------------------------------

def setup(params: FieldParams, seed=0, rounds: int = 32, walk_steps: int | None = None) -> PublicParams:
    """Public parameters: a random superspecial product surface and bases of
    its l_A^e_A-, l_M^e_M- and l_C^e_C-torsion."""
    F = params.field
    n = params.exponent
    rng = random.Random(f"setup:{seed}")
    E0 = supersingular_curve(F, n)
    start = double_cover(E0, n)
    steps = default_walk_length(params.p) if walk_steps is None else walk_steps
    end, _ = random_walk(start, steps, rng, endpoint="product")
    surface = CanonicalStep(end, n).codomain
    basisA = torsion_basis(surface, params.l_A, params.e_A, n, seed=rng)
    basisM = torsion_basis(surface, params.l_M, params.e_M, n, seed=rng)
    basisC = torsion_basis(surface, params.l_C, params.e_C, n, seed=rng)
    return PublicParams(params, surface, basisA, basisM, basisC, HASH_ID, rounds)


# -- hashing -------------------------------------------------------------------

def _limbs(message: bytes, retry: int, N: int):
    return tuple(int.from_bytes(hashlib.sha256(i.to_bytes(4, "big") + retry.to_bytes(4, "big") + message)
                                .digest(), "big") % N for i in range(12))


def _cyclic_block(rows, lo, N):
    # necessary condition for a product-form kernel: all 2x2 minors of the
    # factor block vanish mod N
    a = [(r[lo], r[lo + 1]) for r in rows]
    for i in range(3):
        for j in range(i + 1, 3):
            if (a[i][0] * a[j][1] - a[i][1] * a[j][0]) % N:
                return False
    return True


def hash_kernel(pp: PublicParams, message: bytes) -> KernelSpec:
    def compute():
        N = pp.basisM.N
        for retry in range(MAX_HASH_RETRIES):
            s = _limbs(message, retry, N)
            rows = [s[0:4], s[4:8], s[8:12]]
            if not (_cyclic_block(rows, 0, N) and _cyclic_block(rows, 2, N)):
                continue
            try:
                return kernel_from_scalars(s, pp.basisM, require_product_form=True)
            except (NotMaximalIsotropic, TrivialKernel):
                continue
        raise InternalError("hash rejection loop exhausted")

    return _cache(pp, ("hash", bytes(message)), compute)


def hash_to_scalars(pp: PublicParams, message: bytes) -> tuple:
    return hash_kernel(pp, message).scalars


# -- keys and signatures ---------------------------------------------------------

def private_kernel(pp: PublicParams, sk: PrivateKey) -> KernelSpec:
    return _cache(pp, ("ka", sk.a), lambda: kernel_from_scalars(sk.a, pp.basisA, require_product_form=True))


def keygen(pp: PublicParams, seed=0):
    rng = random.Random(f"keygen:{seed}")
    K = sample_kernel(pp.basisA, rng, require_product_form=True)
    sk = PrivateKey(K.scalars)
    pp._cache[("ka", sk.a)] = K
    return public_key(pp, sk), sk


def _chain_A(pp, sk):
    return _cache(pp, ("chainA", sk.a),
                  lambda: build_chain(pp.surface, private_kernel(pp, sk), pp.exponent))


def public_key(pp: PublicParams, sk: PrivateKey) -> PublicKey:
    chain = _chain_A(pp, sk)
    return PublicKey(_fp(chain), tuple(chain(C) for C in pp.basisC.points))


def _chain_M(pp, message):
    return _cache(pp, ("chainM", bytes(message)),
                  lambda: build_chain(pp.surface, hash_kernel(pp, message), pp.exponent))


def _chain_AM(pp, sk, message):
    """phi^M_AM: J_M -> J_AM with kernel phi_M(K_A)."""
    def compute():
        KA = private_kernel(pp, sk)
        cM = _chain_M(pp, message)
        gens = [cM(P) for P in KA.factor_generators()]
        return _quotient(cM.codomain, gens, pp.field.l_A, pp.field.e_A, pp.exponent)

    return _cache(pp, ("chainAM", sk.a, bytes(message)), compute)


def sign(pp: PublicParams, sk: PrivateKey, message: bytes) -> Signature:
    def compute():
        cM = _chain_M(pp, message)
        cAM = _chain_AM(pp, sk, message)
        pts = tuple(cAM(cM(C)) for C in pp.basisC.points)
        return Signature(_fp(cAM), pts)

    return _cache(pp, ("sig", sk.a, bytes(message)), compute)


def sign_other_order(pp: PublicParams, sk: PrivateKey, message: bytes) -> Fingerprint:
    """Fingerprint of J_AM reached through J_A: J_A / <phi_A(K_M)>."""
    cA = _chain_A(pp, sk)
    KM = hash_kernel(pp, message)
    gens = [cA(P) for P in KM.factor_generators()]
    return _fp(_quotient(cA.codomain, gens, pp.field.l_M, pp.field.e_M, pp.exponent))


def signature_bytes(sig: Signature) -> bytes:
    return sig.fpAM.to_bytes() + b"".join(P.to_bytes() for P in sig.pushedC_AM)


def check(pp: PublicParams, sk: PrivateKey, message: bytes, sig: Signature) -> int:
    try:
        return int(signature_bytes(sign(pp, sk, message)) == signature_bytes(sig))
    except Exception:
        return 0


def validate_signature(pp: PublicParams, sig: Signature) -> ProductSurface:
    """Structural checks: product fingerprint, four points on the canonical
    surface, each killed by l_C^e_C.  Returns the surface."""
    if not isinstance(sig, Signature) or len(sig.pushedC_AM) != 4:
        raise MalformedSignature("a signature carries four points")
    A = surface_from_fingerprint(sig.fpAM, pp.exponent)
    N, l = pp.basisC.N, pp.basisC.l
    for P in sig.pushedC_AM:
        if not A.contains(P):
            raise MalformedSignature("signature point is not on the signed surface")
        if not (P * N).is_identity() or (P * (N // l)).is_identity():
            raise MalformedSignature(f"signature point does not have exact order {N}")
    return A


# -- commitments -------------------------------------------------------------------

def _quotient_fp_or_none(A, gens, l, e, exponent):
    try:
        return _fp(_quotient(A, gens, l, e, exponent))
    except (UnsupportedKernel, BrokenChain, BadOrder, InternalError):
        return None


def _fp_AC(pp, pk: PublicKey, KC: KernelSpec):
    JA = surface_from_fingerprint(pk.fpA, pp.exponent)
    gens = _pushed_kernel(KC, list(pk.pushedC))
    for g in gens:
        JA.require(g)
    return _fp(_quotient(JA, gens, pp.field.l_C, pp.field.e_C, pp.exponent))


def _fp_MC(pp, message, KC: KernelSpec):
    cM = _chain_M(pp, message)
    gens = [cM(P) for P in KC.factor_generators()]
    return _fp(_quotient(cM.codomain, gens, pp.field.l_C, pp.field.e_C, pp.exponent))


def _fp_sigC(pp, sig: Signature, KC: KernelSpec):
    """J_AM / <phi_AM-side image of K_C> computed from signature points; None when
    those points do not describe a valid kernel."""
    try:
        A = validate_signature(pp, sig)
    except MalformedSignature:
        return None
    gens = _pushed_kernel(KC, list(sig.pushedC_AM))
    return _quotient_fp_or_none(A, gens, pp.field.l_C, pp.field.e_C, pp.exponent)


@dataclass
class SessionState:
    """Signer-side state of one commit/challenge/response round."""

    role: str
    mode: str
    round: int
    c: tuple
    phase: str
    transcript: list = field(default_factory=list)
    _secret: dict = field(default_factory=dict, repr=False)


def _commit(pp, sk, pk, message, sig_for_amc: Signature, rng, mode, falsified=None, max_tries=256):
    KM = hash_kernel(pp, message)
    for _ in range(max_tries):
        KC = sample_kernel(pp.basisC, rng, require_product_form=True)
        fpAMC = _fp_sigC(pp, sig_for_amc, KC)
        if fpAMC is None:
            raise InternalError("honest signature does not give a valid kernel")
        if falsified is not None:
            # the verifier would see no difference for this c; draw again
            if _fp_sigC(pp, falsified, KC) == fpAMC:
                continue
        cC = build_chain(pp.surface, KC, pp.exponent)
        kerCMC = tuple(cC(P) for P in KM.generators)
        com = Commitment(_fp(cC), _fp_AC(pp, pk, KC), _fp_MC(pp, message, KC), fpAMC, kerCMC)
        state = SessionState("signer", mode, 0, KC.scalars, "challenge")
        state._secret = {"chainC": cC, "KC": KC, "KA": private_kernel(pp, sk)}
        state.transcript.append(("commit", com))
        return com, state
    raise DisavowalImpossible("no commitment separates the claimed signature from the honest one")


def con_commit(pp: PublicParams, sk: PrivateKey, message: bytes, sig: Signature, seed=0, pk: PublicKey | None = None):
    if not check(pp, sk, message, sig):
        raise SignatureInvalid("signature does not verify; run the disavowal protocol")
    rng = seed if isinstance(seed, random.Random) else random.Random(f"commit:{seed}")
    pk = pk or public_key(pp, sk)
    return _commit(pp, sk, pk, message, sig, rng, "CON")


def dis_commit(pp: PublicParams, sk: PrivateKey, message: bytes, sig: Signature, seed=0,
               pk: PublicKey | None = None, max_tries: int = 256):
    validate_signature(pp, sig)
    if check(pp, sk, message, sig):
        raise SignatureActuallyValid("the signature is valid; run the confirmation protocol")
    rng = seed if isinstance(seed, random.Random) else random.Random(f"commit:{seed}")
    pk = pk or public_key(pp, sk)
    honest = sign(pp, sk, message)
    return _commit(pp, sk, pk, message, honest, rng, "DIS", falsified=sig, max_tries=max_tries)


def _respond(state: SessionState, b: int) -> Response:
    if state.phase != "challenge":
        raise OutOfOrder(f"cannot respond in phase {state.phase!r}")
    if b not in (0, 1):
        raise ValueError("challenge must be a bit")
    state.phase = "done"
    if b == 0:
        resp = Response(0, scalars=tuple(state.c))
    else:
        cC = state._secret["chainC"]
        KA = state._secret["KA"]
        resp = Response(1, points=tuple(cC(P) for P in KA.generators))
    state.transcript.append(("challenge", b))
    state.transcript.append(("response", resp))
    return resp


def con_respond(state: SessionState, b: int) -> Response:
    return _respond(state, b)


def dis_respond(state: SessionState, b: int) -> Response:
    return _respond(state, b)


def _check_opening(pp, pk, message, com: Commitment, resp: Response):
    """b = 1 consistency: the revealed kernel and kerCMC lead from J_C to the
    committed J_AC, J_MC and, along both sides of the square, to J_AMC."""
    if resp.b != 1 or len(resp.points) != 3 or len(com.kerCMC) != 3:
        raise MalformedResponse("b = 1 response carries three points")
    n = pp.exponent
    f = pp.field
    JC = surface_from_fingerprint(com.fpC, n)
    for P in tuple(resp.points) + tuple(com.kerCMC):
        if not JC.contains(P):
            raise MalformedResponse("revealed point is not on J_C")
    if any(not (P * f.N_A).is_identity() for P in resp.points):
        return False
    if any(not (P * f.N_M).is_identity() for P in com.kerCMC):
        return False
    try:
        to_AC = _quotient(JC, resp.points, f.l_A, f.e_A, n)
        to_MC = _quotient(JC, com.kerCMC, f.l_M, f.e_M, n)
    except (UnsupportedKernel, BrokenChain, BadOrder):
        return False
    if _fp(to_AC) != com.fpAC or _fp(to_MC) != com.fpMC:
        return False
    side1 = _quotient_fp_or_none(to_AC.codomain, [to_AC(P) for P in com.kerCMC], f.l_M, f.e_M, n)
    side2 = _quotient_fp_or_none(to_MC.codomain, [to_MC(P) for P in resp.points], f.l_A, f.e_A, n)
    return side1 == com.fpAMC and side2 == com.fpAMC


def _reveal_kernel(pp, resp: Response) -> KernelSpec | None:
    if resp.b != 0 or len(resp.scalars) != 12:
        raise MalformedResponse("b = 0 response carries twelve scalars")
    try:
        return kernel_from_scalars(resp.scalars, pp.basisC, require_product_form=True)
    except (NotMaximalIsotropic, TrivialKernel):
        return None


def con_verify(pp: PublicParams, pk: PublicKey, message: bytes, sig: Signature,
               com: Commitment, b: int, resp: Response) -> bool:
    if resp.b != b:
        raise MalformedResponse("response does not answer this challenge")
    if b == 1:
        return _check_opening(pp, pk, message, com, resp)
    KC = _reveal_kernel(pp, resp)
    if KC is None:
        return False
    fpC = _fp(build_chain(pp.surface, KC, pp.exponent))
    if fpC != com.fpC or _fp_AC(pp, pk, KC) != com.fpAC or _fp_MC(pp, message, KC) != com.fpMC:
        return False
    fpAMC = _fp_sigC(pp, sig, KC)
    return fpAMC is not None and fpAMC == com.fpAMC


def dis_verify(pp: PublicParams, pk: PublicKey, message: bytes, sig: Signature,
               com: Commitment, b: int, resp: Response) -> bool:
    """True when the round supports the claim that ``sig`` is invalid."""
    if resp.b != b:
        raise MalformedResponse("response does not answer this challenge")
    if b == 1:
        return _check_opening(pp, pk, message, com, resp)
    KC = _reveal_kernel(pp, resp)
    if KC is None:
        return False
    fpC = _fp(build_chain(pp.surface, KC, pp.exponent))
    if fpC != com.fpC or _fp_AC(pp, pk, KC) != com.fpAC or _fp_MC(pp, message, KC) != com.fpMC:
        return False
    fpFC = _fp_sigC(pp, sig, KC)
    return fpFC != com.fpAMC


__all__ = [
    "PublicParams", "PrivateKey", "PublicKey", "Signature", "Commitment", "Response", "SessionState",
    "setup", "hash_to_scalars", "hash_kernel", "keygen", "public_key", "sign", "sign_other_order",
    "check", "validate_signature", "con_commit", "con_respond", "con_verify", "dis_commit",
    "dis_respond", "dis_verify", "surface_from_fingerprint", "signature_bytes", "ProductPoint",
]
