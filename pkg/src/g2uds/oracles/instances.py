"""Generators for the hardness-problem instances behind the scheme.

Each instance carries its public data, the hidden witness used to build it
and, where the problem has one, the answer.  Decisional kinds draw the real
or the random branch with probability 1/2.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .. import wire
from ..chains import build_chain, chain_from_generators
from ..errors import FormatError, IllegalQuery
from ..invariants import Fingerprint
from ..kernels import kernel_from_scalars, sample_kernel, torsion_basis
from ..uds import PublicParams

KINDS = ("DSSI", "CSSI", "SSCDH", "SSDDH", "DSSP", "MSSCDH", "MSSDDH", "1MSSCDH", "1MSSDDH")


@dataclass
class ProblemInstance:
    kind: str
    public: dict
    witness: dict = field(default_factory=dict, repr=False)
    answer: object = None
    oracle: object = field(default=None, repr=False, compare=False)


def _kernel(basis, rng):
    return sample_kernel(basis, rng, require_product_form=True)


def _quotient(pp, K):
    return build_chain(pp.surface, K, pp.exponent)


def _pushed_quotient(chain, K, l, e, exponent):
    gens = [chain(P) for P in K.factor_generators()]
    return chain_from_generators(chain.codomain, gens, l, e, exponent)


def random_surface(pp: PublicParams, rng, steps: int = 3):
    """A product surface reached from J_H by ``steps`` random
    (l_A^e_A, l_A^e_A)-steps with freshly drawn torsion bases."""
    f = pp.field
    A = pp.surface
    for _ in range(steps):
        B = torsion_basis(A, f.l_A, f.e_A, pp.exponent, seed=rng)
        A = build_chain(A, _kernel(B, rng), pp.exponent).codomain
    return A


def _am(pp, KA, KM):
    """J_H / <K_A, K_M> through J_M."""
    f = pp.field
    cM = _quotient(pp, KM)
    return _pushed_quotient(cM, KA, f.l_A, f.e_A, pp.exponent).codomain.fingerprint()


def gen_instance(kind: str, pp: PublicParams, seed=0) -> ProblemInstance:
    if kind not in KINDS:
        raise ValueError(f"unknown problem kind {kind!r}")
    rng = random.Random(f"instance:{kind}:{seed}")
    f = pp.field
    n = pp.exponent
    KA = _kernel(pp.basisA, rng)
    cA = _quotient(pp, KA)
    witness = {"a": KA.scalars}

    if kind == "DSSI":
        b = rng.randrange(2)
        other = cA.codomain if b else random_surface(pp, rng)
        if not b:
            witness = {}
        return ProblemInstance(kind, {"fpH": pp.surface.fingerprint(), "fpH2": other.fingerprint()},
                               witness, answer=b)

    if kind == "CSSI":
        pub = {"fpA": cA.codomain.fingerprint(), "pushedM": tuple(cA(M) for M in pp.basisM.points)}
        return ProblemInstance(kind, pub, witness)

    KM = _kernel(pp.basisM, rng)
    cM = _quotient(pp, KM)
    witness["m"] = KM.scalars
    fpAM = _am(pp, KA, KM)
    base = {
        "fpA": cA.codomain.fingerprint(),
        "fpM": cM.codomain.fingerprint(),
        "pushedM": tuple(cA(M) for M in pp.basisM.points),
        "pushedA": tuple(cM(P) for P in pp.basisA.points),
    }

    if kind == "SSCDH":
        return ProblemInstance(kind, base, witness, answer=fpAM)

    def random_c():
        KA2 = _kernel(pp.basisA, rng)
        KM2 = _kernel(pp.basisM, rng)
        witness["a_prime"], witness["m_prime"] = KA2.scalars, KM2.scalars
        return _am(pp, KA2, KM2)

    if kind == "SSDDH":
        b = rng.randrange(2)
        pub = dict(base, last=fpAM if b else random_c())
        return ProblemInstance(kind, pub, witness, answer=b)

    if kind == "DSSP":
        b = rng.randrange(2)
        if b:
            # J_1 = J_0/K_B and phi' the image of phi_A on it
            J1 = cM.codomain
            gens = tuple(cM(P) for P in KA.factor_generators())
            J2 = chain_from_generators(J1, gens, f.l_A, f.e_A, n).codomain
        else:
            J1 = random_surface(pp, rng)
            B = torsion_basis(J1, f.l_A, f.e_A, n, seed=rng)
            K = _kernel(B, rng)
            gens = tuple(K.factor_generators())
            J2 = build_chain(J1, K, n).codomain
        pub = {"phiA": KA.scalars, "fpJ1": cA.codomain.fingerprint(),
               "fpJ1p": J1.fingerprint(), "fpJ2": J2.fingerprint(), "phi_prime": gens}
        return ProblemInstance(kind, pub, witness, answer=b)

    pub = {"fpA": base["fpA"], "fpM": base["fpM"], "kerM": KM.scalars}
    if kind in ("MSSCDH", "1MSSCDH"):
        fpC = fpAM if rng.randrange(2) else random_c()
        pub["fpC"] = fpC
        inst = ProblemInstance(kind, pub, witness, answer=int(fpC == fpAM))
    else:
        pub["fpC"] = random_c()
        inst = ProblemInstance(kind, pub, witness, answer=fpAM)
    if kind.startswith("1"):
        inst.oracle = _side_oracle(pp, KA, pub["fpM"], decisional=kind == "1MSSCDH")
    return inst


def _side_oracle(pp, KA, fpM, decisional: bool):
    """Oracle solving the two-sided problem for any J_M' not isomorphic to J_M."""

    def oracle(m_scalars, fpC=None):
        KM = kernel_from_scalars(m_scalars, pp.basisM, require_product_form=True)
        if _quotient(pp, KM).codomain.fingerprint() == fpM:
            raise IllegalQuery("the oracle refuses surfaces isomorphic to J_M")
        fpAM = _am(pp, KA, KM)
        if decisional:
            return int(fpC == fpAM)
        return fpAM

    return oracle


# -- files: public part and witness sidecar ----------------------------------------------

def _enc_value(v) -> bytes:
    if v is None:
        return b"\x00"
    if isinstance(v, bool) or isinstance(v, int):
        return b"\x01" + wire.enc_int(int(v))
    if isinstance(v, bytes):
        return b"\x02" + wire.enc_bytes(v)
    if isinstance(v, str):
        return b"\x03" + wire.enc_bytes(v.encode())
    if isinstance(v, Fingerprint):
        return b"\x04" + wire.enc_fingerprint(v)
    if isinstance(v, (tuple, list)):
        if v and hasattr(v[0], "P1"):
            return b"\x06" + wire.enc_points(wire._surface_of(v), tuple(v))
        return b"\x05" + len(v).to_bytes(4, "big") + b"".join(_enc_value(x) for x in v)
    raise TypeError(f"cannot encode {type(v).__name__} in an instance file")


def _dec_value(r: wire.Reader):
    tag = r.byte()
    if tag == 0:
        return None
    if tag == 1:
        return r.int()
    if tag == 2:
        return r.blob()
    if tag == 3:
        return r.blob().decode()
    if tag == 4:
        return wire.dec_fingerprint(r)
    if tag == 5:
        return tuple(_dec_value(r) for _ in range(r.u32()))
    if tag == 6:
        return wire.dec_points(r)[1]
    raise FormatError(f"unknown value tag {tag}")


def _enc_dict(d: dict) -> bytes:
    out = len(d).to_bytes(4, "big")
    for k in sorted(d):
        out += wire.enc_bytes(k.encode()) + _enc_value(d[k])
    return out


def _dec_dict(r: wire.Reader) -> dict:
    return {r.blob().decode(): _dec_value(r) for _ in range(r.u32())}


def encode_instance(inst: ProblemInstance, p: int) -> tuple[bytes, bytes]:
    """(instance file, witness sidecar); the answer travels in the sidecar."""
    head = wire.enc_int(p) + wire.enc_bytes(inst.kind.encode())
    public = wire.wrap("instance", head + _enc_dict(inst.public))
    secret = wire.wrap("witness", head + _enc_dict(dict(inst.witness, answer=inst.answer)))
    return public, secret


def decode_instance(public: bytes, witness: bytes | None = None) -> ProblemInstance:
    def parse(data, kind):
        _, payload = wire.unwrap(data, kind)
        r = wire._reader(payload)
        k = r.blob().decode()
        d = _dec_dict(r)
        r.done()
        return k, d

    kind, pub = parse(public, "instance")
    inst = ProblemInstance(kind, pub)
    if witness is not None:
        k2, sec = parse(witness, "witness")
        if k2 != kind:
            raise FormatError("witness belongs to a different problem kind")
        inst.answer = sec.pop("answer", None)
        inst.witness = sec
    return inst


__all__ = ["ProblemInstance", "gen_instance", "random_surface", "KINDS", "encode_instance",
           "decode_instance"]
