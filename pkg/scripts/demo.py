"""Walk through the scheme once: parameters, keys, a signature, a confirmation
session, a forged signature and its disavowal.

    python3 scripts/demo.py --prime 719 --rounds 16
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

import click

from g2uds import P59, P719, make_params, uds
from g2uds.sessions import SignerEndpoint, VerifierEndpoint, run_interactive
from g2uds.surfaces import ProductPoint

SHAPES = {59: P59, 719: P719}


@dataclass(frozen=True)
class DemoConfig:
    prime: int = 59
    seed: int = 0
    rounds: int = 32
    message: bytes = b"an undeniable statement"


def forge(pp, sig, rng):
    """Keep the surface, swap in other points of the right order."""
    A = uds.surface_from_fingerprint(sig.fpAM, pp.exponent)
    n, N = pp.exponent, pp.basisC.N

    def point(E):
        while True:
            P = E.random_point(rng) * (n // N)
            if not P.is_zero():
                return P

    pts = tuple(ProductPoint(point(A.E1), point(A.E2)) for _ in range(4))
    return uds.Signature(sig.fpAM, pts)


def session(pp, pk, sk, message, sig, mode, cfg):
    signer = SignerEndpoint(pp, sk, message, sig, mode, seed=cfg.seed, pk=pk)
    verifier = VerifierEndpoint(pp, pk, message, sig, mode, seed=cfg.seed)
    return run_interactive(pp, pk, signer, verifier, mode, cfg.rounds)


def run(cfg: DemoConfig) -> None:
    t0 = time.perf_counter()
    fp = make_params(**SHAPES[cfg.prime])
    pp = uds.setup(fp, seed=cfg.seed, rounds=cfg.rounds)
    print(f"p = {fp.p}; J_H = {pp.surface}")
    pk, sk = uds.keygen(pp, seed=cfg.seed)
    print(f"public key surface: {pk.fpA}")
    sig = uds.sign(pp, sk, cfg.message)
    print(f"signature surface:  {sig.fpAM}")
    print(f"signer check: {uds.check(pp, sk, cfg.message, sig)}")
    print(f"CON over {cfg.rounds} rounds: {'accept' if session(pp, pk, sk, cfg.message, sig, 'CON', cfg) else 'reject'}")
    bad = forge(pp, sig, random.Random(cfg.seed))
    print(f"forged signature check: {uds.check(pp, sk, cfg.message, bad)}")
    print(f"DIS over {cfg.rounds} rounds: {'accept' if session(pp, pk, sk, cfg.message, bad, 'DIS', cfg) else 'reject'}")
    print(f"total {time.perf_counter() - t0:.1f} s")


@click.command()
@click.option("--prime", type=click.Choice(["59", "719"]), default="59", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--rounds", type=click.IntRange(min=1), default=32, show_default=True)
@click.option("--message", default="an undeniable statement", show_default=True)
def main(prime, seed, rounds, message):
    run(DemoConfig(int(prime), seed, rounds, message.encode()))


if __name__ == "__main__":
    main()
