"""Challengers for the unforgeability and invisibility games.

An adversary is a callable taking the public key and an oracle object; the
oracle exposes ``sign`` and ``check`` (and, in the invisibility game,
``challenge``).  ``check`` routes a valid pair to the confirmation protocol
and an invalid one to the disavowal protocol, run against an honest
verifier.  The challengers record every query in a transcript and raise
:class:`IllegalQuery` when the adversary breaks a rule of the game.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .. import uds
from ..errors import DisavowalImpossible, IllegalQuery, MalformedSignature
from ..kernels import torsion_basis
from ..sessions import SignerEndpoint, VerifierEndpoint, run_interactive
from .instances import random_surface


@dataclass
class GameOutcome:
    win: bool
    transcript: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)


class _Oracle:
    def __init__(self, pp, pk, sk, rng, check_rounds):
        self.pp, self.pk, self.sk = pp, pk, sk
        self.rng = rng
        self.check_rounds = check_rounds
        self.transcript: list = []
        self.signed: list = []

    def sign(self, message: bytes):
        sig = uds.sign(self.pp, self.sk, bytes(message))
        self.signed.append((bytes(message), sig))
        self.transcript.append(("sign", bytes(message), sig))
        return sig

    def check(self, message: bytes, sig):
        """Returns (bit, protocol verdict)."""
        message = bytes(message)
        try:
            uds.validate_signature(self.pp, sig)
        except MalformedSignature:
            self.transcript.append(("check", message, sig, 0, "malformed"))
            return 0, False
        bit = uds.check(self.pp, self.sk, message, sig)
        mode = "CON" if bit else "DIS"
        seed = self.rng.getrandbits(32)
        signer = SignerEndpoint(self.pp, self.sk, message, sig, mode, seed=seed, pk=self.pk)
        verifier = VerifierEndpoint(self.pp, self.pk, message, sig, mode, seed=seed)
        try:
            verdict = run_interactive(self.pp, self.pk, signer, verifier, mode, self.check_rounds)
        except DisavowalImpossible:
            verdict = False
        self.transcript.append(("check", message, sig, bit, mode, verdict))
        return bit, verdict


def unforgeability_game(adversary, pp, q_s: int, seed=0, check_rounds: int = 4) -> GameOutcome:
    """Key generation, up to ``q_s`` adaptive Sign queries, Check queries
    routed to CON/DIS, then adjudication of the claimed strong forgery."""
    rng = random.Random(f"unforgeability:{seed}")
    pk, sk = uds.keygen(pp, seed=rng.getrandbits(64))

    class Oracle(_Oracle):
        def sign(self, message):
            if len(self.signed) >= q_s:
                raise IllegalQuery(f"more than q_s = {q_s} signing queries")
            return super().sign(message)

    oracle = Oracle(pp, pk, sk, rng, check_rounds)
    forged = adversary(pk, oracle)
    if forged is None:
        return GameOutcome(False, oracle.transcript, {"reason": "no forgery"})
    mu, sigma = bytes(forged[0]), forged[1]
    oracle.transcript.append(("forgery", mu, sigma))
    valid = bool(uds.check(pp, sk, mu, sigma))
    fresh = all(not (m == mu and s == sigma) for m, s in oracle.signed)
    return GameOutcome(valid and fresh, oracle.transcript, {"valid": valid, "fresh": fresh})


def fake_signature(pp, rng) -> uds.Signature:
    """A surface from a fresh random walk and four random points of exact
    order l_C^e_C on it, laid out like an honest signature."""
    f = pp.field
    A = random_surface(pp, rng)
    B = torsion_basis(A, f.l_C, f.e_C, pp.exponent, seed=rng)
    pts = list(B.points)
    if rng.randrange(2):
        pts = pts[2:] + pts[:2]
    return uds.Signature(A.fingerprint(), tuple(pts))


def invisibility_game(adversary, pp, seed=0, check_rounds: int = 4) -> GameOutcome:
    """The adversary gets a real or fake signature on a message of its
    choice and must tell which; it may never sign the challenge message and
    may not Check the challenge pair after receiving it."""
    rng = random.Random(f"invisibility:{seed}")
    pk, sk = uds.keygen(pp, seed=rng.getrandbits(64))
    b = rng.randrange(2)

    class Oracle(_Oracle):
        challenge_pair = None

        def sign(self, message):
            if self.challenge_pair is not None and bytes(message) == self.challenge_pair[0]:
                raise IllegalQuery("the challenge message may not be signed")
            return super().sign(message)

        def check(self, message, sig):
            if self.challenge_pair is not None and (bytes(message), sig) == self.challenge_pair:
                raise IllegalQuery("the challenge pair may not be checked")
            return super().check(message, sig)

        def challenge(self, message):
            message = bytes(message)
            if self.challenge_pair is not None:
                raise IllegalQuery("only one challenge per game")
            if any(m == message for m, _ in self.signed):
                raise IllegalQuery("the challenge message was already signed")
            sig = uds.sign(pp, sk, message) if b else fake_signature(pp, rng)
            self.challenge_pair = (message, sig)
            self.transcript.append(("challenge", message, sig))
            return sig

    oracle = Oracle(pp, pk, sk, rng, check_rounds)
    guess = adversary(pk, oracle)
    if oracle.challenge_pair is None:
        raise IllegalQuery("the adversary never asked for a challenge")
    oracle.transcript.append(("guess", guess))
    return GameOutcome(guess == b, oracle.transcript, {"b": b, "guess": guess})


# -- scripted adversaries ------------------------------------------------------------

def replay_adversary(pk, oracle):
    sig = oracle.sign(b"replayed message")
    return b"replayed message", sig


def random_guess_adversary(rng):
    def adversary(pk, oracle):
        oracle.challenge(b"challenge %d" % rng.getrandbits(32))
        return rng.randrange(2)

    return adversary


def rule_violating_adversary(pk, oracle):
    oracle.challenge(b"target")
    oracle.sign(b"target")
    return 0


__all__ = ["GameOutcome", "unforgeability_game", "invisibility_game", "fake_signature",
           "replay_adversary", "random_guess_adversary", "rule_violating_adversary"]
