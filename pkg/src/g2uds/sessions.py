"""Two-party CON/DIS sessions.

Endpoints exchange only framed records (see :mod:`g2uds.wire`); each round
runs commit -> challenge -> response -> verdict.  ``run_interactive`` drives
a signer and a verifier in-process, passing serialized bytes between them so
the two sides share no objects.
"""

from __future__ import annotations

import random
import warnings

from . import uds, wire
from .errors import G2UDSError, OutOfOrder, TranscriptDesync
from .uds import PrivateKey, PublicKey, PublicParams, SessionState, Signature

MODES = ("CON", "DIS")


def _check_mode(mode: str) -> str:
    mode = mode.upper()
    if mode not in MODES:
        raise ValueError(f"mode must be CON or DIS, got {mode!r}")
    return mode


class SignerEndpoint:
    """Signer side: produces commitments and answers challenges."""

    def __init__(self, pp: PublicParams, sk: PrivateKey, message: bytes, sig: Signature,
                 mode: str = "CON", seed=0, pk: PublicKey | None = None):
        self.pp = pp
        self.sk = sk
        self.message = bytes(message)
        self.sig = sig
        self.mode = _check_mode(mode)
        self.pk = pk or uds.public_key(pp, sk)
        self.rng = random.Random(f"signer:{seed}")
        self.state: SessionState | None = None
        self.round = 0
        self.log: list = []

    def commit(self) -> bytes:
        if self.state is not None and self.state.phase != "closed":
            raise OutOfOrder("previous round is still open")
        fn = uds.con_commit if self.mode == "CON" else uds.dis_commit
        com, state = fn(self.pp, self.sk, self.message, self.sig, seed=self.rng, pk=self.pk)
        state.round = self.round
        self.state = state
        rec = wire.Record(self.round, wire.RECORD_COMMIT, wire.record_payload(com, self.pp.field.p))
        self.log.append(rec)
        return rec.to_bytes()

    def on_challenge(self, data: bytes) -> bytes:
        rec = _parse(data, self.round, wire.RECORD_CHALLENGE)
        self.log.append(rec)
        if self.state is None or self.state.phase != "challenge":
            raise OutOfOrder("no commitment awaits a challenge")
        if len(rec.payload) != 1 or rec.payload[0] not in (0, 1):
            raise TranscriptDesync("challenge is not a single bit")
        resp = uds.con_respond(self.state, rec.payload[0])
        self.state.phase = "verdict"
        out = wire.Record(self.round, wire.RECORD_RESPONSE, wire.record_payload(resp, self.pp.field.p))
        self.log.append(out)
        return out.to_bytes()

    def on_verdict(self, data: bytes) -> bool:
        rec = _parse(data, self.round, wire.RECORD_VERDICT)
        self.log.append(rec)
        if self.state is None or self.state.phase != "verdict":
            raise OutOfOrder("verdict before response")
        self.state.phase = "closed"
        self.round += 1
        return rec.payload == b"\x01"


class VerifierEndpoint:
    """Verifier side: flips a fresh coin per round and adjudicates responses."""

    def __init__(self, pp: PublicParams, pk: PublicKey, message: bytes, sig: Signature,
                 mode: str = "CON", seed=None):
        self.pp = pp
        self.pk = pk
        self.message = bytes(message)
        self.sig = sig
        self.mode = _check_mode(mode)
        self.rng = random.Random(None if seed is None else f"verifier:{seed}")
        self.round = 0
        self.state = SessionState("verifier", self.mode, 0, (), "commit")
        self.commitment = None
        self.bit = None
        self.results: list[bool] = []
        self.bits: list[int] = []
        self.log: list = []

    def on_commit(self, data: bytes) -> bytes:
        rec = _parse(data, self.round, wire.RECORD_COMMIT)
        self.log.append(rec)
        if self.state.phase != "commit":
            raise OutOfOrder("commitment arrived out of order")
        self.commitment = wire.parse_record_payload("commitment", rec.payload)
        self.bit = self.rng.randrange(2)
        self.bits.append(self.bit)
        self.state.phase = "response"
        self.state.transcript.append(("commit", self.commitment))
        self.state.transcript.append(("challenge", self.bit))
        out = wire.Record(self.round, wire.RECORD_CHALLENGE, bytes([self.bit]))
        self.log.append(out)
        return out.to_bytes()

    def on_response(self, data: bytes) -> bytes:
        rec = _parse(data, self.round, wire.RECORD_RESPONSE)
        self.log.append(rec)
        if self.state.phase != "response":
            raise OutOfOrder("response arrived out of order")
        try:
            resp = wire.parse_record_payload("response", rec.payload)
            verify = uds.con_verify if self.mode == "CON" else uds.dis_verify
            ok = bool(verify(self.pp, self.pk, self.message, self.sig, self.commitment, self.bit, resp))
            if resp.b == 0:
                self.state.c = tuple(resp.scalars)
        except (G2UDSError, ValueError):
            ok = False
        self.state.transcript.append(("verdict", ok))
        self.results.append(ok)
        self.state.phase = "commit"
        out = wire.Record(self.round, wire.RECORD_VERDICT, b"\x01" if ok else b"\x00")
        self.log.append(out)
        self.round += 1
        self.state.round = self.round
        return out.to_bytes()

    @property
    def accepted(self) -> bool:
        return all(self.results)


def _parse(data: bytes, expected_round: int, expected_kind: int) -> wire.Record:
    if len(data) < 4:
        raise TranscriptDesync("short record")
    rec = wire.Record.parse(data[4:])
    if int.from_bytes(data[:4], "big") != len(data) - 4:
        raise TranscriptDesync("record length prefix does not match")
    if rec.round != expected_round:
        raise TranscriptDesync(f"expected round {expected_round}, got {rec.round}")
    if rec.kind != expected_kind:
        raise TranscriptDesync(f"expected a {wire.RECORD_NAMES[expected_kind]} record, "
                               f"got {wire.RECORD_NAMES.get(rec.kind, rec.kind)}")
    return rec


def run_interactive(pp: PublicParams, pk: PublicKey, signer, verifier, mode: str = "CON",
                    rounds: int | None = None, stop_early: bool = True) -> bool:
    """Run ``rounds`` commit/challenge/response/verdict rounds.

    Accepts iff every round accepts.  With ``rounds == 0`` the result is a
    vacuous accept and a warning is emitted.
    """
    mode = _check_mode(mode)
    if signer.mode != mode or verifier.mode != mode:
        raise TranscriptDesync("endpoints disagree on the protocol mode")
    if rounds is None:
        rounds = pp.rounds
    if rounds == 0:
        warnings.warn("zero rounds: accepting without any evidence", RuntimeWarning, stacklevel=2)
        return True
    accepted = True
    for _ in range(rounds):
        challenge = verifier.on_commit(signer.commit())
        verdict = verifier.on_response(signer.on_challenge(challenge))
        ok = signer.on_verdict(verdict)
        if not ok:
            accepted = False
            if stop_early:
                break
    return accepted and verifier.accepted


def transcript_of(endpoint, p: int) -> wire.Transcript:
    return wire.Transcript(p, list(endpoint.log))


__all__ = ["SignerEndpoint", "VerifierEndpoint", "run_interactive", "transcript_of", "MODES"]
