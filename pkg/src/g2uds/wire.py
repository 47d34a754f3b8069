"""Canonical binary encodings and the artifact container.

Container layout::

    b"G2U1" | kind (1 byte) | version (1 byte) | payload | checksum (8 bytes)

where the checksum is the first 8 bytes of SHA-256 over everything before
it.  Every payload starts with the prime p, so decoding needs no outside
context.  Integers are length-prefixed big-endian (2-byte length); field
elements use the fixed-width form of the field; point lists carry the
surface they live on.

Session records (interactive CON/DIS) are framed as::

    length (4 bytes) | round (4 bytes) | record kind (1 byte) | payload
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass

from .errors import BadChecksum, BadMagic, FormatError, KindMismatch, TruncatedPayload
from .field import FieldParams, QuadField
from .invariants import Fingerprint
from .kernels import TorsionBasis
from .surfaces import ProductSurface, Surface, surface_from_bytes

MAGIC = b"G2U1"
VERSION = 1
CHECKSUM_LEN = 8

KINDS = {
    "params": 1, "pubkey": 2, "privkey": 3, "signature": 4, "commitment": 5,
    "transcript": 6, "response": 7, "instance": 8, "witness": 9,
}
KIND_NAMES = {v: k for k, v in KINDS.items()}

RECORD_COMMIT, RECORD_CHALLENGE, RECORD_RESPONSE, RECORD_VERDICT = 1, 2, 3, 4
RECORD_NAMES = {1: "commit", 2: "challenge", 3: "response", 4: "verdict"}


# -- primitive readers/writers ---------------------------------------------------

def enc_int(n: int) -> bytes:
    if n < 0:
        raise ValueError("only non-negative integers are encoded")
    body = n.to_bytes((n.bit_length() + 7) // 8, "big") if n else b""
    if len(body) > 0xFFFF:
        raise ValueError("integer too large")
    return struct.pack(">H", len(body)) + body


def enc_bytes(b: bytes) -> bytes:
    return struct.pack(">I", len(b)) + b


class Reader:
    def __init__(self, data: bytes, F: QuadField | None = None):
        self.data = memoryview(data)
        self.pos = 0
        self.F = F

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedPayload("payload ends early")
        out = bytes(self.data[self.pos:self.pos + n])
        self.pos += n
        return out

    def byte(self) -> int:
        return self.take(1)[0]

    def u32(self) -> int:
        return struct.unpack(">I", self.take(4))[0]

    def int(self) -> int:
        n = struct.unpack(">H", self.take(2))[0]
        body = self.take(n)
        if body[:1] == b"\x00":
            raise FormatError("non-minimal integer encoding")
        return int.from_bytes(body, "big")

    def blob(self) -> bytes:
        return self.take(self.u32())

    def fq(self):
        return self.F.decode(self.take(2 * self.F.width))

    def done(self):
        if self.pos != len(self.data):
            raise FormatError("trailing bytes after payload")


# -- composite pieces ---------------------------------------------------------------

def enc_fingerprint(fp: Fingerprint) -> bytes:
    return fp.to_bytes()


def dec_fingerprint(r: Reader) -> Fingerprint:
    tag = r.byte()
    if tag not in (1, 2):
        raise FormatError(f"unknown fingerprint tag {tag}")
    n = r.byte()
    kind = "jac" if tag == 1 else "prod"
    if (kind == "prod" and n != 2) or (kind == "jac" and n not in (3, 6)):
        raise FormatError("fingerprint has the wrong number of values")
    values = tuple(r.fq() for _ in range(n))
    if kind == "prod" and values[1].key() < values[0].key():
        raise FormatError("product fingerprint is not sorted")
    return Fingerprint(kind, values)


def enc_points(A: Surface, pts) -> bytes:
    out = enc_bytes(A.to_bytes()) + bytes([len(pts)])
    return out + b"".join(enc_bytes(A.point_to_bytes(P)) for P in pts)


def dec_points(r: Reader):
    A = surface_from_bytes(r.F, r.blob())
    n = r.byte()
    return A, tuple(A.point_from_bytes(r.blob()) for _ in range(n))


def _surface_of(pts) -> Surface:
    P = pts[0]
    if hasattr(P, "P1"):
        return ProductSurface(P.P1.E, P.P2.E)
    from .surfaces import JacobianSurface

    return JacobianSurface(P.curve)


def enc_field_params(fp: FieldParams) -> bytes:
    head = b"".join(enc_int(v) for v in (fp.p, fp.l_A, fp.e_A, fp.l_M, fp.e_M, fp.l_C, fp.e_C, fp.f))
    return head + bytes([1 if fp.sign == 1 else 0])


def dec_field_params(r: Reader) -> FieldParams:
    vals = [r.int() for _ in range(8)]
    s = r.byte()
    if s not in (0, 1):
        raise FormatError("bad sign byte")
    from .field import make_params

    fp = make_params(*vals[1:], 1 if s else -1)
    if fp.p != vals[0]:
        raise FormatError("prime does not match its shape")
    return fp


def enc_basis(B: TorsionBasis) -> bytes:
    out = enc_int(B.l) + enc_int(B.e) + enc_points(B.surface, B.points)
    out += B.zeta.to_bytes() + bytes([len(B.omega)])
    return out + b"".join(enc_int(x) for row in B.omega for x in row)


def dec_basis(r: Reader) -> TorsionBasis:
    l, e = r.int(), r.int()
    A, pts = dec_points(r)
    zeta = r.fq()
    n = r.byte()
    omega = [[r.int() for _ in range(n)] for _ in range(n)]
    return TorsionBasis(A, list(pts), l, e, zeta, omega)


# -- per-kind payloads ----------------------------------------------------------------

def _header(p: int) -> bytes:
    return enc_int(p)


def _reader(payload: bytes) -> Reader:
    r = Reader(payload)
    p = r.int()
    try:
        r.F = QuadField.of(p)
    except Exception as exc:
        raise FormatError(f"bad field header: {exc}") from exc
    return r


def _p_of(obj) -> int:
    from . import uds

    if isinstance(obj, uds.PublicParams):
        return obj.field.p
    if isinstance(obj, uds.PublicKey):
        return obj.fpA.values[0].F.p
    if isinstance(obj, uds.Signature):
        return obj.fpAM.values[0].F.p
    if isinstance(obj, uds.Commitment):
        return obj.fpC.values[0].F.p
    raise TypeError(f"cannot determine the field of {type(obj).__name__}")


def encode_payload(obj, kind: str | None = None, p: int | None = None) -> tuple[str, bytes]:
    from . import uds

    if isinstance(obj, uds.PublicParams):
        body = enc_field_params(obj.field) + enc_bytes(obj.surface.to_bytes())
        body += b"".join(enc_basis(B) for B in (obj.basisA, obj.basisM, obj.basisC))
        body += enc_bytes(obj.hash_id.encode()) + enc_int(obj.rounds)
        return "params", _header(obj.field.p) + body
    if isinstance(obj, uds.PublicKey):
        A = _surface_of(obj.pushedC)
        return "pubkey", _header(_p_of(obj)) + enc_fingerprint(obj.fpA) + enc_points(A, obj.pushedC)
    if isinstance(obj, uds.PrivateKey):
        if p is None:
            raise TypeError("encoding a private key needs the prime p")
        return "privkey", _header(p) + bytes([len(obj.a)]) + b"".join(enc_int(x) for x in obj.a)
    if isinstance(obj, uds.Signature):
        A = _surface_of(obj.pushedC_AM)
        return "signature", _header(_p_of(obj)) + enc_fingerprint(obj.fpAM) + enc_points(A, obj.pushedC_AM)
    if isinstance(obj, uds.Commitment):
        body = b"".join(enc_fingerprint(f) for f in obj.fingerprints())
        return "commitment", _header(_p_of(obj)) + body + enc_points(_surface_of(obj.kerCMC), obj.kerCMC)
    if isinstance(obj, uds.Response):
        if p is None:
            raise TypeError("encoding a response needs the prime p")
        body = bytes([obj.b])
        if obj.b == 0:
            body += bytes([len(obj.scalars)]) + b"".join(enc_int(x) for x in obj.scalars)
        else:
            body += enc_points(_surface_of(obj.points), obj.points)
        return "response", _header(p) + body
    if isinstance(obj, Transcript):
        return "transcript", _header(obj.p) + obj.payload()
    raise TypeError(f"no encoding for {type(obj).__name__}")


def decode_payload(kind: str, payload: bytes):
    from . import uds

    r = _reader(payload)
    if kind == "params":
        fp = dec_field_params(r)
        if fp.p != r.F.p:
            raise FormatError("field header does not match parameters")
        surface = surface_from_bytes(r.F, r.blob())
        bases = [dec_basis(r) for _ in range(3)]
        hash_id = r.blob().decode()
        rounds = r.int()
        obj = uds.PublicParams(fp, surface, *bases, hash_id=hash_id, rounds=rounds)
    elif kind == "pubkey":
        fp = dec_fingerprint(r)
        _, pts = dec_points(r)
        obj = uds.PublicKey(fp, pts)
    elif kind == "privkey":
        n = r.byte()
        obj = uds.PrivateKey(tuple(r.int() for _ in range(n)))
    elif kind == "signature":
        fp = dec_fingerprint(r)
        _, pts = dec_points(r)
        obj = uds.Signature(fp, pts)
    elif kind == "commitment":
        fps = [dec_fingerprint(r) for _ in range(4)]
        _, pts = dec_points(r)
        obj = uds.Commitment(*fps, pts)
    elif kind == "response":
        b = r.byte()
        if b == 0:
            n = r.byte()
            obj = uds.Response(0, scalars=tuple(r.int() for _ in range(n)))
        elif b == 1:
            _, pts = dec_points(r)
            obj = uds.Response(1, points=pts)
        else:
            raise FormatError("challenge bit out of range")
    elif kind == "transcript":
        obj = Transcript.from_payload(r)
    else:
        raise KindMismatch(f"unknown kind {kind!r}")
    r.done()
    return obj


# -- container ----------------------------------------------------------------------

def _checksum(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()[:CHECKSUM_LEN]


def wrap(kind: str, payload: bytes) -> bytes:
    body = MAGIC + bytes([KINDS[kind], VERSION]) + payload
    return body + _checksum(body)


def unwrap(data: bytes, kind: str | None = None) -> tuple[str, bytes]:
    if len(data) < len(MAGIC) + 2 + CHECKSUM_LEN:
        raise TruncatedPayload("file is shorter than the container header")
    if data[:4] != MAGIC:
        raise BadMagic("not a g2uds artifact")
    body, tail = data[:-CHECKSUM_LEN], data[-CHECKSUM_LEN:]
    if _checksum(body) != tail:
        raise BadChecksum("checksum mismatch")
    found = KIND_NAMES.get(data[4])
    if found is None:
        raise FormatError(f"unknown kind byte {data[4]}")
    if data[5] != VERSION:
        raise FormatError(f"unsupported version {data[5]}")
    if kind is not None and found != kind:
        raise KindMismatch(f"expected {kind}, found {found}")
    return found, bytes(body[6:])


def encode(obj, p: int | None = None) -> bytes:
    kind, payload = encode_payload(obj, p=p)
    return wrap(kind, payload)


def decode(kind: str, data: bytes):
    found, payload = unwrap(data, kind)
    try:
        return decode_payload(found, payload)
    except FormatError:
        raise
    except (ValueError, IndexError, UnicodeDecodeError) as exc:
        raise FormatError(str(exc)) from exc
    except Exception as exc:
        from .errors import G2UDSError

        if isinstance(exc, G2UDSError):
            raise FormatError(f"{type(exc).__name__}: {exc}") from exc
        raise


# -- session records -----------------------------------------------------------------

@dataclass(frozen=True)
class Record:
    round: int
    kind: int
    payload: bytes

    def to_bytes(self) -> bytes:
        body = struct.pack(">IB", self.round, self.kind) + self.payload
        return struct.pack(">I", len(body)) + body

    @classmethod
    def parse(cls, body: bytes) -> "Record":
        if len(body) < 5:
            raise TruncatedPayload("record shorter than its header")
        rnd, kind = struct.unpack(">IB", body[:5])
        if kind not in RECORD_NAMES:
            raise FormatError(f"unknown record kind {kind}")
        return cls(rnd, kind, body[5:])


def read_record(stream) -> Record | None:
    """Read one framed record from a binary stream; None on a clean EOF."""
    head = stream.read(4)
    if not head:
        return None
    if len(head) < 4:
        raise TruncatedPayload("record length cut short")
    (n,) = struct.unpack(">I", head)
    body = stream.read(n)
    if len(body) < n:
        raise TruncatedPayload("record body cut short")
    return Record.parse(body)


def write_record(stream, rec: Record) -> None:
    stream.write(rec.to_bytes())
    stream.flush()


@dataclass
class Transcript:
    p: int
    records: list

    def payload(self) -> bytes:
        return struct.pack(">I", len(self.records)) + b"".join(r.to_bytes() for r in self.records)

    @classmethod
    def from_payload(cls, r: Reader) -> "Transcript":
        n = r.u32()
        recs = []
        for _ in range(n):
            m = r.u32()
            recs.append(Record.parse(r.take(m)))
        return cls(r.F.p, recs)


# record payload helpers used by the session layer

def record_payload(obj, p: int) -> bytes:
    _, payload = encode_payload(obj, p=p)
    return payload


def parse_record_payload(kind: str, payload: bytes):
    try:
        return decode_payload(kind, payload)
    except FormatError:
        raise
    except (ValueError, IndexError) as exc:
        raise FormatError(str(exc)) from exc


__all__ = [
    "MAGIC", "VERSION", "KINDS", "encode", "decode", "wrap", "unwrap", "encode_payload",
    "decode_payload", "Record", "Transcript", "read_record", "write_record", "record_payload",
    "parse_record_payload", "RECORD_COMMIT", "RECORD_CHALLENGE", "RECORD_RESPONSE", "RECORD_VERDICT",
]
