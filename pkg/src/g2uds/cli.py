"""Command-line interface.

Exit codes: 0 success/accept, 1 reject/invalid, 2 usage error, 3 I/O or
format error.  Diagnostics go to stderr only; stdout is reserved for the
stdio session transport.
"""

from __future__ import annotations

import os
import struct
import sys
import time
from pathlib import Path

import click

from . import sessions, uds, wire
from .errors import FormatError, G2UDSError
from .field import make_params

EXIT_OK, EXIT_REJECT, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


def _read(path: str, kind: str | None = None):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise _Exit(EXIT_IO, f"cannot read {path}: {exc.strerror}") from exc
    if kind is None:
        return data
    try:
        return wire.decode(kind, data)
    except FormatError as exc:
        raise _Exit(EXIT_IO, f"{path}: {type(exc).__name__}: {exc}") from exc


def _write(path: str, data: bytes) -> None:
    try:
        tmp = f"{path}.tmp"
        Path(tmp).write_bytes(data)
        os.replace(tmp, path)
    except OSError as exc:
        raise _Exit(EXIT_IO, f"cannot write {path}: {exc.strerror}") from exc


def _say(msg: str) -> None:
    click.echo(msg, err=True)


# -- transports ---------------------------------------------------------------------

class StdioTransport:
    """Framed records over this process's stdin/stdout."""

    def __init__(self):
        self.inp = sys.stdin.buffer
        self.out = sys.stdout.buffer

    def send(self, data: bytes) -> None:
        self.out.write(data)
        self.out.flush()

    def recv(self) -> bytes:
        head = self.inp.read(4)
        if len(head) < 4:
            raise _Exit(EXIT_IO, "peer closed the stream")
        (n,) = struct.unpack(">I", head)
        body = self.inp.read(n)
        if len(body) < n:
            raise _Exit(EXIT_IO, "peer closed the stream mid-record")
        return head + body


class FileTransport:
    """Lockstep exchange through a shared directory: message k from a party
    is written atomically as ``<k>.<party>.rec``."""

    def __init__(self, directory: str, role: str, timeout: float = 600.0, poll: float = 0.01):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.role = role
        self.peer = "verifier" if role == "signer" else "signer"
        self.sent = 0
        self.got = 0
        self.timeout = timeout
        self.poll = poll

    def send(self, data: bytes) -> None:
        name = self.dir / f"{self.sent:06d}.{self.role}.rec"
        tmp = name.with_suffix(".tmp")
        tmp.write_bytes(data)
        os.replace(tmp, name)
        self.sent += 1

    def recv(self) -> bytes:
        name = self.dir / f"{self.got:06d}.{self.peer}.rec"
        deadline = time.monotonic() + self.timeout
        while not name.exists():
            if time.monotonic() > deadline:
                raise _Exit(EXIT_IO, f"timed out waiting for {name.name}")
            time.sleep(self.poll)
        self.got += 1
        return name.read_bytes()


def _transport(spec: str, role: str):
    if spec == "stdio":
        return StdioTransport()
    if spec.startswith("files:") and len(spec) > 6:
        return FileTransport(spec[6:], role)
    raise click.BadParameter("transport must be 'stdio' or 'files:<dir>'", param_hint="--transport")


# -- commands -----------------------------------------------------------------------

@click.group()
def cli():
    """Genus-2 isogeny undeniable signatures (toy parameters)."""


@cli.command()
@click.option("--lA", "l_A", type=int, required=True)
@click.option("--eA", "e_A", type=int, required=True)
@click.option("--lM", "l_M", type=int, required=True)
@click.option("--eM", "e_M", type=int, required=True)
@click.option("--lC", "l_C", type=int, required=True)
@click.option("--eC", "e_C", type=int, required=True)
@click.option("--f", "f", type=int, default=1, show_default=True)
@click.option("--sign", "sign", type=click.Choice(["-1", "+1", "1"]), default="-1", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--rounds", type=click.IntRange(min=0), default=32, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def setup(l_A, e_A, l_M, e_M, l_C, e_C, f, sign, seed, rounds, out):
    """Generate public parameters."""
    try:
        fp = make_params(l_A, e_A, l_M, e_M, l_C, e_C, f, -1 if sign == "-1" else 1)
    except G2UDSError as exc:
        raise click.BadParameter(str(exc)) from exc
    pp = uds.setup(fp, seed=seed, rounds=rounds)
    _write(out, wire.encode(pp))
    _say(f"p = {fp.p}, surface {pp.surface.fingerprint()}")


@cli.command()
@click.option("--params", required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--pub", required=True)
@click.option("--priv", required=True)
def keygen(params, seed, pub, priv):
    """Generate a key pair."""
    pp = _read(params, "params")
    pk, sk = uds.keygen(pp, seed=seed)
    _write(pub, wire.encode(pk))
    _write(priv, wire.encode(sk, p=pp.field.p))


@cli.command()
@click.option("--params", required=True)
@click.option("--priv", required=True)
@click.option("--msg-file", "msg_file", required=True)
@click.option("--out", required=True)
def sign(params, priv, msg_file, out):
    """Sign the bytes of a file."""
    pp = _read(params, "params")
    sk = _read(priv, "privkey")
    _write(out, wire.encode(uds.sign(pp, sk, _read(msg_file))))


@cli.command()
@click.option("--params", required=True)
@click.option("--priv", required=True)
@click.option("--msg-file", "msg_file", required=True)
@click.option("--sig", required=True)
def check(params, priv, msg_file, sig):
    """Signer-side validity check (exit 0 valid, 1 invalid)."""
    pp = _read(params, "params")
    sk = _read(priv, "privkey")
    s = _read(sig, "signature")
    ok = uds.check(pp, sk, _read(msg_file), s)
    _say("valid" if ok else "invalid")
    if not ok:
        raise _Exit(EXIT_REJECT)


def _session(mode, role, params, pub, priv, msg_file, sig, transport, seed, rounds):
    pp = _read(params, "params")
    pk = _read(pub, "pubkey")
    message = _read(msg_file)
    s = _read(sig, "signature")
    n = pp.rounds if rounds is None else rounds
    link = _transport(transport, role)
    if role == "signer":
        if priv is None:
            raise click.UsageError("the signer needs --priv")
        sk = _read(priv, "privkey")
        end = sessions.SignerEndpoint(pp, sk, message, s, mode, seed=seed, pk=pk)
        accepted = True
        for _ in range(n):
            link.send(end.commit())
            link.send(end.on_challenge(link.recv()))
            accepted &= end.on_verdict(link.recv())
    else:
        end = sessions.VerifierEndpoint(pp, pk, message, s, mode, seed=seed)
        for _ in range(n):
            link.send(end.on_commit(link.recv()))
            link.send(end.on_response(link.recv()))
        accepted = end.accepted
    if n == 0:
        _say("warning: zero rounds, vacuous accept")
    _say(f"{mode} {role}: {'accept' if accepted else 'reject'} after {n} rounds")
    if not accepted:
        raise _Exit(EXIT_REJECT)


def _session_command(mode):
    @click.option("--role", type=click.Choice(["signer", "verifier"]), required=True)
    @click.option("--params", required=True)
    @click.option("--pub", required=True)
    @click.option("--priv", default=None)
    @click.option("--msg-file", "msg_file", required=True)
    @click.option("--sig", required=True)
    @click.option("--transport", default="stdio", show_default=True)
    @click.option("--seed", type=int, default=None, help="coin / commitment seed")
    @click.option("--rounds", type=click.IntRange(min=0), default=None)
    def command(role, params, pub, priv, msg_file, sig, transport, seed, rounds):
        _session(mode, role, params, pub, priv, msg_file, sig, transport,
                 seed if seed is not None or role == "verifier" else 0, rounds)

    return command


cli.command("confirm", help="Run the confirmation protocol.")(_session_command("CON"))
cli.command("disavow", help="Run the disavowal protocol.")(_session_command("DIS"))


def cli_main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="g2uds", standalone_mode=False)
        return EXIT_OK
    except _Exit as exc:
        if str(exc):
            _say(f"error: {exc}")
        return exc.code
    except click.exceptions.Abort:
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except FormatError as exc:
        _say(f"format error: {exc}")
        return EXIT_IO
    except OSError as exc:
        _say(f"i/o error: {exc}")
        return EXIT_IO
    except G2UDSError as exc:
        _say(f"{type(exc).__name__}: {exc}")
        return EXIT_REJECT


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
