"""Exception hierarchy shared by every layer of the package."""


class G2UDSError(Exception):
    """Base class for all errors raised by g2uds."""


# field arithmetic
class NotPrime(G2UDSError):
    pass


class BadShape(G2UDSError):
    pass


class DivisionByZero(G2UDSError, ZeroDivisionError):
    pass


class NotASquare(G2UDSError):
    pass


# curves and invariants
class SingularCurve(G2UDSError):
    pass


class DegenerateImage(G2UDSError):
    pass


# jacobian group
class CurveMismatch(G2UDSError):
    pass


class TorsionNotRational(G2UDSError):
    pass


class SamplingTimeout(G2UDSError):
    pass


class NotTorsion(G2UDSError):
    pass


class NotMaximalIsotropic(G2UDSError):
    pass


class TrivialKernel(NotMaximalIsotropic):
    pass


# isogenies
class NotIsotropic(G2UDSError):
    pass


class NotOrder4(G2UDSError):
    pass


class PointNotOnDomain(G2UDSError):
    pass


class UnsupportedKernel(G2UDSError):
    pass


class UnsupportedModel(G2UDSError):
    """The curve model has no rational Weierstrass point to move to infinity."""


class BrokenChain(G2UDSError):
    pass


class BadOrder(G2UDSError):
    pass


class WalkStuck(G2UDSError):
    pass


# signature scheme
class SignatureInvalid(G2UDSError):
    pass


class SignatureActuallyValid(G2UDSError):
    pass


class MalformedSignature(G2UDSError):
    pass


class DisavowalImpossible(G2UDSError):
    pass


class OutOfOrder(G2UDSError):
    pass


class MalformedResponse(G2UDSError):
    pass


class TranscriptDesync(G2UDSError):
    pass


class InternalError(G2UDSError):
    pass


# wire format
class FormatError(G2UDSError):
    pass


class BadMagic(FormatError):
    pass


class BadChecksum(FormatError):
    pass


class KindMismatch(FormatError):
    pass


class TruncatedPayload(FormatError):
    pass


# oracles and games
class TooLarge(G2UDSError):
    pass


class NotFound(G2UDSError):
    pass


class IllegalQuery(G2UDSError):
    pass
