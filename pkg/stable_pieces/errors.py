class StablePiecesError(Exception):
    """Base class for every error raised by stable_pieces."""

    exit_code: int = 2


class UsageError(StablePiecesError):
    """The input does not describe a valid object; exit code 2."""

    exit_code = 2


class VerificationError(StablePiecesError):
    """A mathematical invariant failed while computing; exit code 1."""

    exit_code = 1


class NonFiniteType(UsageError):
    pass


class UnsupportedType(NonFiniteType):
    """A finite type whose group is too large to enumerate element by element."""


class InvalidCoxeterMatrix(UsageError):
    pass


class InvalidAutomorphism(UsageError):
    pass


class MixedDatum(UsageError):
    pass


class NotMinimalRep(UsageError):
    pass


class InadmissibleChoice(UsageError):
    pass


class InvalidTwistedPair(UsageError):
    pass


class AmbientMismatch(UsageError):
    pass


class InvalidQuadruple(UsageError):
    pass


class TooLarge(UsageError):
    pass


class InvariantBreach(VerificationError):
    pass


class NoStabilization(VerificationError):
    pass


class NonDivisible(VerificationError):
    pass
