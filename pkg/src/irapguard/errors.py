"""Exception hierarchy shared by all irapguard modules."""


class IrapGuardError(Exception):
    """Base class for all errors raised by this package."""


# bitstream
class EmptyInput(IrapGuardError):
    pass


class NoStartCode(IrapGuardError):
    pass


class MalformedUnit(IrapGuardError):
    pass


class ForbiddenBitSet(IrapGuardError):
    pass


class TooShort(IrapGuardError):
    pass


class OutOfRange(IrapGuardError):
    pass


# streamgen
class InvalidSpec(IrapGuardError):
    pass


# packetizer
class InvalidPayloadSize(IrapGuardError):
    pass


# simulator
class InvalidConfig(IrapGuardError):
    pass


class EmptyStream(IrapGuardError):
    pass


# schedule
class InvalidPeriod(IrapGuardError):
    pass


class InvalidParams(IrapGuardError):
    pass


class Unreachable(IrapGuardError):
    pass
