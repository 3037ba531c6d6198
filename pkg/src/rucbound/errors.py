"""Exception types raised by rucbound."""


class RucboundError(ValueError):
    """Base class for all validation failures in this package."""


class DimensionError(RucboundError):
    pass


class NonHermitianInput(RucboundError):
    pass


class DomainError(RucboundError):
    pass


class InvalidState(RucboundError):
    pass


class InvalidPovm(RucboundError):
    pass


class InvalidChannel(RucboundError):
    pass


class InvalidProbability(RucboundError):
    pass


class UnknownOutcome(RucboundError, KeyError):
    def __str__(self):
        return ValueError.__str__(self)


class NotPure(RucboundError):
    pass


class NotUnit(RucboundError):
    pass
