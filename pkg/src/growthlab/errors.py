"""Exception hierarchy. Every error carries the CLI exit code it maps to."""


class GrowthLabError(Exception):
    exit_code = 1


class UsageError(GrowthLabError):
    exit_code = 2


class ParseError(UsageError):
    pass


class BudgetExceeded(GrowthLabError):
    exit_code = 3


class PreconditionError(GrowthLabError):
    exit_code = 4


class EmptyInput(PreconditionError):
    pass


class AmbiguousSeparation(PreconditionError):
    """Two distinct reals closer than the distinctness tolerance."""


class ModeMismatch(PreconditionError):
    pass


class ZeroDivisor(PreconditionError):
    pass


class DomainViolation(PreconditionError):
    pass


class RangeViolation(PreconditionError):
    pass


class NoConvergence(GrowthLabError):
    pass


class Unsupported(PreconditionError):
    pass


class CertificationFailure(PreconditionError):
    pass


class TooSmall(PreconditionError):
    pass


class DegenerateSplit(PreconditionError):
    pass


class BucketTooSmall(PreconditionError):
    pass


class CertificateMismatch(PreconditionError):
    pass


class InclusionViolation(GrowthLabError):
    """The squeeze inclusion failed. It always holds, so this means a bug."""


class NotKConvex(PreconditionError):
    pass


class ZeroShift(PreconditionError):
    pass


class SpaceTooLarge(BudgetExceeded):
    pass
