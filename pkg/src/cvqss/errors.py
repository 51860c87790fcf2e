"""Exception hierarchy shared by all cvqss modules."""


class CVQSSError(Exception):
    """Base class for every error raised by this package."""


class RankDeficient(CVQSSError):
    pass


class NotOrthonormal(CVQSSError):
    pass


class Singular(CVQSSError):
    pass


class InvalidParam(CVQSSError, ValueError):
    pass


class DimensionMismatch(CVQSSError, ValueError):
    pass


class BadIndex(CVQSSError, IndexError):
    pass


class NoCloningViolation(InvalidParam):
    """Raised for n >= 2k: no threshold scheme exists in that regime."""


class GenerationFailed(CVQSSError):
    pass


class TooManyDropped(CVQSSError):
    pass


class BadSubset(CVQSSError, ValueError):
    pass


class DegenerateA(CVQSSError):
    pass


class KappaUndefined(CVQSSError):
    pass


class InconsistentExpansion(CVQSSError):
    pass
