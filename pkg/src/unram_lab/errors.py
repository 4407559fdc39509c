"""Exception hierarchy shared by every module."""


class UnramLabError(ValueError):
    """Base class for all errors raised by unram_lab."""


class NotCoprime(UnramLabError):
    pass


class NotInSubfield(UnramLabError):
    pass


class NotIntegral(UnramLabError):
    pass


class OrderCapExceeded(UnramLabError):
    pass


class UnsupportedParameter(UnramLabError):
    pass


class SchemaError(UnramLabError):
    pass


class ParseError(UnramLabError):
    pass


class InternalInconsistency(UnramLabError):
    """An algorithm produced output violating a mathematical guarantee."""


class OrbitActionUndefined(UnramLabError):
    pass


class SizeMismatch(UnramLabError):
    pass


class BoundExceeded(UnramLabError):
    pass


class InvalidShape(UnramLabError):
    pass
