"""Exception hierarchy shared by every module."""


class RatsecError(Exception):
    """Base class for all errors raised by ratsec."""


class DomainError(RatsecError, ValueError):
    """An argument lies outside the domain of an operation."""


class PreconditionError(RatsecError, ValueError):
    """A documented precondition of an operation does not hold."""


class CapacityError(RatsecError):
    """A configured enumeration cap was exceeded before an answer was found."""


class SchemaError(RatsecError, ValueError):
    """A serialized document does not match the expected schema."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if field is not None:
            where.append(f"field {field!r}")
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class RegexSyntaxError(RatsecError, ValueError):
    """Malformed regular expression; ``position`` is a 0-based character offset."""

    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at position {position}")
