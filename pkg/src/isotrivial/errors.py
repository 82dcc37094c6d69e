"""Exception hierarchy shared by all modules."""


class IsotrivialError(Exception):
    """Base class for every error raised by this package."""


class ModulusMismatch(IsotrivialError):
    pass


class UnknownVariable(IsotrivialError):
    pass


class NotAUnit(IsotrivialError):
    pass


class InvalidDescriptor(IsotrivialError):
    pass


class NotDiagonalizable(IsotrivialError):
    pass


class InvalidWeight(IsotrivialError):
    pass


class InvalidGroupPoint(IsotrivialError):
    pass


class NotInPGL2(IsotrivialError):
    pass


class UseWildModule(IsotrivialError):
    """Raised when a diagonalizable-only formula is asked about a wild group."""


class NotSupported(IsotrivialError):
    pass


class InconsistentData(IsotrivialError):
    """Input data cannot come from a genuine G-normal curve."""


class PrecisionExhausted(IsotrivialError):
    pass


class InvalidFamily(IsotrivialError):
    pass


class SchemaError(IsotrivialError):
    """A JSON document does not match the expected schema."""
