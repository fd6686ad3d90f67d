"""Exception hierarchy.

Errors split into three families that the CLI maps to exit codes:
input problems (2), violated preconditions (3) and numerical failures (4).
"""


class LieGaussError(Exception):
    """Base class for all package errors."""


class InputError(LieGaussError):
    """Malformed or inconsistent input document."""


class ParseError(InputError):
    def __init__(self, msg, line=None, column=None):
        if line is not None:
            msg = f"{msg} (line {line}, column {column})"
        super().__init__(msg)
        self.line = line
        self.column = column


class SchemaError(InputError):
    def __init__(self, msg, key=None):
        super().__init__(msg if key is None else f"{key}: {msg}")
        self.key = key


class DimensionError(InputError):
    pass


class UnknownBuiltin(InputError):
    pass


class PreconditionError(LieGaussError):
    """An operation was called on data that violates its precondition."""


class DimensionMismatch(PreconditionError):
    pass


class InvalidStructureConstants(PreconditionError):
    pass


class InvalidMetric(PreconditionError):
    pass


class RankDeficient(PreconditionError):
    pass


class NotContained(PreconditionError):
    pass


class NotClosed(PreconditionError):
    pass


class NotSubalgebra(PreconditionError):
    pass


class NotBiinvariant(PreconditionError):
    pass


class NotLieTriple(PreconditionError):
    pass


class NotSemisimple(PreconditionError):
    pass


class FrameNotOrthonormal(PreconditionError):
    pass


class NoWitness(PreconditionError):
    pass


class NotTwoStep(PreconditionError):
    pass


class NotCentral(PreconditionError):
    pass


class ZeroVector(PreconditionError):
    pass


class NumericalError(LieGaussError):
    """Computation failed although inputs met the preconditions."""


class SplitFailed(NumericalError):
    pass


class DegenerateLambda(NumericalError):
    pass


class WitnessNotBiinvariant(NumericalError):
    pass


class InvalidParameter(PreconditionError):
    pass


class MissingInput(PreconditionError):
    """A task needs a document field that was not supplied."""
