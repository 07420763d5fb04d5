"""Exception taxonomy shared by every module.

The class name doubles as the machine-parseable error category the CLI
prints on failure, so renaming a class is a breaking interface change.
"""


class MedembedError(Exception):
    """Base class for all domain errors raised by this package."""

    @property
    def category(self) -> str:
        return type(self).__name__


class DegenerateEmbedding(MedembedError):
    """All points coincide; the canonical scale factor would be zero."""


class DimensionMismatch(MedembedError):
    """Operands describe different point counts or matrix sizes."""


class EmptyEnsemble(MedembedError):
    """An operation that needs one (or two) inputs received fewer."""


class ParseError(MedembedError):
    """A delimited text file is malformed; message carries the line number."""


class InconsistentWidth(ParseError):
    """Rows of a delimited file disagree on the number of columns."""


class NonFiniteValue(ParseError):
    """A delimited file contains nan or +/-inf."""


class EigenFailure(MedembedError):
    """The symmetric eigendecomposition inside classical MDS did not converge."""


class CalibrationError(MedembedError):
    """The rate bench's reference embedding failed its self-consistency check."""
