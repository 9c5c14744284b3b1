"""Exception hierarchy shared by every module of the package."""


class PowCircError(Exception):
    """Base class for all errors raised by powcirc."""


class ParameterError(PowCircError, ValueError):
    """An argument is outside the documented domain."""


class DomainError(PowCircError, ValueError):
    """A mathematical operation is undefined for the given input (e.g. order of 0)."""


class NotFoundError(PowCircError, LookupError):
    """A search over a finite range came up empty."""


class FieldMismatchError(PowCircError, TypeError):
    """Operands live in different prime fields."""


class UnsupportedParametersError(PowCircError, ValueError):
    """The requested construction is outside the supported parameter regime."""


class RegimeError(UnsupportedParametersError):
    """Degree / characteristic hypotheses of the reconstruction algorithms fail."""


class UnsupportedFieldError(UnsupportedParametersError):
    """The prime field is too small for the construction.

    ``min_p`` is the smallest prime that would work.
    """

    def __init__(self, message, min_p=None):
        super().__init__(message)
        self.min_p = min_p


class InfeasibleError(UnsupportedFieldError):
    """No element with the requested multiplicative order exists in F_p."""


class InconsistentInputError(PowCircError, ValueError):
    """Supplied data (evaluations, points) contradicts itself."""


class DecodeFailure(PowCircError):
    """Robust sparse decoding found no usable projection."""


class NotInClassError(PowCircError):
    """The input is not a sum of few powers in the promised class."""


class InternalInvariantError(PowCircError, RuntimeError):
    """A bound that holds for every in-class input was exceeded."""


class AlignmentError(PowCircError):
    """Label sets of univariate outputs cannot be matched across directions."""


class ReconstructionFailure(PowCircError):
    """Multivariate reconstruction could not find a usable anchor point."""


class CircuitFormatError(PowCircError, ValueError):
    """Malformed or semantically invalid circuit document.

    ``code`` is a short stable identifier (``syntax``, ``zero-coeff``, ...).
    """

    def __init__(self, code, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(f"[{code}] {where}{message}")
        self.code = code
        self.line = line
        self.column = column
