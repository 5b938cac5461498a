"""
Exception hierarchy for the exchangeable previsions toolkit.

Every error raised on purpose by the library derives from PrevisionError,
so callers (and the command-line front end) can catch one base class.
"""


class PrevisionError(Exception):
    """Base class for all toolkit errors"""


class CapExceeded(PrevisionError):
    """A tuple enumeration would exceed the configured cap"""

    def __init__(self, what, size, cap):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what} needs {size} elements, cap is {cap}")


class InvalidSpace(PrevisionError, ValueError):
    """Possibility space labels are empty or not distinct"""


class UnknownLabel(PrevisionError, KeyError):
    """A tuple component or count key is not a label of the space"""

    def __init__(self, label, space=None):
        self.label = label
        message = f"unknown label {label!r}"
        if space is not None:
            message += f" (space labels: {', '.join(map(str, space.labels))})"
        super().__init__(message)

    def __str__(self):
        return self.args[0]


class DomainMismatch(PrevisionError, ValueError):
    """Gambles or models defined on different domains were combined"""


class BadPermutation(PrevisionError, ValueError):
    """A permutation is not a bijection of the index set"""


class MalformedProgram(PrevisionError, ValueError):
    """A linear program has inconsistent widths or unknown relations"""


class LpError(PrevisionError, ArithmeticError):
    """An internal exactness assertion of the simplex engine failed"""


class SureLoss(PrevisionError):
    """The assessment incurs sure loss, so natural extension is undefined"""

    def __init__(self, message="assessment incurs sure loss", certificate=None):
        self.certificate = certificate
        super().__init__(message)


class EmptySet(PrevisionError, ValueError):
    """A credal set without extreme points"""


class InvalidSimplexPoint(PrevisionError, ValueError):
    """Simplex coordinates are negative or do not sum to one"""


class DegreeTooLow(PrevisionError, ValueError):
    """Target Bernstein degree is below the polynomial degree"""


class DegreeUnavailable(PrevisionError):
    """No level of the backing family is high enough for the polynomial"""


class InvalidFamily(PrevisionError, ValueError):
    """Count family levels are not contiguous, or not time consistent"""


class NoExchangeableDominator(PrevisionError):
    """No exchangeable coherent lower prevision dominates the local assessment"""

    def __init__(self, message="no exchangeable coherent dominator exists", certificate=None):
        self.certificate = certificate
        super().__init__(message)


class NotExtendable(PrevisionError):
    """The count model cannot be extended to the requested number of variables"""

    def __init__(self, message="model is not extendable", certificate=None):
        self.certificate = certificate
        super().__init__(message)


class AssessmentFileError(PrevisionError, ValueError):
    """Assessment file could not be parsed; `key` names the offending entry"""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


class InvalidMass(PrevisionError, ValueError):
    """A mass function has negative entries or does not sum to one"""


class BadParameter(PrevisionError, ValueError):
    """A numeric parameter is out of range; `key` names it"""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")
