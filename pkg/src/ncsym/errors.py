"""Exception types shared across the package."""


class NcsymError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(NcsymError):
    """Variable counts or matrix sizes of the operands do not agree."""


class ChartError(NcsymError):
    """Operation applied in the wrong variable chart (x,y vs. u,v)."""


class ParseError(NcsymError):
    """Expression text could not be parsed; carries the offending position."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class MixedChartError(ParseError):
    """x/y and u/v variables appear in the same expression."""


class AssignmentError(NcsymError):
    """Evaluation assignment is missing a variable or sizes are inconsistent."""


class SingularityError(NcsymError):
    """An inverse node was evaluated at a numerically singular matrix."""

    def __init__(self, message, expression=None):
        super().__init__(message)
        self.expression = expression


class ExpansionError(NcsymError):
    """Expression cannot be expanded to a polynomial over atomic inverses."""


class InconclusiveError(NcsymError):
    """Random sampling exhausted its retry budget without a usable sample."""


class NumericalError(NcsymError):
    """A numerical routine failed or produced out-of-tolerance results."""


class GenerationError(NcsymError):
    """Constrained random generation exhausted its retry budget."""


class SpectrumOutsideDomainError(NcsymError):
    """The spectrum of the input is not contained in the branch's discs."""


class IllConditionedInterpolationError(NcsymError):
    """Divided-difference tableau degenerated (non-finite entries)."""


class ClusteringError(NcsymError):
    """Spectrum admits no quarter-isolated covering at the working tolerance."""


class UnsupportedError(NcsymError):
    """Input falls outside the cases this operation enumerates."""


class NotSymmetricError(NcsymError):
    """Polynomial is not invariant under swapping the two variables."""


class PreconditionError(NcsymError):
    """A stated hypothesis of the check does not hold for the inputs."""


class ContradictionError(NcsymError):
    """Two block decompositions force different companion-function values."""


class EvaluatorError(NcsymError):
    """A black-box evaluator failed on a sample; carries the sample."""

    def __init__(self, message, sample=None):
        super().__init__(message)
        self.sample = sample


class DomainError(NcsymError):
    """No admissible sample in the expression's domain could be produced."""
