"""Exception hierarchy shared by every module."""


class KoopspecError(Exception):
    """Base class for all package errors."""


class InvalidArgument(KoopspecError, ValueError):
    """A parameter violates an operation's precondition."""


class InvalidData(KoopspecError, ValueError):
    """Input data is malformed (for example non-finite samples)."""


class ParseError(InvalidData):
    """A trajectory file could not be parsed."""


class NumericalFailure(KoopspecError, ArithmeticError):
    """An iterative method did not converge."""


class NotPositiveDefinite(NumericalFailure):
    """A Toeplitz matrix failed the Levinson positivity test.

    Attributes
    ----------
    degree : int
        Recursion step at which the reflection coefficient reached 1.
    """

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class BasisDegenerate(NumericalFailure):
    """The monomials are linearly dependent in the measure's L2 space.

    Attributes
    ----------
    max_degree : int
        Largest degree for which the Gram matrix is still positive definite.
    """

    def __init__(self, message, max_degree=None):
        super().__init__(message)
        self.max_degree = max_degree


class DivergenceError(NumericalFailure):
    """An ODE trajectory left the admissible region."""
