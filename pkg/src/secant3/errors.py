"""Exception types shared by the whole package."""


class Secant3Error(Exception):
    """Base class for all package errors."""


class InvalidInput(Secant3Error, ValueError):
    """Malformed or out-of-contract input."""


class InvalidRange(InvalidInput):
    """A requested parameter lies outside its admissible range."""


class InvalidPresentation(Secant3Error):
    """The presentation does not describe a genuine border-rank-3 point
    (for instance it degenerates into the second secant variety)."""


class VerificationFailed(Secant3Error):
    """A decomposition failed its residual check.

    The offending residual is stored in ``residual``.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotInSpan(Secant3Error):
    """The target vector is not in the span of the given generators."""


class RetriesExhausted(Secant3Error):
    """A randomized search ran out of retries; ``seed`` records the run."""

    def __init__(self, message, seed=None):
        super().__init__(message)
        self.seed = seed


class DegenerateJet(Secant3Error):
    """A jet that was expected to span a plane lies in a line."""


class NotAnEmbedding(Secant3Error):
    """The jet has a vanishing first-order term, so no isomorphism of the
    line can match it; callers should fall back to a ramified cover."""


class AutarkyViolation(Secant3Error):
    """A factor that should have been removed by ambient reduction is
    still present (its projected scheme has degree one)."""


class NotATangent(Secant3Error):
    """The direction is proportional to the support point everywhere."""


class NotMinimal(Secant3Error):
    """The point lies in the span of a proper sub-jet; reduce the order."""


class IndependenceFailure(Secant3Error):
    """Jet vectors that are required to be linearly independent are not."""


class CapExceeded(Secant3Error):
    """An enumeration exceeded its configured cap.

    ``report`` carries the partial result computed before giving up.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
