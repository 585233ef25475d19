"""
Exceptions raised by the F-crystal toolkit
"""


class FCrystalError(Exception):
    """Base class for every error raised by this package"""


class InputError(FCrystalError):
    """Malformed input file, literal or command-line value"""


class PrecisionExhausted(FCrystalError):
    """The working precision N cannot certify the requested answer"""

    def __init__(self, message: str, diagnostics: dict = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class SplitNotDirect(PrecisionExhausted):
    """Recovered summands do not span M; by Katz's theorem only precision can cause this"""


class HenselFailure(PrecisionExhausted):
    """A Hensel or Newton iteration did not converge within N steps"""


class NotAUnit(FCrystalError):
    """A scalar or matrix that must be invertible over W is not"""


class NotIntegral(FCrystalError):
    """A result that must have entries in W has a negative valuation"""


class NotInjective(FCrystalError):
    """The Frobenius matrix is singular at the working precision"""


class EndpointMismatch(FCrystalError):
    """Two polygons compared for dominance do not share their end point"""

    def __init__(self, upper_end, lower_end):
        super().__init__(f"endpoints differ: {upper_end} vs {lower_end}")
        self.upper_end = upper_end
        self.lower_end = lower_end


class NoBreak(FCrystalError):
    """The polygon has no corner at the requested abscissa"""


class HypothesisFailed(FCrystalError):
    """The break-point hypothesis of the decomposition theorem does not hold"""


class RankTooLarge(HypothesisFailed):
    """Self-dual decomposition requires A < n/2"""


class InvalidExponents(InputError):
    """Generator exponents are not nondecreasing and symmetric"""


class FamilyMismatch(InputError):
    """Fibers of a family do not share p, a, n, kind and val(c)"""
