"""Exception hierarchy shared by every module."""


class UnivMeasError(ValueError):
    """Base class for all input and contract errors raised by the package."""


class NotHermitian(UnivMeasError):
    pass


class NotPSD(UnivMeasError):
    pass


class TraceNotOne(UnivMeasError):
    pass


class DimensionMismatch(UnivMeasError):
    pass


class DimensionOverflow(UnivMeasError):
    pass


class LengthMismatch(UnivMeasError):
    pass


class NotCommuting(UnivMeasError):
    """Raised by ``product_pvm`` when two PVM elements fail to commute.

    Carries the worst offending index pair and its commutator norm.
    """

    def __init__(self, pair, norm):
        self.pair = pair
        self.norm = norm
        super().__init__(
            f"PVM elements {pair[0]} and {pair[1]} do not commute "
            f"(commutator Frobenius norm {norm:.3e})"
        )


class NegativeProbability(UnivMeasError):
    pass


class TooManyRows(UnivMeasError):
    pass


class SizeMismatch(UnivMeasError):
    pass


class NTooLarge(UnivMeasError):
    pass


class StateSpecError(UnivMeasError):
    """Malformed state preset or matrix file."""
