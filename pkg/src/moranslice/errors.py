"""Exception types shared across the package."""


class MoranSliceError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(MoranSliceError, ValueError):
    pass


class InvalidDigit(MoranSliceError, ValueError):
    pass


class InvalidLabel(MoranSliceError, ValueError):
    pass


class OutOfRange(MoranSliceError, ValueError):
    pass


class OrderMismatch(MoranSliceError, ValueError):
    pass


class WindowTooLarge(MoranSliceError, ValueError):
    pass


class BudgetExceeded(MoranSliceError):
    pass


class ElementCapExceeded(BudgetExceeded):
    pass


class VerificationFailure(MoranSliceError):
    """Matrix-product and geometric counts disagree.

    ``record`` holds the first mismatching depth and both counts.
    """

    def __init__(self, depth, matrix, oracle, params=None):
        self.record = {"depth": depth, "matrix": matrix, "oracle": oracle}
        if params:
            self.record.update(params)
        super().__init__(f"count mismatch at depth {depth}: matrix={matrix} oracle={oracle}")


class BoundaryWarning(UserWarning):
    """The intercept sits on a subinterval boundary; matrix count is unverified there."""
