"""Exception types shared across the package."""


class FriableLabError(Exception):
    pass


class NotAPrimePower(FriableLabError, ValueError):
    pass


class BudgetExceeded(FriableLabError):
    """Input is beyond the brute-force or series budget of an evaluator."""


class NonPrimeField(FriableLabError, ValueError):
    pass


class DomainError(FriableLabError, ValueError):
    pass


class OutOfTabulatedRange(FriableLabError, ValueError):
    pass


class DivergenceRisk(FriableLabError, ValueError):
    """The G_q series is not certified to converge at the requested point (z^2 >= q)."""


class MissingData(FriableLabError):
    pass
