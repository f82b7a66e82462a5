from typing import Iterable, List, Optional


class SerreWeightError(Exception):
    """Base class for every error raised by the weight library"""


class InputError(SerreWeightError, ValueError):
    """Malformed or inconsistent caller input"""

    def __init__(self, message: str, argument: Optional[str] = None):
        super().__init__(message)
        self.argument = argument


class BudgetExceeded(SerreWeightError):
    """An exhaustive scan would visit more cases than allowed"""

    def __init__(self, what: str, required: int, budget: int):
        super().__init__(
            f"{what} needs {required} cases, budget is {budget}"
        )
        self.what = what
        self.required = required
        self.budget = budget


class NotAWeightError(SerreWeightError, ValueError):
    """The weight has an empty witness set for this character pair"""


class PreconditionError(SerreWeightError, ValueError):
    """A genericity or range hypothesis of the operation does not hold"""


class AmbiguityError(SerreWeightError):
    """The witness set has no unique maximal element"""

    def __init__(self, message: str, pairs: Iterable):
        super().__init__(message)
        self.pairs: List = list(pairs)


class InvariantFailure(SerreWeightError, RuntimeError):
    """An internal invariant that should always hold was observed to fail"""
