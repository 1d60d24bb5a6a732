"""
Error hierarchy for the cellular automata toolkit.
"""
from typing import Optional


class CAError(Exception):
    """Base class of every domain error"""


class WordTooShort(CAError):
    def __init__(self, length: int, required: int):
        self.length = length
        self.required = required
        super().__init__(f"word of length {length} is shorter than the required {required}")


class AlphabetMismatch(CAError):
    def __init__(self, left: int, right: int):
        self.left = left
        self.right = right
        super().__init__(f"alphabet sizes differ: {left} != {right}")


class ExhaustiveCheckInfeasible(CAError):
    """Raised when an exhaustive enumeration would exceed the window budget"""

    def __init__(self, windows_required: int, budget: int, what: str = "windows"):
        self.windows_required = windows_required
        self.budget = budget
        super().__init__(f"{what} required: {windows_required} exceeds budget {budget}")


class NotDecomposable(CAError):
    """A non-identity bijection is not a product of idempotents"""


class ConditionViolated(CAError):
    """The periodic-point condition fails at period n"""

    def __init__(self, n: int, witness):
        self.n = n
        self.witness = witness
        super().__init__(f"period {n} is mapped onto itself but not identically (witness {witness})")


class SourceIsSurjective(CAError):
    """An eraser needs a non-surjective source CA"""


class SearchBudgetExceeded(CAError):
    def __init__(self, examined: int, budget: int):
        self.examined = examined
        self.budget = budget
        super().__init__(f"no candidate found after {examined} of {budget} candidates")


class NoThresholdFound(CAError):
    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(f"capacity inequality did not stabilize below n = {limit}")


class LengthBelowThreshold(CAError):
    def __init__(self, length: int, threshold: int):
        self.length = length
        self.threshold = threshold
        super().__init__(f"word length {length} is below the capacity threshold {threshold}")


class MalformedBlock(CAError):
    """A block is not of the form w s w with s avoiding w"""


class CrossCheckFailed(CAError):
    """Surjectivity and preinjectivity deciders disagree"""


class RuleSpecError(CAError):
    """Malformed rule input, with a line/column diagnostic"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        location = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(f"{location}{message}")
