"""Exception types shared across the toolkit.

The CLI maps these onto exit codes, so each one carries the code it should
produce.
"""


class ShiftRecError(Exception):
    exit_code = 1


class ConfigError(ShiftRecError):
    exit_code = 1


class HypothesisViolated(ShiftRecError):
    exit_code = 2


class BudgetExceeded(ShiftRecError):
    exit_code = 3


class PrecisionExhausted(ShiftRecError):
    exit_code = 3


class NonExtendableWord(ShiftRecError):
    exit_code = 1


class EmptyLevel(ShiftRecError):
    """D_n is empty, so the partition sum is -inf rather than small."""

    exit_code = 1


class AdmissibilityViolation(ShiftRecError):
    """A constructed word left the language (the family is not closed)."""

    exit_code = 1
