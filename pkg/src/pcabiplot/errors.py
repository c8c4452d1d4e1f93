"""Exception hierarchy.

Input problems raise ``ValidationError``; breakdowns of the numerics
(no convergence, zero variance) raise ``NumericalError``. The CLI maps
them to exit codes 1 and 2.
"""


class PcaError(Exception):
    pass


class ValidationError(PcaError, ValueError):
    pass


class NumericalError(PcaError, ArithmeticError):
    pass
