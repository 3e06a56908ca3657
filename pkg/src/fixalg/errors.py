"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end:
1 for bad input, 2 for an exhausted budget or cap, 3 for a failed property.
"""


class FixalgError(Exception):
    exit_code = 1


class InputError(FixalgError):
    exit_code = 1


class BudgetError(FixalgError):
    exit_code = 2


class CheckFailure(FixalgError):
    exit_code = 3


class DomainMismatch(InputError):
    pass


class NotTotal(InputError):
    """A function leaves a domain element unassigned."""


class OutOfCodomain(InputError):
    pass


class NotAnIso(InputError):
    pass


class FunctorMismatch(InputError):
    pass


class MalformedTerm(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class DatalogSyntaxError(ParseError):
    pass


class UnsafeRule(InputError):
    pass


class ArityMismatch(InputError):
    pass


class AlgebraMalformed(InputError):
    pass


class StageExplosion(BudgetError):
    pass


class EnumerationTooLarge(BudgetError):
    pass


class NotConverged(BudgetError):
    pass


class DepthOverflow(BudgetError):
    pass


class NotInitial(CheckFailure):
    """The algebra offered as initial is not isomorphic to the chain's limit."""


class NotAscending(CheckFailure):
    def __init__(self, message, before=None, after=None):
        self.before = before
        self.after = after
        super().__init__(message)
