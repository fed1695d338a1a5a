"""Exception hierarchy shared by every fibrato module."""


class FibratoError(Exception):
    """Base class; ``code`` is the name surfaced by the CLI."""

    @property
    def code(self):
        return type(self).__name__


class DuplicateName(FibratoError):
    pass


class DanglingReference(FibratoError):
    pass


class BudgetExceeded(FibratoError):
    pass


class ClosureBudgetExceeded(BudgetExceeded):
    pass


class IncompleteTable(FibratoError):
    pass


class NotAGroupoid(FibratoError):
    pass


class DomainMismatch(FibratoError):
    pass


class NonFunctorialAction(FibratoError):
    """Raised when an action fails strict functoriality.

    ``witness`` names the offending morphism (or composable pair) and
    ``level`` tags which level of a hierarchy it came from.
    """

    def __init__(self, message, witness=None, level=None):
        if level is not None:
            message = f"[{level}] {message}"
        super().__init__(message)
        self.witness = witness
        self.level = level


class BlockSizeMismatch(FibratoError):
    pass


class NotASubgroup(FibratoError):
    pass


class NotWideSubgroupoid(FibratoError):
    pass


class FiberMismatch(FibratoError):
    pass


class PresentationSyntaxError(FibratoError):
    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column

    @property
    def code(self):
        return "SyntaxError"


class SchemaError(FibratoError):
    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class ValidationError(FibratoError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
