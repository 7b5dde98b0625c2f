"""Exception hierarchy shared by the solvers and the command line."""


class RRSynthError(Exception):
    """Base class; `exit_code` is what the command line returns."""

    exit_code = 2


class ParseError(RRSynthError):
    """Malformed game or strategy text."""

    exit_code = 1

    def __init__(self, line, column, message):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class SemanticError(RRSynthError):
    exit_code = 2


class DuplicateVertex(SemanticError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"vertex '{name}' is declared twice")


class UnknownVertex(SemanticError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown vertex '{name}'")


class DanglingEdge(SemanticError):
    def __init__(self, source, target):
        self.edge = (source, target)
        super().__init__(f"edge {source} -> {target} mentions an undeclared vertex")


class DeadEndVertex(SemanticError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"vertex '{name}' has no outgoing edge (every vertex needs a successor)")


class InvalidPrefix(SemanticError):
    pass


class InvalidLasso(SemanticError):
    pass


class InvalidPair(SemanticError):
    pass


class IncompatibleStrategy(SemanticError):
    pass


class BadParams(SemanticError):
    pass


class BelowRange(SemanticError):
    pass


class ScriptExhausted(SemanticError):
    pass


class IllegalScriptedMove(SemanticError):
    pass


class ConfigError(SemanticError):
    pass


class SolverError(SemanticError):
    """A solver could not certify its own result."""


class SizeLimit(RRSynthError):
    exit_code = 3


class BudgetExceeded(RRSynthError):
    exit_code = 3


class ComparisonMismatch(RRSynthError):
    exit_code = 4
