"""Exception hierarchy shared by every module."""


class GraphSatError(Exception):
    """Base class for all errors raised by graphsat."""


class ArityGuardError(GraphSatError):
    """Requested arity is above the enumeration guard."""


class ResourceGuardError(GraphSatError):
    """A configured work budget was exhausted before an answer was found."""


class OracleCapExceeded(ResourceGuardError):
    """Instance has more variables than the oracle is allowed to search."""


class InternalInconsistencyError(GraphSatError):
    """A self-check failed. This signals a bug, never a verdict."""


class NotEdgeAffineError(GraphSatError):
    pass


class NotBijunctiveError(GraphSatError):
    pass


class SpecSyntaxError(GraphSatError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")
