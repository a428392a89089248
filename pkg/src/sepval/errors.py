"""Exception hierarchy.  Every error raised by the package derives from ValuationError."""


class ValuationError(Exception):
    pass


class ContextMismatch(ValuationError):
    """Domains or valuations from different lattice contexts / instances were mixed."""


class OrderError(ValuationError):
    """A required domain order (e.g. x <= d(psi)) does not hold."""


class DomainSyntaxError(ValuationError, ValueError):
    pass


class UnsupportedOperation(ValuationError):
    """The instance has no such element (e.g. Gaussian units)."""


class NullValuationError(ValuationError):
    """A null (absorbing) valuation was used where division is required."""


class DominationError(ValuationError):
    """A group-domination side condition fails."""


class NotReducible(ValuationError):
    """A quotient has no representative inside the valuation set itself."""


class ProjectionUndefined(ValuationError):
    """Partial projection in the quotient semigroup is not defined for this domain."""


class CompositionUndefined(DominationError):
    """The domination precondition of the compositional operator fails."""


class DensityPreconditionError(ValuationError):
    """An operand of composition cannot be projected to the meet of the domains."""


class NotPositiveDefinite(ValuationError):
    pass


class ModelFileError(ValuationError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class ModelSyntaxError(ModelFileError):
    """The model file is not well-formed YAML."""
