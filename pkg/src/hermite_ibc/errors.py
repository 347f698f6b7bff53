"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DivergenceError(ArithmeticError):
    """A series or product that the caller asked for is infinite."""


class QuadratureError(RuntimeError):
    """Numerical integration failed to converge or exceeded its budget."""


class ToleranceError(RuntimeError):
    """A requested accuracy cannot be certified within the allowed effort."""


class UnsupportedCombination(ValueError):
    """No available result covers the requested combination of inputs."""


class SchemaError(ValueError):
    """An input document or file does not follow its format."""
