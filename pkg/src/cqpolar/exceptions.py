"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument lies outside its valid domain."""


class GuardError(RuntimeError):
    """A configured size limit (N_exact, K_exact, ...) would be exceeded."""


class NumericAnomaly(ArithmeticError):
    """A numerical invariant broke (non-PSD state, zero-norm branch, ...)."""
