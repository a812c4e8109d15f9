"""Error types with machine-readable categories.

Every error raised by this package carries a short ``category`` string so
that callers (notably the CLI in JSON mode) can dispatch on it without
parsing prose.
"""


class BogodenseError(Exception):
    category = "error"


class InvalidParameterError(BogodenseError):
    category = "invalid-parameter"


class ConfigError(BogodenseError):
    category = "config"


class ConvergenceError(BogodenseError):
    category = "convergence"

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class UnsupportedRegimeError(BogodenseError):
    category = "unsupported-regime"


class DegenerateModeError(BogodenseError):
    category = "degenerate-mode"


class IntegratorFailureError(BogodenseError):
    category = "integrator-failure"


class InapplicableLawError(BogodenseError):
    category = "inapplicable-law"


class ProtocolInapplicableError(BogodenseError):
    category = "protocol-inapplicable"


class TruncationOverflowError(BogodenseError):
    category = "truncation-overflow"


class EigensolverError(BogodenseError):
    category = "eigensolver-failure"
