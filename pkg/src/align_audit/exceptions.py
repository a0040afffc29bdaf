"""Exception types the CLI maps to exit codes."""


class AuditError(Exception):
    """Base class for failures surfaced by the audit pipeline."""


class ConfigError(AuditError):
    """Invalid audit configuration (exit code 2)."""


class DataError(AuditError):
    """Ingestion or preprocessing failure (exit code 3)."""


class TrainingError(AuditError):
    """Model training failure, e.g. a diverging loss (exit code 4)."""


class ExplanationError(AuditError):
    """Attribution-stage failure (exit code 4)."""
