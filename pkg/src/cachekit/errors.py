"""Shared exception types (mapped to CLI exit codes in cachekit.cli)."""


class SchemaError(ValueError):
    """Input file violates a documented JSON schema.

    `path` locates the first offending field, e.g. "users[2].demand".
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class ResourceLimitError(RuntimeError):
    """A configured enumeration/size cap was exceeded."""


class DecodeError(RuntimeError):
    """A decoder was handed inconsistent data (never happens in valid runs)."""
