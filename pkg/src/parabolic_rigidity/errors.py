"""Exception types shared by the library and mapped to CLI exit codes."""


class InputError(ValueError):
    """Invalid user input (bad type, node index, label, ...). Exit code 2."""


class ResourceGuardError(RuntimeError):
    """A configured size or rank guard was exceeded. Exit code 3."""


class ConsistencyError(AssertionError):
    """An internal cross-check failed (e.g. a dimension mismatch)."""
