class ContractViolation(ValueError):
    """A caller broke a documented precondition."""


class GraphParseError(ValueError):
    """Malformed instance file. ``lineno`` is 1-based (0 when not line-specific)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno else ""
        super().__init__(prefix + message)
