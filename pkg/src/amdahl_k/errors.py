"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class UnboundedLimitError(ArithmeticError):
    """max(k) diverges (serial fraction of zero); there is no finite value to report."""


class ParseError(ValueError):
    """Malformed input text. ``lineno`` is 1-based."""

    def __init__(self, message, lineno=None, source=None):
        self.lineno = lineno
        self.source = source
        prefix = [str(source)] if source is not None else []
        if lineno is not None:
            prefix.append(f"line {lineno}")
        super().__init__(": ".join(prefix + [message]))
