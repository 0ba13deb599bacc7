class DomainError(ValueError):
    """An input violates the mathematical domain of an operation.

    An optional second argument names the offending field.
    """

    def __str__(self) -> str:
        if len(self.args) > 1:
            return f"{self.args[0]} ({self.args[1]})"
        return str(self.args[0]) if self.args else ""
