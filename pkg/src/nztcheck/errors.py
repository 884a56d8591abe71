class PreconditionError(ValueError):
    """An operation was called outside its domain."""


class CapExceeded(PreconditionError):
    """Exhaustive enumeration would exceed the configured input-size cap."""

    def __init__(self, n, cap):
        super().__init__(f"refusing to enumerate 2^{n} inputs (cap is {cap})")
        self.n = n
        self.cap = cap


class PgaSyntaxError(ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class PgaSemanticError(PgaSyntaxError):
    """Well-formed token naming a register/command pair outside the alphabet."""


class GuardExceeded(PreconditionError):
    """A search-space guard refused the request."""


class PropSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
