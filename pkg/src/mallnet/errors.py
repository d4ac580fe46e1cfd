"""Exceptions shared across the package."""


class MallnetError(Exception):
    pass


class ParseError(MallnetError):
    """Malformed text input; ``offset`` is a byte offset into the source."""

    def __init__(self, message, offset=0, line=None):
        self.message = message
        self.offset = offset
        self.line = line
        where = f"line {line}, " if line is not None else ""
        super().__init__(f"{where}offset {offset}: {message}")


class RuleMismatch(MallnetError):
    """A proof node does not follow its rule schema.

    ``path`` is the tuple of child indices leading from the root to the node.
    """

    def __init__(self, path, reason):
        self.path = tuple(path)
        self.reason = reason
        where = "/".join(map(str, self.path)) or "root"
        super().__init__(f"at {where}: {reason}")


class WithContextMismatch(RuleMismatch):
    pass


class NotContractible(MallnetError):
    def __init__(self, witness):
        self.witness = tuple(witness)
        super().__init__(f"induced P4 on tokens {self.witness}")


class InvalidLinking(MallnetError):
    pass


class InvalidCircuit(MallnetError):
    pass


class NotReady(MallnetError):
    pass


class NotANet(MallnetError):
    pass


class NotTransposable(MallnetError):
    pass


class StepLimitExceeded(MallnetError):
    """Erasure ran past its step budget; this signals a broken invariant."""
