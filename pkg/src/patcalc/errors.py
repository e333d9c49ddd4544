"""Exception types shared across the package."""


class PatcalcError(Exception):
    """Base class for all errors raised by this package."""


class TableError(PatcalcError):
    """A materialised table is malformed (bad ids, non-contiguous blocks, ...)."""


class MissingFactorization(PatcalcError):
    """A morphism admits no left-class/right-class factorization in the table.

    For truncated tables this usually means the factorization would pass
    through an object outside the current budget.
    """

    def __init__(self, morphism, label=""):
        self.morphism = morphism
        self.label = label
        super().__init__(
            "no factorization for morphism %s%s"
            % (morphism, " (%s)" % label if label else "")
        )


class TruncationEscape(PatcalcError):
    """A construction needed an object or factorization beyond the size budget."""

    def __init__(self, detail):
        self.detail = detail
        super().__init__("size budget exceeded: %s" % detail)


class NoElementaryObjects(PatcalcError):
    """Free algebras need at least one elementary object to grade against."""


class PreconditionError(PatcalcError):
    """A checker's documented precondition failed, so the question it would
    decide is not well-posed; this is an error verdict, not a fail."""


class DslError(PatcalcError):
    """Base class for DSL parse/load errors; carries a source position."""

    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        super().__init__("%d:%d: %s" % (line, column, message))


class DslSyntaxError(DslError):
    """Unexpected token.  `expected` is the sorted tuple of acceptable tokens."""

    def __init__(self, message, line, column, expected=()):
        self.expected = tuple(sorted(expected))
        if self.expected:
            message = "%s (expected %s)" % (message, ", ".join(self.expected))
        super().__init__(message, line, column)


class DuplicateName(DslError):
    def __init__(self, name, line, column):
        self.name = name
        super().__init__("duplicate name %r" % name, line, column)


class UnknownReference(DslError):
    def __init__(self, name, line, column):
        self.name = name
        super().__init__("unknown reference %r" % name, line, column)


class CommandError(PatcalcError):
    """CLI-level usage or input error (exit code 2)."""


class UnknownCommand(CommandError):
    """The first positional argument is not a known command."""


class TypeMismatch(CommandError):
    """A name resolved to a binding of the wrong kind."""
