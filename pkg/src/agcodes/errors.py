"""Error taxonomy shared by the whole package.

PreconditionError marks inputs outside an operation's documented domain or a
violated size guard. VerificationError marks a failed exact check of a
mathematical guarantee; the CLI reports the two with distinct exit codes so
a broken construction is never mistaken for a usage mistake.
"""


class PreconditionError(ValueError):
    """An operation was invoked outside its documented domain."""


class VerificationError(RuntimeError):
    """An exact check of a construction guarantee failed."""
