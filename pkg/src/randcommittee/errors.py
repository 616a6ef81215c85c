"""Exception hierarchy shared by the library and the CLI."""


class RandCommitteeError(Exception):
    """Base class for all package errors."""


class InputError(RandCommitteeError, ValueError):
    """Malformed or inconsistent input (unknown ids, bad parameters, ...)."""


class ParseError(InputError):
    """An election document could not be parsed."""


class ResourceCapError(RandCommitteeError, RuntimeError):
    """An enumeration or state space exceeded its configured cap."""


class InternalConsistencyError(RandCommitteeError, AssertionError):
    """A guarantee that should hold by construction was violated."""
