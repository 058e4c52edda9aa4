"""Exception types shared across the package."""


class LocGameError(Exception):
    """Base class for all package errors."""


class ParameterError(LocGameError, ValueError):
    """An argument is outside its documented domain."""


class ProtocolError(LocGameError, RuntimeError):
    """A player or observation broke the rules of the game."""


class ResourceError(LocGameError, RuntimeError):
    """An exact computation was requested above its size limit."""


class ConfigError(LocGameError, ValueError):
    """An experiment configuration is invalid."""


class GraphFormatError(ParameterError):
    """An edge-list file is malformed."""


class NoMoveError(ProtocolError):
    """The robber has no legal move (isolated vertex under the must-move rule)."""
