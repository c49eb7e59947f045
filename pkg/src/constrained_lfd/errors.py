"""Exception types raised across the package."""


class LfdError(Exception):
    """Base class for all package errors."""


class InvalidInputError(LfdError, ValueError):
    pass


class InvalidWindowError(InvalidInputError):
    pass


class InvalidConfigError(LfdError, ValueError):
    pass


class AlignmentError(LfdError, ValueError):
    pass


class ShapeError(InvalidInputError):
    pass


class JointLimitError(LfdError, ValueError):
    pass


class UnreachablePoseError(LfdError):
    """IK did not reach the requested pose within tolerance."""


class NoValidActionError(LfdError):
    pass


class NotReadyError(LfdError):
    """Experience buffer holds fewer transitions than requested."""


class OptimizationFailedError(LfdError):
    """Training diverged, or the greedy rollout hit a collision or an unrealizable pose."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class ParseError(LfdError, ValueError):
    def __init__(self, message, path=None, line=None):
        loc = ""
        if path is not None:
            loc = f"{path}"
            if line is not None:
                loc += f":{line}"
            loc += ": "
        super().__init__(loc + message)
        self.path = path
        self.line = line


class ValidationError(LfdError, ValueError):
    pass
