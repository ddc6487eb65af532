"""Errors raised while loading scenarios, running models, and writing output.

Every error carries the exit code the CLI should return, so the command layer can
turn any failure into a message on stderr and a nonzero exit without inspecting
where it came from.
"""


class SimCommandError(Exception):
    """Base class for errors that should end a command with a diagnostic."""

    exit_code = 3

    def __init__(self, message):
        self.message = message
        super().__init__(message)


class ScenarioError(SimCommandError):
    """A scenario file is missing, malformed, or violates a constraint."""

    exit_code = 2

    def __init__(self, message, key_path="", line=None):
        self.key_path = key_path
        self.line = line

        details = []
        if key_path:
            details.append(f"key: {key_path}")
        if line is not None:
            details.append(f"line: {line}")
        if details:
            message = f"{message} ({', '.join(details)})"
        super().__init__(message)


class ModelError(SimCommandError, ValueError):
    """A model operation was called outside its preconditions."""

    exit_code = 3


class ConvergenceError(ModelError):
    """An iterative solver hit its iteration limit."""

    def __init__(self, message, last_iterate=None, iterations=None):
        self.last_iterate = last_iterate
        self.iterations = iterations
        if iterations is not None:
            message = f"{message} after {iterations} iterations"
        super().__init__(message)


class StepError(ModelError):
    """A module error raised while simulating a specific period."""

    def __init__(self, period, cause):
        self.period = period
        self.cause = cause
        super().__init__(f"Simulation failed in period {period}: {cause}")


class OutputError(SimCommandError):
    """Output files could not be written."""

    exit_code = 4
