"""Exception types shared across the engine and toolchain."""

from __future__ import annotations


class DialogError(Exception):
    """Base class for every domain error raised by this package."""


class NotFoundError(DialogError):
    """A node, start name, actor, or state was looked up and does not exist."""


class DimensionMismatchError(DialogError):
    """A weight vector and a state vector have different lengths."""


class NoCandidatesError(DialogError):
    """An NPC turn arrived at a node with no options to follow (graph bug)."""


class InvalidPhaseError(DialogError):
    """An operation requires a session phase other than the current one."""


class InvalidChoiceError(DialogError):
    """The chosen node is not one of the current menu options."""


class UnmatchedBranchError(DialogError):
    """A subdialog terminated with a value no branch edge matches."""


class CycleOverflowError(DialogError):
    """Auto-advance ran for ``max_steps`` node transitions without resting."""

    def __init__(self, message: str, steps: int):
        super().__init__(message)
        self.steps = steps


class ReplayError(DialogError):
    """A scripted replay failed; ``step`` is the 0-based choice index."""

    def __init__(self, step: int, message: str):
        super().__init__(f"step {step}: {message}")
        self.step = step


class ScriptParseError(DialogError):
    """A script line could not be parsed; ``line_number`` is 1-based."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class ScriptImportError(DialogError):
    """A parsed script cannot be turned into a graph."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ProjectParseError(DialogError):
    """A project file is not well-formed XML."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class SchemaError(DialogError):
    """A project file is well-formed XML but violates the format schema."""

    def __init__(self, message: str, element: str | None = None):
        if element is not None:
            message = f"<{element}>: {message}"
        super().__init__(message)
        self.element = element


class UnsupportedVersionError(DialogError):
    """The project file declares a format version this reader does not know."""


class InvalidProjectError(DialogError):
    """Refused to save a project that fails validation with errors."""

    def __init__(self, message: str, diagnostics=None):
        super().__init__(message)
        self.diagnostics = list(diagnostics or [])
