"""Error types shared by the reader, expander, machine, and CLI."""


class SchemeError(Exception):
    """Base class for every error surfaced to Scheme code or the CLI.

    `label` is the prefix of the rendered error line (e.g. "UnboundVariable"
    or the name of the primitive that failed).  `frames` is filled in by the
    machine when the error escapes a running trampoline.
    """

    def __init__(self, label, message, line=None, col=None):
        super().__init__(f"{label}: {message}")
        self.label = label
        self.message = message
        self.line = line
        self.col = col
        self.frames = None

    def error_line(self):
        return f"{self.label}: {self.message}"


class LexError(SchemeError):
    def __init__(self, message, line, col, unexpected_eof=False):
        super().__init__("LexError", message, line, col)
        # True when more input could complete the token (REPL keeps reading)
        self.unexpected_eof = unexpected_eof


class ParseError(SchemeError):
    def __init__(self, message, line=None, col=None, unexpected_eof=False):
        super().__init__("ParseError", message, line, col)
        self.unexpected_eof = unexpected_eof


class FormError(SchemeError):
    """A datum that survived expansion but is not a valid core form."""

    def __init__(self, message, line=None, col=None):
        super().__init__("SyntaxError", message, line, col)


class MacroError(SchemeError):
    """Bad define-syntax definition, or a failed/runaway expansion."""

    def __init__(self, message, label="MacroError"):
        super().__init__(label, message)


class EvalError(SchemeError):
    """Runtime failure; `label` names the failure kind or the primitive."""
