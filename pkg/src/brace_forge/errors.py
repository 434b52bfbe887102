"""Exception types shared by every module."""


class BraceForgeError(Exception):
    pass


class StructureError(BraceForgeError, ValueError):
    """Malformed input: wrong dimensions, out-of-range entries, identity not at 0."""


class AxiomError(BraceForgeError, ValueError):
    """A required axiom failed; ``report`` holds every verdict and the first witness."""

    def __init__(self, report):
        self.report = report
        failed = report.first_failure()
        if failed is None:
            msg = f"{report.subject}: invalid"
        else:
            msg = f"{report.subject}: {failed.name} fails at {failed.witness}"
        super().__init__(msg)


class KindError(BraceForgeError, ValueError):
    """Operation is only defined for braces (abelian dot) or two-sided braces."""


class BoundError(BraceForgeError, ValueError):
    """Carrier or tuple space exceeds the configured exhaustive bound."""


class InternalConsistencyError(BraceForgeError, AssertionError):
    """A theorem-guaranteed property failed; indicates a bug, never bad input."""


class FormatError(StructureError):
    """A file does not follow its format; ``line`` is 1-based, or None for end of input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = "end of input" if line is None else f"line {line}"
        super().__init__(f"{where}: {message}")
