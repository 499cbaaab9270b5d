"""Exception hierarchy.  Each class carries the CLI exit code for its failure mode."""


class RibbonkitError(Exception):
    exit_code = 1


class GridParseError(RibbonkitError, ValueError):
    """Malformed grid or matrix text.  `line` and `column` are 1-based when known."""

    exit_code = 1

    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


class NotAKnotError(GridParseError):
    """Graded homology needs a one-component grid."""


class SizeCeilingError(RibbonkitError):
    exit_code = 2


class ConsistencyError(RibbonkitError):
    """A computed object failed a self-check (d^2 != 0, asymmetric homology, ...)."""

    exit_code = 3


class NotPrimitiveError(RibbonkitError, ValueError):
    exit_code = 4


class MissingTargetError(RibbonkitError, KeyError):
    exit_code = 5

    def __str__(self):
        return str(self.args[0]) if self.args else "missing target"


class RecordError(RibbonkitError, ValueError):
    """A knot record violates its invariants or disagrees with recomputation."""

    exit_code = 6
