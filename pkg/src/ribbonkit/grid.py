"""Grid diagrams: parsing, validation, serialization.

A grid of size n has one X and one O in every row and column.  Columns index
the permutations, values are rows, and row 0 is the bottom of the planar
fundamental domain [0, n)^2.  Markings sit at cell centres (c + 1/2, r + 1/2).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import GridParseError


class MarkKind(str, Enum):
    X = "X"
    O = "O"  # noqa: E741


@dataclass(frozen=True)
class Marking:
    column: int
    row: int
    kind: MarkKind


@dataclass(frozen=True)
class GridDiagram:
    size: int
    xs: tuple[int, ...]
    os: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(int(v) for v in self.xs))
        object.__setattr__(self, "os", tuple(int(v) for v in self.os))
        validate(self.size, self.xs, self.os)

    @property
    def arc_index(self) -> int:
        return self.size

    def components(self) -> int:
        """Number of link components (cycles of column -> column of the X in the O's row)."""
        col_of_x = {r: c for c, r in enumerate(self.xs)}
        seen = [False] * self.size
        count = 0
        for start in range(self.size):
            if seen[start]:
                continue
            count += 1
            c = start
            while not seen[c]:
                seen[c] = True
                c = col_of_x[self.os[c]]
        return count

    def is_knot(self) -> bool:
        return self.components() == 1


def validate(size, xs, os, *, lines=(None, None, None)):
    """Check every type invariant; raise GridParseError on the first violation."""
    size_line, x_line, o_line = lines
    if size < 2:
        raise GridParseError(f"grid size must be at least 2, got {size}", size_line)
    for label, perm, line in (("X", xs, x_line), ("O", os, o_line)):
        if len(perm) != size:
            raise GridParseError(f"{label} row has {len(perm)} entries, expected {size}", line)
        seen = {}
        for c, r in enumerate(perm):
            if not 0 <= r < size:
                raise GridParseError(f"{label} entry {r} out of range 0..{size - 1}", line, c + 1)
            if r in seen:
                raise GridParseError(
                    f"{label} is not a permutation: row {r} repeated in columns {seen[r]} and {c}",
                    line,
                    c + 1,
                )
            seen[r] = c
    for c in range(size):
        if xs[c] == os[c]:
            raise GridParseError(f"X/O collision in column {c} (row {xs[c]})", o_line, c + 1)


def _parse_row(label, text, lineno):
    head, sep, rest = text.partition(":")
    if not sep or head.strip() != label:
        raise GridParseError(f"expected '{label}:' row", lineno, 1)
    values = []
    col = len(head) + 2
    for tok in rest.split():
        try:
            values.append(int(tok))
        except ValueError:
            raise GridParseError(f"non-integer entry {tok!r} in {label} row", lineno, col) from None
        col += len(tok) + 1
    return values


def parse_grid(text: str) -> GridDiagram:
    """Parse the three-line grid format; '#' lines and blank lines are ignored."""
    body = [
        (k + 1, line.strip())
        for k, line in enumerate(text.splitlines())
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if len(body) != 3:
        raise GridParseError(f"expected 3 non-comment lines (size, X:, O:), found {len(body)}")
    (size_no, size_text), (x_no, x_text), (o_no, o_text) = body
    try:
        size = int(size_text)
    except ValueError:
        raise GridParseError(f"grid size {size_text!r} is not an integer", size_no, 1) from None
    xs = _parse_row("X", x_text, x_no)
    os = _parse_row("O", o_text, o_no)
    validate(size, xs, os, lines=(size_no, x_no, o_no))
    return GridDiagram(size, tuple(xs), tuple(os))


def serialize_grid(g: GridDiagram) -> str:
    return f"{g.size}\nX: {' '.join(map(str, g.xs))}\nO: {' '.join(map(str, g.os))}\n"


def load_grid(path) -> GridDiagram:
    return parse_grid(Path(path).read_text())


def arc_index(g: GridDiagram) -> int:
    """Grid size.  Equals the arc index only when the caller supplies a minimal grid."""
    return g.size


def knot_shadow(g: GridDiagram) -> list[Marking]:
    out = []
    for c in range(g.size):
        out.append(Marking(c, g.xs[c], MarkKind.X))
        out.append(Marking(c, g.os[c], MarkKind.O))
    return out
