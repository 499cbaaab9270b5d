import pytest
from hypothesis import given

from conftest import grids
from ribbonkit.errors import GridParseError
from ribbonkit.grid import GridDiagram, MarkKind, knot_shadow, parse_grid, serialize_grid


def test_parse_trefoil_with_comment():
    g = parse_grid("# shift grid\n5\nX: 2 3 4 0 1\nO: 0 1 2 3 4\n")
    assert g.size == 5 and g.xs == (2, 3, 4, 0, 1) and g.os == (0, 1, 2, 3, 4)
    assert g.is_knot()


@given(grids(max_size=9))
def test_serialize_roundtrip(g):
    assert parse_grid(serialize_grid(g)) == g


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("3\nX: 0 1 1\nO: 1 2 0\n", 2, 3),  # X not a permutation
        ("3\nX: 0 1 2\nO: 0 2 1\n", 3, 1),  # X/O collision in column 0
        ("3\nX: 0 1 5\nO: 1 2 0\n", 2, 3),  # out of range
        ("three\nX: 0 1 2\nO: 1 2 0\n", 1, 1),
        ("3\nX: 0 1 a\nO: 1 2 0\n", 2, None),
    ],
)
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(GridParseError) as exc:
        parse_grid(text)
    assert exc.value.line == line
    if column is not None:
        assert exc.value.column == column


def test_wrong_line_count_and_size():
    with pytest.raises(GridParseError):
        parse_grid("3\nX: 0 1 2\n")
    with pytest.raises(GridParseError):
        parse_grid("1\nX: 0\nO: 0\n")
    with pytest.raises(GridParseError):
        parse_grid("3\nX: 0 1\nO: 1 2 0\n")


def test_components():
    assert GridDiagram(2, (1, 0), (0, 1)).components() == 1
    # two disjoint unknots
    assert GridDiagram(4, (1, 0, 3, 2), (0, 1, 2, 3)).components() == 2


def test_knot_shadow_has_one_x_and_o_per_column():
    g = GridDiagram(3, (0, 1, 2), (1, 2, 0))
    marks = knot_shadow(g)
    assert len(marks) == 6
    assert sum(m.kind is MarkKind.X for m in marks) == 3
    assert {(m.column, m.row) for m in marks if m.kind is MarkKind.O} == {(0, 1), (1, 2), (2, 0)}
