from fractions import Fraction

from tropcount.svg import dual_subdivision_cells, render_curves
from tropcount.tropical import TropicalCurve, TropicalGraph, as_point


def standard_line():
    graph = TropicalGraph(
        vertices=("v0",),
        bounded_edges=(),
        unbounded_edges=(("v0", (-1, 0)), ("v0", (0, -1)), ("v0", (1, 1))),
        weights={"u0": 1, "u1": 1, "u2": 1},
    )
    return TropicalCurve(graph=graph, positions={"v0": as_point((0, 0))}, n=2)


def crossing_curve():
    graph = TropicalGraph(
        vertices=("v0", "v1", "v2"),
        bounded_edges=(("v0", "v1"), ("v1", "v2")),
        unbounded_edges=(
            ("v0", (-1, 0)),
            ("v0", (0, 1)),
            ("v1", (0, -1)),
            ("v2", (-1, 2)),
            ("v2", (1, -1)),
        ),
        weights={"b0": 1, "b1": 1, "u0": 1, "u1": 1, "u2": 1, "u3": 1, "u4": 2},
    )
    return TropicalCurve(
        graph=graph,
        positions={
            "v0": as_point((0, 0)),
            "v1": as_point((2, -2)),
            "v2": as_point((5, -2)),
        },
        n=2,
    )


def polygon_twice_area(poly):
    total = 0
    for (x0, y0), (x1, y1) in zip(poly, poly[1:] + poly[:1]):
        total += x0 * y1 - x1 * y0
    return abs(total)


def test_line_dual_is_unit_triangle():
    cells = dual_subdivision_cells(standard_line())
    assert len(cells) == 1
    assert polygon_twice_area(cells[0]) == 1


def test_crossing_curve_dual_tiles():
    cells = dual_subdivision_cells(crossing_curve())
    # three vertices and one crossing: three triangles and a parallelogram
    assert len(cells) == 4
    sizes = sorted(len(c) for c in cells)
    assert sizes == [3, 3, 3, 4]
    # cells are lattice polygons with nonnegative normalized corners
    for poly in cells:
        for x, y in poly:
            assert x >= 0 and y >= 0
            assert Fraction(x).denominator == 1


def test_render_is_pure():
    curve = standard_line()
    a = render_curves([curve], [(-3, 0)])
    b = render_curves([curve], [(-3, 0)])
    assert a == b
    assert a.startswith("<svg")
    assert '<circle' in a


def test_render_labels_heavy_weights():
    text = render_curves([crossing_curve()])
    assert "w=2" in text
