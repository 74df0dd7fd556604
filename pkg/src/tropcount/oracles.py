"""Independent oracles for plane enumerative totals.

Two deliberately separate routes to the same numbers as the curve
enumeration: the degree-recursion for complex counts, and a lattice-path
enumeration over the degree-d triangle that produces dual subdivisions with
complex and Welschinger multiplicities.  Neither shares code with the
normative enumeration pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple


def kontsevich_number(d: int) -> int:
    """Number of rational plane curves of degree d through 3d-1 points."""
    if d < 1:
        raise ValueError("degree must be positive")
    memo = {1: 1}

    def n(k: int) -> int:
        if k in memo:
            return memo[k]
        total = 0
        for a in range(1, k):
            b = k - a
            total += (
                n(a)
                * n(b)
                * a * a * b
                * (b * comb(3 * k - 4, 3 * a - 2) - a * comb(3 * k - 4, 3 * a - 1))
            )
        memo[k] = total
        return total

    return n(d)


# --- lattice path oracle -------------------------------------------------

Cell = Tuple[str, Tuple[Tuple[int, int], ...]]  # ("t", corners) / ("p", corners)


def _triangle_points(d: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(d + 1) for j in range(d + 1 - i)]


def _cross(a, b) -> int:
    return a[0] * b[1] - a[1] * b[0]


@dataclass(frozen=True)
class _PathProblem:
    """Degree-d triangle with a generic linear order on its lattice points.

    ``direction`` pairs the order with a point configuration: the dual order
    of the regions crossed by a line with that direction.  The two boundary
    chains from the minimal to the maximal lattice point are kept as sets of
    triangle sides; left path bends fill the clockwise side.
    """

    d: int
    direction: Tuple[int, int]
    start: Tuple[int, int]
    end: Tuple[int, int]
    left_sides: Tuple[str, ...]
    right_sides: Tuple[str, ...]

    def lam(self, p: Tuple[int, int]) -> int:
        return self.direction[0] * p[0] + self.direction[1] * p[1]


def _side_of(d: int, a, b) -> Optional[str]:
    if a[0] == 0 and b[0] == 0:
        return "x0"
    if a[1] == 0 and b[1] == 0:
        return "y0"
    if a[0] + a[1] == d and b[0] + b[1] == d:
        return "hyp"
    return None


def _make_problem(d: int, direction: Tuple[int, int]) -> _PathProblem:
    pts = _triangle_points(d)
    values = {}
    for p in pts:
        v = direction[0] * p[0] + direction[1] * p[1]
        if v in values:
            raise ValueError("direction %s is not generic for degree %d" % (direction, d))
        values[v] = p
    start = values[min(values)]
    end = values[max(values)]
    corners_ccw = [(0, 0), (d, 0), (0, d)]
    side_between = {
        ((0, 0), (d, 0)): "y0",
        ((d, 0), (0, d)): "hyp",
        ((0, d), (0, 0)): "x0",
    }
    if d == 0:
        raise ValueError("degree must be positive")

    def chain(sides_order) -> Tuple[str, ...]:
        # walk corners in the given cyclic order from start's corner to end's
        idx = {c: i for i, c in enumerate(sides_order)}
        # start/end are corners of the triangle for a generic direction
        out = []
        pos = sides_order.index(start)
        while sides_order[pos] != end:
            nxt = (pos + 1) % 3
            pair = (sides_order[pos], sides_order[nxt])
            key = pair if pair in side_between else (pair[1], pair[0])
            out.append(side_between[key])
            pos = nxt
        return tuple(out)

    ccw_chain = chain(corners_ccw)
    cw_chain = chain(list(reversed(corners_ccw)))
    # left turns (positive cross) bend toward the clockwise chain
    return _PathProblem(
        d=d,
        direction=direction,
        start=start,
        end=end,
        left_sides=cw_chain,
        right_sides=ccw_chain,
    )


def _on_chain(problem: _PathProblem, sides: Tuple[str, ...], a, b) -> bool:
    s = _side_of(problem.d, a, b)
    return s is not None and s in sides


def _paths(problem: _PathProblem) -> Iterator[Tuple[Tuple[int, int], ...]]:
    """Strictly lambda-increasing lattice paths from the minimal to the
    maximal lattice point with exactly 3d - 1 steps inside the triangle."""
    d = problem.d
    points = sorted(_triangle_points(d), key=problem.lam)
    start, end = problem.start, problem.end
    steps = 3 * d - 1
    order = {p: i for i, p in enumerate(points)}

    def extend(path: List[Tuple[int, int]], remaining: int) -> Iterator:
        last = path[-1]
        if remaining == 0:
            if last == end:
                yield tuple(path)
            return
        for p in points[order[last] + 1 :]:
            if p == end and remaining > 1:
                continue
            # enough points left to finish?
            if len(points) - order[p] - 1 < remaining - 1:
                continue
            path.append(p)
            yield from extend(path, remaining - 1)
            path.pop()

    yield from extend([start], steps)


def _subdivisions(
    problem: _PathProblem, path: Tuple[Tuple[int, int], ...], side: int, memo: Dict
) -> List[Tuple[Cell, ...]]:
    """All subdivisions of the region between the path and the boundary.

    side +1: the region filled by left bends (positive cross products);
    side -1: the other one.  Each subdivision is the multiset of
    triangle/parallelogram cells cut off by the standard first-bend
    reduction.
    """
    d = problem.d
    key = (path, side)
    if key in memo:
        return memo[key]
    sides = problem.left_sides if side == 1 else problem.right_sides
    if all(_on_chain(problem, sides, a, b) for a, b in zip(path, path[1:])):
        memo[key] = [()]
        return [()]
    pivot = None
    for i in range(1, len(path) - 1):
        turn = _cross(
            (path[i][0] - path[i - 1][0], path[i][1] - path[i - 1][1]),
            (path[i + 1][0] - path[i][0], path[i + 1][1] - path[i][1]),
        )
        if side * turn > 0:
            pivot = i
            break
    if pivot is None:
        memo[key] = []
        return []
    a, b, c = path[pivot - 1], path[pivot], path[pivot + 1]
    results: List[Tuple[Cell, ...]] = []
    shortcut = path[:pivot] + path[pivot + 1 :]
    tri: Cell = ("t", (a, b, c))
    for sub in _subdivisions(problem, shortcut, side, memo):
        results.append(sub + (tri,))
    w = (a[0] + c[0] - b[0], a[1] + c[1] - b[1])
    if 0 <= w[0] and 0 <= w[1] and w[0] + w[1] <= d:
        replaced = path[:pivot] + (w,) + path[pivot + 1 :]
        par: Cell = ("p", (a, b, c, w))
        for sub in _subdivisions(problem, replaced, side, memo):
            results.append(sub + (par,))
    memo[key] = results
    return results


def _cell_edges(cell: Cell) -> List[Tuple[Tuple[int, int], Tuple[int, int]]]:
    corners = cell[1]
    return [tuple(sorted((corners[i], corners[(i + 1) % len(corners)]))) for i in range(len(corners))]


def _twice_area(cell: Cell) -> int:
    corners = cell[1]
    a, b, c = corners[0], corners[1], corners[2]
    v1 = (b[0] - a[0], b[1] - a[1])
    v2 = (c[0] - a[0], c[1] - a[1])
    base = abs(_cross(v1, v2))
    return base if cell[0] == "t" else 2 * base


def _lattice_length(edge) -> int:
    (ax, ay), (bx, by) = edge
    return gcd(abs(bx - ax), abs(by - ay))


def _triangle_interior_points(cell: Cell) -> int:
    corners = cell[1]
    area2 = _twice_area(cell)
    boundary = sum(_lattice_length(e) for e in _cell_edges(cell))
    return (area2 - boundary + 2) // 2


def _validate_subdivision(d: int, cells: Sequence[Cell]):
    total = sum(_twice_area(c) for c in cells)
    if total != d * d:
        raise AssertionError("subdivision does not tile the triangle")
    counts: Dict[Tuple, int] = {}
    for cell in cells:
        for e in _cell_edges(cell):
            counts[e] = counts.get(e, 0) + 1
    for e, k in counts.items():
        on_boundary = _edge_on_triangle_boundary(d, e)
        if on_boundary and k != 1:
            raise AssertionError("boundary edge %s shared by %d cells" % (e, k))
        if not on_boundary and k != 2:
            raise AssertionError("interior edge %s shared by %d cells" % (e, k))


def _edge_on_triangle_boundary(d: int, edge) -> bool:
    (ax, ay), (bx, by) = edge
    if ax == 0 and bx == 0:
        return True
    if ay == 0 and by == 0:
        return True
    return ax + ay == d and bx + by == d


def _subdivision_multiplicities(d: int, cells: Sequence[Cell]) -> Tuple[int, int]:
    """(complex, Welschinger) multiplicity of one dual subdivision.

    Subdivisions with a boundary edge of lattice length >= 2 would be dual
    to curves with a multiple unbounded edge; those have the wrong degree
    and contribute nothing.
    """
    _validate_subdivision(d, cells)
    for cell in cells:
        for e in _cell_edges(cell):
            if _edge_on_triangle_boundary(d, e) and _lattice_length(e) != 1:
                return 0, 0
    complex_mult = 1
    for cell in cells:
        if cell[0] == "t":
            complex_mult *= _twice_area(cell)

    # chain parallel edges across parallelograms to recover curve edges
    edge_cells: Dict[Tuple, List[int]] = {}
    for idx, cell in enumerate(cells):
        for e in _cell_edges(cell):
            edge_cells.setdefault(e, []).append(idx)

    links: Dict[Tuple, List[Tuple]] = {}
    for idx, cell in enumerate(cells):
        if cell[0] != "p":
            continue
        a, b, c, w = cell[1]
        for e1, e2 in (
            (tuple(sorted((a, b))), tuple(sorted((w, c)))),
            (tuple(sorted((b, c))), tuple(sorted((a, w)))),
        ):
            links.setdefault(e1, []).append(e2)
            links.setdefault(e2, []).append(e1)

    triangles = [idx for idx, cell in enumerate(cells) if cell[0] == "t"]
    tri_pos = {idx: k for k, idx in enumerate(triangles)}
    parent = list(range(len(triangles)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    bounded_chains = 0
    seen = set()
    welschinger_zero = False
    for e in edge_cells:
        if e in seen:
            continue
        chain = {e}
        frontier = [e]
        while frontier:
            cur = frontier.pop()
            for nxt in links.get(cur, []):
                if nxt not in chain:
                    chain.add(nxt)
                    frontier.append(nxt)
        seen |= chain
        tri_ends = []
        boundary_ends = 0
        for ce in chain:
            for idx in edge_cells[ce]:
                if cells[idx][0] == "t":
                    tri_ends.append(idx)
            if _edge_on_triangle_boundary(d, ce):
                boundary_ends += 1
        lengths = {_lattice_length(ce) for ce in chain}
        if len(lengths) != 1:
            raise AssertionError("chain with inconsistent lattice lengths")
        length = lengths.pop()
        if len(tri_ends) == 2 and boundary_ends == 0:
            # bounded edge of the dual curve
            bounded_chains += 1
            a, b = find(tri_pos[tri_ends[0]]), find(tri_pos[tri_ends[1]])
            if a == b:
                return 0, 0  # cycle: dual curve has positive genus
            parent[a] = b
            if length % 2 == 0:
                welschinger_zero = True
        elif len(tri_ends) == 1 and boundary_ends == 1:
            pass  # unbounded edge
        else:
            return 0, 0  # vertex-free component or malformed chain
    # the dual curve must be a single tree through all its vertices
    if bounded_chains != len(triangles) - 1:
        return 0, 0
    if len({find(k) for k in range(len(triangles))}) != 1:
        return 0, 0
    if welschinger_zero:
        return complex_mult, 0
    w_mult = 1
    for cell in cells:
        if cell[0] == "t":
            w_mult *= -1 if _triangle_interior_points(cell) % 2 else 1
    return complex_mult, w_mult


def _direction_from_points(points) -> Tuple[int, int]:
    from fractions import Fraction

    p0 = points[0]
    p1 = points[1]
    dx = Fraction(p1[0]) - Fraction(p0[0])
    dy = Fraction(p1[1]) - Fraction(p0[1])
    denom = dx.denominator * dy.denominator // gcd(dx.denominator, dy.denominator)
    ix, iy = int(dx * denom), int(dy * denom)
    g = gcd(abs(ix), abs(iy))
    return ix // g, iy // g


def path_problem(d: int, points=None) -> _PathProblem:
    """The lattice-path problem for degree d, with the order functional
    taken from the direction of the (collinear) point configuration."""
    if d < 1:
        raise ValueError("degree must be positive")
    if points is not None:
        if len(points) != 3 * d - 1:
            raise ValueError("a degree-%d count needs %d points" % (d, 3 * d - 1))
        direction = _direction_from_points(list(points))
    else:
        direction = (101, 157)
    return _make_problem(d, direction)


def lattice_path_oracle(d: int, points=None) -> Tuple[int, int]:
    """(complex total, Welschinger total) for degree-d plane curves via
    lambda-increasing lattice paths and their dual subdivisions.

    The totals do not depend on which generic order functional is used;
    passing the point configuration fixes the functional that makes the
    per-path data match the curves through those points.
    """
    problem = path_problem(d, points)
    memo: Dict = {}
    complex_total = 0
    welschinger_total = 0
    for path in _paths(problem):
        left = _subdivisions(problem, path, 1, memo)
        right = _subdivisions(problem, path, -1, memo)
        for sub_l in left:
            for sub_r in right:
                cm, wm = _subdivision_multiplicities(d, sub_l + sub_r)
                complex_total += cm
                welschinger_total += wm
    return complex_total, welschinger_total
