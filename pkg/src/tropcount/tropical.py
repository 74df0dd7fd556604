"""Data model and local invariants of parameterized tropical curves.

A curve is a weighted graph mapped to Q^n: balancing at every vertex,
degree as the multiset of weighted unbounded directions, genus as the
first Betti number, expected moduli dimension, and the dual-triangle
multiplicities used by the counting and Welschinger modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .exact_lattice import primitive_vector, rational_rank, vector_gcd

Vec = Tuple[int, ...]
Point = Tuple[Fraction, ...]
EdgeId = str  # "b<i>" for bounded edges, "u<i>" for unbounded ones


class DegenerateEdge(ValueError):
    """A bounded edge whose endpoints map to the same point."""


class NonTrivalent(ValueError):
    """Vertex multiplicity requested at a vertex that is not trivalent."""


def as_point(coords: Sequence) -> Point:
    return tuple(Fraction(c) for c in coords)


@dataclass(frozen=True)
class TropicalGraph:
    """Weighted graph with marked edges, combinatorial part of a curve."""

    vertices: Tuple[str, ...]
    bounded_edges: Tuple[Tuple[str, str], ...]
    unbounded_edges: Tuple[Tuple[str, Vec], ...]
    weights: Mapping[EdgeId, int]
    marked: Tuple[EdgeId, ...] = ()

    def __post_init__(self):
        ids = set(self.vertices)
        if len(ids) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        for tail, head in self.bounded_edges:
            if tail not in ids or head not in ids:
                raise ValueError("bounded edge endpoint not a vertex")
        for vertex, direction in self.unbounded_edges:
            if vertex not in ids:
                raise ValueError("unbounded edge vertex not a vertex")
            if vector_gcd(direction) != 1:
                raise ValueError("unbounded direction %s is not primitive" % (direction,))
        for eid in self.edge_ids():
            w = self.weights.get(eid)
            if w is None or w < 1:
                raise ValueError("edge %s needs a weight >= 1" % eid)
        for eid in self.marked:
            if eid not in self.weights:
                raise ValueError("marked edge %s does not exist" % eid)
        self._check_connected_and_valences()

    def _check_connected_and_valences(self):
        adjacency: Dict[str, list] = {v: [] for v in self.vertices}
        for tail, head in self.bounded_edges:
            adjacency[tail].append(head)
            adjacency[head].append(tail)
        valence = {v: len(adjacency[v]) for v in self.vertices}
        for vertex, _ in self.unbounded_edges:
            valence[vertex] += 1
        for v, k in valence.items():
            if k < 3:
                raise ValueError("vertex %s has valence %d < 3" % (v, k))
        if self.vertices:
            seen = {self.vertices[0]}
            stack = [self.vertices[0]]
            while stack:
                for w in adjacency[stack.pop()]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != len(self.vertices):
                raise ValueError("graph is not connected")

    def edge_ids(self) -> Tuple[EdgeId, ...]:
        return tuple("b%d" % i for i in range(len(self.bounded_edges))) + tuple(
            "u%d" % i for i in range(len(self.unbounded_edges))
        )

    def bounded_ids(self) -> Tuple[EdgeId, ...]:
        return tuple("b%d" % i for i in range(len(self.bounded_edges)))

    def unbounded_ids(self) -> Tuple[EdgeId, ...]:
        return tuple("u%d" % i for i in range(len(self.unbounded_edges)))

    def edges_at(self, vertex: str) -> Tuple[EdgeId, ...]:
        out = []
        for i, (tail, head) in enumerate(self.bounded_edges):
            if tail == vertex or head == vertex:
                out.append("b%d" % i)
        for i, (v, _) in enumerate(self.unbounded_edges):
            if v == vertex:
                out.append("u%d" % i)
        return tuple(out)

    def is_trivalent(self) -> bool:
        return all(len(self.edges_at(v)) == 3 for v in self.vertices)


@dataclass(frozen=True)
class TropicalCurve:
    """Embedded tropical curve: graph plus vertex positions in Q^n."""

    graph: TropicalGraph
    positions: Mapping[str, Point]
    n: int

    def __post_init__(self):
        for v in self.graph.vertices:
            p = self.positions.get(v)
            if p is None or len(p) != self.n:
                raise ValueError("vertex %s needs a position in Q^%d" % (v, self.n))
        for _, direction in self.graph.unbounded_edges:
            if len(direction) != self.n:
                raise ValueError("unbounded direction has wrong dimension")

    def position(self, v: str) -> Point:
        return self.positions[v]

    def bounded_vector(self, i: int) -> Point:
        """head - tail displacement of bounded edge i."""
        tail, head = self.graph.bounded_edges[i]
        pt, ph = self.positions[tail], self.positions[head]
        return tuple(a - b for a, b in zip(ph, pt))

    def edge_direction(self, eid: EdgeId, at_vertex: Optional[str] = None) -> Vec:
        """Primitive direction of an edge, outgoing from ``at_vertex``.

        For a bounded edge the direction is recomputed from the endpoint
        positions; a zero displacement raises DegenerateEdge.
        """
        kind, idx = eid[0], int(eid[1:])
        if kind == "u":
            vertex, direction = self.graph.unbounded_edges[idx]
            return tuple(direction)
        tail, head = self.graph.bounded_edges[idx]
        disp = self.bounded_vector(idx)
        if all(x == 0 for x in disp):
            raise DegenerateEdge("bounded edge %s has equal endpoints" % eid)
        scaled = _rational_primitive(disp)
        if at_vertex is None or at_vertex == tail:
            return scaled
        if at_vertex == head:
            return tuple(-x for x in scaled)
        raise ValueError("vertex %s is not an endpoint of %s" % (at_vertex, eid))

    def lattice_length(self, i: int) -> Fraction:
        """Integral affine length of bounded edge i: the factor k with
        head - tail == k * primitive_direction."""
        disp = self.bounded_vector(i)
        if all(x == 0 for x in disp):
            raise DegenerateEdge("bounded edge b%d has equal endpoints" % i)
        u = _rational_primitive(disp)
        for a, b in zip(disp, u):
            if b != 0:
                return Fraction(a) / b
        raise AssertionError("unreachable")

    def weight(self, eid: EdgeId) -> int:
        return self.graph.weights[eid]


def _rational_primitive(disp: Sequence[Fraction]) -> Vec:
    """Primitive integer vector parallel to a rational displacement."""
    denom = 1
    for x in disp:
        denom = denom * Fraction(x).denominator // gcd(denom, Fraction(x).denominator)
    ints = [int(Fraction(x) * denom) for x in disp]
    return primitive_vector(ints)


@dataclass(frozen=True)
class Degree:
    """Multiset of weighted unbounded directions, v -> multiplicity."""

    entries: Mapping[Vec, int]

    def __post_init__(self):
        for v, k in self.entries.items():
            if all(x == 0 for x in v):
                raise ValueError("degree entries must be nonzero vectors")
            if k < 0:
                raise ValueError("degree multiplicities must be nonnegative")

    def total(self) -> int:
        return sum(self.entries.values())

    def items(self):
        return sorted(self.entries.items())

    def is_balanced(self) -> bool:
        if not self.entries:
            return True
        n = len(next(iter(self.entries)))
        return all(
            sum(v[k] * c for v, c in self.entries.items()) == 0 for k in range(n)
        )

    @staticmethod
    def projective(d: int) -> "Degree":
        """Degree of plane projective curves of degree d: d copies each of
        (-1,0), (0,-1), (1,1)."""
        if d < 1:
            raise ValueError("degree must be positive")
        return Degree({(-1, 0): d, (0, -1): d, (1, 1): d})


@dataclass(frozen=True)
class DualTriangle:
    """Side data of the triangle dual to a trivalent plane vertex.

    Stored by (direction, weight) sides only; lattice point counts are all
    that downstream formulas consume.
    """

    sides: Tuple[Tuple[Vec, int], ...]
    twice_area: int
    boundary_points: int
    interior_points: int

    def explicit_vertices(self) -> Tuple[Vec, Vec, Vec]:
        """One concrete placement: corners obtained by walking the rotated
        side vectors from the origin."""
        corners = [(0, 0)]
        x, y = 0, 0
        for (ux, uy), w in self.sides[:2]:
            x, y = x + w * (-uy), y + w * ux
            corners.append((x, y))
        return tuple(corners)

    def interior_points_bruteforce(self) -> int:
        """Row-by-row lattice count inside the explicit triangle; used as an
        independent check of the Pick-formula value."""
        return _interior_points_of_triangle(self.explicit_vertices())


def _interior_points_of_triangle(corners) -> int:
    (x0, y0), (x1, y1), (x2, y2) = corners
    area2 = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
    if area2 == 0:
        return 0
    if area2 < 0:
        (x1, y1), (x2, y2) = (x2, y2), (x1, y1)
    count = 0
    ymin = min(y0, y1, y2)
    ymax = max(y0, y1, y2)
    edges = [((x0, y0), (x1, y1)), ((x1, y1), (x2, y2)), ((x2, y2), (x0, y0))]
    for y in range(ymin + 1, ymax):
        xs = []
        for (ax, ay), (bx, by) in edges:
            if ay == by:
                continue
            if min(ay, by) <= y <= max(ay, by):
                xs.append(Fraction(ax) + Fraction((y - ay) * (bx - ax), by - ay))
        lo, hi = min(xs), max(xs)
        # strict interior: integer x in (lo, hi)
        first = int(lo) + 1 if lo.denominator == 1 else -(-lo.numerator // lo.denominator)
        last = int(hi) - 1 if hi.denominator == 1 else hi.numerator // hi.denominator
        if last >= first:
            count += last - first + 1
    return count


def check_balancing(curve: TropicalCurve) -> list:
    """Violations of the balancing condition, one (vertex, sum) per bad vertex."""
    violations = []
    for v in curve.graph.vertices:
        total = [0] * curve.n
        for eid in curve.graph.edges_at(v):
            u = curve.edge_direction(eid, at_vertex=v)
            w = curve.weight(eid)
            # A bounded loop edge contributes both of its flags.
            kind, idx = eid[0], int(eid[1:])
            flags = 1
            if kind == "b":
                tail, head = curve.graph.bounded_edges[idx]
                if tail == head == v:
                    flags = 0  # both directions cancel
            if flags:
                total = [t + w * x for t, x in zip(total, u)]
        if any(t != 0 for t in total):
            violations.append((v, tuple(total)))
    return violations


def degree_of(curve: TropicalCurve) -> Degree:
    """Weighted unbounded-direction multiset of a balanced curve."""
    entries: Dict[Vec, int] = {}
    for i, (vertex, direction) in enumerate(curve.graph.unbounded_edges):
        w = curve.weight("u%d" % i)
        v = tuple(w * x for x in direction)
        entries[v] = entries.get(v, 0) + 1
    return Degree(entries)


def genus_of(graph: TropicalGraph) -> int:
    """First Betti number of a connected graph."""
    return len(graph.bounded_edges) - len(graph.vertices) + 1


def moduli_dimension(curve: TropicalCurve) -> int:
    """Dimension of the deformation space of the curve's type.

    n + #bounded minus the rank of the cycle-closing conditions; for a
    non-superabundant type this equals (n-3)(1-g) + |Delta|.
    """
    graph = curve.graph
    nb = len(graph.bounded_edges)
    cycles = _fundamental_cycles(graph)
    if not cycles:
        return curve.n + nb
    rows = []
    for cycle in cycles:
        for k in range(curve.n):
            row = [0] * nb
            for idx, sign in cycle:
                u = curve.edge_direction("b%d" % idx)
                row[idx] = sign * u[k]
            rows.append(row)
    return curve.n + nb - rational_rank(rows)


def expected_dimension(n: int, genus: int, degree_total: int) -> int:
    return (n - 3) * (1 - genus) + degree_total


def is_non_superabundant(curve: TropicalCurve, genus: int) -> bool:
    return moduli_dimension(curve) == expected_dimension(
        curve.n, genus, degree_of(curve).total()
    )


def _fundamental_cycles(graph: TropicalGraph):
    """Cycles of the bounded graph as lists of (bounded edge index, sign)."""
    parent = {v: None for v in graph.vertices}
    parent_edge = {}
    order = []
    if not graph.vertices:
        return []
    root = graph.vertices[0]
    seen = {root}
    stack = [root]
    tree_edges = set()
    adjacency: Dict[str, list] = {v: [] for v in graph.vertices}
    for i, (tail, head) in enumerate(graph.bounded_edges):
        adjacency[tail].append((head, i, 1))
        adjacency[head].append((tail, i, -1))
    while stack:
        v = stack.pop()
        order.append(v)
        for w, i, sign in adjacency[v]:
            if w not in seen:
                seen.add(w)
                parent[w] = v
                parent_edge[w] = (i, sign)
                tree_edges.add(i)
                stack.append(w)
    cycles = []
    for i, (tail, head) in enumerate(graph.bounded_edges):
        if i in tree_edges or tail == head:
            if tail == head and i not in tree_edges:
                cycles.append([(i, 1)])
            continue
        # path head -> root and tail -> root; cycle = edge + tail path - head path
        def path_to_root(v):
            out = []
            while parent[v] is not None:
                idx, sign = parent_edge[v]
                out.append((idx, sign))
                v = parent[v]
            return out
        cycle = [(i, 1)]
        for idx, sign in path_to_root(head):
            cycle.append((idx, sign))
        for idx, sign in path_to_root(tail):
            cycle.append((idx, -sign))
        # cancel edges appearing twice with opposite signs (common tail of paths)
        combined: Dict[int, int] = {}
        for idx, sign in cycle:
            combined[idx] = combined.get(idx, 0) + sign
        cycles.append([(idx, s) for idx, s in combined.items() if s != 0])
    return cycles


@dataclass(frozen=True)
class VertexMultiplicities:
    mult: int
    mult_r: int
    mult_m: int
    triangle: DualTriangle


def dual_triangle(sides: Sequence[Tuple[Vec, int]]) -> DualTriangle:
    """Dual triangle of a balanced trivalent direction/weight triple."""
    if len(sides) != 3:
        raise NonTrivalent("a dual triangle needs exactly three sides")
    (u1, w1), (u2, w2), (u3, w3) = sides
    balance = tuple(
        w1 * u1[k] + w2 * u2[k] + w3 * u3[k] for k in range(2)
    )
    if any(x != 0 for x in balance):
        raise ValueError("sides are not balanced: weighted sum %s" % (balance,))
    mult = abs(w1 * w2 * (u1[0] * u2[1] - u1[1] * u2[0]))
    if mult == 0:
        raise ValueError("degenerate vertex: all directions parallel")
    boundary = w1 + w2 + w3
    interior2 = mult - boundary + 2
    if interior2 % 2 != 0:
        raise AssertionError("Pick parity violated for sides %s" % (sides,))
    interior = interior2 // 2
    return DualTriangle(
        sides=tuple((tuple(u), int(w)) for u, w in sides),
        twice_area=mult,
        boundary_points=boundary,
        interior_points=interior,
    )


def vertex_multiplicities(curve: TropicalCurve, vertex: str) -> VertexMultiplicities:
    """Complex, Welschinger, and Mikhalkin multiplicities of a trivalent vertex."""
    if curve.n != 2:
        raise ValueError("vertex multiplicities are defined for plane curves")
    eids = curve.graph.edges_at(vertex)
    if len(eids) != 3:
        raise NonTrivalent("vertex %s has valence %d" % (vertex, len(eids)))
    sides = []
    for eid in eids:
        u = curve.edge_direction(eid, at_vertex=vertex)
        sides.append((u, curve.weight(eid)))
    tri = dual_triangle(sides)
    mult = tri.twice_area
    mult_r = -1 if tri.interior_points % 2 else 1
    if mult % 2 == 0:
        mult_m = 0
    else:
        mult_m = -1 if ((mult - 1) // 2) % 2 else 1
    return VertexMultiplicities(mult=mult, mult_r=mult_r, mult_m=mult_m, triangle=tri)


def curve_welschinger_mult(curve: TropicalCurve) -> int:
    """Mult_R: zero with any even bounded weight, else the product of vertex signs."""
    for eid in curve.graph.bounded_ids():
        if curve.weight(eid) % 2 == 0:
            return 0
    sign = 1
    for v in curve.graph.vertices:
        sign *= vertex_multiplicities(curve, v).mult_r
    return sign


def curve_mikhalkin_mults(curve: TropicalCurve) -> Tuple[int, int]:
    """(complex multiplicity, Mikhalkin real multiplicity) as vertex products."""
    complex_mult = 1
    real_m = 1
    for v in curve.graph.vertices:
        vm = vertex_multiplicities(curve, v)
        complex_mult *= vm.mult
        real_m *= vm.mult_m
    return complex_mult, real_m
