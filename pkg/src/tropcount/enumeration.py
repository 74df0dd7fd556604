"""Enumeration of marked tropical plane curves through point constraints.

The normative route: enumerate trivalent combinatorial types (trees for
genus zero) with bounded-edge data forced leaf-inward by balancing, then
assign constraint points to edges and solve exactly for positions.  Every
edge of a type carries one transverse degree of freedom (the value of a
fixed integral linear form on its supporting line); vertex balancing makes
the three transverse values at a vertex sum to zero with unit signs, and a
point pins the value of its edge.  The assignment search interleaves exact
value propagation with interval boxes on vertex coordinates (a point bounds
its edge's endpoints, bounded edges transfer bounds along their direction,
pinned lines couple the x and y ranges), which prunes wrong assignments
almost immediately for spread-out configurations.  Survivors get a full
rational solve plus geometric acceptance checks.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from .exact_lattice import solve_unique_rational, vector_gcd
from .incidence import (
    AffineConstraint,
    AmbiguousConstraint,
    ConstraintMissed,
    ConstraintOnVertex,
    match_marked_edges,
)
from .oracles import lattice_path_oracle  # re-exported oracle entry point
from .tropical import (
    Degree,
    Point,
    TropicalCurve,
    TropicalGraph,
    Vec,
    as_point,
    check_balancing,
    expected_dimension,
    moduli_dimension,
)

__all__ = [
    "CombinatorialType",
    "GenericityFailure",
    "PointConfiguration",
    "UnsupportedGenus",
    "enumerate_curves",
    "enumerate_types",
    "lattice_path_oracle",
    "solve_positions",
    "trivalent_tree_count",
]


class UnsupportedGenus(ValueError):
    """Only the genus-zero enumeration path is implemented."""


class GenericityFailure(RuntimeError):
    """A solution violates the generality assumptions; reseed the points."""


@dataclass(frozen=True)
class TypeEdge:
    tail: int
    head: Optional[int]  # None for unbounded edges
    vec: Vec  # weighted direction, tail -> head resp. outward
    weight: int
    prim: Vec


@dataclass(frozen=True)
class CombinatorialType:
    genus: int
    num_vertices: int
    edges: Tuple[TypeEdge, ...]
    has_flat_vertex: bool

    def bounded_indices(self) -> List[int]:
        return [i for i, e in enumerate(self.edges) if e.head is not None]

    def unbounded_indices(self) -> List[int]:
        return [i for i, e in enumerate(self.edges) if e.head is None]


@dataclass(frozen=True)
class PointConfiguration:
    """Constraint points in the plane, explicit or generated Mikhalkin-style."""

    points: Tuple[Point, ...]
    mode: str = "explicit"
    seed: Optional[int] = None

    def __post_init__(self):
        if len(set(self.points)) != len(self.points):
            raise ValueError("constraint points must be pairwise distinct")

    @staticmethod
    def explicit(points: Sequence[Sequence]) -> "PointConfiguration":
        return PointConfiguration(points=tuple(as_point(p) for p in points), mode="explicit")

    @staticmethod
    def mikhalkin(ell: int, seed: int) -> "PointConfiguration":
        """Points on a line of slope F/G (large coprime F, G) with spacings
        growing fast enough that each new point dwarfs all previous ones."""
        rng = random.Random(seed)
        while True:
            f = 2 * rng.randrange(500, 1500) + 1
            g = 2 * rng.randrange(400, 1200) + 1
            from math import gcd

            if gcd(f, g) == 1 and f > g:
                break
        c = rng.randrange(1, 1000)
        ratio = 16 + rng.randrange(0, 16)
        points = []
        x = 1
        for i in range(ell):
            x *= ratio ** (i + 1)
            points.append(as_point((g * x, f * x + c)))
        return PointConfiguration(points=tuple(points), mode="mikhalkin", seed=seed)

    def constraints(self) -> List[AffineConstraint]:
        return [AffineConstraint.point(p) for p in self.points]


def trivalent_tree_count(num_leaves: int) -> int:
    """(2n-5)!! trees on n labeled leaves."""
    total = 1
    for k in range(3, num_leaves + 1):
        total *= 2 * k - 5
    return total


def _trees(num_leaves: int) -> Iterator[Tuple[Tuple[int, int], ...]]:
    """All trivalent trees on leaves 0..n-1; internal nodes are n, n+1, ...

    Iterative leaf insertion: each tree on k leaves arises from a unique
    (tree on k-1 leaves, edge) pair, so every tree is produced exactly once.
    """
    if num_leaves < 3:
        raise ValueError("a trivalent tree needs at least three leaves")

    def insert(edges: Tuple[Tuple[int, int], ...], leaf: int, internal: int) -> Iterator:
        if leaf == num_leaves:
            yield edges
            return
        for i, (a, b) in enumerate(edges):
            new_edges = (
                edges[:i]
                + ((a, internal), (internal, b), (internal, leaf))
                + edges[i + 1 :]
            )
            yield from insert(new_edges, leaf + 1, internal + 1)

    first_internal = num_leaves
    base = ((0, first_internal), (1, first_internal), (2, first_internal))
    yield from insert(base, 3, first_internal + 1)


def _rot90(v: Vec) -> Vec:
    return (-v[1], v[0])


def _type_from_tree(
    tree_edges: Tuple[Tuple[int, int], ...], leaf_vecs: Sequence[Vec], num_leaves: int
) -> Optional[CombinatorialType]:
    """Forced bounded-edge data from the leaf directions, or None when some
    bounded direction degenerates to zero."""
    nodes = {a for e in tree_edges for a in e}
    internal = sorted(n for n in nodes if n >= num_leaves)
    vertex_index = {n: i for i, n in enumerate(internal)}

    adjacency: Dict[int, List[Tuple[int, int]]] = {n: [] for n in nodes}
    for i, (a, b) in enumerate(tree_edges):
        adjacency[a].append((b, i))
        adjacency[b].append((a, i))

    # leaf-vector sum below every node, one iterative post-order pass
    root = internal[0]
    order = []
    parent_of = {root: None}
    stack = [root]
    while stack:
        node = stack.pop()
        order.append(node)
        for child, _ in adjacency[node]:
            if child != parent_of.get(node):
                parent_of[child] = node
                stack.append(child)
    below: Dict[int, Vec] = {}
    for node in reversed(order):
        if node < num_leaves:
            below[node] = leaf_vecs[node]
            continue
        sx = sy = 0
        for child, _ in adjacency[node]:
            if child == parent_of[node]:
                continue
            vx, vy = below[child]
            sx += vx
            sy += vy
        below[node] = (sx, sy)

    edges: List[TypeEdge] = []
    for a, b in tree_edges:
        if a < num_leaves or b < num_leaves:
            leaf, vert = (a, b) if a < num_leaves else (b, a)
            vec = leaf_vecs[leaf]
            w = vector_gcd(vec)
            edges.append(
                TypeEdge(
                    tail=vertex_index[vert],
                    head=None,
                    vec=vec,
                    weight=w,
                    prim=tuple(x // w for x in vec),
                )
            )
        else:
            # orient away from the root: vec = sum over the child side
            child = b if parent_of[b] == a else a
            tail, head = (a, b) if child == b else (b, a)
            vec = below[child]
            if vec == (0, 0):
                return None
            w = vector_gcd(vec)
            edges.append(
                TypeEdge(
                    tail=vertex_index[tail],
                    head=vertex_index[head],
                    vec=vec,
                    weight=w,
                    prim=tuple(x // w for x in vec),
                )
            )

    # flat vertices: all incident directions parallel (zero complex mult)
    incident: Dict[int, List[Vec]] = {}
    for e in edges:
        incident.setdefault(e.tail, []).append(e.vec)
        if e.head is not None:
            incident.setdefault(e.head, []).append(e.vec)
    flat = False
    for vecs in incident.values():
        v0 = vecs[0]
        if all(v0[0] * v[1] - v0[1] * v[0] == 0 for v in vecs[1:]):
            flat = True
            break
    return CombinatorialType(
        genus=0, num_vertices=len(internal), edges=tuple(edges), has_flat_vertex=flat
    )


def _canonical_key(ctype: CombinatorialType):
    """AHU canonical form of the direction-labeled tree.

    Rooted at the (at most two) centers of the internal tree, so
    isomorphic types get equal keys without minimizing over all roots.
    """
    adjacency: Dict[int, List[Tuple[Vec, int, int]]] = {
        v: [] for v in range(ctype.num_vertices)
    }
    internal_neighbors: Dict[int, List[int]] = {v: [] for v in range(ctype.num_vertices)}
    for i, e in enumerate(ctype.edges):
        if e.head is None:
            adjacency[e.tail].append((e.vec, -1, i))
        else:
            adjacency[e.tail].append((e.vec, e.head, i))
            adjacency[e.head].append((tuple(-x for x in e.vec), e.tail, i))
            internal_neighbors[e.tail].append(e.head)
            internal_neighbors[e.head].append(e.tail)

    # centers of the internal tree by repeated leaf stripping
    remaining = set(range(ctype.num_vertices))
    degree = {v: len(internal_neighbors[v]) for v in remaining}
    layer = [v for v in remaining if degree[v] <= 1]
    while len(remaining) > 2:
        nxt = []
        for v in layer:
            remaining.discard(v)
            for w in internal_neighbors[v]:
                if w in remaining:
                    degree[w] -= 1
                    if degree[w] == 1:
                        nxt.append(w)
        layer = nxt
    centers = sorted(remaining)

    def canon(node: int, parent: int):
        parts = []
        for vec, other, _ in adjacency[node]:
            if other == parent:
                continue
            if other == -1:
                parts.append((vec, ()))
            else:
                parts.append((vec, canon(other, node)))
        return tuple(sorted(parts))

    return min(canon(root, -2) for root in centers)


def enumerate_types(genus: int, degree: Degree) -> List[CombinatorialType]:
    """All trivalent genus-zero types with the given degree, deduplicated
    under direction-respecting isomorphism."""
    if genus != 0:
        raise UnsupportedGenus("genus >= 1 enumeration is gated off")
    if not degree.is_balanced():
        raise ValueError("degree directions must sum to zero")
    leaf_vecs: List[Vec] = []
    for v, count in degree.items():
        leaf_vecs.extend([tuple(v)] * count)
    if len(leaf_vecs) < 3:
        return []
    seen: Set = set()
    out: List[CombinatorialType] = []
    for tree_edges in _trees(len(leaf_vecs)):
        ctype = _type_from_tree(tree_edges, leaf_vecs, len(leaf_vecs))
        if ctype is None:
            continue
        key = _canonical_key(ctype)
        if key in seen:
            continue
        seen.add(key)
        out.append(ctype)
    return out


# --- exact transverse-coordinate solver -----------------------------------
#
# All data is integer: pins are integer values of integer normal forms at
# integer points, vertex equations have +-1 coefficients, and inequality
# forms are cleared of denominators.  Fractions appear only when a bound is
# produced by division inside the interval propagation.


class _TypeSystem:
    """Per-type linear data for the transverse-coordinate search."""

    def __init__(self, ctype: CombinatorialType):
        self.ctype = ctype
        edges = ctype.edges
        self.num_edges = len(edges)
        self.normals = [_rot90(e.vec) for e in edges]

        # vertex equations: sum of +-c over incident edges (+ out, - in)
        eqs: List[List[Tuple[int, int]]] = [[] for _ in range(ctype.num_vertices)]
        for i, e in enumerate(edges):
            eqs[e.tail].append((i, 1))
            if e.head is not None:
                eqs[e.head].append((i, -1))
        self.vertex_eqs = [tuple(eq) for eq in eqs]

        # per-vertex solving pair (two incident edges with independent normals)
        self.solve_pairs: List[Optional[Tuple[int, int, int]]] = []
        for v in range(ctype.num_vertices):
            pair = None
            inc = [i for i, _ in eqs[v]]
            for i, j in itertools.combinations(inc, 2):
                det = (
                    self.normals[i][0] * self.normals[j][1]
                    - self.normals[i][1] * self.normals[j][0]
                )
                if det != 0:
                    pair = (i, j, det)
                    break
            self.solve_pairs.append(pair)

        self.bounded_idx = ctype.bounded_indices()

        # capacity data: leaves on each side of every bounded edge
        self.capacity = self._capacity_data()

    def _capacity_data(self):
        edges = self.ctype.edges
        adjacency: Dict[int, List[Tuple[int, int]]] = {}
        for i, e in enumerate(edges):
            adjacency.setdefault(e.tail, []).append(
                (e.head if e.head is not None else -1, i)
            )
            if e.head is not None:
                adjacency.setdefault(e.head, []).append((e.tail, i))
        data = []
        for i in self.ctype.bounded_indices():
            e = edges[i]
            head_side: Set[int] = set()
            stack = [e.head]
            seen_v = {e.tail, e.head}
            while stack:
                v = stack.pop()
                for other, j in adjacency[v]:
                    if j == i:
                        continue
                    head_side.add(j)
                    if other != -1 and other not in seen_v:
                        seen_v.add(other)
                        stack.append(other)
            tail_side = set(range(self.num_edges)) - head_side - {i}
            leaves_head = sum(1 for j in head_side if edges[j].head is None)
            leaves_tail = sum(1 for j in tail_side if edges[j].head is None)
            data.append((frozenset(head_side), leaves_head, frozenset(tail_side), leaves_tail))
        return data


class _Solver:
    """Search state: exact transverse values plus vertex coordinate boxes.

    Boxes are the workhorse: a point pinned on an edge bounds the endpoint
    vertices coordinatewise, bounded edges transfer bounds along their
    direction, and a known transverse value couples the x and y ranges of
    its endpoint vertices.  All bounds are integers, rounded outward where
    a division occurs, which is a sound relaxation of the strict geometry.
    """

    def __init__(self, system: _TypeSystem):
        self.system = system
        n = system.num_edges
        self.val: List[Optional[int]] = [None] * n
        # vertex boxes: per vertex [xlo, xhi, ylo, yhi], None = unbounded
        self.box: List[List] = [[None, None, None, None] for _ in range(system.ctype.num_vertices)]
        self.trail: List[Tuple] = []

    def snapshot(self):
        return len(self.trail)

    def rollback(self, mark):
        trail = self.trail
        val = self.val
        box = self.box
        while len(trail) > mark:
            kind, idx, slot, old = trail.pop()
            if kind == 0:
                val[idx] = old
            else:
                box[idx][slot] = old

    def set_val(self, idx, value) -> bool:
        cur = self.val[idx]
        if cur is not None:
            return cur == value
        self.trail.append((0, idx, 0, None))
        self.val[idx] = value
        return True

    def tighten(self, vertex: int, slot: int, bound) -> Optional[bool]:
        """slot 0/2: lower bound on x/y; slot 1/3: upper bound."""
        b = self.box[vertex]
        cur = b[slot]
        if slot % 2 == 0:
            if cur is not None and cur >= bound:
                return None
            other = b[slot + 1]
            if other is not None and bound > other:
                return False
        else:
            if cur is not None and cur <= bound:
                return None
            other = b[slot - 1]
            if other is not None and bound < other:
                return False
        self.trail.append((1, vertex, slot, cur))
        b[slot] = bound
        return True

    def apply_point_on_edge(self, edge: int, point: Tuple[int, int]) -> bool:
        """Box consequences of a point lying on the (relative interior of an)
        edge: the tail sits on the backward ray, the head on the forward one."""
        e = self.system.ctype.edges[edge]
        u = e.prim
        for vertex, sign in ((e.tail, 1), (e.head, -1)):
            if vertex is None:
                continue
            for k in (0, 1):
                uk = u[k] * sign
                if uk > 0:
                    res = self.tighten(vertex, 2 * k + 1, point[k])
                elif uk < 0:
                    res = self.tighten(vertex, 2 * k, point[k])
                else:
                    res = self.tighten(vertex, 2 * k, point[k])
                    if res is False:
                        return False
                    res = self.tighten(vertex, 2 * k + 1, point[k])
                if res is False:
                    return False
        return True

    def propagate(self) -> bool:
        val = self.val
        box = self.box
        system = self.system
        edges = system.ctype.edges
        for _ in range(12):
            changed = False
            # transverse-value cascade through the trivalent equations
            for terms in system.vertex_eqs:
                unknown = None
                many = False
                total = 0
                for i, s in terms:
                    v = val[i]
                    if v is None:
                        if unknown is None:
                            unknown = (i, s)
                        else:
                            many = True
                    else:
                        total += v if s > 0 else -v
                if unknown is None:
                    if total != 0:
                        return False
                    continue
                if not many:
                    i, s = unknown
                    if not self.set_val(i, -total if s > 0 else total):
                        return False
                    changed = True
            # line constraints of edges with known transverse value
            for i, e in enumerate(edges):
                c = val[i]
                if c is None:
                    continue
                m1, m2 = system.normals[i]
                for vertex in (e.tail, e.head):
                    if vertex is None:
                        continue
                    b = box[vertex]
                    # m1*x + m2*y == c
                    if m1 == 0:
                        for slot, bound in ((2, _floor_div(c, m2)), (3, _ceil_div(c, m2))):
                            res = self.tighten(vertex, slot, bound)
                            if res is False:
                                return False
                            if res:
                                changed = True
                        continue
                    if m2 == 0:
                        for slot, bound in ((0, _floor_div(c, m1)), (1, _ceil_div(c, m1))):
                            res = self.tighten(vertex, slot, bound)
                            if res is False:
                                return False
                            if res:
                                changed = True
                        continue
                    # y = (c - m1*x)/m2: decreasing in x iff m1, m2 share sign
                    decreasing = (m1 > 0) == (m2 > 0)
                    for xb, from_lower in ((b[0], True), (b[1], False)):
                        if xb is None:
                            continue
                        num = c - m1 * xb
                        slot = (3 if from_lower else 2) if decreasing else (2 if from_lower else 3)
                        bound = _floor_div(num, m2) if slot % 2 == 0 else _ceil_div(num, m2)
                        res = self.tighten(vertex, slot, bound)
                        if res is False:
                            return False
                        if res:
                            changed = True
                    for yb, from_lower in ((b[2], True), (b[3], False)):
                        if yb is None:
                            continue
                        num = c - m2 * yb
                        slot = (1 if from_lower else 0) if decreasing else (0 if from_lower else 1)
                        bound = _floor_div(num, m1) if slot % 2 == 0 else _ceil_div(num, m1)
                        res = self.tighten(vertex, slot, bound)
                        if res is False:
                            return False
                        if res:
                            changed = True
            # monotone transfer along bounded edges
            for i in system.bounded_idx:
                e = edges[i]
                u = e.prim
                ta, he = e.tail, e.head
                ba, bh = box[ta], box[he]
                for k in (0, 1):
                    uk = u[k]
                    lo_slot, hi_slot = 2 * k, 2 * k + 1
                    if uk > 0:
                        # head_k > tail_k
                        if ba[lo_slot] is not None:
                            res = self.tighten(he, lo_slot, ba[lo_slot])
                            if res is False:
                                return False
                            if res:
                                changed = True
                        if bh[hi_slot] is not None:
                            res = self.tighten(ta, hi_slot, bh[hi_slot])
                            if res is False:
                                return False
                            if res:
                                changed = True
                    elif uk < 0:
                        if bh[lo_slot] is not None:
                            res = self.tighten(ta, lo_slot, bh[lo_slot])
                            if res is False:
                                return False
                            if res:
                                changed = True
                        if ba[hi_slot] is not None:
                            res = self.tighten(he, hi_slot, ba[hi_slot])
                            if res is False:
                                return False
                            if res:
                                changed = True
                    else:
                        for slot in (lo_slot, hi_slot):
                            for va, vb in ((ta, he), (he, ta)):
                                bound = box[va][slot]
                                if bound is None:
                                    continue
                                res = self.tighten(vb, slot, bound)
                                if res is False:
                                    return False
                                if res:
                                    changed = True
            if not changed:
                return True
        return True

    def point_feasible(self, edge: int, point: Tuple[int, int], pin: int) -> bool:
        """Quick test that a point can sit on the edge given current boxes."""
        system = self.system
        e = system.ctype.edges[edge]
        u = e.prim
        for vertex, sign in ((e.tail, 1), (e.head, -1)):
            if vertex is None:
                continue
            b = self.box[vertex]
            for k in (0, 1):
                uk = u[k] * sign
                if uk > 0:
                    if b[2 * k] is not None and b[2 * k] > point[k]:
                        return False
                elif uk < 0:
                    if b[2 * k + 1] is not None and b[2 * k + 1] < point[k]:
                        return False
                else:
                    if b[2 * k] is not None and b[2 * k] > point[k]:
                        return False
                    if b[2 * k + 1] is not None and b[2 * k + 1] < point[k]:
                        return False
            # the pinned line must cross the box
            m1, m2 = system.normals[edge]
            smin = 0
            smax = 0
            unbounded_min = unbounded_max = False
            for coef, lo_slot in ((m1, 0), (m2, 2)):
                if coef == 0:
                    continue
                blo, bhi = b[lo_slot], b[lo_slot + 1]
                if coef > 0:
                    if blo is None:
                        unbounded_min = True
                    else:
                        smin += coef * blo
                    if bhi is None:
                        unbounded_max = True
                    else:
                        smax += coef * bhi
                else:
                    if bhi is None:
                        unbounded_min = True
                    else:
                        smin += coef * bhi
                    if blo is None:
                        unbounded_max = True
                    else:
                        smax += coef * blo
            if not unbounded_min and pin < smin:
                return False
            if not unbounded_max and pin > smax:
                return False
        return True


def _floor_div(a: int, b: int) -> int:
    return a // b if b > 0 else (-a) // (-b)


def _ceil_div(a: int, b: int) -> int:
    if b < 0:
        a, b = -a, -b
    return -((-a) // b)


def _search_assignments(
    system: _TypeSystem, pins: List[List[int]], points: List[Tuple[int, int]]
) -> Iterator[Tuple[int, ...]]:
    """DFS over injective point-to-edge assignments with box propagation.

    ``pins[j][e]`` is the transverse value pinned when point j sits on edge
    e.  The next point to place is always one with the fewest admissible
    edges.
    """
    num_points = len(pins)
    num_edges = system.num_edges
    assignment: List[int] = [-1] * num_points
    used: Set[int] = set()
    solver = _Solver(system)
    side_counts = [[0, 0] for _ in system.capacity]

    def candidates(point: int) -> List[int]:
        row = pins[point]
        out = []
        val = solver.val
        for edge in range(num_edges):
            if edge in used:
                continue
            pin = row[edge]
            cur = val[edge]
            if cur is not None and cur != pin:
                continue
            ok = True
            for idx, (head_side, leaves_head, tail_side, leaves_tail) in enumerate(
                system.capacity
            ):
                if edge in head_side:
                    if side_counts[idx][0] + 1 > leaves_head:
                        ok = False
                        break
                elif edge in tail_side:
                    if side_counts[idx][1] + 1 > leaves_tail:
                        ok = False
                        break
            if ok and solver.point_feasible(edge, points[point], pin):
                out.append(edge)
        return out

    def place(placed: int) -> Iterator[Tuple[int, ...]]:
        if placed == num_points:
            yield tuple(assignment)
            return
        best_point = None
        best_cands: List[int] = []
        for j in range(num_points):
            if assignment[j] != -1:
                continue
            cands = candidates(j)
            if best_point is None or len(cands) < len(best_cands):
                best_point = j
                best_cands = cands
                if not cands:
                    return
        for edge in best_cands:
            pin = pins[best_point][edge]
            mark = solver.snapshot()
            ok = solver.set_val(edge, pin)
            if ok:
                ok = solver.apply_point_on_edge(edge, points[best_point])
            if ok:
                ok = solver.propagate()
            if ok:
                used.add(edge)
                for idx, (head_side, _, tail_side, _) in enumerate(system.capacity):
                    if edge in head_side:
                        side_counts[idx][0] += 1
                    elif edge in tail_side:
                        side_counts[idx][1] += 1
                assignment[best_point] = edge
                yield from place(placed + 1)
                assignment[best_point] = -1
                for idx, (head_side, _, tail_side, _) in enumerate(system.capacity):
                    if edge in head_side:
                        side_counts[idx][0] -= 1
                    elif edge in tail_side:
                        side_counts[idx][1] -= 1
                used.discard(edge)
            solver.rollback(mark)

    yield from place(0)


def solve_positions(
    ctype: CombinatorialType,
    config: PointConfiguration,
    mark_plan: Mapping[int, int],
) -> Optional[Tuple[TropicalCurve, Tuple[str, ...]]]:
    """Exact positions of a type through the points with the given plan.

    Accepts iff the transverse system has a unique solution, every bounded
    edge has positive length, and every point lies in the relative interior
    of its assigned edge.  Returns None otherwise.
    """
    if ctype.has_flat_vertex:
        return None
    system = _TypeSystem(ctype)
    rows: List[List[int]] = []
    rhs: List[Fraction] = []
    for v, terms in enumerate(system.vertex_eqs):
        row = [0] * system.num_edges
        for i, s in terms:
            row[i] = s
        rows.append(row)
        rhs.append(Fraction(0))
    for j in sorted(mark_plan):
        edge = mark_plan[j]
        row = [0] * system.num_edges
        row[edge] = 1
        rows.append(row)
        m = system.normals[edge]
        p = config.points[j]
        rhs.append(m[0] * p[0] + m[1] * p[1])
    solution = solve_unique_rational(rows, rhs)
    if solution is None:
        return None
    return _reconstruct(ctype, system, config, mark_plan, solution)


def _reconstruct(ctype, system, config, mark_plan, cvals):
    positions: List[Optional[Tuple[Fraction, Fraction]]] = [None] * ctype.num_vertices
    for v in range(ctype.num_vertices):
        pair = system.solve_pairs[v]
        if pair is None:
            return None
        i, j, det = pair
        mi, mj = system.normals[i], system.normals[j]
        ci, cj = cvals[i], cvals[j]
        x = Fraction(mj[1] * ci - mi[1] * cj, det)
        y = Fraction(-mj[0] * ci + mi[0] * cj, det)
        positions[v] = (x, y)

    # positive lengths, strictly
    lengths: Dict[int, Fraction] = {}
    for i in ctype.bounded_indices():
        e = ctype.edges[i]
        a, b = positions[e.tail], positions[e.head]
        disp = (b[0] - a[0], b[1] - a[1])
        u = e.prim
        if disp[0] * u[1] - disp[1] * u[0] != 0:
            return None
        t = (disp[0] * u[0] + disp[1] * u[1]) / Fraction(u[0] * u[0] + u[1] * u[1])
        if t <= 0:
            return None
        lengths[i] = t

    # marked points strictly inside their edges
    for j, edge in mark_plan.items():
        e = ctype.edges[edge]
        a = positions[e.tail]
        u = e.prim
        p = config.points[j]
        disp = (p[0] - a[0], p[1] - a[1])
        if disp[0] * u[1] - disp[1] * u[0] != 0:
            return None
        t = (disp[0] * u[0] + disp[1] * u[1]) / Fraction(u[0] * u[0] + u[1] * u[1])
        if t <= 0:
            return None
        if e.head is not None and t >= lengths[edge]:
            return None

    # assemble the tropical curve
    vertex_ids = tuple("v%d" % v for v in range(ctype.num_vertices))
    bounded = []
    unbounded = []
    weights = {}
    edge_id_of: Dict[int, str] = {}
    for i in ctype.bounded_indices():
        e = ctype.edges[i]
        eid = "b%d" % len(bounded)
        bounded.append((vertex_ids[e.tail], vertex_ids[e.head]))
        weights[eid] = e.weight
        edge_id_of[i] = eid
    for i in ctype.unbounded_indices():
        e = ctype.edges[i]
        eid = "u%d" % len(unbounded)
        unbounded.append((vertex_ids[e.tail], e.prim))
        weights[eid] = e.weight
        edge_id_of[i] = eid
    marks = tuple(edge_id_of[mark_plan[j]] for j in sorted(mark_plan))
    graph = TropicalGraph(
        vertices=vertex_ids,
        bounded_edges=tuple(bounded),
        unbounded_edges=tuple(unbounded),
        weights=weights,
        marked=marks,
    )
    curve = TropicalCurve(
        graph=graph,
        positions={vertex_ids[v]: positions[v] for v in range(ctype.num_vertices)},
        n=2,
    )
    return curve, marks


def _genericity_checks(curve: TropicalCurve, config: PointConfiguration):
    positions = list(curve.positions.values())
    if len(set(positions)) != len(positions):
        raise GenericityFailure("two vertices share a position; reseed the points")
    for p in config.points:
        if p in set(positions):
            raise GenericityFailure("a constraint point hits a vertex; reseed the points")
    from .welschinger import NonGenericCrossing, crossing_count

    try:
        crossing_count(curve)
    except NonGenericCrossing as exc:
        raise GenericityFailure(str(exc))
    # overlapping parallel edges would break the finite-fiber clause
    strokes = []
    for i, eid in enumerate(curve.graph.bounded_ids()):
        tail, head = curve.graph.bounded_edges[i]
        strokes.append((curve.positions[tail], curve.positions[head], None))
    for i, (vertex, direction) in enumerate(curve.graph.unbounded_edges):
        strokes.append((curve.positions[vertex], None, direction))
    for a, b in itertools.combinations(strokes, 2):
        if _strokes_overlap(a, b):
            raise GenericityFailure("two edges overlap; reseed the points")


def _strokes_overlap(s1, s2) -> bool:
    a1, b1, d1 = s1
    a2, b2, d2 = s2
    v1 = (b1[0] - a1[0], b1[1] - a1[1]) if b1 is not None else d1
    v2 = (b2[0] - a2[0], b2[1] - a2[1]) if b2 is not None else d2
    if v1[0] * v2[1] - v1[1] * v2[0] != 0:
        return False
    diff = (a2[0] - a1[0], a2[1] - a1[1])
    if diff[0] * v1[1] - diff[1] * v1[0] != 0:
        return False
    # same supporting line: compare parameter intervals
    dd = Fraction(v1[0] * v1[0] + v1[1] * v1[1])

    def param(p):
        return (Fraction(p[0] - a1[0]) * v1[0] + Fraction(p[1] - a1[1]) * v1[1]) / dd

    iv1 = (Fraction(0), param(b1) if b1 is not None else None)
    start2 = param(a2)
    if b2 is not None:
        end2 = param(b2)
        iv2 = (min(start2, end2), max(start2, end2))
    else:
        forward = Fraction(d2[0]) * v1[0] + Fraction(d2[1]) * v1[1] > 0
        iv2 = (start2, None) if forward else (None, start2)
    lo = iv1[0] if iv2[0] is None else (iv2[0] if iv1[0] is None else max(iv1[0], iv2[0]))
    his = [x for x in (iv1[1], iv2[1]) if x is not None]
    hi = min(his) if his else None
    if lo is None or hi is None:
        return True
    return lo < hi


def _thread_count() -> int:
    raw = os.environ.get("TROPCOUNT_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError("TROPCOUNT_THREADS must be a positive integer")
    if value < 1:
        raise ValueError("TROPCOUNT_THREADS must be a positive integer")
    return value


def enumerate_curves(
    genus: int, degree: Degree, config: PointConfiguration
) -> List[Tuple[TropicalCurve, Tuple[str, ...]]]:
    """All marked curves of the degree through the configuration.

    Results are deterministic: types in enumeration order, assignments in
    search order.  Raises GenericityFailure when a solution violates the
    generality clauses; the caller should retry with a fresh seed.
    """
    if genus != 0:
        raise UnsupportedGenus("genus >= 1 enumeration is gated off")
    ell = degree.total() + genus - 1
    if len(config.points) != ell:
        raise ValueError(
            "degree %d needs %d points, got %d" % (degree.total(), ell, len(config.points))
        )
    denom = 1
    for p in config.points:
        for x in p:
            from math import gcd

            denom = denom * x.denominator // gcd(denom, x.denominator)
    if denom > 1:
        # solve through the scaled integral configuration, then scale back
        scaled = PointConfiguration.explicit(
            [tuple(x * denom for x in p) for p in config.points]
        )
        results = enumerate_curves(genus, degree, scaled)
        out = []
        for curve, marks in results:
            positions = {
                v: tuple(x / denom for x in p) for v, p in curve.positions.items()
            }
            out.append(
                (TropicalCurve(graph=curve.graph, positions=positions, n=curve.n), marks)
            )
        return out
    types = enumerate_types(genus, degree)
    threads = _thread_count()

    int_points = [(int(p[0]), int(p[1])) for p in config.points]

    def solve_type(ctype: CombinatorialType):
        if ctype.has_flat_vertex:
            return []
        system = _TypeSystem(ctype)
        pins = [
            [
                system.normals[e][0] * p[0] + system.normals[e][1] * p[1]
                for e in range(system.num_edges)
            ]
            for p in int_points
        ]
        found = []
        for assignment in _search_assignments(system, pins, int_points):
            plan = {j: assignment[j] for j in range(len(assignment))}
            solved = solve_positions(ctype, config, plan)
            if solved is not None:
                found.append(solved)
        return found

    results: List[Tuple[TropicalCurve, Tuple[str, ...]]] = []
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            for chunk in pool.map(solve_type, types):
                results.extend(chunk)
    else:
        for ctype in types:
            results.extend(solve_type(ctype))

    constraints = config.constraints()
    seen_signatures = set()
    accepted = []
    for curve, marks in results:
        if check_balancing(curve):
            raise AssertionError("enumerated curve is not balanced")
        try:
            rematched = match_marked_edges(curve, constraints)
        except (ConstraintOnVertex, AmbiguousConstraint) as exc:
            raise GenericityFailure(str(exc))
        except ConstraintMissed as exc:
            raise AssertionError("solver accepted a curve missing its point: %s" % exc)
        if rematched != marks:
            raise GenericityFailure("marked edges are not unique; reseed the points")
        if moduli_dimension(curve) != expected_dimension(2, genus, degree.total()):
            raise AssertionError("enumerated curve is superabundant")
        _genericity_checks(curve, config)
        signature = (
            tuple(sorted(curve.positions.values())),
            tuple(
                sorted(
                    (min(curve.positions[t], curve.positions[h]),
                     max(curve.positions[t], curve.positions[h]),
                     curve.weight("b%d" % i))
                    for i, (t, h) in enumerate(curve.graph.bounded_edges)
                )
            ),
            tuple(
                sorted(
                    (curve.positions[v], d, curve.weight("u%d" % i))
                    for i, (v, d) in enumerate(curve.graph.unbounded_edges)
                )
            ),
            marks,
        )
        if signature in seen_signatures:
            continue
        seen_signatures.add(signature)
        accepted.append((curve, marks))
    return accepted
