"""Integral polyhedral decompositions of Q^n.

Cones over cells, asymptotic fans, validation of decompositions that are
good for a set of matched curves, minimal rescaling, and a planar
constructor that overlays curve images and constraint points and completes
the overlay to a decomposition with convex cells.  All coordinates are
exact rationals.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Mapping, Sequence, Tuple

from .exact_lattice import primitive_vector, rational_rank
from .tropical import Point, TropicalCurve, Vec, as_point


class NonGenericInput(ValueError):
    """Two curves share a one-dimensional locus; the overlay is ill-posed."""


@dataclass(frozen=True)
class Polyhedron:
    """Rational polyhedron in V-representation: convex hull of vertices plus
    nonnegative combinations of rays."""

    vertices: Tuple[Point, ...]
    rays: Tuple[Vec, ...]
    dim: int


@dataclass(frozen=True)
class Cone:
    """Rational polyhedral cone through the origin, by primitive generators."""

    rays: Tuple[Vec, ...]
    dim: int

    @staticmethod
    def from_generators(gens: Sequence[Sequence[int]]) -> "Cone":
        prims = sorted({primitive_vector(g) for g in gens if any(g)})
        dim = rational_rank([list(p) for p in prims]) if prims else 0
        return Cone(rays=tuple(prims), dim=dim)


@dataclass(frozen=True)
class Fan:
    cones: Tuple[Cone, ...]

    def ray_directions(self) -> Tuple[Vec, ...]:
        return tuple(sorted(c.rays[0] for c in self.cones if c.dim == 1 and len(c.rays) == 1))


@dataclass(frozen=True)
class PolyhedralDecomposition:
    """Cells of a decomposition with their face-lattice incidence.

    ``incidence`` maps a cell index to the indices of its proper boundary
    cells of one dimension lower.
    """

    cells: Tuple[Polyhedron, ...]
    incidence: Mapping[int, Tuple[int, ...]]

    def cells_of_dim(self, d: int) -> List[Polyhedron]:
        return [c for c in self.cells if c.dim == d]

    def zero_cell_points(self) -> set:
        return {c.vertices[0] for c in self.cells if c.dim == 0}


@dataclass(frozen=True)
class GoodnessViolation:
    clause: str
    message: str


@dataclass(frozen=True)
class GoodnessReport:
    violations: Tuple[GoodnessViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def cone_over(cell: Polyhedron) -> Cone:
    """Closure of the cone over cell x {1}, with recession rays at height 0."""
    gens: List[Tuple[int, ...]] = []
    for v in cell.vertices:
        denom = 1
        for x in v:
            denom = denom * x.denominator // gcd(denom, x.denominator)
        gens.append(tuple(int(x * denom) for x in v) + (denom,))
    for r in cell.rays:
        gens.append(tuple(r) + (0,))
    return Cone.from_generators(gens)


def recession_cone(cell: Polyhedron) -> Cone:
    return Cone.from_generators([tuple(r) for r in cell.rays])


def asymptotic_fan(decomposition: PolyhedralDecomposition) -> Fan:
    """Recession cones of all cells, collected with their faces."""
    cones: Dict[Tuple, Cone] = {}

    def add(cone: Cone):
        cones.setdefault(cone.rays, cone)

    add(Cone(rays=(), dim=0))
    for cell in decomposition.cells:
        cone = recession_cone(cell)
        add(cone)
        for r in cone.rays:
            add(Cone(rays=(r,), dim=1))
    return Fan(cones=tuple(cones[k] for k in sorted(cones)))


def _constraint_base(constraint) -> Point:
    if hasattr(constraint, "base"):
        return as_point(constraint.base)
    return as_point(constraint)


def _constraint_direction_columns(constraint) -> List[Vec]:
    directions = getattr(constraint, "directions", None)
    if directions is None:
        return []
    return [directions.column(j) for j in range(directions.cols)]


def scale_curve(curve: TropicalCurve, s: int) -> TropicalCurve:
    positions = {v: tuple(Fraction(s) * x for x in p) for v, p in curve.positions.items()}
    return TropicalCurve(graph=curve.graph, positions=positions, n=curve.n)


def scale_point(point: Sequence, s: int) -> Point:
    return tuple(Fraction(s) * Fraction(x) for x in point)


def rescale_for_goodness(curves: Sequence[TropicalCurve], constraints: Sequence) -> int:
    """Minimal positive integer s such that, after scaling by s, all vertex
    positions and constraint base points are integral and every bounded edge
    image has lattice length divisible by its weight."""
    s = 1

    def lcm(a: int, b: int) -> int:
        return a * b // gcd(a, b)

    for curve in curves:
        for p in curve.positions.values():
            for x in p:
                s = lcm(s, Fraction(x).denominator)
        for i, eid in enumerate(curve.graph.bounded_ids()):
            w = curve.weight(eid)
            length = curve.lattice_length(i)
            # need s * length in w * Z
            num, den = length.numerator, length.denominator
            need = w * den // gcd(abs(num), w * den)
            s = lcm(s, need)
    for constraint in constraints:
        for x in _constraint_base(constraint):
            s = lcm(s, Fraction(x).denominator)
    return s


def _curve_strokes(curve: TropicalCurve):
    """Segments and rays of the curve image, as (kind, data) tuples."""
    strokes = []
    for i, (tail, head) in enumerate(curve.graph.bounded_edges):
        strokes.append(("segment", curve.positions[tail], curve.positions[head]))
    for i, (vertex, direction) in enumerate(curve.graph.unbounded_edges):
        strokes.append(("ray", curve.positions[vertex], tuple(direction)))
    return strokes


def _point_on_segment(p: Point, a: Point, b: Point) -> bool:
    d = tuple(y - x for x, y in zip(a, b))
    r = tuple(y - x for x, y in zip(a, p))
    cross = d[0] * r[1] - d[1] * r[0]
    if cross != 0:
        return False
    dot = d[0] * r[0] + d[1] * r[1]
    return 0 <= dot <= d[0] * d[0] + d[1] * d[1]


def _point_on_ray(p: Point, a: Point, direction: Vec) -> bool:
    r = tuple(y - x for x, y in zip(a, p))
    cross = direction[0] * r[1] - direction[1] * r[0]
    if cross != 0:
        return False
    dot = direction[0] * r[0] + direction[1] * r[1]
    return dot >= 0


def curve_constraint_intersections(curve: TropicalCurve, constraint) -> List[Point]:
    """Intersection points of the curve image with an affine constraint (n=2)."""
    base = _constraint_base(constraint)
    dirs = _constraint_direction_columns(constraint)
    points = []
    if not dirs:
        for kind, a, extra in _curve_strokes(curve):
            hit = (
                _point_on_segment(base, a, extra)
                if kind == "segment"
                else _point_on_ray(base, a, extra)
            )
            if hit and base not in points:
                points.append(base)
        return points
    if len(dirs) != 1:
        return []
    d = dirs[0]
    for kind, a, extra in _curve_strokes(curve):
        e = (
            tuple(y - x for x, y in zip(a, extra))
            if kind == "segment"
            else tuple(Fraction(x) for x in extra)
        )
        denom = e[0] * d[1] - e[1] * d[0]
        rhs = tuple(bx - ax for ax, bx in zip(a, base))
        if denom == 0:
            continue
        t = Fraction(rhs[0] * d[1] - rhs[1] * d[0], denom)
        if t < 0 or (kind == "segment" and t > 1):
            continue
        p = tuple(ax + t * ex for ax, ex in zip(a, e))
        if p not in points:
            points.append(p)
    return points


def validate_good(
    decomposition: PolyhedralDecomposition,
    curves: Sequence[TropicalCurve],
    constraints: Sequence,
) -> GoodnessReport:
    """Check the three goodness clauses for every curve.

    (i) curve vertices at 0-cells and edges inside the 1-skeleton,
    (ii) curve/constraint intersections at 0-cells,
    (iii) bounded-edge weights divide the lattice lengths of their images.
    Violations are returned as data, never raised.
    """
    violations: List[GoodnessViolation] = []
    zero_cells = decomposition.zero_cell_points()
    one_cells = decomposition.cells_of_dim(1)

    for ci, curve in enumerate(curves):
        for v in curve.graph.vertices:
            if curve.positions[v] not in zero_cells:
                violations.append(
                    GoodnessViolation("i", "curve %d vertex %s not a 0-cell" % (ci, v))
                )
        for kind, a, extra in _curve_strokes(curve):
            if not _stroke_in_skeleton(kind, a, extra, one_cells):
                violations.append(
                    GoodnessViolation(
                        "i", "curve %d edge at %s not in the 1-skeleton" % (ci, a)
                    )
                )
        for j, constraint in enumerate(constraints):
            for p in curve_constraint_intersections(curve, constraint):
                if p not in zero_cells:
                    violations.append(
                        GoodnessViolation(
                            "ii",
                            "curve %d meets constraint %d at %s, not a 0-cell" % (ci, j, p),
                        )
                    )
        for i, eid in enumerate(curve.graph.bounded_ids()):
            w = curve.weight(eid)
            length = curve.lattice_length(i)
            if (length / w).denominator != 1:
                violations.append(
                    GoodnessViolation(
                        "iii",
                        "curve %d edge %s: weight %d does not divide length %s"
                        % (ci, eid, w, length),
                    )
                )
    return GoodnessReport(violations=tuple(violations))


def _stroke_in_skeleton(kind, a, extra, one_cells) -> bool:
    """Is the stroke covered by the decomposition's 1-cells?"""
    if kind == "segment":
        key = _line_key_through(a, extra)
        ta, tb = _line_param(key, a), _line_param(key, extra)
        lo, hi = min(ta, tb), max(ta, tb)
    else:
        direction = extra
        b = tuple(x + d for x, d in zip(a, direction))
        key = _line_key_through(a, b)
        ta = _line_param(key, a)
        forward = _line_param(key, b) > ta
        lo, hi = (ta, None) if forward else (None, ta)
    intervals = []
    for cell in one_cells:
        cl, ch = _one_cell_interval_on_line(cell, key)
        if cl is False:
            continue
        intervals.append((cl, ch))
    return _interval_covered(lo, hi, intervals)


def _one_cell_interval_on_line(cell: Polyhedron, key):
    """Interval of a 1-cell on the line with this key, or (False, False)."""
    pts = list(cell.vertices)
    if not pts:
        return False, False
    for p in pts:
        if not _on_line(key, p):
            return False, False
    params = [_line_param(key, p) for p in pts]
    if cell.rays:
        if len(cell.rays) == 1 and len(pts) == 1:
            d = cell.rays[0]
            q = tuple(x + dd for x, dd in zip(pts[0], d))
            if not _on_line(key, q):
                return False, False
            if _line_param(key, q) > params[0]:
                return params[0], None
            return None, params[0]
        return False, False
    return min(params), max(params)


def _interval_covered(lo, hi, intervals) -> bool:
    """Is [lo, hi] (None = unbounded side) covered by the union of the
    closed intervals?"""
    if not intervals:
        return False
    if lo is None:
        reach = None
        for cl, ch in intervals:
            if cl is None:
                if ch is None:
                    return True
                if reach is None or ch > reach:
                    reach = ch
        if reach is None:
            return False
        cursor = reach
    else:
        cursor = lo
    while True:
        if hi is not None and cursor >= hi:
            return True
        reach = None
        unbounded = False
        for cl, ch in intervals:
            if cl is None or cl <= cursor:
                if ch is None:
                    unbounded = True
                    break
                if reach is None or ch > reach:
                    reach = ch
        if unbounded:
            return True
        if reach is None or reach <= cursor:
            return False
        cursor = reach


def _line_key_through(p: Point, q: Point):
    """Normalized (a, b, c) with a*x + b*y == c through two points."""
    dx, dy = q[0] - p[0], q[1] - p[1]
    if dx == 0 and dy == 0:
        raise ValueError("coincident points do not define a line")
    # normal (a, b) = rot90 of direction, cleared to primitive integers
    denom = dx.denominator * dy.denominator // gcd(dx.denominator, dy.denominator)
    ix, iy = int(dx * denom), int(dy * denom)
    a, b = -iy, ix
    g = gcd(abs(a), abs(b))
    a, b = a // g, b // g
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    c = a * p[0] + b * p[1]
    return (a, b, c)


def _on_line(key, p: Point) -> bool:
    a, b, c = key
    return a * p[0] + b * p[1] == c


def _line_param(key, p: Point) -> Fraction:
    a, b, _ = key
    d = (b, -a)
    return d[0] * p[0] + d[1] * p[1]


def _line_point_at(key, t: Fraction) -> Point:
    a, b, c = key
    if b != 0:
        p0 = (Fraction(0), Fraction(c, 1) / b)
    else:
        p0 = (Fraction(c, 1) / a, Fraction(0))
    d = (Fraction(b), Fraction(-a))
    t0 = d[0] * p0[0] + d[1] * p0[1]
    norm = d[0] * d[0] + d[1] * d[1]
    f = (t - t0) / norm
    return (p0[0] + f * d[0], p0[1] + f * d[1])


def _angle_cmp(u, v) -> int:
    """Counterclockwise order starting at the positive x-axis."""

    def half(w):
        return 0 if (w[1] > 0 or (w[1] == 0 and w[0] > 0)) else 1

    hu, hv = half(u), half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    cross = u[0] * v[1] - u[1] * v[0]
    if cross > 0:
        return -1
    if cross < 0:
        return 1
    return 0


_INF = "INF"


class _Arrangement:
    """Planar arrangement of segments and rays with exact coordinates."""

    def __init__(self):
        # line key -> {"intervals": [(lo, hi, src)], "cuts": set of t}
        self.lines: Dict[tuple, dict] = {}

    def add_stroke(self, kind, a, extra, src):
        if kind == "segment":
            key = _line_key_through(a, extra)
            ta, tb = _line_param(key, a), _line_param(key, extra)
            lo, hi = (ta, tb) if ta <= tb else (tb, ta)
        else:
            b = tuple(x + d for x, d in zip(a, extra))
            key = _line_key_through(a, b)
            ta = _line_param(key, a)
            lo, hi = (ta, None) if _line_param(key, b) > ta else (None, ta)
        entry = self.lines.setdefault(key, {"intervals": [], "cuts": set()})
        entry["intervals"].append((lo, hi, src))
        if lo is not None:
            entry["cuts"].add(lo)
        if hi is not None:
            entry["cuts"].add(hi)

    def add_cut_point(self, p: Point) -> bool:
        hit = False
        for key, entry in self.lines.items():
            if _on_line(key, p):
                t = _line_param(key, p)
                if _t_occupied(entry["intervals"], t):
                    entry["cuts"].add(t)
                    hit = True
        return hit

    def check_overlaps(self):
        """Reject positive-length overlaps between curve strokes.

        Completion walls may overlap anything; overlapping intervals are
        merged later regardless.
        """
        for key, entry in self.lines.items():
            ivs = entry["intervals"]
            for i in range(len(ivs)):
                for j in range(i + 1, len(ivs)):
                    lo1, hi1, s1 = ivs[i]
                    lo2, hi2, s2 = ivs[j]
                    if s1.startswith("wall") or s2.startswith("wall"):
                        continue
                    lo = max((x for x in (lo1, lo2) if x is not None), default=None)
                    hi = min((x for x in (hi1, hi2) if x is not None), default=None)
                    if lo is None or hi is None or lo < hi:
                        raise NonGenericInput(
                            "strokes from inputs %s and %s overlap on line %s" % (s1, s2, key)
                        )

    def compute_crossings(self):
        keys = list(self.lines)
        for i in range(len(keys)):
            for j in range(i + 1, len(keys)):
                k1, k2 = keys[i], keys[j]
                a1, b1, c1 = k1
                a2, b2, c2 = k2
                det = a1 * b2 - a2 * b1
                if det == 0:
                    continue
                x = Fraction(c1 * b2 - c2 * b1, 1) / det
                y = Fraction(a1 * c2 - a2 * c1, 1) / det
                p = (x, y)
                t1, t2 = _line_param(k1, p), _line_param(k2, p)
                if _t_occupied(self.lines[k1]["intervals"], t1) and _t_occupied(
                    self.lines[k2]["intervals"], t2
                ):
                    self.lines[k1]["cuts"].add(t1)
                    self.lines[k2]["cuts"].add(t2)

    def atomic_cells(self):
        """Vertices, finite segments, and rays after cutting."""
        vertices = set()
        segments = []
        rays = []
        for key, entry in self.lines.items():
            merged = _merge_intervals(entry["intervals"])
            for lo, hi in merged:
                cuts = sorted(t for t in entry["cuts"] if _t_in(lo, hi, t))
                if not cuts:
                    raise AssertionError("occupied interval with no anchor point")
                pts = [_line_point_at(key, t) for t in cuts]
                for p in pts:
                    vertices.add(p)
                d = _primitive_of_fraction_vec((Fraction(key[1]), Fraction(-key[0])))
                if lo is None:
                    rays.append((pts[0], tuple(-x for x in d)))
                elif cuts[0] != lo:
                    raise AssertionError("interval endpoint missing from cuts")
                for pa, pb in zip(pts, pts[1:]):
                    segments.append((pa, pb))
                if hi is None:
                    rays.append((pts[-1], d))
                elif cuts[-1] != hi:
                    raise AssertionError("interval endpoint missing from cuts")
        return vertices, segments, rays


def _primitive_of_fraction_vec(v) -> Vec:
    denom = 1
    for x in v:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    return primitive_vector([int(x * denom) for x in v])


def _t_occupied(intervals, t) -> bool:
    for lo, hi, _ in intervals:
        if (lo is None or lo <= t) and (hi is None or t <= hi):
            return True
    return False


def _t_in(lo, hi, t) -> bool:
    return (lo is None or lo <= t) and (hi is None or t <= hi)


def _merge_intervals(intervals):
    ivs = sorted(
        ((lo, hi) for lo, hi, _ in intervals),
        key=lambda iv: (iv[0] is not None, iv[0] if iv[0] is not None else 0),
    )
    merged = []
    for lo, hi in ivs:
        if merged:
            plo, phi = merged[-1]
            touches = (lo is None) or (phi is None) or (lo <= phi)
            if touches:
                if phi is not None and (hi is None or hi > phi):
                    merged[-1] = (plo, hi)
                continue
        merged.append((lo, hi))
    return merged


@dataclass
class _Face:
    vertex_walk: List
    ray_dirs: List
    reflex_corners: List  # (point, incoming primitive dir)
    edge_labels: List  # ("s", idx) / ("r", idx) of the boundary walk


def _extract_faces(vertices, segments, rays):
    """Faces of the arrangement via half-edge traversal.

    Unbounded edges meet at a single vertex at infinity whose rotation
    order is the reversed circular order of ray directions, parallel rays
    tie-broken by their transverse offset.
    """
    out: Dict[object, list] = {p: [] for p in vertices}
    out[_INF] = []
    halfedges = {}

    def add_pair(u, v, du, dv, label):
        h1 = (label, 0)
        h2 = (label, 1)
        halfedges[h1] = (u, v, du)
        halfedges[h2] = (v, u, dv)
        out[u].append((h1, du))
        out[v].append((h2, dv))
        return h1, h2

    for idx, (pa, pb) in enumerate(segments):
        d = tuple(b - a for a, b in zip(pa, pb))
        dprim = _primitive_of_fraction_vec(d)
        add_pair(pa, pb, dprim, tuple(-x for x in dprim), ("s", idx))
    for idx, (p, d) in enumerate(rays):
        add_pair(p, _INF, d, tuple(-x for x in d), ("r", idx))

    for p in out:
        if p == _INF:
            def inf_key(item):
                h, d = item
                # h is (INF -> q); underlying ray has direction -d
                ray_dir = tuple(-x for x in d)
                u, v, _ = halfedges[h]
                q = v
                a, b = -ray_dir[1], ray_dir[0]
                c = a * q[0] + b * q[1]
                return (ray_dir, c)

            # reversed circular order at infinity; ties by decreasing offset
            grouped: Dict[Vec, list] = {}
            for it in out[p]:
                grouped.setdefault(inf_key(it)[0], []).append(it)
            ordered = []
            for d in sorted(grouped, key=_AngleKey, reverse=True):
                ordered.extend(sorted(grouped[d], key=lambda it: inf_key(it)[1], reverse=True))
            out[p] = ordered
        else:
            out[p] = sorted(out[p], key=lambda it: _AngleKey(it[1]))

    position = {}
    for p, items in out.items():
        for i, (h, _) in enumerate(items):
            position[h] = (p, i)

    def twin(h):
        label, side = h
        return (label, 1 - side)

    def next_halfedge(h):
        u, v, _ = halfedges[h]
        t = twin(h)
        p, i = position[t]
        items = out[p]
        return items[(i - 1) % len(items)][0]

    faces = []
    used = set()
    for h0 in halfedges:
        if h0 in used:
            continue
        walk = []
        h = h0
        while h not in used:
            used.add(h)
            walk.append(h)
            h = next_halfedge(h)
        face = _Face(vertex_walk=[], ray_dirs=[], reflex_corners=[], edge_labels=[])
        for i, h in enumerate(walk):
            u, v, d = halfedges[h]
            face.edge_labels.append(h[0])
            if u != _INF:
                face.vertex_walk.append(u)
            if v == _INF:
                face.ray_dirs.append(d)
            if u == _INF:
                face.ray_dirs.append(tuple(-x for x in d))
            # turn at the head vertex (if finite)
            if v != _INF:
                hn = walk[(i + 1) % len(walk)]
                _, _, dn = halfedges[hn]
                cross = d[0] * dn[1] - d[1] * dn[0]
                if cross < 0:
                    face.reflex_corners.append((v, d))
        faces.append(face)
    return faces


@functools.total_ordering
class _AngleKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = tuple(v)

    def _half(self):
        x, y = self.v
        return 0 if (y > 0 or (y == 0 and x > 0)) else 1

    def __eq__(self, other):
        c = _angle_cmp(self.v, other.v)
        return c == 0

    def __lt__(self, other):
        return _angle_cmp(self.v, other.v) < 0


def _completion_directions(curves) -> List[Vec]:
    dirs = set()
    for curve in curves:
        for _, direction in curve.graph.unbounded_edges:
            dirs.add(tuple(direction))
    return sorted(dirs, key=_AngleKey)


def build_decomposition_2d(
    curves: Sequence[TropicalCurve], constraints: Sequence = ()
) -> PolyhedralDecomposition:
    """Overlay of all curve images and constraint points, completed to a
    polyhedral decomposition of Q^2 with convex cells.

    Completion rays use directions already present in the asymptotic data of
    the input curves, so the asymptotic fan is not enlarged.
    """
    for curve in curves:
        if curve.n != 2:
            raise ValueError("build_decomposition_2d is specified only for n == 2")
    if not curves:
        plane = Polyhedron(
            vertices=(as_point((0, 0)),),
            rays=((1, 0), (-1, 0), (0, 1), (0, -1)),
            dim=2,
        )
        return PolyhedralDecomposition(cells=(plane,), incidence={0: ()})

    extra_strokes: List = []
    completion_dirs = _completion_directions(curves)
    for _ in range(16):
        arr = _Arrangement()
        for ci, curve in enumerate(curves):
            for kind, a, extra in _curve_strokes(curve):
                arr.add_stroke(kind, a, extra, "curve%d" % ci)
        for si, (kind, a, extra) in enumerate(extra_strokes):
            arr.add_stroke(kind, a, extra, "wall%d" % si)
        arr.check_overlaps()
        arr.compute_crossings()
        for j, constraint in enumerate(constraints):
            for curve in curves:
                for p in curve_constraint_intersections(curve, constraint):
                    arr.add_cut_point(p)
        vertices, segments, rays = arr.atomic_cells()
        faces = _extract_faces(vertices, segments, rays)
        reflex = []
        for face in faces:
            reflex.extend(face.reflex_corners)
        if not reflex:
            return _assemble_decomposition(vertices, segments, rays, faces)
        progress = False
        for point, _incoming in reflex:
            # A full star of asymptotic directions at the corner leaves every
            # angle below pi (a balanced degree spans positively, so its
            # direction gaps are all below pi).
            for d in completion_dirs:
                new = ("ray", point, d)
                if new not in extra_strokes:
                    extra_strokes.append(new)
                    progress = True
        if not progress:
            raise AssertionError("reflex corner persists after completion")
    raise AssertionError("decomposition completion did not converge")


def _assemble_decomposition(vertices, segments, rays, faces) -> PolyhedralDecomposition:
    cells: List[Polyhedron] = []
    vertex_index: Dict = {}
    for p in sorted(vertices):
        vertex_index[p] = len(cells)
        cells.append(Polyhedron(vertices=(p,), rays=(), dim=0))
    incidence: Dict[int, Tuple[int, ...]] = {i: () for i in range(len(cells))}
    label_index: Dict = {}
    for i, (pa, pb) in enumerate(segments):
        idx = len(cells)
        label_index[("s", i)] = idx
        cells.append(Polyhedron(vertices=(pa, pb), rays=(), dim=1))
        incidence[idx] = (vertex_index[pa], vertex_index[pb])
    for i, (p, d) in enumerate(rays):
        idx = len(cells)
        label_index[("r", i)] = idx
        cells.append(Polyhedron(vertices=(p,), rays=(d,), dim=1))
        incidence[idx] = (vertex_index[p],)
    for face in faces:
        verts = []
        for p in face.vertex_walk:
            if p not in verts:
                verts.append(p)
        ray_dirs = sorted(set(face.ray_dirs))
        idx = len(cells)
        cells.append(Polyhedron(vertices=tuple(verts), rays=tuple(ray_dirs), dim=2))
        incidence[idx] = tuple(sorted({label_index[lab] for lab in face.edge_labels}))
    return PolyhedralDecomposition(cells=tuple(cells), incidence=incidence)
