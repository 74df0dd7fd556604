"""Route-against-route validation.

Every configuration produced by the lattice-path enumeration is dualized
into a combinatorial type with a mark plan and handed to the exact position
solver; conversely the multiplicity totals of the realizable configurations
must reproduce the expected counts.  This ties the two independently coded
routes together curve by curve, not just at the level of totals.
"""

from tropcount.enumeration import (
    CombinatorialType,
    PointConfiguration,
    TypeEdge,
    solve_positions,
)
from tropcount.exact_lattice import primitive_vector
from tropcount.oracles import (
    _cell_edges,
    _edge_on_triangle_boundary,
    _lattice_length,
    _paths,
    _subdivision_multiplicities,
    _subdivisions,
    path_problem,
)


def _tri_ccw_sides(cell):
    a, b, c = cell[1]
    area2 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    pts = [a, b, c] if area2 > 0 else [a, c, b]
    return [
        (
            tuple(sorted((pts[i], pts[(i + 1) % 3]))),
            (pts[(i + 1) % 3][0] - pts[i][0], pts[(i + 1) % 3][1] - pts[i][1]),
        )
        for i in range(3)
    ]


def dual_type_and_plan(d, cells, steps):
    """Curve type dual to a subdivision, plus the point-to-edge plan read
    off the path steps.  Returns None for malformed chain structure."""
    tris = [c for c in cells if c[0] == "t"]
    tri_index = {c: i for i, c in enumerate(tris)}
    links = {}
    for cell in cells:
        if cell[0] != "p":
            continue
        a, b, c, w = cell[1]
        for e1, e2 in (
            (tuple(sorted((a, b))), tuple(sorted((w, c)))),
            (tuple(sorted((b, c))), tuple(sorted((a, w)))),
        ):
            links.setdefault(e1, []).append(e2)
            links.setdefault(e2, []).append(e1)
    edge_cells = {}
    for ci, cell in enumerate(cells):
        for e in _cell_edges(cell):
            edge_cells.setdefault(e, []).append(ci)
    chain_of = {}
    chains = []
    for e in sorted(edge_cells):
        if e in chain_of:
            continue
        cid = len(chains)
        members = [e]
        chain_of[e] = cid
        frontier = [e]
        while frontier:
            cur = frontier.pop()
            for nxt in links.get(cur, []):
                if nxt not in chain_of:
                    chain_of[nxt] = cid
                    members.append(nxt)
                    frontier.append(nxt)
        chains.append(members)
    edges = []
    chain_edge_idx = {}
    for cid, members in enumerate(chains):
        ends = []
        boundary_end = False
        for e in members:
            for ci in edge_cells[e]:
                cell = cells[ci]
                if cell[0] != "t":
                    continue
                for se, svec in _tri_ccw_sides(cell):
                    if se == e:
                        ends.append((tri_index[cell], (svec[1], -svec[0])))
            if _edge_on_triangle_boundary(d, e) and len(edge_cells[e]) == 1:
                boundary_end = True
        w = _lattice_length(members[0])
        if len(ends) == 2 and not boundary_end:
            (t1, v1), (t2, v2) = ends
            edges.append(
                TypeEdge(tail=t1, head=t2, vec=v1, weight=w, prim=primitive_vector(v1))
            )
        elif len(ends) == 1 and boundary_end:
            t1, v1 = ends[0]
            edges.append(
                TypeEdge(tail=t1, head=None, vec=v1, weight=w, prim=primitive_vector(v1))
            )
        else:
            return None
        chain_edge_idx[cid] = len(edges) - 1
    ctype = CombinatorialType(
        genus=0, num_vertices=len(tris), edges=tuple(edges), has_flat_vertex=False
    )
    plan = {j: chain_edge_idx[chain_of[s]] for j, s in enumerate(steps)}
    return ctype, plan


def oracle_configurations(d, points):
    problem = path_problem(d, points)
    memo = {}
    for path in _paths(problem):
        steps = [tuple(sorted(p)) for p in zip(path, path[1:])]
        for sub_l in _subdivisions(problem, path, 1, memo):
            for sub_r in _subdivisions(problem, path, -1, memo):
                cells = sub_l + sub_r
                cm, wm = _subdivision_multiplicities(d, cells)
                if cm:
                    yield cells, steps, cm, wm


def test_every_oracle_configuration_is_realizable_d3():
    d = 3
    config = PointConfiguration.mikhalkin(3 * d - 1, 11)
    total_c = total_w = 0
    count = 0
    for cells, steps, cm, wm in oracle_configurations(d, config.points):
        built = dual_type_and_plan(d, cells, steps)
        assert built is not None
        ctype, plan = built
        solved = solve_positions(ctype, config, plan)
        assert solved is not None, "unrealizable oracle configuration"
        total_c += cm
        total_w += wm
        count += 1
    assert (total_c, total_w) == (12, 8)
    assert count == 9  # one configuration per matched curve


def test_oracle_configurations_match_enumeration_d2():
    d = 2
    config = PointConfiguration.mikhalkin(3 * d - 1, 11)
    configs = list(oracle_configurations(d, config.points))
    assert len(configs) == 1
    cells, steps, cm, wm = configs[0]
    assert (cm, wm) == (1, 1)
    ctype, plan = dual_type_and_plan(d, cells, steps)
    assert solve_positions(ctype, config, plan) is not None
