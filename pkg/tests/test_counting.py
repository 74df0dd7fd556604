import random

import pytest

from tropcount.counting import (
    InfiniteCokernel,
    count_complex,
    count_real,
    merge_reports,
    real_index,
    total_real_weight,
    twisted_real_index,
)
from tropcount.enumeration import PointConfiguration, enumerate_curves
from tropcount.exact_lattice import IntMatrix, f2_rank
from tropcount.incidence import (
    AffineConstraint,
    RealPointConfig,
    SignClass,
    build_T_h,
)
from tropcount.tropical import Degree, TropicalCurve, TropicalGraph, as_point


def line_fixture():
    graph = TropicalGraph(
        vertices=("v0",),
        bounded_edges=(),
        unbounded_edges=(("v0", (-1, 0)), ("v0", (0, -1)), ("v0", (1, 1))),
        weights={"u0": 1, "u1": 1, "u2": 1},
        marked=("u0", "u1"),
    )
    curve = TropicalCurve(graph=graph, positions={"v0": as_point((0, 0))}, n=2)
    constraints = [AffineConstraint.point((-3, 0)), AffineConstraint.point((0, -5))]
    return curve, ("u0", "u1"), constraints


def test_real_index_examples():
    b = real_index(IntMatrix.from_rows([[2, 0], [0, 3]]))
    assert (b.complex_index, b.real_index) == (6, 2)
    b = real_index(IntMatrix.identity(3))
    assert (b.complex_index, b.real_index) == (1, 1)
    b = real_index(IntMatrix.from_rows([[2, 0], [0, 2]]))
    assert (b.complex_index, b.real_index) == (4, 4)


def test_real_index_rejects_singular():
    with pytest.raises(InfiniteCokernel):
        real_index(IntMatrix.from_rows([[1, 1], [1, 1]]))


def test_kernel_lemma_at_scale():
    rng = random.Random(37)
    checked = 0
    while checked < 500:
        n = rng.randint(1, 6)
        m = IntMatrix.from_rows(
            [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        )
        if m.det() == 0:
            continue
        assert real_index(m).real_index == 2 ** (n - f2_rank(m))
        checked += 1


def test_twisted_real_index_toy():
    curve, marks, constraints = line_fixture()
    th = build_T_h(curve, constraints, marks)
    bundle = twisted_real_index(th, SignClass(bits=(0, 0)))
    assert bundle.twisted_real == bundle.real_index == 1
    # odd invariant factors: every sign class is solvable
    bundle = twisted_real_index(th, SignClass(bits=(1, 1)))
    assert bundle.twisted_real == 1


def test_total_real_weight():
    graph = TropicalGraph(
        vertices=("v0", "v1"),
        bounded_edges=(("v0", "v1"),),
        unbounded_edges=(
            ("v0", (-1, 1)),
            ("v0", (-1, -1)),
            ("v1", (1, 1)),
            ("v1", (1, -1)),
        ),
        weights={"b0": 2, "u0": 1, "u1": 1, "u2": 1, "u3": 1},
        marked=("u0",),
    )
    curve = TropicalCurve(
        graph=graph,
        positions={"v0": as_point((0, 0)), "v1": as_point((1, 0))},
        n=2,
    )
    assert total_real_weight(curve) == 2
    graph3 = TropicalGraph(
        vertices=graph.vertices,
        bounded_edges=graph.bounded_edges,
        unbounded_edges=graph.unbounded_edges,
        weights={"b0": 3, "u0": 2, "u1": 2, "u2": 2, "u3": 2},
        marked=("u0",),
    )
    curve3 = TropicalCurve(graph=graph3, positions=curve.positions, n=2)
    assert total_real_weight(curve3) == 2  # odd bounded edge, marked weight 2


def test_count_complex_line():
    curve, marks, constraints = line_fixture()
    report = count_complex([(curve, marks)], constraints)
    assert report.n_trop == 1
    assert report.rows[0].contribution_complex == 1


def test_count_real_line_any_signs():
    curve, marks, constraints = line_fixture()
    for signs in ("++ ++", "+- -+", "-- --"):
        config = RealPointConfig.from_strings(signs.split())
        for sign_t in (1, -1):
            report = count_real([(curve, marks)], constraints, config, sign_t)
            assert report.n_real_trop == 1


def test_counts_degree_two_parity_and_domination():
    config = PointConfiguration.mikhalkin(5, 7)
    curves = enumerate_curves(0, Degree.projective(2), config)
    constraints = config.constraints()
    complex_report = count_complex(curves, constraints)
    assert complex_report.n_trop == 1
    rng = random.Random(5)
    for _ in range(10):
        signs = RealPointConfig(
            signs=tuple(
                tuple(rng.choice((1, -1)) for _ in range(2)) for _ in range(5)
            )
        )
        for sign_t in (1, -1):
            real_report = count_real(curves, constraints, signs, sign_t)
            assert real_report.n_real_trop % 2 == complex_report.n_trop % 2
            assert real_report.n_real_trop <= complex_report.n_trop


def test_all_positive_untwisted():
    config = PointConfiguration.mikhalkin(5, 7)
    curves = enumerate_curves(0, Degree.projective(2), config)
    constraints = config.constraints()
    report = count_real(
        curves, constraints, RealPointConfig.all_positive(5, 2), 1
    )
    for row in report.rows:
        th = build_T_h(curves[row.curve_id][0], constraints, curves[row.curve_id][1])
        assert row.twisted_index == real_index(th.matrix).real_index


def test_vertex_product_identity_degree_two():
    config = PointConfiguration.mikhalkin(5, 7)
    curves = enumerate_curves(0, Degree.projective(2), config)
    # count_complex raises CrossCheckError if the identity fails
    report = count_complex(curves, config.constraints(), check_vertex_product=True)
    assert report.n_trop == 1


def test_merge_reports():
    curve, marks, constraints = line_fixture()
    complex_report = count_complex([(curve, marks)], constraints)
    real_report = count_real(
        [(curve, marks)], constraints, RealPointConfig.all_positive(2, 2), 1
    )
    merged = merge_reports(complex_report, real_report, {"total": 1, "mults": {0: 1}})
    assert merged.n_trop == 1 and merged.n_real_trop == 1 and merged.w_real_trop == 1
    assert merged.rows[0].contribution_complex == 1
    assert merged.rows[0].contribution_real == 1
    assert merged.rows[0].welschinger_mult == 1


def test_twisted_index_matches_sign_torus_bruteforce():
    # the twisted real index counts solutions of the monomial sign map
    # x -> (prod_j x_j^(m_ij))_i over {+-1}^n; brute force for small n
    import itertools

    from tropcount.incidence import SignClass

    class FakeTh:
        def __init__(self, matrix):
            self.matrix = matrix

    rng = random.Random(71)
    checked = 0
    while checked < 120:
        n = rng.randint(1, 5)
        m = IntMatrix.from_rows(
            [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        )
        if m.det() == 0:
            continue
        sigma_bits = tuple(rng.randint(0, 1) for _ in range(n))
        target = tuple(-1 if b else 1 for b in sigma_bits)
        solutions = 0
        for signs in itertools.product((1, -1), repeat=n):
            image = tuple(
                1 - 2 * (sum(m.at(i, j) for j in range(n) if signs[j] < 0) % 2)
                for i in range(n)
            )
            if image == target:
                solutions += 1
        bundle = twisted_real_index(FakeTh(m), SignClass(bits=sigma_bits))
        assert bundle.twisted_real == solutions
        checked += 1


def test_count_pipeline_spatial_line_with_line_constraints():
    # planar tropical line in Q^3 matched against three affine lines; the
    # counting formulas are dimension generic even though enumeration is not
    graph = TropicalGraph(
        vertices=("v0",),
        bounded_edges=(),
        unbounded_edges=(
            ("v0", (-1, 0, 0)),
            ("v0", (0, -1, 0)),
            ("v0", (1, 1, 0)),
        ),
        weights={"u0": 1, "u1": 1, "u2": 1},
        marked=("u0", "u1", "u2"),
    )
    curve = TropicalCurve(graph=graph, positions={"v0": as_point((0, 0, 0))}, n=3)
    constraints = [
        AffineConstraint.through((-3, 0, 0), [(0, 1, 1)]),
        AffineConstraint.through((0, -5, 0), [(1, 0, 1)]),
        AffineConstraint.through((2, 2, 0), [(1, -1, 2)]),
    ]
    from tropcount.incidence import check_generality_dims, match_marked_edges
    from tropcount.tropical import Degree

    degree = Degree({(-1, 0, 0): 1, (0, -1, 0): 1, (1, 1, 0): 1})
    assert check_generality_dims(0, degree, constraints)
    marks = match_marked_edges(curve, constraints)
    assert marks == ("u0", "u1", "u2")

    complex_report = count_complex([(curve, marks)], constraints)
    assert complex_report.n_trop >= 1
    for sign_t in (1, -1):
        signs = RealPointConfig(signs=((1, 1, -1), (-1, 1, 1), (1, -1, 1)))
        real_report = count_real([(curve, marks)], constraints, signs, sign_t)
        assert real_report.n_real_trop % 2 == complex_report.n_trop % 2
        assert 0 <= real_report.n_real_trop <= complex_report.n_trop
