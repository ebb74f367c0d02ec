from fractions import Fraction

import pytest

from veechenum.lib.errors import (
    HitSingularity,
    IncompatibleGraph,
    InputError,
    MarkovPropertyViolated,
    NotHyperbolic,
)
from veechenum.lib.payload import dumps_record, loads_record
from veechenum.markov import (
    EtaEdge,
    MarkovPartition,
    SegmentGluingGraph,
    SquareCharts,
    Segment,
    SurfacePoint,
    XiEdge,
    build_markov,
    common_refinement,
    cross,
    intersection_matrix,
    markov_bounds,
    reconstruct_from_markov,
    refine_partition,
    render_markov_svg,
    split_strip,
    to_eigenbasis,
    trace_leaf,
    verify_markov,
)
from veechenum.origami import Origami, affine_automorphism
from veechenum.pfcore import perron_root
from veechenum.surface import RectSurface, surfaces_equal

TORUS = Origami((0,), (0,))
L_SHAPE = Origami((1, 2, 0), (1, 0, 2))
CAT = ((2, 1), (1, 1))


@pytest.fixture(scope='module')
def cat_eigen():
    return to_eigenbasis(TORUS, affine_automorphism(TORUS, CAT))


@pytest.fixture(scope='module')
def cat_partition(cat_eigen):
    return build_markov(cat_eigen)


@pytest.mark.parametrize('angles, expected', [
    ((2,), (Fraction(1, 2), 2)),
    ((6,), (Fraction(3, 2), 4)),
    ((2, 2), (1, 3)),
])
def test_markov_bounds(angles, expected):
    assert markov_bounds(angles) == expected


def test_square_charts():
    charts = SquareCharts(L_SHAPE)
    assert charts.cone_angles() == (6,)
    assert {charts.corner_class(k, cx, cy) for k in range(3) for cx in (0, 1) for cy in (0, 1)} == {0}
    assert SquareCharts(TORUS).cone_angles() == (2,)


def test_trace_leaf_wraps_around():
    start = SurfacePoint(0, Fraction(1, 3), Fraction(1, 2))
    trace = trace_leaf(TORUS, start, (1, 0), max_length=2)
    assert trace.point == start
    assert trace.length == 2
    assert trace.stop is None
    assert sum(p.end - p.start for p in trace.pieces) == 2


def test_trace_leaf_stays_exact():
    trace = trace_leaf(TORUS, SurfacePoint(0, Fraction(1, 3), Fraction(1, 2)), (1, 0), max_length=2)
    assert isinstance(trace.point.x, Fraction)
    assert trace.point.x == Fraction(1, 3)
    for piece in trace.pieces:
        assert all(isinstance(c, Fraction) for c in (piece.x, piece.y, piece.start, piece.end))
    with pytest.raises(TypeError):
        trace_leaf(TORUS, SurfacePoint(0, 0.5, 0.5), (1, 0), max_length=1)


def test_trace_leaf_slope():
    start = SurfacePoint(0, Fraction(1, 3), Fraction(1, 5))
    trace = trace_leaf(TORUS, start, (1, 1), max_length=3)
    assert trace.point == start


def test_trace_leaf_hits_singularity():
    with pytest.raises(HitSingularity):
        trace_leaf(TORUS, SurfacePoint(0, 0, Fraction(1, 2)), (0, 1))


def test_trace_leaf_stops_on_segment():
    stop = Segment.trace(TORUS, SurfacePoint(0, Fraction(1, 2), Fraction(1, 8)), (0, 1), Fraction(1, 2))
    trace = trace_leaf(TORUS, SurfacePoint(0, Fraction(1, 4), Fraction(1, 2)), (1, 0), [stop])
    assert trace.stop == 0
    assert trace.length == Fraction(1, 4)
    assert trace.position == Fraction(3, 8)
    assert trace.point == SurfacePoint(0, Fraction(1, 2), Fraction(1, 2))


def test_eigenbasis_cat_map(cat_eigen):
    e = cat_eigen
    assert e.power == 1
    assert e.lam.minpoly == (1, -3, 1)
    assert cross(e.u, e.s) == 1
    (a, b), (c, d) = e.deriv
    u0, u1 = e.u
    assert a * u0 + b * u1 == e.lam_element * u0
    assert c * u0 + d * u1 == e.lam_element * u1


def test_eigenbasis_negative_trace():
    e = to_eigenbasis(TORUS, affine_automorphism(TORUS, ((-2, -1), (-1, -1))))
    assert e.power == 2
    assert e.deriv == ((5, 3), (3, 2))
    assert e.lam.minpoly == (1, -7, 1)


def test_eigenbasis_accepts_rect_surface():
    aut = affine_automorphism(TORUS, CAT)
    assert to_eigenbasis(RectSurface.from_origami((0,), (0,)), aut).power == 1


def test_eigenbasis_rejects_parabolic():
    with pytest.raises(NotHyperbolic):
        to_eigenbasis(TORUS, affine_automorphism(TORUS, ((1, 1), (0, 1))))


def test_eigenbasis_rejects_other_surface():
    with pytest.raises(InputError):
        to_eigenbasis(L_SHAPE, affine_automorphism(TORUS, CAT))


def test_cat_partition(cat_eigen, cat_partition):
    p = cat_partition
    assert len(p) == 2
    assert p.area() == 1
    low, high = markov_bounds(cat_eigen.cone_angles())
    assert low <= len(p) <= high
    assert verify_markov(p)


def test_cat_intersection_matrix(cat_partition):
    A = intersection_matrix(cat_partition)
    assert len(A) == 2
    assert perron_root(A).minpoly == (1, -3, 1)


@pytest.fixture(scope='module')
def genus_two_partition():
    aut = affine_automorphism(L_SHAPE, ((-5, -3), (2, 1)))
    return build_markov(to_eigenbasis(L_SHAPE, aut))


def test_genus_two_partition(genus_two_partition):
    p = genus_two_partition
    assert p.eigen.power == 6
    assert p.eigen.lam.minpoly == (1, -2702, 1)
    assert markov_bounds(p.eigen.cone_angles()) == (Fraction(3, 2), 4)
    assert Fraction(3, 2) <= len(p) <= 4
    assert p.area() == 3
    assert sum((r.width * r.height for r in p.rects[1:]), p.rects[0].width * p.rects[0].height) == 3
    assert verify_markov(p)


def test_genus_two_intersection_matrix(genus_two_partition):
    A = intersection_matrix(genus_two_partition)
    assert len(A) == len(genus_two_partition)
    assert perron_root(A).minpoly == (1, -2702, 1)
    assert intersection_matrix(genus_two_partition) is A


@pytest.mark.parametrize('axis', ['xi', 'eta'])
def test_refinements_keep_expansion(cat_partition, axis):
    refined, B = refine_partition(cat_partition, axis)
    assert len(refined) >= len(cat_partition)
    assert refined.area() == 1
    assert perron_root(B).minpoly == (1, -3, 1)


def test_refine_rejects_unknown_axis(cat_partition):
    with pytest.raises(ValueError):
        refine_partition(cat_partition, 'zeta')


def test_common_refinement_of_positive_power(cat_partition):
    refined = common_refinement(cat_partition)
    assert len(refined) == len(cat_partition)
    assert refined.area() == 1
    assert refined.matrix == intersection_matrix(cat_partition)


def test_common_refinement_of_negative_trace():
    aut = affine_automorphism(TORUS, ((-2, -1), (-1, -1)))
    partition = build_markov(to_eigenbasis(TORUS, aut))
    refined = common_refinement(partition)
    assert refined.lam.minpoly == (1, -3, 1)
    assert refined.area() == 1
    assert len(refined) >= len(partition)
    assert perron_root(refined.matrix) == refined.lam
    assert refined.to_dict()['p'] == len(refined)


def test_common_refinement_needs_strips(cat_partition):
    p = cat_partition
    banded = MarkovPartition(p.eigen, p.gamma, p.cuts, p.heights, p.tops, levels=[(p.heights[0] / 2,), ()])
    with pytest.raises(ValueError):
        common_refinement(banded)


def test_split_strip_is_not_markov(cat_partition):
    a, b = cat_partition.cuts[0], cat_partition.cuts[1]
    broken = split_strip(cat_partition, 0, a + (b - a) / 3)
    assert len(broken) == 3
    assert not verify_markov(broken)
    with pytest.raises(MarkovPropertyViolated):
        intersection_matrix(broken)


def test_glue_graph_sums(cat_partition):
    graph = cat_partition.glue_graph
    assert graph.rect_count == 2
    assert graph.check(cat_partition.widths, cat_partition.heights)


def test_reconstruct_from_partition(cat_partition):
    A = intersection_matrix(cat_partition)
    graph = cat_partition.glue_graph
    rebuilt = reconstruct_from_markov(A, SegmentGluingGraph.from_dict(loads_record(dumps_record(graph.to_dict()))))
    assert rebuilt.area() == 1
    widths = [r.width for r in cat_partition.rects]
    scale = rebuilt.widths[0] / widths[0]
    assert all(x == scale * w for x, w in zip(rebuilt.widths, widths))
    assert all(x == scale * edge.length for x, edge in zip(rebuilt.xi_lengths, graph.xi_edges))
    assert all(x * scale == edge.length for x, edge in zip(rebuilt.eta_lengths, graph.eta_edges))


@pytest.mark.parametrize('length', [None, '0', '7/3'])
def test_reconstruct_ignores_stored_lengths(cat_partition, length):
    A = intersection_matrix(cat_partition)
    expected = reconstruct_from_markov(A, cat_partition.glue_graph)
    data = loads_record(dumps_record(cat_partition.glue_graph.to_dict()))
    for edge in data['xi'] + data['eta']:
        edge['length'] = length
    rebuilt = reconstruct_from_markov(A, SegmentGluingGraph.from_dict(data))
    assert rebuilt.xi_lengths == expected.xi_lengths
    assert rebuilt.eta_lengths == expected.eta_lengths
    assert rebuilt.widths == expected.widths


def test_refinements_fit_the_matrix(cat_partition):
    graph = cat_partition.glue_graph
    A = intersection_matrix(cat_partition)
    for pieces, axis in ((graph.xi_refinement, 'xi'), (graph.eta_refinement, 'eta')):
        assert pieces.matrix == tuple(map(tuple, refine_partition(cat_partition, axis)[1]))
        assert perron_root(pieces.matrix) == perron_root(A)
        assert set(pieces.parents) == set(range(len(A)))


def test_reconstruct_rejects_foreign_refinement(cat_partition):
    A = intersection_matrix(cat_partition)
    data = loads_record(dumps_record(cat_partition.glue_graph.to_dict()))
    n = len(data['xi_refinement']['matrix'])
    data['xi_refinement']['matrix'] = [[1] * n for _ in range(n)]
    with pytest.raises(IncompatibleGraph):
        reconstruct_from_markov(A, SegmentGluingGraph.from_dict(data))


def test_reconstruct_needs_refinement_when_sides_leave_freedom():
    graph = SegmentGluingGraph(1, [XiEdge(0, 'S0', 'P0', 1, 0, 0), XiEdge(1, 'P0', 'S0', 1, 0, 0)],
                               [EtaEdge(0, 'S0', 'S0', 1, 0, 0)])
    with pytest.raises(IncompatibleGraph):
        reconstruct_from_markov(((1,),), graph)


def _torus_graph(xi_length=1, eta_length=1):
    return SegmentGluingGraph(1, [XiEdge(0, 'S0', 'S0', xi_length, 0, 0)],
                              [EtaEdge(0, 'S0', 'S0', eta_length, 0, 0)])


def test_reconstruct_unit_torus():
    rebuilt = reconstruct_from_markov(((1,),), _torus_graph())
    assert rebuilt.widths == (1,)
    assert rebuilt.heights == (1,)
    surface = rebuilt.as_rect_surface()
    assert surfaces_equal(surface, RectSurface.from_origami((0,), (0,)))


def test_reconstruct_rejects_infeasible_graph():
    graph = SegmentGluingGraph(
        2,
        [XiEdge(0, 'P0', 'P1', 1, 0, 0), XiEdge(1, 'P1', 'P0', 1, 1, 0)],
        [EtaEdge(0, 'P0', 'P1', 1, 0, 1), EtaEdge(1, 'P1', 'P0', 1, 1, 0)],
    )
    with pytest.raises(IncompatibleGraph):
        reconstruct_from_markov(((1, 1), (1, 1)), graph)


def test_reconstruct_rejects_size_mismatch():
    with pytest.raises(IncompatibleGraph):
        reconstruct_from_markov(((1, 1), (1, 1)), _torus_graph())


def test_graph_rejects_unknown_labels():
    graph = SegmentGluingGraph(1, [XiEdge(0, 'S0', 'S0', 1, 0, 3)], [])
    with pytest.raises(IncompatibleGraph):
        graph.check()


def test_graph_from_dict_malformed():
    with pytest.raises(IncompatibleGraph):
        SegmentGluingGraph.from_dict({'rect_count': 1, 'xi': [{'tail': 'S0'}], 'eta': []})


def test_render_markov_svg(cat_partition):
    svg = render_markov_svg(cat_partition)
    assert svg.startswith('<svg')
    assert 'stroke="red"' in svg
    assert 'stroke="blue"' in svg
