from fractions import Fraction
from functools import reduce
from math import gcd

import pytest

from veechenum.enumeration import canonical_cusp_datum, enumerate_cusp_data, enumerate_gluings
from veechenum.exactnum import NumberField
from veechenum.lib.errors import (
    AreaNotNormalized,
    NonPositiveSide,
    NotConnected,
    UnsupportedMatrix,
    WidthMismatch,
)
from veechenum.surface import (
    HORIZONTAL,
    VERTICAL,
    RectSurface,
    apply_matrix,
    build_surface,
    cylinder_decomposition,
    euler_characteristic,
    intersection_data,
    parabolic_data,
    render_svg,
    stratum,
    surfaces_equal,
    validate,
)


@pytest.fixture
def torus():
    return RectSurface.from_origami((0,), (0,))


@pytest.fixture
def l_shape():
    return RectSurface.from_origami((1, 2, 0), (1, 0, 2))


def test_validate_torus(torus):
    assert validate(torus)
    assert torus.area() == 1


def test_validate_width_mismatch():
    s = RectSurface((0, 1), (1, 0), (1, 2), (1, 1), Fraction(1, 3))
    with pytest.raises(WidthMismatch):
        validate(s)


def test_validate_not_connected():
    s = RectSurface((0, 1), (0, 1), (1, 1), (1, 1), Fraction(1, 2))
    with pytest.raises(NotConnected):
        validate(s)


def test_validate_non_positive_side():
    s = RectSurface((0,), (0,), (0,), (1,))
    with pytest.raises(NonPositiveSide):
        validate(s)


def test_validate_area():
    s = RectSurface((0,), (0,), (2,), (1,))
    with pytest.raises(AreaNotNormalized):
        validate(s)
    assert validate(s, normalized=False)


def test_build_surface_two_squares():
    A = ((2,),)
    built = build_surface(A, (1,), enumerate_gluings(A)[0])
    assert built.eigenvalue == 2
    assert built.power == 1
    assert built.parabolic.mu == 2
    assert built.surface.area() == 1
    assert stratum(built.surface) == ((2, 2), 1)


def test_build_surface_golden():
    A = ((1, 1), (1, 0))
    built = build_surface(A, (1, 1), enumerate_gluings(A)[0])
    assert built.eigenvalue.minpoly == (1, -1, -1)
    assert validate(built.surface)
    assert built.parabolic.twists == (1, 1)


def test_build_surface_power():
    A = ((1,),)
    built = build_surface(A, (2,), enumerate_gluings(A)[0])
    assert built.eigenvalue == 2
    assert built.power == 2
    assert built.parabolic.mu == 1


def test_l_shape_cylinders(l_shape):
    horizontal = cylinder_decomposition(l_shape, HORIZONTAL)
    assert [(c.w, c.h) for c in horizontal] == [(3, 1)]
    vertical = cylinder_decomposition(l_shape, VERTICAL)
    assert [(c.w, c.h) for c in vertical] == [(2, 1), (1, 1)]
    parabolic = parabolic_data(vertical)
    assert parabolic.mu == 2
    assert parabolic.twists == (1, 2)


def test_l_shape_stratum(l_shape):
    assert stratum(l_shape) == ((6,), 2)
    assert euler_characteristic(l_shape) == -2


def test_parabolic_derivative(l_shape):
    parabolic = parabolic_data(cylinder_decomposition(l_shape, HORIZONTAL))
    (a, b), (c, d) = parabolic.derivative()
    assert (a, b, c, d) == (1, 3, 0, 1)


def test_intersection_data_torus(torus):
    datum = intersection_data(torus)
    assert datum.A == ((1,),)
    assert datum.D == (1,)


def test_intersection_data_recovers_built_surface():
    A = ((1, 1), (1, 0))
    g = enumerate_gluings(A)[0]
    built = build_surface(A, (1, 1), g)
    datum = intersection_data(built.surface)
    assert sorted(map(sorted, datum.A)) == sorted(map(sorted, A))
    assert datum.D == (1, 1)


def test_apply_rotation(l_shape):
    rotated = l_shape
    for _ in range(4):
        rotated = apply_matrix(rotated, ((0, -1), (1, 0)))
    assert surfaces_equal(rotated, l_shape)
    assert validate(apply_matrix(l_shape, ((0, -1), (1, 0))))


def test_apply_diagonal_keeps_area():
    K = NumberField([1, -3, 1], (2, 3))
    lam = K.gen
    torus = RectSurface((0,), (0,), (K(1),), (K(1),))
    stretched = apply_matrix(torus, ((lam, 0), (0, 1 / lam)))
    assert stretched.area() == 1


def test_apply_rejects_shear(torus):
    with pytest.raises(UnsupportedMatrix):
        apply_matrix(torus, ((1, 1), (0, 1)))


def test_relabelled_surfaces_are_equal():
    s = RectSurface.from_origami((1, 0), (0, 1))
    t = RectSurface.from_origami((1, 0), (0, 1))
    assert s == t
    assert surfaces_equal(s, t)
    assert not surfaces_equal(s, RectSurface.from_origami((0, 1), (1, 0)))


def test_render_svg(torus):
    svg = render_svg(torus)
    assert svg.startswith('<svg')
    assert 'h0' in svg
    assert 'h0' not in render_svg(torus, labels=False)


def test_conjugate_fields_give_different_surfaces():
    # same coefficients, but the generator is the golden ratio in one and its conjugate in the other
    surfaces = []
    for interval in ((1, 2), (-1, 0)):
        K = NumberField([1, -1, -1], interval)
        w = K.gen + 2
        surfaces.append(RectSurface((0,), (0,), (w,), (K.one(),), 1 / w))
    s, t = surfaces
    assert s.area() == 1 and t.area() == 1
    assert s != t
    assert not surfaces_equal(s, t)
    assert s == RectSurface((0,), (0,), s.widths, s.heights, s.scale_sq)


@pytest.mark.parametrize('m', [1, 2])
def test_cusp_data_survive_the_surface(m):
    count = 0
    for pair in enumerate_cusp_data(m, 6):
        for g in enumerate_gluings(pair.A):
            built = build_surface(pair.A, pair.D, g)
            s = built.surface
            assert intersection_data(s) == canonical_cusp_datum(pair.A, pair.D, g)
            for direction in (HORIZONTAL, VERTICAL):
                p = parabolic_data(cylinder_decomposition(s, direction))
                assert all(mu * n == p.mu for mu, n in zip(p.moduli, p.twists))
                assert reduce(gcd, p.twists) == 1
                assert p.mu * built.power == built.eigenvalue.as_element()
            assert sum(k - 2 for k in stratum(s).cone_angles) == -2 * euler_characteristic(s)
            count += 1
    assert count > 0
