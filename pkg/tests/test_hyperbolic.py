from fractions import Fraction

import pytest

from veechenum.hyperbolic import (
    I,
    UNBOUNDED,
    W,
    Moebius,
    UHPPoint,
    act,
    commutator_certificate,
    cone_radius,
    cusp_area,
    cusp_witness,
    h,
    horoball_tangency,
    hyperbolic_distance_cosh,
    normalizer,
    pythagorean_angles,
    sl2z_cusp_representatives,
)
from veechenum.lib.errors import EmptyList, InputError


def test_act():
    assert act(I, W) == I
    assert act(UHPPoint(0, 2), h(1)) == UHPPoint(Fraction(4, 5), Fraction(2, 5))


def test_act_is_a_right_action():
    z = UHPPoint(Fraction(1, 3), 2)
    g, k = h(1), Moebius(2, 1, 1, 1)
    assert act(act(z, g), k) == act(z, g @ k)


@pytest.mark.parametrize('t', [0, 1, Fraction(1, 2), 3])
def test_distance_symmetric_points(t):
    assert hyperbolic_distance_cosh(UHPPoint(t, 1), UHPPoint(-t, 1)) == 1 + 2 * Fraction(t) ** 2


def test_distance_unit_shift():
    assert hyperbolic_distance_cosh(I, UHPPoint(1, 1)) == Fraction(3, 2)


def test_horoball_tangency():
    assert horoball_tangency(W) == 1
    assert horoball_tangency(h(3)) is UNBOUNDED


def test_cusp_area_sl2z():
    result = cusp_area(sl2z_cusp_representatives(3), complete_below=3)
    assert result.t0 == 1
    assert result.certified


def test_cusp_area_uncertified():
    result = cusp_area([W])
    assert result.t0 == 1
    assert not result.certified


def test_cusp_area_needs_elements():
    with pytest.raises(EmptyList):
        cusp_area([h(1)])


def test_cusp_area_conjugated_parabolic():
    # in the cusp generated by h(4) the tangency of W scales by four
    result = cusp_area([W], parabolic=h(4))
    assert result.t0 == 4


def test_sl2z_cusp_representatives():
    assert sl2z_cusp_representatives(1) == [W]
    assert len(sl2z_cusp_representatives(3)) == 1 + 1 + 2


def test_cusp_witness():
    assert cusp_witness(1) == Moebius(1, 0, -1, 1)
    assert cusp_witness(2, 1).trace == 2


def test_normalizer():
    for p in (h(4), h(Fraction(1, 9)), Moebius(1, 0, -1, 1)):
        assert p.conjugate(normalizer(p)) == h(1)
    with pytest.raises(InputError):
        normalizer(W)


def test_commutator_certificate():
    cert = commutator_certificate(1, 0, 1)
    assert cert.trace == 6
    assert cert.cosh_d == 3
    assert cert.hyperbolic
    flat = commutator_certificate(1, 1, 0)
    assert flat.trace == 2
    assert not flat.hyperbolic


def test_commutator_certificate_random_angles():
    for cos, sin in pythagorean_angles(5, seed=1):
        cert = commutator_certificate(Fraction(1, 2), cos, sin)
        assert cert.trace == 2 + sin * sin


def test_commutator_rejects_off_circle():
    with pytest.raises(InputError):
        commutator_certificate(1, 1, 1)


def test_cone_radius():
    assert cone_radius(I, [UHPPoint(1, 1), I]) == Fraction(3, 2)
    with pytest.raises(EmptyList):
        cone_radius(I, [I])


def test_input_validation():
    with pytest.raises(InputError):
        Moebius(1, 1, 1, 1)
    with pytest.raises(InputError):
        UHPPoint(0, 0)


def test_normalizer_rejects_negative_translation():
    # h(-1) is not conjugate to h(1) by a matrix of determinant one
    with pytest.raises(InputError):
        normalizer(h(-1))
