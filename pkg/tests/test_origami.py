from fractions import Fraction

import pytest

from veechenum.lib.errors import NotConnected, NotInVeechGroup
from veechenum.origami import (
    Origami,
    act,
    affine_automorphism,
    find_hyperbolic,
    map_point,
    matrix_word,
    sl2z_move,
    stratum,
    veech_orbit,
    word_matrix,
)

TORUS = Origami((0,), (0,))
STRIP = Origami((1, 0), (0, 1))
L_SHAPE = Origami((1, 2, 0), (1, 0, 2))


def test_validate():
    assert L_SHAPE.validate()
    with pytest.raises(NotConnected):
        Origami((0, 1), (0, 1)).validate()
    with pytest.raises(NotConnected):
        Origami((0, 0), (1, 0)).validate()


@pytest.mark.parametrize('M', [
    ((1, 0), (0, 1)),
    ((2, 1), (1, 1)),
    ((0, -1), (1, 0)),
    ((-1, 0), (0, -1)),
    ((-1, 3), (0, -1)),
    ((3, 5), (4, 7)),
    ((1, 0), (-5, 1)),
])
def test_matrix_word(M):
    assert word_matrix(matrix_word(M)) == M


def test_generators_on_strip():
    assert act(STRIP, 'T') == Origami((1, 0), (1, 0))
    assert act(act(STRIP, 'T'), 't') == STRIP
    assert sl2z_move('S', STRIP) == Origami((0, 1), (1, 0)).canonical()


def test_orbit_sizes():
    assert len(veech_orbit(TORUS).orbit) == 1
    assert len(veech_orbit(STRIP).orbit) == 3


def test_not_in_veech_group():
    with pytest.raises(NotInVeechGroup):
        affine_automorphism(STRIP, ((1, 1), (0, 1)))


def test_parabolic_automorphism():
    aut = affine_automorphism(STRIP, ((1, 2), (0, 1)))
    assert aut.verify()
    assert not aut.is_hyperbolic


def test_stabilizer_witnesses_verify():
    for aut in veech_orbit(L_SHAPE).stabilizers:
        assert aut.verify()


def test_find_hyperbolic_torus():
    aut = find_hyperbolic(TORUS)
    assert aut.is_hyperbolic
    assert abs(aut.trace) == 3
    assert aut.verify()


def test_map_point_generators():
    assert map_point(TORUS, 'T', (0, Fraction(1, 2), Fraction(1, 2))) == (0, 0, Fraction(1, 2))
    assert map_point(TORUS, 'S', (0, Fraction(1, 3), Fraction(1, 4))) == (0, Fraction(3, 4), Fraction(1, 3))
    k, x, y = map_point(STRIP, 'T', (0, Fraction(1, 2), Fraction(3, 4)))
    assert (k, x, y) == (1, Fraction(1, 4), Fraction(3, 4))


def test_automorphism_acts_on_points():
    aut = affine_automorphism(TORUS, ((2, 1), (1, 1)))
    assert aut((0, Fraction(1, 3), Fraction(1, 5))) == (0, Fraction(13, 15), Fraction(8, 15))


def test_inverse_and_power():
    aut = affine_automorphism(TORUS, ((2, 1), (1, 1)))
    assert aut.inverse().deriv == ((1, -1), (-1, 2))
    assert aut.power(2).deriv == ((5, 3), (3, 2))


def test_stratum():
    assert stratum(L_SHAPE) == ((6,), 2)
    assert stratum(TORUS) == ((2,), 1)
