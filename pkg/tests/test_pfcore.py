from fractions import Fraction

import pytest

from veechenum.pfcore import (
    as_matrix,
    char_poly,
    collatz_wielandt_bounds,
    is_irreducible,
    is_primitive,
    perron_root,
    perron_vector,
    spectral_radius_below,
)
from veechenum.lib.errors import NonPositiveVector, NotIrreducible


@pytest.mark.parametrize('A, expected', [
    ([[0, 2], [3, 0]], True),
    ([[1, 1], [0, 1]], False),
    ([[0]], False),
    ([[1]], True),
])
def test_is_irreducible(A, expected):
    assert is_irreducible(A) is expected


def test_is_primitive():
    assert is_primitive([[1, 1], [1, 0]])
    assert not is_primitive([[0, 1], [1, 0]])


def test_char_poly():
    assert char_poly([[2, 1], [1, 1]]) == [1, -3, 1]


def test_perron_root_rational():
    assert perron_root([[1, 1], [1, 1]]) == 2
    assert perron_root([[1]]) == 1


def test_perron_root_quadratic():
    root = perron_root([[2, 1], [1, 1]])
    assert root.minpoly == (1, -3, 1)
    assert 2 < root < 3


def test_perron_root_is_shared_between_equal_matrices():
    assert perron_root([[2, 1], [1, 1]]) is perron_root(((2, 1), (1, 1)))


def test_perron_root_reducible():
    with pytest.raises(NotIrreducible):
        perron_root([[1, 1], [0, 1]])


def test_perron_vector():
    assert perron_vector([[1, 1], [1, 1]]) == [1, 1]
    assert perron_vector([[3]]) == [1]


def test_perron_vector_is_eigenvector():
    A = [[2, 1], [1, 1]]
    root = perron_root(A)
    lam = root.as_element()
    v = perron_vector(A, root)
    assert max(v) == 1
    for row, x in zip(A, v):
        assert sum(a * y for a, y in zip(row, v)) == lam * x


@pytest.mark.parametrize('A, v, expected', [
    ([[2, 1], [1, 1]], (2, 1), (Fraction(5, 2), Fraction(3))),
    ([[1, 1], [1, 1]], (1, 1), (Fraction(2), Fraction(2))),
    ([[1]], (7,), (Fraction(1), Fraction(1))),
])
def test_collatz_wielandt_bounds(A, v, expected):
    assert collatz_wielandt_bounds(A, v) == expected


def test_collatz_wielandt_rejects_bad_vector():
    with pytest.raises(NonPositiveVector):
        collatz_wielandt_bounds([[1, 1], [1, 1]], (1, 0))


def test_spectral_radius_below():
    assert spectral_radius_below([[2, 1], [1, 1]], 3)
    assert not spectral_radius_below([[2, 1], [1, 1]], 2)
    # rho equals T exactly
    assert not spectral_radius_below([[1, 1], [1, 1]], 2)
    assert spectral_radius_below([[0]], Fraction(1, 2))


def test_as_matrix_validation():
    assert as_matrix([[1, 0], [0, 1]]) == ((1, 0), (0, 1))
    with pytest.raises(ValueError):
        as_matrix([[1, -1], [0, 1]])
    with pytest.raises(ValueError):
        as_matrix([[1, 2]])
