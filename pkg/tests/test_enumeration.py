from fractions import Fraction

import pytest

from veechenum.enumeration import (
    CuspMatrixPair,
    brute_force_cusp_data,
    brute_force_irreducible,
    canonical_cusp_datum,
    canonical_pair,
    count_gluings_brute_force,
    entry_bound,
    enumerate_cusp_data,
    enumerate_gluings,
    enumerate_irreducible,
    enumerate_pa_matrices,
    primitive_twists,
    validate_pattern,
)
from veechenum.lib.errors import NotIrreducible, NotSymmetric


@pytest.mark.parametrize('d, T, expected', [
    (2, 3, 9),
    (1, Fraction(5, 2), 3),
    (3, 2, 8),
])
def test_entry_bound(d, T, expected):
    assert entry_bound(d, T) == expected


def test_entry_bound_rejects_bad_threshold():
    with pytest.raises(ValueError):
        entry_bound(2, 0)


def test_enumerate_irreducible_small():
    assert enumerate_irreducible(1, 2) == [((1,),)]
    assert enumerate_irreducible(1, 1) == []
    assert enumerate_irreducible(2, Fraction(21, 10), positive=True) == [((1, 1), (1, 1))]


def test_enumerate_pa_matrices():
    assert enumerate_pa_matrices(1, 2) == [((1,),)]
    assert enumerate_pa_matrices(2, 1) == []


def test_threshold_is_exclusive():
    # [[1, 1], [1, 1]] has Perron root exactly 2
    assert ((1, 1), (1, 1)) not in enumerate_irreducible(2, 2)


@pytest.mark.parametrize('d, T, positive', [
    (1, 4, False),
    (2, 2, False),
    (2, Fraction(5, 2), True),
    (2, 3, False),
])
def test_enumerate_irreducible_matches_brute_force(d, T, positive):
    assert enumerate_irreducible(d, T, positive=positive) == brute_force_irreducible(d, T, positive=positive)


def test_enumerate_irreducible_independent_of_workers():
    assert enumerate_irreducible(2, Fraction(5, 2), workers=2) == enumerate_irreducible(2, Fraction(5, 2))


def test_enumerate_cusp_data_small():
    pairs = enumerate_cusp_data(1, 3)
    assert pairs == [
        CuspMatrixPair(((1,),), (1,)),
        CuspMatrixPair(((1,),), (2,)),
        CuspMatrixPair(((2,),), (1,)),
    ]
    assert enumerate_cusp_data(1, 1) == []


@pytest.mark.parametrize('m, T', [(1, 4), (2, 2), (2, Fraction(5, 2))])
def test_enumerate_cusp_data_matches_brute_force(m, T):
    assert enumerate_cusp_data(m, T) == brute_force_cusp_data(m, T)


def test_cusp_pair_product():
    pair = CuspMatrixPair(((0, 1), (1, 1)), (2, 1))
    assert pair.m == 2
    assert pair.product() == ((0, 2), (1, 1))


def test_gluings_one_by_one():
    assert len(enumerate_gluings(((1,),))) == 1
    patterns = enumerate_gluings(((2,),))
    assert len(patterns) == 1
    assert patterns[0].sigma1 == (1, 0)
    assert patterns[0].sigma2 == (1, 0)


@pytest.mark.parametrize('A', [((1, 1), (1, 1)), ((1, 2), (2, 0)), ((2, 1), (1, 1))])
def test_gluings_match_brute_force(A):
    patterns = enumerate_gluings(A)
    assert patterns == count_gluings_brute_force(A)
    for g in patterns:
        assert validate_pattern(A, g)
        assert g.joint_counts(2) == A


def test_gluings_reject_bad_matrices():
    with pytest.raises(NotSymmetric):
        enumerate_gluings(((0, 1), (2, 0)))
    with pytest.raises(NotIrreducible):
        enumerate_gluings(((1, 0), (0, 1)))


def test_canonical_pair_identifies_conjugates():
    assert canonical_pair([2, 0, 1], [2, 1, 0]) == canonical_pair([1, 2, 0], [1, 0, 2])


def test_validate_pattern_rejects_wrong_counts():
    g = enumerate_gluings(((2,),))[0]
    assert not validate_pattern(((1,),), g)


def test_primitive_twists():
    assert primitive_twists((2, 4)) == ((1, 2), 2)
    assert primitive_twists((3,)) == ((1,), 3)


def test_canonical_cusp_datum_divides_twists():
    g = enumerate_gluings(((1,),))[0]
    datum = canonical_cusp_datum(((1,),), (3,), g)
    assert datum.D == (1,)
    assert canonical_cusp_datum(((1,),), (3,), g, primitive=False).D == (3,)
