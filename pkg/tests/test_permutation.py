from veechenum.lib.permutation import (
    perm_compose,
    perm_cycles,
    perm_invert,
    perm_order,
    perms_are_transitive,
    perms_canonical_form,
    perms_transitive_components,
)


def test_compose_applies_left_first():
    p1 = [1, 2, 0]
    p2 = [1, 0, 2]
    assert perm_compose(p1, p2) == [0, 2, 1]
    assert perm_compose(p1, perm_invert(p1)) == [0, 1, 2]


def test_cycles_and_order():
    p = [1, 0, 3, 4, 2]
    assert perm_cycles(p) == [(0, 1), (2, 3, 4)]
    assert perm_cycles([0, 2, 1], singletons=False) == [(1, 2)]
    assert perm_order(p) == 6


def test_transitivity():
    assert perms_are_transitive([[1, 2, 0], [0, 1, 2]])
    assert not perms_are_transitive([[1, 0, 2], [1, 0, 2]])
    assert len(perms_transitive_components([[1, 0, 2], [1, 0, 2]])) == 2


def test_canonical_form_identifies_conjugates():
    first, _, _ = perms_canonical_form([[2, 0, 1], [2, 1, 0]])
    second, _, _ = perms_canonical_form([[1, 2, 0], [1, 0, 2]])
    assert first == second


def test_canonical_form_keeps_data_attached():
    perms, data, m = perms_canonical_form([[1, 0]], [['b', 'a']])
    assert perms == [[1, 0]]
    assert data[0] == ['a', 'b']
    assert sorted(m) == [0, 1]
