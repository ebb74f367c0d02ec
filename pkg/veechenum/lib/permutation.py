"""
Permutations of ``{0, ..., n-1}`` stored as lists.

``p[i]`` is the image of ``i``. Products use the right action: in
``perm_compose(p1, p2)`` the permutation ``p1`` is applied first.
"""

from collections import deque
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

Perm = List[int]


def perm_id(n: int) -> Perm:
    return list(range(n))


def perm_check(p: Sequence[int], n: Optional[int] = None) -> bool:
    '''
    Returns ``True`` if ``p`` is a permutation of ``{0, ..., n-1}``.
    '''
    if n is None:
        n = len(p)
    return len(p) == n and sorted(p) == list(range(n))


def perm_invert(p: Sequence[int]) -> Perm:
    res = [0] * len(p)
    for i, j in enumerate(p):
        res[j] = i
    return res


def perm_compose(p1: Sequence[int], p2: Sequence[int]) -> Perm:
    '''
    Returns the product ``p1 p2``, ``p1`` applied first.
    '''
    return [p2[j] for j in p1]


def perm_cycles(p: Sequence[int], singletons: bool = True) -> List[Tuple[int, ...]]:
    '''
    Returns the cycles of ``p``, each starting at its smallest element, ordered
    by that element.
    '''
    seen = [False] * len(p)
    cycles = []
    for i in range(len(p)):
        if seen[i]:
            continue
        cycle = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            cycle.append(j)
            seen[j] = True
            j = p[j]
        if singletons or len(cycle) > 1:
            cycles.append(tuple(cycle))
    return cycles


def perm_order(p: Sequence[int]) -> int:
    order = 1
    for cycle in perm_cycles(p):
        order = order * len(cycle) // gcd(order, len(cycle))
    return order


def perms_transitive_components(perms: Sequence[Sequence[int]], n: Optional[int] = None) -> List[Tuple[int, ...]]:
    '''
    Returns the orbits of the group generated by ``perms``, each sorted, ordered
    by smallest element.
    '''
    if n is None:
        n = len(perms[0])
    seen = [-1] * n
    count = 0
    for i in range(n):
        if seen[i] != -1:
            continue
        todo = [i]
        seen[i] = count
        while todo:
            j = todo.pop()
            for p in perms:
                k = p[j]
                if seen[k] == -1:
                    seen[k] = count
                    todo.append(k)
        count += 1
    return [tuple(i for i in range(n) if seen[i] == c) for c in range(count)]


def perms_are_transitive(perms: Sequence[Sequence[int]]) -> bool:
    '''
    Tests whether the group generated by ``perms`` acts transitively.

    Raises
    -------
    ValueError
        ``perms`` is empty.
    '''
    if not perms:
        raise ValueError('empty list')
    n = len(perms[0])
    if n == 0:
        return True
    return len(perms_transitive_components(perms, n)) == 1


def perms_relabel(perms: Sequence[Sequence[int]], m: Sequence[int]) -> List[Perm]:
    '''
    Conjugates each permutation by the relabelling ``i -> m[i]``.
    '''
    out = []
    for p in perms:
        q = [0] * len(p)
        for i, j in enumerate(p):
            q[m[i]] = m[j]
        out.append(q)
    return out


def data_relabel(data: Sequence, m: Sequence[int]) -> list:
    '''
    Moves per-element ``data`` along the relabelling ``i -> m[i]``.
    '''
    out = [None] * len(data)
    for i, value in enumerate(data):
        out[m[i]] = value
    return out


def perms_canonical_labels_from(perms: Sequence[Sequence[int]], start: int) -> dict:
    '''
    Returns new labels for the orbit of ``start``: elements are numbered in
    breadth first order, following the permutations in the given order.

    Return Type
    -----------
    :class:`dict` mapping old to new labels, numbered from 0.
    '''
    mapping = {start: 0}
    queue = deque([start])
    while queue:
        j = queue.popleft()
        for p in perms:
            k = p[j]
            if k not in mapping:
                mapping[k] = len(mapping)
                queue.append(k)
    return mapping


def _component_key(perms, data, component, start):
    mapping = perms_canonical_labels_from(perms, start)
    size = len(component)
    relabelled = []
    for p in perms:
        q = [0] * size
        for i in component:
            q[mapping[i]] = mapping[p[i]]
        relabelled.append(tuple(q))
    moved = []
    for d in data:
        q = [None] * size
        for i in component:
            q[mapping[i]] = d[i]
        moved.append(tuple(q))
    return (tuple(relabelled), tuple(moved)), mapping


def perms_canonical_form(perms: Sequence[Sequence[int]], data: Sequence[Sequence] = (),
                         starts: Optional[Iterable[int]] = None):
    '''
    Computes a canonical representative of ``perms`` together with per-element
    ``data`` under simultaneous conjugation by relabellings.

    Every orbit is relabelled from each of its elements and the lexicographically
    smallest result kept; orbits are then concatenated in sorted order.

    Parameters
    -----------
    perms: Sequence[Sequence[:class:`int`]]
        Permutations on the same set.
    data: Sequence[Sequence]
        Labels attached to elements; they must be mutually comparable.
    starts: Optional[Iterable[:class:`int`]]
        Restricts the starting points (only for transitive input).

    Return Type
    -----------
    Tuple[List[List[:class:`int`]], List[:class:`list`], List[:class:`int`]]
        The relabelled permutations, the relabelled data and the relabelling
        ``m`` with ``new = m[old]``.
    '''
    n = len(perms[0])
    components = perms_transitive_components(perms, n)
    best_per_component = []
    for component in components:
        candidates = component
        if starts is not None and len(components) == 1:
            candidates = list(starts)
        best = None
        for start in candidates:
            key, mapping = _component_key(perms, data, component, start)
            if best is None or key < best[0]:
                best = (key, mapping)
        best_per_component.append(best)
    best_per_component.sort(key=lambda item: item[0])

    m = [0] * n
    offset = 0
    for _, mapping in best_per_component:
        for old, new in mapping.items():
            m[old] = new + offset
        offset += len(mapping)
    return perms_relabel(perms, m), [data_relabel(d, m) for d in data], m
