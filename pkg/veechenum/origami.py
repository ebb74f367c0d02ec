"""
Square-tiled surfaces and the action of SL(2, Z) on them.

An origami is a transitive pair ``(sigma_h, sigma_v)`` of permutations of its
unit squares: ``sigma_h[k]`` is the square to the right of ``k`` and
``sigma_v[k]`` the square above. Points are ``(square, x, y)`` with
``0 <= x, y < 1``.

The generators act as

* ``T = [[1, 1], [0, 1]]``: ``sigma_v' = sigma_h^-1`` then ``sigma_v``,
* ``T^-1``: ``sigma_v' = sigma_h`` then ``sigma_v``,
* ``S = [[0, -1], [1, 0]]``: ``sigma_h' = sigma_v^-1``, ``sigma_v' = sigma_h``,

where new square ``k`` is the unit square anchored at the image of the
bottom-left corner of old square ``k`` (bottom-right for ``S``).
"""

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple
import logging

from .lib.errors import InputError, NotConnected, NotInVeechGroup
from .lib.permutation import (
    perm_check,
    perm_compose,
    perm_invert,
    perms_are_transitive,
    perms_canonical_form,
)

logger = logging.getLogger(__name__)

IntMatrix = Tuple[Tuple[int, int], Tuple[int, int]]

IDENTITY: IntMatrix = ((1, 0), (0, 1))
T_MATRIX: IntMatrix = ((1, 1), (0, 1))
T_INV_MATRIX: IntMatrix = ((1, -1), (0, 1))
S_MATRIX: IntMatrix = ((0, -1), (1, 0))

GENERATORS = {'T': T_MATRIX, 't': T_INV_MATRIX, 'S': S_MATRIX}


def mat2_mul(g: IntMatrix, h: IntMatrix) -> IntMatrix:
    (a, b), (c, d) = g
    (e, f), (x, y) = h
    return ((a * e + b * x, a * f + b * y), (c * e + d * x, c * f + d * y))


def mat2_inv(g: IntMatrix) -> IntMatrix:
    '''Returns the inverse of a determinant one matrix.'''
    (a, b), (c, d) = g
    return ((d, -b), (-c, a))


def mat2_trace(g) -> int:
    return g[0][0] + g[1][1]


def as_int_matrix(rows) -> IntMatrix:
    '''
    Raises
    -------
    InputError
        The matrix is not a 2x2 integer matrix of determinant one.
    '''
    try:
        (a, b), (c, d) = [[int(x) for x in row] for row in rows]
    except (TypeError, ValueError):
        raise InputError('expected a 2x2 integer matrix, got %r' % (rows,))
    if a * d - b * c != 1:
        raise InputError('matrix %r has determinant %d' % (rows, a * d - b * c))
    return ((a, b), (c, d))


@dataclass(frozen=True, order=True)
class Origami:
    sigma_h: Tuple[int, ...]
    sigma_v: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'sigma_h', tuple(self.sigma_h))
        object.__setattr__(self, 'sigma_v', tuple(self.sigma_v))

    @property
    def n(self) -> int:
        return len(self.sigma_h)

    def validate(self) -> bool:
        '''
        Raises
        -------
        NotConnected
            The permutations are malformed or do not act transitively.
        '''
        n = self.n
        if not (perm_check(self.sigma_h, n) and perm_check(self.sigma_v, n)):
            raise NotConnected('origami permutations must permute 0..%d' % (n - 1))
        if n and not perms_are_transitive([self.sigma_h, self.sigma_v]):
            raise NotConnected('origami is not connected')
        return True

    def canonical(self) -> 'Origami':
        perms, _, _ = perms_canonical_form([self.sigma_h, self.sigma_v])
        return Origami(tuple(perms[0]), tuple(perms[1]))

    def to_surface(self):
        from .surface import RectSurface
        return RectSurface.from_origami(self.sigma_h, self.sigma_v)


def act(o: Origami, gen: str) -> Origami:
    '''
    Applies a generator (``'T'``, ``'t'`` for ``T^-1``, or ``'S'``) keeping the
    square labels, without canonicalization.
    '''
    h, v = o.sigma_h, o.sigma_v
    if gen == 'T':
        return Origami(h, tuple(perm_compose(perm_invert(h), v)))
    if gen == 't':
        return Origami(h, tuple(perm_compose(h, v)))
    if gen == 'S':
        return Origami(tuple(perm_invert(v)), h)
    raise ValueError('unknown generator %r' % gen)


def sl2z_move(gen: str, o: Origami) -> Origami:
    '''Returns the canonical form of the origami moved by ``gen``.'''
    return act(o, gen).canonical()


def map_point(o: Origami, gen: str, point):
    '''
    Maps a point of ``o`` by the generator ``gen`` into the labelled origami
    ``act(o, gen)``.
    '''
    k, x, y = point
    if gen == 'T':
        u = x + y
        if u < 1:
            return (k, u, y)
        return (o.sigma_h[k], u - 1, y)
    if gen == 't':
        u = x - y
        if u >= 0:
            return (k, u, y)
        return (perm_invert(o.sigma_h)[k], u + 1, y)
    if gen == 'S':
        if y == 0:
            # right edge of the rotated square is the left edge of its right neighbour
            return (perm_invert(o.sigma_v)[k], y, x)
        return (k, 1 - y, x)
    raise ValueError('unknown generator %r' % gen)


def matrix_word(M: IntMatrix) -> List[Tuple[str, int]]:
    '''
    Writes ``M`` as a product of powers of ``T`` and ``S``, leftmost first.

    While ``c != 0``, ``M = T^q S M'`` with ``q = a // c`` strictly lowers ``|c|``;
    an upper triangular remainder is ``T^b`` or ``S^2 T^-b``.
    '''
    (a, b), (c, d) = M
    word = []
    while c != 0:
        q = a // c
        word.append(('T', q))
        word.append(('S', 1))
        # M' = S^-1 T^-q M
        a, b, c, d = c, d, -(a - q * c), -(b - q * d)
    if a == 1:
        word.append(('T', b))
    else:
        word.append(('S', 2))
        word.append(('T', -b))
    return [(letter, power) for letter, power in word if power != 0]


def word_matrix(word: Sequence[Tuple[str, int]]) -> IntMatrix:
    M = IDENTITY
    for letter, power in word:
        base = S_MATRIX if letter == 'S' else (T_MATRIX if power > 0 else T_INV_MATRIX)
        for _ in range(abs(power) if letter == 'T' else power):
            M = mat2_mul(M, base)
    return M


def word_generators(word: Sequence[Tuple[str, int]]) -> List[str]:
    '''Returns the single generator moves of ``word`` in the order they act.'''
    moves = []
    for letter, power in reversed(word):
        if letter == 'S':
            moves.extend('S' * power)
        else:
            moves.extend(('T' if power > 0 else 't') * abs(power))
    return moves


def find_relabel(moved: Origami, target: Origami) -> Optional[Tuple[int, ...]]:
    '''
    Returns ``r`` with ``target.sigma_h[r[j]] = r[moved.sigma_h[j]]`` and the same
    for ``sigma_v``, or ``None``.
    '''
    n = target.n
    if moved.n != n:
        return None
    for image in range(n):
        r = [-1] * n
        used = [False] * n
        r[0], used[image] = image, True
        queue = deque([0])
        ok = True
        while queue and ok:
            j = queue.popleft()
            for p_moved, p_target in ((moved.sigma_h, target.sigma_h), (moved.sigma_v, target.sigma_v)):
                nj, nr = p_moved[j], p_target[r[j]]
                if r[nj] == -1:
                    if used[nr]:
                        ok = False
                        break
                    r[nj], used[nr] = nr, True
                    queue.append(nj)
                elif r[nj] != nr:
                    ok = False
                    break
        if ok and all(x != -1 for x in r):
            return tuple(r)
    return None


@dataclass(frozen=True)
class AffineAut:
    '''
    An affine automorphism of an origami.

    Attributes
    -----------
    origami: :class:`Origami`
        The surface.
    deriv: Tuple
        The derivative, an integer matrix of determinant one.
    relabel: Tuple[:class:`int`]
        Square ``j`` of ``deriv`` applied to the origami is square ``relabel[j]``
        of the origami; unit squares go to unit squares, so no offsets occur.
    '''
    origami: Origami
    deriv: IntMatrix
    relabel: Tuple[int, ...]

    @property
    def trace(self) -> int:
        return mat2_trace(self.deriv)

    @property
    def is_hyperbolic(self) -> bool:
        return abs(self.trace) > 2

    def moves(self) -> List[Tuple[str, Origami]]:
        '''Returns ``(generator, origami before the move)`` in acting order.'''
        steps = []
        current = self.origami
        for gen in word_generators(matrix_word(self.deriv)):
            steps.append((gen, current))
            current = act(current, gen)
        return steps

    def __call__(self, point):
        '''Maps a point ``(square, x, y)`` of the origami to its image.'''
        for gen, before in self.moves():
            point = map_point(before, gen, point)
        k, x, y = point
        return (self.relabel[k], x, y)

    def verify(self) -> bool:
        '''Replays the derivative then the relabelling and compares with the origami.'''
        moved = self.origami
        for gen in word_generators(matrix_word(self.deriv)):
            moved = act(moved, gen)
        r = self.relabel
        return all(self.origami.sigma_h[r[j]] == r[moved.sigma_h[j]] and
                   self.origami.sigma_v[r[j]] == r[moved.sigma_v[j]] for j in range(moved.n))

    def inverse(self) -> 'AffineAut':
        return affine_automorphism(self.origami, mat2_inv(self.deriv))

    def power(self, k: int) -> 'AffineAut':
        M = IDENTITY
        for _ in range(k):
            M = mat2_mul(M, self.deriv)
        return affine_automorphism(self.origami, M)


def affine_automorphism(o: Origami, h) -> AffineAut:
    '''
    Returns the affine automorphism of ``o`` with derivative ``h``.

    Raises
    -------
    NotInVeechGroup
        ``h`` applied to ``o`` is not translation equivalent to ``o``.
    '''
    h = as_int_matrix(h)
    moved = o
    for gen in word_generators(matrix_word(h)):
        moved = act(moved, gen)
    r = find_relabel(moved, o)
    if r is None:
        raise NotInVeechGroup('matrix %s does not stabilize the origami' % (h,), matrix=h)
    return AffineAut(o, h, r)


class VeechOrbit(NamedTuple):
    orbit: List[Origami]
    words: Dict[Origami, IntMatrix]
    stabilizers: List[AffineAut]


def veech_orbit(o: Origami) -> VeechOrbit:
    '''
    Explores the ``S, T`` orbit of ``o`` breadth first.

    Every orbit element ``v`` is reached as ``M_v o``; an edge ``u -> g u`` that
    closes a loop gives the stabilizer element ``M_v^-1 g M_u``, returned with
    its relabelling witness.
    '''
    o.validate()
    start = o.canonical()
    words = {start: IDENTITY}
    order = [start]
    queue = deque([start])
    stabilizers = []
    seen = set()
    while queue:
        u = queue.popleft()
        for gen in ('S', 'T'):
            v = sl2z_move(gen, u)
            M = mat2_mul(GENERATORS[gen], words[u])
            if v not in words:
                words[v] = M
                order.append(v)
                queue.append(v)
                continue
            element = mat2_mul(mat2_inv(words[v]), M)
            if element == IDENTITY or element in seen:
                continue
            seen.add(element)
            stabilizers.append(affine_automorphism(o, element))
    logger.debug("origami orbit of size %d with %d stabilizer witnesses" % (len(order), len(stabilizers)))
    return VeechOrbit(sorted(order), words, stabilizers)


def find_hyperbolic(o: Origami, max_length: int = 4) -> AffineAut:
    '''
    Returns the affine automorphism with smallest ``|trace| > 2`` among products
    of at most ``max_length`` stabilizer witnesses and their inverses, ties
    broken by the matrix entries.

    Raises
    -------
    NotInVeechGroup
        No hyperbolic product was found.
    '''
    generators = []
    for aut in veech_orbit(o).stabilizers:
        for M in (aut.deriv, mat2_inv(aut.deriv)):
            if M not in generators:
                generators.append(M)
    best = None
    frontier = [IDENTITY]
    for _ in range(max_length):
        frontier = sorted({mat2_mul(M, g) for M, g in product(frontier, generators)})
        for M in frontier:
            if abs(mat2_trace(M)) > 2:
                key = (abs(mat2_trace(M)), M)
                if best is None or key < best:
                    best = key
    if best is None:
        raise NotInVeechGroup('no hyperbolic element among products of length %d' % max_length)
    return affine_automorphism(o, best[1])


def stratum(o: Origami):
    '''Returns the cone angles and genus of the origami.'''
    from .surface import stratum as surface_stratum
    return surface_stratum(o.to_surface())
