"""
Certified Perron-Frobenius computations for non-negative integer matrices.

Matrices are tuples of row tuples of :class:`int`.
"""

from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple
import logging

import networkx as nx
import sympy

from .exactnum import AlgebraicReal, NFElement, Rational, to_fraction
from .lib.errors import InternalAssertion, NonPositiveVector, NotIrreducible

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[int, ...], ...]

_X = sympy.Symbol('x')


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    '''
    Validates and freezes a square non-negative integer matrix.

    Raises
    -------
    ValueError
        The matrix is empty, not square, or has a negative or non-integer entry.
    '''
    matrix = tuple(tuple(int(a) for a in row) for row in rows)
    d = len(matrix)
    if d == 0:
        raise ValueError('empty matrix')
    for row, original in zip(matrix, rows):
        if len(row) != d:
            raise ValueError('matrix is not square')
        for a, b in zip(row, original):
            if a < 0 or a != b:
                raise ValueError('entries must be non-negative integers, got %r' % (b,))
    return matrix


def transpose(A: Sequence[Sequence[int]]) -> Matrix:
    return tuple(zip(*A))


def mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in zip(*B)) for row in A)


def diag_mul(D: Sequence[int], A: Sequence[Sequence[int]]) -> Matrix:
    '''Returns ``diag(D) A``.'''
    return tuple(tuple(n * a for a in row) for n, row in zip(D, A))


def support_graph(A: Sequence[Sequence[int]]) -> nx.DiGraph:
    '''Returns the digraph with an edge ``i -> j`` whenever ``A[i][j] > 0``.'''
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(A)))
    graph.add_edges_from((i, j) for i, row in enumerate(A) for j, a in enumerate(row) if a > 0)
    return graph


def is_irreducible(A: Sequence[Sequence[int]]) -> bool:
    '''
    Returns ``True`` iff the support digraph of ``A`` is strongly connected and
    ``A`` is not the 1x1 zero matrix.
    '''
    if len(A) == 1:
        return A[0][0] > 0
    return nx.is_strongly_connected(support_graph(A))


def is_primitive(A: Sequence[Sequence[int]]) -> bool:
    '''
    Returns ``True`` iff some power of ``A`` is strictly positive, that is ``A``
    is irreducible and its support digraph is aperiodic.
    '''
    return is_irreducible(A) and nx.is_aperiodic(support_graph(A))


def char_poly(A: Sequence[Sequence[int]]) -> List[int]:
    '''Returns the characteristic polynomial of ``A``, leading coefficient first.'''
    poly = sympy.Matrix(A).charpoly(_X)
    return [int(c) for c in poly.all_coeffs()]


def _require_irreducible(A):
    if not is_irreducible(A):
        raise NotIrreducible('matrix %s is not irreducible' % (list(map(list, A)),), matrix=A)


def perron_root(A: Sequence[Sequence[int]]) -> AlgebraicReal:
    '''
    Returns the Perron root of an irreducible matrix as an exact algebraic real.

    Raises
    -------
    NotIrreducible
        ``A`` is reducible.
    '''
    return _perron_root(as_matrix(A))


@lru_cache(maxsize=None)
def _perron_root(A: Matrix) -> AlgebraicReal:
    # keyed by the frozen matrix; enumerations and refinements repeat matrices
    _require_irreducible(A)
    if len(A) == 1:
        return AlgebraicReal.from_rational(A[0][0])
    root = AlgebraicReal.largest_real_root(char_poly(A))
    logger.debug("perron root of %s: minpoly %s" % (list(map(list, A)), list(root.minpoly)))
    return root


def perron_vector(A: Sequence[Sequence[int]], root: Optional[AlgebraicReal] = None) -> List[NFElement]:
    '''
    Returns the positive eigenvector of ``A`` for its Perron root, over
    ``Q(root)``, scaled so that its largest coordinate is one.

    Parameters
    -----------
    A: Sequence[Sequence[:class:`int`]]
        An irreducible non-negative matrix.
    root: Optional[:class:`~veechenum.exactnum.AlgebraicReal`]
        The Perron root if already known.

    Raises
    -------
    NotIrreducible
        ``A`` is reducible.
    '''
    if root is None:
        root = perron_root(A)
    else:
        _require_irreducible(A)
    field = root.field
    lam = root.as_element()
    d = len(A)
    rows = [[field(A[i][j]) - (lam if i == j else 0) for j in range(d)] for i in range(d)]
    vector = nullspace_vector(rows)
    largest = vector[0]
    for x in vector[1:]:
        if x > largest:
            largest = x
    vector = [x / largest for x in vector]
    for i, x in enumerate(vector):
        if x.sign() <= 0:
            raise InternalAssertion('perron vector has non-positive coordinate %d' % i, matrix=A)
    return vector


def nullspace_vector(rows: List[List[NFElement]]) -> List[NFElement]:
    '''
    Returns a nonzero kernel vector of a square matrix whose kernel is one
    dimensional, by exact Gauss-Jordan elimination.

    Raises
    -------
    InternalAssertion
        The kernel is trivial.
    '''
    rows = [list(row) for row in rows]
    n = len(rows)
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, n) if not rows[i][c].is_zero), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and not rows[i][c].is_zero:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        raise InternalAssertion('matrix has trivial kernel')
    one = rows[0][0].field.one() if rows else None
    f = free[0]
    vector = [one * 0] * ncols
    vector[f] = one
    for row_index, c in enumerate(pivots):
        vector[c] = -rows[row_index][f]
    return vector


def collatz_wielandt_bounds(A: Sequence[Sequence[int]], v: Sequence[Rational]) -> Tuple[Fraction, Fraction]:
    '''
    Returns ``(min (Av)_i / v_i, max (Av)_i / v_i)``, a bracket of the Perron root.

    Raises
    -------
    NotIrreducible
        ``A`` is reducible.
    NonPositiveVector
        ``v`` has a non-positive coordinate.
    '''
    _require_irreducible(A)
    v = [to_fraction(x) for x in v]
    for i, x in enumerate(v):
        if x <= 0:
            raise NonPositiveVector('coordinate %d of the test vector is %s' % (i, x), index=i)
    ratios = [sum(a * x for a, x in zip(row, v)) / vi for row, vi in zip(A, v)]
    return min(ratios), max(ratios)


def spectral_radius_below(B: Sequence[Sequence[int]], T: Rational) -> bool:
    '''
    Decides ``rho(B) < T`` exactly for any non-negative matrix ``B``.

    ``T I - B`` is a Z-matrix, and it is a nonsingular M-matrix exactly when all
    of its leading principal minors are positive. Elimination without pivoting
    produces those minors as products of the pivots.
    '''
    T = to_fraction(T)
    d = len(B)
    M = [[(T if i == j else 0) - Fraction(B[i][j]) for j in range(d)] for i in range(d)]
    for k in range(d):
        pivot = M[k][k]
        if pivot <= 0:
            return False
        for i in range(k + 1, d):
            factor = M[i][k]
            if factor:
                factor /= pivot
                row_k = M[k]
                row_i = M[i]
                for j in range(k + 1, d):
                    row_i[j] -= factor * row_k[j]
    return True
