"""
Exhaustive, duplicate-free enumeration of bounded-eigenvalue matrices, cusp
data and gluing patterns.

Matrix searches run a lexicographic depth first search over the entries. A
partially filled matrix is entrywise below every completion, so its spectral
radius is a lower bound for theirs and a failing prefix prunes the whole
subtree. Thresholds are exact rationals and all comparisons are strict.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import permutations, product
from math import ceil, gcd
from multiprocessing import Pool
from typing import Iterable, List, Optional, Sequence, Tuple
import logging

from .exactnum import Rational, to_fraction
from .lib.errors import NotIrreducible, NotSymmetric
from .lib.permutation import (
    perm_cycles,
    perms_are_transitive,
    perms_canonical_form,
)
from .pfcore import (
    Matrix,
    diag_mul,
    is_irreducible,
    perron_root,
    perron_vector,
    spectral_radius_below,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class CuspMatrixPair:
    '''
    A pair ``(A, D)``: a symmetric non-negative matrix and the diagonal of a
    positive diagonal matrix with ``DA`` irreducible.
    '''
    A: Matrix
    D: Tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.A)

    def product(self) -> Matrix:
        '''Returns the matrix ``DA``.'''
        return diag_mul(self.D, self.A)


@dataclass(frozen=True, order=True)
class GluingPattern:
    '''
    A labelled pair of permutations of ``{0, ..., ell-1}``.

    ``sigma1[k]`` is the right neighbour and ``sigma2[k]`` the top neighbour of
    rectangle ``k``. ``labels1[k]`` is the matrix row of the ``sigma1``-cycle
    through ``k`` and ``labels2[k]`` the matrix column of its ``sigma2``-cycle.
    '''
    sigma1: Tuple[int, ...]
    sigma2: Tuple[int, ...]
    labels1: Tuple[int, ...]
    labels2: Tuple[int, ...]

    @property
    def ell(self) -> int:
        return len(self.sigma1)

    def joint_counts(self, m: int) -> Matrix:
        '''Returns the matrix of counts ``#{k : labels = (i, j)}``.'''
        counts = [[0] * m for _ in range(m)]
        for i, j in zip(self.labels1, self.labels2):
            counts[i][j] += 1
        return tuple(tuple(row) for row in counts)


@dataclass(frozen=True, order=True)
class CuspDatum:
    A: Matrix
    D: Tuple[int, ...]
    pattern: GluingPattern


def _threshold(T: Rational) -> Fraction:
    T = to_fraction(T)
    if T <= 0:
        raise ValueError('threshold must be positive, got %s' % T)
    return T


def entry_bound(d: int, T: Rational) -> int:
    '''
    Returns ``ceil(T**d)``, a bound for every entry of an irreducible
    non-negative ``d x d`` integer matrix with Perron root below ``T``.
    '''
    if d < 1:
        raise ValueError('dimension must be positive')
    return ceil(_threshold(T) ** d)


def _below(M: Sequence[Sequence[int]], T: Fraction) -> bool:
    # row sums bracket the spectral radius of any non-negative matrix
    sums = [sum(row) for row in M]
    if min(sums) >= T:
        return False
    if max(sums) < T:
        return True
    return spectral_radius_below(M, T)


def _dfs(d: int, T: Fraction, bound: int, low: int, symmetric: bool,
         prefix: Tuple[int, ...] = (), stop: Optional[int] = None) -> list:
    '''
    Depth first search over matrix entries in row-major order.

    Unassigned entries hold ``low``. With ``stop`` set, the assigned prefixes of
    that length are returned instead of full matrices.
    '''
    positions = [(i, j) for i in range(d) for j in range(d) if not symmetric or i <= j]
    M = [[low] * d for _ in range(d)]

    def assign(i, j, value):
        M[i][j] = value
        if symmetric:
            M[j][i] = value

    for (i, j), value in zip(positions, prefix):
        assign(i, j, value)
    found = []
    if not _below(M, T):
        return found
    values = list(prefix)

    def visit(k):
        if stop is not None and k == stop:
            found.append(tuple(values))
            return
        if k == len(positions):
            if is_irreducible(M):
                found.append(tuple(tuple(row) for row in M))
            return
        i, j = positions[k]
        for value in range(low, bound + 1):
            assign(i, j, value)
            if not _below(M, T):
                break
            values.append(value)
            visit(k + 1)
            values.pop()
        assign(i, j, low)

    visit(len(prefix))
    return found


def _dfs_job(job):
    return _dfs(*job)


def _run_partitioned(d, T, bound, low, symmetric, workers) -> List[Matrix]:
    if workers <= 1:
        return sorted(_dfs(d, T, bound, low, symmetric))
    prefixes = _dfs(d, T, bound, low, symmetric, (), d)
    jobs = [(d, T, bound, low, symmetric, prefix) for prefix in prefixes]
    logger.debug("splitting search into %d first-row jobs over %d workers" % (len(jobs), workers))
    with Pool(workers) as pool:
        parts = pool.map(_dfs_job, jobs)
    return sorted(matrix for part in parts for matrix in part)


def enumerate_irreducible(d: int, T: Rational, positive: bool = False, workers: int = 1) -> List[Matrix]:
    '''
    Returns every irreducible non-negative ``d x d`` integer matrix with Perron
    root strictly below ``T``, sorted lexicographically.

    Parameters
    -----------
    d: :class:`int`
        The dimension.
    T: :class:`~fractions.Fraction`
        The exclusive threshold.
    positive: :class:`bool`
        Restricts to strictly positive entries.
    workers: :class:`int`
        Size of the process pool; the output does not depend on it.
    '''
    T = _threshold(T)
    bound = entry_bound(d, T)
    matrices = _run_partitioned(d, T, bound, 1 if positive else 0, False, workers)
    logger.info("found %d irreducible %dx%d matrices below %s" % (len(matrices), d, d, T))
    return matrices


def enumerate_pa_matrices(p: int, T: Rational, positive: bool = False, workers: int = 1) -> List[Matrix]:
    '''
    Returns the candidate intersection matrices of size ``p`` with Perron root
    below ``T``: irreducible non-negative by default, strictly positive with
    ``positive``.
    '''
    return enumerate_irreducible(p, T, positive=positive, workers=workers)


def enumerate_symmetric_irreducible(m: int, T: Rational, workers: int = 1) -> List[Matrix]:
    T = _threshold(T)
    return _run_partitioned(m, T, entry_bound(m, T), 0, True, workers)


def _twist_vectors(A: Matrix, T: Fraction) -> List[Tuple[int, ...]]:
    m = len(A)
    D = [1] * m
    found = []

    def visit(k):
        if k == m:
            found.append(tuple(D))
            return
        n = 1
        while True:
            D[k] = n
            if not _below(diag_mul(D, A), T):
                break
            visit(k + 1)
            n += 1
        D[k] = 1

    if _below(A, T):
        visit(0)
    return found


def _cusp_job(job):
    A, T = job
    return [CuspMatrixPair(A, D) for D in _twist_vectors(A, T)]


def enumerate_cusp_data(m: int, T: Rational, workers: int = 1) -> List[CuspMatrixPair]:
    '''
    Returns every pair ``(A, D)`` with ``A`` symmetric ``m x m``, ``D`` a
    positive diagonal, ``DA`` irreducible and its Perron root strictly below
    ``T``.

    Since ``D >= I`` entrywise, only matrices ``A`` with Perron root below ``T``
    can occur; twist vectors are then searched coordinate by coordinate with the
    same monotone pruning.
    '''
    T = _threshold(T)
    matrices = enumerate_symmetric_irreducible(m, T, workers)
    jobs = [(A, T) for A in matrices]
    if workers <= 1:
        parts = [_cusp_job(job) for job in jobs]
    else:
        with Pool(workers) as pool:
            parts = pool.map(_cusp_job, jobs)
    pairs = sorted(pair for part in parts for pair in part)
    logger.info("found %d cusp matrix pairs for m=%d below %s" % (len(pairs), m, T))
    return pairs


# oracles

def _lambda_below_closed_form(M, T: Fraction) -> bool:
    d = len(M)
    if d == 1:
        return M[0][0] < T
    (a, b), (c, e) = M
    # largest eigenvalue (tr + sqrt(disc)) / 2 of a non-negative 2x2 matrix
    slack = 2 * T - (a + e)
    disc = (a - e) ** 2 + 4 * b * c
    return slack > 0 and disc < slack * slack


def brute_force_irreducible(d: int, T: Rational, positive: bool = False) -> List[Matrix]:
    '''
    Scans every matrix with entries up to :func:`entry_bound`, independently of
    the pruned search. Intended for small ``d`` and ``T``.
    '''
    T = _threshold(T)
    bound = entry_bound(d, T)
    low = 1 if positive else 0
    found = []
    for entries in product(range(low, bound + 1), repeat=d * d):
        M = tuple(tuple(entries[i * d:(i + 1) * d]) for i in range(d))
        if d <= 2:
            if _lambda_below_closed_form(M, T) and is_irreducible(M):
                found.append(M)
        elif is_irreducible(M) and perron_root(M) < T:
            found.append(M)
    return sorted(found)


def brute_force_cusp_data(m: int, T: Rational) -> List[CuspMatrixPair]:
    T = _threshold(T)
    bound = entry_bound(m, T)
    twist_bound = ceil(T * T)
    positions = [(i, j) for i in range(m) for j in range(m) if i <= j]
    found = []
    for entries in product(range(bound + 1), repeat=len(positions)):
        A = [[0] * m for _ in range(m)]
        for (i, j), value in zip(positions, entries):
            A[i][j] = A[j][i] = value
        A = tuple(tuple(row) for row in A)
        if not is_irreducible(A):
            continue
        if m <= 2 and not _lambda_below_closed_form(A, T):
            continue
        for D in product(range(1, twist_bound + 1), repeat=m):
            DA = diag_mul(D, A)
            if m <= 2:
                ok = _lambda_below_closed_form(DA, T)
            else:
                ok = perron_root(DA) < T
            if ok:
                found.append(CuspMatrixPair(A, tuple(D)))
    return sorted(found)


# gluing patterns

def is_symmetric(A: Sequence[Sequence[int]]) -> bool:
    return all(A[i][j] == A[j][i] for i in range(len(A)) for j in range(i))


def _label_automorphisms(A: Matrix, D: Optional[Sequence[int]] = None) -> List[Tuple[int, ...]]:
    m = len(A)
    autos = []
    for pi in permutations(range(m)):
        if all(A[pi[i]][pi[j]] == A[i][j] for i in range(m) for j in range(m)):
            if D is None or all(D[pi[i]] == D[i] for i in range(m)):
                autos.append(pi)
    return autos


def canonical_pair(sigma1: Sequence[int], sigma2: Sequence[int],
                   labels1: Optional[Sequence[int]] = None,
                   labels2: Optional[Sequence[int]] = None,
                   A: Optional[Matrix] = None) -> GluingPattern:
    '''
    Returns the canonical representative of a labelled permutation pair under
    simultaneous conjugation and under relabellings of cycle indices that fix
    ``A`` entrywise.

    Parameters
    -----------
    sigma1, sigma2: Sequence[:class:`int`]
        Permutations of ``{0, ..., ell-1}``.
    labels1, labels2: Optional[Sequence[:class:`int`]]
        Per-element cycle labels; all zero when omitted.
    A: Optional[Tuple]
        The matrix whose automorphisms may permute labels.
    '''
    ell = len(sigma1)
    labels1 = tuple(labels1) if labels1 is not None else (0,) * ell
    labels2 = tuple(labels2) if labels2 is not None else (0,) * ell
    autos = _label_automorphisms(A) if A is not None else [tuple(range(max(labels1 + labels2, default=0) + 1))]
    best = None
    for pi in autos:
        data = ([pi[x] for x in labels1], [pi[x] for x in labels2])
        perms, moved, _ = perms_canonical_form([sigma1, sigma2], data)
        candidate = GluingPattern(tuple(perms[0]), tuple(perms[1]), tuple(moved[0]), tuple(moved[1]))
        if best is None or candidate < best:
            best = candidate
    return best


def validate_pattern(A: Matrix, g: GluingPattern) -> bool:
    '''
    Checks every gluing pattern condition independently of the enumerator:
    one ``sigma1``-cycle per row with length the row sum, one ``sigma2``-cycle
    per column with length the column sum, constant labels along cycles, joint
    counts equal to ``A``, matching cycle types and transitivity.
    '''
    m = len(A)
    ell = sum(map(sum, A))
    if g.ell != ell or sorted(g.sigma1) != list(range(ell)) or sorted(g.sigma2) != list(range(ell)):
        return False
    for sigma, labels, sums in ((g.sigma1, g.labels1, [sum(row) for row in A]),
                                (g.sigma2, g.labels2, [sum(col) for col in zip(*A)])):
        cycles = perm_cycles(sigma)
        if len(cycles) != m:
            return False
        seen = set()
        for cycle in cycles:
            label = labels[cycle[0]]
            if any(labels[k] != label for k in cycle) or label in seen:
                return False
            if not 0 <= label < m or len(cycle) != sums[label]:
                return False
            seen.add(label)
    if g.joint_counts(m) != tuple(tuple(row) for row in A):
        return False
    if sorted(map(len, perm_cycles(g.sigma1))) != sorted(map(len, perm_cycles(g.sigma2))):
        return False
    return perms_are_transitive([g.sigma1, g.sigma2])


def _multiset_arrangements(counts: Sequence[int]) -> Iterable[Tuple[int, ...]]:
    total = sum(counts)
    if total == 0:
        yield ()
        return
    counts = list(counts)
    for j, c in enumerate(counts):
        if c:
            counts[j] -= 1
            for rest in _multiset_arrangements(counts):
                yield (j,) + rest
            counts[j] += 1


def _necklaces(counts: Sequence[int]) -> List[Tuple[int, ...]]:
    # arrangements that are smallest among their rotations
    return [arr for arr in _multiset_arrangements(counts)
            if all(arr <= arr[k:] + arr[:k] for k in range(1, len(arr)))]


def _cyclic_orders(elements: Sequence[int]) -> Iterable[Tuple[int, ...]]:
    first, rest = elements[0], elements[1:]
    for order in permutations(rest):
        yield (first,) + order


def _require_gluable(A: Matrix) -> None:
    if not is_symmetric(A):
        raise NotSymmetric('matrix %s is not symmetric' % (list(map(list, A)),), matrix=A)
    if not is_irreducible(A):
        raise NotIrreducible('matrix %s is not irreducible' % (list(map(list, A)),), matrix=A)


def enumerate_gluings(A: Matrix) -> List[GluingPattern]:
    '''
    Returns one canonical gluing pattern per class for the symmetric
    irreducible matrix ``A``, sorted.

    ``sigma1`` is fixed to consecutive cycles whose lengths are the row sums.
    Column labels are distributed inside each row block with the prescribed
    joint counts, and ``sigma2`` runs through every single cycle on each column
    class. Transitive candidates are canonicalized and deduplicated.

    Raises
    -------
    NotSymmetric
        ``A`` is not symmetric.
    NotIrreducible
        ``A`` is reducible.
    '''
    _require_gluable(A)
    return list(_gluings(tuple(tuple(row) for row in A)))


@lru_cache(maxsize=None)
def _gluings(A: Matrix) -> Tuple[GluingPattern, ...]:
    m = len(A)
    sums = [sum(row) for row in A]
    ell = sum(sums)
    sigma1 = [0] * ell
    labels1 = []
    start = 0
    for i, length in enumerate(sums):
        for k in range(length):
            sigma1[start + k] = start + (k + 1) % length
        labels1.extend([i] * length)
        start += length

    found = set()
    # row blocks are taken up to rotation of their sigma1-cycle
    for blocks in product(*(_necklaces(A[i]) for i in range(m))):
        labels2 = [j for block in blocks for j in block]
        classes = [[k for k in range(ell) if labels2[k] == j] for j in range(m)]
        for cycles in product(*(list(_cyclic_orders(cls)) for cls in classes)):
            sigma2 = [0] * ell
            for cycle in cycles:
                for k, x in enumerate(cycle):
                    sigma2[x] = cycle[(k + 1) % len(cycle)]
            if not perms_are_transitive([sigma1, sigma2]):
                continue
            found.add(canonical_pair(sigma1, sigma2, labels1, labels2, A))
    patterns = tuple(sorted(found))
    logger.debug("matrix %s admits %d gluing patterns" % (list(map(list, A)), len(patterns)))
    return patterns


def count_gluings_brute_force(A: Matrix) -> List[GluingPattern]:
    '''
    Searches all of ``S_ell x S_ell`` together with every assignment of cycle
    labels; only usable for ``ell <= 5``.
    '''
    _require_gluable(A)
    m = len(A)
    ell = sum(map(sum, A))
    found = set()
    for sigma1 in permutations(range(ell)):
        cycles1 = perm_cycles(sigma1)
        if len(cycles1) != m:
            continue
        for sigma2 in permutations(range(ell)):
            cycles2 = perm_cycles(sigma2)
            if len(cycles2) != m or not perms_are_transitive([sigma1, sigma2]):
                continue
            for order1 in permutations(range(m)):
                labels1 = [0] * ell
                for label, cycle in zip(order1, cycles1):
                    for k in cycle:
                        labels1[k] = label
                for order2 in permutations(range(m)):
                    labels2 = [0] * ell
                    for label, cycle in zip(order2, cycles2):
                        for k in cycle:
                            labels2[k] = label
                    g = GluingPattern(tuple(sigma1), tuple(sigma2), tuple(labels1), tuple(labels2))
                    if validate_pattern(A, g):
                        found.add(canonical_pair(sigma1, sigma2, labels1, labels2, A))
    return sorted(found)


def primitive_twists(D: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
    '''Returns ``(D / gcd(D), gcd(D))``.'''
    k = reduce(gcd, D)
    return tuple(n // k for n in D), k


def relabel_cusp_datum(A: Matrix, D: Sequence[int], g: GluingPattern, pi: Sequence[int]) -> CuspDatum:
    '''Renames matrix index ``i`` to ``pi[i]`` throughout the datum.'''
    m = len(A)
    A2 = [[0] * m for _ in range(m)]
    D2 = [0] * m
    for i in range(m):
        D2[pi[i]] = D[i]
        for j in range(m):
            A2[pi[i]][pi[j]] = A[i][j]
    A2 = tuple(tuple(row) for row in A2)
    pattern = GluingPattern(g.sigma1, g.sigma2,
                            tuple(pi[x] for x in g.labels1), tuple(pi[x] for x in g.labels2))
    return CuspDatum(A2, tuple(D2), pattern)


def _column_relabellings(A: Matrix, D: Sequence[int]) -> List[Tuple[int, ...]]:
    # vertical cylinders j and tau[j] have equal width a_j and circumference (Aa)_j
    m = len(A)
    if m == 1:
        return [(0,)]
    a = perron_vector(diag_mul(D, A))
    dims = [(a[j], sum((A[j][i] * a[i] for i in range(m)), a[0] * 0)) for j in range(m)]
    return [tau for tau in permutations(range(m)) if all(dims[tau[j]] == dims[j] for j in range(m))]


def canonical_cusp_datum(A: Matrix, D: Sequence[int], g: GluingPattern, primitive: bool = True) -> CuspDatum:
    '''
    Returns the canonical form of a cusp datum: the smallest relabelling over
    all renamings of matrix indices, with the pattern in canonical form and,
    by default, ``D`` divided by its gcd.

    Vertical cylinders of equal width and circumference are interchangeable
    on the surface, so column labels are also permuted among them whenever the
    matrix stays symmetric.
    '''
    if primitive:
        D, _ = primitive_twists(D)
    m = len(A)
    variants = []
    for tau in _column_relabellings(A, D):
        A2 = [[0] * m for _ in range(m)]
        for i in range(m):
            for j in range(m):
                A2[i][tau[j]] = A[i][j]
        if not is_symmetric(A2):
            continue
        variants.append((tuple(tuple(row) for row in A2),
                         GluingPattern(g.sigma1, g.sigma2, g.labels1, tuple(tau[x] for x in g.labels2))))
    best = None
    for (A1, g1), pi in product(variants, permutations(range(m))):
        datum = relabel_cusp_datum(A1, D, g1, pi)
        pattern = canonical_pair(datum.pattern.sigma1, datum.pattern.sigma2,
                                 datum.pattern.labels1, datum.pattern.labels2)
        candidate = CuspDatum(datum.A, datum.D, pattern)
        if best is None or candidate < best:
            best = candidate
    return best

