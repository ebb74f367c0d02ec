"""
Upper half-plane geometry for Fuchsian data, exact throughout.

Matrices act on the right: ``z . g = (a z + c) / (b z + d)`` for
``g = [[a, b], [c, d]]``, which is the usual left action of the transpose.
Under this convention ``h_s = [[1, s], [0, 1]]`` fixes ``0``, so the standard
parabolic subgroup bases its horoballs at ``0``.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from random import Random
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple
import logging

from .exactnum import to_fraction
from .lib.errors import EmptyList, InputError, InternalAssertion

logger = logging.getLogger(__name__)


def _exact(value):
    if isinstance(value, (int, str)):
        return to_fraction(value)
    return value


@dataclass(frozen=True)
class Moebius:
    '''
    A determinant one matrix ``[[a, b], [c, d]]`` with exact entries.

    Raises
    -------
    InputError
        The determinant is not one.
    '''
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in 'abcd':
            object.__setattr__(self, name, _exact(getattr(self, name)))
        if self.a * self.d - self.b * self.c != 1:
            raise InputError('matrix %r does not have determinant one' % (self.rows(),))

    @classmethod
    def from_rows(cls, rows) -> 'Moebius':
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> 'Moebius':
        return cls(1, 0, 0, 1)

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def __matmul__(self, other: 'Moebius') -> 'Moebius':
        return Moebius(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                       self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    def inverse(self) -> 'Moebius':
        return Moebius(self.d, -self.b, -self.c, self.a)

    def conjugate(self, x: 'Moebius') -> 'Moebius':
        '''Returns ``x self x^-1``.'''
        return x @ self @ x.inverse()

    def __neg__(self) -> 'Moebius':
        return Moebius(-self.a, -self.b, -self.c, -self.d)

    @property
    def trace(self):
        return self.a + self.d

    def to_left_action(self) -> 'Moebius':
        '''Returns the matrix acting by the usual left action like ``self`` on the right.'''
        return Moebius(self.a, self.c, self.b, self.d)


def h(s) -> Moebius:
    '''The parabolic ``[[1, s], [0, 1]]``.'''
    return Moebius(1, s, 0, 1)


def h_tilde(x) -> Moebius:
    '''The parabolic ``[[1, 0], [x, 1]]``.'''
    return Moebius(1, 0, x, 1)


def rotation(cos, sin) -> Moebius:
    return Moebius(cos, -sin, sin, cos)


W = Moebius(0, -1, 1, 0)


@dataclass(frozen=True)
class UHPPoint:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'x', _exact(self.x))
        object.__setattr__(self, 'y', _exact(self.y))
        if not self.y > 0:
            raise InputError('point %r is not in the upper half plane' % (self,))


I = UHPPoint(0, 1)


def act(z: UHPPoint, g: Moebius) -> UHPPoint:
    '''
    Returns ``z . g = (a z + c) / (b z + d)``.
    '''
    re = g.b * z.x + g.d
    im = g.b * z.y
    norm = re * re + im * im
    x = ((g.a * z.x + g.c) * re + g.a * g.b * z.y * z.y) / norm
    return UHPPoint(x, z.y / norm)


def hyperbolic_distance_cosh(z1: UHPPoint, z2: UHPPoint):
    '''Returns ``cosh d(z1, z2) = 1 + |z1 - z2|^2 / (2 y1 y2)``.'''
    dx = z1.x - z2.x
    dy = z1.y - z2.y
    return 1 + (dx * dx + dy * dy) / (2 * z1.y * z2.y)


class _Unbounded:
    def __repr__(self) -> str:
        return 'Unbounded'


UNBOUNDED = _Unbounded()


def horoball_tangency(g: Moebius):
    '''
    Returns the ``t`` for which the horoball of Euclidean diameter ``t`` based at
    ``0`` is tangent to its image under ``g``, which is ``|c|``; returns
    :data:`UNBOUNDED` when ``g`` fixes ``0``.
    '''
    if g.c == 0:
        return UNBOUNDED
    return abs(g.c)


def _square_root(value) -> Fraction:
    value = to_fraction(value)
    if value < 0:
        raise InputError('%s is negative' % value)
    num, den = isqrt(value.numerator), isqrt(value.denominator)
    if num * num != value.numerator or den * den != value.denominator:
        raise InputError('%s is not the square of a rational' % value)
    return Fraction(num, den)


def normalizer(parabolic: Moebius) -> Moebius:
    '''
    Returns ``g`` with ``g parabolic g^-1 = h_1``.

    Writing ``parabolic - I = u v^T`` with ``u = (b, d - 1)`` and
    ``v = ((a - 1) / b, 1)``, the matrix ``g = [[1/r, 0], [r v_1, r]]`` with
    ``r^2 = b`` works.

    Raises
    -------
    InputError
        The matrix is not parabolic or ``b`` is not a rational square.
    '''
    p = parabolic
    if p.trace == -2:
        p = -p
    if p.trace != 2 or p == Moebius.identity():
        raise InputError('matrix %r is not parabolic' % (p.rows(),))
    if p.b == 0:
        return normalizer(p.conjugate(W)) @ W
    r = _square_root(p.b)
    lam = (p.a - 1) / p.b
    return Moebius(1 / r, 0, r * lam, r)


class CuspArea(NamedTuple):
    t0: Fraction
    certified: bool
    area: Fraction


def cusp_area(elements: Sequence[Moebius], complete_below=None,
              parabolic: Optional[Moebius] = None) -> CuspArea:
    '''
    Returns an upper bound for the cusp area ``t0`` from a finite list of group
    elements outside the parabolic subgroup.

    Parameters
    -----------
    elements: Sequence[:class:`Moebius`]
        Group elements.
    complete_below:
        Set when the caller guarantees the list contains every element, up to
        the parabolic subgroup on both sides, whose tangency is at most this
        value; the bound is then certified exact when it does not exceed it.
    parabolic: Optional[:class:`Moebius`]
        Generator of the maximal parabolic subgroup when it is not ``h_1``; the
        elements are conjugated so that it becomes ``h_1``.

    Raises
    -------
    EmptyList
        No element with a bounded tangency was supplied.
    '''
    if parabolic is not None:
        g = normalizer(parabolic)
        elements = [e.conjugate(g) for e in elements]
    values = [t for t in (horoball_tangency(e) for e in elements) if t is not UNBOUNDED]
    if not values:
        raise EmptyList('cusp area needs at least one element outside the parabolic subgroup')
    t0 = min(values)
    certified = complete_below is not None and t0 <= _exact(complete_below)
    logger.debug("cusp area bound %s from %d elements, certified=%s" % (t0, len(values), certified))
    return CuspArea(t0, certified, t0)


def sl2z_cusp_representatives(bound: int) -> List[Moebius]:
    '''
    Returns one element of SL(2, Z) for every double coset of ``<h_1>`` with
    ``0 < c <= bound``; every element with ``|c| <= bound`` has a representative
    up to sign, so the list is complete for tangencies up to ``bound``.
    '''
    out = []
    for c in range(1, bound + 1):
        for d in range(c):
            if gcd(c, d) != 1:
                continue
            a = 0 if c == 1 else pow(d, -1, c)
            b = (a * d - 1) // c
            out.append(Moebius(a, b, c, d))
    return out


def cusp_witness(t0, s=0) -> Moebius:
    '''
    Returns ``h_s h~_{-t0^2} h_s^-1``, the parabolic realising the tangency.

    Raises
    -------
    InternalAssertion
        The product is not parabolic.
    '''
    t0, s = _exact(t0), _exact(s)
    if not t0 > 0:
        raise InputError('t0 must be positive')
    gamma = h(s) @ h_tilde(-t0 * t0) @ h(s).inverse()
    if gamma.trace != 2:
        raise InternalAssertion('cusp witness has trace %s' % gamma.trace)
    return gamma


class CommutatorCertificate(NamedTuple):
    trace: Fraction
    cosh_d: Fraction
    hyperbolic: bool


def commutator_certificate(t, cos, sin) -> CommutatorCertificate:
    '''
    Builds ``f = h_t r h_-t``, ``f' = h_-t r h_t`` and ``f' f^-1`` for the rotation
    ``r`` by the angle with the given cosine and sine, and checks its trace
    against ``2 + 4 t^2 sin^2``.

    Raises
    -------
    InputError
        ``cos^2 + sin^2 != 1``.
    InternalAssertion
        The trace identity fails.
    '''
    t, cos, sin = _exact(t), _exact(cos), _exact(sin)
    if cos * cos + sin * sin != 1:
        raise InputError('(%s, %s) is not on the unit circle' % (cos, sin))
    r = rotation(cos, sin)
    f = h(t) @ r @ h(-t)
    f_prime = h(-t) @ r @ h(t)
    product = f_prime @ f.inverse()
    expected = 2 + 4 * t * t * sin * sin
    if product.trace != expected:
        raise InternalAssertion('commutator trace %s differs from %s' % (product.trace, expected))
    return CommutatorCertificate(product.trace, 1 + 2 * t * t, product.trace > 2)


def pythagorean_angle(m: int, n: int) -> Tuple[Fraction, Fraction]:
    '''Returns ``(cos, sin)`` of the rational point ``((m^2 - n^2), 2mn) / (m^2 + n^2)``.'''
    norm = m * m + n * n
    return Fraction(m * m - n * n, norm), Fraction(2 * m * n, norm)


def pythagorean_angles(count: int, seed: int = 0, size: int = 20) -> List[Tuple[Fraction, Fraction]]:
    rng = Random(seed)
    angles = []
    while len(angles) < count:
        m, n = rng.randint(-size, size), rng.randint(-size, size)
        if m or n:
            angles.append(pythagorean_angle(m, n))
    return angles


def cone_radius(fixed_point: UHPPoint, orbit_sample: Iterable[UHPPoint]):
    '''
    Returns ``cosh(2R)``, the smallest ``cosh`` distance from the fixed point to
    a sample point other than itself.

    Raises
    -------
    EmptyList
        Nothing remains after removing the fixed point.
    '''
    values = [hyperbolic_distance_cosh(fixed_point, z) for z in orbit_sample if z != fixed_point]
    if not values:
        raise EmptyList('orbit sample is empty once the fixed point is removed')
    return min(values)
