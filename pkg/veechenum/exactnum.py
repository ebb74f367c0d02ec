"""
Exact arithmetic over real algebraic number fields.

A :class:`NumberField` is ``Q(alpha)`` for a real root ``alpha`` of an
irreducible integer polynomial, designated by a rational isolating interval.
Elements are stored degree-reduced, so zero testing is syntactic and the sign of
an element is always decided by interval evaluation after finitely many
bisections of the generator's interval.
"""

from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union
import logging
import math

import sympy

from .lib.errors import DivisionByZero, FieldMismatch

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]

_X = sympy.Symbol('x')


def to_fraction(value) -> Fraction:
    '''Converts ints, Fractions, decimal strings and sympy rationals to :class:`~fractions.Fraction`.'''
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, sympy.Integer):
        return Fraction(int(value))
    raise TypeError('cannot convert %r to an exact rational' % (value,))


def _primitive(coeffs: Sequence[int]) -> Tuple[int, ...]:
    coeffs = [int(c) for c in coeffs]
    while len(coeffs) > 1 and coeffs[0] == 0:
        coeffs.pop(0)
    content = 0
    for c in coeffs:
        content = math.gcd(content, c)
    if content == 0:
        raise ValueError('the zero polynomial has no roots')
    if coeffs[0] < 0:
        content = -content
    return tuple(c // content for c in coeffs)


def _horner(coeffs: Sequence[int], x: Fraction) -> Fraction:
    value = Fraction(0)
    for c in coeffs:
        value = value * x + c
    return value


def _sign(value) -> int:
    return (value > 0) - (value < 0)


def _interval_mul(a_lo, a_hi, b_lo, b_hi):
    products = (a_lo * b_lo, a_lo * b_hi, a_hi * b_lo, a_hi * b_hi)
    return min(products), max(products)


def _roots_in(minpoly: Sequence[int], lo: Fraction, hi: Fraction) -> int:
    '''Counts the real roots of ``minpoly`` in ``[lo, hi]`` exactly.'''
    poly = sympy.Poly([int(c) for c in minpoly], _X)
    return poly.count_roots(sympy.Rational(lo.numerator, lo.denominator),
                            sympy.Rational(hi.numerator, hi.denominator))


def _rational(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def _sqrt_floor(value: Fraction, eps: Fraction) -> Fraction:
    # largest multiple of 1/n below sqrt(value), n = ceil(1/eps)
    n = math.ceil(1 / eps)
    return Fraction(math.isqrt(math.floor(value * n * n)), n)


class NumberField:
    '''
    Represents ``Q(alpha)`` where ``alpha`` is the unique root of ``minpoly``
    inside the closed interval ``[lo, hi]``.

    Parameters
    -----------
    minpoly: Sequence[:class:`int`]
        Integer coefficients, leading coefficient first. The polynomial must be
        irreducible over the rationals; it is made primitive with a positive
        leading coefficient.
    interval: Tuple[:class:`~fractions.Fraction`, :class:`~fractions.Fraction`]
        An isolating interval of the designated root.
    '''

    def __init__(self, minpoly: Sequence[int], interval: Tuple[Rational, Rational]):
        self.minpoly = _primitive(minpoly)
        self.degree = len(self.minpoly) - 1
        if self.degree < 1:
            raise ValueError('a defining polynomial needs degree at least one')
        lo, hi = (to_fraction(interval[0]), to_fraction(interval[1]))
        if lo > hi:
            lo, hi = hi, lo
        self._lo, self._hi = lo, hi
        self._reduce_table = self._power_table()
        if self.degree == 1:
            root = Fraction(-self.minpoly[1], self.minpoly[0])
            self._lo = self._hi = root
        elif _roots_in(self.minpoly, lo, hi) != 1:
            raise ValueError('[%s, %s] does not isolate a single root of %s' % (lo, hi, list(self.minpoly)))

    @classmethod
    def rationals(cls) -> 'NumberField':
        '''
        Returns the field of rational numbers, presented by the polynomial ``x``.
        '''
        return _QQ

    def _power_table(self) -> List[Tuple[Fraction, ...]]:
        # alpha**k for k = degree .. 2*degree - 2, as ascending coefficient vectors
        n = self.degree
        lead = self.minpoly[0]
        top = tuple(Fraction(-c, lead) for c in reversed(self.minpoly[1:]))
        table = [top]
        for _ in range(n, 2 * n - 2):
            prev = table[-1]
            shifted = [Fraction(0)] + list(prev[:-1])
            carry = prev[-1]
            table.append(tuple(s + carry * t for s, t in zip(shifted, top)))
        return table

    @property
    def interval(self) -> Tuple[Fraction, Fraction]:
        '''
        :class:`tuple`: Returns the finest isolating interval found so far.
        '''
        return self._lo, self._hi

    @property
    def is_rational(self) -> bool:
        '''
        :class:`bool`: Returns ``True`` when the field is ``Q``.
        '''
        return self.degree == 1

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, NumberField):
            return NotImplemented
        if self.minpoly != other.minpoly:
            return self.is_rational and other.is_rational
        if self.is_rational:
            return True
        return self.same_root(other)

    def same_root(self, other: 'NumberField') -> bool:
        '''
        Returns ``True`` if ``other`` has the same minimal polynomial and
        designates the same root: each interval holds one root, so the roots
        agree iff the intersection of the intervals holds a root.
        '''
        if self.minpoly != other.minpoly:
            return False
        lo = max(self._lo, other._lo)
        hi = min(self._hi, other._hi)
        return lo <= hi and _roots_in(self.minpoly, lo, hi) == 1

    def __hash__(self) -> int:
        return hash(self.minpoly) if not self.is_rational else hash('QQ')

    def __repr__(self) -> str:
        return '<NumberField minpoly=%s interval=[%s, %s]>' % (list(self.minpoly), self._lo, self._hi)

    def minpoly_sign(self, x: Fraction) -> int:
        return _sign(_horner(self.minpoly, x))

    def refine(self, eps: Rational) -> Tuple[Fraction, Fraction]:
        '''
        Bisects the isolating interval until its width is at most ``eps``.

        The designated root never changes; only the cached interval shrinks.

        Parameters
        -----------
        eps: :class:`~fractions.Fraction`
            Target width, must be positive.

        Returns
        --------
        Tuple[:class:`~fractions.Fraction`, :class:`~fractions.Fraction`]
        '''
        eps = to_fraction(eps)
        if eps <= 0:
            raise ValueError('eps must be positive')
        lo, hi = self._lo, self._hi
        if hi - lo <= eps:
            return lo, hi
        sign_lo = self.minpoly_sign(lo)
        while hi - lo > eps:
            mid = (lo + hi) / 2
            sign_mid = self.minpoly_sign(mid)
            if sign_mid == 0:
                lo = hi = mid
                break
            if sign_mid == sign_lo:
                lo = mid
            else:
                hi = mid
        self._lo, self._hi = lo, hi
        return lo, hi

    def _bisect_once(self) -> None:
        lo, hi = self._lo, self._hi
        if lo == hi:
            return
        self.refine((hi - lo) / 2)

    # elements

    def element(self, coeffs: Iterable[Rational]) -> 'NFElement':
        '''
        Returns the element ``sum(c_i * alpha**i)``; ``coeffs`` are given lowest
        degree first and reduced modulo the minimal polynomial when longer than
        the field degree.
        '''
        coeffs = [to_fraction(c) for c in coeffs]
        if len(coeffs) > self.degree:
            return NFElement(self, self._reduce(coeffs))
        coeffs = coeffs + [Fraction(0)] * (self.degree - len(coeffs))
        return NFElement(self, tuple(coeffs))

    def __call__(self, value: Rational) -> 'NFElement':
        return self.element([value])

    def zero(self) -> 'NFElement':
        return self.element([0])

    def one(self) -> 'NFElement':
        return self.element([1])

    @property
    def gen(self) -> 'NFElement':
        '''
        :class:`NFElement`: Returns the generator ``alpha`` of the field.
        '''
        if self.degree == 1:
            return self.element([self._lo])
        return self.element([0, 1])

    def _reduce(self, coeffs: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        n = self.degree
        if n == 1:
            root = self._lo
            return (_horner(list(reversed(coeffs)), root),)
        head = list(coeffs[:n]) + [Fraction(0)] * max(0, n - len(coeffs))
        for k in range(n, len(coeffs)):
            c = coeffs[k]
            if c:
                row = self._reduce_table[k - n]
                for i in range(n):
                    head[i] += c * row[i]
        return tuple(head)

    def sign(self, coeffs: Sequence[Fraction]) -> int:
        '''
        Returns the sign of ``sum(c_i * alpha**i)`` at the designated root.
        '''
        if not any(coeffs):
            return 0
        if not any(coeffs[1:]):
            return _sign(coeffs[0])
        rev = list(reversed(coeffs))
        while True:
            lo, hi = self._lo, self._hi
            acc_lo = acc_hi = rev[0]
            for c in rev[1:]:
                acc_lo, acc_hi = _interval_mul(acc_lo, acc_hi, lo, hi)
                acc_lo += c
                acc_hi += c
            if acc_lo > 0:
                return 1
            if acc_hi < 0:
                return -1
            if lo == hi:
                return _sign(acc_lo)
            self._bisect_once()


_QQ = NumberField([1, 0], (0, 0))


class NFElement:
    '''
    Represents an element of a :class:`NumberField`.

    Supports ``+ - * /``, unary minus, comparisons and mixing with
    :class:`int` and :class:`~fractions.Fraction`. Elements of ``Q`` mix with
    elements of any field.
    '''
    __slots__ = ('field', 'coeffs')

    def __init__(self, field: NumberField, coeffs: Tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs

    def __repr__(self) -> str:
        if self.field.is_rational:
            return '<NFElement %s>' % self.coeffs[0]
        terms = ' + '.join('%s*a^%d' % (c, i) for i, c in enumerate(self.coeffs) if c) or '0'
        return '<NFElement %s>' % terms

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def is_rational(self) -> bool:
        '''
        :class:`bool`: Returns ``True`` if the element lies in ``Q``.
        '''
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError('%r is not rational' % (self,))
        return self.coeffs[0]

    def _binary(self, other):
        # returns both operands in one field; rationals embed into any field
        if isinstance(other, (int, Fraction)):
            return self, self.field.element([other])
        if not isinstance(other, NFElement):
            return NotImplemented, NotImplemented
        if other.field is self.field:
            return self, other
        if other.field.is_rational:
            return self, self.field.element([other.coeffs[0]])
        if self.field.is_rational:
            return other.field.element([self.coeffs[0]]), other
        if other.field == self.field:
            return self, NFElement(self.field, other.coeffs)
        raise FieldMismatch('elements of %r and %r cannot be combined' % (self.field, other.field),
                            left=self.field, right=other.field)

    def __add__(self, other):
        left, right = self._binary(other)
        if left is NotImplemented:
            return NotImplemented
        return NFElement(left.field, tuple(a + b for a, b in zip(left.coeffs, right.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        left, right = self._binary(other)
        if left is NotImplemented:
            return NotImplemented
        return NFElement(left.field, tuple(a - b for a, b in zip(left.coeffs, right.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return NFElement(self.field, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElement(self.field, tuple(c * other for c in self.coeffs))
        left, right = self._binary(other)
        if left is NotImplemented:
            return NotImplemented
        field = left.field
        n = field.degree
        a, b = left.coeffs, right.coeffs
        if n == 1:
            return NFElement(field, (a[0] * b[0],))
        if not any(b[1:]):
            return NFElement(field, tuple(c * b[0] for c in a))
        if not any(a[1:]):
            return NFElement(field, tuple(c * a[0] for c in b))
        product = [Fraction(0)] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        product[i + j] += x * y
        return NFElement(field, field._reduce(product))

    __rmul__ = __mul__

    def inverse(self) -> 'NFElement':
        '''
        Returns ``1 / self`` computed with the extended Euclidean algorithm
        modulo the minimal polynomial.

        Raises
        -------
        DivisionByZero
            The element is zero.
        '''
        if self.is_zero:
            raise DivisionByZero('division by zero in %r' % (self.field,))
        if self.is_rational:
            return NFElement(self.field, (1 / self.coeffs[0],) + self.coeffs[1:])
        poly = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in self.coeffs])),
                          _X, domain=sympy.QQ)
        modulus = sympy.Poly(list(self.field.minpoly), _X, domain=sympy.QQ)
        inv = poly.invert(modulus)
        return self.field.element([to_fraction(c) for c in reversed(inv.all_coeffs())])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero('division by zero')
            return NFElement(self.field, tuple(c / other for c in self.coeffs))
        left, right = self._binary(other)
        if left is NotImplemented:
            return NotImplemented
        return left * right.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    # comparisons

    def sign(self) -> int:
        return self.field.sign(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.coeffs[0] == other
        if not isinstance(other, NFElement):
            return NotImplemented
        try:
            left, right = self._binary(other)
        except FieldMismatch:
            return False
        return left.coeffs == right.coeffs

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(self.coeffs[0])
        return hash((self.field, self.coeffs))

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0

    def __bool__(self) -> bool:
        return not self.is_zero

    def __abs__(self) -> 'NFElement':
        return -self if self.sign() < 0 else self

    def enclosure(self, eps: Rational = Fraction(1, 10 ** 12)) -> Tuple[Fraction, Fraction]:
        '''
        Returns a rational interval of width about ``eps`` containing the value.
        '''
        if self.is_rational:
            return self.coeffs[0], self.coeffs[0]
        eps = to_fraction(eps)
        scale = sum(abs(c) for c in self.coeffs) or Fraction(1)
        lo, hi = self.field.refine(eps / (scale * (self.field.degree + 1) * (abs(self.field.interval[1]) + 1) ** self.field.degree))
        rev = list(reversed(self.coeffs))
        acc_lo = acc_hi = rev[0]
        for c in rev[1:]:
            acc_lo, acc_hi = _interval_mul(acc_lo, acc_hi, lo, hi)
            acc_lo += c
            acc_hi += c
        return acc_lo, acc_hi

    def __float__(self) -> float:
        lo, hi = self.enclosure()
        return float((lo + hi) / 2)

    def key(self) -> Tuple[Fraction, ...]:
        '''Returns the coefficient tuple, a total order used for canonical forms.'''
        return self.coeffs


class AlgebraicReal:
    '''
    Represents an exact real algebraic number by its minimal polynomial and an
    isolating interval.

    Parameters
    -----------
    minpoly: Sequence[:class:`int`]
        Irreducible integer polynomial, leading coefficient first.
    interval: Tuple[:class:`~fractions.Fraction`, :class:`~fractions.Fraction`]
        Isolates exactly one real root of ``minpoly``.
    '''

    def __init__(self, minpoly: Sequence[int], interval: Tuple[Rational, Rational]):
        self._field = NumberField(minpoly, interval)
        if self._field.degree == 1:
            self._value = self._field.gen.coeffs[0]
        else:
            self._value = None

    @classmethod
    def from_rational(cls, value: Rational) -> 'AlgebraicReal':
        value = to_fraction(value)
        return cls([value.denominator, -value.numerator], (value, value))

    @classmethod
    def largest_real_root(cls, coeffs: Sequence[int]) -> 'AlgebraicReal':
        '''
        Returns the largest real root of an integer polynomial.

        The polynomial is factored with :func:`sympy.factor_list`; the minimal
        polynomial is the irreducible factor owning the largest root, found by
        refining the candidate intervals until they are disjoint.

        Parameters
        -----------
        coeffs: Sequence[:class:`int`]
            Leading coefficient first.

        Raises
        -------
        ValueError
            The polynomial has no real root.
        '''
        poly = sympy.Poly([int(c) for c in coeffs], _X)
        _, factors = sympy.factor_list(poly.as_expr(), _X)
        best = None
        for factor, _multiplicity in factors:
            factor_poly = sympy.Poly(factor, _X)
            if factor_poly.degree() < 1:
                continue
            roots = factor_poly.intervals()
            if not roots:
                continue
            (lo, hi), _ = roots[-1]
            candidate = cls([int(c) for c in factor_poly.all_coeffs()], (to_fraction(lo), to_fraction(hi)))
            if best is None or candidate > best:
                best = candidate
        if best is None:
            raise ValueError('polynomial %s has no real root' % (list(coeffs),))
        logger.debug("largest real root of %s has minimal polynomial %s" % (list(coeffs), list(best.minpoly)))
        return best

    from_poly = largest_real_root

    @classmethod
    def sqrt(cls, value) -> 'AlgebraicReal':
        '''
        Returns the non-negative square root of a rational or field element.

        The root is a zero of the norm of ``x**2 - value``, a resultant with the
        field's minimal polynomial; the factor owning it is the one whose root
        interval meets a rational enclosure of ``sqrt(value)``.

        Raises
        -------
        ValueError
            ``value`` is negative.
        '''
        if not isinstance(value, NFElement):
            value = NumberField.rationals().element([to_fraction(value)])
        if value.sign() < 0:
            raise ValueError('%r has no real square root' % (value,))
        if value.is_zero:
            return cls.from_rational(0)
        if value.is_rational:
            poly = sympy.Poly(_X ** 2 - _rational(value.coeffs[0]), _X)
        else:
            t = sympy.Symbol('t')
            field_poly = sympy.Poly([int(c) for c in value.field.minpoly], t)
            c_expr = sum(_rational(c) * t ** i for i, c in enumerate(value.coeffs))
            poly = sympy.Poly(sympy.resultant(field_poly.as_expr(), _X ** 2 - c_expr, t), _X)
        _, factors = sympy.factor_list(poly.as_expr(), _X)
        factors = [sympy.Poly(f, _X) for f, _ in factors if sympy.Poly(f, _X).degree() >= 1]
        eps = Fraction(1, 2 ** 20)
        while True:
            lo, hi = value.enclosure(eps)
            root_lo, root_hi = _sqrt_floor(max(lo, Fraction(0)), eps), _sqrt_floor(hi, eps) + eps
            hits = []
            for factor in factors:
                for (a, b), _ in factor.intervals(eps=sympy.Rational(eps.numerator, eps.denominator)):
                    a, b = to_fraction(a), to_fraction(b)
                    if b >= root_lo and a <= root_hi and b > 0:
                        hits.append((factor, a, b))
            if len(hits) == 1:
                factor, a, b = hits[0]
                _, integral = factor.clear_denoms()
                return cls([int(c) for c in integral.all_coeffs()], (a, b))
            eps /= 2 ** 16

    @property
    def minpoly(self) -> Tuple[int, ...]:
        '''
        :class:`tuple`: Returns the minimal polynomial, leading coefficient first.
        '''
        return self._field.minpoly

    @property
    def interval(self) -> Tuple[Fraction, Fraction]:
        '''
        :class:`tuple`: Returns the current isolating interval.
        '''
        return self._field.interval

    @property
    def degree(self) -> int:
        return self._field.degree

    @property
    def field(self) -> NumberField:
        '''
        :class:`NumberField`: Returns ``Q(self)``; ``Q`` itself for rationals.
        '''
        if self._field.degree == 1:
            return NumberField.rationals()
        return self._field

    def as_element(self) -> NFElement:
        '''
        Returns the number as an element of :attr:`field`.
        '''
        if self._value is not None:
            return NumberField.rationals().element([self._value])
        return self._field.gen

    def refine(self, eps: Rational) -> Tuple[Fraction, Fraction]:
        return self._field.refine(eps)

    @property
    def is_rational(self) -> bool:
        return self._value is not None

    def rational_value(self) -> Fraction:
        if self._value is None:
            raise ValueError('%r is irrational' % (self,))
        return self._value

    def _compare(self, other) -> int:
        if isinstance(other, AlgebraicReal):
            if self.minpoly == other.minpoly and self == other:
                return 0
            if other._value is not None:
                return self._compare(other._value)
            if self._value is not None:
                return -other._compare(self._value)
            while True:
                lo1, hi1 = self.interval
                lo2, hi2 = other.interval
                if hi1 < lo2:
                    return -1
                if hi2 < lo1:
                    return 1
                self._field._bisect_once()
                other._field._bisect_once()
        other = to_fraction(other)
        if self._value is not None:
            return _sign(self._value - other)
        return self._field.sign((-other, Fraction(1)) + (Fraction(0),) * (self.degree - 1))

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgebraicReal):
            if self.minpoly != other.minpoly:
                return False
            if self._value is not None:
                return self._value == other._value
            return self._field.same_root(other._field)
        if isinstance(other, (int, Fraction)):
            return self._value is not None and self._value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.minpoly)

    def __lt__(self, other) -> bool:
        return self._compare(other) < 0

    def __le__(self, other) -> bool:
        return self._compare(other) <= 0

    def __gt__(self, other) -> bool:
        return self._compare(other) > 0

    def __ge__(self, other) -> bool:
        return self._compare(other) >= 0

    def __float__(self) -> float:
        lo, hi = self.refine(Fraction(1, 10 ** 15))
        return float((lo + hi) / 2)

    def __repr__(self) -> str:
        lo, hi = self.interval
        return '<AlgebraicReal minpoly=%s interval=[%s, %s]>' % (list(self.minpoly), lo, hi)


def nf_arith(x: NFElement, y: NFElement, op: str) -> NFElement:
    '''
    Exact field arithmetic.

    Parameters
    -----------
    x, y: :class:`NFElement`
        Operands of the same field.
    op: :class:`str`
        One of ``add``, ``sub``, ``mul``, ``div``.

    Raises
    -------
    DivisionByZero
        ``op`` is ``div`` and ``y`` is zero.
    FieldMismatch
        The operands live in different fields.
    '''
    if x.field != y.field and not (x.field.is_rational or y.field.is_rational):
        raise FieldMismatch('cannot combine elements of %r and %r' % (x.field, y.field),
                            left=x.field, right=y.field)
    if op == 'add':
        return x + y
    if op == 'sub':
        return x - y
    if op == 'mul':
        return x * y
    if op == 'div':
        return x / y
    raise ValueError('unknown operation %r' % op)


def nf_sign(x: NFElement) -> int:
    '''Returns the exact sign of ``x``: -1, 0 or +1.'''
    return x.sign()


def refine(x: AlgebraicReal, eps: Rational) -> Tuple[Fraction, Fraction]:
    '''Returns a sub-interval of width at most ``eps`` isolating ``x``.'''
    return x.refine(eps)


def common_field(values: Iterable) -> NumberField:
    '''
    Returns the single non-rational field among ``values``, or ``Q``.

    Raises
    -------
    FieldMismatch
        Two different non-rational fields occur.
    '''
    field = NumberField.rationals()
    for value in values:
        if isinstance(value, NFElement) and not value.field.is_rational:
            if field.is_rational:
                field = value.field
            elif value.field != field:
                raise FieldMismatch('values from %r and %r' % (field, value.field))
    return field


def lift(value, field: NumberField) -> NFElement:
    '''Embeds an int, Fraction or NFElement into ``field``.'''
    if isinstance(value, NFElement):
        if value.field is field:
            return value
        if value.field.is_rational:
            return field.element([value.coeffs[0]])
        if value.field == field:
            return NFElement(field, value.coeffs)
        raise FieldMismatch('cannot move %r into %r' % (value, field))
    return field.element([to_fraction(value)])


def nf_compare(x, y) -> int:
    '''Returns the sign of ``x - y`` for field elements or rationals.'''
    if isinstance(x, NFElement):
        return (x - y).sign()
    if isinstance(y, NFElement):
        return -(y - x).sign()
    return _sign(to_fraction(x) - to_fraction(y))


def nf_lt(x, y) -> bool:
    return nf_compare(x, y) < 0


def to_float(value) -> float:
    '''
    Returns a float approximation, for layout and numeric cross-checks only.
    '''
    if isinstance(value, (NFElement, AlgebraicReal)):
        return float(value)
    return float(to_fraction(value))
