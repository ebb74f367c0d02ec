from fractions import Fraction
from typing import Any, Dict, List, Sequence

import orjson

from ..enumeration import CuspDatum, CuspMatrixPair, GluingPattern
from ..exactnum import AlgebraicReal, NFElement, NumberField, to_fraction
from ..origami import Origami
from ..surface import RectSurface
from .errors import MalformedInput


class Records:
    '''
    Specifies all the record kinds written by the command line tool.
    This is a low level class for :class:`~veechenum.lib.payload.RecordTypes`.
    '''
    matrix = 'matrix'
    cusp = 'cusp'
    gluing = 'gluing'
    pseudo_anosov = 'pseudo_anosov'
    surface = 'surface'
    markov = 'markov'
    hyperbolic = 'hyperbolic'
    summary = 'summary'
    error = 'error'


class RecordTypes:
    '''
    Specifies the kind of a record. Available kinds:
        | ``matrix``: An enumerated matrix.
        | ``cusp``: A cusp datum with its reconstructed surface.
        | ``gluing``: A gluing pattern of a matrix.
        | ``pseudo_anosov``: A pseudo-Anosov matrix with its dilatation.
        | ``surface``: Invariants of a surface.
        | ``markov``: A Markov partition.
        | ``hyperbolic``: Output of a hyperbolic geometry tool.
        | ``summary``: The closing count of a stream.
        | ``error``: A structured error.
    '''
    def __init__(self, kind: str) -> None:
        self._kind = kind

    def __repr__(self) -> str:
        return '<RecordTypes: {}>'.format(self._kind)

    def __eq__(self, other) -> bool:
        if isinstance(other, RecordTypes):
            return self._kind == other._kind
        return self._kind == other

    def __hash__(self) -> int:
        return hash(self._kind)

    @property
    def summary(self) -> bool:
        '''
        :class:`bool`: Returns ``True`` if the record closes a stream.
        '''
        return self._kind == Records.summary

    @property
    def error(self) -> bool:
        '''
        :class:`bool`: Returns ``True`` if the record is an error.
        '''
        return self._kind == Records.error

    @property
    def enumerated(self) -> bool:
        '''
        :class:`bool`: Returns ``True`` if the record is one element of a census.
        '''
        return self._kind in (Records.matrix, Records.cusp, Records.gluing, Records.pseudo_anosov)


# numbers

def encode_number(value) -> Any:
    '''
    Encodes an exact number for JSON: rationals as ``"p/q"`` strings,
    irrational field elements as their field and coefficients, algebraic reals
    as minimal polynomial and isolating interval. An ``approx`` float is added
    to irrational values for readers that only want a number.
    '''
    if isinstance(value, bool):
        raise TypeError('refusing to encode a boolean as a number')
    if isinstance(value, (int, Fraction)):
        return str(to_fraction(value))
    if isinstance(value, NFElement):
        if value.is_rational:
            return str(value.rational_value())
        return {
            'minpoly': list(value.field.minpoly),
            'interval': [str(x) for x in value.field.interval],
            'coeffs': [str(c) for c in value.coeffs],
            'approx': float(value),
        }
    if isinstance(value, AlgebraicReal):
        if value.is_rational:
            return str(value.rational_value())
        return {
            'minpoly': list(value.minpoly),
            'interval': [str(x) for x in value.interval],
            'approx': float(value),
        }
    raise TypeError('cannot encode %r as an exact number' % (value,))


def decode_number(data):
    '''
    Inverse of :func:`encode_number`. Rationals come back as
    :class:`~fractions.Fraction`.

    Raises
    -------
    MalformedInput
        The value is not an encoded number.
    '''
    try:
        if isinstance(data, (int, str)) and not isinstance(data, bool):
            return to_fraction(data)
        if isinstance(data, dict):
            if 'coeffs' in data:
                field = NumberField(data['minpoly'], tuple(data['interval']))
                return field.element([to_fraction(c) for c in data['coeffs']])
            return AlgebraicReal(data['minpoly'], tuple(data['interval']))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise MalformedInput('malformed number %r: %s' % (data, exc))
    raise MalformedInput('malformed number %r' % (data,))


# records

def matrix_to_dict(A: Sequence[Sequence[int]]) -> List[List[int]]:
    return [[int(a) for a in row] for row in A]


def matrix_from_dict(data) -> tuple:
    try:
        return tuple(tuple(int(a) for a in row) for row in data)
    except (TypeError, ValueError) as exc:
        raise MalformedInput('malformed matrix %r: %s' % (data, exc))


def pattern_to_dict(g: GluingPattern) -> dict:
    return {
        'sigma1': list(g.sigma1),
        'sigma2': list(g.sigma2),
        'labels1': list(g.labels1),
        'labels2': list(g.labels2),
    }


def pattern_from_dict(data: dict) -> GluingPattern:
    try:
        return GluingPattern(*(tuple(int(x) for x in data[key]) for key in ('sigma1', 'sigma2', 'labels1', 'labels2')))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput('malformed gluing pattern: %s' % exc)


def pair_to_dict(pair: CuspMatrixPair) -> dict:
    return {'A': matrix_to_dict(pair.A), 'D': list(pair.D)}


def cusp_to_dict(c: CuspDatum) -> dict:
    return {'A': matrix_to_dict(c.A), 'D': list(c.D), 'pattern': pattern_to_dict(c.pattern)}


def cusp_from_dict(data: dict) -> CuspDatum:
    try:
        return CuspDatum(matrix_from_dict(data['A']), tuple(int(x) for x in data['D']),
                         pattern_from_dict(data['pattern']))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput('malformed cusp datum: %s' % exc)


def _true_length(s: RectSurface, length):
    if s.scale_sq == 1:
        return length
    return AlgebraicReal.sqrt(s.scale_sq * length * length)


def surface_to_dict(s: RectSurface) -> dict:
    '''
    Writes the stored lengths with ``scale_sq`` and, for readers, the true
    lengths ``sqrt(scale_sq) * length`` as ``scaled_widths`` and
    ``scaled_heights``. Only the stored lengths are read back.
    '''
    return {
        'sigma1': list(s.sigma1),
        'sigma2': list(s.sigma2),
        'widths': [encode_number(x) for x in s.widths],
        'heights': [encode_number(x) for x in s.heights],
        'scale_sq': encode_number(s.scale_sq),
        'scaled_widths': [encode_number(_true_length(s, x)) for x in s.widths],
        'scaled_heights': [encode_number(_true_length(s, x)) for x in s.heights],
    }


def surface_from_dict(data: dict) -> RectSurface:
    '''
    Reads a surface record; an origami record (``sigma_h``, ``sigma_v``) is
    accepted as its square-tiled surface.

    Raises
    -------
    MalformedInput
        A field is missing or has the wrong shape.
    '''
    if 'sigma_h' in data:
        o = origami_from_dict(data)
        return RectSurface.from_origami(o.sigma_h, o.sigma_v)
    try:
        return RectSurface(
            tuple(int(x) for x in data['sigma1']),
            tuple(int(x) for x in data['sigma2']),
            tuple(decode_number(x) for x in data['widths']),
            tuple(decode_number(x) for x in data['heights']),
            decode_number(data['scale_sq']) if 'scale_sq' in data else None,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput('malformed surface: %s' % exc)


def origami_to_dict(o: Origami) -> dict:
    return {'sigma_h': list(o.sigma_h), 'sigma_v': list(o.sigma_v)}


def origami_from_dict(data: dict) -> Origami:
    try:
        o = Origami(tuple(int(x) for x in data['sigma_h']), tuple(int(x) for x in data['sigma_v']))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput('malformed origami: %s' % exc)
    o.validate()
    return o


def algebraic_to_dict(x: AlgebraicReal) -> dict:
    return {
        'minpoly': list(x.minpoly),
        'interval': [str(v) for v in x.interval],
        'approx': float(x),
    }


# wire

def record(kind: str, **data) -> Dict[str, Any]:
    '''Returns a record ``dict`` tagged with its kind.'''
    data['kind'] = kind
    return data


def dumps_record(data: Dict[str, Any]) -> bytes:
    '''
    Serializes a record as one line of JSON with sorted keys, so output
    bytes do not depend on construction order.
    '''
    return orjson.dumps(data, option=orjson.OPT_SORT_KEYS | orjson.OPT_APPEND_NEWLINE)


def loads_record(raw) -> Any:
    '''
    Raises
    -------
    MalformedInput
        The input is not valid JSON; the message carries the parse location.
    '''
    try:
        return orjson.loads(raw)
    except orjson.JSONDecodeError as exc:
        raise MalformedInput('invalid JSON at line %d column %d: %s' % (exc.lineno, exc.colno, exc.msg),
                             line=exc.lineno, column=exc.colno)


def record_type(data: Dict[str, Any]) -> RecordTypes:
    return RecordTypes(data.get('kind'))
