from fractions import Fraction

import pytest

from veechenum.enumeration import CuspDatum, enumerate_gluings
from veechenum.exactnum import AlgebraicReal, NumberField
from veechenum.lib.errors import InvalidJobSpec, MalformedInput, NotConnected
from veechenum.lib.message import JobSpec
from veechenum.lib.payload import (
    Records,
    cusp_from_dict,
    cusp_to_dict,
    decode_number,
    dumps_record,
    encode_number,
    loads_record,
    origami_from_dict,
    record,
    record_type,
    surface_from_dict,
    surface_to_dict,
)
from veechenum.surface import RectSurface, build_surface, surfaces_equal


def test_encode_rationals():
    assert encode_number(3) == '3'
    assert encode_number(Fraction(-1, 2)) == '-1/2'
    assert encode_number(NumberField([1, -1, -1], (1, 2))(5)) == '5'
    with pytest.raises(TypeError):
        encode_number(True)


def test_encode_irrational():
    root = AlgebraicReal.largest_real_root([1, -3, 1])
    data = encode_number(root)
    assert data['minpoly'] == [1, -3, 1]
    assert abs(data['approx'] - 2.618033988) < 1e-8
    assert decode_number(data) == root


def test_decode_field_element():
    K = NumberField([1, -1, -1], (1, 2))
    x = 2 * K.gen - Fraction(1, 3)
    assert decode_number(encode_number(x)) == x


def test_decode_rejects_garbage():
    with pytest.raises(MalformedInput):
        decode_number('one half')
    with pytest.raises(MalformedInput):
        decode_number([1, 2])
    with pytest.raises(MalformedInput):
        decode_number({'interval': [0, 1]})
    with pytest.raises(MalformedInput):
        decode_number({'minpoly': [1, 0, -2], 'interval': ['-2', '2']})


def test_surface_records():
    A = ((1, 1), (1, 0))
    built = build_surface(A, (1, 1), enumerate_gluings(A)[0])
    data = loads_record(dumps_record(surface_to_dict(built.surface)))
    assert surfaces_equal(surface_from_dict(data), built.surface)


def test_surface_from_origami_record():
    s = surface_from_dict({'sigma_h': [1, 0], 'sigma_v': [0, 1]})
    assert s == RectSurface.from_origami((1, 0), (0, 1))
    with pytest.raises(NotConnected):
        origami_from_dict({'sigma_h': [0, 1], 'sigma_v': [0, 1]})
    with pytest.raises(MalformedInput):
        surface_from_dict({'sigma1': [0]})


def test_cusp_records():
    A = ((2,),)
    datum = CuspDatum(A, (1,), enumerate_gluings(A)[0])
    assert cusp_from_dict(loads_record(dumps_record(cusp_to_dict(datum)))) == datum


def test_records_are_sorted_lines():
    raw = dumps_record(record(Records.summary, count=2, T='3'))
    assert raw == b'{"T":"3","count":2,"kind":"summary"}\n'
    kind = record_type(loads_record(raw))
    assert kind == Records.summary
    assert kind.summary and not kind.error and not kind.enumerated


def test_loads_reports_position():
    with pytest.raises(MalformedInput) as info:
        loads_record(b'{"a": ')
    assert 'line' in info.value.context


def test_job_spec():
    job = JobSpec({'command': 'enum-pa', 'p': 2, 'T': '2.1', 'positive': True, 'workers': 2})
    assert job.subcommand == 'enum-pa'
    assert job.threshold == Fraction(21, 10)
    assert job.dimension == 2
    assert job.fmt == 'jsonl'
    assert job.positive and not job.oracle
    assert job.to_dict()['threshold'] == '21/10'
    assert JobSpec({'command': 'enum-pa', 'p': 1, 'T': '2'}).workers == 1


@pytest.mark.parametrize('args', [
    {'command': 'enum-pa', 'p': 2, 'T': '-1'},
    {'command': 'enum-pa', 'p': 2, 'T': 'x'},
    {'command': 'enum-pa', 'p': 0, 'T': '2'},
    {'command': 'enum-pa', 'p': 1, 'T': '2', 'format': 'xml'},
    {'command': 'enum-pa', 'p': 1, 'T': '2', 'workers': 0},
    {'command': 'enum-pa', 'p': 1, 'T': '2', 'workers': -3},
])
def test_job_spec_rejects(args):
    with pytest.raises(InvalidJobSpec):
        JobSpec(args)


def test_surface_records_carry_scaled_lengths():
    data = surface_to_dict(RectSurface.from_origami((1, 0), (0, 1)))
    assert data['widths'] == ['1', '1']
    assert data['scale_sq'] == '1/2'
    side = data['scaled_widths'][0]
    assert side['minpoly'] == [2, 0, -1]
    assert abs(side['approx'] - 0.7071067811865476) < 1e-12
    assert data['scaled_heights'] == data['scaled_widths']
    assert surface_to_dict(RectSurface.from_origami((0,), (0,)))['scaled_widths'] == ['1']
    assert surfaces_equal(surface_from_dict(loads_record(dumps_record(data))), RectSurface.from_origami((1, 0), (0, 1)))


def test_scaled_lengths_of_irrational_surface():
    A = ((1, 1), (1, 0))
    built = build_surface(A, (1, 1), enumerate_gluings(A)[0])
    data = surface_to_dict(built.surface)
    s = built.surface
    for stored, scaled in zip(s.widths + s.heights, data['scaled_widths'] + data['scaled_heights']):
        root = decode_number(scaled)
        assert abs(float(root) ** 2 - float(s.scale_sq * stored * stored)) < 1e-9
