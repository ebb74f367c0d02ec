import orjson
import pytest

from veechenum import __main__ as cli
from veechenum import __version__
from veechenum.__main__ import run
from veechenum.lib.errors import InternalAssertion
from veechenum.surface import build_surface


def _records(raw: bytes):
    return [orjson.loads(line) for line in raw.splitlines() if line.strip()]


def _write(tmp_path, name, data):
    path = tmp_path / name
    path.write_bytes(orjson.dumps(data))
    return str(path)


def test_version(capsysbinary):
    assert run(['--version']) == 0
    assert __version__.encode() in capsysbinary.readouterr().out


def test_enum_matrices(capsysbinary):
    assert run(['enum-matrices', '-m', '1', '-T', '2']) == 0
    records = _records(capsysbinary.readouterr().out)
    assert [r['A'] for r in records if r['kind'] == 'matrix'] == [[[1]]]
    assert records[-1] == {'kind': 'summary', 'count': 1, 'T': '2', 'd': 1}


def test_enum_cusps(capsysbinary):
    assert run(['enum-cusps', '-m', '1', '-T', '3']) == 0
    records = _records(capsysbinary.readouterr().out)
    cusps = [r for r in records if r['kind'] == 'cusp']
    assert len(cusps) == 3
    assert records[-1]['pairs'] == 3
    assert all(r['genus'] == 1 for r in cusps)


def test_enum_cusps_empty(capsysbinary):
    assert run(['enum-cusps', '-m', '1', '-T', '1']) == 0
    records = _records(capsysbinary.readouterr().out)
    assert records == [{'kind': 'summary', 'count': 0, 'pairs': 0, 'bound': 0, 'T': '1', 'm': 1}]


def test_enum_pa_positive(capsysbinary):
    assert run(['enum-pa', '-p', '2', '-T', '2.1', '--positive', '--oracle']) == 0
    records = _records(capsysbinary.readouterr().out)
    assert [r['A'] for r in records if r['kind'] == 'pseudo_anosov'] == [[[1, 1], [1, 1]]]


def test_enum_pa_small(capsysbinary):
    assert run(['enum-pa', '-p', '1', '-T', '2']) == 0
    records = _records(capsysbinary.readouterr().out)
    assert [r['A'] for r in records if r['kind'] == 'pseudo_anosov'] == [[[1]]]
    assert run(['enum-pa', '-p', '2', '-T', '1']) == 0
    assert _records(capsysbinary.readouterr().out)[-1]['count'] == 0


def test_enum_pa_with_graph(tmp_path, capsysbinary):
    graph = {
        'rect_count': 1,
        'xi': [{'tail': 'S0', 'head': 'S0', 'length': '1', 'top': 0, 'bottom': 0}],
        'eta': [{'tail': 'S0', 'head': 'S0', 'length': '1', 'right': 0, 'left': 0}],
    }
    path = _write(tmp_path, 'graph.json', graph)
    assert run(['enum-pa', '-p', '1', '-T', '2', '--graph', path]) == 0
    record = _records(capsysbinary.readouterr().out)[0]
    assert record['surface']['widths'] == ['1']
    assert record['surface']['heights'] == ['1']


def test_enum_gluings(capsysbinary):
    assert run(['enum-gluings', '--matrix', '[[1,1],[1,1]]', '--oracle']) == 0
    records = _records(capsysbinary.readouterr().out)
    assert records[-1]['count'] == len(records) - 1 > 0


def test_enum_gluings_not_symmetric(capsysbinary):
    assert run(['enum-gluings', '--matrix', '[[0,1],[2,0]]']) == 2
    assert _records(capsysbinary.readouterr().out)[-1]['error'] == 'NotSymmetric'


def test_surface_info_torus(tmp_path, capsysbinary):
    path = _write(tmp_path, 'torus.json', {'sigma_h': [0], 'sigma_v': [0]})
    assert run(['surface-info', path]) == 0
    (record,) = _records(capsysbinary.readouterr().out)
    assert record['genus'] == 1
    assert record['cone_angles'] == [2]
    assert record['intersection_data']['A'] == [[1]]


def test_surface_info_corrupt(tmp_path, capsysbinary):
    path = tmp_path / 'broken.json'
    path.write_bytes(b'{"sigma1": [0,')
    assert run(['surface-info', str(path)]) == 1
    assert _records(capsysbinary.readouterr().out)[-1]['error'] == 'MalformedInput'


def test_surface_info_missing_file(tmp_path, capsysbinary):
    assert run(['surface-info', str(tmp_path / 'absent.json')]) == 1
    assert _records(capsysbinary.readouterr().out)[-1]['error'] == 'OSError'


def test_markov_torus(tmp_path, capsysbinary):
    path = _write(tmp_path, 'torus.json', {'sigma_h': [0], 'sigma_v': [0]})
    assert run(['markov', path, '--matrix', '[[2,1],[1,1]]']) == 0
    (record,) = _records(capsysbinary.readouterr().out)
    assert record['p'] == 2
    assert record['verified'] is True
    assert record['eigen']['lambda_minpoly'] == [1, -3, 1]


def test_markov_common_refinement(tmp_path, capsysbinary):
    path = _write(tmp_path, 'torus.json', {'sigma_h': [0], 'sigma_v': [0]})
    assert run(['markov', path, '--matrix', '[[-2,-1],[-1,-1]]', '--common']) == 0
    (record,) = _records(capsysbinary.readouterr().out)
    assert record['eigen']['power'] == 2
    assert record['refinement']['lambda_minpoly'] == [1, -3, 1]
    assert record['refinement']['p'] == len(record['refinement']['rects'])


def test_markov_not_hyperbolic(tmp_path, capsysbinary):
    path = _write(tmp_path, 'torus.json', {'sigma_h': [0], 'sigma_v': [0]})
    assert run(['markov', path, '--matrix', '[[1,1],[0,1]]']) == 2
    assert _records(capsysbinary.readouterr().out)[-1]['error'] == 'NotHyperbolic'


def test_markov_svg(tmp_path):
    path = _write(tmp_path, 'torus.json', {'sigma_h': [0], 'sigma_v': [0]})
    out = tmp_path / 'markov.svg'
    assert run(['markov', path, '--matrix', '[[2,1],[1,1]]', '--format', 'svg', '--out', str(out)]) == 0
    assert out.read_text().startswith('<svg')


def test_hyp_cusp_area(capsysbinary):
    assert run(['hyp', 'cusp-area', '--bound', '3']) == 0
    (record,) = _records(capsysbinary.readouterr().out)
    assert record['t0'] == '1'
    assert record['certified'] is True
    assert record['witness'] == [['1', '0'], ['-1', '1']]


def test_hyp_commutator(capsysbinary):
    assert run(['hyp', 'commutator', '-t', '1', '--cos', '0', '--sin', '1']) == 0
    (record,) = _records(capsysbinary.readouterr().out)
    assert record['trace'] == '6'
    assert record['cosh_d'] == '3'


def test_hyp_commutator_random(capsysbinary):
    assert run(['hyp', 'commutator', '--count', '4', '--seed', '7']) == 0
    assert len(_records(capsysbinary.readouterr().out)) == 4


def test_hyp_cone(tmp_path, capsysbinary):
    path = _write(tmp_path, 'elements.json', [[[1, 1], [0, 1]]])
    assert run(['hyp', 'cone', '--point', '0,1', '--elements', path]) == 0
    (record,) = _records(capsysbinary.readouterr().out)
    assert record['cosh_2r'] == '3/2'


def test_render(tmp_path, capsysbinary):
    path = _write(tmp_path, 'l.json', {'sigma_h': [1, 2, 0], 'sigma_v': [1, 0, 2]})
    assert run(['render', path, '--no-labels']) == 0
    assert capsysbinary.readouterr().out.startswith(b'<svg')


def test_csv_output(capsysbinary):
    assert run(['enum-matrices', '-m', '1', '-T', '3', '--format', 'csv']) == 0
    lines = capsysbinary.readouterr().out.decode().splitlines()
    assert lines[0].split(',')[0] == 'A'
    assert len(lines) == 1 + 2 + 1


def test_out_file(tmp_path):
    out = tmp_path / 'matrices.jsonl'
    assert run(['enum-matrices', '-m', '1', '-T', '2', '--out', str(out)]) == 0
    assert _records(out.read_bytes())[-1]['count'] == 1


def test_worker_count_does_not_change_output(tmp_path):
    outputs = []
    for workers in ('1', '8'):
        out = tmp_path / ('cusps%s.jsonl' % workers)
        assert run(['enum-cusps', '-m', '2', '-T', '4', '--workers', workers, '--out', str(out)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    assert _records(outputs[0])[-1]['count'] > 0


def test_records_are_written_as_produced(monkeypatch, capsysbinary):
    built = []

    def build_once(A, D, g):
        if built:
            raise InternalAssertion('second surface')
        built.append(A)
        return build_surface(A, D, g)

    monkeypatch.setattr(cli, 'build_surface', build_once)
    assert run(['enum-cusps', '-m', '1', '-T', '3']) == 2
    records = _records(capsysbinary.readouterr().out)
    assert [r['kind'] for r in records] == ['cusp', 'error']
    assert records[1]['error'] == 'InternalAssertion'


@pytest.mark.parametrize('argv', [
    ['enum-matrices', '-m', '1', '-T', '0'],
    ['enum-matrices', '-m', '1', '-T', 'abc'],
    ['enum-matrices', '-m', '0', '-T', '2'],
    ['enum-matrices', '-m', '1', '-T', '2', '--workers', '0'],
    ['enum-matrices', '-m', '1'],
    ['enum-matrices', '-m', '1', '-T', '2', '--format', 'svg'],
])
def test_invalid_jobs(argv, capsysbinary):
    assert run(argv) == 1
    assert _records(capsysbinary.readouterr().out)[-1]['kind'] == 'error'
