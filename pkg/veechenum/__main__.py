import argparse
import csv
import io
import logging
import sys
from contextlib import nullcontext
from typing import Iterable, Iterator, List

import orjson

from . import __version__
from .enumeration import (
    CuspDatum,
    brute_force_cusp_data,
    brute_force_irreducible,
    count_gluings_brute_force,
    enumerate_cusp_data,
    enumerate_gluings,
    enumerate_irreducible,
    enumerate_pa_matrices,
)
from .exactnum import to_fraction
from .hyperbolic import (
    UHPPoint,
    Moebius,
    act,
    commutator_certificate,
    cone_radius,
    cusp_area,
    cusp_witness,
    pythagorean_angles,
    sl2z_cusp_representatives,
)
from .lib.errors import IncompatibleGraph, InternalAssertion, InvalidJobSpec, NotIrreducible, VeechError
from .lib.message import FORMATS, JobSpec
from .lib.payload import (
    Records,
    algebraic_to_dict,
    cusp_to_dict,
    dumps_record,
    encode_number,
    loads_record,
    matrix_from_dict,
    matrix_to_dict,
    origami_from_dict,
    pattern_to_dict,
    record,
    surface_from_dict,
    surface_to_dict,
)
from .markov import (
    SegmentGluingGraph,
    build_markov,
    common_refinement,
    intersection_matrix,
    markov_bounds,
    reconstruct_from_markov,
    render_markov_svg,
    to_eigenbasis,
    verify_markov,
)
from .origami import affine_automorphism, find_hyperbolic
from .pfcore import perron_root
from .surface import (
    HORIZONTAL,
    VERTICAL,
    build_surface,
    cylinder_decomposition,
    intersection_data,
    parabolic_data,
    render_svg,
    stratum,
    validate,
)

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    '''Reports usage errors as :class:`InvalidJobSpec` so they share the exit codes.'''

    def error(self, message):
        raise InvalidJobSpec(message)


def _rows(text: str):
    return matrix_from_dict(loads_record(text))


def _read(path: str):
    with open(path, 'rb') as f:
        return loads_record(f.read())


def _check(found, expected, what: str):
    if sorted(found) != sorted(expected):
        raise InternalAssertion('%s differ from the brute force oracle' % what,
                                missing=len(set(expected) - set(found)), extra=len(set(found) - set(expected)))
    logger.info("oracle agrees on %d %s" % (len(found), what))


def cmd_enum_matrices(job: JobSpec) -> Iterator[dict]:
    found = enumerate_irreducible(job.dimension, job.threshold, job.positive, job.workers)
    if job.oracle:
        _check(found, brute_force_irreducible(job.dimension, job.threshold, job.positive), 'matrices')
    for A in found:
        root = perron_root(A)
        yield record(Records.matrix, A=matrix_to_dict(A), perron_root=algebraic_to_dict(root))
    yield record(Records.summary, count=len(found), T=str(job.threshold), d=job.dimension)


def cmd_enum_cusps(job: JobSpec) -> Iterator[dict]:
    pairs = enumerate_cusp_data(job.dimension, job.threshold, job.workers)
    if job.oracle:
        _check(pairs, brute_force_cusp_data(job.dimension, job.threshold), 'cusp matrix pairs')
    patterns_by_matrix = {}
    bound = count = 0
    for pair in pairs:
        if pair.A not in patterns_by_matrix:
            patterns_by_matrix[pair.A] = enumerate_gluings(pair.A)
        patterns = patterns_by_matrix[pair.A]
        bound += len(patterns)
        for g in patterns:
            built = build_surface(pair.A, pair.D, g)
            st = stratum(built.surface)
            count += 1
            yield record(
                Records.cusp,
                datum=cusp_to_dict(CuspDatum(pair.A, pair.D, g)),
                surface=surface_to_dict(built.surface),
                eigenvalue=algebraic_to_dict(built.eigenvalue),
                power=built.power,
                cone_angles=list(st.cone_angles),
                genus=st.genus,
            )
    yield record(Records.summary, count=count, pairs=len(pairs), bound=bound,
                 T=str(job.threshold), m=job.dimension)


def cmd_enum_gluings(job: JobSpec) -> Iterator[dict]:
    A = _rows(job.get('matrix'))
    patterns = enumerate_gluings(A)
    if job.oracle:
        _check(patterns, count_gluings_brute_force(A), 'gluing patterns')
    for g in patterns:
        yield record(Records.gluing, A=matrix_to_dict(A), pattern=pattern_to_dict(g))
    yield record(Records.summary, count=len(patterns))


def cmd_enum_pa(job: JobSpec) -> Iterator[dict]:
    matrices = enumerate_pa_matrices(job.dimension, job.threshold, job.positive, job.workers)
    if job.oracle:
        _check(matrices, brute_force_irreducible(job.dimension, job.threshold, job.positive), 'matrices')
    graph = SegmentGluingGraph.from_dict(_read(job.get('graph'))) if job.get('graph') else None
    for A in matrices:
        data = record(Records.pseudo_anosov, A=matrix_to_dict(A), dilatation=algebraic_to_dict(perron_root(A)))
        if graph is not None and graph.rect_count == len(A):
            try:
                data['surface'] = reconstruct_from_markov(A, graph).to_dict()
            except (IncompatibleGraph, NotIrreducible) as e:
                logger.debug("graph does not fit %s: %s" % (matrix_to_dict(A), e.message))
        yield data
    yield record(Records.summary, count=len(matrices), T=str(job.threshold), p=job.dimension)


def _cylinders(s, direction):
    cyls = cylinder_decomposition(s, direction)
    data = [{'rects': list(c.rect_cycle), 'circumference': encode_number(c.w), 'height': encode_number(c.h),
             'inverse_modulus': encode_number(c.modulus)} for c in cyls]
    try:
        p = parabolic_data(cyls)
        parabolic = {'mu': encode_number(p.mu), 'twists': list(p.twists)}
    except VeechError as e:
        parabolic = {'error': type(e).__name__, 'message': e.message}
    return data, parabolic


def cmd_surface_info(job: JobSpec) -> List[dict]:
    s = surface_from_dict(_read(job.get('file')))
    validate(s, normalized=False)
    st = stratum(s)
    data = record(Records.surface, cone_angles=list(st.cone_angles), genus=st.genus,
                  surface=surface_to_dict(s))
    for name, direction in (('horizontal', HORIZONTAL), ('vertical', VERTICAL)):
        data[name], data[name + '_parabolic'] = _cylinders(s, direction)
    try:
        data['intersection_data'] = cusp_to_dict(intersection_data(s))
    except VeechError as e:
        data['intersection_data'] = {'error': type(e).__name__, 'message': e.message}
    return [data]


def _automorphism(job: JobSpec):
    o = origami_from_dict(_read(job.get('file')))
    if job.get('matrix'):
        return o, affine_automorphism(o, _rows(job.get('matrix')))
    return o, find_hyperbolic(o)


def cmd_markov(job: JobSpec):
    o, aut = _automorphism(job)
    eigen = to_eigenbasis(o, aut)
    partition = build_markov(eigen)
    if job.fmt == 'svg':
        return render_markov_svg(partition)
    A = intersection_matrix(partition)
    graph = partition.glue_graph
    B, C = graph.xi_refinement.matrix, graph.eta_refinement.matrix
    low, high = markov_bounds(eigen.cone_angles())
    return [record(
        Records.markov,
        p=len(partition),
        bounds=[str(low), str(high)],
        verified=verify_markov(partition),
        eigen=eigen.to_dict(),
        A=matrix_to_dict(A),
        B=matrix_to_dict(B),
        C=matrix_to_dict(C),
        partition=partition.to_dict(),
        refinement=common_refinement(partition).to_dict() if job.get('common') else None,
    )]


def _point(text: str) -> UHPPoint:
    try:
        x, y = text.split(',')
        return UHPPoint(to_fraction(x.strip()), to_fraction(y.strip()))
    except ValueError:
        raise InvalidJobSpec('point must be written x,y, got %r' % text)


def cmd_hyp(job: JobSpec) -> List[dict]:
    tool = job.get('tool')
    if tool == 'cusp-area':
        bound = job.get('bound', 3)
        result = cusp_area(sl2z_cusp_representatives(bound), complete_below=bound)
        witness = cusp_witness(result.t0)
        return [record(Records.hyperbolic, tool=tool, t0=str(result.t0), certified=result.certified,
                       area=str(result.area), witness=[[str(x) for x in row] for row in witness.rows()])]
    if tool == 'commutator':
        t = to_fraction(job.get('t', '1'))
        if job.get('cos') is not None:
            angles = [(to_fraction(job.get('cos')), to_fraction(job.get('sin', '0')))]
        else:
            angles = pythagorean_angles(job.get('count', 100), seed=job.get('seed', 0))
        out = []
        for cos, sin in angles:
            c = commutator_certificate(t, cos, sin)
            out.append(record(Records.hyperbolic, tool=tool, t=str(t), cos=str(cos), sin=str(sin),
                              trace=str(c.trace), cosh_d=str(c.cosh_d), hyperbolic=c.hyperbolic))
        return out
    if tool == 'cone':
        z = _point(job.get('point', '0,1'))
        elements = [Moebius.from_rows(rows) for rows in _read(job.get('elements'))]
        value = cone_radius(z, [act(z, g) for g in elements])
        return [record(Records.hyperbolic, tool=tool, cosh_2r=str(value))]
    raise InvalidJobSpec('unknown hyp tool %r' % tool)


def cmd_render(job: JobSpec) -> str:
    s = surface_from_dict(_read(job.get('file')))
    return render_svg(s, labels=not job.get('no_labels', False))


COMMANDS = {
    'enum-matrices': cmd_enum_matrices,
    'enum-cusps': cmd_enum_cusps,
    'enum-gluings': cmd_enum_gluings,
    'enum-pa': cmd_enum_pa,
    'surface-info': cmd_surface_info,
    'markov': cmd_markov,
    'hyp': cmd_hyp,
    'render': cmd_render,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='veechenum', description='Veech group cusp and pseudo-Anosov enumeration')
    parser.add_argument('--version', action='store_true', help='print the version')
    parser.add_argument('-v', '--verbose', action='store_true', help='log debugging detail')
    parser.add_argument('-q', '--quiet', action='store_true', help='log warnings only')

    common = _Parser(add_help=False)
    common.add_argument('--format', choices=FORMATS, default='jsonl', help='output format')
    common.add_argument('--out', help='write output to this file instead of standard output')
    common.add_argument('--workers', type=int, default=1, help='size of the worker pool')
    common.add_argument('--oracle', action='store_true', help='check results against brute force')

    sub = parser.add_subparsers(dest='command', parser_class=_Parser)

    p = sub.add_parser('enum-matrices', parents=[common], help='irreducible matrices below T')
    p.add_argument('-m', type=int, required=True, help='matrix size')
    p.add_argument('-T', required=True, help='exclusive Perron root threshold')
    p.add_argument('--positive', action='store_true', help='strictly positive entries only')

    p = sub.add_parser('enum-cusps', parents=[common], help='cusp data with reconstructed surfaces')
    p.add_argument('-m', type=int, required=True, help='number of cylinders')
    p.add_argument('-T', required=True, help='exclusive Perron root threshold')

    p = sub.add_parser('enum-gluings', parents=[common], help='gluing patterns of a symmetric matrix')
    p.add_argument('--matrix', required=True, help='the matrix as JSON')

    p = sub.add_parser('enum-pa', parents=[common], help='intersection matrices of pseudo-Anosov maps')
    p.add_argument('-p', type=int, required=True, help='number of rectangles')
    p.add_argument('-T', required=True, help='exclusive dilatation threshold')
    p.add_argument('--positive', action='store_true', help='strictly positive entries only')
    p.add_argument('--graph', help='segment gluing graph JSON to reconstruct surfaces with')

    p = sub.add_parser('surface-info', parents=[common], help='invariants of a surface')
    p.add_argument('file', help='surface or origami JSON')

    p = sub.add_parser('markov', parents=[common], help='Markov partition of an origami automorphism')
    p.add_argument('file', help='origami JSON')
    p.add_argument('--matrix', help='derivative as JSON; searched for when omitted')
    p.add_argument('--common', action='store_true',
                   help='also refine over the iterates into a partition for the automorphism itself')

    p = sub.add_parser('hyp', parents=[common], help='hyperbolic geometry tools')
    p.add_argument('tool', choices=('cusp-area', 'commutator', 'cone'))
    p.add_argument('--bound', type=int, help='largest |c| of the SL(2, Z) element list')
    p.add_argument('-t', help='translation length of the commutator')
    p.add_argument('--cos', help='cosine of the rotation')
    p.add_argument('--sin', help='sine of the rotation')
    p.add_argument('--count', type=int, help='number of random rational angles')
    p.add_argument('--seed', type=int, help='seed for the random angles')
    p.add_argument('--point', help='fixed point x,y')
    p.add_argument('--elements', help='JSON list of group elements')

    p = sub.add_parser('render', parents=[common], help='SVG picture of a surface')
    p.add_argument('file', help='surface or origami JSON')
    p.add_argument('--no-labels', dest='no_labels', action='store_true', help='omit gluing labels')
    return parser


def _csv(records: Iterable[dict]) -> bytes:
    records = list(records)
    columns = sorted({key for r in records for key in r})
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for r in records:
        row = []
        for key in columns:
            value = r.get(key)
            if isinstance(value, (dict, list)):
                value = orjson.dumps(value, option=orjson.OPT_SORT_KEYS).decode()
            row.append('' if value is None else value)
        writer.writerow(row)
    return buffer.getvalue().encode()


def _encode(result, fmt: str) -> bytes:
    if isinstance(result, str):
        return result.encode()
    if fmt == 'csv':
        return _csv(result)
    if fmt == 'svg':
        raise InvalidJobSpec('svg output is only available for render and markov')
    return b''.join(dumps_record(r) for r in result)


def _emit(data: bytes, out):
    if out:
        with open(out, 'wb') as f:
            f.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _write(result, fmt: str, out):
    '''Writes JSON lines as the command yields them; other formats are written whole.'''
    if isinstance(result, str) or fmt != 'jsonl':
        _emit(_encode(result, fmt), out)
        return
    with (open(out, 'wb') if out else nullcontext(sys.stdout.buffer)) as f:
        for r in result:
            f.write(dumps_record(r))
            f.flush()


def run(argv=None) -> int:
    """ Module entry point"""

    parser = build_parser()
    out = None
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=logging.DEBUG if args.verbose else (logging.WARNING if args.quiet else logging.INFO),
            format='%(levelname)s %(name)s: %(message)s',
        )
        if args.version:
            print('veechenum version: %s' % __version__)
            return 0
        if args.command is None:
            parser.print_help()
            return 1
        job = JobSpec(vars(args))
        out = job.out
        logger.debug("running %r" % (job.to_dict(),))
        _write(COMMANDS[job.subcommand](job), job.fmt, out)
    except VeechError as e:
        logger.error("%s: %s" % (type(e).__name__, e.message))
        _emit(dumps_record(record(Records.error, **e.to_dict())), None)
        return e.exit_code
    except OSError as e:
        logger.error("cannot read or write %s: %s" % (e.filename, e.strerror))
        _emit(dumps_record(record(Records.error, error='OSError', message=str(e))), None)
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(run())
