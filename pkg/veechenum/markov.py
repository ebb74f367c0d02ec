"""
Markov partitions for hyperbolic affine automorphisms of square-tiled surfaces.

Points are ``(square, x, y)`` in the unit square charts of an origami, with
exact coordinates in ``Q(lambda)``. The expanding eigendirection ``u`` plays
the part of the horizontal and the contracting one ``s`` the vertical; they
are normalized so that ``det(u, s) = 1``, which makes lengths along ``u`` and
``s`` the widths and heights of the partition and makes rectangle areas add up
to the number of squares.

Every rectangle is a strip of upward leaves standing on a segment ``gamma`` of
the rightward separatrix of a singularity, cut into bands when refined
horizontally. The automorphism power in use fixes every separatrix, so it
moves the point at distance ``d`` along that separatrix to distance
``lambda d`` and shrinks vertical leaves by ``1 / lambda``; images of partition
vertices are computed in these separatrix coordinates and then located by
tracing leaves.
"""

from fractions import Fraction
from functools import cmp_to_key
from math import ceil
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple
import logging
import xml.etree.ElementTree as ET

from .exactnum import AlgebraicReal, NFElement, to_float, to_fraction
from .lib.errors import (
    HitSingularity,
    IncompatibleGraph,
    InputError,
    InternalAssertion,
    MarkovPropertyViolated,
    NotEdgeToEdge,
    NotHyperbolic,
    SaddleConnectionFound,
)
from .lib.payload import decode_number, encode_number
from .lib.permutation import perm_compose, perm_cycles, perm_invert, perm_order
from .origami import AffineAut, Origami, mat2_mul, mat2_trace
from .pfcore import as_matrix, is_irreducible, perron_root, perron_vector, transpose
from .surface import RectSurface, surfaces_equal, svg_root, validate

logger = logging.getLogger(__name__)

UP, DOWN, LEFT, RIGHT = 'up', 'down', 'left', 'right'
XI, ETA = 'xi', 'eta'


class SurfacePoint(NamedTuple):
    square: int
    x: object
    y: object


class Event(NamedTuple):
    '''A point a traced leaf went through without stopping.'''
    length: object
    kind: str
    singularity: Optional[int]
    before: int
    after: int
    point: SurfacePoint
    stop: Optional[int] = None
    position: object = None


class Piece(NamedTuple):
    '''The part of a leaf inside one square, starting at ``(x, y)``.'''
    square: int
    x: object
    y: object
    start: object
    end: object


class LeafTrace(NamedTuple):
    point: SurfacePoint
    length: object
    stop: Optional[int]
    position: object
    events: Tuple[Event, ...]
    pieces: Tuple[Piece, ...]


def cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _sgn(value) -> int:
    return (value > 0) - (value < 0)


def corner_classes(o: Origami) -> List[Tuple[int, ...]]:
    '''
    Returns the singularities as cycles of bottom-left corners, each cycle
    listed counterclockwise around its point.
    '''
    h_inv = perm_invert(o.sigma_h)
    v_inv = perm_invert(o.sigma_v)
    walk = perm_compose(perm_compose(perm_compose(h_inv, v_inv), o.sigma_h), o.sigma_v)
    return perm_cycles(walk)


def direction_corner(v) -> Tuple[int, int]:
    '''Returns the corner of a square from which ``v`` points into it.'''
    return (0 if v[0] > 0 else 1, 0 if v[1] > 0 else 1)


class SquareCharts:
    '''
    Neighbour tables, singularities and counterclockwise sector ranks of an
    origami.
    '''

    def __init__(self, origami: Origami):
        self.origami = origami
        self.h = tuple(origami.sigma_h)
        self.v = tuple(origami.sigma_v)
        self.h_inv = tuple(perm_invert(self.h))
        self.v_inv = tuple(perm_invert(self.v))
        self.classes = corner_classes(origami)
        self.class_of: Dict[int, int] = {}
        self.sector: Dict[Tuple[int, Tuple[int, int]], Tuple[int, int]] = {}
        for index, cycle in enumerate(self.classes):
            for position, j in enumerate(cycle):
                self.class_of[j] = index
                left = self.h_inv[j]
                below = self.v_inv[left]
                right = self.h[below]
                quadrants = ((j, (0, 0)), (left, (1, 0)), (below, (1, 1)), (right, (0, 1)))
                for q, key in enumerate(quadrants):
                    self.sector[key] = (index, 4 * position + q)

    @property
    def n(self) -> int:
        return len(self.h)

    def corner_class(self, square: int, cx: int, cy: int) -> int:
        if (cx, cy) == (0, 0):
            bottom_left = square
        elif (cx, cy) == (1, 0):
            bottom_left = self.h[square]
        elif (cx, cy) == (0, 1):
            bottom_left = self.v[square]
        else:
            bottom_left = self.h[self.v[square]]
        return self.class_of[bottom_left]

    def cone_angles(self) -> Tuple[int, ...]:
        '''Cone angles in units of ``pi``.'''
        return tuple(sorted(2 * len(c) for c in self.classes))


def _charts(surface) -> SquareCharts:
    if isinstance(surface, SquareCharts):
        return surface
    if isinstance(surface, EigenSurface):
        return surface.charts
    return SquareCharts(surface)


def _exact(value):
    return value if isinstance(value, NFElement) else to_fraction(value)


def _exit_time(coord, velocity):
    coord, velocity = _exact(coord), _exact(velocity)
    if velocity > 0:
        return (1 - coord) / velocity
    if velocity < 0:
        return -coord / velocity
    return None


def _smaller(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a if a <= b else b


class Segment:
    '''
    A straight segment on a surface, kept as its pieces in the square charts
    so that leaves can be stopped on it.
    '''

    def __init__(self, direction, length, pieces: Sequence[Piece]):
        self.direction = direction
        self.length = length
        self.pieces = tuple(pieces)
        self.by_square: Dict[int, List[Piece]] = {}
        for piece in self.pieces:
            self.by_square.setdefault(piece.square, []).append(piece)
        self._inverse = {}

    @classmethod
    def trace(cls, surface, start: SurfacePoint, direction, length, side: int = 0, shift=None) -> 'Segment':
        leaf = trace_leaf(surface, start, direction, side=side, shift=shift, max_length=length)
        return cls(direction, length, leaf.pieces)

    def inverse_cross(self, v):
        '''Returns ``1 / cross(direction, v)``, or ``None`` when ``v`` is parallel.'''
        if v not in self._inverse:
            det = cross(self.direction, v)
            self._inverse[v] = None if det == 0 else Fraction(1) / det
        return self._inverse[v]

    def piece_point(self, piece: Piece, distance):
        d = distance - piece.start
        return (piece.x + d * self.direction[0], piece.y + d * self.direction[1])


def _stop_hits(charts, stops, k, x, y, v, limit, allow_zero, side, shift, travelled):
    best = None
    grazes = []
    for index, stop in enumerate(stops):
        w = stop.direction
        inv = stop.inverse_cross(v)
        if inv is None:
            continue
        for piece in stop.by_square.get(k, ()):
            rx, ry = piece.x - x, piece.y - y
            t = (w[0] * ry - rx * w[1]) * inv
            sigma = (v[0] * ry - v[1] * rx) * inv
            if t < 0 or (t == 0 and not allow_zero):
                continue
            if limit is not None and t > limit:
                continue
            if sigma < 0 or sigma > piece.end - piece.start:
                continue
            position = piece.start + sigma
            if side and (position == 0 or position == stop.length):
                # a shifted leaf misses the segment on one side of each end
                c = _sgn(cross(v, shift)) * _sgn(cross(v, w))
                inside = side * c > 0 if position == 0 else side * c < 0
                if not inside:
                    point = SurfacePoint(k, x + t * v[0], y + t * v[1])
                    grazes.append(Event(travelled + t, 'endpoint', None, k, k, point, index, position))
                    continue
            if best is None or t < best[0]:
                best = (t, index, position)
    return best, grazes


def _stop_at_corner(charts, stops, singularity):
    for index, stop in enumerate(stops):
        for piece in stop.pieces:
            ends = ((piece.start, (piece.x, piece.y)), (piece.end, stop.piece_point(piece, piece.end)))
            for position, (px, py) in ends:
                if px in (0, 1) and py in (0, 1):
                    if charts.corner_class(piece.square, int(px == 1), int(py == 1)) == singularity:
                        return index, position
    return None


def trace_leaf(surface, start, direction, stops: Sequence[Segment] = (), side: int = 0, shift=None,
               max_length=None, include_start: bool = False, max_steps: int = 100000) -> LeafTrace:
    '''
    Follows the straight leaf from ``start`` in ``direction`` through the
    square charts until it meets one of ``stops`` or has run ``max_length``.

    Parameters
    -----------
    surface: Union[:class:`~veechenum.origami.Origami`, :class:`SquareCharts`, :class:`EigenSurface`]
        The square-tiled surface.
    start: :class:`SurfacePoint`
        Starting point; coordinates may lie on the boundary of its square.
    direction:
        Direction vector; lengths are multiples of it.
    stops: Sequence[:class:`Segment`]
        Segments transverse to the leaf.
    side: :class:`int`
        ``0`` for the leaf itself, ``1`` or ``-1`` for the leaf shifted by an
        infinitesimal multiple of ``side * shift``. Shifted leaves pass
        singularities instead of stopping there.
    include_start: :class:`bool`
        Whether a stop through ``start`` counts as a hit at length zero.

    Raises
    -------
    HitSingularity
        An unshifted leaf reached a singularity.

    Return Type
    -----------
    :class:`LeafTrace`
    '''
    charts = _charts(surface)
    v = tuple(_exact(c) for c in direction)
    vx, vy = v
    k, x, y = start
    x, y = _exact(x), _exact(y)
    if max_length is not None:
        max_length = _exact(max_length)
    travelled = 0
    events: List[Event] = []
    pieces: List[Piece] = []

    def piece(upto):
        if upto > travelled:
            pieces.append(Piece(k, x, y, travelled, upto))

    for _ in range(max_steps):
        tx = _exit_time(x, vx)
        ty = _exit_time(y, vy)
        te = _smaller(tx, ty)
        remaining = None if max_length is None else max_length - travelled
        allow_zero = include_start or travelled != 0
        hit, grazes = _stop_hits(charts, stops, k, x, y, v, _smaller(te, remaining), allow_zero,
                                 side, shift, travelled)
        for graze in grazes:
            if (hit is None or graze.length < travelled + hit[0]) and \
                    all((e.stop, e.position) != (graze.stop, graze.position) for e in events):
                events.append(graze)
        if hit is not None:
            t, index, position = hit
            piece(travelled + t)
            point = SurfacePoint(k, x + t * vx, y + t * vy)
            return LeafTrace(point, travelled + t, index, position, tuple(events), tuple(pieces))
        if remaining is not None and (te is None or remaining <= te):
            piece(max_length)
            point = SurfacePoint(k, x + remaining * vx, y + remaining * vy)
            return LeafTrace(point, max_length, None, None, tuple(events), tuple(pieces))
        if te is None:
            raise InternalAssertion('leaf does not leave square %d' % k)
        piece(travelled + te)
        travelled = travelled + te
        nx = 1 if tx is not None and tx == te and vx > 0 else (0 if tx is not None and tx == te else x + te * vx)
        ny = 1 if ty is not None and ty == te and vy > 0 else (0 if ty is not None and ty == te else y + te * vy)
        exit_x = tx is not None and tx == te
        exit_y = ty is not None and ty == te
        at_corner = (exit_x and exit_y) or (exit_y and vx == 0 and nx in (0, 1)) or \
            (exit_x and vy == 0 and ny in (0, 1))
        if at_corner:
            cx, cy = int(nx == 1), int(ny == 1)
            singularity = charts.corner_class(k, cx, cy)
            here = SurfacePoint(k, nx, ny)
            if side == 0 or vx == 0 or vy == 0:
                found = _stop_at_corner(charts, stops, singularity)
                if found is not None:
                    return LeafTrace(here, travelled, found[0], found[1], tuple(events), tuple(pieces))
                raise HitSingularity('leaf reached singularity %d after length %s' % (singularity, travelled),
                                     singularity=singularity, square=k, corner=(cx, cy), length=travelled)
            ex, ey = shift
            x_first = side * (ex / vx - ey / vy) > 0
            step_x = charts.h if vx > 0 else charts.h_inv
            step_y = charts.v if vy > 0 else charts.v_inv
            after = step_y[step_x[k]] if x_first else step_x[step_y[k]]
            events.append(Event(travelled, 'singularity', singularity, k, after, here))
            k, x, y = after, (0 if vx > 0 else 1), (0 if vy > 0 else 1)
        elif exit_x:
            k, x, y = (charts.h[k] if vx > 0 else charts.h_inv[k]), (0 if vx > 0 else 1), ny
        else:
            k, x, y = (charts.v[k] if vy > 0 else charts.v_inv[k]), nx, (0 if vy > 0 else 1)
    raise InternalAssertion('leaf tracing did not finish within %d squares' % max_steps)


def _eigenframe(M):
    '''
    Returns ``(lambda, u, s)`` for a matrix of trace above two: the expanding
    eigenvalue, its eigenvector, and the contracting eigenvector scaled so that
    ``det(u, s) = 1``.
    '''
    (a, b), (c, d) = M
    t = a + d
    lam = AlgebraicReal.largest_real_root([1, -t, 1])
    K = lam.field
    l = lam.as_element()
    u = (K(b), l - a)
    s = (K(b), d - l)
    det = cross(u, s)
    s = (s[0] / det, s[1] / det)
    return lam, u, s


def _mat_power(M, k: int):
    result = ((1, 0), (0, 1))
    for _ in range(k):
        result = mat2_mul(result, M)
    return result


class EigenSurface:
    '''
    An origami with a hyperbolic affine automorphism power that fixes every
    singularity and separatrix, together with its eigenframe.

    Attributes
    -----------
    aut: :class:`~veechenum.origami.AffineAut`
        The automorphism ``phi`` that was supplied.
    power: :class:`int`
        The power of ``phi`` whose partition is built.
    deriv:
        Derivative of that power.
    lam: :class:`~veechenum.exactnum.AlgebraicReal`
        Its expansion factor.
    u, s:
        Expanding and contracting directions over ``lam.field``.
    '''

    def __init__(self, aut: AffineAut, power: int, deriv, lam: AlgebraicReal, u, s):
        self.aut = aut
        self.origami = aut.origami
        self.charts = SquareCharts(aut.origami)
        self.power = power
        self.deriv = deriv
        self.lam = lam
        self.field = lam.field
        self.lam_element = lam.as_element()
        self.u = u
        self.s = s

    @property
    def n(self) -> int:
        return self.charts.n

    def direction(self, name: str):
        u, s = self.u, self.s
        return {RIGHT: u, LEFT: (-u[0], -u[1]), UP: s, DOWN: (-s[0], -s[1])}[name]

    def separatrix_start(self, square: int, name: str) -> SurfacePoint:
        '''The corner of ``square`` from which the separatrix in direction ``name`` enters it.'''
        cx, cy = direction_corner(self.direction(name))
        return SurfacePoint(square, self.field(cx), self.field(cy))

    def singularity_of(self, square: int, name: str) -> int:
        return self.charts.corner_class(square, *direction_corner(self.direction(name)))

    @property
    def gamma_square(self) -> int:
        '''Square entered by the rightward separatrix of singularity ``0`` used for ``gamma``.'''
        return min(j for j in range(self.n) if self.singularity_of(j, RIGHT) == 0)

    def cone_angles(self) -> Tuple[int, ...]:
        return self.charts.cone_angles()

    def trace(self, start: SurfacePoint, name: str, stops: Sequence[Segment] = (), **kwargs) -> LeafTrace:
        return trace_leaf(self.charts, start, self.direction(name), stops, **kwargs)

    def to_dict(self) -> dict:
        return {
            'sigma_h': list(self.origami.sigma_h),
            'sigma_v': list(self.origami.sigma_v),
            'deriv': [list(row) for row in self.aut.deriv],
            'power': self.power,
            'power_deriv': [list(row) for row in self.deriv],
            'lambda_minpoly': list(self.lam.minpoly),
            'lambda_approx': float(self.lam),
            'cone_angles': list(self.cone_angles()),
        }


def _separatrix_permutation(aut: AffineAut, base: int, charts: SquareCharts, u, lam: AlgebraicReal) -> List[int]:
    # a point close to each separatrix start stays in the square its image separatrix enters
    reach = max(abs(to_float(u[0])), abs(to_float(u[1])))
    eps = Fraction(1, 4 * (ceil(float(lam)) + 1) * (ceil(reach) + 1))
    cx, cy = direction_corner(u)
    perm = []
    for j in range(charts.n):
        point = (j, cx + eps * u[0], cy + eps * u[1])
        for _ in range(base):
            point = aut(point)
        perm.append(point[0])
    return perm


def to_eigenbasis(surface, aut: AffineAut) -> EigenSurface:
    '''
    Passes to the smallest power of ``aut`` with a positive expanding
    eigenvalue that fixes every separatrix, and computes its eigenframe.

    Parameters
    -----------
    surface: Union[:class:`~veechenum.origami.Origami`, :class:`~veechenum.surface.RectSurface`]
        The surface ``aut`` acts on.
    aut: :class:`~veechenum.origami.AffineAut`
        A hyperbolic affine automorphism of it.

    Raises
    -------
    NotHyperbolic
        ``|tr| <= 2``.
    InputError
        ``aut`` belongs to another surface.
    '''
    o = aut.origami
    same = o.canonical() == surface.canonical() if isinstance(surface, Origami) else \
        surfaces_equal(RectSurface.from_origami(o.sigma_h, o.sigma_v), surface)
    if not same:
        raise InputError('automorphism does not act on the given surface')
    if not aut.is_hyperbolic:
        raise NotHyperbolic('trace %d of %r is not hyperbolic' % (aut.trace, aut.deriv), trace=aut.trace)
    base = 2 if aut.trace < 0 else 1
    M = _mat_power(aut.deriv, base)
    lam, u, _ = _eigenframe(M)
    charts = SquareCharts(aut.origami)
    perm = _separatrix_permutation(aut, base, charts, u, lam)
    order = perm_order(perm)
    deriv = _mat_power(M, order)
    lam, u, s = _eigenframe(deriv)
    logger.debug("eigenframe for %r: power %d, trace %d" % (aut.deriv, base * order, mat2_trace(deriv)))
    return EigenSurface(aut, base * order, deriv, lam, u, s)


class Transversal:
    '''The horizontal segment ``gamma`` of the given length along the rightward separatrix.'''

    def __init__(self, eigen: EigenSurface, length):
        self.eigen = eigen
        self.length = length
        self.start = eigen.separatrix_start(eigen.gamma_square, RIGHT)
        self.segment = Segment.trace(eigen.charts, self.start, eigen.u, length)

    def point_at(self, position) -> SurfacePoint:
        if position == 0:
            return self.start
        for piece in self.segment.pieces:
            if piece.start < position <= piece.end:
                x, y = self.segment.piece_point(piece, position)
                return SurfacePoint(piece.square, x, y)
        raise ValueError('position %s is not on gamma' % (position,))

    def separatrix_point(self, position) -> SurfacePoint:
        '''The point at ``position`` along the separatrix carrying ``gamma``, possibly beyond it.'''
        if position <= self.length:
            return self.point_at(position)
        return trace_leaf(self.eigen.charts, self.start, self.eigen.u, max_length=position).point


class MarkovRect(NamedTuple):
    index: int
    strip: int
    left: object
    width: object
    lift: object
    height: object


class Side(NamedTuple):
    '''A vertical side of a strip, traced upwards from ``gamma``.'''
    strip: int
    edge: str
    hside: int
    start: SurfacePoint
    trace: LeafTrace
    segment: Segment

    def vertices(self) -> List[Event]:
        out = []
        for event in self.trace.events:
            if 0 < event.length < self.trace.length:
                out.append(event)
        return out

    def square_after(self, height) -> int:
        return next(p.square for p in self.trace.pieces if p.start <= height < p.end)

    def square_before(self, height) -> int:
        return next(p.square for p in reversed(self.trace.pieces) if p.start < height <= p.end)


class LevelSource(NamedTuple):
    '''The side vertex a horizontal cut of a strip starts from.'''
    hside: int
    event: Event


def _band(levels, beta, vside: int) -> Optional[int]:
    for k in range(len(levels) - 1):
        if vside > 0 and levels[k] <= beta < levels[k + 1]:
            return k
        if vside <= 0 and levels[k] < beta <= levels[k + 1]:
            return k
    return None


class MarkovPartition:
    '''
    Rectangles standing on ``gamma``: strip ``j`` sits over
    ``[cuts[j], cuts[j + 1]]``, has height ``heights[j]`` and comes back to
    ``gamma`` at ``[tops[j], tops[j] + width]``. ``levels[j]`` lists the
    heights where the strip is cut into bands.
    '''

    def __init__(self, eigen: EigenSurface, gamma: Transversal, cuts, heights, tops, levels=None,
                 level_sources: Optional[Dict] = None):
        self.eigen = eigen
        self.gamma = gamma
        self.cuts = tuple(cuts)
        self.heights = tuple(heights)
        self.tops = tuple(tops)
        self.levels = tuple(tuple(x) for x in levels) if levels is not None else tuple(() for _ in self.heights)
        self.level_sources = dict(level_sources or {})
        self._glue_graph: Optional['SegmentGluingGraph'] = None
        self._matrix = None
        self._sides = None
        self._rects = None

    @property
    def glue_graph(self) -> Optional['SegmentGluingGraph']:
        '''The gluing pattern with its refinements, extracted on first use; ``None`` once cut into bands.'''
        if self._glue_graph is None and not any(self.levels):
            self._glue_graph = extract_graph(self)
        return self._glue_graph

    @property
    def widths(self):
        return tuple(b - a for a, b in zip(self.cuts, self.cuts[1:]))

    @property
    def strip_count(self) -> int:
        return len(self.heights)

    def strip_levels(self, j: int):
        return (self.eigen.field.zero(),) + self.levels[j] + (self.heights[j],)

    @property
    def rects(self) -> List[MarkovRect]:
        if self._rects is None:
            rects = []
            for j, width in enumerate(self.widths):
                levels = self.strip_levels(j)
                for lo, hi in zip(levels, levels[1:]):
                    rects.append(MarkovRect(len(rects), j, self.cuts[j], width, lo, hi - lo))
            self._rects = rects
        return self._rects

    def __len__(self) -> int:
        return len(self.rects)

    def rect_index(self, strip: int, beta, vside: int = 1) -> Optional[int]:
        band = _band(self.strip_levels(strip), beta, vside)
        if band is None:
            return None
        return sum(len(self.levels[j]) + 1 for j in range(strip)) + band

    def strip_at(self, x, hside: int = 1) -> Optional[int]:
        for j in range(self.strip_count):
            a, b = self.cuts[j], self.cuts[j + 1]
            if (hside >= 0 and a <= x < b) or (hside < 0 and a < x <= b):
                return j
        return None

    def top_strip_at(self, x) -> Optional[int]:
        '''The strip whose top covers ``gamma`` just right of ``x``.'''
        for j, (top, width) in enumerate(zip(self.tops, self.widths)):
            if top <= x < top + width:
                return j
        return None

    def area(self):
        total = self.eigen.field.zero()
        for rect in self.rects:
            total = total + rect.width * rect.height
        return total

    def locate(self, point: SurfacePoint, hside: int = 1, vside: int = 1):
        '''
        Returns ``(strip, height, position)`` of the point shifted slightly by
        ``hside`` horizontally and ``vside`` vertically, found by following
        the downward leaf back to ``gamma``.
        '''
        hside = hside or 1
        e = self.eigen
        trace = trace_leaf(e.charts, point, e.direction(DOWN), stops=[self.gamma.segment], side=hside,
                           shift=e.u, include_start=vside >= 0)
        return self.strip_at(trace.position, hside), trace.length, trace.position

    def sides(self) -> List[Side]:
        if self._sides is None:
            e = self.eigen
            sides = []
            for j, height in enumerate(self.heights):
                for edge, hside, x in (('left', 1, self.cuts[j]), ('right', -1, self.cuts[j + 1])):
                    start = self.gamma.point_at(x)
                    trace = trace_leaf(e.charts, start, e.s, stops=[self.gamma.segment], side=hside,
                                       shift=e.u, max_length=height)
                    if trace.length != height:
                        raise InternalAssertion('%s side of strip %d returns to gamma early' % (edge, j))
                    sides.append(Side(j, edge, hside, start, trace, Segment(e.s, height, trace.pieces)))
            self._sides = sides
        return self._sides

    def image_point(self, x, lift, hside: int) -> SurfacePoint:
        '''Image under the automorphism of the point ``lift`` above ``gamma`` at ``x``.'''
        e = self.eigen
        lam = e.lam_element
        point = self.gamma.separatrix_point(lam * x)
        if lift != 0:
            point = trace_leaf(e.charts, point, e.s, side=hside, shift=e.u, max_length=lift / lam).point
        return point

    def level_preimage(self, j: int, level):
        '''Returns ``(point, hside, offset)`` locating the preimage of a horizontal side.'''
        lam = self.eigen.lam_element
        if level == 0:
            return self.gamma.point_at(self.cuts[j] / lam), 1, 0
        if level == self.heights[j]:
            return self.gamma.point_at(self.tops[j] / lam), 1, 0
        source = self.level_sources[(j, level)]
        offset = 0 if source.hside > 0 else self.widths[j] / lam
        if source.event.kind == 'singularity':
            return source.event.point, source.hside, offset
        return self.gamma.point_at(source.event.position / lam), source.hside, offset

    def in_vertical_side(self, point: SurfacePoint, length) -> bool:
        '''Whether the upward segment from ``point`` lies in a vertical side.'''
        for hside in (1, -1):
            strip, beta, x = self.locate(point, hside, 1)
            if strip is None:
                continue
            if x != (self.cuts[strip] if hside > 0 else self.cuts[strip + 1]):
                continue
            levels = self.strip_levels(strip)
            band = _band(levels, beta, 1)
            if band is not None and beta + length <= levels[band + 1]:
                return True
        return False

    def in_horizontal_side(self, point: SurfacePoint, hside: int, offset, length) -> bool:
        '''Whether the horizontal segment through ``point``, starting ``offset`` to its left, lies in a side.'''
        for vside in (1, -1):
            strip, beta, x = self.locate(point, hside, vside)
            if strip is None:
                continue
            levels = self.strip_levels(strip)
            allowed = levels[:-1] if vside > 0 else levels[1:]
            if beta not in allowed:
                continue
            left = x - self.cuts[strip] - offset
            if left >= 0 and left + length <= self.widths[strip]:
                return True
        return False

    def to_dict(self) -> dict:
        return {
            'gamma_length': encode_number(self.gamma.length),
            'cuts': [encode_number(c) for c in self.cuts],
            'rects': [
                {
                    'index': r.index,
                    'strip': r.strip,
                    'left': encode_number(r.left),
                    'width': encode_number(r.width),
                    'lift': encode_number(r.lift),
                    'height': encode_number(r.height),
                }
                for r in self.rects
            ],
            'glue_graph': self.glue_graph.to_dict() if self.glue_graph is not None else None,
        }


class _Degenerate(Exception):
    pass


class _SeparatrixHit(NamedTuple):
    name: str
    square: int
    trace: LeafTrace


def markov_bounds(cone_angles: Sequence[int]) -> Tuple[Fraction, Fraction]:
    '''
    Returns the bounds ``(k / 4, 1 + k / 2)`` on the number of rectangles,
    ``k pi`` being the total cone angle.
    '''
    k = sum(cone_angles)
    return Fraction(k, 4), 1 + Fraction(k, 2)


def _initial_length(e: EigenSurface):
    start = e.separatrix_start(e.gamma_square, RIGHT)
    exit_time = _smaller(_exit_time(start.x, e.u[0]), _exit_time(start.y, e.u[1]))
    return exit_time / 2


def _first_hits(e: EigenSurface, gamma: Transversal) -> List[_SeparatrixHit]:
    hits = []
    for name in (UP, DOWN):
        for j in range(e.n):
            try:
                trace = e.trace(e.separatrix_start(j, name), name, [gamma.segment])
            except HitSingularity as exc:
                raise SaddleConnectionFound('%s separatrix entering square %d meets a singularity' % (name, j),
                                            **exc.context)
            hits.append(_SeparatrixHit(name, j, trace))
    return hits


def _build(e: EigenSurface, length) -> MarkovPartition:
    gamma = Transversal(e, length)
    hits = _first_hits(e, gamma)
    positions = [hit.trace.position for hit in hits]
    if len(set(positions)) != len(positions) or length in positions:
        raise _Degenerate('coinciding intersections with gamma')
    terminal = max(hits, key=lambda hit: hit.trace.position)
    p = terminal.trace.position
    gamma = Transversal(e, p)
    try:
        extension = e.trace(terminal.trace.point, terminal.name, [gamma.segment])
    except HitSingularity as exc:
        raise SaddleConnectionFound('extension through the terminal point meets a singularity', **exc.context)
    if extension.position in positions:
        raise _Degenerate('extension returns to an earlier intersection')
    cuts = {e.field.zero(), p}
    cuts.update(hit.trace.position for hit in hits if hit.name == DOWN)
    if terminal.name == DOWN:
        cuts.add(extension.position)
    cuts = sorted(cuts)
    heights, tops = [], []
    for a, b in zip(cuts, cuts[1:]):
        mid = (a + b) / 2
        try:
            trace = e.trace(gamma.point_at(mid), UP, [gamma.segment])
        except HitSingularity as exc:
            raise InternalAssertion('strip over %s is not a rectangle' % (mid,), **exc.context)
        heights.append(trace.length)
        tops.append(trace.position - (mid - a))
    return MarkovPartition(e, gamma, cuts, heights, tops)


def build_markov(e: EigenSurface, initial_length=None, attempts: int = 32) -> MarkovPartition:
    '''
    Builds a Markov partition from a segment ``gamma`` on the rightward
    separatrix of singularity ``0``, vertical segments from every singularity
    to their first intersection with ``gamma``, ``gamma`` trimmed at the
    rightmost intersection and the segment ending there extended to its next
    intersection. The rectangles are the strips of upward leaves between
    consecutive points where a downward segment meets ``gamma``.

    ``gamma`` starts at half the length to the edge of its first square and is
    halved whenever two intersections coincide.

    Raises
    -------
    SaddleConnectionFound
        A vertical separatrix reached a singularity.
    InternalAssertion
        The rectangles do not tile the surface or break the rectangle count bounds.
    '''
    length = initial_length if initial_length is not None else _initial_length(e)
    for _ in range(attempts):
        try:
            partition = _build(e, length)
        except _Degenerate as exc:
            logger.debug("gamma of length %s is degenerate (%s), halving" % (length, exc))
            length = length / 2
            continue
        if partition.area() != e.n:
            raise InternalAssertion('rectangles have area %s, surface has %d' % (partition.area(), e.n))
        low, high = markov_bounds(e.cone_angles())
        if not low <= len(partition) <= high:
            raise InternalAssertion('%d rectangles outside [%s, %s]' % (len(partition), low, high))
        logger.info("markov partition with %d rectangles, gamma length %s" % (len(partition), float(partition.gamma.length)))
        return partition
    raise InternalAssertion('no non-degenerate gamma after %d halvings' % attempts)


def verify_markov(partition: MarkovPartition) -> bool:
    '''
    Returns ``True`` iff the automorphism maps every vertical side into a
    vertical side and its inverse maps every horizontal side into a horizontal
    side.
    '''
    lam = partition.eigen.lam_element
    for j, width in enumerate(partition.widths):
        for level in partition.strip_levels(j):
            point, hside, offset = partition.level_preimage(j, level)
            if not partition.in_horizontal_side(point, hside, offset, width / lam):
                logger.debug("preimage of level %s of strip %d leaves the horizontal sides" % (level, j))
                return False
    for rect in partition.rects:
        for hside, x in ((1, rect.left), (-1, rect.left + rect.width)):
            point = partition.image_point(x, rect.lift, hside)
            if not partition.in_vertical_side(point, rect.height / lam):
                logger.debug("image of a vertical side of rectangle %d leaves the vertical sides" % rect.index)
                return False
    return True


def intersection_matrix(partition: MarkovPartition) -> Tuple[Tuple[int, ...], ...]:
    '''
    Returns ``A`` with ``a_ij`` the number of components of the image of
    rectangle ``i`` inside rectangle ``j``, counted along the bottom of each
    image, and asserts that ``A`` is irreducible with Perron root ``lambda``,
    widths as Perron vector and heights as Perron vector of the transpose.

    Raises
    -------
    MarkovPropertyViolated
        The partition is not Markov.
    '''
    if partition._matrix is not None:
        return partition._matrix
    if not verify_markov(partition):
        raise MarkovPropertyViolated('partition with %d rectangles is not Markov' % len(partition))
    e = partition.eigen
    lam = e.lam_element
    rects = partition.rects
    counts = [[0] * len(rects) for _ in rects]
    for rect in rects:
        start = partition.image_point(rect.left, rect.lift, 1)
        for strip, beta, _, _ in _split_at_sides(partition, start, rect.width * lam):
            target = partition.rect_index(strip, beta, 1)
            if target is None:
                raise InternalAssertion('image of rectangle %d leaves the partition' % rect.index)
            counts[rect.index][target] += 1
    A = tuple(tuple(row) for row in counts)
    _check_perron(A, e, [r.width for r in rects], [r.height for r in rects])
    partition._matrix = A
    return A


def _split_at_sides(partition: MarkovPartition, start: SurfacePoint, total):
    '''
    Cuts the rightward segment of length ``total`` from ``start`` where it
    enters a strip through its left side and returns ``(strip, height,
    position, length)`` of every piece, ``position`` being the point of
    ``gamma`` below the middle of the piece. Only the first piece is located
    by a downward leaf; the others start on a known side.
    '''
    e = partition.eigen
    lefts = [side for side in partition.sides() if side.edge == 'left']
    stops = [side.segment for side in lefts]
    pieces = []
    point, travelled, entry = start, e.field.zero(), None
    while True:
        trace = trace_leaf(e.charts, point, e.u, stops, side=1, shift=e.s, max_length=total - travelled)
        length = trace.length
        if entry is None:
            mid = trace_leaf(e.charts, point, e.u, side=1, shift=e.s, max_length=length / 2).point
            strip, beta, x = partition.locate(mid, 1, 1)
        else:
            strip, beta = entry
            x = partition.cuts[strip] + length / 2
        pieces.append((strip, beta, x, length))
        travelled = travelled + length
        if trace.stop is None or travelled == total:
            return pieces
        point = trace.point
        # past a square corner the strip is found again from below
        at_corner = point.x in (0, 1) and point.y in (0, 1)
        entry = None if at_corner else (lefts[trace.stop].strip, trace.position)


def _check_perron(A, e: EigenSurface, widths, heights):
    if not is_irreducible(A):
        raise InternalAssertion('intersection matrix %r is reducible' % (A,))
    if perron_root(A) != e.lam:
        raise InternalAssertion('Perron root of %r differs from the expansion factor' % (A,))
    lam = e.lam_element
    d = len(A)
    for i in range(d):
        row = sum((A[i][j] * widths[j] for j in range(d)), e.field.zero())
        col = sum((A[j][i] * heights[j] for j in range(d)), e.field.zero())
        if row != lam * widths[i] or col != lam * heights[i]:
            raise InternalAssertion('widths or heights are not Perron vectors of %r' % (A,))


def _refine_vertically(partition: MarkovPartition) -> MarkovPartition:
    if any(partition.levels):
        raise ValueError('only strip partitions can be refined')
    cuts = set(partition.cuts)
    widths = partition.widths
    for top, width in zip(partition.tops, widths):
        cuts.update((top, top + width))
    for j, (top, width) in enumerate(zip(partition.tops, widths)):
        for x in partition.cuts:
            if top < x < top + width:
                cuts.add(partition.cuts[j] + (x - top))
    cuts = sorted(cuts)
    heights, tops = [], []
    for a in cuts[:-1]:
        j = partition.strip_at(a, 1)
        heights.append(partition.heights[j])
        tops.append(partition.tops[j] + (a - partition.cuts[j]))
    return MarkovPartition(partition.eigen, partition.gamma, cuts, heights, tops)


def _refine_horizontally(partition: MarkovPartition) -> MarkovPartition:
    if any(partition.levels):
        raise ValueError('only strip partitions can be refined')
    sides = partition.sides()
    levels, sources = [], {}
    for j in range(partition.strip_count):
        found = {}
        for side in (sides[2 * j], sides[2 * j + 1]):
            for event in side.vertices():
                if event.kind == 'singularity' or event.length not in found:
                    found[event.length] = LevelSource(side.hside, event)
        levels.append(tuple(sorted(found)))
        for level, source in found.items():
            sources[(j, level)] = source
    return MarkovPartition(partition.eigen, partition.gamma, partition.cuts, partition.heights,
                           partition.tops, levels, sources)


def refine_partition(partition: MarkovPartition, axis: str):
    '''
    Cuts the rectangles at the endpoints of the horizontal (``xi``) or
    vertical (``eta``) boundary segments and returns the refined partition
    with its intersection matrix.

    Raises
    -------
    MarkovPropertyViolated
        The refinement is not Markov.
    '''
    if axis == XI:
        refined = _refine_vertically(partition)
    elif axis == ETA:
        refined = _refine_horizontally(partition)
    else:
        raise ValueError('axis must be %r or %r' % (XI, ETA))
    if not verify_markov(refined):
        raise MarkovPropertyViolated('%s refinement is not Markov' % axis)
    return refined, intersection_matrix(refined)


def split_strip(partition: MarkovPartition, strip: int, at) -> MarkovPartition:
    '''Cuts one strip vertically at ``at``, which generally destroys the Markov property.'''
    a, b = partition.cuts[strip], partition.cuts[strip + 1]
    if not a < at < b:
        raise ValueError('cut %s is not inside strip %d' % (at, strip))
    cuts = list(partition.cuts[:strip + 1]) + [at] + list(partition.cuts[strip + 1:])
    heights = list(partition.heights[:strip + 1]) + list(partition.heights[strip:])
    tops = list(partition.tops[:strip + 1]) + [partition.tops[strip] + (at - a)] + list(partition.tops[strip + 1:])
    return MarkovPartition(partition.eigen, partition.gamma, cuts, heights, tops)


def _larger(a, b):
    return a if a > b else b


def _expansion(e: EigenSurface):
    '''Returns ``(lambda, sign)`` of the supplied automorphism on ``u``, exactly in ``e.field``.'''
    (a, b), (c, d) = e.aut.deriv
    u0, u1 = e.u
    factor = (a * u0 + b * u1) / u0
    if c * u0 + d * u1 != factor * u1:
        raise InternalAssertion('%r does not preserve the expanding direction' % (e.aut.deriv,))
    return abs(factor), factor.sign()


def _point_above(partition: MarkovPartition, x, lift) -> SurfacePoint:
    e = partition.eigen
    start = partition.gamma.point_at(x)
    if lift == 0:
        return start
    return trace_leaf(e.charts, start, e.s, max_length=lift).point


def _flow(partition: MarkovPartition, strip: int, a, b, lo, hi, out: list):
    # the x-range [a, b] of a strip swept vertically over [lo, hi], crossing gamma as often as needed
    height = partition.heights[strip]
    zero = partition.eigen.field.zero()
    if lo < 0:
        for j, (top, width) in enumerate(zip(partition.tops, partition.widths)):
            c, d = _larger(a, top), _smaller(b, top + width)
            if c < d:
                base = partition.cuts[j] - top
                _flow(partition, j, base + c, base + d, partition.heights[j] + lo,
                      partition.heights[j] + _smaller(hi, zero), out)
    if hi > height:
        shift = partition.tops[strip] - partition.cuts[strip]
        for j in range(partition.strip_count):
            c, d = _larger(a + shift, partition.cuts[j]), _smaller(b + shift, partition.cuts[j + 1])
            if c < d:
                _flow(partition, j, c, d, _larger(lo, height) - height, hi - height, out)
    bottom, top = _larger(lo, zero), _smaller(hi, height)
    if bottom < top:
        out.append((strip, a, b, bottom, top))


def _image_boxes(partition: MarkovPartition, center: SurfacePoint, width, height) -> list:
    '''
    Returns the boxes ``(strip, a, b, lo, hi)`` cut out of the strips by the
    rectangle of the given size centred at ``center``.
    '''
    e = partition.eigen
    left = trace_leaf(e.charts, center, e.direction(LEFT), max_length=width / 2).point
    boxes = []
    for strip, beta, x, length in _split_at_sides(partition, left, width):
        if strip is None or not partition.cuts[strip] <= x - length / 2 < x + length / 2 <= partition.cuts[strip + 1]:
            raise InternalAssertion('image midline piece at %s does not fit its strip' % (x,))
        _flow(partition, strip, x - length / 2, x + length / 2, beta - height / 2, beta + height / 2, boxes)
    return boxes


def _box_area(boxes):
    return sum(((b - a) * (hi - lo) for _, a, b, lo, hi in boxes), 0)


class CommonRefinement:
    '''
    The common refinement of a strip partition built for a power ``phi^n``
    and its images under ``phi, ..., phi^(n - 1)``, a Markov partition for
    ``phi`` itself.

    Attributes
    -----------
    partition: :class:`MarkovPartition`
        The partition for the power.
    rects: List[:class:`MarkovRect`]
        Rectangles as boxes of the strips of ``partition``.
    lam: :class:`~veechenum.exactnum.AlgebraicReal`
        The expansion factor of ``phi``.
    matrix: Tuple[Tuple[:class:`int`]]
        The intersection matrix of ``phi`` on ``rects``.
    '''

    def __init__(self, partition: MarkovPartition, rects: Sequence[MarkovRect], lam: AlgebraicReal, matrix):
        self.partition = partition
        self.rects = list(rects)
        self.lam = lam
        self.matrix = matrix

    def __len__(self) -> int:
        return len(self.rects)

    def area(self):
        return sum((r.width * r.height for r in self.rects), self.partition.eigen.field.zero())

    def to_dict(self) -> dict:
        return {
            'p': len(self),
            'lambda_minpoly': list(self.lam.minpoly),
            'lambda_approx': float(self.lam),
            'A': [list(row) for row in self.matrix],
            'rects': [
                {
                    'index': r.index,
                    'strip': r.strip,
                    'left': encode_number(r.left),
                    'width': encode_number(r.width),
                    'lift': encode_number(r.lift),
                    'height': encode_number(r.height),
                }
                for r in self.rects
            ],
        }


def common_refinement(partition: MarkovPartition) -> CommonRefinement:
    '''
    Refines a Markov partition of the power ``phi^n`` used by the eigenbasis
    into one for ``phi``: its rectangles are the components of the
    intersections of ``partition`` with its images under ``phi^i``,
    ``0 < i < n``. The intersection matrix of ``phi`` is computed on the
    result and must have Perron root the expansion factor of ``phi`` with
    widths and heights as Perron vectors.

    Raises
    -------
    MarkovPropertyViolated
        The refinement is not Markov for ``phi``.
    '''
    if any(partition.levels):
        raise ValueError('only strip partitions can be refined')
    e = partition.eigen
    zero = e.field.zero()
    factor, _ = _expansion(e)
    lam = AlgebraicReal.largest_real_root([1, -abs(e.aut.trace), 1])
    cells = [(j, partition.cuts[j], partition.cuts[j + 1], zero, partition.heights[j])
             for j in range(partition.strip_count)]
    centers = [_point_above(partition, r.left + r.width / 2, r.height / 2) for r in partition.rects]
    scale = e.field.one()
    for i in range(1, e.power):
        scale = scale * factor
        centers = [SurfacePoint(*e.aut(c)) for c in centers]
        boxes = []
        for rect, center in zip(partition.rects, centers):
            boxes.extend(_image_boxes(partition, center, rect.width * scale, rect.height / scale))
        if _box_area(boxes) != e.n:
            raise InternalAssertion('images under phi^%d cover area %s of %d' % (i, _box_area(boxes), e.n))
        refined = []
        for j, a, b, lo, hi in cells:
            for k, a2, b2, lo2, hi2 in boxes:
                if k != j:
                    continue
                box = (j, _larger(a, a2), _smaller(b, b2), _larger(lo, lo2), _smaller(hi, hi2))
                if box[1] < box[2] and box[3] < box[4]:
                    refined.append(box)
        cells = refined
    cells.sort(key=lambda c: (c[0], c[3], c[1]))
    rects = [MarkovRect(index, j, a, b - a, lo, hi - lo) for index, (j, a, b, lo, hi) in enumerate(cells)]
    matrix = _refinement_matrix(partition, rects, factor, lam)
    result = CommonRefinement(partition, rects, lam, matrix)
    logger.info("common refinement over %d iterates has %d rectangles" % (e.power, len(result)))
    return result


def _refinement_matrix(partition: MarkovPartition, rects: Sequence[MarkovRect], factor, lam: AlgebraicReal):
    # every image crosses the rectangles it meets from side to side, so its midline meets each component once
    e = partition.eigen
    counts = [[0] * len(rects) for _ in rects]
    for rect in rects:
        center = SurfacePoint(*e.aut(_point_above(partition, rect.left + rect.width / 2,
                                                  rect.lift + rect.height / 2)))
        left = trace_leaf(e.charts, center, e.direction(LEFT), max_length=rect.width * factor / 2).point
        for strip, beta, x, length in _split_at_sides(partition, left, rect.width * factor):
            a, b = x - length / 2, x + length / 2
            hits = [r.index for r in rects if r.strip == strip and r.lift < beta < r.lift + r.height and
                    _larger(a, r.left) < _smaller(b, r.left + r.width)]
            if not hits:
                raise MarkovPropertyViolated('image of rectangle %d runs along a horizontal side' % rect.index,
                                             rect=rect.index)
            for index in hits:
                counts[rect.index][index] += 1
    A = tuple(tuple(row) for row in counts)
    if not is_irreducible(A) or perron_root(A) != lam:
        raise MarkovPropertyViolated('refinement has intersection matrix %r' % (A,))
    d = len(A)
    for i in range(d):
        row = sum((A[i][j] * rects[j].width for j in range(d)), e.field.zero())
        col = sum((A[j][i] * rects[j].height for j in range(d)), e.field.zero())
        if row != factor * rects[i].width or col != factor * rects[i].height:
            raise MarkovPropertyViolated('widths or heights are not Perron vectors of %r' % (A,))
    return A


class XiEdge(NamedTuple):
    index: int
    tail: str
    head: str
    length: object
    top: int
    bottom: int


class EtaEdge(NamedTuple):
    index: int
    tail: str
    head: str
    length: object
    right: int
    left: int


class RefinedPieces(NamedTuple):
    '''
    The rectangles of the refinement at ``xi`` (or ``eta``) edge endpoints:
    the rectangle each piece is cut from, the edge its bottom (or left side)
    lies in, and the intersection matrix of the pieces.
    '''
    parents: Tuple[int, ...]
    edges: Tuple[int, ...]
    matrix: Tuple[Tuple[int, ...], ...]

    def to_dict(self) -> dict:
        return {'parents': list(self.parents), 'edges': list(self.edges),
                'matrix': [list(row) for row in self.matrix]}

    @classmethod
    def from_dict(cls, data: dict) -> 'RefinedPieces':
        return cls(tuple(int(x) for x in data['parents']), tuple(int(x) for x in data['edges']),
                   tuple(tuple(int(a) for a in row) for row in data['matrix']))


def _length(edge: dict):
    return decode_number(edge['length']) if edge.get('length') is not None else None


class SegmentGluingGraph:
    '''
    Horizontal ``xi`` edges, oriented left to right with the rectangles above
    and below, and vertical ``eta`` edges, oriented top to bottom with the
    rectangles right and left, plus the counterclockwise order of edge ends
    at each vertex. A graph extracted from a partition also carries its
    ``xi`` and ``eta`` refinements, which fix the edge lengths.
    '''

    def __init__(self, rect_count: int, xi_edges: Sequence[XiEdge], eta_edges: Sequence[EtaEdge],
                 cyclic_orders: Optional[Dict[str, List[Tuple[str, int, str]]]] = None,
                 xi_refinement: Optional[RefinedPieces] = None, eta_refinement: Optional[RefinedPieces] = None):
        self.rect_count = rect_count
        self.xi_edges = list(xi_edges)
        self.eta_edges = list(eta_edges)
        self.cyclic_orders = dict(cyclic_orders or {})
        self.xi_refinement = xi_refinement
        self.eta_refinement = eta_refinement

    def side_sum(self, kind: str, label: str, rect: int):
        edges = self.xi_edges if kind == XI else self.eta_edges
        chosen = [e.length for e in edges if getattr(e, label) == rect]
        total = chosen[0] if chosen else 0
        for x in chosen[1:]:
            total = total + x
        return total

    def check(self, widths=None, heights=None):
        '''
        Checks labels, orientation alternation around vertices and, when side
        lengths are given, that they are sums of edge lengths.

        Raises
        -------
        IncompatibleGraph
        '''
        for edge in self.xi_edges:
            if not (0 <= edge.top < self.rect_count and 0 <= edge.bottom < self.rect_count):
                raise IncompatibleGraph('xi edge %d has an unknown label' % edge.index)
        for edge in self.eta_edges:
            if not (0 <= edge.right < self.rect_count and 0 <= edge.left < self.rect_count):
                raise IncompatibleGraph('eta edge %d has an unknown label' % edge.index)
        for vertex, order in self.cyclic_orders.items():
            for kind in (XI, ETA):
                ends = [way for k, _, way in order if k == kind]
                # only vertices carrying as many incoming as outgoing ends are complete
                if len(ends) < 2 or ends.count('in') != ends.count('out'):
                    continue
                for a, b in zip(ends, ends[1:] + ends[:1]):
                    if a == b:
                        raise IncompatibleGraph('%s edges at vertex %s do not alternate' % (kind, vertex))
        if widths is not None:
            for i, w in enumerate(widths):
                if self.side_sum(XI, 'top', i) != w or self.side_sum(XI, 'bottom', i) != w:
                    raise IncompatibleGraph('xi edges do not add up to the width of rectangle %d' % i)
        if heights is not None:
            for i, h in enumerate(heights):
                if self.side_sum(ETA, 'right', i) != h or self.side_sum(ETA, 'left', i) != h:
                    raise IncompatibleGraph('eta edges do not add up to the height of rectangle %d' % i)
        return True

    def to_dict(self) -> dict:
        return {
            'rect_count': self.rect_count,
            'xi': [{'tail': e.tail, 'head': e.head, 'length': encode_number(e.length),
                    'top': e.top, 'bottom': e.bottom} for e in self.xi_edges],
            'eta': [{'tail': e.tail, 'head': e.head, 'length': encode_number(e.length),
                     'right': e.right, 'left': e.left} for e in self.eta_edges],
            'cyclic_orders': {v: [list(end) for end in order] for v, order in sorted(self.cyclic_orders.items())},
            'xi_refinement': self.xi_refinement.to_dict() if self.xi_refinement is not None else None,
            'eta_refinement': self.eta_refinement.to_dict() if self.eta_refinement is not None else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'SegmentGluingGraph':
        '''
        Raises
        -------
        IncompatibleGraph
            A field is missing.
        '''
        try:
            xi = [XiEdge(i, e['tail'], e['head'], _length(e), int(e['top']), int(e['bottom']))
                  for i, e in enumerate(data['xi'])]
            eta = [EtaEdge(i, e['tail'], e['head'], _length(e), int(e['right']), int(e['left']))
                   for i, e in enumerate(data['eta'])]
            orders = {v: [tuple(end) for end in order] for v, order in data.get('cyclic_orders', {}).items()}
            refinements = [RefinedPieces.from_dict(data[key]) if data.get(key) else None
                           for key in ('xi_refinement', 'eta_refinement')]
            return cls(int(data['rect_count']), xi, eta, orders, *refinements)
        except (KeyError, TypeError, ValueError) as exc:
            raise IncompatibleGraph('malformed gluing graph: %s' % exc)


def _order_ends(ends):
    # ends: (rank, direction, kind, index, way)
    def compare(a, b):
        if a[0] != b[0]:
            return -1 if a[0] < b[0] else 1
        turn = cross(a[1], b[1])
        return -1 if turn > 0 else (1 if turn < 0 else 0)
    return [(kind, index, way) for _, _, kind, index, way in sorted(ends, key=cmp_to_key(compare))]


def extract_graph(partition: MarkovPartition) -> SegmentGluingGraph:
    '''
    Extracts the gluing pattern of a strip partition: ``xi`` edges are the
    pieces of ``gamma`` between rectangle corners, ``eta`` edges the pieces of
    left sides between vertices.
    '''
    e = partition.eigen
    charts = e.charts
    u, s = e.u, e.s
    minus_u, minus_s = (-u[0], -u[1]), (-s[0], -s[1])
    widths = partition.widths
    points = set(partition.cuts)
    for top, width in zip(partition.tops, widths):
        points.update((top, top + width))
    for side in partition.sides():
        points.update(ev.position for ev in side.vertices() if ev.kind == 'endpoint')
    points = sorted(points)
    regular = [x for x in points if x != 0]
    origin = 'S%d' % charts.corner_class(partition.gamma.start.square, *direction_corner(u))

    def name_at(x):
        return origin if x == 0 else 'P%d' % regular.index(x)

    def event_name(event):
        if event.kind == 'singularity':
            return 'S%d' % event.singularity
        return name_at(event.position)

    # ends: vertex -> list of (direction, square or None, kind, index, way)
    ends: Dict[str, list] = {}
    xi_edges = []
    for a, b in zip(points, points[1:]):
        index = len(xi_edges)
        xi_edges.append(XiEdge(index, name_at(a), name_at(b), b - a, partition.strip_at(a, 1),
                               partition.top_strip_at(a)))
        square = partition.gamma.segment.pieces[0].square if a == 0 else None
        ends.setdefault(name_at(a), []).append((u, square, XI, index, 'out'))
        ends.setdefault(name_at(b), []).append((minus_u, None, XI, index, 'in'))
    eta_edges = []
    eta_spans = []
    for side in partition.sides():
        if side.edge != 'left':
            continue
        j = side.strip
        height = partition.heights[j]
        vertices = {}
        for event in side.vertices():
            if event.kind == 'singularity' or event.length not in vertices:
                vertices[event.length] = event
        breaks = [e.field.zero()] + sorted(vertices) + [height]
        for a, b in zip(breaks, breaks[1:]):
            mid = trace_leaf(charts, side.start, s, side=1, shift=u, max_length=(a + b) / 2).point
            left, _, _ = partition.locate(mid, -1, 1)
            bottom = name_at(partition.cuts[j]) if a == 0 else event_name(vertices[a])
            top = name_at(partition.tops[j]) if b == height else event_name(vertices[b])
            index = len(eta_edges)
            eta_edges.append(EtaEdge(index, top, bottom, b - a, j, left))
            eta_spans.append((j, a, b))
            ends.setdefault(bottom, []).append((s, side.square_after(a), ETA, index, 'in'))
            ends.setdefault(top, []).append((minus_s, side.square_before(b), ETA, index, 'out'))
    plain = {u: 0, s: 1, minus_u: 2, minus_s: 3}
    orders = {}
    for vertex, items in ends.items():
        ranked = []
        for direction, square, kind, index, way in items:
            if vertex.startswith('S'):
                rank = charts.sector[(square, direction_corner(direction))][1]
            else:
                rank = plain[direction]
            ranked.append((rank, direction, kind, index, way))
        orders[vertex] = _order_ends(ranked)
    xi_spans = [(None, a, b) for a, b in zip(points, points[1:])]
    graph = SegmentGluingGraph(len(partition.rects), xi_edges, eta_edges, orders,
                               _xi_pieces(partition, xi_spans), _eta_pieces(partition, eta_spans))
    graph.check(widths, partition.heights)
    return graph


def _containing(spans, lo, hi, strip=None) -> int:
    for k, (j, a, b) in enumerate(spans):
        if j == strip and a <= lo and hi <= b:
            return k
    raise InternalAssertion('refined piece [%s, %s] crosses an edge endpoint' % (lo, hi))


def _xi_pieces(partition: MarkovPartition, spans) -> RefinedPieces:
    refined, B = refine_partition(partition, XI)
    parents, edges = [], []
    for a, b in zip(refined.cuts, refined.cuts[1:]):
        parents.append(partition.strip_at(a, 1))
        edges.append(_containing(spans, a, b))
    return RefinedPieces(tuple(parents), tuple(edges), tuple(map(tuple, B)))


def _eta_pieces(partition: MarkovPartition, spans) -> RefinedPieces:
    refined, C = refine_partition(partition, ETA)
    parents, edges = [], []
    for rect in refined.rects:
        parents.append(rect.strip)
        edges.append(_containing(spans, rect.lift, rect.lift + rect.height, rect.strip))
    return RefinedPieces(tuple(parents), tuple(edges), tuple(map(tuple, C)))


def _solve(rows, rhs, field):
    '''
    Gauss-Jordan elimination over ``field``; returns the unique solution or
    ``None`` when there is a free variable.

    Raises
    -------
    IncompatibleGraph
        The system is inconsistent.
    '''
    rows = [[field(c) if isinstance(c, int) else c for c in row] + [r] for row, r in zip(rows, rhs)]
    ncols = len(rows[0]) - 1 if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for row in rows[r:]:
        if row[-1] != 0:
            raise IncompatibleGraph('side lengths cannot be split into the edges')
    if len(pivots) < ncols:
        return None
    solution = [None] * ncols
    for i, c in enumerate(pivots):
        solution[c] = rows[i][-1]
    return solution


def _edge_lengths(edges, labels, targets, field):
    # graphs without refinements: the side sums must pin every edge down
    rows, rhs = [], []
    for label in labels:
        for i, target in enumerate(targets):
            rows.append([1 if getattr(edge, label) == i else 0 for edge in edges])
            rhs.append(target)
    solution = _solve(rows, rhs, field)
    if solution is None:
        raise IncompatibleGraph('edge lengths are not determined by the side lengths and the graph '
                                'carries no refinement')
    return solution


def _refined_lengths(A, root, pieces: RefinedPieces, edge_count: int, targets, axis: str):
    '''
    Returns edge lengths from the Perron vector of the refined matrix, scaled
    so the pieces cut from each rectangle add up to its side.

    Raises
    -------
    IncompatibleGraph
        The refinement does not fit ``A`` or the edges.
    '''
    d = len(A)
    try:
        R = as_matrix(pieces.matrix)
    except ValueError as exc:
        raise IncompatibleGraph('%s refinement: %s' % (axis, exc))
    n = len(R)
    parents, edges = pieces.parents, pieces.edges
    if len(parents) != n or len(edges) != n:
        raise IncompatibleGraph('%s refinement lists %d pieces for a %dx%d matrix' % (axis, len(parents), n, n))
    if not all(0 <= p < d for p in parents) or not all(0 <= k < edge_count for k in edges):
        raise IncompatibleGraph('%s refinement has an unknown label' % axis)
    if set(parents) != set(range(d)):
        raise IncompatibleGraph('%s refinement leaves a rectangle uncut' % axis)
    # a crossing of rectangle j meets every piece cut vertically from j, but only one cut horizontally
    for i in range(d):
        for s in range(n):
            if axis == XI:
                count = sum(R[r][s] for r in range(n) if parents[r] == i)
                expected = A[i][parents[s]]
            else:
                count = sum(R[s][r] for r in range(n) if parents[r] == i)
                expected = A[parents[s]][i]
            if count != expected:
                raise IncompatibleGraph('%s refinement does not aggregate to the intersection matrix' % axis)
    if not is_irreducible(R) or perron_root(R) != root:
        raise IncompatibleGraph('%s refinement has another dilatation' % axis)
    vector = perron_vector(R if axis == XI else transpose(R), root)
    field = root.field
    sums = [field.zero()] * d
    for piece, parent in enumerate(parents):
        sums[parent] = sums[parent] + vector[piece]
    scale = targets[0] / sums[0]
    if any(total * scale != target for total, target in zip(sums, targets)):
        raise IncompatibleGraph('%s refinement does not fit the side lengths' % axis)
    lengths = [field.zero()] * edge_count
    for piece, edge in enumerate(edges):
        lengths[edge] = lengths[edge] + scale * vector[piece]
    return lengths


class MarkovSurface(NamedTuple):
    '''A surface rebuilt from an intersection matrix and a gluing pattern.'''
    matrix: Tuple[Tuple[int, ...], ...]
    widths: Tuple
    heights: Tuple
    xi_lengths: Tuple
    eta_lengths: Tuple
    graph: SegmentGluingGraph

    def area(self):
        return sum((w * h for w, h in zip(self.widths[1:], self.heights[1:])), self.widths[0] * self.heights[0])

    def as_rect_surface(self) -> RectSurface:
        '''
        Raises
        -------
        NotEdgeToEdge
            Some side is glued to more than one edge.
        '''
        g = self.graph
        sigma1, sigma2 = [], []
        for i in range(g.rect_count):
            right = [e for e in g.eta_edges if e.left == i]
            top = [e for e in g.xi_edges if e.bottom == i]
            if len(right) != 1 or len(top) != 1:
                raise NotEdgeToEdge('rectangle %d is not glued edge to edge' % i)
            sigma1.append(right[0].right)
            sigma2.append(top[0].top)
        surface = RectSurface(tuple(sigma1), tuple(sigma2), self.widths, self.heights)
        validate(surface)
        return surface

    def to_dict(self) -> dict:
        return {
            'matrix': [list(row) for row in self.matrix],
            'widths': [encode_number(x) for x in self.widths],
            'heights': [encode_number(x) for x in self.heights],
            'xi_lengths': [encode_number(x) for x in self.xi_lengths],
            'eta_lengths': [encode_number(x) for x in self.eta_lengths],
            'graph': self.graph.to_dict(),
        }


def reconstruct_from_markov(A, g: SegmentGluingGraph) -> MarkovSurface:
    '''
    Rebuilds the metric data of a Markov partition from its intersection
    matrix and gluing pattern: widths are the Perron vector of ``A`` with the
    widest rectangle of width one, heights the Perron vector of the transpose
    scaled to total area one. Edge lengths come from the Perron vectors of
    the ``xi`` and ``eta`` refinement matrices the graph carries, scaled by
    the side lengths; lengths stored on the edges are never read.

    Raises
    -------
    NotIrreducible
        ``A`` is reducible.
    IncompatibleGraph
        The graph does not fit ``A``.
    '''
    A = as_matrix(A)
    if g.rect_count != len(A):
        raise IncompatibleGraph('graph has %d rectangles, matrix has %d' % (g.rect_count, len(A)))
    g.check()
    root = perron_root(A)
    field = root.field
    widths = perron_vector(A, root)
    heights = perron_vector(transpose(A), root)
    area = sum((w * h for w, h in zip(widths, heights)), field.zero())
    heights = [h / area for h in heights]
    if g.xi_refinement is not None:
        xi = _refined_lengths(A, root, g.xi_refinement, len(g.xi_edges), widths, XI)
    else:
        xi = _edge_lengths(g.xi_edges, ('top', 'bottom'), widths, field)
    if g.eta_refinement is not None:
        eta = _refined_lengths(A, root, g.eta_refinement, len(g.eta_edges), heights, ETA)
    else:
        eta = _edge_lengths(g.eta_edges, ('right', 'left'), heights, field)
    if not all(x > 0 for x in xi + eta):
        raise IncompatibleGraph('a side is shorter than the edges glued to it')
    graph = SegmentGluingGraph(g.rect_count,
                               [edge._replace(length=x) for edge, x in zip(g.xi_edges, xi)],
                               [edge._replace(length=x) for edge, x in zip(g.eta_edges, eta)],
                               g.cyclic_orders, g.xi_refinement, g.eta_refinement)
    graph.check(widths, heights)
    return MarkovSurface(A, tuple(widths), tuple(heights), tuple(xi), tuple(eta), graph)


def render_markov_svg(partition: MarkovPartition, scale: float = 200.0, margin: float = 20.0,
                      labels: bool = True) -> str:
    '''
    Draws the squares of the origami with ``gamma`` in red and the vertical
    sides of the rectangles in blue on top.
    '''
    o = partition.eigen.origami
    root, pixels = svg_root(RectSurface.from_origami(o.sigma_h, o.sigma_v), scale, margin, labels)

    def draw(segment: Segment, colour: str):
        for piece in segment.pieces:
            px, py, w, h = pixels[piece.square]
            x1, y1 = segment.piece_point(piece, piece.end)
            ET.SubElement(root, 'line', {
                'x1': '%.6f' % (px + to_float(piece.x) * w),
                'y1': '%.6f' % (py + (1 - to_float(piece.y)) * h),
                'x2': '%.6f' % (px + to_float(x1) * w),
                'y2': '%.6f' % (py + (1 - to_float(y1)) * h),
                'stroke': colour, 'stroke-width': '1.5',
            })

    for side in partition.sides():
        draw(side.segment, 'blue')
    draw(partition.gamma.segment, 'red')
    return ET.tostring(root, encoding='unicode')
