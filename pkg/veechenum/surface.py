"""
Translation surfaces presented as axis-parallel rectangles glued edge to edge.

Rectangle ``k`` has its right edge glued to the left edge of ``sigma1[k]`` and
its top edge glued to the bottom edge of ``sigma2[k]``. Coordinates are exact
elements of one number field. The stored rectangles may be a uniformly scaled
copy of the normalized surface: the true surface is the stored one dilated by
``sqrt(scale_sq)``, because the square root of an area is usually not in the
coordinate field.
"""

from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from functools import reduce
from itertools import permutations
from math import gcd
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple
import logging
import xml.etree.ElementTree as ET

import networkx as nx

from .enumeration import CuspDatum, GluingPattern, canonical_cusp_datum, primitive_twists
from .exactnum import AlgebraicReal, NFElement, NumberField, common_field, lift, to_float
from .lib.errors import (
    AreaNotNormalized,
    HeightMismatch,
    InternalAssertion,
    NonPositiveSide,
    NotCommensurable,
    NotConnected,
    NotSymmetric,
    UnsupportedMatrix,
    VeechError,
    WidthMismatch,
)
from .lib.permutation import (
    perm_compose,
    perm_cycles,
    perm_invert,
    perms_are_transitive,
    perms_canonical_form,
    perms_transitive_components,
)
from .pfcore import diag_mul, perron_root, perron_vector

logger = logging.getLogger(__name__)

HORIZONTAL = 'horizontal'
VERTICAL = 'vertical'


@dataclass(frozen=True)
class RectSurface:
    '''
    Represents a translation surface made of rectangles.

    Attributes
    -----------
    sigma1: Tuple[:class:`int`]
        Right neighbours.
    sigma2: Tuple[:class:`int`]
        Top neighbours.
    widths, heights: Tuple[:class:`~veechenum.exactnum.NFElement`]
        Side lengths, all in one field.
    scale_sq: :class:`~veechenum.exactnum.NFElement`
        Area scale of the stored coordinates.
    '''
    sigma1: Tuple[int, ...]
    sigma2: Tuple[int, ...]
    widths: Tuple[NFElement, ...]
    heights: Tuple[NFElement, ...]
    scale_sq: NFElement = dataclass_field(default=None)

    def __post_init__(self):
        field = common_field(list(self.widths) + list(self.heights) + [self.scale_sq])
        object.__setattr__(self, 'sigma1', tuple(self.sigma1))
        object.__setattr__(self, 'sigma2', tuple(self.sigma2))
        object.__setattr__(self, 'widths', tuple(lift(x, field) for x in self.widths))
        object.__setattr__(self, 'heights', tuple(lift(x, field) for x in self.heights))
        object.__setattr__(self, 'scale_sq', lift(1 if self.scale_sq is None else self.scale_sq, field))

    @classmethod
    def from_origami(cls, sigma_h: Sequence[int], sigma_v: Sequence[int]) -> 'RectSurface':
        '''
        Returns the square-tiled surface of unit squares, normalized to area one
        through ``scale_sq``.
        '''
        n = len(sigma_h)
        one = NumberField.rationals().one()
        return cls(tuple(sigma_h), tuple(sigma_v), (one,) * n, (one,) * n, one / n)

    @property
    def ell(self) -> int:
        return len(self.sigma1)

    @property
    def field(self) -> NumberField:
        return self.scale_sq.field

    def stored_area(self) -> NFElement:
        total = self.field.zero()
        for w, h in zip(self.widths, self.heights):
            total = total + w * h
        return total

    def area(self) -> NFElement:
        '''Returns the true area, ``scale_sq`` times the stored area.'''
        return self.scale_sq * self.stored_area()

    def __eq__(self, other) -> bool:
        if not isinstance(other, RectSurface):
            return NotImplemented
        return surfaces_equal(self, other)

    def __hash__(self) -> int:
        return hash(canonical_form(self))


class Cylinder(NamedTuple):
    direction: str
    rect_cycle: Tuple[int, ...]
    w: NFElement
    h: NFElement

    @property
    def modulus(self) -> NFElement:
        '''Returns the inverse modulus ``w / h``.'''
        return self.w / self.h


class ParabolicData(NamedTuple):
    direction: str
    moduli: Tuple[NFElement, ...]
    mu: NFElement
    twists: Tuple[int, ...]

    def derivative(self) -> Tuple[Tuple[NFElement, NFElement], Tuple[NFElement, NFElement]]:
        '''
        Returns the derivative of the multitwist, ``r h_mu r^-1`` for the rotation
        ``r`` taking the horizontal to this direction.
        '''
        one, zero = self.mu.field.one(), self.mu.field.zero()
        if self.direction == HORIZONTAL:
            return ((one, self.mu), (zero, one))
        return ((one, zero), (-self.mu, one))


class Stratum(NamedTuple):
    cone_angles: Tuple[int, ...]
    genus: int


class BuiltSurface(NamedTuple):
    surface: RectSurface
    parabolic: ParabolicData
    eigenvalue: AlgebraicReal
    power: int


def validate(s: RectSurface, normalized: bool = True) -> bool:
    '''
    Checks that the rectangles glue edge to edge into a connected surface.

    Parameters
    -----------
    s: :class:`RectSurface`
        The surface.
    normalized: :class:`bool`
        Also require total area one.

    Raises
    -------
    NonPositiveSide
        A width or height is not positive.
    HeightMismatch
        Heights differ along a ``sigma1``-cycle.
    WidthMismatch
        Widths differ along a ``sigma2``-cycle.
    NotConnected
        The permutations do not act transitively.
    AreaNotNormalized
        ``normalized`` is set and the area is not one.
    '''
    ell = s.ell
    if len(s.sigma2) != ell or len(s.widths) != ell or len(s.heights) != ell:
        raise NotConnected('gluing data of inconsistent sizes')
    for name, sigma in (('sigma1', s.sigma1), ('sigma2', s.sigma2)):
        if sorted(sigma) != list(range(ell)):
            raise NotConnected('%s is not a permutation' % name, permutation=name)
    for k in range(ell):
        if s.widths[k].sign() <= 0 or s.heights[k].sign() <= 0:
            raise NonPositiveSide('rectangle %d has a non-positive side' % k, rectangle=k)
    for cycle in perm_cycles(s.sigma1):
        for k in cycle:
            if s.heights[k] != s.heights[cycle[0]]:
                raise HeightMismatch('rectangles %d and %d are glued side by side with different heights'
                                     % (cycle[0], k), rectangle=k, cycle=cycle)
    for cycle in perm_cycles(s.sigma2):
        for k in cycle:
            if s.widths[k] != s.widths[cycle[0]]:
                raise WidthMismatch('rectangles %d and %d are stacked with different widths'
                                    % (cycle[0], k), rectangle=k, cycle=cycle)
    if ell and not perms_are_transitive([s.sigma1, s.sigma2]):
        components = perms_transitive_components([s.sigma1, s.sigma2])
        raise NotConnected('surface has %d components' % len(components), components=components)
    if normalized and s.area() != 1:
        raise AreaNotNormalized('total area is %r' % (s.area(),), area=s.area())
    return True


def build_surface(A, D: Sequence[int], g: GluingPattern) -> BuiltSurface:
    '''
    Reconstructs the surface of a cusp datum.

    Heights are the Perron vector ``a`` of ``DA`` and rectangle ``k`` in class
    ``(i, j)`` gets height ``a_i`` and width ``a_j``, so horizontal cylinder
    ``i`` has circumference ``(Aa)_i`` and inverse modulus ``lambda / n_i``.

    Return Type
    -----------
    :class:`BuiltSurface`
        The normalized surface, its horizontal parabolic data, the Perron root
        of ``DA`` and the power ``gcd(D)`` with ``lambda = power * mu``.
    '''
    DA = diag_mul(D, A)
    root = perron_root(DA)
    a = perron_vector(DA, root)
    field = root.field
    widths = tuple(a[j] for j in g.labels2)
    heights = tuple(a[i] for i in g.labels1)
    stored = sum((w * h for w, h in zip(widths, heights)), field.zero())
    surface = RectSurface(g.sigma1, g.sigma2, widths, heights, stored.inverse())
    try:
        validate(surface)
        parabolic = parabolic_data(cylinder_decomposition(surface, HORIZONTAL))
    except VeechError as e:
        raise InternalAssertion('cusp datum produced an invalid surface: %s' % e.message) from e
    _, power = primitive_twists(D)
    if parabolic.mu * power != root.as_element():
        raise InternalAssertion('eigenvalue is not power times the twist modulus')
    logger.debug("built surface with %d rectangles, eigenvalue minpoly %s" % (surface.ell, list(root.minpoly)))
    return BuiltSurface(surface, parabolic, root, power)


def cylinder_decomposition(s: RectSurface, direction: str = HORIZONTAL) -> List[Cylinder]:
    '''
    Returns one cylinder per ``sigma1``-cycle (horizontal) or ``sigma2``-cycle
    (vertical), ordered by smallest rectangle index, in stored coordinates.
    '''
    cylinders = []
    if direction == HORIZONTAL:
        for cycle in perm_cycles(s.sigma1):
            w = sum((s.widths[k] for k in cycle), s.field.zero())
            cylinders.append(Cylinder(HORIZONTAL, cycle, w, s.heights[cycle[0]]))
    elif direction == VERTICAL:
        for cycle in perm_cycles(s.sigma2):
            w = sum((s.heights[k] for k in cycle), s.field.zero())
            cylinders.append(Cylinder(VERTICAL, cycle, w, s.widths[cycle[0]]))
    else:
        raise ValueError('unknown direction %r' % direction)
    return cylinders


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def parabolic_data(cyls: Sequence[Cylinder]) -> ParabolicData:
    '''
    Returns the inverse moduli, their least common multiple and the twist counts.

    Raises
    -------
    NotCommensurable
        Two inverse moduli have an irrational ratio.
    '''
    moduli = tuple(c.modulus for c in cyls)
    base = moduli[0]
    ratios = []
    for i, mu in enumerate(moduli):
        ratio = mu / base
        if not ratio.is_rational:
            raise NotCommensurable('cylinders 0 and %d have incommensurable moduli' % i, pair=(0, i))
        ratios.append(ratio.rational_value())
    numerator = reduce(_lcm, (r.numerator for r in ratios))
    denominator = reduce(gcd, (r.denominator for r in ratios))
    multiple = Fraction(numerator, denominator)
    twists = []
    for r in ratios:
        n = multiple / r
        if n.denominator != 1:
            raise InternalAssertion('twist count %s is not an integer' % n)
        twists.append(int(n))
    return ParabolicData(cyls[0].direction, moduli, base * multiple, tuple(twists))


def corner_cycles(s: RectSurface) -> List[Tuple[int, ...]]:
    '''
    Returns the cycles of ``k -> sigma2 sigma1 sigma2^-1 sigma1^-1 (k)`` (the
    rightmost map applied first) on bottom-left corners; one cycle per vertex.
    '''
    s1_inv = perm_invert(s.sigma1)
    s2_inv = perm_invert(s.sigma2)
    walk = perm_compose(perm_compose(perm_compose(s1_inv, s2_inv), s.sigma1), s.sigma2)
    return perm_cycles(walk)


def stratum(s: RectSurface) -> Stratum:
    '''
    Returns the cone angles ``k`` (angle ``k pi``) of all vertices, sorted, and
    the genus from ``sum(k - 2) = 4g - 4``.
    '''
    cycles = corner_cycles(s)
    angles = tuple(sorted(2 * len(c) for c in cycles))
    total = sum(k - 2 for k in angles)
    if (total + 4) % 4:
        raise InternalAssertion('cone angle excess %d is not divisible by four' % total)
    return Stratum(angles, (total + 4) // 4)


def euler_characteristic(s: RectSurface) -> int:
    '''
    Returns ``V - E + F`` of the rectangle complex, vertices found as the
    connected components of the corner identification graph.
    '''
    graph = nx.Graph()
    for k in range(s.ell):
        for corner in ('BL', 'BR', 'TL', 'TR'):
            graph.add_node((k, corner))
        graph.add_edge((k, 'BR'), (s.sigma1[k], 'BL'))
        graph.add_edge((k, 'TR'), (s.sigma1[k], 'TL'))
        graph.add_edge((k, 'TL'), (s.sigma2[k], 'BL'))
        graph.add_edge((k, 'TR'), (s.sigma2[k], 'BR'))
    vertices = nx.number_connected_components(graph)
    return vertices - 2 * s.ell + s.ell


def intersection_data(s: RectSurface) -> CuspDatum:
    '''
    Recovers the canonical cusp datum of a surface whose horizontal and
    vertical cylinders pair up.

    Vertical cylinder ``j`` is matched with the horizontal cylinder of equal
    height and circumference; ``a_ij`` counts rectangles in both, and ``D`` is
    the horizontal twist vector.

    Raises
    -------
    NotCommensurable
        Either direction has incommensurable moduli.
    NotSymmetric
        No matching of vertical with horizontal cylinders gives a symmetric
        matrix.
    '''
    horizontal = cylinder_decomposition(s, HORIZONTAL)
    vertical = cylinder_decomposition(s, VERTICAL)
    twists = parabolic_data(horizontal).twists
    parabolic_data(vertical)
    m = len(horizontal)
    if len(vertical) != m:
        raise NotSymmetric('%d horizontal and %d vertical cylinders' % (m, len(vertical)))
    row_of = [0] * s.ell
    for i, c in enumerate(horizontal):
        for k in c.rect_cycle:
            row_of[k] = i
    best = None
    for tau in permutations(range(m)):
        if any(vertical[j].h != horizontal[tau[j]].h or vertical[j].w != horizontal[tau[j]].w for j in range(m)):
            continue
        col_of = [0] * s.ell
        for j, c in enumerate(vertical):
            for k in c.rect_cycle:
                col_of[k] = tau[j]
        A = [[0] * m for _ in range(m)]
        for i, j in zip(row_of, col_of):
            A[i][j] += 1
        A = tuple(tuple(row) for row in A)
        if any(A[i][j] != A[j][i] for i in range(m) for j in range(i)):
            continue
        g = GluingPattern(s.sigma1, s.sigma2, tuple(row_of), tuple(col_of))
        candidate = canonical_cusp_datum(A, twists, g)
        if best is None or candidate < best:
            best = candidate
    if best is None:
        raise NotSymmetric('no matching of vertical and horizontal cylinders is symmetric')
    return best


def apply_matrix(s: RectSurface, g) -> RectSurface:
    '''
    Applies a diagonal or anti-diagonal matrix of determinant one.

    For ``[[0, b], [c, 0]]`` the point ``(x, y)`` goes to ``(b y, c x)``; with
    ``c > 0`` right neighbours become former bottom neighbours, so
    ``(sigma1, sigma2) -> (sigma2^-1, sigma1)``, and with ``c < 0`` it is
    ``(sigma2, sigma1^-1)``. A negative diagonal inverts both permutations.

    Raises
    -------
    UnsupportedMatrix
        ``g`` has determinant other than one or is neither diagonal nor
        anti-diagonal.
    '''
    field = s.field
    (a, b), (c, d) = [[lift(x, field) for x in row] for row in g]
    if a * d - b * c != 1:
        raise UnsupportedMatrix('matrix has determinant %r' % (a * d - b * c,))
    if b.is_zero and c.is_zero:
        widths = tuple(w * abs(a) for w in s.widths)
        heights = tuple(h * abs(d) for h in s.heights)
        sigma1, sigma2 = s.sigma1, s.sigma2
        if a.sign() < 0:
            sigma1, sigma2 = tuple(perm_invert(sigma1)), tuple(perm_invert(sigma2))
        return RectSurface(sigma1, sigma2, widths, heights, s.scale_sq)
    if a.is_zero and d.is_zero:
        widths = tuple(h * abs(b) for h in s.heights)
        heights = tuple(w * abs(c) for w in s.widths)
        if c.sign() > 0:
            sigma1, sigma2 = tuple(perm_invert(s.sigma2)), s.sigma1
        else:
            sigma1, sigma2 = s.sigma2, tuple(perm_invert(s.sigma1))
        return RectSurface(sigma1, sigma2, widths, heights, s.scale_sq)
    raise UnsupportedMatrix('only diagonal and anti-diagonal matrices act on rectangle presentations')


def canonical_form(s: RectSurface) -> tuple:
    '''
    Returns a key equal for two surfaces exactly when they differ by a
    renumbering of rectangles.
    '''
    perms, data, _ = perms_canonical_form(
        [s.sigma1, s.sigma2], [[w.key() for w in s.widths], [h.key() for h in s.heights]])
    return (tuple(map(tuple, perms)), tuple(map(tuple, data)), s.scale_sq.key(),
            s.field.minpoly)


def surfaces_equal(s: RectSurface, t: RectSurface) -> bool:
    return s.field == t.field and canonical_form(s) == canonical_form(t)


# rendering

def layout(s: RectSurface, gap: float = 0.25) -> Dict[int, Tuple[float, float, float, float]]:
    '''
    Places each horizontal cylinder as a row of rectangles, rows stacked
    upwards with a gap, and returns ``k -> (x, y, width, height)`` in surface
    units (float, for drawing only).
    '''
    placement = {}
    y = 0.0
    for cyl in cylinder_decomposition(s, HORIZONTAL):
        x = 0.0
        height = to_float(s.heights[cyl.rect_cycle[0]])
        for k in cyl.rect_cycle:
            width = to_float(s.widths[k])
            placement[k] = (x, y, width, height)
            x += width
        y += height + gap
    return placement


def svg_root(s: RectSurface, scale: float = 200.0, margin: float = 20.0, labels: bool = True):
    '''
    Returns ``(svg element, pixel placement)``; the placement maps rectangle
    ``k`` to its pixel box ``(x, y, width, height)`` with y pointing down.
    '''
    boxes = layout(s)
    total_w = max(x + w for x, _, w, _ in boxes.values())
    total_h = max(y + h for _, y, _, h in boxes.values())
    width_px = total_w * scale + 2 * margin
    height_px = total_h * scale + 2 * margin
    root = ET.Element('svg', {
        'xmlns': 'http://www.w3.org/2000/svg',
        'version': '1.1',
        'width': '%.6f' % width_px,
        'height': '%.6f' % height_px,
        'viewBox': '0 0 %.6f %.6f' % (width_px, height_px),
    })
    pixels = {}
    for k in sorted(boxes):
        x, y, w, h = boxes[k]
        px = margin + x * scale
        py = margin + (total_h - y - h) * scale
        pixels[k] = (px, py, w * scale, h * scale)
        ET.SubElement(root, 'rect', {
            'x': '%.6f' % px, 'y': '%.6f' % py,
            'width': '%.6f' % (w * scale), 'height': '%.6f' % (h * scale),
            'fill': 'none', 'stroke': 'black', 'stroke-width': '1',
        })
        if labels:
            _text(root, px + w * scale / 2, py + h * scale / 2, str(k))
            # edge labels: h{k} pairs the right edge of k with the left edge of sigma1[k],
            # v{k} the top edge of k with the bottom edge of sigma2[k]
            _text(root, px + w * scale - 4, py + h * scale / 2, 'h%d' % k, anchor='end')
            _text(root, px + w * scale / 2, py + 12, 'v%d' % k)
    if labels:
        for k in sorted(boxes):
            px, py, w, h = pixels[s.sigma1[k]]
            _text(root, px + 4, py + h / 2, 'h%d' % k, anchor='start')
            px, py, w, h = pixels[s.sigma2[k]]
            _text(root, px + w / 2, py + h - 4, 'v%d' % k)
    return root, pixels


def _text(root, x: float, y: float, content: str, anchor: str = 'middle'):
    node = ET.SubElement(root, 'text', {
        'x': '%.6f' % x, 'y': '%.6f' % y,
        'font-size': '10', 'text-anchor': anchor,
    })
    node.text = content
    return node


def render_svg(s: RectSurface, scale: float = 200.0, margin: float = 20.0, labels: bool = True) -> str:
    '''
    Returns a deterministic SVG document of the surface with gluing labels.
    '''
    validate(s, normalized=False)
    root, _ = svg_root(s, scale, margin, labels)
    return ET.tostring(root, encoding='unicode')
