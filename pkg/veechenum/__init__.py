"""
veechenum
~~~~~~~~~

Enumeration of Veech group cusps and pseudo-Anosov maps from their
combinatorics, with exact algebraic arithmetic throughout.

:copyright: (c) 2022-present BlackThunder
:license: MIT, see LICENSE for more details.
"""

__version__ = '0.1.0'

from .exactnum import AlgebraicReal, NFElement, NumberField
from .enumeration import (
    CuspDatum,
    CuspMatrixPair,
    GluingPattern,
    enumerate_cusp_data,
    enumerate_gluings,
    enumerate_irreducible,
    enumerate_pa_matrices,
)
from .pfcore import is_irreducible, perron_root, perron_vector
from .surface import RectSurface, build_surface, intersection_data, stratum
from .origami import AffineAut, Origami, affine_automorphism, find_hyperbolic, veech_orbit
from .markov import (
    MarkovPartition,
    SegmentGluingGraph,
    build_markov,
    common_refinement,
    intersection_matrix,
    markov_bounds,
    reconstruct_from_markov,
    refine_partition,
    to_eigenbasis,
    trace_leaf,
    verify_markov,
)
from .hyperbolic import Moebius, commutator_certificate, cusp_area
from .lib.errors import VeechError
