"""
Model Catalogue Module
Bundled triangulated, stratified spaces with their expected invariants
"""

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import structlog

from modules.exceptions.general_exceptions import ModelNotFoundException
from modules.exceptions.topology import ModelValidationException
from modules.homology.ih import homology, ih_groups
from modules.models.complex import (
    SimplicialComplex, barycentric_subdivision, boundary_subcomplex, build_complex, cone,
    identify_vertices, is_pseudomanifold, suspension
)
from modules.models.strata import Stratification, mark_point, singular_stratification

log = structlog.get_logger(__name__)


class Provenance(str, Enum):
    PUBLISHED = 'PUBLISHED'
    DERIVED = 'DERIVED'
    TRIVIAL = 'TRIVIAL'


@dataclass(frozen=True)
class Expectation:
    value: object
    provenance: Provenance

    def to_dict(self):
        value = list(self.value) if isinstance(self.value, tuple) else self.value
        return {'value': value, 'provenance': self.provenance.value}


@dataclass(frozen=True)
class ModelEntry:
    """A bundled space: complex, stratification, optional subcomplex and expected invariants"""

    name: str
    complex: SimplicialComplex
    stratification: Stratification
    provenance: str
    expected: Dict[str, Expectation] = field(default_factory=dict)
    subcomplex: Optional[SimplicialComplex] = None
    tags: Tuple[str, ...] = ()

    def to_dict(self):
        return {
            'name': self.name,
            'provenance': self.provenance,
            'tags': list(self.tags),
            'complex': self.complex.to_dict(),
            'stratification': self.stratification.to_dict(),
            'subcomplex': None if self.subcomplex is None else self.subcomplex.to_dict(),
            'expected': {key: e.to_dict() for key, e in sorted(self.expected.items())},
        }


RP2_TRIANGLES = [
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
    (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3),
]


def _sphere(dimension: int) -> SimplicialComplex:
    vertices = list(range(dimension + 2))
    return build_complex([tuple(v for v in vertices if v != skip) for skip in vertices])


def _torus() -> SimplicialComplex:
    triangles = []
    for i in range(7):
        triangles.append((i, (i + 1) % 7, (i + 3) % 7))
        triangles.append((i, (i + 2) % 7, (i + 3) % 7))
    return build_complex(triangles, vertex_order=range(7))


def _klein_bottle() -> SimplicialComplex:
    def v(i, j):
        if j == 3:
            i, j = -i, 0
        return f"{i % 3}{j}"

    triangles = []
    for i in range(3):
        for j in range(3):
            triangles.append((v(i, j), v(i + 1, j), v(i + 1, j + 1)))
            triangles.append((v(i, j), v(i, j + 1), v(i + 1, j + 1)))
    return build_complex(triangles)


def _disk() -> SimplicialComplex:
    return build_complex([('c', 0, 1), ('c', 1, 2), ('c', 0, 2)])


def _solid_torus() -> SimplicialComplex:
    def v(j, i):
        return f"{'abc'[j]}{i % 3}"

    tetrahedra = []
    for i in range(3):
        a = [v(j, i) for j in range(3)]
        b = [v(j, i + 1) for j in range(3)]
        tetrahedra.append((a[0], a[1], a[2], b[2]))
        tetrahedra.append((a[0], a[1], b[1], b[2]))
        tetrahedra.append((a[0], b[0], b[1], b[2]))
    return build_complex(tetrahedra)


def _pinched_torus() -> SimplicialComplex:
    def v(r, i):
        return f"r{r}_{i % 3}"

    triangles = []
    for r in range(2):
        for i in range(3):
            triangles.append((v(r, i), v(r, i + 1), v(r + 1, i + 1)))
            triangles.append((v(r, i), v(r + 1, i), v(r + 1, i + 1)))
    for r in (0, 2):
        for i in range(3):
            triangles.append(('pinch', v(r, i), v(r, i + 1)))
    return build_complex(triangles)


def _pinch_subdivided(complex_: SimplicialComplex, vertex: str, far_triangle: Tuple[str, ...]) -> SimplicialComplex:
    """
    Glue an original vertex to the barycentre of a triangle that avoids it

    Two original vertices of a subdivided surface always share a neighbour, so
    the barycentre of a far triangle stands in for the second point.
    """
    subdivided = barycentric_subdivision(complex_).complex
    barycentre = 'b(' + ','.join(far_triangle) + ')'
    return identify_vertices(subdivided, vertex, barycentre)


def edge_distances(complex_: SimplicialComplex, source: str) -> Dict[str, int]:
    """Breadth-first edge distance from a vertex"""
    neighbours: Dict[int, List[int]] = {v: [] for v in range(complex_.count(0))}
    for a, b in (complex_.simplices[1] if complex_.dimension >= 1 else ()):
        neighbours[a].append(b)
        neighbours[b].append(a)
    start = complex_.vertex(source)
    distance = {start: 0}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for other in neighbours[current]:
            if other not in distance:
                distance[other] = distance[current] + 1
                queue.append(other)
    return {complex_.labels[v]: d for v, d in distance.items()}


def x1_candidates(strat: Stratification, x0: str) -> List[str]:
    """Top-stratum vertices at maximal edge distance from x0, smallest label first"""
    complex_ = strat.complex
    distances = edge_distances(complex_, x0)
    top = complex_.dimension
    eligible = [
        label for label, d in distances.items()
        if label != x0 and strat.dimension(strat.stratum_of(0, complex_.vertex(label))) == top
    ]
    furthest = max(distances[label] for label in eligible)
    return sorted(label for label in eligible if distances[label] == furthest)


def pinched_rp2_space() -> Tuple[SimplicialComplex, str]:
    rp2 = build_complex(RP2_TRIANGLES, vertex_order=range(6))
    return _pinch_subdivided(rp2, '0', ('1', '2', '4')), '0'


def pinched_rp2_stratification(complex_: SimplicialComplex, x0: str, x1: Optional[str] = None) -> Stratification:
    """The three-stratum stratification {x0}, {x1}, rest"""
    strat = singular_stratification(complex_)
    x1 = x1 or x1_candidates(strat, x0)[0]
    return mark_point(strat, x1, name='x1')


def _expect(**values) -> Dict[str, Expectation]:
    return {key: Expectation(value, provenance) for key, (value, provenance) in values.items()}


P, D, T = Provenance.PUBLISHED, Provenance.DERIVED, Provenance.TRIVIAL


def _manifold(name, complex_, provenance, expected, tags=('closed',)):
    return ModelEntry(name, complex_, Stratification.trivial(complex_), provenance, expected, tags=tags)


def _build_base(name: str) -> ModelEntry:
    if name == 'sphere1':
        return _manifold(name, _sphere(1), "boundary of a triangle",
                         _expect(homology=((1, 1), T), euler=(0, T)))
    if name == 'sphere2':
        return _manifold(name, _sphere(2), "boundary of a tetrahedron",
                         _expect(homology=((1, 0, 1), T), ih=((1, 0, 1), T), euler=(2, T), dual_block=((1, 0, 1), T)))
    if name == 'sphere3':
        return _manifold(name, _sphere(3), "boundary of a 4-simplex",
                         _expect(homology=((1, 0, 0, 1), T), euler=(0, T)))
    if name == 'torus':
        return _manifold(name, _torus(), "7-vertex torus",
                         _expect(homology=((1, 2, 1), D), ih=((1, 2, 1), T), euler=(0, T), dual_block=((1, 2, 1), D)))
    if name == 'rp2':
        return _manifold(name, build_complex(RP2_TRIANGLES, vertex_order=range(6)), "6-vertex projective plane",
                         _expect(homology=((1, 1, 1), T), ih=((1, 1, 1), T), euler=(1, T)))
    if name == 'klein_bottle':
        return _manifold(name, _klein_bottle(), "3x3 grid with a flipped wrap",
                         _expect(homology=((1, 2, 1), T), euler=(0, T)))
    if name == 'disk_pair':
        disk = _disk()
        return ModelEntry(name, disk, Stratification.trivial(disk), "cone on a 3-cycle with its boundary circle",
                          _expect(homology=((1, 0, 0), T), homology_relative=((0, 0, 1), T)),
                          subcomplex=boundary_subcomplex(disk), tags=('pair', 'with boundary'))
    if name == 'solid_torus_pair':
        solid = _solid_torus()
        return ModelEntry(name, solid, Stratification.trivial(solid), "three prisms over a triangle, glued in a ring",
                          _expect(homology=((1, 1, 0, 0), D), homology_relative=((0, 0, 1, 1), D),
                                  boundary_homology=((1, 2, 1), D)),
                          subcomplex=boundary_subcomplex(solid), tags=('pair', 'with boundary'))
    if name == 'nodal_sphere':
        space = _pinch_subdivided(_sphere(2), '0', ('1', '2', '3'))
        return ModelEntry(name, space, singular_stratification(space),
                          "subdivided tetrahedron boundary with two points identified",
                          _expect(homology=((1, 1, 1), D), euler=(1, D), ih=((1, 0, 1), D), i_euler=(2, D)),
                          tags=('closed',))
    if name == 'pinched_torus':
        space = _pinched_torus()
        return ModelEntry(name, space, singular_stratification(space), "cylinder with both ends coned to one point",
                          _expect(homology=((1, 1, 1), D), euler=(1, D), ih=((1, 0, 1), D), i_euler=(2, D)),
                          tags=('closed',))
    if name == 'pinched_rp2':
        space, x0 = pinched_rp2_space()
        return ModelEntry(name, space, pinched_rp2_stratification(space, x0),
                          "subdivided 6-vertex projective plane with two points identified",
                          _expect(homology=((1, 2, 1), P), euler=(0, P), ih=((1, 1, 1), P), i_euler=(1, P)),
                          tags=('closed', 'counterexample'))
    raise ModelNotFoundException(name)


CONE_EXPECTATIONS = {
    'sphere1': _expect(homology=((1, 0, 0), T), homology_relative=((0, 0, 1), T)),
    'sphere2': _expect(homology=((1, 0, 0, 0), T), homology_relative=((0, 0, 0, 1), D)),
    'torus': _expect(ih=((1, 2, 0, 0), D), ih_relative=((0, 0, 0, 1), D)),
    'pinched_rp2': _expect(ih=((1, 1, 0, 0), D), ih_relative=((0, 0, 0, 1), D)),
}


def _validate(entry: ModelEntry):
    verdict = is_pseudomanifold(entry.complex)
    if 'with boundary' in entry.tags:
        if not verdict.is_pseudomanifold:
            raise ModelValidationException(entry.name, "not a pseudomanifold with boundary")
    elif not verdict.is_closed:
        raise ModelValidationException(entry.name, "not a closed pseudomanifold")
    if entry.name == 'pinched_rp2':
        betti = homology(entry.complex).betti
        ih_betti = ih_groups(entry.complex, entry.stratification).betti
        if betti != entry.expected['homology'].value or ih_betti != entry.expected['ih'].value:
            raise ModelValidationException(entry.name, f"homology {betti}, intersection homology {ih_betti}")
        if len(entry.stratification.strata) != 3:
            raise ModelValidationException(entry.name, f"expected three strata, got {sorted(entry.stratification.strata)}")


@lru_cache(maxsize=None)
def model(name: str) -> ModelEntry:
    """
    Build and validate a catalogue model

    Args:
        name (str): catalogue name, or cone_of:NAME / suspension_of:NAME

    Returns:
        ModelEntry
    """
    if name.startswith('cone_of:'):
        base = model(name[len('cone_of:'):])
        complex_, strat = cone(base.complex, base.stratification)
        entry = ModelEntry(name, complex_, strat, f"closed cone on {base.name}",
                           dict(CONE_EXPECTATIONS.get(base.name, {})), subcomplex=base.complex,
                           tags=('pair', 'with boundary', 'cone'))
    elif name.startswith('suspension_of:'):
        base = model(name[len('suspension_of:'):])
        complex_, strat = suspension(base.complex, base.stratification)
        entry = ModelEntry(name, complex_, strat, f"suspension of {base.name}", {}, tags=('closed',))
    else:
        entry = _build_base(name)
    _validate(entry)
    log.debug("models.built", name=name, counts=entry.complex.counts())
    return entry


CATALOGUE = (
    'sphere1', 'sphere2', 'sphere3', 'torus', 'rp2', 'klein_bottle', 'disk_pair', 'solid_torus_pair',
    'nodal_sphere', 'pinched_torus', 'pinched_rp2',
)


def catalogue() -> List[str]:
    return list(CATALOGUE) + ['cone_of:NAME', 'suspension_of:NAME']
