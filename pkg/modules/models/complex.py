"""
Simplicial Complex Module
Finite abstract simplicial complexes, Z/2 chains, barycentric subdivision,
dual blocks and the surgeries used to build the bundled spaces
"""

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Collection, Dict, Iterable, List, Optional, Sequence, Tuple

import structlog

from modules.exceptions.topology import (
    DegreeOutOfRangeException, DuplicateVertexException, NotASubcomplexException,
    NotPseudomanifoldException, NotPureException, SimplicialityException, VertexNotFoundException
)
from modules.utils.gf2 import Gf2Matrix, iter_bits, popcount, vector_from_indices

log = structlog.get_logger(__name__)

Simplex = Tuple[int, ...]
SimplexRef = Tuple[int, int]  # (dimension, index)


@dataclass(frozen=True)
class Chain:
    """A Z/2 chain: bit k set means the k-th simplex of the degree is in the support"""

    degree: int
    bits: int = 0

    def __add__(self, other: 'Chain') -> 'Chain':
        if self.degree != other.degree:
            raise DegreeOutOfRangeException(other.degree, self.degree, self.degree)
        return Chain(self.degree, self.bits ^ other.bits)

    def support(self) -> List[int]:
        return list(iter_bits(self.bits))

    def is_zero(self) -> bool:
        return self.bits == 0

    def __len__(self):
        return popcount(self.bits)

    def to_dict(self, complex_=None):
        if complex_ is None:
            return {'degree': self.degree, 'support': self.support()}
        return {
            'degree': self.degree,
            'support': [list(complex_.simplex_labels(self.degree, k)) for k in self.support()],
        }


@dataclass(frozen=True)
class SimplicialComplex:
    """
    A finite abstract simplicial complex

    Vertices are string labels; a simplex is a sorted tuple of vertex indices
    and simplices[d] lists the d-simplices in lexicographic order.
    """

    labels: Tuple[str, ...]
    simplices: Tuple[Tuple[Simplex, ...], ...]

    @classmethod
    def from_index_simplices(cls, labels: Sequence[str], simplices: Iterable[Sequence[int]]) -> 'SimplicialComplex':
        faces = defaultdict(set)
        for simplex in simplices:
            ordered = tuple(sorted(simplex))
            if len(set(ordered)) != len(ordered):
                raise DuplicateVertexException(tuple(labels[v] for v in simplex))
            for size in range(1, len(ordered) + 1):
                faces[size - 1].update(combinations(ordered, size))
        top = max(faces) if faces else -1
        table = tuple(tuple(sorted(faces[d])) for d in range(top + 1))
        used = {s[0] for s in table[0]} if table else set()
        if len(used) != len(labels):
            missing = [labels[v] for v in range(len(labels)) if v not in used]
            raise SimplicialityException("Vertex does not occur in any simplex", tuple(missing))
        if len(set(labels)) != len(labels):
            raise SimplicialityException("Vertex labels are not unique")
        return cls(tuple(labels), table)

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.labels

    def count(self, degree: int) -> int:
        if 0 <= degree <= self.dimension:
            return len(self.simplices[degree])
        return 0

    def counts(self) -> Tuple[int, ...]:
        return tuple(len(level) for level in self.simplices)

    @cached_property
    def _index(self) -> Tuple[Dict[Simplex, int], ...]:
        return tuple({s: k for k, s in enumerate(level)} for level in self.simplices)

    @cached_property
    def _vertex_index(self) -> Dict[str, int]:
        return {label: k for k, label in enumerate(self.labels)}

    def vertex(self, label) -> int:
        try:
            return self._vertex_index[str(label)]
        except KeyError:
            raise VertexNotFoundException(label)

    def index(self, simplex: Simplex) -> int:
        return self._index[len(simplex) - 1][simplex]

    def find(self, simplex: Simplex) -> Optional[int]:
        degree = len(simplex) - 1
        if not 0 <= degree <= self.dimension:
            return None
        return self._index[degree].get(simplex)

    def simplex(self, degree: int, k: int) -> Simplex:
        return self.simplices[degree][k]

    def simplex_labels(self, degree: int, k: int) -> Tuple[str, ...]:
        return tuple(self.labels[v] for v in self.simplices[degree][k])

    def from_labels(self, labels: Sequence) -> Simplex:
        simplex = tuple(sorted(self.vertex(v) for v in labels))
        if self.find(simplex) is None:
            raise NotASubcomplexException(tuple(str(v) for v in labels), "Simplex is not in the complex")
        return simplex

    def chain(self, label_simplices: Iterable[Sequence], degree: Optional[int] = None) -> Chain:
        """Build a chain from simplices given by vertex labels"""
        bits = 0
        for labels in label_simplices:
            simplex = self.from_labels(labels)
            if degree is None:
                degree = len(simplex) - 1
            elif len(simplex) - 1 != degree:
                raise DegreeOutOfRangeException(len(simplex) - 1, degree, degree)
            bits ^= 1 << self.index(simplex)
        return Chain(0 if degree is None else degree, bits)

    @cached_property
    def _boundary_columns(self) -> Tuple[Tuple[int, ...], ...]:
        columns = [tuple(0 for _ in self.simplices[0])] if self.simplices else []
        for degree in range(1, self.dimension + 1):
            index = self._index[degree - 1]
            level = []
            for simplex in self.simplices[degree]:
                level.append(vector_from_indices(index[face] for face in combinations(simplex, degree)))
            columns.append(tuple(level))
        return tuple(columns)

    def boundary_matrix(self, degree: int) -> Gf2Matrix:
        """Matrix of the boundary C_i -> C_{i-1}"""
        if not 1 <= degree <= self.dimension:
            raise DegreeOutOfRangeException(degree, 1, self.dimension)
        return Gf2Matrix(self.count(degree - 1), self.count(degree), self._boundary_columns[degree])

    def boundary_bits(self, degree: int, bits: int) -> int:
        if degree <= 0 or degree > self.dimension:
            return 0
        columns = self._boundary_columns[degree]
        out = 0
        for k in iter_bits(bits):
            out ^= columns[k]
        return out

    def boundary(self, chain: Chain) -> Chain:
        return Chain(chain.degree - 1, self.boundary_bits(chain.degree, chain.bits))

    @cached_property
    def _coboundary_columns(self) -> Tuple[Tuple[int, ...], ...]:
        out = []
        for degree in range(self.dimension + 1):
            if degree == self.dimension:
                out.append(tuple(0 for _ in self.simplices[degree]))
            else:
                out.append(self.boundary_matrix(degree + 1).transpose().columns)
        return tuple(out)

    def coboundary_bits(self, degree: int, bits: int) -> int:
        """Coboundary of a cochain of the given degree, packed over (degree+1)-simplices"""
        columns = self._coboundary_columns[degree]
        out = 0
        for k in iter_bits(bits):
            out ^= columns[k]
        return out

    def coboundary_matrix(self, degree: int) -> Gf2Matrix:
        return Gf2Matrix(self.count(degree + 1), self.count(degree), self._coboundary_columns[degree])

    @cached_property
    def _vertex_star(self) -> Tuple[Tuple[SimplexRef, ...], ...]:
        star = [[] for _ in self.labels]
        for degree, level in enumerate(self.simplices):
            for k, simplex in enumerate(level):
                for v in simplex:
                    star[v].append((degree, k))
        return tuple(tuple(s) for s in star)

    def cofaces(self, simplex: Simplex) -> List[SimplexRef]:
        """All simplices containing the given one, itself included"""
        members = set(simplex)
        return [
            (d, k) for d, k in self._vertex_star[simplex[0]]
            if d >= len(simplex) - 1 and members.issubset(self.simplices[d][k])
        ]

    def cofacet_counts(self, degree: int) -> Tuple[int, ...]:
        if degree >= self.dimension:
            return tuple(0 for _ in range(self.count(degree)))
        counts = [0] * self.count(degree)
        for column in self._boundary_columns[degree + 1]:
            for k in iter_bits(column):
                counts[k] += 1
        return tuple(counts)

    def maximal_simplices(self) -> List[SimplexRef]:
        out = []
        for degree in range(self.dimension + 1):
            counts = self.cofacet_counts(degree)
            out.extend((degree, k) for k, c in enumerate(counts) if c == 0)
        return out

    def is_pure(self) -> bool:
        return all(d == self.dimension for d, _ in self.maximal_simplices())

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(level) for d, level in enumerate(self.simplices))

    def is_connected(self) -> bool:
        if not self.labels:
            return True
        parent = list(range(len(self.labels)))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        if self.dimension >= 1:
            for a, b in self.simplices[1]:
                parent[find(a)] = find(b)
        return len({find(v) for v in range(len(self.labels))}) == 1

    def label_simplices(self) -> List[Tuple[str, ...]]:
        return [self.simplex_labels(d, k) for d, k in self.maximal_simplices()]

    def to_dict(self):
        return {
            'vertices': list(self.labels),
            'dimension': self.dimension,
            'counts': list(self.counts()),
            'euler_characteristic': self.euler_characteristic(),
        }


def build_complex(top_simplices: Iterable[Sequence], vertex_order: Optional[Sequence] = None) -> SimplicialComplex:
    """
    Close a list of simplices (given by vertex labels) under taking faces

    Vertices are numbered in order of first appearance unless vertex_order is given.
    """
    top_simplices = [tuple(str(v) for v in simplex) for simplex in top_simplices]
    labels = [str(v) for v in vertex_order] if vertex_order is not None else []
    position = {label: k for k, label in enumerate(labels)}
    indexed = []
    for simplex in top_simplices:
        if len(set(simplex)) != len(simplex):
            raise DuplicateVertexException(simplex)
        row = []
        for label in simplex:
            if label not in position:
                position[label] = len(labels)
                labels.append(label)
            row.append(position[label])
        indexed.append(row)
    return SimplicialComplex.from_index_simplices(labels, indexed)


def closure(complex_: SimplicialComplex, refs: Iterable[SimplexRef]) -> frozenset:
    """Smallest subcomplex containing the given simplices, as a set of simplices"""
    out = set()
    for degree, k in refs:
        simplex = complex_.simplices[degree][k]
        for size in range(1, degree + 2):
            out.update(combinations(simplex, size))
    return frozenset(out)


@dataclass(frozen=True)
class Embedding:
    """Index maps of a subcomplex L inside K, per degree"""

    sub: SimplicialComplex
    host: SimplicialComplex
    maps: Tuple[Tuple[int, ...], ...]

    def mask(self, degree: int) -> int:
        if degree > self.sub.dimension or degree < 0:
            return 0
        return vector_from_indices(self.maps[degree])

    def push(self, chain: Chain) -> Chain:
        """L-chain -> K-chain"""
        if chain.degree > self.sub.dimension:
            return Chain(chain.degree, 0)
        table = self.maps[chain.degree]
        return Chain(chain.degree, vector_from_indices(table[k] for k in iter_bits(chain.bits)))

    def pull(self, chain: Chain) -> Chain:
        """K-chain supported on L -> L-chain"""
        if chain.degree > self.sub.dimension or chain.degree < 0:
            if chain.bits:
                raise NotASubcomplexException(chain.degree, "Chain is not supported on the subcomplex")
            return Chain(chain.degree, 0)
        inverse = self._inverse[chain.degree]
        out = 0
        for k in iter_bits(chain.bits):
            if k not in inverse:
                raise NotASubcomplexException(self.host.simplex_labels(chain.degree, k),
                                              "Chain is not supported on the subcomplex")
            out ^= 1 << inverse[k]
        return Chain(chain.degree, out)

    @cached_property
    def _inverse(self) -> Tuple[Dict[int, int], ...]:
        return tuple({k: j for j, k in enumerate(level)} for level in self.maps)


def embedding(sub: SimplicialComplex, host: SimplicialComplex) -> Embedding:
    """Locate every simplex of sub inside host by vertex labels"""
    vertex_map = []
    for label in sub.labels:
        try:
            vertex_map.append(host.vertex(label))
        except VertexNotFoundException:
            raise NotASubcomplexException((label,))
    maps = []
    for degree, level in enumerate(sub.simplices):
        row = []
        for simplex in level:
            image = tuple(sorted(vertex_map[v] for v in simplex))
            k = host.find(image)
            if k is None:
                raise NotASubcomplexException(tuple(sub.labels[v] for v in simplex))
            row.append(k)
        maps.append(tuple(row))
    return Embedding(sub, host, tuple(maps))


@dataclass(frozen=True)
class Subdivision:
    """
    Barycentric subdivision K' of K with the chain-level subdivision map

    Vertex j of K' is the barycentre of the K-simplex vertex_simplex[j]; the
    carrier of a K'-simplex is its last (largest) vertex simplex.
    """

    base: SimplicialComplex
    complex: SimplicialComplex
    vertex_simplex: Tuple[SimplexRef, ...]
    sd_columns: Tuple[Tuple[int, ...], ...] = field(repr=False)

    def carrier(self, degree: int, k: int) -> SimplexRef:
        return self.vertex_simplex[self.complex.simplices[degree][k][-1]]

    def first(self, degree: int, k: int) -> SimplexRef:
        return self.vertex_simplex[self.complex.simplices[degree][k][0]]

    def sd_matrix(self, degree: int) -> Gf2Matrix:
        return Gf2Matrix(self.complex.count(degree), self.base.count(degree), self.sd_columns[degree])

    def subdivide(self, chain: Chain) -> Chain:
        if chain.degree > self.base.dimension:
            return Chain(chain.degree, 0)
        columns = self.sd_columns[chain.degree]
        out = 0
        for k in iter_bits(chain.bits):
            out ^= columns[k]
        return Chain(chain.degree, out)

    def restricted(self, sub: SimplicialComplex) -> SimplicialComplex:
        """The subdivision of a subcomplex L, cut out of K' so that it shares the labels of K'"""
        inside = embedding(sub, self.base)
        masks = [inside.mask(d) for d in range(self.base.dimension + 1)]
        fine = self.complex
        carried = []
        for d in range(fine.dimension + 1):
            for k in range(fine.count(d)):
                degree, index = self.carrier(d, k)
                if masks[degree] >> index & 1:
                    carried.append(fine.simplex_labels(d, k))
        vertices = [simplex[0] for simplex in carried if len(simplex) == 1]
        return build_complex(carried, vertex_order=vertices)


def _barycenter_label(labels: Tuple[str, ...]) -> str:
    if len(labels) == 1:
        return labels[0]
    return 'b(' + ','.join(labels) + ')'


def barycentric_subdivision(complex_: SimplicialComplex) -> Subdivision:
    """
    First barycentric subdivision with its subdivision chain map and carriers

    Returns:
        Subdivision
    """
    offsets = [0]
    for level in complex_.simplices:
        offsets.append(offsets[-1] + len(level))
    vertex_simplex = tuple((d, k) for d, level in enumerate(complex_.simplices) for k in range(len(level)))
    taken = set(complex_.labels)
    labels = []
    for d, k in vertex_simplex:
        label = _barycenter_label(complex_.simplex_labels(d, k))
        if d > 0:
            label = _fresh_label(taken, label)
            taken.add(label)
        labels.append(label)

    flags: Dict[SimplexRef, List[Tuple[int, ...]]] = {}

    def full_flags(degree: int, k: int) -> List[Tuple[int, ...]]:
        key = (degree, k)
        if key in flags:
            return flags[key]
        own = offsets[degree] + k
        if degree == 0:
            result = [(own,)]
        else:
            simplex = complex_.simplices[degree][k]
            result = []
            for face in combinations(simplex, degree):
                for flag in full_flags(degree - 1, complex_.index(face)):
                    result.append(flag + (own,))
        flags[key] = result
        return result

    tops = [flag for d, k in complex_.maximal_simplices() for flag in full_flags(d, k)]
    subdivided = SimplicialComplex.from_index_simplices(labels, tops)

    sd_columns = []
    for degree, level in enumerate(complex_.simplices):
        sd_columns.append(tuple(
            vector_from_indices(subdivided.index(flag) for flag in full_flags(degree, k))
            for k in range(len(level))
        ))

    log.debug("complex.subdivided", counts=subdivided.counts())
    return Subdivision(complex_, subdivided, vertex_simplex, tuple(sd_columns))


@dataclass(frozen=True)
class DualBlockComplex:
    """
    Dual blocks D(sigma) of a pure n-complex, as chains of its subdivision

    blocks[d][k] is the K'-chain of degree n - d made of the flags that start
    at the barycentre of the k-th d-simplex.
    """

    subdivision: Subdivision
    blocks: Tuple[Tuple[int, ...], ...] = field(repr=False)

    @property
    def host(self) -> SimplicialComplex:
        return self.subdivision.complex

    @property
    def base(self) -> SimplicialComplex:
        return self.subdivision.base

    def block(self, degree: int, k: int) -> Chain:
        return Chain(self.base.dimension - degree, self.blocks[degree][k])

    def block_chain(self, simplex_degree: int, cochain: int) -> Chain:
        """Sum of D(sigma) over the simplices of the cochain, as a K'-chain"""
        out = 0
        table = self.blocks[simplex_degree]
        for k in iter_bits(cochain):
            out ^= table[k]
        return Chain(self.base.dimension - simplex_degree, out)

    def block_boundary_matrix(self, block_degree: int) -> Gf2Matrix:
        """Block boundary from block degree j to j-1: D(sigma) -> sum of D(tau) over cofacets"""
        n = self.base.dimension
        if not 1 <= block_degree <= n:
            raise DegreeOutOfRangeException(block_degree, 1, n)
        return self.base.coboundary_matrix(n - block_degree)

    def boundary_defect(self, degree: int, k: int) -> Chain:
        """
        Boundary of D(sigma) minus the blocks of its cofacets

        Zero for closed pseudomanifolds; for a pseudomanifold with boundary it is
        the dual block of sigma inside the subdivided boundary.
        """
        host = self.host
        block = self.block(degree, k)
        expected = self.block_chain(degree + 1, self.base.coboundary_bits(degree, 1 << k)) \
            if degree < self.base.dimension else Chain(block.degree - 1, 0)
        return Chain(block.degree - 1, host.boundary_bits(block.degree, block.bits) ^ expected.bits)


def dual_blocks(complex_: SimplicialComplex, subdivision: Optional[Subdivision] = None) -> DualBlockComplex:
    """Dual block decomposition of a pure complex"""
    if not complex_.is_pure():
        raise NotPureException("Dual blocks need a pure complex")
    subdivision = subdivision or barycentric_subdivision(complex_)
    n = complex_.dimension
    host = subdivision.complex
    blocks = [[0] * complex_.count(d) for d in range(n + 1)]
    for degree, level in enumerate(host.simplices):
        for k, simplex in enumerate(level):
            d, index = subdivision.vertex_simplex[simplex[0]]
            if d + degree == n:
                blocks[d][index] |= 1 << k
    return DualBlockComplex(subdivision, tuple(tuple(level) for level in blocks))


def _fresh_label(taken: Collection[str], wanted: str) -> str:
    while wanted in taken:
        wanted += "'"
    return wanted


def _join_apexes(complex_: SimplicialComplex, apexes: Sequence[str]):
    labels = list(complex_.labels)
    apex_indices = []
    for apex in apexes:
        apex = _fresh_label(labels, apex)
        apex_indices.append(len(labels))
        labels.append(apex)
    tops = [
        complex_.simplices[d][k] + (a,)
        for d, k in complex_.maximal_simplices() for a in apex_indices
    ]
    if not tops:
        tops = [(a,) for a in apex_indices]
    return SimplicialComplex.from_index_simplices(labels, tops), [labels[a] for a in apex_indices]


def _apex_strata(complex_, joined, strat, apexes):
    from modules.models.strata import Stratification, stratum_name

    apex_names = [stratum_name(strat.strata.keys(), a) for a in apexes] if strat else list(apexes)
    apex_vertices = {joined.vertex(a): name for a, name in zip(apexes, apex_names)}
    base_vertices = len(complex_.labels)

    def assign(degree, k):
        simplex = joined.simplices[degree][k]
        base = tuple(v for v in simplex if v < base_vertices)
        if not base:
            return apex_vertices[simplex[0]]
        if strat is None:
            return 'top'
        return strat.stratum_of(len(base) - 1, complex_.index(base))

    return Stratification.build(joined, assign)


def cone(complex_: SimplicialComplex, strat=None, apex: str = 'apex'):
    """
    Closed cone cK with the cone stratification

    The apex is a stratum of its own; every stratum S of K becomes the
    half-open cone c(S), keeping its name.

    Returns:
        (SimplicialComplex, Stratification)
    """
    joined, (apex_label,) = _join_apexes(complex_, [apex])
    return joined, _apex_strata(complex_, joined, strat, [apex_label])


def suspension(complex_: SimplicialComplex, strat=None):
    """Suspension of K with two cone points, strata suspended as in cone"""
    joined, apexes = _join_apexes(complex_, ['north', 'south'])
    return joined, _apex_strata(complex_, joined, strat, apexes)


def simplex_link(complex_: SimplicialComplex, simplex: Simplex) -> SimplicialComplex:
    """link(sigma) = {tau : tau and sigma disjoint, tau + sigma in K}"""
    members = set(simplex)
    pieces = []
    for d, k in complex_.cofaces(simplex):
        rest = tuple(complex_.labels[v] for v in complex_.simplices[d][k] if v not in members)
        if rest:
            pieces.append(rest)
    return build_complex(pieces)


def vertex_link(complex_: SimplicialComplex, vertex) -> SimplicialComplex:
    return simplex_link(complex_, (complex_.vertex(vertex),))


def vertex_star(complex_: SimplicialComplex, vertex) -> SimplicialComplex:
    """Closure of the simplices containing the vertex"""
    v = complex_.vertex(vertex)
    return build_complex(complex_.simplex_labels(d, k) for d, k in complex_.cofaces((v,)))


def is_sphere(complex_: SimplicialComplex, dimension: int) -> bool:
    """
    Combinatorial sphere recognition up to dimension 2

    S^-1 is empty, S^0 two points, S^1 a connected cycle graph, S^2 a connected
    closed surface whose vertex links are circles and whose Euler characteristic is 2.
    """
    if dimension == -1:
        return complex_.dimension == -1
    if complex_.dimension != dimension:
        return False
    if dimension == 0:
        return complex_.count(0) == 2
    if dimension == 1:
        return complex_.is_connected() and all(c == 2 for c in _vertex_degrees(complex_))
    if dimension == 2:
        if not complex_.is_pure() or not complex_.is_connected():
            return False
        if any(c != 2 for c in complex_.cofacet_counts(1)):
            return False
        if complex_.euler_characteristic() != 2:
            return False
        return all(is_sphere(simplex_link(complex_, (v,)), 1) for v in range(complex_.count(0)))
    raise DegreeOutOfRangeException(dimension, -1, 2)


def _vertex_degrees(complex_: SimplicialComplex) -> List[int]:
    degrees = [0] * complex_.count(0)
    for a, b in complex_.simplices[1]:
        degrees[a] += 1
        degrees[b] += 1
    return degrees


@dataclass(frozen=True)
class PseudomanifoldVerdict:
    dimension: int
    is_pure: bool
    boundary_faces: Tuple[Tuple[str, ...], ...]
    branching_faces: Tuple[Tuple[str, ...], ...]

    @property
    def is_pseudomanifold(self) -> bool:
        return self.is_pure and not self.branching_faces

    @property
    def is_closed(self) -> bool:
        return self.is_pseudomanifold and not self.boundary_faces

    def to_dict(self):
        return {
            'dimension': self.dimension,
            'is_pure': self.is_pure,
            'is_pseudomanifold': self.is_pseudomanifold,
            'is_closed': self.is_closed,
            'boundary_faces': [list(f) for f in self.boundary_faces],
            'branching_faces': [list(f) for f in self.branching_faces],
        }


def is_pseudomanifold(complex_: SimplicialComplex) -> PseudomanifoldVerdict:
    """Pure, and every codimension-one face has two cofacets (one on the boundary)"""
    n = complex_.dimension
    boundary, branching = [], []
    if n >= 1:
        for k, count in enumerate(complex_.cofacet_counts(n - 1)):
            if count == 1:
                boundary.append(complex_.simplex_labels(n - 1, k))
            elif count != 2:
                branching.append(complex_.simplex_labels(n - 1, k))
    return PseudomanifoldVerdict(n, complex_.is_pure(), tuple(boundary), tuple(branching))


def boundary_subcomplex(complex_: SimplicialComplex) -> SimplicialComplex:
    """Closure of the codimension-one faces with a single cofacet"""
    verdict = is_pseudomanifold(complex_)
    if not verdict.is_pseudomanifold:
        raise NotPseudomanifoldException()
    return build_complex(verdict.boundary_faces, vertex_order=[
        label for label in complex_.labels
        if any(label in face for face in verdict.boundary_faces)
    ])


def fundamental_class(complex_: SimplicialComplex) -> Chain:
    """Sum of all top simplices; a cycle, or a cycle relative to the boundary"""
    if not complex_.is_pure():
        raise NotPureException("Fundamental class needs a pure complex")
    n = complex_.dimension
    chain = Chain(n, (1 << complex_.count(n)) - 1)
    if n >= 1:
        counts = complex_.cofacet_counts(n - 1)
        allowed = vector_from_indices(k for k, c in enumerate(counts) if c == 1)
        if complex_.boundary(chain).bits & ~allowed:
            raise NotPseudomanifoldException("Sum of top simplices is not a relative cycle")
    return chain


def identify_vertices(complex_: SimplicialComplex, v0, v1) -> SimplicialComplex:
    """
    Quotient complex with v1 glued onto v0

    Raises SimplicialityException when a simplex would collapse or two simplices
    would coincide; subdivide first in that case.
    """
    a, b = complex_.vertex(v0), complex_.vertex(v1)
    if a == b:
        raise SimplicialityException("Cannot identify a vertex with itself", (str(v0),))
    relabel = list(range(len(complex_.labels)))
    relabel[b] = a
    seen = set()
    for degree, level in enumerate(complex_.simplices):
        for simplex in level:
            if simplex == (b,):
                continue
            image = tuple(sorted({relabel[v] for v in simplex}))
            if len(image) < len(simplex):
                raise SimplicialityException(
                    "Identification collapses a simplex", complex_.simplex_labels(degree, complex_.index(simplex)))
            if image in seen:
                raise SimplicialityException(
                    "Identification merges two simplices", tuple(complex_.labels[v] for v in image))
            seen.add(image)

    keep = [v for v in range(len(complex_.labels)) if v != b]
    renumber = {v: k for k, v in enumerate(keep)}
    labels = [complex_.labels[v] for v in keep]
    tops = [
        [renumber[relabel[v]] for v in complex_.simplices[d][k]]
        for d, k in complex_.maximal_simplices()
    ]
    quotient = SimplicialComplex.from_index_simplices(labels, tops)
    log.debug("complex.identified", keep=str(v0), glued=str(v1), euler=quotient.euler_characteristic())
    return quotient


def link_euler_census(complex_: SimplicialComplex) -> Dict[str, int]:
    """Euler characteristic of every vertex link"""
    return {
        label: simplex_link(complex_, (v,)).euler_characteristic()
        for v, label in enumerate(complex_.labels)
    }
