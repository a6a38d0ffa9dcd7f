"""
Stratification Module
Stratified complexes, perversities, the chain singular set and the
allowability predicates behind intersection chains
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import structlog

from modules import app
from modules.exceptions.topology import (
    DegreeOutOfRangeException, PerversityException, StratificationException
)
from modules.models.complex import (
    Chain, SimplicialComplex, Subdivision, build_complex, closure, embedding, is_sphere, simplex_link
)
from modules.utils.gf2 import iter_bits

log = structlog.get_logger(__name__)

DEFAULT_STRATUM = 'top'
MAX_RECOGNIZED_DIMENSION = 3


def stratum_name(existing: Iterable[str], wanted: str) -> str:
    taken = set(existing)
    while wanted in taken:
        wanted += "'"
    return wanted


@dataclass(frozen=True, eq=False)
class Stratification:
    """
    Assignment of every simplex of a complex to a named stratum

    Stratum dimensions are derived from the simplices assigned to them.
    """

    complex: SimplicialComplex
    strata: Dict[str, int]
    assignment: Tuple[Tuple[str, ...], ...]
    _masks: Dict = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, complex_: SimplicialComplex, assign: Callable[[int, int], str],
              check_frontier: bool = True) -> 'Stratification':
        assignment = []
        strata: Dict[str, int] = {}
        for degree, level in enumerate(complex_.simplices):
            row = []
            for k in range(len(level)):
                name = str(assign(degree, k))
                strata[name] = max(strata.get(name, -1), degree)
                row.append(name)
            assignment.append(tuple(row))
        stratification = cls(complex_, strata, tuple(assignment))
        if check_frontier:
            stratification.frontier_violations()
        return stratification

    @classmethod
    def trivial(cls, complex_: SimplicialComplex, name: str = DEFAULT_STRATUM) -> 'Stratification':
        return cls.build(complex_, lambda degree, k: name, check_frontier=False)

    def stratum_of(self, degree: int, k: int) -> str:
        return self.assignment[degree][k]

    def dimension(self, name: str) -> int:
        try:
            return self.strata[name]
        except KeyError:
            raise StratificationException("Unknown stratum", name)

    def codimension(self, name: str) -> int:
        return self.complex.dimension - self.dimension(name)

    def has_codimension_one(self) -> bool:
        return any(self.codimension(name) == 1 for name in self.strata)

    def singular_strata(self) -> List[str]:
        return [name for name in self.strata if self.codimension(name) >= 1]

    def stratum_vertices(self, name: str) -> List[str]:
        return [self.complex.labels[k] for k, s in enumerate(self.assignment[0]) if s == name] \
            if self.assignment else []

    def frontier_violations(self) -> List[Tuple[str, Tuple[str, ...], str]]:
        """Faces lying in a stratum of higher dimension than the stratum of the simplex"""
        violations = []
        complex_ = self.complex
        for degree, level in enumerate(complex_.simplices):
            for k, simplex in enumerate(level):
                own = self.strata[self.assignment[degree][k]]
                for size in range(1, degree + 1):
                    for face in combinations(simplex, size):
                        name = self.assignment[size - 1][complex_.index(face)]
                        if self.strata[name] > own:
                            violations.append((self.assignment[degree][k], complex_.simplex_labels(size - 1, complex_.index(face)), name))
        for stratum, face, other in violations[:5]:
            log.warning("strata.frontier", stratum=stratum, face=list(face), face_stratum=other)
        return violations

    def restrict(self, sub: SimplicialComplex) -> 'Stratification':
        """Stratification of a subcomplex, dimensions recomputed inside it"""
        maps = embedding(sub, self.complex).maps
        return Stratification.build(sub, lambda degree, k: self.assignment[degree][maps[degree][k]],
                                    check_frontier=False)

    def induced_by_subdivision(self, subdivision: Subdivision) -> 'Stratification':
        """Each simplex of K' joins the stratum of its carrier"""
        if subdivision.base is not self.complex and subdivision.base != self.complex:
            raise StratificationException("Subdivision does not belong to the stratified complex")
        return Stratification.build(
            subdivision.complex,
            lambda degree, k: self.stratum_of(*subdivision.carrier(degree, k)),
            check_frontier=False,
        )

    def to_dict(self):
        counts = {name: 0 for name in self.strata}
        for level in self.assignment:
            for name in level:
                counts[name] += 1
        return {
            'strata': [
                {
                    'name': name,
                    'dimension': dimension,
                    'codimension': self.complex.dimension - dimension,
                    'simplices': counts[name],
                }
                for name, dimension in sorted(self.strata.items(), key=lambda item: (-item[1], item[0]))
            ]
        }


@dataclass(frozen=True)
class Perversity:
    """
    Perversity values p(1), p(2), ...; codimensions past the end repeat the last value
    """

    values: Tuple[int, ...] = ()

    @classmethod
    def zero(cls) -> 'Perversity':
        return cls(())

    @classmethod
    def parse(cls, text: str, validate: Optional[bool] = None) -> 'Perversity':
        """Parse `zero` or `list:p1,p2,...`"""
        text = (text or 'zero').strip()
        if text == 'zero':
            return cls.zero()
        if not text.startswith('list:'):
            raise PerversityException(f"Unknown perversity '{text}', expected zero or list:p1,p2,...")
        try:
            values = tuple(int(v) for v in text[len('list:'):].split(',') if v.strip())
        except ValueError:
            raise PerversityException(f"Perversity values must be integers: '{text}'")
        perversity = cls(values)
        perversity.validate(app.settings.validate_perversity if validate is None else validate)
        return perversity

    def __call__(self, codimension: int) -> int:
        if codimension <= 0 or not self.values:
            return 0
        if codimension <= len(self.values):
            return self.values[codimension - 1]
        return self.values[-1]

    def validate(self, classical: bool = True) -> 'Perversity':
        if any(v < 0 for v in self.values):
            raise PerversityException("Perversity values must be non-negative")
        if classical:
            for a, b in zip(self.values, self.values[1:]):
                if b - a not in (0, 1):
                    raise PerversityException(f"Perversity steps must be 0 or 1, got {a} -> {b}")
        return self

    @property
    def name(self) -> str:
        if not any(self.values):
            return 'GM0'
        return 'list:' + ','.join(str(v) for v in self.values)

    def to_dict(self):
        return {'name': self.name, 'values': list(self.values)}


GM0 = Perversity.zero()


@dataclass(frozen=True)
class AllowabilityVerdict:
    allowable: bool
    violations: Tuple[Tuple[Tuple[str, ...], str], ...] = ()

    def __bool__(self):
        return self.allowable

    def to_dict(self):
        return {
            'allowable': self.allowable,
            'violations': [{'face': list(face), 'stratum': name} for face, name in self.violations],
        }


def _simplex_violations(strat: Stratification, perversity: Perversity, degree: int, k: int):
    complex_ = strat.complex
    simplex = complex_.simplices[degree][k]
    n = complex_.dimension
    out = []
    for size in range(1, degree + 2):
        for face in combinations(simplex, size):
            name = strat.assignment[size - 1][complex_.index(face)]
            codimension = n - strat.strata[name]
            if codimension >= 1 and size - 1 > degree - codimension + perversity(codimension):
                out.append((tuple(complex_.labels[v] for v in face), name))
    return out


def allowable_mask(strat: Stratification, perversity: Perversity, degree: int) -> int:
    """Packed set of the allowable simplices of the given degree"""
    if degree < 0 or degree > strat.complex.dimension:
        return 0
    key = (perversity.values, degree)
    cached = strat._masks.get(key)
    if cached is not None:
        return cached
    bounds = {}
    n = strat.complex.dimension
    for name, dimension in strat.strata.items():
        codimension = n - dimension
        if codimension >= 1:
            bounds[name] = degree - codimension + perversity(codimension)
    mask = 0
    complex_ = strat.complex
    if not bounds:
        mask = (1 << complex_.count(degree)) - 1
    else:
        for k, simplex in enumerate(complex_.simplices[degree]):
            if _is_allowable(complex_, strat.assignment, bounds, simplex, degree):
                mask |= 1 << k
    strat._masks[key] = mask
    return mask


def _is_allowable(complex_, assignment, bounds, simplex, degree) -> bool:
    for size in range(1, degree + 2):
        for face in combinations(simplex, size):
            bound = bounds.get(assignment[size - 1][complex_.index(face)])
            if bound is not None and size - 1 > bound:
                return False
    return True


def gm_allowable(complex_: SimplicialComplex, strat: Stratification, perversity: Perversity,
                 chain: Chain) -> AllowabilityVerdict:
    """
    Goresky-MacPherson test: dim(|C| and S) <= i - c + p(c) for every stratum S of codimension c >= 1

    Args:
        complex_ (SimplicialComplex): complex carrying the chain
        strat (Stratification): stratification of the same complex
        perversity (Perversity): perversity p
        chain (Chain): chain to test

    Returns:
        AllowabilityVerdict
    """
    _check_same(complex_, strat)
    bad = chain.bits & ~allowable_mask(strat, perversity, chain.degree)
    violations = []
    for k in iter_bits(bad):
        violations.extend(_simplex_violations(strat, perversity, chain.degree, k))
    return AllowabilityVerdict(not bad, tuple(violations))


def ic_allowable(complex_: SimplicialComplex, strat: Stratification, perversity: Perversity,
                 chain: Chain) -> AllowabilityVerdict:
    """Chain and its boundary both allowable"""
    verdict = gm_allowable(complex_, strat, perversity, chain)
    if not verdict or chain.degree == 0:
        return verdict
    return gm_allowable(complex_, strat, perversity, complex_.boundary(chain))


def _check_same(complex_, strat):
    if strat.complex is not complex_ and strat.complex != complex_:
        raise StratificationException("Stratification belongs to another complex")


def _support_complex(complex_: SimplicialComplex, chain: Chain) -> SimplicialComplex:
    return build_complex(complex_.simplex_labels(chain.degree, k) for k in chain.support())


def chain_singular_set(complex_: SimplicialComplex, chain: Chain) -> FrozenSet[Tuple[int, ...]]:
    """
    Closed set of points of |C| with no Euclidean neighbourhood of dimension i in |C|

    Returns the simplices of K (as vertex-index tuples) of the closure of every face
    of |C| whose link inside |C| is not a sphere of the complementary dimension.
    """
    degree = chain.degree
    if degree > MAX_RECOGNIZED_DIMENSION:
        raise DegreeOutOfRangeException(degree, 0, MAX_RECOGNIZED_DIMENSION)
    if chain.is_zero():
        return frozenset()
    support = _support_complex(complex_, chain)
    singular = []
    for d in range(degree):
        for k, simplex in enumerate(support.simplices[d]):
            if not is_sphere(simplex_link(support, simplex), degree - d - 1):
                singular.append((d, k))
    found = closure(support, singular)
    return frozenset(tuple(sorted(complex_.vertex(support.labels[v]) for v in s)) for s in found)


def real_allowable(complex_: SimplicialComplex, strat: Stratification, chain: Chain) -> AllowabilityVerdict:
    """
    Real-regime test: GM0 allowability of C plus dim(SC and S) <= min(i - c, i - 2) on singular strata,
    and the same for the boundary of C one degree down
    """
    degree = chain.degree
    if degree > MAX_RECOGNIZED_DIMENSION:
        raise DegreeOutOfRangeException(degree, 0, MAX_RECOGNIZED_DIMENSION)
    verdict = gm_allowable(complex_, strat, GM0, chain)
    if not verdict:
        return verdict
    violations = []
    n = complex_.dimension
    for simplex in chain_singular_set(complex_, chain):
        d = len(simplex) - 1
        name = strat.stratum_of(d, complex_.index(simplex))
        codimension = n - strat.strata[name]
        if codimension >= 1 and d > min(degree - codimension, degree - 2):
            violations.append((tuple(complex_.labels[v] for v in simplex), name))
    if violations:
        return AllowabilityVerdict(False, tuple(sorted(violations)))
    if degree >= 1:
        boundary = complex_.boundary(chain)
        if not boundary.is_zero():
            return real_allowable(complex_, strat, boundary)
    return AllowabilityVerdict(True)


def _singular_locus(space: SimplicialComplex) -> List[Tuple[int, int]]:
    n = space.dimension
    singular = []
    for d in range(n):
        for k, simplex in enumerate(space.simplices[d]):
            if not is_sphere(simplex_link(space, simplex), n - d - 1):
                singular.append((d, k))
    return singular


def _components(members: Sequence[Tuple[int, ...]]) -> List[List[Tuple[int, ...]]]:
    """Connected components of a union of open simplices, joined along face relations"""
    member_set = set(members)
    parent = {s: s for s in members}

    def find(s):
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    for simplex in members:
        for size in range(1, len(simplex)):
            for face in combinations(simplex, size):
                if face in member_set:
                    parent[find(face)] = find(simplex)
    groups: Dict[Tuple[int, ...], List[Tuple[int, ...]]] = {}
    for simplex in sorted(members, key=lambda s: (len(s), s)):
        groups.setdefault(find(simplex), []).append(simplex)
    return list(groups.values())


def singular_stratification(complex_: SimplicialComplex) -> Stratification:
    """
    Iterated combinatorial singular locus, split into connected strata

    A face is singular when its link is not a sphere of the complementary
    dimension; the closure of the singular faces is stratified again, and the
    strata are the connected components of the successive differences.
    """
    if complex_.dimension > MAX_RECOGNIZED_DIMENSION:
        raise DegreeOutOfRangeException(complex_.dimension, 0, MAX_RECOGNIZED_DIMENSION)

    names: Dict[Tuple[int, ...], str] = {}
    space = complex_
    current = {s for level in complex_.simplices for s in level}
    while current:
        singular_faces = closure(space, _singular_locus(space))
        labels = space.labels
        singular = {tuple(sorted(complex_.vertex(labels[v]) for v in s)) for s in singular_faces}
        regular = sorted(current - singular, key=lambda s: (len(s), s))
        counters: Dict[int, int] = {}
        for component in _components(regular):
            dimension = max(len(s) for s in component) - 1
            index = counters.get(dimension, 0)
            counters[dimension] = index + 1
            for simplex in component:
                names[simplex] = f"d{dimension}_{index}"
        current = singular
        if not current:
            break
        space = build_complex(
            [tuple(complex_.labels[v] for v in s) for s in current],
            vertex_order=[label for label in complex_.labels if (complex_.vertex(label),) in current],
        )

    stratification = Stratification.build(complex_, lambda degree, k: names[complex_.simplices[degree][k]])
    log.debug("strata.singular", strata=stratification.strata)
    return stratification


def mark_point(strat: Stratification, vertex, name: Optional[str] = None) -> Stratification:
    """Carve a vertex out of its stratum as a new 0-dimensional stratum"""
    complex_ = strat.complex
    k = complex_.vertex(vertex)
    current = strat.stratum_of(0, k)
    if strat.dimension(current) == 0:
        raise StratificationException("Vertex is already a point stratum", str(vertex))
    name = stratum_name(strat.strata.keys(), name or f"pt_{vertex}")

    def assign(degree, index):
        if degree == 0 and index == k:
            return name
        return strat.stratum_of(degree, index)

    return Stratification.build(complex_, assign)
