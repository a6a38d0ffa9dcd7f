"""
Intersection Homology Module
Allowable chain complexes, intersection homology (absolute and relative),
ordinary homology and cohomology, and the natural maps between them
"""

import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Optional, Sequence, Tuple

import structlog

from modules import app
from modules.exceptions.duality import NotAllowableException, TransportException
from modules.exceptions.topology import NotPseudomanifoldException, RegimeException
from modules.models.complex import (
    Chain, SimplicialComplex, barycentric_subdivision, dual_blocks, embedding, is_pseudomanifold
)
from modules.models.strata import GM0, Perversity, Stratification, allowable_mask, ic_allowable, real_allowable
from modules.utils.gf2 import (
    Gf2Matrix, Quotient, iter_bits, nullspace_basis, quotient_basis, rank, solver
)

log = structlog.get_logger(__name__)

REGIMES = ('gm', 'real')


@dataclass(frozen=True)
class DegreeGroup:
    """One homology group: representatives and the coordinate map of its quotient"""

    degree: int
    representatives: Tuple[Chain, ...]
    quotient: Quotient = field(compare=False, repr=False)
    mask: int = field(compare=False, repr=False, default=-1)

    @property
    def betti(self) -> int:
        return len(self.representatives)

    def coordinates(self, chain: Chain) -> int:
        """Packed coordinates of the class of an allowable (relative) cycle"""
        vector = chain.bits if self.mask == -1 else chain.bits & self.mask
        return self.quotient.coordinates(vector)


@dataclass(frozen=True)
class IhResult:
    """
    Per-degree groups of a (stratified) complex

    kind is one of ih, ih_relative, homology, homology_relative, cohomology, dual_block.
    """

    complex: SimplicialComplex
    kind: str
    perversity: Perversity
    groups: Tuple[DegreeGroup, ...]

    @property
    def betti(self) -> Tuple[int, ...]:
        return tuple(group.betti for group in self.groups)

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** i * b for i, b in enumerate(self.betti))

    def group(self, degree: int) -> DegreeGroup:
        if 0 <= degree < len(self.groups):
            return self.groups[degree]
        return DegreeGroup(degree, (), quotient_basis([], []))

    def representatives(self, degree: int) -> Tuple[Chain, ...]:
        return self.group(degree).representatives

    def coordinates(self, degree: int, chain: Chain) -> int:
        return self.group(degree).coordinates(chain)

    def coordinate_matrix(self, degree: int, chains: Sequence[Chain]) -> Gf2Matrix:
        return Gf2Matrix.from_columns(self.group(degree).betti, (self.coordinates(degree, c) for c in chains))

    def to_dict(self, with_representatives: bool = False):
        out = {
            'kind': self.kind,
            'perversity': self.perversity.name,
            'betti': list(self.betti),
            'euler_characteristic': self.euler_characteristic,
        }
        if with_representatives:
            out['representatives'] = [
                [rep.to_dict(self.complex)['support'] for rep in group.representatives]
                for group in self.groups
            ]
        return out


@dataclass(frozen=True)
class AllowableComplex:
    """
    The allowable chain complex IC_* of a stratified complex

    bases[i] spans IC_i = {C on allowable i-simplices with boundary on allowable (i-1)-simplices},
    each basis vector a packed chain of K.
    """

    complex: SimplicialComplex
    masks: Tuple[int, ...]
    bases: Tuple[Tuple[int, ...], ...]

    def dimension(self, degree: int) -> int:
        return len(self.bases[degree]) if 0 <= degree < len(self.bases) else 0

    def boundary_matrix(self, degree: int) -> Gf2Matrix:
        """Boundary IC_i -> IC_{i-1} in the chosen bases; raises if the image leaves IC_{i-1}"""
        target = Gf2Matrix.from_columns(self.complex.count(degree - 1), self.bases[degree - 1])
        solve_one = solver(target)
        return Gf2Matrix.from_columns(
            self.dimension(degree - 1),
            (solve_one(self.complex.boundary_bits(degree, g)) for g in self.bases[degree]),
        )


def allowable_complex(complex_: SimplicialComplex, strat: Stratification,
                      perversity: Perversity = GM0) -> AllowableComplex:
    masks = tuple(allowable_mask(strat, perversity, d) for d in range(complex_.dimension + 1))
    bases = []
    for degree in range(complex_.dimension + 1):
        allowed = list(iter_bits(masks[degree]))
        if degree == 0:
            bases.append(tuple(1 << k for k in allowed))
            continue
        outside = ~masks[degree - 1]
        leak = Gf2Matrix.from_columns(
            complex_.count(degree - 1),
            (complex_.boundary_bits(degree, 1 << k) & outside & ((1 << complex_.count(degree - 1)) - 1)
             for k in allowed),
        )
        basis = []
        for combination in nullspace_basis(leak):
            bits = 0
            for j in iter_bits(combination):
                bits ^= 1 << allowed[j]
            basis.append(bits)
        bases.append(tuple(basis))
    return AllowableComplex(complex_, masks, tuple(bases))


def _full(count: int) -> int:
    return (1 << count) - 1


def _groups(complex_: SimplicialComplex, chains: AllowableComplex, relative_masks: Sequence[int]):
    """Homology of IC_* modulo chains of the subcomplex whose simplices are outside relative_masks"""
    groups = []
    top = complex_.dimension
    for degree in range(top + 1):
        keep = relative_masks[degree]
        basis = chains.bases[degree]
        if degree == 0:
            cycle_chains = list(basis)
        else:
            keep_below = relative_masks[degree - 1]
            image = Gf2Matrix.from_columns(
                complex_.count(degree - 1),
                (complex_.boundary_bits(degree, g) & keep_below for g in basis),
            )
            cycle_chains = []
            for combination in nullspace_basis(image):
                bits = 0
                for j in iter_bits(combination):
                    bits ^= basis[j]
                cycle_chains.append(bits)
        boundaries = []
        if degree < top:
            boundaries = [complex_.boundary_bits(degree + 1, g) & keep for g in chains.bases[degree + 1]]
        quotient = quotient_basis([z & keep for z in cycle_chains], boundaries)
        representatives = tuple(Chain(degree, cycle_chains[k]) for k in quotient.indices)
        groups.append(DegreeGroup(degree, representatives, quotient, keep))
    return tuple(groups)


def _check_regime(strat: Stratification, regime: str):
    if regime not in REGIMES:
        raise RegimeException(f"Unknown regime '{regime}', expected one of {', '.join(REGIMES)}")
    if regime == 'real' and strat.has_codimension_one():
        log.warning("ih.real_regime_refused", strata=[s for s in strat.strata if strat.codimension(s) == 1])
        raise RegimeException()


def _verify_real(complex_: SimplicialComplex, strat: Stratification, groups: Sequence[DegreeGroup]):
    for group in groups:
        if group.degree > 3:
            continue
        for rep in group.representatives:
            verdict = real_allowable(complex_, strat, rep)
            if not verdict:
                raise NotAllowableException(
                    f"Representative in degree {group.degree} fails the real-regime test: "
                    f"{[list(face) for face, _ in verdict.violations]}"
                )


def ih_groups(complex_: SimplicialComplex, strat: Stratification, perversity: Perversity = GM0,
              regime: str = 'gm') -> IhResult:
    """
    Intersection homology IH_i for i = 0..n

    Args:
        complex_ (SimplicialComplex): the space
        strat (Stratification): its stratification
        perversity (Perversity): defaults to GM0
        regime (str): gm, or real to verify every representative with real_allowable

    Returns:
        IhResult
    """
    _check_regime(strat, regime)
    started = time.perf_counter()
    chains = allowable_complex(complex_, strat, perversity)
    masks = [_full(complex_.count(d)) for d in range(complex_.dimension + 1)]
    result = IhResult(complex_, 'ih', perversity, _groups(complex_, chains, masks))
    if regime == 'real' and app.settings.real_regime_check:
        _verify_real(complex_, strat, result.groups)
    log.debug("ih.computed", betti=result.betti, perversity=perversity.name,
              seconds=round(time.perf_counter() - started, 3))
    return result


def ih_groups_relative(complex_: SimplicialComplex, sub: SimplicialComplex, strat: Stratification,
                       perversity: Perversity = GM0) -> IhResult:
    """IH of IC_*(K) / (IC_*(K) and C_*(L)); representatives are relative cycles"""
    inside = embedding(sub, complex_)
    chains = allowable_complex(complex_, strat, perversity)
    masks = [_full(complex_.count(d)) & ~inside.mask(d) for d in range(complex_.dimension + 1)]
    result = IhResult(complex_, 'ih_relative', perversity, _groups(complex_, chains, masks))
    log.debug("ih.relative_computed", betti=result.betti, perversity=perversity.name)
    return result


def homology(complex_: SimplicialComplex) -> IhResult:
    """Ordinary simplicial Z/2 homology"""
    result = ih_groups(complex_, Stratification.trivial(complex_))
    return IhResult(complex_, 'homology', GM0, result.groups)


def homology_relative(complex_: SimplicialComplex, sub: SimplicialComplex) -> IhResult:
    result = ih_groups_relative(complex_, sub, Stratification.trivial(complex_))
    return IhResult(complex_, 'homology_relative', GM0, result.groups)


def cohomology(complex_: SimplicialComplex) -> IhResult:
    """Simplicial Z/2 cohomology; representatives are cochains packed like chains"""
    groups = []
    for degree in range(complex_.dimension + 1):
        cocycles = nullspace_basis(complex_.coboundary_matrix(degree))
        coboundaries = list(complex_.coboundary_matrix(degree - 1).columns) if degree > 0 else []
        quotient = quotient_basis(cocycles, coboundaries)
        groups.append(DegreeGroup(degree, tuple(Chain(degree, c) for c in quotient.representatives), quotient))
    return IhResult(complex_, 'cohomology', GM0, tuple(groups))


def euler_char(complex_: SimplicialComplex) -> int:
    return homology(complex_).euler_characteristic


def i_euler_char(complex_: SimplicialComplex, strat: Stratification, perversity: Perversity = GM0) -> int:
    return ih_groups(complex_, strat, perversity).euler_characteristic


def forget_map(complex_: SimplicialComplex, strat: Stratification, perversity: Perversity,
               degree: int, ih: Optional[IhResult] = None, ordinary: Optional[IhResult] = None) -> Gf2Matrix:
    """Matrix of IH_i -> H_i: each IH representative's ordinary class in the H basis"""
    ih = ih or ih_groups(complex_, strat, perversity)
    ordinary = ordinary or homology(complex_)
    return ordinary.coordinate_matrix(degree, ih.representatives(degree))


class IhContext:
    """
    Groups of a stratified complex together with those of its barycentric subdivision

    Everything is computed on first use and kept; sub, when given, makes the
    groups relative to that subcomplex.
    """

    def __init__(self, complex_: SimplicialComplex, strat: Stratification, perversity: Perversity = GM0,
                 sub: Optional[SimplicialComplex] = None):
        self.complex = complex_
        self.strat = strat
        self.perversity = perversity
        self.sub = sub
        self._solvers: Dict[int, Callable[[int], int]] = {}

    @cached_property
    def subdivision(self):
        return barycentric_subdivision(self.complex)

    @cached_property
    def blocks(self):
        return dual_blocks(self.complex, self.subdivision)

    @cached_property
    def sd_strat(self) -> Stratification:
        return self.strat.induced_by_subdivision(self.subdivision)

    @cached_property
    def sd_sub(self) -> Optional[SimplicialComplex]:
        if self.sub is None:
            return None
        return self.subdivision.restricted(self.sub)

    @cached_property
    def ih(self) -> IhResult:
        if self.sub is None:
            return ih_groups(self.complex, self.strat, self.perversity)
        return ih_groups_relative(self.complex, self.sub, self.strat, self.perversity)

    @cached_property
    def ih_sd(self) -> IhResult:
        if self.sub is None:
            return ih_groups(self.subdivision.complex, self.sd_strat, self.perversity)
        return ih_groups_relative(self.subdivision.complex, self.sd_sub, self.sd_strat, self.perversity)

    @cached_property
    def sd_chain_masks(self) -> Tuple[int, ...]:
        """Packed K'-simplices outside the subdivided subcomplex, per degree"""
        host = self.subdivision.complex
        if self.sd_sub is None:
            return tuple(_full(host.count(d)) for d in range(host.dimension + 1))
        inside = embedding(self.sd_sub, host)
        return tuple(_full(host.count(d)) & ~inside.mask(d) for d in range(host.dimension + 1))

    def subdivided_classes(self, degree: int) -> Gf2Matrix:
        """Columns: K'-coordinates of the subdivided representatives of the groups of K"""
        reps = [self.subdivision.subdivide(rep) for rep in self.ih.representatives(degree)]
        return self.ih_sd.coordinate_matrix(degree, reps)

    def to_base(self, degree: int, sd_coordinates: int) -> int:
        """Express a class of K' (packed coordinates) in the basis of K"""
        solve_one = self._solvers.get(degree)
        if solve_one is None:
            matrix = self.subdivided_classes(degree)
            ours, theirs = self.ih.group(degree).betti, self.ih_sd.group(degree).betti
            if ours != theirs or rank(matrix) != ours:
                log.warning("ih.subdivision_mismatch", degree=degree, complex_betti=ours, subdivided_betti=theirs)
                raise TransportException(degree, ours, theirs, ('complex', 'subdivision'))
            solve_one = solver(matrix)
            self._solvers[degree] = solve_one
        return solve_one(sd_coordinates)


def _require_closed(complex_: SimplicialComplex):
    if not is_pseudomanifold(complex_).is_closed:
        raise NotPseudomanifoldException("Dual-block maps need a closed pseudomanifold")


def block_image(context: IhContext, degree: int, cochains: Sequence[Chain]) -> Gf2Matrix:
    """Classes of the dual-block chains D(c) of the given cochains, in the basis of the groups of K"""
    n = context.complex.dimension
    columns = []
    for cochain in cochains:
        chain = context.blocks.block_chain(n - degree, cochain.bits)
        verdict = ic_allowable(context.subdivision.complex, context.sd_strat, context.perversity, chain)
        if not verdict:
            raise NotAllowableException(
                f"Dual block chain in degree {degree} is not allowable: "
                f"{[list(face) for face, _ in verdict.violations[:3]]}"
            )
        columns.append(context.to_base(degree, context.ih_sd.coordinates(degree, chain)))
    return Gf2Matrix.from_columns(context.ih.group(degree).betti, columns)


def cap_map(complex_: SimplicialComplex, strat: Stratification, perversity: Perversity, degree: int,
            context: Optional[IhContext] = None) -> Gf2Matrix:
    """
    Matrix of H^{n-i} -> IH_i sending a cocycle to its dual-block chain

    Raises NotAllowableException when a cohomology representative gives a
    non-allowable block chain.
    """
    _require_closed(complex_)
    context = context or IhContext(complex_, strat, perversity)
    classes = cohomology(complex_).representatives(complex_.dimension - degree)
    return block_image(context, degree, classes)
