"""
Intersection Pairing Module
Dual-block representatives, the crossing-count pairing between simplicial and
dual-block classes, and the Poincare/Lefschetz duality homomorphisms
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Tuple

import numpy as np
import structlog

from modules import app
from modules.exceptions.duality import RepresentativeInstabilityException, TransportException
from modules.exceptions.topology import NotPseudomanifoldException
from modules.homology.ih import IhContext, allowable_complex, block_image, cohomology
from modules.models.complex import Chain, SimplicialComplex, is_pseudomanifold
from modules.models.strata import GM0, Perversity, Stratification, allowable_mask
from modules.utils.gf2 import (
    Gf2Matrix, inverse, iter_bits, nullspace_basis, pivot_columns, popcount, rank, solve
)

log = structlog.get_logger(__name__)


@dataclass(frozen=True)
class DualBlockGroup:
    """Block cycles of K' whose classes form a basis of their image in the groups of K'"""

    degree: int
    representatives: Tuple[Chain, ...]
    cochains: Tuple[int, ...]
    image: Gf2Matrix = field(repr=False)

    @property
    def betti(self) -> int:
        return len(self.representatives)


@dataclass(frozen=True)
class DualBlockResult:
    host: SimplicialComplex
    relative: bool
    groups: Tuple[DualBlockGroup, ...]

    @property
    def betti(self) -> Tuple[int, ...]:
        return tuple(group.betti for group in self.groups)

    def group(self, degree: int) -> DualBlockGroup:
        return self.groups[degree]

    def to_dict(self):
        return {'kind': 'dual_block', 'relative': self.relative, 'betti': list(self.betti)}


class PairingContext(IhContext):
    """IhContext plus the dual-block data of the same stratified complex"""

    @cached_property
    def chains(self):
        return allowable_complex(self.complex, self.strat, self.perversity)

    @cached_property
    def good_masks(self) -> Tuple[int, ...]:
        """Packed simplices sigma of K whose block D(sigma) is allowable in K'"""
        host = self.subdivision.complex
        n = self.complex.dimension
        masks = []
        for degree in range(n + 1):
            allowed = allowable_mask(self.sd_strat, self.perversity, n - degree)
            good = 0
            for k, block in enumerate(self.blocks.blocks[degree]):
                if not block & ~allowed:
                    good |= 1 << k
            masks.append(good)
        log.debug("pairing.good_blocks", counts=[popcount(m) for m in masks], host=host.counts())
        return tuple(masks)

    def block_cycle_space(self, degree: int) -> List[int]:
        """
        Cochains on good (n - degree)-simplices whose block chain is an allowable
        cycle of K' (relative to the subdivided subcomplex when there is one)
        """
        n = self.complex.dimension
        host = self.subdivision.complex
        d = n - degree
        good = list(iter_bits(self.good_masks[d]))
        if degree == 0:
            return [1 << k for k in good]
        rows = host.count(degree - 1)
        keep = self.sd_chain_masks[degree - 1]
        forbidden = ~allowable_mask(self.sd_strat, self.perversity, degree - 1) & ((1 << rows) - 1)
        columns = []
        for k in good:
            boundary = host.boundary_bits(degree, self.blocks.blocks[d][k])
            columns.append((boundary & keep) | ((boundary & forbidden) << rows))
        out = []
        for combination in nullspace_basis(Gf2Matrix.from_columns(2 * rows, columns)):
            cochain = 0
            for j in iter_bits(combination):
                cochain ^= 1 << good[j]
            out.append(cochain)
        return out

    def gauge_space(self, degree: int) -> List[int]:
        """
        Cochains f on good (n - degree - 1)-simplices with D(f) allowable, coboundary on good simplices,
        so that c + coboundary(f) represents the same class as c
        """
        n = self.complex.dimension
        d = n - degree - 1
        if d < 0:
            return []
        host = self.subdivision.complex
        good = list(iter_bits(self.good_masks[d]))
        top = self.complex.count(d + 1)
        rows = host.count(degree)
        forbidden_cofaces = ~self.good_masks[d + 1] & ((1 << top) - 1)
        forbidden = ~allowable_mask(self.sd_strat, self.perversity, degree) & ((1 << rows) - 1)
        columns = []
        for k in good:
            coboundary = self.complex.coboundary_bits(d, 1 << k)
            boundary = host.boundary_bits(degree + 1, self.blocks.blocks[d][k])
            columns.append((coboundary & forbidden_cofaces) | ((boundary & forbidden) << top))
        out = []
        for combination in nullspace_basis(Gf2Matrix.from_columns(top + rows, columns)):
            cochain = 0
            for j in iter_bits(combination):
                cochain ^= 1 << good[j]
            out.append(cochain)
        return out

    @cached_property
    def block_cycles(self) -> Tuple[Tuple[List[int], Gf2Matrix], ...]:
        """Per degree: the block cycle cochains and their coordinates in the groups of K'"""
        n = self.complex.dimension
        out = []
        for degree in range(n + 1):
            cochains = self.block_cycle_space(degree)
            chains = [self.blocks.block_chain(n - degree, cochain) for cochain in cochains]
            found = Gf2Matrix.from_columns(
                self.ih_sd.group(degree).betti, (self.ih_sd.coordinates(degree, chain) for chain in chains)
            )
            out.append((cochains, found))
        return tuple(out)

    def bounding_block_cycles(self, degree: int) -> List[int]:
        """Block cycle cochains b whose block chain is null in the groups of K', so c + b represents the class of c"""
        cochains, found = self.block_cycles[degree]
        out = []
        for combination in nullspace_basis(found):
            cochain = 0
            for j in iter_bits(combination):
                cochain ^= cochains[j]
            out.append(cochain)
        return out

    @cached_property
    def dual(self) -> DualBlockResult:
        n = self.complex.dimension
        groups = []
        for degree in range(n + 1):
            cochains, found = self.block_cycles[degree]
            chains = [self.blocks.block_chain(n - degree, cochain) for cochain in cochains]
            independent = pivot_columns(found)
            representatives = [chains[k] for k in independent]
            chosen = [cochains[k] for k in independent]
            image = found.restrict_columns(independent)
            groups.append(DualBlockGroup(degree, tuple(representatives), tuple(chosen), image))
        result = DualBlockResult(self.subdivision.complex, self.sub is not None, tuple(groups))
        log.debug("pairing.dual_blocks", betti=result.betti, relative=result.relative)
        return result


def _pseudomanifold_check(complex_: SimplicialComplex, closed: bool):
    verdict = is_pseudomanifold(complex_)
    if not verdict.is_pseudomanifold or (closed and not verdict.is_closed):
        raise NotPseudomanifoldException(
            "Pairing needs a closed pseudomanifold" if closed else "Pairing needs a pseudomanifold"
        )


def dual_block_ih(complex_: SimplicialComplex, strat: Stratification, perversity: Perversity = GM0,
                  sub: Optional[SimplicialComplex] = None,
                  context: Optional[PairingContext] = None) -> DualBlockResult:
    """
    Classes represented by allowable dual-block cycles

    The groups are the images of the block cycles in the groups of K'
    (carrier stratification), relative to sd(L) when a subcomplex is given.
    """
    _pseudomanifold_check(complex_, closed=sub is None)
    context = context or PairingContext(complex_, strat, perversity, sub)
    return context.dual


def transport(complex_: SimplicialComplex, strat: Stratification, perversity: Perversity, degree: int,
              context: Optional[PairingContext] = None) -> Gf2Matrix:
    """
    Change of basis from dual-block classes to simplicial classes

    Columns are the dual-block representatives expressed in the basis of the
    simplicial representatives, both compared inside K'.
    """
    context = context or PairingContext(complex_, strat, perversity)
    ours = context.ih.group(degree).betti
    theirs = context.dual.group(degree).betti
    if ours != theirs:
        log.warning("pairing.transport_mismatch", degree=degree, simplicial=ours, dual=theirs)
        raise TransportException(degree, ours, theirs)
    subdivided = context.subdivided_classes(degree)
    if rank(subdivided) != ours:
        raise TransportException(degree, ours, rank(subdivided), ('complex', 'subdivision'))
    return solve(subdivided, context.dual.group(degree).image)


@dataclass(frozen=True)
class PairingMatrix:
    """Pairing matrix over the simplicial bases of IH_i (rows) and IH_j (columns)"""

    degrees: Tuple[int, int]
    matrix: Gf2Matrix
    trials: int = 0
    seed: int = 0
    relative: bool = False

    @property
    def nonsingular(self) -> bool:
        return is_nonsingular(self.matrix)

    def to_dict(self):
        return {
            'degrees': list(self.degrees),
            'relative': self.relative,
            'shape': list(self.matrix.shape),
            'matrix': self.matrix.to_lists(),
            'nonsingular': self.nonsingular,
            'trials_passed': self.trials,
            'seed': self.seed,
        }


def crossing_count(chain: Chain, cochain: int) -> int:
    """Parity of the barycentres shared by a simplicial chain and a dual-block chain"""
    return popcount(chain.bits & cochain) & 1


def _crossings(chains, cochains, rows) -> Gf2Matrix:
    return Gf2Matrix.from_columns(rows, (
        sum(crossing_count(chain, cochain) << a for a, chain in enumerate(chains))
        for cochain in cochains
    ))


def _random_combination(rng, basis) -> int:
    if not basis:
        return 0
    picks = rng.integers(0, 2, size=len(basis))
    out = 0
    for pick, vector in zip(picks, basis):
        if pick:
            out ^= vector
    return out


def _pairing(absolute: PairingContext, dual_side: PairingContext, degree: int, seed: Optional[int],
             trials: Optional[int], relative: bool) -> PairingMatrix:
    n = absolute.complex.dimension
    other = n - degree
    seed = app.settings.default_seed if seed is None else seed
    trials = app.settings.default_trials if trials is None else trials

    simplicial = absolute.ih.representatives(degree)
    dual = dual_side.dual.group(other)
    change = transport(dual_side.complex, dual_side.strat, dual_side.perversity, other, context=dual_side)
    base = _crossings(simplicial, dual.cochains, len(simplicial))
    matrix = base @ inverse(change)

    rng = np.random.default_rng(seed)
    boundaries = absolute.chains.bases[degree + 1] if degree < n else ()
    gauges = dual_side.gauge_space(other)
    bounding = dual_side.bounding_block_cycles(other) if not relative else []
    for trial in range(1, trials + 1):
        moved = [Chain(degree, a.bits ^ absolute.complex.boundary_bits(degree + 1, _random_combination(rng, boundaries)))
                 for a in simplicial]
        cochains = [
            c ^ _random_combination(rng, bounding) ^
            (dual_side.complex.coboundary_bits(n - other - 1, _random_combination(rng, gauges)) if gauges else 0)
            for c in dual.cochains
        ]
        if _crossings(moved, cochains, len(simplicial)) != base:
            log.error("pairing.unstable", degrees=(degree, other), trial=trial, seed=seed)
            raise RepresentativeInstabilityException((degree, other), trial)

    log.info("pairing.computed", degrees=(degree, other), relative=relative,
             rank=rank(matrix), shape=matrix.shape, trials=trials)
    return PairingMatrix((degree, other), matrix, trials, seed, relative)


def pairing_matrix(complex_: SimplicialComplex, strat: Stratification, perversity: Perversity, degree: int,
                   seed: Optional[int] = None, trials: Optional[int] = None,
                   context: Optional[PairingContext] = None) -> PairingMatrix:
    """
    Intersection pairing IH_i x IH_{n-i} -> Z/2 of a closed pseudomanifold

    Args:
        degree (int): i; the second group has degree n - i
        seed (int): seed of the re-representation trials (defaults to DEFAULT_SEED)
        trials (int): number of trials (defaults to DEFAULT_TRIALS)

    Returns:
        PairingMatrix
    """
    _pseudomanifold_check(complex_, closed=True)
    context = context or PairingContext(complex_, strat, perversity)
    return _pairing(context, context, degree, seed, trials, relative=False)


def pairing_matrix_pair(complex_: SimplicialComplex, base: SimplicialComplex, strat: Stratification,
                        perversity: Perversity, degree: int, seed: Optional[int] = None,
                        trials: Optional[int] = None, absolute: Optional[PairingContext] = None,
                        relative: Optional[PairingContext] = None) -> PairingMatrix:
    """Pairing of absolute classes of K (simplicial) against classes of (K, L) (dual blocks)"""
    _pseudomanifold_check(complex_, closed=False)
    absolute = absolute or PairingContext(complex_, strat, perversity)
    relative = relative or PairingContext(complex_, strat, perversity, base)
    return _pairing(absolute, relative, degree, seed, trials, relative=True)


def duality_map(pairing) -> Gf2Matrix:
    """Psi: first group -> dual of the second, as the transpose of the pairing matrix"""
    matrix = pairing.matrix if isinstance(pairing, PairingMatrix) else pairing
    return matrix.transpose()


def is_nonsingular(pairing) -> bool:
    matrix = pairing.matrix if isinstance(pairing, PairingMatrix) else pairing
    return matrix.rows == matrix.cols and rank(matrix) == matrix.rows


def pd_hom(complex_: SimplicialComplex, degree: int, context: Optional[IhContext] = None) -> Gf2Matrix:
    """Poincare duality H^{n-i}(K) -> H_i(K) through dual blocks"""
    _pseudomanifold_check(complex_, closed=True)
    context = context or IhContext(complex_, Stratification.trivial(complex_))
    classes = cohomology(complex_).representatives(complex_.dimension - degree)
    return block_image(context, degree, classes)


def pd_hom_pair(complex_: SimplicialComplex, sub: SimplicialComplex, degree: int,
                context: Optional[IhContext] = None) -> Gf2Matrix:
    """Lefschetz duality H^{m-i}(K) -> H_i(K, L) for a pseudomanifold whose boundary lies in L"""
    _pseudomanifold_check(complex_, closed=False)
    context = context or IhContext(complex_, Stratification.trivial(complex_), GM0, sub)
    classes = cohomology(complex_).representatives(complex_.dimension - degree)
    return block_image(context, degree, classes)

