"""
Exact Sequences Module
The long exact sequence of a (star, link) pair, its dual, the ladder of
pairing-induced verticals and the parity obstruction built on top of them
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import structlog

from modules.exceptions.duality import (
    MisCenteredLadderException, ParityContradictionException, SequenceShapeException
)
from modules.exceptions.general_exceptions import EngineException
from modules.homology.ih import ih_groups, ih_groups_relative
from modules.homology.pairing import (
    PairingContext, PairingMatrix, duality_map, is_nonsingular, pairing_matrix, pairing_matrix_pair
)
from modules.models.complex import SimplicialComplex, cone, embedding, link_euler_census
from modules.models.strata import GM0, Perversity, Stratification
from modules.utils.gf2 import Gf2Matrix, nullspace_basis, popcount, rank

log = structlog.get_logger(__name__)


@dataclass(frozen=True)
class Space:
    label: str
    dimension: int


@dataclass(frozen=True)
class ExactSequence:
    """
    spaces[0] -> spaces[1] -> ... with maps[k]: spaces[k] -> spaces[k+1]

    Spaces past both ends are zero.
    """

    spaces: Tuple[Space, ...]
    maps: Tuple[Gf2Matrix, ...]

    def __post_init__(self):
        if len(self.maps) != max(len(self.spaces) - 1, 0):
            raise SequenceShapeException(f"{len(self.spaces)} spaces need {len(self.spaces) - 1} maps")
        for k, matrix in enumerate(self.maps):
            expected = (self.spaces[k + 1].dimension, self.spaces[k].dimension)
            if matrix.shape != expected:
                raise SequenceShapeException(
                    f"Map {self.spaces[k].label} -> {self.spaces[k + 1].label} has shape {matrix.shape}, "
                    f"expected {expected}"
                )

    def __len__(self):
        return len(self.spaces)

    def position(self, label: str) -> int:
        for k, space in enumerate(self.spaces):
            if space.label == label:
                return k
        raise SequenceShapeException(f"No space labelled {label}")

    def composition_failures(self) -> List[int]:
        """Positions k where maps[k] after maps[k-1] is not zero"""
        return [k for k in range(1, len(self.maps)) if not (self.maps[k] @ self.maps[k - 1]).is_zero()]

    def to_dict(self):
        return {
            'spaces': [{'label': s.label, 'dimension': s.dimension} for s in self.spaces],
            'ranks': [rank(m) for m in self.maps],
        }


@dataclass(frozen=True)
class Junction:
    position: int
    label: str
    dimension: int
    kernel: int
    image: int
    composition_zero: bool

    @property
    def exact(self) -> bool:
        return self.composition_zero and self.kernel == self.image

    def to_dict(self):
        return {
            'position': self.position,
            'label': self.label,
            'dimension': self.dimension,
            'dim_ker': self.kernel,
            'dim_im': self.image,
            'exact': self.exact,
        }


@dataclass(frozen=True)
class ExactnessReport:
    junctions: Tuple[Junction, ...]

    @property
    def exact(self) -> bool:
        return all(j.exact for j in self.junctions)

    @property
    def failures(self) -> List[str]:
        return [j.label for j in self.junctions if not j.exact]

    def to_dict(self):
        return {'exact': self.exact, 'failures': self.failures, 'junctions': [j.to_dict() for j in self.junctions]}


def _les_label(kind: str, degree: int) -> str:
    return {'L': f"IH_{degree}(L)", 'K': f"IH_{degree}(K)", 'KL': f"IH_{degree}(K,L)"}[kind]


def les_pair(complex_: SimplicialComplex, sub: SimplicialComplex, strat: Stratification,
             perversity: Perversity = GM0) -> ExactSequence:
    """
    IH_m(L) -> IH_m(K) -> IH_m(K,L) -> IH_{m-1}(L) -> ... -> IH_0(K,L)

    alpha is induced by inclusion, beta by the quotient and Delta by taking the
    boundary of a relative representative, which lands in L.
    """
    top = complex_.dimension
    inside = embedding(sub, complex_)
    on_sub = ih_groups(sub, strat.restrict(sub), perversity)
    on_complex = ih_groups(complex_, strat, perversity)
    on_pair = ih_groups_relative(complex_, sub, strat, perversity)

    spaces, maps = [], []
    for degree in range(top, -1, -1):
        spaces.extend([
            Space(_les_label('L', degree), on_sub.group(degree).betti),
            Space(_les_label('K', degree), on_complex.group(degree).betti),
            Space(_les_label('KL', degree), on_pair.group(degree).betti),
        ])
        maps.append(on_complex.coordinate_matrix(
            degree, [inside.push(rep) for rep in on_sub.representatives(degree)]))
        maps.append(on_pair.coordinate_matrix(degree, on_complex.representatives(degree)))
        if degree > 0:
            maps.append(on_sub.coordinate_matrix(
                degree - 1, [inside.pull(complex_.boundary(rep)) for rep in on_pair.representatives(degree)]))

    sequence = ExactSequence(tuple(spaces), tuple(maps))
    failures = sequence.composition_failures()
    if failures:
        raise SequenceShapeException(
            f"Consecutive maps do not compose to zero at {[sequence.spaces[k].label for k in failures]}")
    log.debug("sequences.les_built", dimensions=[s.dimension for s in spaces])
    return sequence


def check_exact(sequence: ExactSequence, bounded: bool = True) -> ExactnessReport:
    """
    Compare dim ker and dim im at every junction

    With bounded the spaces beyond both ends are zero, so the end spaces are junctions too.
    """
    junctions = []
    count = len(sequence.spaces)
    for k, space in enumerate(sequence.spaces):
        incoming = sequence.maps[k - 1] if k > 0 else None
        outgoing = sequence.maps[k] if k < count - 1 else None
        if not bounded and (incoming is None or outgoing is None):
            continue
        kernel = space.dimension - (rank(outgoing) if outgoing is not None else 0)
        image = rank(incoming) if incoming is not None else 0
        composition_zero = incoming is None or outgoing is None or (outgoing @ incoming).is_zero()
        junctions.append(Junction(k, space.label, space.dimension, kernel, image, composition_zero))
    report = ExactnessReport(tuple(junctions))
    if not report.exact:
        log.warning("sequences.not_exact", failures=report.failures)
    return report


def _dual_label(label: str) -> str:
    return label[:-1] if label.endswith('*') else label + '*'


def dualize(sequence: ExactSequence) -> ExactSequence:
    """Dual spaces in reverse order with transposed maps"""
    spaces = tuple(Space(_dual_label(s.label), s.dimension) for s in reversed(sequence.spaces))
    maps = tuple(m.transpose() for m in reversed(sequence.maps))
    return ExactSequence(spaces, maps)


Vertical = Union[PairingMatrix, Gf2Matrix, None]


@dataclass(frozen=True)
class Ladder:
    """
    top over bottom = dualize(top), with verticals[t]: top[t] -> bottom[t - shift]
    """

    top: ExactSequence
    bottom: ExactSequence
    verticals: Tuple[Optional[Gf2Matrix], ...]
    link_dimension: int
    shift: int = 1

    def vertical_label(self, t: int) -> str:
        return f"{self.top.spaces[t].label} -> {self.bottom.spaces[t - self.shift].label}"

    def to_dict(self):
        return {
            'top': self.top.to_dict(),
            'verticals': [
                None if v is None else {
                    'label': self.vertical_label(t), 'shape': list(v.shape), 'invertible': is_nonsingular(v)
                }
                for t, v in enumerate(self.verticals)
            ],
        }


def ladder(top: ExactSequence, pairings: Sequence[Vertical], link_dimension: Optional[int] = None,
           shift: int = 1) -> Ladder:
    """
    Ladder over the dual sequence whose verticals are the duality maps of the pairings

    pairings[t] belongs to top position t; PairingMatrix entries become Psi = P^T,
    bare matrices are taken as verticals already.
    """
    if len(pairings) != len(top.spaces):
        raise SequenceShapeException(f"Expected {len(top.spaces)} pairings, got {len(pairings)}")
    bottom = dualize(top)
    verticals = []
    for t, pairing in enumerate(pairings):
        if pairing is None:
            verticals.append(None)
            continue
        vertical = duality_map(pairing) if isinstance(pairing, PairingMatrix) else pairing
        target = t - shift
        if not 0 <= target < len(bottom.spaces):
            raise SequenceShapeException(f"Vertical at {top.spaces[t].label} has no target")
        expected = (bottom.spaces[target].dimension, top.spaces[t].dimension)
        if vertical.shape != expected:
            raise SequenceShapeException(
                f"Vertical {top.spaces[t].label} -> {bottom.spaces[target].label} has shape "
                f"{vertical.shape}, expected {expected}"
            )
        verticals.append(vertical)
    if link_dimension is None:
        link_dimension = (len(top.spaces) // 3) - 2
    return Ladder(top, bottom, tuple(verticals), link_dimension, shift)


@dataclass(frozen=True)
class Square:
    position: int
    label: str
    commutes: bool

    def to_dict(self):
        return {'position': self.position, 'label': self.label, 'commutes': self.commutes}


@dataclass(frozen=True)
class CommutativityReport:
    squares: Tuple[Square, ...]

    @property
    def commutes(self) -> bool:
        return all(s.commutes for s in self.squares)

    def to_dict(self):
        return {
            'commutes': self.commutes,
            'failures': [s.label for s in self.squares if not s.commutes],
            'squares': [s.to_dict() for s in self.squares],
        }


def check_commutes(frame: Ladder) -> CommutativityReport:
    """V_{t+1} f_t = g_{t-shift} V_t for every square with both verticals present"""
    squares = []
    shift = frame.shift
    for t in range(len(frame.top.maps)):
        left, right = frame.verticals[t], frame.verticals[t + 1]
        if left is None or right is None or t - shift < 0 or t - shift >= len(frame.bottom.maps):
            continue
        down_then_across = frame.bottom.maps[t - shift] @ left
        across_then_down = right @ frame.top.maps[t]
        label = f"{frame.top.spaces[t].label} -> {frame.top.spaces[t + 1].label}"
        squares.append(Square(t, label, down_then_across == across_then_down))
    report = CommutativityReport(tuple(squares))
    if not report.commutes:
        log.warning("sequences.ladder_not_commutative", failures=[s.label for s in squares if not s.commutes])
    return report


def swap(pairing: PairingMatrix) -> PairingMatrix:
    """The same pairing with its two groups exchanged"""
    return PairingMatrix(
        (pairing.degrees[1], pairing.degrees[0]), pairing.matrix.transpose(),
        pairing.trials, pairing.seed, pairing.relative,
    )


def pair_ladder(complex_: SimplicialComplex, sub: SimplicialComplex, strat: Stratification,
                perversity: Perversity = GM0, seed: Optional[int] = None,
                trials: Optional[int] = None) -> Tuple[Ladder, List[PairingMatrix]]:
    """
    les_pair of (K, L) with verticals from the pairing on L and the pairing of K against (K, L)

    Returns:
        (Ladder, pairings used)
    """
    top = complex_.dimension
    sequence = les_pair(complex_, sub, strat, perversity)
    sub_strat = strat.restrict(sub)
    sub_context = PairingContext(sub, sub_strat, perversity)
    absolute = PairingContext(complex_, strat, perversity)
    relative = PairingContext(complex_, strat, perversity, sub)

    on_sub = {d: pairing_matrix(sub, sub_strat, perversity, d, seed, trials, context=sub_context)
              for d in range(sub.dimension + 1)}
    on_pair = {d: pairing_matrix_pair(complex_, sub, strat, perversity, d, seed, trials,
                                      absolute=absolute, relative=relative)
               for d in range(top + 1)}

    pairings: List[Vertical] = []
    for degree in range(top, -1, -1):
        pairings.append(on_sub.get(degree))
        pairings.append(on_pair[degree])
        pairings.append(swap(on_pair[top - degree]))
    frame = ladder(sequence, pairings, link_dimension=sub.dimension)
    used = list(on_sub.values()) + list(on_pair.values())
    return frame, used


def _position(frame: Ladder, kind: str, degree: int) -> int:
    return frame.top.position(_les_label(kind, degree))


@dataclass(frozen=True)
class ParityVerdict:
    k: int
    middle_betti: int
    kernel_alpha: int
    i_euler: int
    failing_verticals: Tuple[str, ...]
    checked_identity: bool

    @property
    def parity(self) -> str:
        return 'even' if self.i_euler % 2 == 0 else 'odd'

    @property
    def duality(self) -> str:
        return 'fails' if self.failing_verticals else 'holds'

    @property
    def message(self) -> str:
        if self.duality == 'holds':
            return "parity obstruction vanishes: IH Euler characteristic even"
        return "duality fails; failing verticals reported"

    def to_dict(self):
        return {
            'k': self.k,
            'middle_betti': self.middle_betti,
            'dim_ker_alpha': self.kernel_alpha,
            'i_euler': self.i_euler,
            'parity': self.parity,
            'duality': self.duality,
            'failing_verticals': list(self.failing_verticals),
            'identity_checked': self.checked_identity,
            'message': self.message,
        }


def thom_parity(frame: Ladder, k: int) -> ParityVerdict:
    """
    Parity test at the middle degree k of a link of dimension 2k

    When the verticals at IH_{k+1}(K,L), IH_k(L) and IH_k(K) are invertible,
    b_k = 2 dim ker(alpha) must hold; an odd IH Euler characteristic of the link forces one of them to fail.
    """
    if frame.link_dimension != 2 * k:
        raise MisCenteredLadderException(k, frame.link_dimension)
    positions = [_position(frame, 'KL', k + 1), _position(frame, 'L', k), _position(frame, 'K', k)]
    failing = tuple(
        frame.vertical_label(t) for t in positions
        if frame.verticals[t] is None or not is_nonsingular(frame.verticals[t])
    )
    middle = _position(frame, 'L', k)
    betti = frame.top.spaces[middle].dimension
    kernel = betti - rank(frame.top.maps[middle])
    i_euler = sum((-1) ** d * frame.top.spaces[_position(frame, 'L', d)].dimension
                  for d in range(frame.link_dimension + 1))

    verdict = ParityVerdict(k, betti, kernel, i_euler, failing, checked_identity=not failing)
    if not failing and betti != 2 * kernel:
        raise ParityContradictionException(
            f"Verticals at degree {k} are invertible but b_{k} = {betti} != 2 dim ker alpha = {2 * kernel}")
    if not failing and i_euler % 2:
        raise ParityContradictionException(f"IH Euler characteristic {i_euler} is odd while every vertical is invertible")
    log.info("sequences.parity", k=k, parity=verdict.parity, duality=verdict.duality, failing=list(failing))
    return verdict


@dataclass(frozen=True)
class SplitReport:
    k: int
    middle_betti: int
    kernel_alpha: int
    applicable: bool
    isotropic: bool
    lagrangian: bool

    def to_dict(self):
        return {
            'k': self.k,
            'middle_betti': self.middle_betti,
            'dim_ker_alpha': self.kernel_alpha,
            'applicable': self.applicable,
            'isotropic': self.isotropic,
            'lagrangian': self.lagrangian,
        }


def split_check(frame: Ladder, k: int) -> SplitReport:
    """Whether ker(alpha) on IH_k(L) is a Lagrangian of the middle pairing"""
    if frame.link_dimension != 2 * k:
        raise MisCenteredLadderException(k, frame.link_dimension)
    middle = _position(frame, 'L', k)
    betti = frame.top.spaces[middle].dimension
    kernel = nullspace_basis(frame.top.maps[middle])
    vertical = frame.verticals[middle]
    if vertical is None or not is_nonsingular(vertical):
        return SplitReport(k, betti, len(kernel), False, False, False)
    form = vertical.transpose()
    isotropic = all(popcount(u & form.apply(v)) % 2 == 0 for u in kernel for v in kernel)
    return SplitReport(k, betti, len(kernel), True, isotropic, isotropic and 2 * len(kernel) == betti)


@dataclass
class ObstructionReport:
    """Everything the star/link pipeline computes for one stratified link"""

    link_counts: Tuple[int, ...]
    link_betti: Tuple[int, ...]
    link_homology_euler: int
    star_betti: Tuple[int, ...]
    pair_betti: Tuple[int, ...]
    exactness: ExactnessReport
    commutativity: CommutativityReport
    parity: ParityVerdict
    split: SplitReport
    pairings: List[PairingMatrix] = field(default_factory=list)
    link_euler_census: dict = field(default_factory=dict)

    @property
    def i_euler(self) -> int:
        return self.parity.i_euler

    def to_dict(self):
        census = sorted(set(self.link_euler_census.values()))
        return {
            'link': {
                'counts': list(self.link_counts),
                'ih_betti': list(self.link_betti),
                'i_euler': self.i_euler,
                'euler': self.link_homology_euler,
                'vertex_link_euler_values': census,
                'all_vertex_links_even': all(v % 2 == 0 for v in self.link_euler_census.values()),
            },
            'star': {'ih_betti': list(self.star_betti), 'ih_relative_betti': list(self.pair_betti)},
            'exactness': self.exactness.to_dict(),
            'commutativity': self.commutativity.to_dict(),
            'parity': self.parity.to_dict(),
            'split': self.split.to_dict(),
            'pairings': [p.to_dict() for p in self.pairings],
        }


def star_obstruction_report(link: SimplicialComplex, strat: Stratification, perversity: Perversity = GM0,
                            seed: Optional[int] = None, trials: Optional[int] = None) -> ObstructionReport:
    """
    Cone the link, build the ladder of the (star, link) pair and run every check

    Args:
        link (SimplicialComplex): closed stratified pseudomanifold of even dimension 2k
        strat (Stratification): its stratification
        perversity (Perversity): defaults to GM0
        seed (int): seed of the pairing trials
        trials (int): number of pairing trials

    Returns:
        ObstructionReport
    """
    if link.dimension % 2:
        raise MisCenteredLadderException(link.dimension // 2, link.dimension)
    k = link.dimension // 2
    stage = 'cone'
    with structlog.contextvars.bound_contextvars(pipeline='obstruction'):
        try:
            star, star_strat = cone(link, strat)
            stage = 'ladder'
            frame, pairings = pair_ladder(star, link, star_strat, perversity, seed, trials)
            stage = 'checks'
            exactness = check_exact(frame.top)
            commutativity = check_commutes(frame)
            parity = thom_parity(frame, k)
            split = split_check(frame, k)
            stage = 'census'
            census = link_euler_census(link)
            link_homology = ih_groups(link, Stratification.trivial(link))
        except EngineException as exc:
            exc.stage = stage
            log.error("sequences.obstruction_failed", stage=stage, error=str(exc))
            raise

    degrees = range(star.dimension + 1)
    report = ObstructionReport(
        link_counts=link.counts(),
        link_betti=tuple(frame.top.spaces[_position(frame, 'L', d)].dimension for d in range(link.dimension + 1)),
        link_homology_euler=link_homology.euler_characteristic,
        star_betti=tuple(frame.top.spaces[_position(frame, 'K', d)].dimension for d in degrees),
        pair_betti=tuple(frame.top.spaces[_position(frame, 'KL', d)].dimension for d in degrees),
        exactness=exactness,
        commutativity=commutativity,
        parity=parity,
        split=split,
        pairings=pairings,
        link_euler_census=census,
    )
    log.info("sequences.obstruction", i_euler=report.i_euler, parity=parity.parity, duality=parity.duality)
    return report
