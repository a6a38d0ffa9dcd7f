"""
Duality Commands Module
pairing: intersection pairing matrices; les: the long exact sequence of a pair;
obstruction: the star/link parity pipeline
"""

from modules.cli.inputs import (
    add_input_flags, check_expectation, degrees_of, load_subject, perversity_of, seed_and_trials, start_report
)
from modules.homology.pairing import PairingContext, PairingMatrix, dual_block_ih, pairing_matrix
from modules.homology.sequences import ExactnessReport, check_exact, dualize, les_pair, star_obstruction_report
from modules.models.complex import cone
from modules.utils.report import (
    BettiTable, ObstructionSection, PairingEntry, RunReport, SequenceEntry
)


def _alternating(betti) -> int:
    return sum((-1) ** d * b for d, b in enumerate(betti))


def _pairing_entry(pairing: PairingMatrix) -> PairingEntry:
    return PairingEntry(
        degrees=list(pairing.degrees),
        relative=pairing.relative,
        matrix=pairing.matrix.to_lists(),
        nonsingular=pairing.nonsingular,
        trials=pairing.trials,
        seed=pairing.seed,
    )


def _sequence_entry(name: str, exactness: ExactnessReport) -> SequenceEntry:
    junctions = exactness.junctions
    return SequenceEntry(
        name=name,
        labels=[j.label for j in junctions],
        dimensions=[j.dimension for j in junctions],
        ranks=[j.image for j in junctions[1:]],
        exact=exactness.exact,
        failures=exactness.failures,
    )


def pairing_command(args, report: RunReport):
    subject = load_subject(args)
    perversity = perversity_of(args)
    seed, trials = seed_and_trials(args)
    start_report(report, subject, perversity)
    report.seed, report.trials = seed, trials
    complex_, strat = subject.complex, subject.strat

    context = PairingContext(complex_, strat, perversity)
    dual = dual_block_ih(complex_, strat, perversity, context=context)
    report.tables.append(BettiTable('dual_block', list(dual.betti), _alternating(dual.betti), perversity.name))
    if not any(perversity.values):
        check_expectation(report, subject, 'dual_block', dual.betti)
    for degree in degrees_of(args, subject):
        pairing = pairing_matrix(complex_, strat, perversity, degree, seed, trials, context=context)
        report.pairings.append(_pairing_entry(pairing))
        report.add_check(f"pairing {degree},{complex_.dimension - degree} representative independence", True,
                         f"{pairing.trials} trials agree")


def les_command(args, report: RunReport):
    """Runs on the bundled pair, or on (cone, base) for a space without one"""
    subject = load_subject(args)
    perversity = perversity_of(args)
    start_report(report, subject, perversity)
    complex_, strat, sub = subject.complex, subject.strat, subject.sub
    if sub is None:
        complex_, strat = cone(subject.complex, subject.strat)
        sub = subject.complex

    sequence = les_pair(complex_, sub, strat, perversity)
    exactness = check_exact(sequence)
    dual_exactness = check_exact(dualize(sequence))
    report.sequences.append(_sequence_entry('les', exactness))
    report.sequences.append(_sequence_entry('les_dual', dual_exactness))
    report.add_check("exact at every junction", exactness.exact, ', '.join(exactness.failures))
    report.add_check("dual sequence exact", dual_exactness.exact, ', '.join(dual_exactness.failures))


def obstruction_command(args, report: RunReport):
    """The input space is the link; its closed cone is the star"""
    subject = load_subject(args)
    perversity = perversity_of(args)
    seed, trials = seed_and_trials(args)
    start_report(report, subject, perversity)
    report.seed, report.trials = seed, trials

    result = star_obstruction_report(subject.complex, subject.strat, perversity, seed, trials)
    parity, split = result.parity, result.split
    lagrangian = split.lagrangian if split.applicable and parity.duality == 'holds' else None
    report.tables.extend([
        BettiTable('link_ih', list(result.link_betti), result.i_euler, perversity.name),
        BettiTable('star_ih', list(result.star_betti), _alternating(result.star_betti), perversity.name),
        BettiTable('star_ih_relative', list(result.pair_betti), _alternating(result.pair_betti), perversity.name),
    ])
    report.pairings.extend(_pairing_entry(p) for p in result.pairings)
    report.sequences.append(_sequence_entry('les', result.exactness))
    census = result.link_euler_census
    report.obstruction = ObstructionSection(
        k=parity.k,
        i_euler=parity.i_euler,
        parity=parity.parity,
        duality=parity.duality,
        failing_verticals=list(parity.failing_verticals),
        middle_betti=parity.middle_betti,
        dim_ker_alpha=parity.kernel_alpha,
        exact=result.exactness.exact,
        commutes=result.commutativity.commutes,
        lagrangian=lagrangian,
        all_vertex_links_even=all(v % 2 == 0 for v in census.values()),
    )

    report.add_check("exact at every junction", result.exactness.exact, ', '.join(result.exactness.failures))
    failures = [s.label for s in result.commutativity.squares if not s.commutes]
    report.add_check("ladder commutes", result.commutativity.commutes, ', '.join(failures))
    report.add_check("parity cross-check", parity.i_euler % 2 == 0 or bool(parity.failing_verticals),
                     f"IH euler characteristic {parity.parity}, duality {parity.duality}")
    report.add_check("kernel of alpha is a lagrangian", lagrangian)
    if not any(perversity.values):
        check_expectation(report, subject, 'i_euler', result.i_euler)


def register(subparsers):
    parser = subparsers.add_parser('pairing', help="intersection pairing matrices")
    add_input_flags(parser, pairing=True)
    parser.set_defaults(handler=pairing_command)

    parser = subparsers.add_parser('les', help="long exact sequence of a pair with exactness verdicts")
    add_input_flags(parser)
    parser.set_defaults(handler=les_command)

    parser = subparsers.add_parser('obstruction', help="star/link duality obstruction report")
    add_input_flags(parser, pairing=True)
    parser.set_defaults(handler=obstruction_command)
