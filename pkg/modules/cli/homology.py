"""
Homology Commands Module
homology: ordinary Z/2 homology; ih: intersection homology and the forget map
"""

from modules.cli.inputs import (
    add_input_flags, check_expectation, degrees_of, load_subject, perversity_of, start_report
)
from modules.homology.ih import REGIMES, forget_map, homology, homology_relative, ih_groups, ih_groups_relative
from modules.utils.gf2 import rank
from modules.utils.report import BettiTable, MapEntry, RunReport


def _table(result, perversity=None) -> BettiTable:
    return BettiTable(result.kind, list(result.betti), result.euler_characteristic, perversity)


def homology_command(args, report: RunReport):
    subject = load_subject(args)
    start_report(report, subject)
    result = homology(subject.complex)
    report.tables.append(_table(result))
    check_expectation(report, subject, 'homology', result.betti)
    check_expectation(report, subject, 'euler', result.euler_characteristic)
    if subject.sub is not None:
        relative = homology_relative(subject.complex, subject.sub)
        report.tables.append(_table(relative))
        check_expectation(report, subject, 'homology_relative', relative.betti)


def ih_command(args, report: RunReport):
    subject = load_subject(args)
    perversity = perversity_of(args)
    start_report(report, subject, perversity)
    complex_, strat = subject.complex, subject.strat

    result = ih_groups(complex_, strat, perversity, regime=args.regime)
    ordinary = homology(complex_)
    report.tables.append(_table(result, perversity.name))
    report.tables.append(_table(ordinary))
    for degree in degrees_of(args, subject):
        matrix = forget_map(complex_, strat, perversity, degree, ih=result, ordinary=ordinary)
        report.maps.append(MapEntry('forget', degree, rank(matrix), matrix.to_lists()))

    relative = None
    if subject.sub is not None:
        relative = ih_groups_relative(complex_, subject.sub, strat, perversity)
        report.tables.append(_table(relative, perversity.name))
    if not any(perversity.values):
        check_expectation(report, subject, 'ih', result.betti)
        check_expectation(report, subject, 'i_euler', result.euler_characteristic)
        if relative is not None:
            check_expectation(report, subject, 'ih_relative', relative.betti)


def register(subparsers):
    parser = subparsers.add_parser('homology', help="ordinary Z/2 homology betti numbers")
    add_input_flags(parser)
    parser.set_defaults(handler=homology_command)

    parser = subparsers.add_parser('ih', help="intersection homology betti numbers and forget maps")
    add_input_flags(parser)
    parser.add_argument('--regime', choices=REGIMES, default='gm')
    parser.set_defaults(handler=ih_command)
