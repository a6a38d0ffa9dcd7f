"""
CLI Inputs Module
Shared flags and the resolution of --model / --file into a stratified complex
"""

import os
from dataclasses import dataclass
from typing import List, Optional

import structlog

from modules import app
from modules.exceptions.general_exceptions import ResourceNotFoundException
from modules.models.catalogue import ModelEntry, model
from modules.models.complex import SimplicialComplex
from modules.models.strata import Perversity, Stratification
from modules.utils.complex_file import export_complex_file, parse_complex_file
from modules.utils.report import ComplexSummary, RunReport, Source, digest

log = structlog.get_logger(__name__)


@dataclass
class Subject:
    """The stratified space a command runs on"""

    complex: SimplicialComplex
    strat: Stratification
    source: Source
    sub: Optional[SimplicialComplex] = None
    entry: Optional[ModelEntry] = None

    def summary(self) -> ComplexSummary:
        return ComplexSummary(
            dimension=self.complex.dimension,
            counts=list(self.complex.counts()),
            euler=self.complex.euler_characteristic(),
            strata=sorted(self.strat.strata),
        )


def add_input_flags(parser, pairing: bool = False):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--model', help="catalogue name, or cone_of:NAME / suspension_of:NAME")
    source.add_argument('--file', help="path of a complex file")
    parser.add_argument('--perversity', default='zero', help="zero | list:p1,p2,...")
    parser.add_argument('--degree', type=int, default=None)
    if pairing:
        parser.add_argument('--seed', type=int, default=None)
        parser.add_argument('--trials', type=int, default=None)


def load_subject(args) -> Subject:
    """
    Resolve the --model or --file flag

    The digest of a model is taken over its exported complex file, so a model
    and the file exported from it share a digest.
    """
    if args.model:
        entry = model(args.model)
        text = export_complex_file(entry.complex, entry.stratification)
        return Subject(entry.complex, entry.stratification, Source('model', entry.name, digest(text)),
                       entry.subcomplex, entry)
    if not os.path.exists(args.file):
        raise ResourceNotFoundException(f"No complex file at {args.file}")
    with open(args.file, encoding='utf-8') as handle:
        text = handle.read()
    complex_, strat = parse_complex_file(text)
    log.info("cli.file_loaded", path=args.file, counts=complex_.counts())
    return Subject(complex_, strat, Source('file', args.file, digest(text)))


def perversity_of(args) -> Perversity:
    return Perversity.parse(args.perversity)


def seed_and_trials(args):
    seed = app.settings.default_seed if args.seed is None else args.seed
    trials = app.settings.default_trials if args.trials is None else args.trials
    return seed, trials


def degrees_of(args, subject: Subject) -> List[int]:
    if args.degree is not None:
        return [args.degree]
    return list(range(subject.complex.dimension + 1))


def start_report(report: RunReport, subject: Subject, perversity: Optional[Perversity] = None):
    report.source = subject.source
    report.complex = subject.summary()
    if perversity is not None:
        report.perversity = perversity.name


def check_expectation(report: RunReport, subject: Subject, key: str, actual):
    """Compare a computed value with the catalogue expectation, when the model carries one"""
    if subject.entry is None or key not in subject.entry.expected:
        return
    expected = subject.entry.expected[key]
    value = list(expected.value) if isinstance(expected.value, tuple) else expected.value
    actual = list(actual) if isinstance(actual, tuple) else actual
    report.add_check(f"expected {key}", value == actual,
                     f"expected {value} [{expected.provenance.value}], computed {actual}")
