"""
Run Report Module
The result of one CLI invocation, its marshmallow schema and its two renderings:
canonical JSON (stdout, byte-stable for a fixed seed) and a text summary
"""

import hashlib
import json
from dataclasses import dataclass, field
from datetime import timedelta
from enum import Enum
from typing import List, Optional

import humanize
from marshmallow import EXCLUDE, Schema, fields, post_load


class Verdict(str, Enum):
    PASS = 'pass'
    FAIL = 'fail'
    NOT_APPLICABLE = 'not-applicable'


def digest(text: str) -> str:
    return 'sha256:' + hashlib.sha256(text.encode('utf-8')).hexdigest()


@dataclass
class Source:
    kind: str
    name: str
    digest: str


@dataclass
class ComplexSummary:
    dimension: int
    counts: List[int]
    euler: int
    strata: List[str] = field(default_factory=list)


@dataclass
class BettiTable:
    kind: str
    betti: List[int]
    euler: int
    perversity: Optional[str] = None


@dataclass
class MapEntry:
    name: str
    degree: int
    rank: int
    matrix: List[List[int]]


@dataclass
class PairingEntry:
    degrees: List[int]
    relative: bool
    matrix: List[List[int]]
    nonsingular: bool
    trials: int
    seed: int


@dataclass
class SequenceEntry:
    name: str
    labels: List[str]
    dimensions: List[int]
    ranks: List[int]
    exact: bool
    failures: List[str] = field(default_factory=list)


@dataclass
class Check:
    name: str
    verdict: Verdict
    detail: str = ''


@dataclass
class ObstructionSection:
    k: int
    i_euler: int
    parity: str
    duality: str
    failing_verticals: List[str]
    middle_betti: int
    dim_ker_alpha: int
    exact: bool
    commutes: bool
    lagrangian: Optional[bool]
    all_vertex_links_even: bool


@dataclass
class ModelSummary:
    name: str
    dimension: int
    counts: List[int]
    provenance: str
    tags: List[str]


@dataclass
class RunReport:
    schema: str
    command: str
    argv: List[str]
    source: Optional[Source] = None
    perversity: Optional[str] = None
    seed: Optional[int] = None
    trials: Optional[int] = None
    complex: Optional[ComplexSummary] = None
    tables: List[BettiTable] = field(default_factory=list)
    maps: List[MapEntry] = field(default_factory=list)
    pairings: List[PairingEntry] = field(default_factory=list)
    sequences: List[SequenceEntry] = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)
    obstruction: Optional[ObstructionSection] = None
    models: List[ModelSummary] = field(default_factory=list)
    timing: Optional[float] = None

    @property
    def verdict(self) -> Verdict:
        verdicts = {check.verdict for check in self.checks}
        if Verdict.FAIL in verdicts:
            return Verdict.FAIL
        if Verdict.PASS in verdicts:
            return Verdict.PASS
        return Verdict.NOT_APPLICABLE

    def add_check(self, name: str, passed: Optional[bool], detail: str = ''):
        """passed=None records a not-applicable check"""
        if passed is None:
            verdict = Verdict.NOT_APPLICABLE
        else:
            verdict = Verdict.PASS if passed else Verdict.FAIL
        self.checks.append(Check(name, verdict, detail))


class _Loading(Schema):
    __model__ = None

    @post_load
    def make(self, data, **kwargs):
        return self.__model__(**data)


class SourceSchema(_Loading):
    __model__ = Source
    kind = fields.String(required=True)
    name = fields.String(required=True)
    digest = fields.String(required=True)


class ComplexSummarySchema(_Loading):
    __model__ = ComplexSummary
    dimension = fields.Integer(required=True)
    counts = fields.List(fields.Integer(), required=True)
    euler = fields.Integer(required=True)
    strata = fields.List(fields.String())


class BettiTableSchema(_Loading):
    __model__ = BettiTable
    kind = fields.String(required=True)
    betti = fields.List(fields.Integer(), required=True)
    euler = fields.Integer(required=True)
    perversity = fields.String(allow_none=True)


class MapEntrySchema(_Loading):
    __model__ = MapEntry
    name = fields.String(required=True)
    degree = fields.Integer(required=True)
    rank = fields.Integer(required=True)
    matrix = fields.List(fields.List(fields.Integer()), required=True)


class PairingEntrySchema(_Loading):
    __model__ = PairingEntry
    degrees = fields.List(fields.Integer(), required=True)
    relative = fields.Boolean(required=True)
    matrix = fields.List(fields.List(fields.Integer()), required=True)
    nonsingular = fields.Boolean(required=True)
    trials = fields.Integer(required=True)
    seed = fields.Integer(required=True)


class SequenceEntrySchema(_Loading):
    __model__ = SequenceEntry
    name = fields.String(required=True)
    labels = fields.List(fields.String(), required=True)
    dimensions = fields.List(fields.Integer(), required=True)
    ranks = fields.List(fields.Integer(), required=True)
    exact = fields.Boolean(required=True)
    failures = fields.List(fields.String())


class CheckSchema(_Loading):
    __model__ = Check
    name = fields.String(required=True)
    verdict = fields.Enum(Verdict, by_value=True, required=True)
    detail = fields.String()


class ObstructionSectionSchema(_Loading):
    __model__ = ObstructionSection
    k = fields.Integer(required=True)
    i_euler = fields.Integer(required=True)
    parity = fields.String(required=True)
    duality = fields.String(required=True)
    failing_verticals = fields.List(fields.String(), required=True)
    middle_betti = fields.Integer(required=True)
    dim_ker_alpha = fields.Integer(required=True)
    exact = fields.Boolean(required=True)
    commutes = fields.Boolean(required=True)
    lagrangian = fields.Boolean(allow_none=True)
    all_vertex_links_even = fields.Boolean(required=True)


class ModelSummarySchema(_Loading):
    __model__ = ModelSummary
    name = fields.String(required=True)
    dimension = fields.Integer(required=True)
    counts = fields.List(fields.Integer(), required=True)
    provenance = fields.String(required=True)
    tags = fields.List(fields.String(), required=True)


class RunReportSchema(_Loading):
    class Meta:
        unknown = EXCLUDE

    __model__ = RunReport
    schema = fields.String(required=True)
    command = fields.String(required=True)
    argv = fields.List(fields.String(), required=True)
    source = fields.Nested(SourceSchema, allow_none=True)
    perversity = fields.String(allow_none=True)
    seed = fields.Integer(allow_none=True)
    trials = fields.Integer(allow_none=True)
    complex = fields.Nested(ComplexSummarySchema, allow_none=True)
    tables = fields.List(fields.Nested(BettiTableSchema))
    maps = fields.List(fields.Nested(MapEntrySchema))
    pairings = fields.List(fields.Nested(PairingEntrySchema))
    sequences = fields.List(fields.Nested(SequenceEntrySchema))
    checks = fields.List(fields.Nested(CheckSchema))
    obstruction = fields.Nested(ObstructionSectionSchema, allow_none=True)
    models = fields.List(fields.Nested(ModelSummarySchema))
    timing = fields.Float(allow_none=True)
    verdict = fields.Function(lambda report: report.verdict.value, dump_only=True)

    @post_load
    def make(self, data, **kwargs):
        data.pop('verdict', None)
        return RunReport(**data)


def to_json(report: RunReport, with_timing: bool = False) -> str:
    data = RunReportSchema().dump(report)
    if not with_timing:
        data.pop('timing', None)
    return json.dumps(data, sort_keys=True, indent=2) + '\n'


def from_json(text: str) -> RunReport:
    return RunReportSchema().load(json.loads(text))


def _betti(values) -> str:
    return '(' + ', '.join(str(v) for v in values) + ')'


def render_text(report: RunReport) -> str:
    """Human-readable report"""
    lines = [f"{report.command}: {report.verdict.value}"]
    if report.source:
        lines.append(f"  input      {report.source.kind} {report.source.name} ({report.source.digest[:19]})")
    if report.complex:
        summary = report.complex
        lines.append(f"  complex    dim {summary.dimension}, simplices {_betti(summary.counts)}, chi {summary.euler}")
        if summary.strata:
            lines.append(f"  strata     {', '.join(summary.strata)}")
    for model in report.models:
        lines.append(f"  {model.name:<18} dim {model.dimension}  {_betti(model.counts):<22} {model.provenance}")
    for table in report.tables:
        label = table.kind if not table.perversity else f"{table.kind} [{table.perversity}]"
        lines.append(f"  {label:<24} betti {_betti(table.betti)}  euler {table.euler}")
    for entry in report.maps:
        lines.append(f"  {entry.name}_{entry.degree:<14} rank {entry.rank}")
    for pairing in report.pairings:
        kind = 'relative ' if pairing.relative else ''
        state = 'nonsingular' if pairing.nonsingular else 'singular'
        lines.append(f"  {kind}pairing {tuple(pairing.degrees)}: {state}, {pairing.trials} trials agree")
        if not pairing.matrix or not pairing.matrix[0]:
            lines.append("      (empty)")
        else:
            lines.extend(f"      {' '.join(str(x) for x in row)}" for row in pairing.matrix)
    for sequence in report.sequences:
        state = 'exact' if sequence.exact else f"not exact at {', '.join(sequence.failures)}"
        lines.append(f"  {sequence.name}: {state}")
        lines.extend(f"      {label:<12} {dim}" for label, dim in zip(sequence.labels, sequence.dimensions))
    if report.obstruction:
        o = report.obstruction
        lines.append(f"  IH euler characteristic {o.i_euler} ({o.parity}); duality {o.duality}")
        lines.extend(f"      failing vertical {label}" for label in o.failing_verticals)
    for check in report.checks:
        detail = f"  {check.detail}" if check.detail else ''
        lines.append(f"  [{check.verdict.value}] {check.name}{detail}")
    if report.timing is not None:
        lines.append(f"  took {humanize.precisedelta(timedelta(seconds=report.timing), minimum_unit='milliseconds')}")
    return '\n'.join(lines) + '\n'
