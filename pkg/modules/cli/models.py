"""
Models Command Module
Lists the bundled spaces
"""

from modules.models.catalogue import CATALOGUE, model
from modules.utils.report import ModelSummary, RunReport


def models_command(args, report: RunReport):
    """Build every catalogue model (validation included) and list it"""
    for name in CATALOGUE:
        entry = model(name)
        report.models.append(ModelSummary(
            name=entry.name,
            dimension=entry.complex.dimension,
            counts=list(entry.complex.counts()),
            provenance=entry.provenance,
            tags=list(entry.tags),
        ))


def register(subparsers):
    parser = subparsers.add_parser('models', help="list the bundled spaces")
    parser.set_defaults(handler=models_command)
