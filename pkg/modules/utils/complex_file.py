"""
Complex File Module
Reads and writes the plain-text complex format

Grammar, one item per line:
    # comment
    a b c            a simplex given by its vertex names (top stratum)
    a b c @name      a simplex assigned to stratum `name`
    !mark v [name]   carve vertex v out as a point stratum

A simplex that is not listed inherits the stratum of the lowest-dimensional
listed simplex containing it, the first listed one on ties.
"""

from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import structlog

from modules.exceptions.topology import (
    ComplexFileParseException, DuplicateVertexException, VertexNotFoundException,
)
from modules.models.complex import SimplicialComplex, build_complex
from modules.models.strata import DEFAULT_STRATUM, Stratification, mark_point

log = structlog.get_logger(__name__)

Listed = Tuple[Tuple[str, ...], str]


def _inherited(complex_: SimplicialComplex, listed: Sequence[Listed]) -> Dict[Tuple[int, ...], str]:
    order = sorted(range(len(listed)), key=lambda k: (len(listed[k][0]), k))
    tags: Dict[Tuple[int, ...], str] = {}
    for k in order:
        labels, tag = listed[k]
        simplex = tuple(sorted(complex_.vertex(v) for v in labels))
        for size in range(1, len(simplex) + 1):
            for face in combinations(simplex, size):
                tags.setdefault(face, tag)
    return tags


def parse_complex_file(text: str) -> Tuple[SimplicialComplex, Stratification]:
    """
    Parse complex file text into a complex and its stratification

    Raises:
        ComplexFileParseException: malformed line, with its line number
        DuplicateVertexException: a simplex repeats a vertex
    """
    listed: List[Listed] = []
    marks: List[Tuple[int, str, Optional[str]]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        tokens = line.split()
        if tokens[0].startswith('!'):
            if tokens[0] != '!mark' or len(tokens) not in (2, 3):
                raise ComplexFileParseException(number, f"unknown directive '{line}'")
            marks.append((number, tokens[1], tokens[2] if len(tokens) == 3 else None))
            continue
        tag = DEFAULT_STRATUM
        if tokens[-1].startswith('@'):
            tag = tokens.pop()[1:]
            if not tag:
                raise ComplexFileParseException(number, "empty stratum name after '@'")
        if not tokens:
            raise ComplexFileParseException(number, "stratum tag without a simplex")
        for token in tokens:
            if token[0] in '@!':
                raise ComplexFileParseException(number, f"unexpected token '{token}'")
        if len(set(tokens)) != len(tokens):
            raise DuplicateVertexException(tuple(tokens), f"Simplex on line {number} repeats a vertex")
        listed.append((tuple(tokens), tag))

    if not listed:
        raise ComplexFileParseException(0, "no simplices")
    complex_ = build_complex(labels for labels, _ in listed)
    tags = _inherited(complex_, listed)
    strat = Stratification.build(complex_, lambda degree, k: tags[complex_.simplices[degree][k]])
    for number, vertex, name in marks:
        try:
            strat = mark_point(strat, vertex, name)
        except VertexNotFoundException:
            raise ComplexFileParseException(number, f"!mark names unknown vertex '{vertex}'")
    log.debug("complex_file.parsed", simplices=len(listed), counts=complex_.counts(), strata=sorted(strat.strata))
    return complex_, strat


def export_complex_file(complex_: SimplicialComplex, strat: Optional[Stratification] = None,
                        header: Optional[str] = None) -> str:
    """
    Write a complex (and stratification) so that parse_complex_file restores it

    Maximal simplices come first with their strata; lower simplices are added,
    highest dimension first, wherever the inherited stratum would be wrong.
    """
    strat = strat or Stratification.trivial(complex_)
    listed: List[Listed] = [
        (complex_.simplex_labels(d, k), strat.stratum_of(d, k)) for d, k in complex_.maximal_simplices()
    ]
    for degree in range(complex_.dimension - 1, -1, -1):
        tags = _inherited(complex_, listed)
        for k, simplex in enumerate(complex_.simplices[degree]):
            wanted = strat.stratum_of(degree, k)
            if tags.get(simplex) != wanted:
                listed.append((complex_.simplex_labels(degree, k), wanted))

    lines = []
    if header:
        lines.extend(f"# {row}" for row in header.splitlines())
    for labels, tag in listed:
        lines.append(' '.join(labels) + ('' if tag == DEFAULT_STRATUM else f" @{tag}"))
    return '\n'.join(lines) + '\n'
