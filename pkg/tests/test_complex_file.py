import pytest

from modules.exceptions.topology import ComplexFileParseException, DuplicateVertexException
from modules.utils.complex_file import export_complex_file, parse_complex_file


def strata_by_simplex(complex_, strat):
    return {
        frozenset(complex_.simplex_labels(degree, k)): strat.stratum_of(degree, k)
        for degree in range(complex_.dimension + 1)
        for k in range(complex_.count(degree))
    }


def test_plain_simplices_are_in_the_top_stratum():
    complex_, strat = parse_complex_file("# a triangle\na b c\n")
    assert complex_.counts() == (3, 3, 1)
    assert strat.strata == {'top': 2}


def test_tags_are_inherited_by_faces():
    complex_, strat = parse_complex_file("a b c @s1\na b d @s1\n")
    assert complex_.counts() == (4, 5, 2)
    assert strat.strata == {'s1': 2}


def test_lowest_listed_simplex_wins():
    complex_, strat = parse_complex_file("a b c\nb c d\nb c @seam\n")
    assert strat.stratum_of(1, complex_.index(complex_.from_labels(('b', 'c')))) == 'seam'
    assert strat.stratum_of(0, complex_.vertex('a')) == 'top'
    assert strat.strata['seam'] == 1


def test_mark_directive():
    complex_, strat = parse_complex_file("a b c\n!mark a apex\n")
    assert strat.strata == {'top': 2, 'apex': 0}
    assert strat.stratum_vertices('apex') == ['a']


@pytest.mark.parametrize('text, line', [
    ("a b c\n!pin a\n", 2),
    ("a b c\n\n@s1\n", 3),
    ("a b @\n", 1),
    ("a @s1 b\n", 1),
    ("a b c\n!mark z\n", 2),
    ("# nothing here\n", 0),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(ComplexFileParseException) as info:
        parse_complex_file(text)
    assert info.value.line_number == line
    assert info.value.exit_code == 3


def test_repeated_vertex():
    with pytest.raises(DuplicateVertexException):
        parse_complex_file("a b a\n")


def test_export_restores_the_counterexample(pinched_rp2):
    text = export_complex_file(pinched_rp2.complex, pinched_rp2.stratification, header="pinched projective plane")
    assert text.startswith("# pinched projective plane\n")
    complex_, strat = parse_complex_file(text)
    assert complex_.counts() == pinched_rp2.complex.counts()
    assert sorted(strat.strata.items()) == sorted(pinched_rp2.stratification.strata.items())
    assert strata_by_simplex(complex_, strat) == strata_by_simplex(pinched_rp2.complex, pinched_rp2.stratification)


def test_export_of_an_unstratified_complex(torus):
    text = export_complex_file(torus.complex)
    assert '@' not in text
    assert len(text.splitlines()) == torus.complex.count(2)
