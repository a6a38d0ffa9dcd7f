import pytest

from modules.exceptions.topology import DegreeOutOfRangeException, PerversityException, StratificationException
from modules.models.catalogue import model
from modules.models.complex import Chain, barycentric_subdivision, build_complex, fundamental_class
from modules.models.strata import (
    GM0, Perversity, Stratification, allowable_mask, chain_singular_set, gm_allowable, ic_allowable, mark_point,
    real_allowable, singular_stratification,
)


def star_chain(complex_, vertex, degree):
    v = complex_.vertex(vertex)
    bits = 0
    for d, k in complex_.cofaces((v,)):
        if d == degree:
            bits |= 1 << k
    return Chain(degree, bits)


def test_parse_perversities():
    assert Perversity.parse('zero') == GM0
    assert GM0.name == 'GM0'
    p = Perversity.parse('list:0,1')
    assert p.values == (0, 1)
    assert p.name == 'list:0,1'
    assert [p(c) for c in (0, 1, 2, 5)] == [0, 0, 1, 1]


@pytest.mark.parametrize('text', ['bogus', 'list:a', 'list:0,2', 'list:-1'])
def test_rejected_perversities(text):
    with pytest.raises(PerversityException):
        Perversity.parse(text)


def test_non_classical_perversity_when_validation_is_off():
    assert Perversity.parse('list:0,2', validate=False).values == (0, 2)


def test_trivial_stratification(torus):
    strat = Stratification.trivial(torus.complex)
    assert strat.strata == {'top': 2}
    assert strat.singular_strata() == []
    assert not strat.has_codimension_one()


def test_singular_stratification_of_the_pinched_surface(pinched_rp2):
    strat = singular_stratification(pinched_rp2.complex)
    assert strat.strata == {'d2_0': 2, 'd0_0': 0}
    assert strat.stratum_vertices('d0_0') == ['0']
    assert strat.codimension('d0_0') == 2


def test_three_strata_with_the_marked_point(pinched_rp2):
    strat = pinched_rp2.stratification
    assert len(strat.strata) == 3
    x1 = strat.stratum_vertices('x1')
    assert len(x1) == 1 and x1[0] != '0'
    assert strat.codimension('x1') == 2


def test_mark_point_twice(pinched_rp2):
    x1 = pinched_rp2.stratification.stratum_vertices('x1')[0]
    with pytest.raises(StratificationException):
        mark_point(pinched_rp2.stratification, x1)


def test_unknown_stratum(torus):
    with pytest.raises(StratificationException):
        Stratification.trivial(torus.complex).dimension('nowhere')


def test_frontier_violations_are_reported():
    complex_ = build_complex([('a', 'b', 'c')])
    edge = complex_.index((0, 1))
    strat = Stratification.build(complex_, lambda degree, k: 'e' if (degree, k) == (1, edge) else 'top',
                                 check_frontier=False)
    assert strat.strata == {'top': 2, 'e': 1}
    violations = strat.frontier_violations()
    assert sorted(face for _, face, _ in violations) == [('a',), ('b',)]


def test_edges_through_the_pinch_are_not_allowable(pinched_rp2):
    complex_, strat = pinched_rp2.complex, pinched_rp2.stratification
    edge = star_chain(complex_, '0', 1)
    verdict = gm_allowable(complex_, strat, GM0, edge)
    assert not verdict
    assert (('0',), 'd0_0') in verdict.violations
    assert gm_allowable(complex_, strat, GM0, star_chain(complex_, '0', 2))


def test_intersection_chains_check_the_boundary(pinched_rp2):
    complex_, strat = pinched_rp2.complex, pinched_rp2.stratification
    star = star_chain(complex_, '0', 2)
    assert ic_allowable(complex_, strat, GM0, star)
    single = Chain(2, 1 << star.support()[0])
    assert not ic_allowable(complex_, strat, GM0, single)


def test_allowable_chains_are_closed_under_addition(pinched_rp2, rng):
    complex_, strat = pinched_rp2.complex, pinched_rp2.stratification
    for degree in (1, 2):
        allowed = [k for k in range(complex_.count(degree)) if allowable_mask(strat, GM0, degree) >> k & 1]
        for _ in range(1000):
            a = sum(1 << int(k) for k in rng.choice(allowed, size=3, replace=False))
            b = sum(1 << int(k) for k in rng.choice(allowed, size=3, replace=False))
            assert gm_allowable(complex_, strat, GM0, Chain(degree, a ^ b))


def test_chain_singular_set_of_a_tripod():
    complex_ = build_complex([('c', 'x'), ('c', 'y'), ('c', 'z')])
    chain = Chain(1, 0b111)
    assert chain_singular_set(complex_, chain) == frozenset({(0,), (1,), (2,), (3,)})


def test_chain_singular_set_of_a_closed_surface(torus):
    assert chain_singular_set(torus.complex, fundamental_class(torus.complex)) == frozenset()


def test_chain_singular_set_is_limited_to_low_degrees(torus):
    with pytest.raises(DegreeOutOfRangeException):
        chain_singular_set(torus.complex, Chain(4, 1))


def test_fundamental_class_is_real_allowable(pinched_rp2):
    complex_, strat = pinched_rp2.complex, pinched_rp2.stratification
    assert real_allowable(complex_, strat, fundamental_class(complex_))
    assert not real_allowable(complex_, strat, star_chain(complex_, '0', 1))


def test_induced_stratification_keeps_the_points(pinched_rp2):
    subdivision = barycentric_subdivision(pinched_rp2.complex)
    induced = pinched_rp2.stratification.induced_by_subdivision(subdivision)
    assert induced.strata == pinched_rp2.stratification.strata
    assert induced.stratum_vertices('d0_0') == ['0']


def test_restrict_to_a_subcomplex(solid_torus):
    strat = Stratification.trivial(solid_torus.complex).restrict(solid_torus.subcomplex)
    assert strat.strata == {'top': 2}


@pytest.mark.parametrize('degree', [1, 2])
def test_real_allowable_chains_pass_the_intersection_test(pinched_rp2, rng, degree):
    complex_, strat = pinched_rp2.complex, pinched_rp2.stratification
    for _ in range(40):
        picked = rng.choice(complex_.count(degree), size=4, replace=False)
        chain = Chain(degree, sum(1 << int(k) for k in picked))
        if real_allowable(complex_, strat, chain):
            assert ic_allowable(complex_, strat, GM0, chain)
    if degree == 2:
        assert real_allowable(complex_, strat, fundamental_class(complex_))


@pytest.mark.parametrize('name', ['torus', 'nodal_sphere', 'pinched_torus', 'cone_of:sphere1'])
def test_allowability_is_closed_under_addition_across_models(name, rng):
    entry = model(name)
    complex_, strat = entry.complex, entry.stratification
    for degree in range(1, complex_.dimension + 1):
        allowed = [k for k in range(complex_.count(degree)) if allowable_mask(strat, GM0, degree) >> k & 1]
        size = min(2, len(allowed))
        for _ in range(50):
            a = sum(1 << int(k) for k in rng.choice(allowed, size=size, replace=False))
            b = sum(1 << int(k) for k in rng.choice(allowed, size=size, replace=False))
            assert gm_allowable(complex_, strat, GM0, Chain(degree, a ^ b))
