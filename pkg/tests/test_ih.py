import pytest

from modules.exceptions.duality import TransportException
from modules.exceptions.topology import RegimeException
from modules.homology.ih import (
    IhContext, cap_map, cohomology, euler_char, forget_map, homology, homology_relative, i_euler_char,
    ih_groups, ih_groups_relative,
)
from modules.homology.pairing import pd_hom
from modules.models.catalogue import model, pinched_rp2_stratification, x1_candidates
from modules.models.complex import build_complex
from modules.models.strata import GM0, Perversity, Stratification, singular_stratification
from modules.utils.gf2 import rank

SMALL = [
    'sphere1', 'sphere2', 'sphere3', 'disk_pair', 'cone_of:sphere1', 'suspension_of:sphere1',
]


def brute_force_betti(complex_):
    """Count cycles and boundaries by enumerating every chain"""
    betti = []
    for degree in range(complex_.dimension + 1):
        count = complex_.count(degree)
        cycles = sum(1 for v in range(1 << count) if complex_.boundary_bits(degree, v) == 0)
        above = complex_.count(degree + 1)
        boundaries = {complex_.boundary_bits(degree + 1, w) for w in range(1 << above)}
        betti.append(cycles.bit_length() - len(boundaries).bit_length())
    return tuple(betti)


@pytest.mark.parametrize('name', SMALL)
def test_betti_numbers_match_enumeration(name):
    complex_ = model(name).complex
    assert max(complex_.counts()) <= 12
    assert homology(complex_).betti == brute_force_betti(complex_)


def test_enumeration_on_a_pair_of_triangles():
    complex_ = build_complex([('a', 'b', 'c'), ('b', 'c', 'd'), ('d', 'e')])
    assert homology(complex_).betti == brute_force_betti(complex_) == (1, 0, 0)


def test_counterexample_groups(pinched_rp2):
    ordinary = homology(pinched_rp2.complex)
    assert ordinary.betti == (1, 2, 1)
    assert ordinary.euler_characteristic == 0
    ih = ih_groups(pinched_rp2.complex, pinched_rp2.stratification)
    assert ih.betti == (1, 1, 1)
    assert ih.euler_characteristic == 1
    assert euler_char(pinched_rp2.complex) == 0
    assert i_euler_char(pinched_rp2.complex, pinched_rp2.stratification) == 1


def test_forget_map_on_the_counterexample(pinched_rp2):
    complex_, strat = pinched_rp2.complex, pinched_rp2.stratification
    ranks = [rank(forget_map(complex_, strat, GM0, degree)) for degree in range(3)]
    assert ranks == [1, 1, 1]
    assert forget_map(complex_, strat, GM0, 1).shape == (2, 1)


@pytest.mark.parametrize('name, betti', [
    ('torus', (1, 2, 1)),
    ('klein_bottle', (1, 2, 1)),
    ('rp2', (1, 1, 1)),
    ('sphere3', (1, 0, 0, 1)),
    ('nodal_sphere', (1, 1, 1)),
    ('pinched_torus', (1, 1, 1)),
    ('solid_torus_pair', (1, 1, 0, 0)),
    ('disk_pair', (1, 0, 0)),
    ('cone_of:sphere2', (1, 0, 0, 0)),
])
def test_ordinary_homology(name, betti):
    assert homology(model(name).complex).betti == betti


@pytest.mark.parametrize('name, betti', [
    ('solid_torus_pair', (0, 0, 1, 1)),
    ('disk_pair', (0, 0, 1)),
    ('cone_of:sphere2', (0, 0, 0, 1)),
])
def test_relative_homology(name, betti):
    entry = model(name)
    assert homology_relative(entry.complex, entry.subcomplex).betti == betti


@pytest.mark.parametrize('name', ['nodal_sphere', 'pinched_torus'])
def test_isolated_pinch_points(name):
    entry = model(name)
    ih = ih_groups(entry.complex, entry.stratification)
    assert ih.betti == (1, 0, 1)
    assert ih.euler_characteristic == 2
    assert homology(entry.complex).euler_characteristic == 1


@pytest.mark.parametrize('name, absolute, relative', [
    ('cone_of:pinched_rp2', (1, 1, 0, 0), (0, 0, 0, 1)),
    ('cone_of:torus', (1, 2, 0, 0), (0, 0, 0, 1)),
])
def test_cones(name, absolute, relative):
    entry = model(name)
    assert ih_groups(entry.complex, entry.stratification).betti == absolute
    assert ih_groups_relative(entry.complex, entry.subcomplex, entry.stratification).betti == relative


@pytest.mark.parametrize('name', ['torus', 'rp2', 'klein_bottle'])
def test_manifolds_have_ih_equal_to_homology(name):
    entry = model(name)
    assert ih_groups(entry.complex, entry.stratification).betti == homology(entry.complex).betti
    assert ih_groups(entry.complex, entry.stratification, Perversity.parse('list:0,1')).betti == \
        homology(entry.complex).betti


@pytest.mark.parametrize('name', ['torus', 'rp2', 'pinched_rp2'])
def test_cohomology_has_the_same_betti_numbers(name):
    complex_ = model(name).complex
    assert cohomology(complex_).betti == homology(complex_).betti


@pytest.mark.parametrize('name', ['torus', 'rp2', 'pinched_rp2'])
def test_cap_then_forget_is_poincare_duality(name):
    entry = model(name)
    complex_, strat = entry.complex, entry.stratification
    context = IhContext(complex_, strat)
    for degree in range(complex_.dimension + 1):
        composite = forget_map(complex_, strat, GM0, degree, ih=context.ih) @ \
            cap_map(complex_, strat, GM0, degree, context=context)
        assert composite == pd_hom(complex_, degree)


@pytest.mark.parametrize('name', [
    'sphere1', 'sphere2', 'sphere3', 'torus', 'rp2', 'klein_bottle', 'nodal_sphere', 'pinched_torus', 'pinched_rp2',
    'disk_pair', 'solid_torus_pair', 'cone_of:sphere1', 'cone_of:sphere2',
])
def test_subdivision_invariance(name):
    entry = model(name)
    context = IhContext(entry.complex, entry.stratification)
    assert context.ih_sd.betti == context.ih.betti
    for degree in range(entry.complex.dimension + 1):
        assert rank(context.subdivided_classes(degree)) == context.ih.group(degree).betti


@pytest.mark.parametrize('name', ['disk_pair', 'solid_torus_pair', 'cone_of:sphere2', 'cone_of:torus'])
def test_relative_subdivision_invariance(name):
    entry = model(name)
    context = IhContext(entry.complex, entry.stratification, sub=entry.subcomplex)
    carried = set(context.sd_sub.labels)
    assert context.sd_sub.labels == tuple(label for label in context.subdivision.complex.labels if label in carried)
    assert context.ih_sd.betti == context.ih.betti
    for degree in range(entry.complex.dimension + 1):
        assert rank(context.subdivided_classes(degree)) == context.ih.group(degree).betti


@pytest.mark.parametrize('name', ['torus', 'pinched_rp2', 'cone_of:sphere2'])
def test_a_complex_relative_to_itself_is_acyclic(name):
    entry = model(name)
    result = ih_groups_relative(entry.complex, entry.complex, entry.stratification)
    assert set(result.betti) == {0}


def test_x1_choice_does_not_change_ih(pinched_rp2):
    complex_ = pinched_rp2.complex
    first = x1_candidates(singular_stratification(complex_), '0')[0]
    other = next(label for label in complex_.labels if label not in ('0', first))
    strat = pinched_rp2_stratification(complex_, '0', other)
    assert ih_groups(complex_, strat).betti == (1, 1, 1)


def test_real_regime_on_the_counterexample(pinched_rp2):
    result = ih_groups(pinched_rp2.complex, pinched_rp2.stratification, regime='real')
    assert result.betti == (1, 1, 1)


def test_real_regime_refuses_codimension_one():
    complex_ = build_complex([('a', 'b', 'c'), ('a', 'b', 'd')])
    edge = complex_.index((0, 1))

    def assign(degree, k):
        if (degree, k) == (1, edge) or (degree == 0 and k in (0, 1)):
            return 'wall'
        return 'top'

    strat = Stratification.build(complex_, assign)
    assert strat.has_codimension_one()
    with pytest.raises(RegimeException):
        ih_groups(complex_, strat, regime='real')
    with pytest.raises(RegimeException):
        ih_groups(complex_, strat, regime='bogus')


def test_transport_mismatch_is_reported():
    exc = TransportException(1, 2, 1, ('complex', 'subdivision'))
    assert exc.exit_code == 5
    assert 'complex' in str(exc)


def test_group_outside_the_range_is_empty(torus):
    ih = ih_groups(torus.complex, torus.stratification)
    assert ih.group(7).betti == 0
    assert ih.representatives(-1) == ()
