import pytest

from modules.exceptions.topology import NotPseudomanifoldException
from modules.homology.ih import ih_groups
from modules.homology.pairing import (
    PairingContext, crossing_count, dual_block_ih, duality_map, is_nonsingular, pairing_matrix, pd_hom,
    pd_hom_pair, transport,
)
from modules.models.catalogue import model
from modules.models.complex import Chain
from modules.models.strata import GM0
from modules.utils.gf2 import Gf2Matrix, is_invertible

CLOSED = ['sphere2', 'torus', 'rp2', 'klein_bottle', 'nodal_sphere', 'pinched_torus', 'pinched_rp2']


def test_crossing_count():
    assert crossing_count(Chain(1, 0b101), 0b100) == 1
    assert crossing_count(Chain(1, 0b101), 0b101) == 0
    assert crossing_count(Chain(1, 0b101), 0b010) == 0


def test_duality_map_is_the_transpose():
    matrix = Gf2Matrix.from_array([[1, 1, 0], [0, 1, 1]])
    assert duality_map(matrix) == matrix.T
    assert not is_nonsingular(matrix)
    assert is_nonsingular(Gf2Matrix.identity(2))


@pytest.mark.parametrize('name', CLOSED)
def test_dual_blocks_span_the_groups(name):
    entry = model(name)
    dual = dual_block_ih(entry.complex, entry.stratification)
    assert dual.betti == ih_groups(entry.complex, entry.stratification).betti


@pytest.mark.parametrize('name', ['torus', 'pinched_rp2'])
def test_transport_is_invertible(name):
    entry = model(name)
    context = PairingContext(entry.complex, entry.stratification)
    for degree in range(3):
        assert is_invertible(transport(entry.complex, entry.stratification, GM0, degree, context=context))


@pytest.mark.parametrize('degree', [0, 1, 2])
def test_counterexample_pairing_is_nonsingular(pinched_rp2, degree):
    pairing = pairing_matrix(pinched_rp2.complex, pinched_rp2.stratification, GM0, degree, seed=0, trials=20)
    assert pairing.degrees == (degree, 2 - degree)
    assert pairing.matrix.shape == (1, 1)
    assert pairing.nonsingular
    assert pairing.trials == 20


def test_torus_pairing_is_even_and_symmetric(torus):
    pairing = pairing_matrix(torus.complex, torus.stratification, GM0, 1)
    matrix = pairing.matrix
    assert matrix.shape == (2, 2)
    assert pairing.nonsingular
    assert matrix == matrix.T
    assert all(matrix.entry(k, k) == 0 for k in range(2))


def test_projective_plane_pairing(rp2):
    pairing = pairing_matrix(rp2.complex, rp2.stratification, GM0, 1)
    assert pairing.matrix.to_lists() == [[1]]


@pytest.mark.parametrize('name', CLOSED)
def test_pairing_is_nonsingular_on_isolated_singularities(name):
    entry = model(name)
    context = PairingContext(entry.complex, entry.stratification)
    for degree in range(entry.complex.dimension + 1):
        pairing = pairing_matrix(entry.complex, entry.stratification, GM0, degree, trials=20, context=context)
        assert pairing.nonsingular


@pytest.mark.parametrize('seed', [1, 2, 3])
def test_pairing_does_not_depend_on_the_seed(torus, seed):
    reference = pairing_matrix(torus.complex, torus.stratification, GM0, 1, seed=0)
    again = pairing_matrix(torus.complex, torus.stratification, GM0, 1, seed=seed)
    assert again.matrix == reference.matrix
    assert again.seed == seed


def test_pairing_needs_a_closed_pseudomanifold(disk):
    with pytest.raises(NotPseudomanifoldException):
        pairing_matrix(disk.complex, disk.stratification, GM0, 1)


@pytest.mark.parametrize('name', ['torus', 'rp2', 'klein_bottle', 'sphere2'])
def test_poincare_duality_on_manifolds(name):
    complex_ = model(name).complex
    for degree in range(complex_.dimension + 1):
        assert is_invertible(pd_hom(complex_, degree))


def test_lefschetz_duality_on_the_solid_torus(solid_torus):
    shapes = []
    for degree in range(4):
        matrix = pd_hom_pair(solid_torus.complex, solid_torus.subcomplex, degree)
        assert is_invertible(matrix)
        shapes.append(matrix.shape)
    assert shapes == [(0, 0), (0, 0), (1, 1), (1, 1)]


def test_pairing_report_shape(pinched_rp2):
    pairing = pairing_matrix(pinched_rp2.complex, pinched_rp2.stratification, GM0, 1, seed=7, trials=3)
    data = pairing.to_dict()
    assert data['degrees'] == [1, 1]
    assert data['matrix'] == [[1]]
    assert data['nonsingular'] is True
    assert data['seed'] == 7
    assert data['trials_passed'] == 3


@pytest.mark.parametrize('name', ['sphere2', 'torus', 'pinched_rp2'])
def test_pairing_is_symmetric_under_swapping_degrees(name):
    entry = model(name)
    context = PairingContext(entry.complex, entry.stratification)
    n = entry.complex.dimension
    for degree in range(n + 1):
        forward = pairing_matrix(entry.complex, entry.stratification, GM0, degree, trials=5, context=context)
        backward = pairing_matrix(entry.complex, entry.stratification, GM0, n - degree, trials=5, context=context)
        assert forward.matrix == backward.matrix.T


@pytest.mark.parametrize('name', ['torus', 'pinched_rp2'])
def test_bounding_block_cycles_cross_every_class_evenly(name):
    entry = model(name)
    context = PairingContext(entry.complex, entry.stratification)
    n = entry.complex.dimension
    found = 0
    for degree in range(n + 1):
        bounding = context.bounding_block_cycles(n - degree)
        found += len(bounding)
        for cochain in bounding:
            chain = context.blocks.block_chain(degree, cochain)
            assert context.ih_sd.coordinates(n - degree, chain) == 0
            for rep in context.ih.representatives(degree):
                assert crossing_count(rep, cochain) == 0
    assert found > 0
