import math

import numpy as np
import pytest
from pydantic import ValidationError

from tpeqw.bands import (
    CB_UP,
    LH_DOWN,
    LH_UP,
    PRESETS,
    Band,
    BandEdgeState,
    CircularPolarization,
    MaterialParams,
    PolarizationGeometry,
    TransitionPath,
    allowed_two_photon,
    get_preset,
    mprime,
    mprime_bracket,
    spin_channels,
    surviving_paths,
)
from tpeqw.errors import DomainError, ResonanceError

GAAS = get_preset('GaAs-14band-calibrated')
SIGMA_PLUS = CircularPolarization.SIGMA_PLUS
SIGMA_MINUS = CircularPolarization.SIGMA_MINUS


def material(**changes) -> MaterialParams:
    return MaterialParams(**{**GAAS.dict(), **changes})


def test_preset_registry():
    assert 'GaAs-14band-calibrated' in PRESETS
    assert GAAS.e_gap == 1.55
    try:
        get_preset('InP')
    except Exception as e:
        assert isinstance(e, KeyError)
        assert 'InP' in str(e)


def test_splitting_must_stay_below_e_c():
    with pytest.raises(ValidationError):
        material(delta_c=3.5)


def test_unknown_field_is_rejected():
    with pytest.raises(ValidationError, match='gap'):
        MaterialParams(e_gap=1.5, e_c=3.0, delta_c=0.1, p1=1.0, q=1.0, gap=2)


def test_band_edge_states_are_normalized():
    for initial, final in spin_channels():
        assert initial.norm == pytest.approx(1, abs=1e-12)
        assert final.norm == pytest.approx(1, abs=1e-12)
        assert initial.band is Band.CB
        assert final.band is Band.LH


def test_band_edge_state_validation():
    with pytest.raises(ValidationError):
        BandEdgeState(band=Band.CB, j=0.5, jz=0.5, components=((0.5, 'S,up'),))
    with pytest.raises(ValidationError):
        BandEdgeState(band=Band.LH, j=1.5, jz=1.5, components=((1.0, 'Xv'),))
    with pytest.raises(ValidationError):
        BandEdgeState(band=Band.CB, j=0.5, jz=0.25, components=((1.0, 'S,up'),))


def test_light_hole_spin_partners():
    assert LH_UP.jz == -LH_DOWN.jz
    assert CB_UP.jz == LH_UP.jz


def test_surviving_paths():
    gamma8, gamma7 = surviving_paths(GAAS)
    assert gamma8.intermediate.band is Band.HIGHER_CB_GAMMA8
    assert gamma7.intermediate.band is Band.HIGHER_CB_GAMMA7
    assert gamma8.offset == GAAS.e_c
    assert gamma7.offset == pytest.approx(GAAS.e_c - GAAS.delta_c)
    assert (gamma8.weight, gamma7.weight) == (1, -1)
    with pytest.raises(DomainError):
        surviving_paths(GAAS, initial_jz=1.5)


def test_bracket_example():
    params = material(e_c=3.0, delta_c=0.2)
    assert mprime_bracket(0.75, 0.75, params) == pytest.approx(-0.0300469, abs=1e-7)


def test_bracket_at_operating_point():
    assert mprime_bracket(0.79478, 0.75522, GAAS) == pytest.approx(-2.4985851e-2, rel=1e-4)


def test_degenerate_higher_bands_cancel():
    params = material(delta_c=0.0)
    assert mprime_bracket(0.8, 0.75, params) == 0.0
    assert mprime(0.8, 0.75, params) == 0j


def test_degeneracy_slope():
    h = 1e-6
    hw_s, hw_i = 0.8, 0.75
    base = material(delta_c=0.0)
    numeric = (mprime_bracket(hw_s, hw_i, material(delta_c=h)) - mprime_bracket(hw_s, hw_i, base)) / h
    analytic = -(1 / (base.e_c + hw_s) ** 2 + 1 / (base.e_c + hw_i) ** 2)
    assert numeric == pytest.approx(analytic, rel=1e-6)


def test_bracket_is_symmetric():
    assert mprime_bracket(0.9, 0.65, GAAS) == mprime_bracket(0.65, 0.9, GAAS)


def test_mprime_exchange_symmetry():
    rng = np.random.default_rng(29)
    for _ in range(100):
        e_c = rng.uniform(2.0, 5.0)
        params = MaterialParams(
            e_gap=rng.uniform(1.0, 2.0),
            e_c=e_c,
            delta_c=rng.uniform(0.0, 0.5),
            p1=rng.uniform(0.1, 2.0),
            q=rng.uniform(0.1, 2.0),
        )
        hw_s, hw_i = rng.uniform(0.1, 1.4, 2)
        for geom in PolarizationGeometry:
            assert mprime(hw_s, hw_i, params, geom) == mprime(hw_i, hw_s, params, geom)


def test_both_spin_channels_agree():
    assert mprime_bracket(0.9, 0.65, GAAS, initial_jz=0.5) == mprime_bracket(0.9, 0.65, GAAS, initial_jz=-0.5)


def test_mprime_is_imaginary():
    value = mprime(0.79478, 0.75522, GAAS)
    assert value.real == 0
    expected = math.sqrt(1.5) * GAAS.coupling_energy * mprime_bracket(0.79478, 0.75522, GAAS)
    assert value.imag == pytest.approx(expected, rel=1e-15)
    assert abs(value) ** 2 == pytest.approx(0.166742, rel=1e-4)


def test_geometry_ladder():
    vertical = abs(mprime(0.8, 0.75, GAAS, PolarizationGeometry.VERTICAL_CIRCULAR_PAIR)) ** 2
    in_plane = abs(mprime(0.8, 0.75, GAAS, PolarizationGeometry.IN_PLANE_ZZ)) ** 2
    mixed = abs(mprime(0.8, 0.75, GAAS, PolarizationGeometry.MIXED_IN_PLANE_VERTICAL)) ** 2
    assert in_plane / vertical == pytest.approx(16, rel=1e-12)
    assert mixed == 0


def test_nonpositive_photon_energy():
    with pytest.raises(DomainError):
        mprime_bracket(0.0, 1.55, GAAS)
    with pytest.raises(DomainError):
        mprime(-0.1, 1.65, GAAS)


def test_resonant_denominator():
    path = TransitionPath(intermediate=surviving_paths(GAAS)[0].intermediate, offset=3.0, weight=1)
    try:
        path.term(-3.0, 0.5)
    except Exception as e:
        assert isinstance(e, ResonanceError)
    else:
        raise AssertionError('resonance was not detected')


def test_path_weight_validation():
    with pytest.raises(ValidationError):
        TransitionPath(intermediate=surviving_paths(GAAS)[0].intermediate, offset=3.0, weight=2)


def test_selection_rule():
    assert allowed_two_photon(0.5, 0.5, (SIGMA_PLUS, SIGMA_MINUS))
    assert allowed_two_photon(-0.5, -0.5, (SIGMA_MINUS, SIGMA_PLUS))
    assert not allowed_two_photon(0.5, 0.5, (SIGMA_PLUS, SIGMA_PLUS))
    assert allowed_two_photon(1.5, -0.5, (SIGMA_PLUS, SIGMA_PLUS))


def test_selection_rule_domain():
    with pytest.raises(DomainError):
        allowed_two_photon(1.0, 0.5, (SIGMA_PLUS, SIGMA_MINUS))
    with pytest.raises(DomainError):
        allowed_two_photon(0.5, 0.5, (SIGMA_PLUS,))
