import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vortex_sr.electron_states import (
    ElectronState,
    FieldConfig,
    coefficient_array,
    energy,
    field_for_beta_perp,
    kinematics,
    spin_coefficients,
)

states = st.builds(
    ElectronState,
    n=st.integers(0, 10**6),
    s=st.integers(0, 50),
    k_z=st.floats(-50.0, 50.0),
    zeta=st.sampled_from([1, -1]),
)
fields = st.builds(FieldConfig, b=st.floats(1e-8, 10.0))


def test_rest_energy():
    assert energy(ElectronState(0, 0), FieldConfig(b=0.3)) == 1.0


def test_first_level_unit_field():
    assert energy(ElectronState(1, 0), FieldConfig(b=1.0)) == pytest.approx(math.sqrt(3.0), rel=1e-15)


def test_velocity_example():
    kin = kinematics(ElectronState(10**4, 0), FieldConfig(b=1e-4))
    assert kin.beta_perp == pytest.approx(math.sqrt(2.0 / 3.0), rel=1e-14)
    assert kin.beta_par == 0.0


def test_large_level_consistency():
    cfg = FieldConfig(b=1e-6)
    st_ = ElectronState(10**6, 0)
    E = energy(st_, cfg)
    assert kinematics(st_, cfg).beta_perp == pytest.approx(2 * math.sqrt(cfg.gamma * 10**6) / E, rel=1e-15)


def test_ground_state_not_moving():
    assert kinematics(ElectronState(0, 0, 3.0), FieldConfig(b=0.5)).beta_perp == 0.0


def test_field_config_derived():
    cfg = FieldConfig(b=0.4)
    assert cfg.gamma == pytest.approx(0.2) and cfg.k0 == 1.0
    assert cfg.omega0(2.0) == pytest.approx(0.2)
    with pytest.raises(ValueError):
        FieldConfig(b=0.0)
    with pytest.raises(ValueError):
        FieldConfig(b=1.0, unit_system="cgs")
    scales = FieldConfig(b=1.0, unit_system="si").unit_scales()
    assert scales["field_T"] == pytest.approx(4.414e9, rel=1e-3)


def test_invalid_states():
    with pytest.raises(ValueError):
        ElectronState(-1, 0)
    with pytest.raises(ValueError):
        ElectronState(1, 0, zeta=0)
    assert ElectronState(2, 5).l == -3


def test_spin_coefficients_kz_zero():
    sc = spin_coefficients(ElectronState(3, 1, 0.0, 1), FieldConfig(b=0.2))
    assert sc.A_plus == sc.A_minus == 1.0
    assert sc.c[1] == 0.0 and sc.c[2] == 0.0
    assert sc.c[0] == pytest.approx(sc.B_plus / math.sqrt(2), rel=1e-15)
    assert sc.c[3] == pytest.approx(sc.B_minus / math.sqrt(2), rel=1e-15)


def test_nonrelativistic_limit():
    sc = spin_coefficients(ElectronState(1, 0, 0.0, 1), FieldConfig(b=1e-14))
    assert sc.c[0] == pytest.approx(1.0, abs=1e-6)
    assert np.allclose(sc.c[1:], 0.0, atol=1e-6)


def test_ground_level_spin_up_is_null():
    c = coefficient_array(0, 0.7, 1, 0.1)
    # c2 = c4 = 0 multiply the only nonzero radial function at n = 0
    assert c[1] == 0.0 and c[3] == 0.0


def test_spinor_factors_phase():
    sc = spin_coefficients(ElectronState(2, 0, 0.3, -1), FieldConfig(b=0.5))
    f = sc.spinor_factors
    assert f[1] == 1j * sc.c[1] and f[3] == 1j * sc.c[3]


@given(states, fields)
@settings(max_examples=1000, deadline=None)
def test_normalization_and_identities(state, cfg):
    sc = spin_coefficients(state, cfg)
    assert float(np.sum(sc.c ** 2)) == pytest.approx(1.0, abs=1e-13)
    assert sc.A_plus ** 2 + sc.A_minus ** 2 == pytest.approx(2.0, abs=1e-13)
    assert sc.B_plus ** 2 + sc.B_minus ** 2 == pytest.approx(2.0, abs=1e-13)
    assert sc.K0 ** 2 == pytest.approx(sc.K ** 2 - state.k_z ** 2, rel=1e-12)


@given(states, fields)
@settings(max_examples=300, deadline=None)
def test_velocity_identity(state, cfg):
    E = energy(state, cfg)
    kin = kinematics(state, cfg)
    assert kin.beta_perp ** 2 + kin.beta_par ** 2 == pytest.approx(1.0 - 1.0 / E ** 2, rel=1e-12, abs=1e-15)
    assert kin.beta_perp ** 2 + kin.beta_par ** 2 < 1.0


@given(st.integers(0, 10**6), st.floats(-10, 10), fields)
@settings(max_examples=200, deadline=None)
def test_energy_monotone(n, kz, cfg):
    assert energy(ElectronState(n + 1, 0, kz), cfg) > energy(ElectronState(n, 0, kz), cfg)
    assert energy(ElectronState(n, 0, abs(kz) + 1.0), cfg) > energy(ElectronState(n, 0, kz), cfg)


@given(st.integers(1, 10**5), st.floats(0.01, 0.99))
@settings(max_examples=100, deadline=None)
def test_field_for_beta_perp(n, beta):
    cfg = FieldConfig(b=field_for_beta_perp(n, beta))
    assert kinematics(ElectronState(n, 0), cfg).beta_perp == pytest.approx(beta, rel=1e-12)
