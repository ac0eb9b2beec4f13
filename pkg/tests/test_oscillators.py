"""Coupled-oscillator closed forms against a direct 3x3 linear solve."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eitsim.errors import PoleError
from eitsim.oscillators import (MechanicalSystem, ModalParams, derive_modal, detuning_convert,
                                lorentz_response, mech_denominator, mech_response,
                                susceptibility_from_response, unit_peak_drive)


def direct_x1(p, drive, w):
    """Solve (K - w^2 I - i w G) X = drive e1 for the full displacement vector."""
    K = np.array([[p.omega1_sq, -p.Omega_c_sq, -p.Omega_r_sq],
                  [-p.Omega_c_sq, p.omega2_sq, 0.0],
                  [-p.Omega_r_sq, 0.0, p.omega3_sq]])
    G = np.diag([p.gamma1, p.gamma2, p.gamma3])
    M = K - w ** 2 * np.eye(3) - 1j * w * G
    return np.linalg.solve(M, np.array([drive, 0, 0], dtype=complex))


def fig7a():
    return ModalParams.from_detunings(10.0, 3.0, 2.3, 1.0, 0.1, 1e-4)


pos = st.floats(0.1, 10.0)
modal = st.builds(
    lambda w1, w2, w3, oc, orr, g1, g2, g3: ModalParams(w1 ** 2, w2 ** 2, w3 ** 2, oc, orr, g1, g2, g3),
    pos, pos, pos, st.floats(0, 20), st.floats(0, 20), st.floats(0.01, 5), st.floats(0.001, 5),
    st.floats(0.001, 5))


class TestLorentz:
    def test_resonance_value(self):
        # (F0/m)/(-i gamma w0) = i (F0/m)/(gamma w0)
        x = lorentz_response(2.0, 0.5, 3.0, 2.0)
        assert x == pytest.approx(3j / (0.5 * 2.0), rel=1e-15)

    def test_static_limit(self):
        assert lorentz_response(2.0, 0.5, 4.0, 1e-9).real == pytest.approx(1.0, rel=1e-9)

    def test_opposite_time_convention_is_conjugate(self):
        w = np.linspace(0.5, 3, 11)
        a = lorentz_response(1.3, 0.2, 1.0, w)
        b = lorentz_response(1.3, 0.2, 1.0, w, sign=+1)
        assert np.array_equal(a, np.conj(b))

    def test_undamped_on_resonance_is_a_pole(self):
        with pytest.raises(PoleError):
            lorentz_response(1.0, 0.0, 1.0, 1.0)

    def test_rejects_bad_frequency(self):
        with pytest.raises(ValueError):
            lorentz_response(0.0, 0.1, 1.0, 1.0)

    @given(st.floats(0.1, 10), st.floats(0.01, 3), st.floats(0.05, 20))
    def test_absorption_non_negative(self, w0, g, w):
        assert lorentz_response(w0, g, 1.0, w).imag >= 0


class TestMechResponse:
    @settings(max_examples=200, deadline=None)
    @given(modal, st.floats(0.05, 12))
    def test_matches_direct_solve(self, p, w):
        x = mech_response(p, 1.7, w)
        ref = direct_x1(p, 1.7, w)[0]
        assert abs(x - ref) <= 1e-9 * abs(ref) + 1e-300

    @settings(max_examples=200, deadline=None)
    @given(modal, st.floats(0.05, 12))
    def test_passive(self, p, w):
        # Im x1 >= 0 up to rounding; |x1|^2 * gamma-weighted power is the absorbed work
        x = mech_response(p, 1.0, w)
        assert x.imag >= -1e-12 * abs(x)

    @given(modal, st.floats(0.05, 12))
    def test_absorbed_power_equals_dissipation(self, p, w):
        # work done by the drive on x1 equals the damping loss in all three oscillators
        X = direct_x1(p, 1.0, w)
        dissipated = w * np.sum(np.array([p.gamma1, p.gamma2, p.gamma3]) * np.abs(X) ** 2)
        x1 = mech_response(p, 1.0, w)
        assert x1.imag == pytest.approx(dissipated, rel=1e-8, abs=1e-300)

    def test_uncoupled_reduces_to_lorentz_exactly(self):
        p = ModalParams(4.0, 9.0, 1.0, 0.0, 0.0, 0.3, 0.2, 0.1)
        w = np.linspace(0.1, 5, 101)
        assert np.array_equal(mech_response(p, 2.0, w), lorentz_response(2.0, 0.3, 2.0, w))

    def test_scalar_and_array_agree(self):
        p = fig7a()
        w = np.array([9.5, 10.0, 10.5])
        arr = mech_response(p, 1.0, w)
        assert isinstance(mech_response(p, 1.0, 9.5), complex)
        assert [mech_response(p, 1.0, x) for x in w] == list(arr)

    def test_undamped_control_blocks_response(self):
        p = ModalParams(100.0, 100.0, 100.0, 9.0, 0.0, 1.0, 0.0, 0.0)
        assert mech_response(p, 1.0, 10.0) == 0
        assert mech_denominator(p, 10.0) == complex(math.inf, 0)

    def test_rejects_non_positive_frequency(self):
        with pytest.raises(ValueError):
            mech_response(fig7a(), 1.0, np.array([1.0, 0.0]))

    def test_unit_peak_normalization(self):
        p = ModalParams(100.0, 100.0, 100.0, 0.0, 0.0, 1.0, 0.1, 0.1)
        assert mech_response(p, unit_peak_drive(p), 10.0).imag == pytest.approx(1.0, rel=1e-15)


class TestParameters:
    def test_from_detunings(self):
        p = ModalParams.from_detunings(10.0, 3.0, 2.3, 1.0, 0.1, 1e-4, delta_c=0.1, delta_r=-0.2)
        assert p.omega2 == pytest.approx(10.1)
        assert p.omega3 == pytest.approx(9.8)
        assert p.Omega_c_sq == pytest.approx(9.0)
        assert p.Omega_r_sq == pytest.approx(2.3 ** 2)

    def test_derive_modal_from_springs(self):
        s = MechanicalSystem(m=2.0, kappa1=10.0, kappa2=6.0, kappa3=4.0, kappa12=2.0,
                             kappa13=1.0, gamma1=0.5, gamma2=0.1, gamma3=0.2, F0=3.0)
        p = derive_modal(s)
        assert (p.omega1_sq, p.omega2_sq, p.omega3_sq) == (6.5, 4.0, 2.5)
        assert (p.Omega_c_sq, p.Omega_r_sq) == (1.0, 0.5)
        assert s.drive_accel == 1.5

    def test_stiffness_is_symmetric(self):
        K = fig7a().stiffness()
        assert np.array_equal(K, K.T)

    @pytest.mark.parametrize("kw", [dict(m=0.0), dict(kappa1=0.0), dict(gamma1=0.0),
                                    dict(kappa12=-1.0), dict(gamma2=-0.1)])
    def test_mechanical_validation(self, kw):
        base = dict(m=1.0, kappa1=1.0, kappa2=1.0, kappa3=1.0, kappa12=0.1, kappa13=0.1,
                    gamma1=0.1, gamma2=0.1, gamma3=0.1)
        base.update(kw)
        with pytest.raises(ValueError):
            MechanicalSystem(**base)

    @pytest.mark.parametrize("idx", [0, 1, 2, 5])
    def test_modal_validation(self, idx):
        vals = [1.0, 1.0, 1.0, 0.1, 0.1, 0.1, 0.1, 0.1]
        vals[idx] = 0.0
        with pytest.raises(ValueError):
            ModalParams(*vals)


def test_susceptibility_scaling():
    x = 0.2 + 0.7j
    assert susceptibility_from_response(x, 2.0, 3.0, 4.0) == pytest.approx(x * 1.5)
    with pytest.raises(ValueError):
        susceptibility_from_response(x, F0=0.0)


def test_detuning_signs():
    assert detuning_convert(9.0, 10.0, "mech") == 1.0
    assert detuning_convert(9.0, 10.0, "circuit") == -1.0
    with pytest.raises(ValueError):
        detuning_convert(9.0, 10.0, "other")
