import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakpt import (
    GridCoverageError,
    Observable,
    Picture,
    PointerObservable,
    PpsScenario,
    evolve_pps,
    exact_pointer,
    free_evolve,
    gaussian_pointer,
    inner,
    ket,
    momentum_representation,
    pointer_from_samples,
    pointer_moments,
    predict_mean,
    predict_variance,
    weak_approx_pointer,
    weak_hamiltonian_action,
    weak_value,
)
from weakpt.pointer import PointerNormError, first_order_functionals
from weakpt.quantum import SIGMA_X, SIGMA_Z

from conftest import random_scenario, skewed_pointer, two_sided_skew

Q, P = PointerObservable.Q, PointerObservable.P
ZERO = Observable(np.zeros((2, 2)))
ALPHA = math.pi / 8

# closed-form moments of (1 + beta q) e^{-q^2/4} and (1 + i beta q) e^{-q^2/4},
# beta = 0.1, hbar = 1, from an independent symbolic integration
SKEW_MEAN_Q = 0.19801980198019802
SKEW_VAR_Q = 0.98059013822174297
SKEW_THIRD_Q = 0.0037658897739592605
SKEW_I_MEAN_P = 0.099009900990099010
SKEW_I_VAR_P = 0.24514753455543574
SKEW_I_THIRD_P = 0.00047073622174490756


def amplifier():
    """Qubit with A_w = 1/cos(2 alpha) = sqrt 2 at t0 = 0."""
    return PpsScenario(
        ket(math.cos(ALPHA), math.sin(ALPHA)),
        ket(math.cos(ALPHA), -math.sin(ALPHA)),
        ZERO,
        ZERO,
        Observable(SIGMA_Z),
    )


def imaginary_weak_value():
    """Qubit with A_w = i at t0 = 0."""
    return PpsScenario(ket(1, 1j), ket(1, 0), ZERO, ZERO, Observable(SIGMA_X))


def test_gaussian_moments():
    m = pointer_moments(gaussian_pointer(var_q=1.0))
    assert m.var_q == pytest.approx(1.0, abs=1e-10)
    assert m.var_p == pytest.approx(0.25, abs=1e-10)
    assert abs(m.third_q) < 1e-8 and abs(m.third_p) < 1e-8
    assert abs(m.anticomm_qp) < 1e-10


def test_gaussian_centres():
    m = pointer_moments(gaussian_pointer(center_q=3.0, center_p=2.0, var_q=0.5, hbar=0.7))
    assert m.mean_q == pytest.approx(3.0, abs=1e-10)
    assert m.mean_p == pytest.approx(2.0, abs=1e-10)
    assert m.var_p == pytest.approx(0.7**2 / (4 * 0.5), abs=1e-10)


def test_gaussian_coverage_enforced():
    with pytest.raises(GridCoverageError):
        gaussian_pointer(var_q=1.0, half_width=6.0)


def test_pointer_state_contracts():
    q = np.linspace(-10, 10, 256, endpoint=False)
    with pytest.raises(PointerNormError):
        pointer_from_samples(-10, q[1] - q[0], np.exp(-(q**2)), normalize=False)
    with pytest.raises(GridCoverageError):
        pointer_from_samples(-10, q[1] - q[0], np.exp(-(q**2) / 40))


def test_skewed_moments_match_symbolic():
    m = pointer_moments(skewed_pointer(0.1))
    assert m.mean_q == pytest.approx(SKEW_MEAN_Q, abs=1e-10)
    assert m.var_q == pytest.approx(SKEW_VAR_Q, abs=1e-10)
    assert m.third_q == pytest.approx(SKEW_THIRD_Q, abs=1e-10)
    m = pointer_moments(skewed_pointer(0.1, imaginary=True))
    assert m.mean_p == pytest.approx(SKEW_I_MEAN_P, abs=1e-10)
    assert m.var_p == pytest.approx(SKEW_I_VAR_P, abs=1e-10)
    assert m.third_p == pytest.approx(SKEW_I_THIRD_P, abs=1e-10)


def test_momentum_representation_normalised():
    phi = gaussian_pointer(center_p=1.5)
    p, amp = momentum_representation(phi)
    dp = p[1] - p[0]
    assert np.sum(np.abs(amp) ** 2) * dp == pytest.approx(1.0, abs=1e-10)
    # analytic Gaussian in momentum space: (2 sigma^2/pi)^{1/4} e^{-sigma^2 (p - p0)^2}
    expected = (2 / math.pi) ** 0.25 * np.exp(-((p - 1.5) ** 2))
    np.testing.assert_allclose(np.abs(amp), expected, atol=1e-10)


@pytest.mark.parametrize("rate", [0.7, 0.3 - 1.2j, 2j])
def test_eigenvalue_identity(rate):
    phi = gaussian_pointer(var_q=1.0, n_grid=1024)
    _, lhs = momentum_representation(phi, weak_hamiltonian_action(phi, rate, Picture.MOMENTUM_COUPLING))
    p, amp = momentum_representation(phi)
    assert np.max(np.abs(lhs - rate * p * amp)) <= 1e-10


def test_position_picture_action():
    phi = gaussian_pointer()
    out = weak_hamiltonian_action(phi, 0.5 + 1j, Picture.POSITION_COUPLING)
    np.testing.assert_allclose(out, -(0.5 + 1j) * phi.q * phi.psi)


def test_free_particle_anticommutator_identity():
    mass, var_q = 1.7, 0.8
    phi = gaussian_pointer(center_p=0.4, var_q=var_q, mass=mass, half_width=40.0, n_grid=8192)
    t, h = 1.3, 1e-3
    at = free_evolve(phi, t)
    dvar = (pointer_moments(free_evolve(phi, t + h)).var_q - pointer_moments(free_evolve(phi, t - h)).var_q) / (2 * h)
    assert pointer_moments(at).anticomm_qp == pytest.approx(mass * dvar, abs=1e-7)
    # free Gaussian: Var q(t) = var_q + var_p t^2 / m^2
    var_p = 1 / (4 * var_q)
    assert pointer_moments(at).anticomm_qp == pytest.approx(2 * var_p * t / mass, abs=1e-9)


def test_commutator_functionals_are_canonical():
    f = first_order_functionals(skewed_pointer(0.2), Q)
    assert f["comm"] == 1j
    assert f["F"] == pytest.approx(0.0, abs=1e-15)
    f = first_order_functionals(skewed_pointer(0.2), P)
    assert f["comm"] == 0 and f["F"] == 0


def test_predict_mean_examples():
    phi = gaussian_pointer(var_q=1.0)
    assert predict_mean(phi, Q, 0.01, 1.3) == pytest.approx(0.013, abs=1e-14)
    assert predict_mean(phi, P, 0.01, 1.3) == pytest.approx(0.0, abs=1e-14)
    assert predict_mean(phi, P, 0.01, 1j) == pytest.approx(0.005, abs=1e-12)


def test_predict_variance_examples():
    phi = gaussian_pointer(var_q=1.0)
    assert predict_variance(phi, Q, 0.01, 1.3) == pytest.approx(1.0, abs=1e-12)
    assert predict_variance(phi, P, 0.01, 0.4 + 2j) == pytest.approx(0.25, abs=1e-12)
    skew = skewed_pointer(0.1, imaginary=True)
    base = pointer_moments(skew).var_p
    assert predict_variance(skew, P, 0.01, 1j) - base == pytest.approx(2 * 0.01 * SKEW_I_THIRD_P, abs=1e-12)


def test_exact_pointer_eigenvector_is_pure_shift():
    s = PpsScenario(ket(1, 0), ket(1, 1), ZERO, ZERO, Observable(np.diag([2.0, -1.0])))
    phi = gaussian_pointer()
    out, prob = exact_pointer(s, 0.3, phi)
    assert pointer_moments(out).mean_q == pytest.approx(0.6, abs=1e-10)
    assert prob == pytest.approx(0.5, abs=1e-12)


def test_exact_pointer_without_coupling(rng):
    phi = skewed_pointer(0.2)
    for _ in range(10):
        s = random_scenario(rng, 3)
        out, prob = exact_pointer(s, 0.0, phi)
        pre, post = evolve_pps(s, s.t_ref)
        overlap = inner(post, pre)
        # equal as rays: the overall phase is that of <psi_f|psi_i>
        np.testing.assert_allclose(out.psi, overlap / abs(overlap) * phi.psi, atol=1e-13)
        assert prob == pytest.approx(abs(inner(post, pre)) ** 2, abs=1e-12)


def test_exact_pointer_margin():
    with pytest.raises(GridCoverageError):
        exact_pointer(amplifier(), 6.0, gaussian_pointer(half_width=10.0))


def test_exact_pointer_amplified_shift():
    phi = gaussian_pointer()
    aw = weak_value(amplifier(), 0.0)
    assert aw == pytest.approx(math.sqrt(2), abs=1e-14)
    out, _ = exact_pointer(amplifier(), 0.01, phi)
    shift = pointer_moments(out).mean_q
    assert shift == pytest.approx(0.01 * math.sqrt(2), abs=1e-4)
    assert shift == pytest.approx(0.0141, abs=1e-4)


def test_weak_approx_real_is_translation():
    phi = gaussian_pointer()
    k = 51
    shift = k * phi.grid_step
    out = weak_approx_pointer(1.5, shift / 1.5, phi)
    m = pointer_moments(out)
    assert m.mean_q == pytest.approx(shift, abs=1e-10)
    assert m.var_q == pytest.approx(1.0, abs=1e-10)
    np.testing.assert_allclose(out.psi[k:], phi.psi[:-k], atol=1e-10)


def test_weak_approx_identity():
    phi = skewed_pointer(0.3)
    np.testing.assert_allclose(weak_approx_pointer(0.0, 0.5, phi).psi, phi.psi, atol=1e-14)


def test_weak_approx_imaginary_reweights_momentum():
    phi = gaussian_pointer()
    m = pointer_moments(weak_approx_pointer(1j, 0.01, phi))
    # Gaussian reweighting is exact: shift 2 g var_p / hbar, var unchanged
    assert m.mean_p == pytest.approx(0.005, abs=1e-12)
    assert m.var_p == pytest.approx(0.25, abs=1e-10)
    assert m.mean_p == pytest.approx(predict_mean(phi, P, 0.01, 1j), abs=1e-12)


def test_weak_approx_band_limit():
    phi = gaussian_pointer(n_grid=256)
    with pytest.raises(GridCoverageError):
        weak_approx_pointer(10j, 1.0, phi)
    with pytest.raises(GridCoverageError):
        weak_approx_pointer(500j, 1.0, phi)


def test_first_order_prediction_against_oracle():
    phi = gaussian_pointer()
    out, _ = exact_pointer(imaginary_weak_value(), 0.01, phi)
    assert pointer_moments(out).mean_p == pytest.approx(predict_mean(phi, P, 0.01, 1j), abs=1e-6)
    skew = skewed_pointer(0.1, imaginary=True)
    out, _ = exact_pointer(imaginary_weak_value(), 0.01, skew)
    assert pointer_moments(out).var_p == pytest.approx(predict_variance(skew, P, 0.01, 1j), abs=1e-4)


def _residual(s, phi, M, gamma0):
    out, _ = exact_pointer(s, gamma0, phi)
    m = pointer_moments(out)
    exact = m.mean_q if M is Q else m.mean_p
    return abs(exact - predict_mean(phi, M, gamma0, weak_value(s, s.t_ref)))


@pytest.mark.parametrize(
    "scenario, pointer, M",
    [
        (amplifier, lambda: skewed_pointer(0.1, imaginary=True), P),
        (imaginary_weak_value, lambda: skewed_pointer(0.1, imaginary=True), P),
        (imaginary_weak_value, two_sided_skew, Q),
    ],
)
def test_first_order_residual_is_quadratic(scenario, pointer, M):
    s, phi = scenario(), pointer()
    ratio = _residual(s, phi, M, 0.02) / _residual(s, phi, M, 0.01)
    assert 3.2 <= ratio <= 4.8


def test_symmetric_pointer_residual_is_cubic():
    # parity: reflecting a symmetric pointer maps gamma0 -> -gamma0, so the
    # mean residual is odd in gamma0 and the leading term is cubic
    s, phi = amplifier(), gaussian_pointer()
    ratio = _residual(s, phi, Q, 0.02) / _residual(s, phi, Q, 0.01)
    assert ratio == pytest.approx(8.0, rel=0.05)


@settings(max_examples=25)
@given(seed=st.integers(0, 2**32 - 1), gamma0=st.floats(1e-3, 0.5))
def test_exact_pointer_normalised(seed, gamma0):
    rng = np.random.default_rng(seed)
    s = random_scenario(rng, 2)
    out, prob = exact_pointer(s, gamma0, gaussian_pointer(n_grid=1024))
    assert 0 < prob <= 1 + 1e-12
    assert np.sum(np.abs(out.psi) ** 2) * out.grid_step == pytest.approx(1.0, abs=1e-10)
