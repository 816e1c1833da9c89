import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from weakpt import (
    CoefficientSeries,
    Picture,
    TimeGrid,
    Vanishing,
    Verdict,
    WeakValueSeries,
    classify,
    even_odd_decompose,
    is_anti_pt_symmetric,
    is_pt_symmetric,
    pt_transform,
)
from weakpt.symmetry import UncertifiedCouplingError, component_residuals, mirror_residuals

from conftest import random_hermitian_series

TOL = 1e-9
OMEGA = 1.3


def series_of(fn, t0=0.7, half_width=1.0, n=201):
    grid = TimeGrid(t0, half_width, n)
    return WeakValueSeries(grid, fn(grid.offsets))


def test_decompose_constant():
    even, odd = even_odd_decompose(series_of(lambda tau: np.full(tau.shape, 2 - 3j)))
    np.testing.assert_array_equal(even.values, 2 - 3j)
    np.testing.assert_array_equal(odd.values, 0)


def test_decompose_linear():
    s = series_of(lambda tau: tau.astype(complex), t0=0.0)
    even, odd = even_odd_decompose(s)
    np.testing.assert_array_equal(even.values, 0)
    np.testing.assert_array_equal(odd.values, s.values)


def test_decompose_phase():
    s = series_of(lambda tau: np.exp(2j * OMEGA * tau), t0=0.0)
    even, odd = even_odd_decompose(s)
    tau = s.grid.offsets
    np.testing.assert_allclose(even.values, np.cos(2 * OMEGA * tau), atol=1e-15)
    np.testing.assert_allclose(odd.values, 1j * np.sin(2 * OMEGA * tau), atol=1e-15)


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 200))
def test_decompose_reconstructs(seed, n):
    rng = np.random.default_rng(seed)
    grid = TimeGrid(float(rng.normal()), 1.0, 2 * n + 1)
    s = WeakValueSeries(grid, rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n))
    even, odd = even_odd_decompose(s)
    np.testing.assert_allclose(even.values + odd.values, s.values, rtol=0, atol=1e-15)


def test_classify_pt_example():
    r = classify(series_of(lambda tau: np.cos(2 * OMEGA * tau) + 1j * np.sin(2 * OMEGA * tau)), TOL)
    assert r.verdict is Verdict.PT
    assert r.predicted_vanishing is Vanishing.IMAGINARY_PART
    assert r.pt_residual <= TOL


def test_classify_anti_pt_example():
    r = classify(series_of(lambda tau: np.sin(2 * OMEGA * tau) + 1j * np.cos(2 * OMEGA * tau)), TOL)
    assert r.verdict is Verdict.ANTI_PT
    assert r.predicted_vanishing is Vanishing.REAL_PART
    assert r.anti_pt_residual <= TOL


def test_classify_neither():
    r = classify(series_of(lambda tau: tau + 1j * tau), TOL)
    assert r.verdict is Verdict.NEITHER
    assert r.predicted_vanishing is Vanishing.NONE
    # by hand: Re odd gives re_even residual 2*sup|tau|/sup|v| = 2/sqrt2
    assert r.re_even_residual == pytest.approx(np.sqrt(2), rel=1e-12)
    assert r.im_even_residual == pytest.approx(np.sqrt(2), rel=1e-12)
    assert r.re_odd_residual == 0 and r.im_odd_residual == 0


def test_classify_zero_series_is_both():
    r = classify(series_of(lambda tau: np.zeros(tau.shape)), TOL)
    assert r.verdict is Verdict.BOTH
    assert r.predicted_vanishing is Vanishing.BOTH
    assert r.pt_residual == 0 and r.anti_pt_residual == 0


def test_classify_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        classify(series_of(lambda tau: tau), 0.0)


def test_report_field_order():
    d = classify(series_of(lambda tau: np.exp(1j * tau)), TOL).as_dict()
    assert list(d)[:2] == ["verdict", "tolerance"]
    assert d["verdict"] == "PT"


def coeff_of(values, grid=None, picture=Picture.MOMENTUM_COUPLING):
    grid = grid or TimeGrid(0.0, 1.0, len(values))
    return CoefficientSeries(grid, values, picture)


def test_pt_transform_real_even_fixed_point():
    tau = TimeGrid(0.0, 1.0, 41).offsets
    c = coeff_of(np.cos(tau) + tau**2)
    np.testing.assert_array_equal(pt_transform(c, True).coeff, c.coeff)


def test_pt_transform_imaginary_even_flips():
    tau = TimeGrid(0.0, 1.0, 41).offsets
    c = coeff_of(1j * np.cosh(tau))
    np.testing.assert_array_equal(pt_transform(c, True).coeff, -c.coeff)


def test_pt_transform_phase_fixed_point():
    tau = TimeGrid(0.0, 1.0, 41).offsets
    c = coeff_of(np.exp(2j * OMEGA * tau))
    np.testing.assert_allclose(pt_transform(c, True).coeff, c.coeff, atol=1e-15)


def test_pt_transform_requires_certified_coupling():
    c = coeff_of(np.ones(5))
    with pytest.raises(UncertifiedCouplingError):
        pt_transform(c, False)
    with pytest.raises(UncertifiedCouplingError):
        is_pt_symmetric(c, coupling_even_certified=False)


def test_coefficient_length_checked():
    with pytest.raises(ValueError):
        CoefficientSeries(TimeGrid(0.0, 1.0, 5), np.ones(4))


@given(seed=st.integers(0, 2**32 - 1))
def test_pt_transform_involution(seed):
    rng = np.random.default_rng(seed)
    c = coeff_of(rng.normal(size=31) + 1j * rng.normal(size=31), picture=Picture.POSITION_COUPLING)
    twice = pt_transform(pt_transform(c, True), True)
    np.testing.assert_allclose(twice.coeff, c.coeff, rtol=0, atol=1e-15)
    assert twice.picture is Picture.POSITION_COUPLING


def test_zero_coefficient_is_both():
    c = coeff_of(np.zeros(9))
    assert is_pt_symmetric(c, TOL) and is_anti_pt_symmetric(c, TOL)


def test_boxcar_weighted_examples():
    grid = TimeGrid(1.0, 1.0, 201)
    tau = grid.offsets
    box = np.where(np.abs(tau) <= 0.05 + 1e-12, 10.0, 0.0)
    pt = coeff_of(box * np.exp(2j * tau), grid)
    anti = coeff_of(box * (np.sin(2 * tau) + 1j * np.cos(2 * tau)), grid)
    assert is_pt_symmetric(pt, TOL) and not is_anti_pt_symmetric(pt, TOL)
    assert is_anti_pt_symmetric(anti, TOL) and not is_pt_symmetric(anti, TOL)


def _even_weight(rng, tau):
    a, b = rng.uniform(0.1, 2.0, size=2)
    return a * np.exp(-b * tau**2)


@pytest.mark.parametrize("sign, verdict", [(+1, Verdict.PT), (-1, Verdict.ANTI_PT)])
def test_hermitian_suite_both_directions(rng, sign, verdict):
    is_sym = is_pt_symmetric if sign > 0 else is_anti_pt_symmetric
    for _ in range(200):
        n = 2 * int(rng.integers(5, 60)) + 1
        grid = TimeGrid(float(rng.normal()), 1.0, n)
        v = random_hermitian_series(rng, n, sign)
        assert classify(WeakValueSeries(grid, v), TOL).verdict is verdict
        assert is_sym(coeff_of(_even_weight(rng, grid.offsets) * v, grid), TOL)

        # perturb by an opposite-parity Hermitian component of size 10 tol
        w = random_hermitian_series(rng, n, -sign)
        w *= 10 * TOL * np.max(np.abs(v)) / np.max(np.abs(w))
        r = classify(WeakValueSeries(grid, v + w), TOL)
        assert r.verdict not in (verdict, Verdict.BOTH)


@given(seed=st.integers(0, 2**32 - 1), scale=st.sampled_from([1e-12, 1e-10, 1e-9, 1e-8, 1e-3]))
def test_mirror_and_component_routes_agree(seed, scale):
    # near-symmetric series sit right at the threshold and exercise the boundary
    rng = np.random.default_rng(seed)
    n = 2 * int(rng.integers(2, 40)) + 1
    sign = int(rng.choice([-1, 1]))
    v = random_hermitian_series(rng, n, sign)
    v = v + scale * (rng.normal(size=n) + 1j * rng.normal(size=n))
    _, pt, anti = mirror_residuals(v)
    comp = component_residuals(v)
    for tol in (1e-10, 1e-9, 1e-8):
        assert (pt <= tol) == (comp["re_even"] <= tol and comp["im_odd"] <= tol)
        assert (anti <= tol) == (comp["re_odd"] <= tol and comp["im_even"] <= tol)
    classify(WeakValueSeries(TimeGrid(0.0, 1.0, n), v), 1e-9)
