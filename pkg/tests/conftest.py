import sys
import time
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

import weakpt
from weakpt import Observable, PpsScenario, inner, ket, pointer_from_samples
from weakpt.pps import evolve_pps

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


def random_hermitian(rng, dim, scale=1.0):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return Observable(scale * (m + m.conj().T) / 2)


def random_state(rng, dim):
    return ket(rng.normal(size=dim) + 1j * rng.normal(size=dim))


def random_scenario(rng, dim, min_overlap=0.3, hbar=1.0, t=0.0):
    """Random PPS with a comfortably non-orthogonal pre/post pair."""
    while True:
        s = PpsScenario(
            random_state(rng, dim),
            random_state(rng, dim),
            random_hermitian(rng, dim),
            random_hermitian(rng, dim),
            random_hermitian(rng, dim),
            dt_i=float(rng.uniform(0, 1)),
            dt_f=float(rng.uniform(0, 1)),
            hbar=hbar,
        )
        pre, post = evolve_pps(s, t)
        if abs(inner(post, pre)) >= min_overlap:
            return s


def random_hermitian_series(rng, n, sign):
    """Samples with conj(v(-tau)) == sign * v(tau), built exactly on a mirrored grid."""
    half = rng.normal(size=n // 2) + 1j * rng.normal(size=n // 2)
    mid = rng.normal() * (1 if sign > 0 else 1j)
    return np.concatenate([sign * np.conj(half[::-1]), [mid], half])


def skewed_pointer(beta=0.1, imaginary=False, n_grid=4096, half_width=16.0):
    """(1 + beta q) or (1 + i beta q) times the var_q = 1 Gaussian."""
    step = 2 * half_width / n_grid
    q = -half_width + step * np.arange(n_grid)
    lin = 1 + (1j if imaginary else 1) * beta * q
    return pointer_from_samples(-half_width, step, lin * np.exp(-(q**2) / 4))


def two_sided_skew():
    """Pointer with no reflection symmetry in either q or p."""
    n, half = 4096, 16.0
    step = 2 * half / n
    q = -half + step * np.arange(n)
    return pointer_from_samples(-half, step, (1 + 0.3 * q + 0.2j * q) * np.exp(-(q**2) / 4))


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def bundled():
    return Path(weakpt.__file__).parent / "scenarios"


def pytest_sessionstart(session):
    session.config._weakpt_start = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[n])
    elapsed = time.perf_counter() - config._weakpt_start
    verdict = "PASS" if elapsed < 60 else "FAIL"
    terminalreporter.write_line(f"suite wall-clock: {verdict}  {elapsed:.1f} s (limit 60 s)")
