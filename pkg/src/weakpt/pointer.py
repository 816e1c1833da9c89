"""Measurement pointer on a uniform 1-D grid.

The grid is treated as periodic and the momentum operator acts spectrally:
``p psi = ifft(p_k * fft(psi))`` with ``p_k = 2 pi hbar fftfreq(n, step)``.
Wavefunctions must decay to (numerically) zero well inside the grid, which
:class:`PointerState` asserts on construction.

Momentum coupling ``gamma(t) A p`` with an impulsive profile produces the
post-selected pointer ``<psi_f| exp(-(i/hbar) gamma0 A p) |psi_i> |phi>``;
:func:`exact_pointer` evaluates this exactly through the spectral expansion of
A, and :func:`weak_approx_pointer` applies the first-order replacement
``A -> A_w``.  :func:`predict_mean` and :func:`predict_variance` give the
first-order moment shifts in closed form.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .config import DEFAULT
from .coupling import GridCoverageError
from .pps import PpsScenario, evolve_pps
from .symmetry import Picture


class PointerObservable(str, enum.Enum):
    Q = "Q"
    P = "P"


class PointerNormError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PointerState:
    grid_min: float
    grid_step: float
    psi: np.ndarray = field(repr=False)
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        psi = np.array(self.psi, dtype=complex).reshape(-1)
        if psi.size < 16:
            raise ValueError("pointer grid needs at least 16 samples")
        if self.grid_step <= 0 or self.mass <= 0 or self.hbar <= 0:
            raise ValueError("grid_step, mass and hbar must be positive")
        norm = float(np.sum(np.abs(psi) ** 2) * self.grid_step)
        if abs(norm - 1.0) > DEFAULT.pointer_norm:
            raise PointerNormError(f"pointer is not normalised: sum |psi|^2 dq = {norm!r}")
        edge = max(abs(psi[0]), abs(psi[-1]))
        if edge >= DEFAULT.pointer_edge:
            raise GridCoverageError(f"pointer amplitude {edge:.2e} at the grid boundary; widen the grid")
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)

    @property
    def n(self) -> int:
        return self.psi.size

    @property
    def q(self) -> np.ndarray:
        return self.grid_min + self.grid_step * np.arange(self.n)

    @property
    def p(self) -> np.ndarray:
        """Momentum of each FFT bin, in numpy's FFT ordering."""
        return 2 * np.pi * self.hbar * np.fft.fftfreq(self.n, self.grid_step)

    @property
    def p_max(self) -> float:
        return np.pi * self.hbar / self.grid_step

    def with_psi(self, psi: np.ndarray, normalize: bool = False) -> PointerState:
        psi = np.asarray(psi, dtype=complex)
        if normalize:
            psi = psi / math.sqrt(np.sum(np.abs(psi) ** 2) * self.grid_step)
        return PointerState(self.grid_min, self.grid_step, psi, self.mass, self.hbar)


def pointer_from_samples(
    grid_min: float, grid_step: float, psi, mass: float = 1.0, hbar: float = 1.0, normalize: bool = True
) -> PointerState:
    psi = np.asarray(psi, dtype=complex)
    if normalize:
        psi = psi / math.sqrt(np.sum(np.abs(psi) ** 2) * grid_step)
    return PointerState(grid_min, grid_step, psi, mass, hbar)


def gaussian_pointer(
    center_q: float = 0.0,
    center_p: float = 0.0,
    var_q: float = 1.0,
    *,
    n_grid: int = 4096,
    half_width: float | None = None,
    mass: float = 1.0,
    hbar: float = 1.0,
) -> PointerState:
    """Minimum-uncertainty Gaussian wavepacket.

    The grid spans ``center_q +/- half_width`` (default 12 standard
    deviations) and must cover at least 8 standard deviations on each side.
    """
    if var_q <= 0:
        raise ValueError("var_q must be positive")
    sigma = math.sqrt(var_q)
    if half_width is None:
        half_width = 12.0 * sigma
    if half_width < 8.0 * sigma:
        raise GridCoverageError(f"grid half-width {half_width:.4g} covers fewer than 8 standard deviations")
    step = 2.0 * half_width / n_grid
    sigma_p = hbar / (2 * sigma)
    if abs(center_p) + 8 * sigma_p > np.pi * hbar / step:
        raise GridCoverageError("grid too coarse for the momentum content of the pointer")
    q = center_q - half_width + step * np.arange(n_grid)
    psi = np.exp(-((q - center_q) ** 2) / (4 * var_q) + 1j * center_p * q / hbar)
    return pointer_from_samples(center_q - half_width, step, psi, mass, hbar)


# -- operators on the grid ---------------------------------------------------


def apply_p(phi: PointerState, psi: np.ndarray | None = None, power: int = 1) -> np.ndarray:
    """p^power acting on ``psi`` (defaults to phi.psi), spectrally."""
    psi = phi.psi if psi is None else psi
    return np.fft.ifft(phi.p**power * np.fft.fft(psi))


def apply_q(phi: PointerState, psi: np.ndarray | None = None, power: int = 1) -> np.ndarray:
    psi = phi.psi if psi is None else psi
    return phi.q**power * psi


def braket(phi: PointerState, bra: np.ndarray, ket: np.ndarray) -> complex:
    return complex(np.vdot(bra, ket) * phi.grid_step)


def momentum_representation(phi: PointerState, psi: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """(p, <p|psi>) in FFT ordering; for psi = phi.psi, sum |phi(p)|^2 dp = 1."""
    psi = phi.psi if psi is None else psi
    p = phi.p
    amp = np.fft.fft(psi) * np.exp(-1j * p * phi.grid_min / phi.hbar)
    return p, amp * phi.grid_step / math.sqrt(2 * np.pi * phi.hbar)


def free_evolve(phi: PointerState, dt: float) -> PointerState:
    """Free-particle evolution of the pointer for a time ``dt``."""
    phase = np.exp(-1j * phi.p**2 * dt / (2 * phi.mass * phi.hbar))
    return phi.with_psi(np.fft.ifft(phase * np.fft.fft(phi.psi)), normalize=True)


def weak_hamiltonian_action(phi: PointerState, rate: complex, picture: Picture) -> np.ndarray:
    """Position representation of ``rate * p`` (momentum coupling) or ``-rate * q`` on phi.

    ``rate`` is the complex translation rate gamma(t) A_w(t).  The momentum
    picture uses ``-i hbar rate d/dq`` evaluated spectrally.
    """
    if Picture(picture) is Picture.MOMENTUM_COUPLING:
        return rate * apply_p(phi)
    return -rate * apply_q(phi)


# -- moments -----------------------------------------------------------------


@dataclass(frozen=True)
class PointerMomentReport:
    mean_q: float
    mean_p: float
    var_q: float
    var_p: float
    third_q: float
    third_p: float
    anticomm_qp: float  # <{q,p}> - 2 <q><p>

    def as_dict(self) -> dict:
        return asdict(self)


def _central_moments(x: np.ndarray, w: np.ndarray) -> tuple[float, float, float]:
    mean = float(np.sum(x * w))
    d = x - mean
    return mean, float(np.sum(d**2 * w)), float(np.sum(d**3 * w))


def pointer_moments(phi: PointerState) -> PointerMomentReport:
    """First three moments of q and p plus the symmetrised q-p covariance.

    Position moments use the grid density; momentum moments use the discrete
    momentum density, which is equivalent to applying ``p`` spectrally.
    """
    dens_q = np.abs(phi.psi) ** 2 * phi.grid_step
    total = dens_q.sum()
    if abs(total - 1.0) > DEFAULT.pointer_norm:
        raise PointerNormError(f"pointer is not normalised: {total!r}")
    mean_q, var_q, third_q = _central_moments(phi.q, dens_q)
    dens_p = np.abs(np.fft.fft(phi.psi)) ** 2
    dens_p /= dens_p.sum()
    mean_p, var_p, third_p = _central_moments(phi.p, dens_p)
    qp = braket(phi, phi.psi, apply_q(phi, apply_p(phi)))
    anticomm = 2.0 * qp.real - 2.0 * mean_q * mean_p
    if var_q * var_p < (phi.hbar / 2) ** 2 - DEFAULT.uncertainty_slack:
        raise AssertionError(f"uncertainty relation violated: {var_q * var_p!r}")
    return PointerMomentReport(mean_q, mean_p, var_q, var_p, third_q, third_p, anticomm)


def _apply(phi: PointerState, M: PointerObservable, psi: np.ndarray, power: int = 1) -> np.ndarray:
    if M is PointerObservable.Q:
        return apply_q(phi, psi, power)
    return apply_p(phi, psi, power)


def _anticomm_with_p(phi: PointerState, M: PointerObservable, power: int) -> float:
    """<{M^power, p}> = 2 Re <phi| M^power p |phi>."""
    value = braket(phi, phi.psi, _apply(phi, M, apply_p(phi), power))
    return 2.0 * value.real


def _comm_with_p(phi: PointerState, M: PointerObservable, power: int, mean_q: float) -> complex:
    """<[M^power, p]> from the canonical commutator (power <= 2)."""
    if M is PointerObservable.P:
        return 0j
    if power == 1:
        return 1j * phi.hbar
    return 2j * phi.hbar * mean_q


def _mean_var(m: PointerMomentReport, M: PointerObservable) -> tuple[float, float]:
    return (m.mean_q, m.var_q) if M is PointerObservable.Q else (m.mean_p, m.var_p)


def first_order_functionals(phi: PointerState, M: PointerObservable) -> dict[str, complex]:
    """Ingredients of the first-order mean and variance shifts for M in {q, p}.

    ``comm`` = <[M, p]>, ``anticomm`` = <{M, p}> - 2 <M><p>, and the variance
    functionals::

        F(M) = <[M^2, p]> - 2 <M> <[M, p]>
        G(M) = <{M^2, p}> - 2 <M> <{M, p}> - 2 <p> (Var M - <M>^2)
    """
    M = PointerObservable(M)
    m = pointer_moments(phi)
    mean, var = _mean_var(m, M)
    ac1 = _anticomm_with_p(phi, M, 1)
    ac2 = _anticomm_with_p(phi, M, 2)
    c1 = _comm_with_p(phi, M, 1, m.mean_q)
    c2 = _comm_with_p(phi, M, 2, m.mean_q)
    return {
        "mean": mean,
        "var": var,
        "comm": c1,
        "anticomm": ac1 - 2 * mean * m.mean_p,
        "F": c2 - 2 * mean * c1,
        "G": ac2 - 2 * mean * ac1 - 2 * m.mean_p * (var - mean**2),
    }


def _real(value: complex, what: str, scale: float) -> float:
    if abs(value.imag) > 1e-9 * max(1.0, scale):
        raise AssertionError(f"{what} has an imaginary part {value.imag:.3e}")
    return value.real


def predict_mean(phi: PointerState, M: PointerObservable, gamma0: float, aw0: complex) -> float:
    """First-order <M> after an impulsive momentum coupling of strength gamma0.

    <M> - i (g/hbar) Re A_w <[M, p]> + (g/hbar) Im A_w (<{M, p}> - 2 <M><p>)
    """
    f = first_order_functionals(phi, M)
    k = gamma0 / phi.hbar
    aw0 = complex(aw0)
    value = f["mean"] - 1j * k * aw0.real * f["comm"] + k * aw0.imag * f["anticomm"]
    return _real(value, "predicted mean", abs(f["mean"]))


def predict_variance(phi: PointerState, M: PointerObservable, gamma0: float, aw0: complex) -> float:
    """First-order Var M after an impulsive momentum coupling of strength gamma0.

    Var M - i (g/hbar) Re A_w F(M) + (g/hbar) Im A_w G(M)
    """
    f = first_order_functionals(phi, M)
    k = gamma0 / phi.hbar
    aw0 = complex(aw0)
    value = f["var"] - 1j * k * aw0.real * f["F"] + k * aw0.imag * f["G"]
    return _real(value, "predicted variance", f["var"])


# -- pointer after the interaction ---------------------------------------------


def _support(phi: PointerState) -> tuple[float, float]:
    idx = np.nonzero(np.abs(phi.psi) >= DEFAULT.pointer_edge)[0]
    q = phi.q
    return q[idx[0]], q[idx[-1]]


def _check_shift_margin(phi: PointerState, shifts) -> None:
    lo, hi = _support(phi)
    q = phi.q
    smin, smax = min(0.0, min(shifts)), max(0.0, max(shifts))
    if lo + smin <= q[0] or hi + smax >= q[-1]:
        raise GridCoverageError(
            f"pointer shifted by [{smin:.4g}, {smax:.4g}] leaves the grid [{q[0]:.4g}, {q[-1]:.4g}]"
        )


def _shift_factor(phi: PointerState, shift: complex) -> np.ndarray:
    """Momentum-space multiplier of exp(-(i/hbar) shift p)."""
    return np.exp(-1j * shift * phi.p / phi.hbar)


def exact_pointer(
    s: PpsScenario, gamma0: float, phi: PointerState, t: float | None = None
) -> tuple[PointerState, float]:
    """Exact post-selected pointer for an impulsive momentum coupling at ``t``.

    Parameters
    ----------
    s : PpsScenario
        Pre/post-selection; the states are evolved to ``t`` (default ``s.t_ref``).
    gamma0 : float
        Integrated coupling strength.
    phi : PointerState
        Initial pointer.

    Returns
    -------
    (PointerState, float)
        The normalised pointer ``sum_a <psi_f|a><a|psi_i> phi(q - gamma0 a)``
        and the post-selection probability (its squared norm before
        normalisation).
    """
    t = s.t_ref if t is None else t
    pre_t, post_t = evolve_pps(s, t)
    w, v = s.A.eigh
    weights = (post_t.amplitudes.conj() @ v) * (v.conj().T @ pre_t.amplitudes)
    _check_shift_margin(phi, gamma0 * w)
    factor = np.zeros(phi.n, dtype=complex)
    for a, c in zip(w, weights):
        factor += c * _shift_factor(phi, gamma0 * a)
    psi = np.fft.ifft(factor * np.fft.fft(phi.psi))
    prob = float(np.sum(np.abs(psi) ** 2) * phi.grid_step)
    if prob == 0.0:
        raise ZeroDivisionError("post-selection probability is zero")
    return phi.with_psi(psi / math.sqrt(prob)), prob


def weak_approx_pointer(aw0: complex, gamma0: float, phi: PointerState) -> PointerState:
    """First-order pointer exp(-(i/hbar) gamma0 A_w p)|phi>, renormalised.

    The real part of ``gamma0 A_w`` translates the wavepacket; the imaginary
    part reweights its momentum distribution by exp(gamma0 Im A_w p / hbar).
    """
    shift = gamma0 * complex(aw0)
    _check_shift_margin(phi, [shift.real])
    with np.errstate(over="ignore", invalid="ignore"):
        spectrum = _shift_factor(phi, shift) * np.fft.fft(phi.psi)
    if not np.all(np.isfinite(spectrum)):
        raise GridCoverageError("momentum reweighting overflows; Im A_w is far too large")
    mag = np.abs(spectrum)
    # the outermost bins (|p| near the band limit) must stay negligible
    band_edge = np.abs(phi.p) >= 0.9 * phi.p_max
    if mag[band_edge].max() > DEFAULT.pointer_edge * mag.max():
        raise GridCoverageError("reweighted momentum distribution reaches the grid band limit")
    return phi.with_psi(np.fft.ifft(spectrum), normalize=True)
