"""Pre- and post-selected (PPS) evolution and time-dependent weak values.

Timing convention
-----------------
The boundary states ``pre_state`` and ``post_state`` are the states selected
for a measurement at the reference time ``t_ref``: the pre-selection happens
at ``t_ref - dt_i`` and the post-selection at ``t_ref + dt_f``.  Moving the
measurement time to ``t`` slides the whole window with fixed offsets, and the
boundary states slide with it under their own generators.  Both states at
measurement time therefore obey ``d|psi>/dt = -(i/hbar) H |psi>``::

    |psi_i(t)> = exp(-i H_i (t - t_ref + dt_i) / hbar) |pre>
    |psi_f(t)> = exp(-i H_f (t - t_ref - dt_f) / hbar) |post>
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .config import DEFAULT
from .quantum import DimensionError, Observable, StateVector, evolve, inner, sandwich


class ContractViolation(ArithmeticError):
    """A numerical precondition failed (as opposed to malformed input)."""


class NearOrthogonalError(ContractViolation):
    """The pre- and post-selected states are (nearly) orthogonal at ``t``."""

    def __init__(self, t: float, overlap: float, floor: float):
        self.t = float(t)
        self.overlap = float(overlap)
        self.floor = float(floor)
        super().__init__(
            f"pre- and post-selection nearly orthogonal at t = {self.t!r}: "
            f"|<psi_f(t)|psi_i(t)>| = {self.overlap:.3e} below floor {self.floor:.1e}"
        )


@dataclass(frozen=True, eq=False)
class PpsScenario:
    pre_state: StateVector
    post_state: StateVector
    H_i: Observable
    H_f: Observable
    A: Observable
    dt_i: float = 0.0
    dt_f: float = 0.0
    hbar: float = 1.0
    overlap_floor: float = DEFAULT.overlap_floor
    t_ref: float = 0.0

    def __post_init__(self):
        dim = self.pre_state.dim
        for name in ("post_state", "H_i", "H_f", "A"):
            if getattr(self, name).dim != dim:
                raise DimensionError(f"{name} has dimension {getattr(self, name).dim}, expected {dim}")
        if self.dt_i < 0 or self.dt_f < 0:
            raise ValueError("time offsets dt_i and dt_f must be non-negative")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        if self.overlap_floor <= 0:
            raise ValueError("overlap_floor must be positive")

    @property
    def dim(self) -> int:
        return self.pre_state.dim

    def replace(self, **changes) -> PpsScenario:
        return replace(self, **changes)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid of ``n`` (odd) samples symmetric about ``t0``."""

    t0: float
    half_width: float
    n: int

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.n < 3 or self.n % 2 == 0:
            raise ValueError(f"n must be an odd integer >= 3, got {self.n}")

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / (self.n - 1)

    @property
    def center(self) -> int:
        return (self.n - 1) // 2

    @property
    def offsets(self) -> np.ndarray:
        # integer multiples of the step, so offsets[k] == -offsets[n-1-k] exactly
        return (np.arange(self.n) - self.center) * self.step

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.offsets

    def index_of(self, t: float, rtol: float = 1e-9) -> int:
        """Index of the node at ``t``; raises if ``t`` is not on the grid."""
        k = (t - self.t0) / self.step + self.center
        kr = int(round(k))
        if abs(k - kr) > rtol * max(1.0, abs(k)) or not 0 <= kr < self.n:
            raise ValueError(f"t = {t!r} is not a node of {self}")
        return kr


@dataclass(frozen=True, eq=False)
class WeakValueSeries:
    grid: TimeGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex).reshape(-1)
        if v.size != self.grid.n:
            raise ValueError(f"expected {self.grid.n} values, got {v.size}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    @property
    def re_profile(self) -> np.ndarray:
        """Position profile: Re A_w(t)."""
        return self.values.real

    @property
    def im_profile(self) -> np.ndarray:
        """Momentum-distribution profile: Im A_w(t)."""
        return self.values.imag

    def __len__(self):
        return self.grid.n


def evolve_pps(s: PpsScenario, t: float) -> tuple[StateVector, StateVector]:
    tau = t - s.t_ref
    pre_t = evolve(s.pre_state, s.H_i, tau + s.dt_i, s.hbar)
    post_t = evolve(s.post_state, s.H_f, tau - s.dt_f, s.hbar)
    return pre_t, post_t


def _overlap(s: PpsScenario, t: float):
    pre_t, post_t = evolve_pps(s, t)
    ov = inner(post_t, pre_t)
    if abs(ov) < s.overlap_floor:
        raise NearOrthogonalError(t, abs(ov), s.overlap_floor)
    return pre_t, post_t, ov


def weak_value_of(s: PpsScenario, op: np.ndarray, t: float) -> complex:
    """<psi_f(t)|op|psi_i(t)> / <psi_f(t)|psi_i(t)> for any square matrix ``op``."""
    pre_t, post_t, ov = _overlap(s, t)
    return sandwich(post_t, op, pre_t) / ov


def weak_value(s: PpsScenario, t: float) -> complex:
    return weak_value_of(s, s.A.matrix, t)


def weak_value_series(s: PpsScenario, grid: TimeGrid) -> WeakValueSeries:
    return WeakValueSeries(grid, [weak_value(s, t) for t in grid.times])


def weak_energy(s: PpsScenario, t: float) -> complex:
    """Weak value of H_f - H_i."""
    return weak_value_of(s, s.H_f.matrix - s.H_i.matrix, t)


def weak_value_derivative(s: PpsScenario, t: float) -> complex:
    """Analytic dA_w/dt.

    Differentiating the ratio with both boundary states obeying the forward
    Schrodinger equation gives::

        dA_w/dt = (i/hbar) [ (H_f A - A H_i)_w - (H_f - H_i)_w A_w ]
    """
    pre_t, post_t, ov = _overlap(s, t)
    A, Hi, Hf = s.A.matrix, s.H_i.matrix, s.H_f.matrix
    aw = sandwich(post_t, A, pre_t) / ov
    mixed = sandwich(post_t, Hf @ A - A @ Hi, pre_t) / ov
    energy = sandwich(post_t, Hf - Hi, pre_t) / ov
    return 1j / s.hbar * (mixed - energy * aw)


def finite_difference_derivative(s: PpsScenario, t: float, h: float | None = None) -> complex:
    """Central difference (A_w(t+h) - A_w(t-h)) / 2h."""
    if h is None:
        h = DEFAULT.fd_step * max(1.0, abs(t))
    return (weak_value(s, t + h) - weak_value(s, t - h)) / (2 * h)
