"""Even coupling profiles and weak pointer translations.

The translation produced by a coupling profile gamma(t) is the complex number
``integral gamma(t) A_w(t) dt``.  Momentum coupling (A p) translates the
pointer position, giving q_w; position coupling (-A q) translates the pointer
momentum, giving p_w.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .pps import ContractViolation, TimeGrid, WeakValueSeries
from .symmetry import CoefficientSeries, Picture


class CouplingKind(str, enum.Enum):
    BOXCAR = "BOXCAR"
    GAUSSIAN = "GAUSSIAN"
    IMPULSE = "IMPULSE"


class ClosedFormExample(str, enum.Enum):
    PT_EXAMPLE = "PT_EXAMPLE"  # A_w = cos 2w(t-t0) + i sin 2w(t-t0)
    ANTI_PT_EXAMPLE = "ANTI_PT_EXAMPLE"  # A_w = sin 2w(t-t0) + i cos 2w(t-t0)


class GridCoverageError(ContractViolation):
    pass


# Gaussian couplings are integrated out to this many standard deviations.
GAUSSIAN_SUPPORT_SIGMAS = 6.0


@dataclass(frozen=True)
class CouplingProfile:
    """Coupling strength gamma(t), even about ``t0`` and integrating to ``strength``.

    ``epsilon`` is the full width of a BOXCAR and the standard deviation of a
    GAUSSIAN; it is ignored for IMPULSE.
    """

    kind: CouplingKind
    strength: float
    t0: float = 0.0
    epsilon: float = 1.0
    picture: Picture = Picture.MOMENTUM_COUPLING

    def __post_init__(self):
        object.__setattr__(self, "kind", CouplingKind(self.kind))
        object.__setattr__(self, "picture", Picture(self.picture))
        if self.kind is not CouplingKind.IMPULSE and not self.epsilon > 0:
            raise ValueError("epsilon must be positive")

    @property
    def label(self) -> str:
        """Name of the translation this coupling produces."""
        return "q_w" if self.picture is Picture.MOMENTUM_COUPLING else "p_w"

    def support(self) -> tuple[float, float] | None:
        if self.kind is CouplingKind.BOXCAR:
            half = self.epsilon / 2
        elif self.kind is CouplingKind.GAUSSIAN:
            half = GAUSSIAN_SUPPORT_SIGMAS * self.epsilon
        else:
            return None
        return self.t0 - half, self.t0 + half


def coupling_eval(c: CouplingProfile, t):
    """gamma(t); accepts scalars or arrays.  IMPULSE has no pointwise value."""
    t = np.asarray(t, dtype=float)
    if c.kind is CouplingKind.IMPULSE:
        raise ValueError("an impulsive coupling has no pointwise value")
    out = _profile(c, t - c.t0)
    return out[()] if out.ndim == 0 else out


def _profile(c: CouplingProfile, tau: np.ndarray) -> np.ndarray:
    if c.kind is CouplingKind.BOXCAR:
        # closed window, endpoints included
        return np.where(np.abs(tau) <= c.epsilon / 2, c.strength / c.epsilon, 0.0)
    s = c.epsilon
    return c.strength * np.exp(-0.5 * (tau / s) ** 2) / (s * math.sqrt(2 * math.pi))


def simpson_uniform(y: np.ndarray, step: float) -> complex:
    """Composite Simpson rule on an odd number of equally spaced samples."""
    y = np.asarray(y)
    n = y.size
    if n < 3 or n % 2 == 0:
        raise ValueError(f"Simpson's rule needs an odd number (>= 3) of samples, got {n}")
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return np.sum(w * y) * step / 3.0


def _window_indices(grid: TimeGrid, c: CouplingProfile) -> tuple[int, int]:
    """Inclusive node range symmetric about the coupling centre."""
    try:
        k0 = grid.index_of(c.t0)
    except ValueError:
        raise GridCoverageError(f"coupling centre t0 = {c.t0!r} is not a grid node") from None
    if c.kind is CouplingKind.BOXCAR:
        m = (c.epsilon / 2) / grid.step
        mr = int(round(m))
        if mr < 1 or abs(m - mr) > 1e-9 * max(1.0, m):
            raise GridCoverageError(
                f"boxcar edges t0 +/- {c.epsilon / 2!r} do not land on grid nodes "
                f"(step {grid.step!r}); use aligned_grid()"
            )
    else:
        mr = min(k0, grid.n - 1 - k0)
        if mr * grid.step < GAUSSIAN_SUPPORT_SIGMAS * c.epsilon * (1 - 1e-12):
            raise GridCoverageError(
                f"grid covers +/-{mr * grid.step:.4g} about t0 but the Gaussian coupling "
                f"needs +/-{GAUSSIAN_SUPPORT_SIGMAS * c.epsilon:.4g}"
            )
    lo, hi = k0 - mr, k0 + mr
    if lo < 0 or hi >= grid.n:
        raise GridCoverageError("coupling window extends beyond the sampled interval")
    return lo, hi


def pointer_translation(series: WeakValueSeries, c: CouplingProfile) -> complex:
    """Complex translation ``integral gamma(t) A_w(t) dt``.

    BOXCAR and GAUSSIAN profiles are integrated with composite Simpson over
    the grid nodes inside the (symmetric) support.  The nodes are symmetric
    about t0 and so are the Simpson weights, hence an integrand that is odd
    about t0 integrates to zero up to rounding.  IMPULSE returns
    ``strength * A_w(t0)``.
    """
    grid = series.grid
    if c.kind is CouplingKind.IMPULSE:
        try:
            k0 = grid.index_of(c.t0)
        except ValueError:
            raise GridCoverageError(f"impulse time {c.t0!r} is not a grid node") from None
        return complex(c.strength * series.values[k0])
    lo, hi = _window_indices(grid, c)
    m = (hi - lo) // 2
    # offsets from the coupling centre, exactly antisymmetric
    tau = np.arange(-m, m + 1) * grid.step
    if c.kind is CouplingKind.BOXCAR:
        gamma = np.full(tau.size, c.strength / c.epsilon)
    else:
        gamma = _profile(c, tau)
    return complex(simpson_uniform(gamma * series.values[lo : hi + 1], grid.step))


def coefficient_series(series: WeakValueSeries, c: CouplingProfile) -> CoefficientSeries:
    """c(t) = gamma(t) A_w(t) sampled on the series grid."""
    return CoefficientSeries(series.grid, coupling_eval(c, series.times) * series.values, c.picture)


def closed_form_translation(example: ClosedFormExample, gamma0: float, omega: float, epsilon: float) -> complex:
    """Boxcar translation of the two illustrative weak values, in closed form."""
    example = ClosedFormExample(example)
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if omega == 0:
        raise ValueError("omega must be non-zero")
    x = omega * epsilon
    value = gamma0 * math.sin(x) / x
    if example is ClosedFormExample.PT_EXAMPLE:
        return complex(value, 0.0)
    return complex(0.0, value)


def example_weak_value(example: ClosedFormExample, omega: float, t, t0: float = 0.0):
    """The illustrative analytic weak values, for synthetic series."""
    phase = 2 * omega * (np.asarray(t, dtype=float) - t0)
    if ClosedFormExample(example) is ClosedFormExample.PT_EXAMPLE:
        return np.cos(phase) + 1j * np.sin(phase)
    return np.sin(phase) + 1j * np.cos(phase)


def aligned_grid(grid: TimeGrid, c: CouplingProfile) -> tuple[TimeGrid, bool]:
    """Refine ``grid`` so that a BOXCAR window ends on grid nodes.

    The step is reduced to ``epsilon / (2 m)`` for the smallest integer m that
    does not coarsen the grid, and the half-width is extended (never shrunk) to
    a whole number of steps.  Returns the grid and whether it changed.
    """
    if c.kind is not CouplingKind.BOXCAR:
        return grid, False
    half = c.epsilon / 2
    m = half / grid.step
    if abs(m - round(m)) <= 1e-9 * max(1.0, m) and round(m) >= 1:
        return grid, False
    m = max(1, math.ceil(m - 1e-9))
    step = half / m
    k = math.ceil(grid.half_width / step - 1e-9)
    return TimeGrid(grid.t0, k * step, 2 * k + 1), True
