"""Even/odd time-symmetry certification of sampled weak values.

A series is *even Hermitian* about t0 when ``conj(A_w(t0 - tau)) == A_w(t0 + tau)``
and *odd Hermitian* when ``conj(A_w(t0 - tau)) == -A_w(t0 + tau)``.  The weak
interaction Hamiltonians ``gamma(t) A_w(t) p`` and ``-theta(t) A_w(t) q`` with an
even coupling are PT symmetric exactly in the first case and anti-PT symmetric
exactly in the second.  Equivalently: PT iff Re A_w is even and Im A_w is odd;
anti-PT iff Re A_w is odd and Im A_w is even.

Pointwise violations are measured in the max-of-components norm
``max(|Re z|, |Im z|)``.  With that choice the complex (Hermitian-mirror) test
and the component-wise test are the same inequality, so both routes agree on
the boolean outcome at any tolerance.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT
from .pps import TimeGrid, WeakValueSeries


class Verdict(str, enum.Enum):
    PT = "PT"
    ANTI_PT = "ANTI_PT"
    BOTH = "BOTH"
    NEITHER = "NEITHER"


class Vanishing(str, enum.Enum):
    """Which part of the pointer translation is predicted to vanish."""

    IMAGINARY_PART = "IMAGINARY_PART"
    REAL_PART = "REAL_PART"
    BOTH = "BOTH"
    NONE = "NONE"


class Picture(str, enum.Enum):
    MOMENTUM_COUPLING = "MOMENTUM_COUPLING"  # A p, translates position (q_w)
    POSITION_COUPLING = "POSITION_COUPLING"  # -A q, translates momentum (p_w)


_PREDICTION = {
    Verdict.PT: Vanishing.IMAGINARY_PART,
    Verdict.ANTI_PT: Vanishing.REAL_PART,
    Verdict.BOTH: Vanishing.BOTH,
    Verdict.NEITHER: Vanishing.NONE,
}


class SymmetryConsistencyError(AssertionError):
    pass


@dataclass(frozen=True)
class SymmetryReport:
    verdict: Verdict
    pt_residual: float
    anti_pt_residual: float
    re_even_residual: float
    re_odd_residual: float
    im_even_residual: float
    im_odd_residual: float
    predicted_vanishing: Vanishing
    tolerance: float

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "tolerance": self.tolerance,
            "pt_residual": self.pt_residual,
            "anti_pt_residual": self.anti_pt_residual,
            "re_even_residual": self.re_even_residual,
            "re_odd_residual": self.re_odd_residual,
            "im_even_residual": self.im_even_residual,
            "im_odd_residual": self.im_odd_residual,
            "predicted_vanishing": self.predicted_vanishing.value,
        }


def mirrored(values: np.ndarray) -> np.ndarray:
    """values at t0 - tau, aligned with values at t0 + tau (grid reversal)."""
    return np.asarray(values)[::-1]


def even_odd_decompose(series: WeakValueSeries) -> tuple[WeakValueSeries, WeakValueSeries]:
    v = series.values
    vm = mirrored(v)
    even = (v + vm) / 2
    odd = (v - vm) / 2
    return WeakValueSeries(series.grid, even), WeakValueSeries(series.grid, odd)


def _box_norm(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z)
    return np.maximum(np.abs(z.real), np.abs(z.imag))


def _sup(x: np.ndarray) -> float:
    return float(np.max(x)) if x.size else 0.0


def mirror_residuals(values: np.ndarray) -> tuple[float, float, float]:
    """(scale, PT residual, anti-PT residual) from the Hermitian mirror.

    Residuals are normalised by ``scale = sup |A_w|``; both are zero for an
    all-zero series.
    """
    v = np.asarray(values, dtype=complex)
    scale = float(np.max(np.abs(v)))
    if scale == 0.0:
        return 0.0, 0.0, 0.0
    cm = np.conj(mirrored(v))
    return scale, _sup(_box_norm(cm - v)) / scale, _sup(_box_norm(cm + v)) / scale


def component_residuals(values: np.ndarray) -> dict[str, float]:
    """Normalised sup-norm residuals of Re/Im against even/odd symmetry."""
    v = np.asarray(values, dtype=complex)
    scale = float(np.max(np.abs(v)))
    if scale == 0.0:
        return dict.fromkeys(("re_even", "re_odd", "im_even", "im_odd"), 0.0)
    re, im = v.real, v.imag
    re_m, im_m = mirrored(re), mirrored(im)
    return {
        "re_even": _sup(np.abs(re_m - re)) / scale,
        "re_odd": _sup(np.abs(re_m + re)) / scale,
        "im_even": _sup(np.abs(im_m - im)) / scale,
        "im_odd": _sup(np.abs(im_m + im)) / scale,
    }


def classify(series: WeakValueSeries, tolerance: float = DEFAULT.symmetry) -> SymmetryReport:
    """Certify the time symmetry of a sampled weak value.

    Parameters
    ----------
    series : WeakValueSeries
        Samples on a grid symmetric about its ``t0``.
    tolerance : float
        Threshold on the normalised residuals.

    Returns
    -------
    SymmetryReport
        Verdict, the Hermitian-mirror residuals, the four component residuals
        and the predicted vanishing part of the pointer translation.  The
        mirror-level and component-level verdicts are cross-checked and a
        disagreement raises :class:`SymmetryConsistencyError`.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    _, pt_res, anti_res = mirror_residuals(series.values)
    comp = component_residuals(series.values)

    is_pt = pt_res <= tolerance
    is_anti = anti_res <= tolerance
    if is_pt != (comp["re_even"] <= tolerance and comp["im_odd"] <= tolerance):
        raise SymmetryConsistencyError("PT verdict disagrees with Re-even/Im-odd test")
    if is_anti != (comp["re_odd"] <= tolerance and comp["im_even"] <= tolerance):
        raise SymmetryConsistencyError("anti-PT verdict disagrees with Re-odd/Im-even test")

    if is_pt and is_anti:
        verdict = Verdict.BOTH
    elif is_pt:
        verdict = Verdict.PT
    elif is_anti:
        verdict = Verdict.ANTI_PT
    else:
        verdict = Verdict.NEITHER
    return SymmetryReport(
        verdict=verdict,
        pt_residual=pt_res,
        anti_pt_residual=anti_res,
        re_even_residual=comp["re_even"],
        re_odd_residual=comp["re_odd"],
        im_even_residual=comp["im_even"],
        im_odd_residual=comp["im_odd"],
        predicted_vanishing=_PREDICTION[verdict],
        tolerance=tolerance,
    )


@dataclass(frozen=True, eq=False)
class CoefficientSeries:
    """Samples of c(t) = gamma(t) A_w(t), the weak-Hamiltonian coefficient."""

    grid: TimeGrid
    coeff: np.ndarray = field(repr=False)
    picture: Picture = Picture.MOMENTUM_COUPLING

    def __post_init__(self):
        c = np.array(self.coeff, dtype=complex).reshape(-1)
        if c.size != self.grid.n:
            raise ValueError(f"expected {self.grid.n} coefficients, got {c.size}")
        c.setflags(write=False)
        object.__setattr__(self, "coeff", c)
        object.__setattr__(self, "picture", Picture(self.picture))


class UncertifiedCouplingError(ValueError):
    pass


def pt_transform(coeff: CoefficientSeries, coupling_even_certified: bool) -> CoefficientSeries:
    """Coefficient of the PT-transformed weak Hamiltonian.

    Time reversal sends t -> -t, i -> -i and flips p (or q); parity flips p
    (or q) back.  With an even coupling the net effect on the coefficient is
    ``c(t0 + tau) -> conj(c(t0 - tau))``, the same in both pictures.
    """
    if not coupling_even_certified:
        raise UncertifiedCouplingError(
            "PT transform of the coefficient requires a coupling even about t0"
        )
    return CoefficientSeries(coeff.grid, np.conj(mirrored(coeff.coeff)), coeff.picture)


def _pt_mismatch(coeff: CoefficientSeries, sign: int) -> tuple[float, float]:
    transformed = pt_transform(coeff, True).coeff
    return float(np.max(np.abs(transformed - sign * coeff.coeff))), float(np.max(np.abs(coeff.coeff)))


def is_pt_symmetric(
    coeff: CoefficientSeries, tol: float = DEFAULT.symmetry, coupling_even_certified: bool = True
) -> bool:
    pt_transform(coeff, coupling_even_certified)
    diff, scale = _pt_mismatch(coeff, +1)
    return diff <= tol * scale


def is_anti_pt_symmetric(
    coeff: CoefficientSeries, tol: float = DEFAULT.symmetry, coupling_even_certified: bool = True
) -> bool:
    pt_transform(coeff, coupling_even_certified)
    diff, scale = _pt_mismatch(coeff, -1)
    return diff <= tol * scale
