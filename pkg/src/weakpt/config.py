"""Numerical tolerances shared across the package."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # state norm and operator Hermiticity at construction
    construction: float = 1e-12
    # agreement of composed / reversed propagations
    propagation: float = 1e-10
    # minimum |<psi_f(t)|psi_i(t)>| before a weak value is refused
    overlap_floor: float = 1e-8
    # symmetry verdicts on analytically generated series
    symmetry: float = 1e-9
    # relative finite-difference step, scaled by max(1, |t|)
    fd_step: float = 1e-4
    # pointer normalisation and boundary amplitude
    pointer_norm: float = 1e-10
    pointer_edge: float = 1e-8
    # slack on var_q * var_p >= (hbar / 2)**2
    uncertainty_slack: float = 1e-9
    # states renormalised by more than this trigger a warning when parsed
    renormalisation_warning: float = 1e-6


DEFAULT = Tolerances()
