"""Scenario files: a JSON document describing one PPS run.

Top-level sections (all but ``system`` optional)::

    system   dim, hbar, omega, pre, post, H_i, H_f, A
    timing   t0, dt_i, dt_f, half_width, n
    coupling kind, gamma0, epsilon, picture
    pointer  var_q, center_q, center_p, mass, grid {n, half_width},
             oracle_gamma0, or samples {grid_min, grid_step, re, im}
    run      outputs, tolerance, overlap_floor, closed_form, sweeps

States are ``{"re": [...], "im": [...]}`` and matrices
``{"re": [[...]], "im": [[...]]}``; a missing ``im`` means zero.  When
``system.omega`` is given, H_i and H_f are read in units of ``hbar * omega``.
"""

from __future__ import annotations

import json
import logging
import math
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .config import DEFAULT
from .coupling import ClosedFormExample, CouplingKind, CouplingProfile, aligned_grid
from .pointer import PointerState, gaussian_pointer, pointer_from_samples
from .pps import PpsScenario, TimeGrid
from .quantum import Observable, StateVector, hermitian_deviation
from .symmetry import Picture

log = logging.getLogger(__name__)

OUTPUTS = ("SERIES_CSV", "SYMMETRY_JSON", "POINTER_JSON")
SWEEP_PARAMS = ("gamma0", "epsilon", "omega")


class ScenarioError(ValueError):
    """Invalid scenario file; carries the offending field and its line."""

    def __init__(self, field: str, message: str, line: int | None = None):
        self.field = field
        self.line = line
        where = f" (line {line})" if line else ""
        super().__init__(f"{field}{where}: {message}")


@dataclass(frozen=True)
class PointerSpec:
    """Gaussian parameters, or explicit samples when ``samples`` is set."""

    var_q: float = 1.0
    center_q: float = 0.0
    center_p: float = 0.0
    mass: float = 1.0
    n_grid: int = 4096
    half_width: float | None = None
    samples: tuple | None = None  # (grid_min, grid_step, psi)
    oracle_gamma0: tuple[float, ...] = (0.02, 0.01)

    def build(self, hbar: float) -> PointerState:
        if self.samples is not None:
            grid_min, grid_step, psi = self.samples
            return pointer_from_samples(grid_min, grid_step, psi, self.mass, hbar)
        return gaussian_pointer(
            self.center_q,
            self.center_p,
            self.var_q,
            n_grid=self.n_grid,
            half_width=self.half_width,
            mass=self.mass,
            hbar=hbar,
        )


@dataclass(frozen=True, eq=False)
class RunConfig:
    scenario: PpsScenario
    grid: TimeGrid
    coupling: CouplingProfile
    pointer: PointerSpec = field(default_factory=PointerSpec)
    sweeps: dict = field(default_factory=dict)
    outputs: tuple[str, ...] = OUTPUTS
    tolerance: float = DEFAULT.symmetry
    closed_form: ClosedFormExample | None = None
    omega: float | None = None
    # H_i, H_f in units of hbar*omega; only set when omega is declared
    generator_units: tuple | None = None
    requested_grid: TimeGrid | None = None
    notes: tuple[str, ...] = ()
    name: str = "scenario"

    @property
    def grid_refined(self) -> bool:
        return self.requested_grid is not None and self.requested_grid != self.grid

    def with_gamma0(self, gamma0: float) -> RunConfig:
        return replace(self, coupling=replace(self.coupling, strength=float(gamma0)))

    def with_epsilon(self, epsilon: float) -> RunConfig:
        coupling = replace(self.coupling, epsilon=float(epsilon))
        base = self.requested_grid or self.grid
        grid, _ = aligned_grid(base, coupling)
        return replace(self, coupling=coupling, grid=grid)

    def with_omega(self, omega: float) -> RunConfig:
        if self.generator_units is None:
            raise ScenarioError("system.omega", "omega sweep requires system.omega in the scenario")
        hi, hf = self.generator_units
        scale = self.scenario.hbar * float(omega)
        scenario = self.scenario.replace(H_i=Observable(hi * scale), H_f=Observable(hf * scale))
        return replace(self, scenario=scenario, omega=float(omega))

    def with_tolerance(self, tolerance: float) -> RunConfig:
        return replace(self, tolerance=float(tolerance))


# -- locating fields in the source text ----------------------------------------


class _Locator:
    def __init__(self, text: str):
        self.text = text

    def line(self, path: str) -> int | None:
        """Line of the last key in a dotted path, searched after its parents."""
        pos, found = 0, None
        for key in path.split("."):
            m = re.compile(r'"%s"\s*:' % re.escape(key)).search(self.text, pos)
            if m is None:
                break
            pos, found = m.start(), m.start()
        if found is None:
            return None
        return self.text.count("\n", 0, found) + 1


class _Reader:
    def __init__(self, doc: dict, locator: _Locator):
        self.doc = doc
        self.loc = locator

    def error(self, path: str, message: str) -> ScenarioError:
        return ScenarioError(path, message, self.loc.line(path))

    def section(self, name: str, required: bool = False) -> dict:
        value = self.doc.get(name)
        if value is None:
            if required:
                raise self.error(name, "missing required section")
            return {}
        if not isinstance(value, dict):
            raise self.error(name, "section must be a JSON object")
        return value

    def number(self, sec: dict, path: str, default=None, *, positive=False, nonneg=False) -> float:
        key = path.rsplit(".", 1)[-1]
        if key not in sec:
            if default is None:
                raise self.error(path, "missing required field")
            return default
        value = sec[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            raise self.error(path, f"expected a finite number, got {value!r}")
        if positive and value <= 0:
            raise self.error(path, f"must be positive, got {value!r}")
        if nonneg and value < 0:
            raise self.error(path, f"must be non-negative, got {value!r}")
        return float(value)

    def integer(self, sec: dict, path: str, default: int) -> int:
        key = path.rsplit(".", 1)[-1]
        value = sec.get(key, default)
        if isinstance(value, bool) or not isinstance(value, int):
            raise self.error(path, f"expected an integer, got {value!r}")
        return value

    def choice(self, sec: dict, path: str, options, default):
        key = path.rsplit(".", 1)[-1]
        value = sec.get(key, default)
        if not isinstance(value, str) or value.upper() not in options:
            raise self.error(path, f"expected one of {sorted(options)}, got {value!r}")
        return value.upper()

    def complex_array(self, sec: dict, path: str, ndim: int) -> np.ndarray:
        key = path.rsplit(".", 1)[-1]
        if key not in sec:
            raise self.error(path, "missing required field")
        value = sec[key]
        if isinstance(value, dict):
            if "re" not in value:
                raise self.error(path, 'expected an object with "re" (and optional "im")')
            try:
                re_part = np.array(value["re"], dtype=float)
                im_part = np.array(value.get("im", np.zeros_like(re_part)), dtype=float)
            except (TypeError, ValueError) as exc:
                raise self.error(path, f"non-numeric entries ({exc})") from None
            if re_part.shape != im_part.shape:
                raise self.error(path, f"re shape {re_part.shape} != im shape {im_part.shape}")
            arr = re_part + 1j * im_part
        else:
            try:
                arr = np.array(value, dtype=float).astype(complex)
            except (TypeError, ValueError) as exc:
                raise self.error(path, f"non-numeric entries ({exc})") from None
        if arr.ndim != ndim:
            raise self.error(path, f"expected a {ndim}-d array, got shape {arr.shape}")
        return arr


def _state(reader: _Reader, sec: dict, path: str, dim: int, notes: list) -> StateVector:
    amps = reader.complex_array(sec, path, 1)
    if amps.size != dim:
        raise reader.error(path, f"dimension mismatch: {amps.size} amplitudes, dim is {dim}")
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise reader.error(path, "zero vector")
    if abs(norm - 1) > DEFAULT.renormalisation_warning:
        msg = f"{path} renormalised (norm was {norm:.6g})"
        log.warning(msg)
        notes.append(msg)
    return StateVector(amps / norm)


def _matrix(reader: _Reader, sec: dict, path: str, dim: int, default_zero: bool = False) -> np.ndarray:
    key = path.rsplit(".", 1)[-1]
    if default_zero and key not in sec:
        return np.zeros((dim, dim), dtype=complex)
    m = reader.complex_array(sec, path, 2)
    if m.shape != (dim, dim):
        raise reader.error(path, f"dimension mismatch: shape {m.shape}, dim is {dim}")
    dev = hermitian_deviation(m)
    if dev > DEFAULT.construction * max(1.0, float(np.abs(m).max())):
        raise reader.error(path, f"matrix is not Hermitian (max |M - M^dagger| = {dev:.3e})")
    return m


def parse_scenario(path: str | Path) -> RunConfig:
    """Read and validate a scenario file.  Raises ScenarioError or OSError."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_scenario_text(text, name=path.stem)


def parse_scenario_text(text: str, name: str = "scenario") -> RunConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("<document>", f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict):
        raise ScenarioError("<document>", "top level must be a JSON object", 1)
    r = _Reader(doc, _Locator(text))
    unknown = set(doc) - {"system", "timing", "coupling", "pointer", "run", "description"}
    if unknown:
        first = sorted(unknown)[0]
        raise r.error(first, "unknown section")
    notes: list[str] = []

    system = r.section("system", required=True)
    pre_raw = r.complex_array(system, "system.pre", 1)
    dim = r.integer(system, "system.dim", pre_raw.size)
    if dim < 2:
        raise r.error("system.dim", "dimension must be >= 2")
    hbar = r.number(system, "system.hbar", 1.0, positive=True)
    pre = _state(r, system, "system.pre", dim, notes)
    post = _state(r, system, "system.post", dim, notes)
    A = _matrix(r, system, "system.A", dim)
    hi = _matrix(r, system, "system.H_i", dim, default_zero=True)
    hf = _matrix(r, system, "system.H_f", dim, default_zero=True)
    omega = None
    generator_units = None
    if "omega" in system:
        omega = r.number(system, "system.omega")
        generator_units = (hi, hf)
        hi, hf = hi * hbar * omega, hf * hbar * omega

    timing = r.section("timing")
    t0 = r.number(timing, "timing.t0", 0.0)
    n = r.integer(timing, "timing.n", 1001)
    if n < 3 or n % 2 == 0:
        raise r.error("timing.n", "sample count must be an odd integer >= 3")
    grid_in = TimeGrid(t0, r.number(timing, "timing.half_width", 1.0, positive=True), n)

    run = r.section("run")
    floor = r.number(run, "run.overlap_floor", DEFAULT.overlap_floor, positive=True)
    scenario = PpsScenario(
        pre,
        post,
        Observable(hi),
        Observable(hf),
        Observable(A),
        dt_i=r.number(timing, "timing.dt_i", 0.0, nonneg=True),
        dt_f=r.number(timing, "timing.dt_f", 0.0, nonneg=True),
        hbar=hbar,
        overlap_floor=floor,
        t_ref=t0,
    )

    csec = r.section("coupling")
    kind = r.choice(csec, "coupling.kind", {k.value for k in CouplingKind}, "BOXCAR")
    coupling = CouplingProfile(
        CouplingKind(kind),
        r.number(csec, "coupling.gamma0", 1.0),
        t0=t0,
        epsilon=r.number(csec, "coupling.epsilon", 0.1, positive=True),
        picture=Picture(r.choice(csec, "coupling.picture", {p.value for p in Picture}, "MOMENTUM_COUPLING")),
    )
    grid, refined = aligned_grid(grid_in, coupling)
    if refined:
        msg = (
            f"grid refined from n={grid_in.n}, half_width={grid_in.half_width!r} to "
            f"n={grid.n}, half_width={grid.half_width!r} so boxcar edges land on nodes"
        )
        log.info(msg)
        notes.append(msg)

    pointer = _pointer_spec(r, r.section("pointer"))

    outputs = run.get("outputs", list(OUTPUTS))
    if not isinstance(outputs, list) or not outputs or any(o not in OUTPUTS for o in outputs):
        raise r.error("run.outputs", f"expected a non-empty list drawn from {list(OUTPUTS)}")
    tolerance = r.number(run, "run.tolerance", DEFAULT.symmetry, positive=True)
    closed_form = None
    if "closed_form" in run:
        closed_form = ClosedFormExample(
            r.choice(run, "run.closed_form", {e.value for e in ClosedFormExample}, None)
        )
    sweeps = {}
    sw = run.get("sweeps", {})
    if not isinstance(sw, dict):
        raise r.error("run.sweeps", "expected an object mapping parameter to values")
    for key, values in sw.items():
        if key not in SWEEP_PARAMS:
            raise r.error(f"run.sweeps.{key}", f"unknown sweep parameter; expected one of {SWEEP_PARAMS}")
        sweeps[key] = validate_sweep_values(values, f"run.sweeps.{key}", r)
    if "omega" in sweeps and omega is None:
        raise r.error("run.sweeps.omega", "omega sweep requires system.omega")

    return RunConfig(
        scenario=scenario,
        grid=grid,
        coupling=coupling,
        pointer=pointer,
        sweeps=sweeps,
        outputs=tuple(o for o in OUTPUTS if o in outputs),
        tolerance=tolerance,
        closed_form=closed_form,
        omega=omega,
        generator_units=generator_units,
        requested_grid=grid_in,
        notes=tuple(notes),
        name=name,
    )


def validate_sweep_values(values, field_path: str, reader: _Reader | None = None) -> tuple[float, ...]:
    def fail(msg):
        if reader is not None:
            return reader.error(field_path, msg)
        return ScenarioError(field_path, msg)

    if not isinstance(values, (list, tuple)) or len(values) == 0:
        raise fail("sweep list must be non-empty")
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise fail(f"non-numeric sweep value {v!r}")
        out.append(float(v))
    return tuple(out)


def _pointer_spec(r: _Reader, sec: dict) -> PointerSpec:
    oracle = (0.02, 0.01)
    if "oracle_gamma0" in sec:
        oracle = validate_sweep_values(sec["oracle_gamma0"], "pointer.oracle_gamma0", r)
    mass = r.number(sec, "pointer.mass", 1.0, positive=True)
    if "samples" in sec:
        smp = sec["samples"]
        if not isinstance(smp, dict):
            raise r.error("pointer.samples", "expected an object")
        psi = r.complex_array({"samples": smp}, "pointer.samples", 1)
        return PointerSpec(
            mass=mass,
            samples=(
                r.number(smp, "pointer.samples.grid_min"),
                r.number(smp, "pointer.samples.grid_step", positive=True),
                psi,
            ),
            oracle_gamma0=oracle,
        )
    grid = sec.get("grid", {})
    if not isinstance(grid, dict):
        raise r.error("pointer.grid", "expected an object")
    half = grid.get("half_width")
    return PointerSpec(
        var_q=r.number(sec, "pointer.var_q", 1.0, positive=True),
        center_q=r.number(sec, "pointer.center_q", 0.0),
        center_p=r.number(sec, "pointer.center_p", 0.0),
        mass=mass,
        n_grid=r.integer(grid, "pointer.grid.n", 4096),
        half_width=None if half is None else r.number(grid, "pointer.grid.half_width", positive=True),
        oracle_gamma0=oracle,
    )
