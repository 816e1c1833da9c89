"""Run orchestration: weak-value series -> symmetry -> translation -> pointer oracle."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .config import DEFAULT
from .coupling import CouplingKind, closed_form_translation, pointer_translation
from .pointer import (
    PointerObservable,
    exact_pointer,
    pointer_moments,
    predict_mean,
    predict_variance,
)
from .pps import TimeGrid, WeakValueSeries, weak_energy, weak_value, weak_value_derivative, weak_value_series
from .reports import SERIES_HEADER, dumps_csv, dumps_json, read_series_csv
from .scenario import RunConfig, ScenarioError, validate_sweep_values
from .symmetry import SymmetryReport, Vanishing, classify

log = logging.getLogger(__name__)

# translation components below this (relative to |gamma0| sup|A_w|) count as vanished
TRANSLATION_VANISHING_TOL = 1e-10


def _complex(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def series_rows(config: RunConfig, series: WeakValueSeries):
    s = config.scenario
    for t, aw in zip(series.times, series.values):
        dot = weak_value_derivative(s, t)
        energy = weak_energy(s, t)
        yield (t, aw.real, aw.imag, dot.real, dot.imag, energy.real, energy.imag)


def translation_check(report: SymmetryReport, translation: complex, gamma0: float, series: WeakValueSeries) -> dict:
    """Measured |Re|, |Im| of the translation against the symmetry prediction."""
    scale = abs(gamma0) * float(np.max(np.abs(series.values)))
    re_n = abs(translation.real) / scale if scale else 0.0
    im_n = abs(translation.imag) / scale if scale else 0.0
    tol = TRANSLATION_VANISHING_TOL
    pred = report.predicted_vanishing
    consistent = {
        Vanishing.IMAGINARY_PART: im_n <= tol,
        Vanishing.REAL_PART: re_n <= tol,
        Vanishing.BOTH: re_n <= tol and im_n <= tol,
        Vanishing.NONE: True,
    }[pred]
    return {
        "abs_re": abs(translation.real),
        "abs_im": abs(translation.imag),
        "normalizer": scale,
        "abs_re_normalized": re_n,
        "abs_im_normalized": im_n,
        "vanishing_tolerance": tol,
        "prediction_consistent": consistent,
    }


def symmetry_document(config: RunConfig, series: WeakValueSeries, seed: int | None = None) -> dict:
    report = classify(series, config.tolerance)
    c = config.coupling
    translation = pointer_translation(series, c)
    doc = {
        "schema": "weakpt.symmetry/1",
        "scenario": config.name,
        "grid": _grid_dict(config),
        "symmetry": report.as_dict(),
        "translation": {
            "label": c.label,
            "picture": c.picture.value,
            "coupling_kind": c.kind.value,
            "gamma0": c.strength,
            "epsilon": c.epsilon if c.kind is not CouplingKind.IMPULSE else None,
            "value": _complex(translation),
            **translation_check(report, translation, c.strength, series),
        },
        "weak_value_t0": _complex(series.values[series.grid.center]),
    }
    if config.closed_form is not None and c.kind is CouplingKind.BOXCAR:
        cf = closed_form_translation(config.closed_form, c.strength, config.omega or 1.0, c.epsilon)
        doc["closed_form"] = {
            "example": config.closed_form.value,
            "omega": config.omega or 1.0,
            "value": _complex(cf),
            "abs_error": abs(cf - translation),
        }
    doc["metadata"] = {"seed": seed, "notes": list(config.notes)}
    return doc


def _grid_dict(config: RunConfig) -> dict:
    g = config.grid
    out = {"t0": g.t0, "half_width": g.half_width, "n": g.n, "step": g.step, "refined": config.grid_refined}
    if config.grid_refined:
        out["requested_n"] = config.requested_grid.n
        out["requested_half_width"] = config.requested_grid.half_width
    return out


_MOMENTS = ("mean_q", "mean_p", "var_q", "var_p")


def oracle_point(config: RunConfig, gamma0: float, phi=None) -> dict:
    """Exact post-selected pointer moments vs. first-order predictions at gamma0."""
    s = config.scenario
    phi = phi if phi is not None else config.pointer.build(s.hbar)
    aw0 = weak_value(s, s.t_ref)
    final, prob = exact_pointer(s, gamma0, phi)
    oracle = pointer_moments(final).as_dict()
    predicted = {
        "mean_q": predict_mean(phi, PointerObservable.Q, gamma0, aw0),
        "mean_p": predict_mean(phi, PointerObservable.P, gamma0, aw0),
        "var_q": predict_variance(phi, PointerObservable.Q, gamma0, aw0),
        "var_p": predict_variance(phi, PointerObservable.P, gamma0, aw0),
    }
    residual = {k: abs(oracle[k] - predicted[k]) for k in _MOMENTS}
    return {
        "gamma0": gamma0,
        "post_selection_probability": prob,
        "oracle": oracle,
        "predicted": predicted,
        "residual": residual,
    }


def pointer_document(config: RunConfig) -> dict:
    s = config.scenario
    phi = config.pointer.build(s.hbar)
    initial = pointer_moments(phi)
    points = [oracle_point(config, g, phi) for g in config.pointer.oracle_gamma0]
    ratios = []
    for a, b in zip(points, points[1:]):
        ratios.append(
            {
                "gamma0_pair": [a["gamma0"], b["gamma0"]],
                **{k: _ratio(a["residual"][k], b["residual"][k]) for k in _MOMENTS},
            }
        )
    return {
        "schema": "weakpt.pointer/1",
        "scenario": config.name,
        "coupling": "IMPULSE_MOMENTUM",
        "weak_value_t0": _complex(weak_value(s, s.t_ref)),
        "mass": phi.mass,
        "hbar": phi.hbar,
        "initial": initial.as_dict(),
        "points": points,
        "residual_ratios": ratios,
    }


def _ratio(a: float, b: float):
    return a / b if b > 0 else None


def build_outputs(config: RunConfig, seed: int | None = None) -> dict[str, str]:
    """Render every requested report; nothing is written here."""
    series = weak_value_series(config.scenario, config.grid)
    files: dict[str, str] = {}
    if "SERIES_CSV" in config.outputs:
        files["series.csv"] = dumps_csv(SERIES_HEADER, series_rows(config, series))
    if "SYMMETRY_JSON" in config.outputs:
        files["symmetry.json"] = dumps_json(symmetry_document(config, series, seed))
    if "POINTER_JSON" in config.outputs:
        files["pointer.json"] = dumps_json(pointer_document(config))
    return files


def write_outputs(files: dict[str, str], out_dir: Path) -> list[Path]:
    """Write all files or none: partial outputs are removed on failure."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    try:
        for name, text in files.items():
            path = out_dir / name
            path.write_text(text, encoding="utf-8")
            written.append(path)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written


def run(config: RunConfig, out_dir: Path, seed: int | None = None) -> list[Path]:
    return write_outputs(build_outputs(config, seed), out_dir)


SWEEP_HEADER = (
    "param",
    "value",
    "re_translation",
    "im_translation",
    "re_closed_form",
    "im_closed_form",
    "oracle_gamma0",
    "oracle_shift_q",
    "predicted_shift_q",
    "residual_q",
    "oracle_shift_p",
    "predicted_shift_p",
    "residual_p",
)


def _sweep_point(config: RunConfig, param: str, value: float) -> tuple:
    if param == "gamma0":
        cfg = config.with_gamma0(value)
        oracle_gamma0 = value
    elif param == "epsilon":
        cfg = config.with_epsilon(value)
        oracle_gamma0 = config.pointer.oracle_gamma0[0]
    elif param == "omega":
        cfg = config.with_omega(value)
        oracle_gamma0 = config.pointer.oracle_gamma0[0]
    else:
        raise ScenarioError("--param", f"unknown sweep parameter {param!r}")
    series = weak_value_series(cfg.scenario, cfg.grid)
    translation = pointer_translation(series, cfg.coupling)
    cf = None
    if cfg.closed_form is not None and cfg.coupling.kind is CouplingKind.BOXCAR:
        cf = closed_form_translation(cfg.closed_form, cfg.coupling.strength, cfg.omega or 1.0, cfg.coupling.epsilon)
    point = oracle_point(cfg, oracle_gamma0)
    init = pointer_moments(cfg.pointer.build(cfg.scenario.hbar))
    o, p = point["oracle"], point["predicted"]
    return (
        param,
        value,
        translation.real,
        translation.imag,
        None if cf is None else cf.real,
        None if cf is None else cf.imag,
        oracle_gamma0,
        o["mean_q"] - init.mean_q,
        p["mean_q"] - init.mean_q,
        point["residual"]["mean_q"],
        o["mean_p"] - init.mean_p,
        p["mean_p"] - init.mean_p,
        point["residual"]["mean_p"],
    )


def sweep(config: RunConfig, param: str, values=None, workers: int | None = None) -> str:
    """One CSV row per sweep point, ordered by parameter value."""
    if values is None:
        if param not in config.sweeps:
            raise ScenarioError(f"run.sweeps.{param}", "no sweep values declared")
        values = config.sweeps[param]
    values = sorted(validate_sweep_values(list(values), f"sweep.{param}"))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(lambda v: _sweep_point(config, param, v), values))
    return dumps_csv(SWEEP_HEADER, rows)


def classify_csv(path, t0: float, tolerance: float = DEFAULT.symmetry) -> dict:
    """Certify an externally produced series CSV (columns t, re_Aw, im_Aw)."""
    t, values = read_series_csv(path)
    n = t.size
    if n < 3 or n % 2 == 0:
        raise ValueError(f"series must have an odd number (>= 3) of samples, got {n}")
    grid = TimeGrid(t0, (t[-1] - t[0]) / 2, n)
    if np.max(np.abs(t - grid.times)) > 1e-9 * max(grid.step, abs(t0)):
        raise ValueError("sample times are not a uniform grid symmetric about t0")
    series = WeakValueSeries(grid, values)
    report = classify(series, tolerance)
    return {
        "schema": "weakpt.symmetry/1",
        "source": str(path),
        "grid": {"t0": t0, "half_width": grid.half_width, "n": n, "step": grid.step},
        "symmetry": report.as_dict(),
    }
