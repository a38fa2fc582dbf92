"""Command-line front end: single runs, parameter sweeps, cross-validation.

Configs are flat key=value text files (blank lines and # comments are
skipped). Scalar keys: delta, gamma, tau, n_pulses, free_time, substeps,
omega_min, omega_max, omega_step, engine, output_dir, format. Sweep keys
n_pulses_list, tau_list, delta_list take comma-separated values.

Exit codes: 0 success, 1 validation tolerance failure, 2 config parse
error, 3 parameter error. CSV output is byte-identical for identical
configs: summation order and float formatting are fixed, and every file
starts with a header embedding the full resolved parameter set.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .analysis import compare_spectra, find_peaks, positive_weight_fraction
from .closed_form import closed_spectrum, f_analytic, rho_gg_analytic
from .core import (DriveParams, FrequencyGrid, PulsespecError, Spectrum,
                   TimeGrid, make_frequency_grid, make_time_grid,
                   validate_params)
from .correlators import CorrelatorGrid, build_correlator_grids
from .lindblad import DensityMatrix, propagate_trajectory
from .spectrum_numeric import compute_numeric_spectrum


class ConfigError(Exception):
    """Malformed config file; maps to exit code 2."""


_FLOAT_KEYS = {"delta", "gamma", "tau", "free_time",
               "omega_min", "omega_max", "omega_step"}
_INT_KEYS = {"n_pulses", "substeps"}
_STR_KEYS = {"engine", "format", "output_dir"}
_LIST_KEYS = {"n_pulses_list", "tau_list", "delta_list"}
_ENGINES = ("numeric", "closed_form", "both")
_FORMATS = ("csv", "json", "both")

L2_REL_TOLERANCE = 0.05
SUM_RULE_TOLERANCE = 0.05
REFINEMENT_HINT = ("engine disagreement at quadrature level; "
                   "increase substeps (smaller dt) and rerun")


def parse_config(path: str) -> dict:
    """Parse a flat key=value config file into typed values."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    cfg: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        try:
            if key in _FLOAT_KEYS:
                cfg[key] = float(value)
            elif key in _INT_KEYS:
                cfg[key] = int(value)
            elif key == "engine":
                if value not in _ENGINES:
                    raise ConfigError(
                        f"line {lineno}: engine must be one of {_ENGINES}")
                cfg[key] = value
            elif key == "format":
                if value not in _FORMATS:
                    raise ConfigError(
                        f"line {lineno}: format must be one of {_FORMATS}")
                cfg[key] = value
            elif key == "output_dir":
                cfg[key] = value
            elif key == "n_pulses_list":
                cfg[key] = [int(v) for v in value.split(",")]
            elif key in _LIST_KEYS:
                cfg[key] = [float(v) for v in value.split(",")]
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError:
            raise ConfigError(
                f"line {lineno}: bad value {value!r} for {key}") from None
    return cfg


def _params_from(cfg: dict, **overrides) -> DriveParams:
    merged = dict(cfg)
    merged.update(overrides)
    missing = [k for k in ("delta", "tau", "n_pulses") if k not in merged]
    if missing:
        raise PulsespecError(
            f"missing required config keys: {', '.join(missing)}")
    kwargs = {"delta": merged["delta"], "tau": merged["tau"],
              "n_pulses": merged["n_pulses"]}
    if "gamma" in merged:
        kwargs["gamma"] = merged["gamma"]
    if merged.get("free_time") is not None:
        kwargs["free_time"] = merged["free_time"]
    return validate_params(DriveParams(**kwargs))


def _freq_grid(cfg: dict, p: DriveParams) -> FrequencyGrid:
    return make_frequency_grid(p,
                               omega_min=cfg.get("omega_min"),
                               omega_max=cfg.get("omega_max"),
                               omega_step=cfg.get("omega_step"))


def _numeric_spectrum(p: DriveParams, cfg: dict, fg: FrequencyGrid) -> Spectrum:
    g = make_time_grid(p, cfg.get("substeps"))
    traj = propagate_trajectory(p, g)
    cg = build_correlator_grids(p, g, traj)
    return compute_numeric_spectrum(p, g, cg, fg)


def _spectrum_for(engine: str, p: DriveParams, cfg: dict) -> Spectrum:
    fg = _freq_grid(cfg, p)
    if engine == "closed_form":
        return closed_spectrum(p, fg)
    return _numeric_spectrum(p, cfg, fg)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_spectrum_csv(path: Path, s: Spectrum) -> None:
    """Emit `omega,P1,P2,Q` rows with 17 significant digits after a
    comment header carrying the resolved parameters."""
    lines = [f"# {key} = {_fmt(s.meta[key])}" for key in sorted(s.meta)]
    lines.append("omega,P1,P2,Q")
    for j in range(s.omegas.size):
        lines.append(",".join(
            _fmt(float(v)) for v in (s.omegas[j], s.p1[j], s.p2[j], s.q[j])))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _complex_columns(arr: np.ndarray) -> dict:
    return {"real": [float(v) for v in arr.real],
            "imag": [float(v) for v in arr.imag]}


def write_spectrum_json(path: Path, s: Spectrum) -> None:
    doc = {
        "meta": s.meta,
        "omega": [float(v) for v in s.omegas],
        "p1": [float(v) for v in s.p1],
        "p2": [float(v) for v in s.p2],
        "q": [float(v) for v in s.q],
    }
    for name in ("raw_p1", "raw_p2", "raw_p3"):
        arr = getattr(s, name)
        if arr is not None:
            doc[name] = _complex_columns(arr)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _write_outputs(outdir: Path, stem: str, s: Spectrum, fmt: str) -> list[Path]:
    written = []
    if fmt in ("csv", "both"):
        path = outdir / f"{stem}.csv"
        write_spectrum_csv(path, s)
        written.append(path)
    if fmt in ("json", "both"):
        path = outdir / f"{stem}.json"
        write_spectrum_json(path, s)
        written.append(path)
    return written


def _write_report(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _peak_table(s: Spectrum) -> list[dict]:
    return [{"omega": omega, "q": q, "sign": sign}
            for omega, q, sign in find_peaks(s)]


def run_spectrum(cfg: dict, outdir: Path) -> int:
    engine = cfg.get("engine", "both")
    fmt = cfg.get("format", "csv")
    p = _params_from(cfg)
    spectra: dict[str, Spectrum] = {}
    if engine in ("numeric", "both"):
        spectra["numeric"] = _spectrum_for("numeric", p, cfg)
    if engine in ("closed_form", "both"):
        spectra["closed_form"] = _spectrum_for("closed_form", p, cfg)
    for name, s in spectra.items():
        _write_outputs(outdir, f"spectrum_{name}", s, fmt)
    if engine == "both":
        report = {"params": asdict(p),
                  "metrics": compare_spectra(spectra["numeric"],
                                             spectra["closed_form"])}
        _write_report(outdir / "comparison.json", report)
    return 0


def run_sweep(cfg: dict, outdir: Path) -> int:
    """One spectrum file per Cartesian-product point plus a manifest.

    Sweeps run a single engine per invocation so every output file has an
    unambiguous provenance; the default is the closed-form engine. Points
    may be computed concurrently (PULSESPEC_THREADS), files are written
    in point order, the manifest last; on any failure the files written
    so far are removed.
    """
    engine = cfg.get("engine", "closed_form")
    if engine == "both":
        raise PulsespecError(
            "sweep runs a single engine; set engine=numeric or "
            "engine=closed_form")
    fmt = cfg.get("format", "csv")
    if not any(key in cfg for key in _LIST_KEYS):
        raise PulsespecError(
            "sweep needs at least one of n_pulses_list, tau_list, delta_list")

    def axis(list_key: str, scalar_key: str) -> list:
        if list_key in cfg:
            return list(cfg[list_key])
        if scalar_key in cfg:
            return [cfg[scalar_key]]
        raise PulsespecError(f"missing {scalar_key} (or {list_key})")

    deltas = axis("delta_list", "delta")
    taus = axis("tau_list", "tau")
    pulse_counts = axis("n_pulses_list", "n_pulses")
    points = [(d, t, n) for d in deltas for t in taus for n in pulse_counts]

    def compute(point):
        d, t, n = point
        p = _params_from(cfg, delta=d, tau=t, n_pulses=n)
        s = _spectrum_for(engine, p, cfg)
        return s, positive_weight_fraction(s), _peak_table(s)

    threads = _thread_count()
    written: list[Path] = []
    try:
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(compute, points))
        else:
            results = [compute(point) for point in points]
        manifest_points = []
        for (d, t, n), (s, pwf, peaks) in zip(points, results):
            stem = f"spectrum_delta{d:g}_tau{t:g}_np{n}"
            files = _write_outputs(outdir, stem, s, fmt)
            written.extend(files)
            manifest_points.append({
                "files": [f.name for f in files],
                "params": s.meta,
                "positive_weight_fraction": pwf,
                "peaks": peaks,
            })
    except Exception:
        for f in written:
            f.unlink(missing_ok=True)
        raise
    manifest = {"engine": engine, "format": fmt, "points": manifest_points}
    _write_report(outdir / "manifest.json", manifest)
    return 0


def _invariant_suite(p: DriveParams, g: TimeGrid,
                     traj: list[DensityMatrix],
                     cg: CorrelatorGrid) -> dict:
    """Node-level checks of the propagation against exact identities."""
    ee = np.array([m.ee for m in traj])
    gg = np.array([m.gg for m in traj])
    eg = np.array([m.eg for m in traj])
    ge = np.array([m.ge for m in traj])
    trace_dev = float(np.max(np.abs(ee + gg - 1.0)))
    herm_dev = float(np.max(np.abs(ge - np.conj(eg))))
    coherence_dev = float(max(np.max(np.abs(eg)), np.max(np.abs(ge))))
    if p.n_pulses >= 1:
        analytic = np.array([rho_gg_analytic(t, p) for t in g.times])
        population_dev = float(np.max(np.abs(gg.real - analytic)))
    else:
        population_dev = float(np.max(np.abs(ee.real - np.exp(-p.gamma * g.times))))
    last = g.n_nodes - 1
    stride = max(1, last // 64)
    factor_dev = 0.0
    for i in range(0, last, stride):
        row1 = cg.c1[i]
        row2 = cg.c2[i]
        for j in range(0, row1.size, stride):
            f = f_analytic(g.times[i], j * g.dt, p)
            factor_dev = max(factor_dev,
                             float(abs(row1[j] - f * ee[i])),
                             float(abs(row2[j] - f * gg[i])))
    checks = {
        "trace": (trace_dev, 1e-12),
        "hermiticity": (herm_dev, 1e-12),
        "coherence_nullity": (coherence_dev, 1e-12),
        "population_vs_analytic": (population_dev, 1e-10),
        "correlator_factorization": (factor_dev, 1e-9),
    }
    return {name: {"value": value, "tolerance": tol, "pass": bool(value <= tol)}
            for name, (value, tol) in checks.items()}


def run_validate(cfg: dict, outdir: Path) -> int:
    """Cross-check the engines and the invariant suite; write a report.

    engine=both (the default) compares numeric against closed form. A
    single engine value compares that engine to itself, which must give
    all-zero metrics; useful as a wiring smoke check. Exit 0 only when
    every tolerance passes; the report is written either way.
    """
    engine = cfg.get("engine", "both")
    p = _params_from(cfg)
    fg = _freq_grid(cfg, p)
    g = make_time_grid(p, cfg.get("substeps"))
    traj = propagate_trajectory(p, g)
    cg = build_correlator_grids(p, g, traj)
    invariants = _invariant_suite(p, g, traj, cg)
    sum_rule_rel = None
    if engine == "both":
        s_num = compute_numeric_spectrum(p, g, cg, fg)
        s_closed = closed_spectrum(p, fg)
        metrics = compare_spectra(s_num, s_closed)
        total_closed = s_closed.raw_p3.real
        total_numeric = (s_num.raw_p1 + s_num.raw_p2).real
        sum_rule_rel = float(np.linalg.norm(total_numeric - total_closed)
                             / np.linalg.norm(total_closed))
        peak_source = s_closed
    else:
        s = (compute_numeric_spectrum(p, g, cg, fg) if engine == "numeric"
             else closed_spectrum(p, fg))
        metrics = compare_spectra(s, s)
        peak_source = s
    comparison_pass = metrics["l2_rel"] <= L2_REL_TOLERANCE
    sum_rule_pass = sum_rule_rel is None or sum_rule_rel <= SUM_RULE_TOLERANCE
    passed = (comparison_pass and sum_rule_pass
              and all(entry["pass"] for entry in invariants.values()))
    hint = None
    if not (comparison_pass and sum_rule_pass):
        hint = REFINEMENT_HINT
    report = {
        "params": asdict(p),
        "engine": engine,
        "metrics": metrics,
        "l2_rel_tolerance": L2_REL_TOLERANCE,
        "sum_rule_rel": sum_rule_rel,
        "sum_rule_tolerance": SUM_RULE_TOLERANCE,
        "invariants": invariants,
        "peaks": _peak_table(peak_source),
        "passed": passed,
        "hint": hint,
    }
    _write_report(outdir / "validation_report.json", report)
    return 0 if passed else 1


def _thread_count() -> int:
    raw = os.environ.get("PULSESPEC_THREADS", "").strip()
    if not raw:
        return 1
    try:
        count = int(raw)
    except ValueError:
        return 1
    return count if count > 1 else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pulsespec",
        description="Absorption spectra of a periodically pulsed "
                    "two-level emitter")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("spectrum", "compute one spectrum per configured engine"),
            ("sweep", "one spectrum per parameter-grid point plus manifest"),
            ("validate", "cross-check engines and invariants")):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True,
                         help="flat key=value config file")
        cmd.add_argument("--output-dir", default=None,
                         help="override the config output_dir")
    args = parser.parse_args(argv)
    try:
        cfg = parse_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    outdir = Path(args.output_dir or cfg.get("output_dir", "."))
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        if args.command == "spectrum":
            return run_spectrum(cfg, outdir)
        if args.command == "sweep":
            return run_sweep(cfg, outdir)
        return run_validate(cfg, outdir)
    except PulsespecError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
