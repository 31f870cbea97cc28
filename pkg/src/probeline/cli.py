"""Command-line front end: ``probeline <subcommand> [--config PATH] ...``.

Data go to CSV, analysis reports and errors to JSON.  Exit codes: 0 on
success, 2 for a rejected configuration, 3 for a failed computation.
Run metadata (version, argv, timing) is written to ``<out>.meta.json`` so
that data files stay byte-identical between runs.
"""
from __future__ import annotations

import argparse
import io
import math
import os
import platform
import sys
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .band_optimum import (
    band_edges,
    band_edges_limit,
    band_limit_ratio,
    optimum_report,
    regime_classify,
    x1_as_printed,
    x1_reconstructed,
)
from .config import DriveSpec, RunConfig, load_config
from .errors import (
    AmbiguousRegime,
    ConfigError,
    DegenerateRoots,
    NoHalfHeightPoint,
    NoInteriorExtremum,
    NoRealBand,
    ProbelineError,
)
from .lineshape import alpha_ratio, spectrum
from .maxwell_bridge import effective_widths, maxwell_peak_profile, monoenergetic_equivalent, prefactor
from .model import DriveField, g_sq_from_kappa, saturation_kappa
from .oracle import extremize_over, find_halfwidth
from .spectral_analysis import component_summary, degeneracy_threshold, regime_ratio_resonant
from .tables import dump_json, read_csv, write_csv

EXIT_OK, EXIT_CONFIG, EXIT_COMPUTE = 0, 2, 3

SPECTRUM_COLUMNS = ("omega_mu", "alpha_ratio", "splitting_only", "population_part", "interference_part")
SWEEP_COLUMNS = ("peak_value", "peak_position", "halfwidth", "band_low", "band_high")


@dataclass(frozen=True)
class Preset:
    """Named family of curves, evaluated on placeholder constants.

    Frequencies are multiples of Γ.  Only the qualitative topology is meant
    to carry over; the actual relaxation constants were never released.
    """

    x: float
    curves: Tuple[Tuple[float, float], ...]  # (kappa, omega / Gamma)
    grid: Tuple[float, float, int]


PRESETS: Dict[str, Preset] = {
    "fig1": Preset(0.0, ((2.0, 0.0), (2.0, 1.0), (8.0, 0.0), (8.0, 1.0)), (-3.0, 3.0, 601)),
    "fig2": Preset(4.14, ((3.0, 0.0), (8.0, 0.0), (40.0, 0.0)), (-3.0, 3.0, 601)),
    "fig3": Preset(4.14, ((1.0, 1.0), (2.0, 1.0), (8.0, 1.0)), (-3.0, 3.0, 601)),
    "fig4": Preset(4.14, ((8.0, 10.0), (100.0, 10.0)), (-15.0, 15.0, 1201)),
}

PRESET_NOTE = ("PLACEHOLDER relaxation constants, not measured gas data: curves show where extrema and "
               "sign changes fall, not absolute values.")


class Failure(Exception):
    def __init__(self, code: int, exc: BaseException):
        super().__init__(str(exc))
        self.code = code
        self.exc = exc


# --- subcommands ----------------------------------------------------------


def cmd_spectrum(cfg: RunConfig, preset: Optional[str] = None) -> Tuple[str, str]:
    if preset is None:
        s = spectrum(cfg.model, cfg.field_value, cfg.x, cfg.grid.build(), cfg.toggles)
        rows = zip(s.omega_mu, s.total, s.splitting_only, s.population_part, s.interference_part)
        return "csv", write_csv(SPECTRUM_COLUMNS, rows)
    p = PRESETS[preset]
    gamma = cfg.model.gamma
    grid = np.linspace(p.grid[0] * gamma, p.grid[1] * gamma, p.grid[2])
    rows: List[Sequence[float]] = []
    for i, (kappa, omega) in enumerate(p.curves, start=1):
        d = DriveField(g_sq_from_kappa(cfg.model, kappa), omega * gamma)
        s = spectrum(cfg.model, d, p.x, grid, cfg.toggles)
        for r in zip(s.omega_mu, s.total, s.splitting_only, s.population_part, s.interference_part):
            rows.append((i, kappa, omega * gamma, p.x) + tuple(r))
    return "csv", write_csv(("curve", "kappa", "omega", "x") + SPECTRUM_COLUMNS, rows)


def cmd_decompose(cfg: RunConfig) -> Tuple[str, str]:
    d = cfg.field_value
    summary = component_summary(cfg.model, d, cfg.x)
    if summary.degenerate:
        raise DegenerateRoots(
            f"|alpha1 - alpha2| = {summary.roots.separation:.3g} <= {degeneracy_threshold(cfg.model, d):.3g}")
    report = {
        "roots": [{"re": r.real, "im": r.imag} for r in summary.roots.as_array()],
        "labeling": summary.roots.labeling,
        "centers": list(summary.centers),
        "halfwidths": list(summary.halfwidths),
        "amplitudes": [{"re": c.complex_amplitude.real, "im": c.complex_amplitude.imag}
                       for c in summary.components],
        "peak_heights": [c.peak_height for c in summary.components],
        "degenerate": summary.degenerate,
        "regime": _regime_dict(cfg),
    }
    return "json", dump_json(report)


def _regime_dict(cfg: RunConfig) -> dict:
    d = cfg.field_value
    r = regime_classify(cfg.model, d, cfg.x)
    out = {
        "dominant": r.dominant,
        "ratio_interference_vs_population": r.ratio_interference_vs_population,
        "ratio_interference_strength": r.ratio_interference_strength,
        "threshold": r.threshold,
        "kappa": float(saturation_kappa(cfg.model, d.g_sq)),
        "band_limit_ratio": band_limit_ratio(cfg.model, d),
    }
    if d.detuning == 0:
        out["root_regime_ratio"] = regime_ratio_resonant(cfg.model, d.g_sq)
    return out


def cmd_regime(cfg: RunConfig) -> Tuple[str, str]:
    return "json", dump_json(_regime_dict(cfg))


def cmd_band(cfg: RunConfig) -> Tuple[str, str]:
    d = cfg.field_value
    b = band_edges(cfg.model, d, cfg.x)
    report = {"edge_low": b.edge_low, "edge_high": b.edge_high, "width": b.width,
              "regime_valid": b.regime_valid, "regime": _regime_dict(cfg)}
    ratio = band_limit_ratio(cfg.model, d)
    try:
        which = "near" if ratio < 1 else "far"
        report["limit"] = {"which": which, "edges": list(band_edges_limit(cfg.model, d, which))}
    except AmbiguousRegime as exc:
        report["limit"] = {"which": None, "reason": str(exc)}
    return "json", dump_json(report)


def cmd_optimize(cfg: RunConfig) -> Tuple[str, str]:
    rep = optimum_report(cfg.model, cfg.x, cfg.field_value.detuning)
    out = rep.as_dict()
    out["x1_as_printed"] = x1_as_printed(cfg.model)
    out["x1_reconstructed"] = x1_reconstructed(cfg.model)
    out["note"] = ("closed form and numeric optimum are reported side by side; the printed x1 "
                   "does not reproduce the numeric optimum, the reconstructed one does")
    return "json", dump_json(out)


def cmd_maxwell(cfg: RunConfig) -> Tuple[str, str]:
    p = cfg.maxwell_params()
    beam = effective_widths(cfg.model, p)
    grid = cfg.grid.build().points
    doppler = np.atleast_1d(maxwell_peak_profile(cfg.model, p, grid))
    mono = np.atleast_1d(monoenergetic_equivalent(cfg.model, p, grid - beam.center_shift))
    n = grid.size
    cols = ("omega_mu", "doppler_profile", "monoenergetic_line", "gamma0", "gamma_pm", "gamma_n_eff",
            "center_shift", "prefactor")
    consts = (beam.gamma_gn_eff, beam.gamma_gm_eff, beam.gamma_n_eff, beam.center_shift, prefactor(p))
    rows = [(grid[i], doppler[i], mono[i]) + consts for i in range(n)]
    return "csv", write_csv(cols, rows)


def sweep_values(cfg: RunConfig) -> np.ndarray:
    sw = cfg.sweep
    if sw.count == 1:
        return np.array([sw.start])
    if sw.spacing == "log":
        return np.geomspace(sw.start, sw.stop, sw.count)
    return np.linspace(sw.start, sw.stop, sw.count)


def _step_config(cfg: RunConfig, axis: str, value: float) -> Tuple[DriveField, float]:
    d, x = cfg.field_value, cfg.x
    if axis == "g_sq":
        d = DriveField(value, d.detuning)
    elif axis == "kappa":
        d = DriveField(g_sq_from_kappa(cfg.model, value), d.detuning)
    elif axis == "omega":
        d = DriveField(d.g_sq, value)
    else:
        x = float(value)
    return d, x


def sweep_row(cfg: RunConfig, d: DriveField, x: float) -> Tuple[float, ...]:
    """Peak value and position (largest |α| on the grid, refined), half-width, band edges."""
    m = cfg.model
    grid = cfg.grid.build().points

    def f(w):
        return alpha_ratio(m, d, x, w)

    values = np.atleast_1d(f(grid))
    try:
        ext = extremize_over(f, grid, mode="absmax", rtol=1e-10)
        pos, val = ext.location, ext.value
    except NoInteriorExtremum:
        i = int(np.argmax(np.abs(values)))
        pos, val = float(grid[i]), float(values[i])
    spacing = float(grid[1] - grid[0])
    try:
        hw = find_halfwidth(f, pos, scale=spacing, side="mean", locate=False,
                            max_distance=float(grid[-1] - grid[0]))
    except NoHalfHeightPoint:
        hw = math.nan
    try:
        b = band_edges(m, d)
        lo, hi = b.edge_low, b.edge_high
    except NoRealBand:
        lo = hi = math.nan
    return pos, val, hw, lo, hi


def cmd_sweep(cfg: RunConfig) -> Tuple[str, str]:
    axis = cfg.sweep.axis
    rows = []
    for v in sweep_values(cfg):
        d, x = _step_config(cfg, axis, float(v))
        pos, val, hw, lo, hi = sweep_row(cfg, d, x)
        rows.append((v, val, pos, hw, lo, hi))
    return "csv", write_csv((axis,) + SWEEP_COLUMNS, rows)


COMMANDS: Dict[str, Callable] = {
    "spectrum": cmd_spectrum,
    "decompose": cmd_decompose,
    "band": cmd_band,
    "optimize": cmd_optimize,
    "maxwell": cmd_maxwell,
    "sweep": cmd_sweep,
    "regime": cmd_regime,
}


# --- plumbing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="probeline", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="run configuration file")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"),
                       help="force output format (JSON wraps tables as column lists)")
        p.add_argument("--units", choices=("gamma", "absolute"),
                       help="report frequencies in units of the drive-line width, or as given")
        field = p.add_mutually_exclusive_group()
        field.add_argument("--kappa", type=float, help="drive by saturation parameter")
        field.add_argument("--gsq", type=float, help="drive by |G|^2")
        p.add_argument("--omega", type=float, help="drive detuning")
        p.add_argument("--x", type=float, help="population ratio")
        if name == "spectrum":
            p.add_argument("--preset", choices=sorted(PRESETS), help="figure curve family; " + PRESET_NOTE)
    return ap


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    drive = cfg.drive
    if args.kappa is not None:
        drive = DriveSpec(None, args.kappa, drive.detuning)
    elif args.gsq is not None:
        drive = DriveSpec(args.gsq, None, drive.detuning)
    if args.omega is not None:
        drive = DriveSpec(drive.g_sq, drive.kappa, args.omega)
    cfg = cfg.replace(drive=drive)
    if args.x is not None:
        cfg = cfg.replace(x=args.x)
    if args.units is not None:
        cfg = cfg.replace(units=args.units)
    if args.format is not None:
        cfg = cfg.replace(format=args.format)
    if cfg.units == "gamma":
        cfg = cfg.in_gamma_units()
    # trigger drive validation early so bad fields exit as config errors
    cfg.field_value
    if args.command == "maxwell":
        cfg.maxwell_params()
    return cfg


def _csv_to_json(text: str) -> str:
    header, data = read_csv(io.StringIO(text))
    return dump_json({h: data[:, i].tolist() for i, h in enumerate(header)})


def _error_json(code: int, exc: BaseException) -> str:
    return dump_json({"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": code}})


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    started = time.time()
    try:
        try:
            cfg = resolve_config(args)
        except ProbelineError as exc:
            raise Failure(EXIT_CONFIG, exc)
        try:
            if args.command == "spectrum":
                kind, text = cmd_spectrum(cfg, getattr(args, "preset", None))
            else:
                kind, text = COMMANDS[args.command](cfg)
        except (ProbelineError, ArithmeticError, np.linalg.LinAlgError) as exc:
            raise Failure(EXIT_COMPUTE, exc)
    except Failure as f:
        stdout.write(_error_json(f.code, f.exc))
        stderr.write(f"probeline: {type(f.exc).__name__}: {f.exc}\n")
        return f.code
    if cfg.format == "json" and kind == "csv":
        text = _csv_to_json(text)
    elif cfg.format == "csv" and kind == "json":
        err = ConfigError(f"{args.command} produces a JSON report; csv is not available")
        stdout.write(_error_json(EXIT_CONFIG, err))
        return EXIT_CONFIG
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
        meta = {
            "command": args.command,
            "argv": list(argv) if argv is not None else sys.argv[1:],
            "version": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "elapsed_s": time.time() - started,
            "finished_unix": time.time(),
            "units": cfg.units,
        }
        if getattr(args, "preset", None):
            meta["preset_note"] = PRESET_NOTE
        with open(args.out + ".meta.json", "w") as fh:
            fh.write(dump_json(meta))
    else:
        stdout.write(text)
    return EXIT_OK


def main() -> None:
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = EXIT_OK
    sys.exit(code)


if __name__ == "__main__":
    main()
