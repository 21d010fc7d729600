"""Command-line front end.

Subcommands:
    inverse     solve a maneuver for the control time histories
    forward     re-fly a solved history through the direct simulator
    roundtrip   inverse followed by forward, with a deviation report
    trim        steady level flight numbers for a given altitude/speed
    converge    solve at several step sizes and compare

Outputs are deterministic: fixed column order, fixed 9-significant-digit
formatting, so identical runs produce byte-identical files. The angle
unit flag affects formatting only (angular rates p, q, r are always
rad/s).

Exit codes: 0 success, 1 input error, 2 numerical failure, 3 round-trip
mismatch.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import forward as fwd
from . import solver
from .atmosphere import density
from .dynamics import cruise_trim
from .errors import ConfigError, ConfigFileError, FlightMechanicsError
from .model import (
    ISA,
    AircraftConfig,
    FlightState,
    load_config,
    load_sampled_maneuver,
    mirage_iii,
    validate_config,
)
from .numerics import UniformGrid

__all__ = ["RunManifest", "main", "run_inverse", "run_forward",
           "run_roundtrip", "run_trim", "run_converge"]

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2
EXIT_MISMATCH = 3

HISTORY_HEADER = ("t,x_g,y_g,z_g,V,alpha_proc,alpha_actual,beta,p,q,r,"
                  "phi,theta,psi,theta_w,psi_w,delta_l,delta_m,delta_n,"
                  "T,flags")

# columns converted by the angle-unit preference (rates stay rad/s)
_ANGLE_COLUMNS = ("alpha_proc", "alpha_actual", "beta", "phi", "theta",
                  "psi", "theta_w", "psi_w", "delta_l", "delta_m",
                  "delta_n")

FLAG_STALL = 1
FLAG_REVERSE_THRUST = 2


@dataclass(frozen=True)
class RunManifest:
    """Everything one run needs, resolved from the command line."""

    subcommand: str
    config_path: str | None = None
    maneuver: str | None = None
    maneuver_file: str | None = None
    history_file: str | None = None
    dt: float | None = None  # None: 1e-4 for built-ins, file spacing else
    dts: tuple = ()
    out_dir: str = "."
    angle_unit: str = "deg"
    altitude: float = 10000.0
    speed: float = 200.0
    pos_tol_frac: float = 0.005
    phi_tol_deg: float = 2.0
    threshold: float = 0.01
    diagnostics: bool = False


def _fmt(x: float) -> str:
    if x == 0.0:
        x = 0.0  # normalize negative zero
    return "%.9g" % x


def _load_aircraft(manifest: RunManifest) -> AircraftConfig:
    if manifest.config_path is None:
        return validate_config(mirage_iii())
    return load_config(manifest.config_path)


def _resolve_spec(manifest: RunManifest):
    if (manifest.maneuver is None) == (manifest.maneuver_file is None):
        raise ConfigError([("bad_maneuver",
                            "give exactly one of --maneuver/--maneuver-file")])
    if manifest.maneuver is not None:
        dt = 1e-4 if manifest.dt is None else manifest.dt
        return solver.maneuver_spec(manifest.maneuver, dt)
    spec = load_sampled_maneuver(manifest.maneuver_file)
    if manifest.dt is not None \
            and abs(manifest.dt - spec.dt) > 1e-12 * spec.dt:
        raise ConfigError([("dt_conflict",
                            f"--dt {manifest.dt} conflicts with the sample "
                            f"spacing {spec.dt}")])
    return spec


def _angle_scale(unit: str) -> float:
    return 180.0 / math.pi if unit == "deg" else 1.0


def _history_columns(hist: solver.SolutionHistory, unit: str):
    s = _angle_scale(unit)
    flags = (hist.stall.astype(int) * FLAG_STALL
             + hist.reverse_thrust.astype(int) * FLAG_REVERSE_THRUST)
    return {
        "t": hist.t, "x_g": hist.xg, "y_g": hist.yg, "z_g": hist.zg,
        "V": hist.v,
        "alpha_proc": hist.alpha * s,
        "alpha_actual": hist.alpha_actual * s,
        "beta": hist.beta * s,
        "p": hist.p, "q": hist.q, "r": hist.r,
        "phi": hist.phi * s, "theta": hist.theta * s, "psi": hist.psi * s,
        "theta_w": hist.theta_w * s, "psi_w": hist.psi_w * s,
        "delta_l": hist.delta_l * s, "delta_m": hist.delta_m * s,
        "delta_n": hist.delta_n * s,
        "T": hist.thrust,
        "flags": flags,
    }


def write_history(hist: solver.SolutionHistory, path, unit: str):
    cols = _history_columns(hist, unit)
    names = HISTORY_HEADER.split(",")
    arrays = [cols[n] for n in names]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(HISTORY_HEADER + "\n")
        flags = arrays[-1]
        data = arrays[:-1]
        for i in range(len(hist.t)):
            fh.write(",".join(_fmt(a[i]) for a in data))
            fh.write(",%d\n" % flags[i])


def write_summary(hist: solver.SolutionHistory, path, unit: str,
                  dt: float):
    s = _angle_scale(unit)
    ref = hist.reference
    lines = [
        ("maneuver", hist.maneuver),
        ("dt_s", _fmt(dt)),
        ("stations", str(hist.grid.count)),
        ("angle_unit", unit),
        ("c_lift0_equib", _fmt(ref.c_lift0_equib)),
        ("alpha_equib_deg", _fmt(math.degrees(ref.alpha_equib))),
        ("alpha_shift_deg", _fmt(math.degrees(ref.alpha_shift))),
        ("thrust_initial_n", _fmt(hist.thrust[0])),
        ("thrust_min_n", _fmt(float(hist.thrust.min()))),
        ("thrust_max_n", _fmt(float(hist.thrust.max()))),
        ("delta_l_max_abs", _fmt(float(np.abs(hist.delta_l).max()) * s)),
        ("delta_m_max_abs", _fmt(float(np.abs(hist.delta_m).max()) * s)),
        ("delta_n_max_abs", _fmt(float(np.abs(hist.delta_n).max()) * s)),
        ("alpha_actual_min", _fmt(float(hist.alpha_actual.min()) * s)),
        ("alpha_actual_max", _fmt(float(hist.alpha_actual.max()) * s)),
        ("beta_min", _fmt(float(hist.beta.min()) * s)),
        ("beta_max", _fmt(float(hist.beta.max()) * s)),
        ("theta_w_max_abs", _fmt(float(np.abs(hist.theta_w).max()) * s)),
        ("psi_w_max_abs", _fmt(float(np.abs(hist.psi_w).max()) * s)),
        ("stall_stations", str(int(hist.stall.sum()))),
        ("reverse_thrust_stations", str(int(hist.reverse_thrust.sum()))),
    ]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, value in lines:
            fh.write(f"{key} = {value}\n")


def read_history(path, unit: str):
    """Read a history file back into arrays (radians internally)."""
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    if data.ndim == 1:
        data = data[None, :]
    names = HISTORY_HEADER.split(",")
    if data.shape[1] != len(names):
        raise ConfigFileError(
            f"{path}: expected {len(names)} columns, found {data.shape[1]}")
    cols = {n: data[:, i].copy() for i, n in enumerate(names)}
    s = _angle_scale(unit)
    for n in _ANGLE_COLUMNS:
        cols[n] = cols[n] / s
    return cols


def _forward_from_history(cols, cfg: AircraftConfig):
    """Re-fly the controls of a solved history; returns the forward run
    and the control grid."""
    t = cols["t"]
    if len(t) < 2:
        raise ConfigFileError("history has fewer than 2 stations")
    dt = float(t[1] - t[0])
    steps = np.diff(t)
    if dt <= 0 or np.max(np.abs(steps - dt)) > 1e-7 * max(dt, 1.0):
        raise ConfigFileError("history time column is not uniform")
    grid = UniformGrid(float(t[0]), dt, len(t))
    controls = fwd.ControlHistory(
        grid=grid, delta_l=cols["delta_l"], delta_m=cols["delta_m"],
        delta_n=cols["delta_n"], thrust=cols["T"])
    initial = FlightState(
        t=float(t[0]), v=float(cols["V"][0]),
        alpha=float(cols["alpha_proc"][0]), beta=float(cols["beta"][0]),
        p=float(cols["p"][0]), q=float(cols["q"][0]),
        r=float(cols["r"][0]), phi=float(cols["phi"][0]),
        theta=float(cols["theta"][0]), psi=float(cols["psi"][0]))
    # trim-referenced lift curve, reconstructed exactly as the inverse
    # solver builds it at its first station
    rho0 = density(float(cols["z_g"][0]))
    qbar0 = 0.5 * rho0 * initial.v ** 2
    c_lift0_equib = cfg.mass * ISA.g / (qbar0 * cfg.wing_area)
    coeffs = replace(cfg.aero, c_lift0=c_lift0_equib)
    position0 = (float(cols["x_g"][0]), float(cols["y_g"][0]),
                 float(cols["z_g"][0]))
    run = fwd.simulate(initial, controls, cfg, position0=position0,
                       coeffs=coeffs)
    return run


def _deviation_report(run, cols, manifest: RunManifest, path):
    """Compare a forward run against prescribed trajectory columns."""
    dx = float(np.abs(run.xg - cols["x_g"]).max())
    dy = float(np.abs(run.yg - cols["y_g"]).max())
    dz = float(np.abs(run.zg - cols["z_g"]).max())
    dphi = float(np.abs(run.phi - cols["phi"]).max())
    span = np.hypot(np.diff(cols["x_g"]), np.diff(cols["y_g"]))
    path_length = float(np.sum(np.hypot(span, np.diff(cols["z_g"]))))
    pos_tol = manifest.pos_tol_frac * max(path_length, 1.0)
    phi_tol = math.radians(manifest.phi_tol_deg)
    mismatch = dy > pos_tol or dz > pos_tol or dphi > phi_tol
    lines = [
        ("path_length_m", _fmt(path_length)),
        ("max_dev_x_m", _fmt(dx)),
        ("max_dev_y_m", _fmt(dy)),
        ("max_dev_z_m", _fmt(dz)),
        ("max_dev_phi_deg", _fmt(math.degrees(dphi))),
        ("phi_end_deg", _fmt(math.degrees(float(run.phi[-1])))),
        ("pos_tol_m", _fmt(pos_tol)),
        ("phi_tol_deg", _fmt(manifest.phi_tol_deg)),
        ("verdict", "mismatch" if mismatch else "match"),
    ]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, value in lines:
            fh.write(f"{key} = {value}\n")
    return mismatch


def run_inverse(manifest: RunManifest) -> int:
    cfg = _load_aircraft(manifest)
    spec = _resolve_spec(manifest)
    hist = solver.solve(spec, cfg, diagnostics=manifest.diagnostics)
    out = Path(manifest.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_history(hist, out / "history.csv", manifest.angle_unit)
    write_summary(hist, out / "summary.txt", manifest.angle_unit, spec.dt)
    print(f"wrote {out / 'history.csv'} and {out / 'summary.txt'}")
    s = _angle_scale(manifest.angle_unit)
    print(f"max |delta_n| = {_fmt(float(np.abs(hist.delta_n).max()) * s)} "
          f"{manifest.angle_unit}")
    if manifest.diagnostics and hist.rate_gap is not None:
        print(f"angular-acceleration average/direct gap = "
              f"{_fmt(hist.rate_gap)} rad/s^2")
    return EXIT_OK


def run_forward(manifest: RunManifest) -> int:
    cfg = _load_aircraft(manifest)
    cols = read_history(manifest.history_file, manifest.angle_unit)
    out = Path(manifest.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        run = _forward_from_history(cols, cfg)
    except FlightMechanicsError as err:
        # the replayed controls drove the simulation out of its validity
        # range; report it as a mismatch with the deviation pinned open
        with open(out / "forward.txt", "w", encoding="utf-8",
                  newline="\n") as fh:
            fh.write("verdict = mismatch\n")
            fh.write(f"forward_failure = {err}\n")
        print(f"forward run failed: {err}", file=sys.stderr)
        return EXIT_MISMATCH
    mismatch = _deviation_report(run, cols, manifest, out / "forward.txt")
    print(f"wrote {out / 'forward.txt'}")
    return EXIT_MISMATCH if mismatch else EXIT_OK


def run_roundtrip(manifest: RunManifest) -> int:
    cfg = _load_aircraft(manifest)
    spec = _resolve_spec(manifest)
    hist = solver.solve(spec, cfg)
    out = Path(manifest.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_history(hist, out / "history.csv", manifest.angle_unit)

    coeffs = replace(cfg.aero, c_lift0=hist.reference.c_lift0_equib)
    cols = {"x_g": hist.xg, "y_g": hist.yg, "z_g": hist.zg,
            "phi": hist.phi}
    try:
        run = fwd.simulate(hist.state_at(0), hist.controls(), cfg,
                           position0=(float(hist.xg[0]),
                                      float(hist.yg[0]),
                                      float(hist.zg[0])),
                           coeffs=coeffs)
    except FlightMechanicsError as err:
        # a forward leg that blows up is reported as a mismatch, with
        # the deviations pinned at infinity
        with open(out / "roundtrip.txt", "w", encoding="utf-8",
                  newline="\n") as fh:
            fh.write("verdict = mismatch\n")
            fh.write(f"forward_failure = {err}\n")
        print(f"forward leg failed: {err}", file=sys.stderr)
        return EXIT_MISMATCH
    mismatch = _deviation_report(run, cols, manifest,
                                 out / "roundtrip.txt")
    print(f"wrote {out / 'roundtrip.txt'}")
    return EXIT_MISMATCH if mismatch else EXIT_OK


def run_trim(manifest: RunManifest) -> int:
    cfg = _load_aircraft(manifest)
    if manifest.speed <= 0:
        raise ConfigError([("non_positive_speed",
                            f"speed {manifest.speed} must be > 0")])
    rho = density(-manifest.altitude)
    thrust, c_lift, c_drag = cruise_trim(cfg.mass, ISA.g, rho,
                                         manifest.speed, cfg.wing_area,
                                         cfg.aero)
    qbar = 0.5 * rho * manifest.speed ** 2
    alpha_equib = c_lift / cfg.aero.c_lift_alpha
    print(f"altitude_m = {_fmt(manifest.altitude)}")
    print(f"speed_m_s = {_fmt(manifest.speed)}")
    print(f"rho_kg_m3 = {_fmt(rho)}")
    print(f"qbar_pa = {_fmt(qbar)}")
    print(f"c_lift = {_fmt(c_lift)}")
    print(f"c_drag = {_fmt(c_drag)}")
    print(f"alpha_equib_deg = {_fmt(math.degrees(alpha_equib))}")
    print(f"thrust_n = {_fmt(thrust)}")
    return EXIT_OK


def run_converge(manifest: RunManifest) -> int:
    cfg = _load_aircraft(manifest)
    spec = _resolve_spec(manifest)
    report = solver.convergence_study(spec, cfg, manifest.dts,
                                      threshold=manifest.threshold)
    out = Path(manifest.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = []
    lines.append("dt_coarse,dt_fine,delta_l,delta_m,delta_n,thrust,"
                 "diverged")
    for pair in report.pairs:
        m = pair.metrics
        lines.append(",".join([
            _fmt(pair.dt_coarse), _fmt(pair.dt_fine),
            _fmt(m["delta_l"]), _fmt(m["delta_m"]),
            _fmt(m["delta_n"]), _fmt(m["thrust"]),
            "yes" if pair.diverged else "no"]))
    verdict = "insensitive" if report.insensitive else "sensitive"
    lines.append(f"verdict,{verdict},threshold,{_fmt(report.threshold)}")
    text = "\n".join(lines) + "\n"
    with open(out / "convergence.txt", "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write(text)
    print(text, end="")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invflight",
        description="Inverse flight-mechanics solver: control histories "
                    "for a prescribed trajectory, plus a forward 6-DOF "
                    "verification simulator.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, maneuver=True):
        p.add_argument("--config", default=None,
                       help="aircraft data file (default: built-in "
                            "Mirage-III data set)")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--angles", choices=("deg", "rad"), default="deg",
                       help="unit for angle columns in output files")
        if maneuver:
            p.add_argument("--maneuver", default=None,
                           help="built-in maneuver name: "
                                + ", ".join(sorted(solver.MANEUVERS)))
            p.add_argument("--maneuver-file", default=None,
                           help="sampled maneuver file "
                                "(rows: t x_g y_g z_g phi)")

    p = sub.add_parser("inverse", help="solve for the control histories")
    add_common(p)
    p.add_argument("--dt", type=float, default=None,
                   help="time step, s (default 1e-4; sampled maneuver "
                        "files use their own spacing)")
    p.add_argument("--diagnostics", action="store_true",
                   help="track the averaged/direct angular-acceleration gap")

    p = sub.add_parser("forward", help="re-fly a solved history")
    add_common(p, maneuver=False)
    p.add_argument("--history", required=True,
                   help="history.csv produced by the inverse subcommand")
    p.add_argument("--pos-tol-frac", type=float, default=0.005)
    p.add_argument("--phi-tol-deg", type=float, default=2.0)

    p = sub.add_parser("roundtrip",
                       help="inverse then forward, with deviation report")
    add_common(p)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--pos-tol-frac", type=float, default=0.005)
    p.add_argument("--phi-tol-deg", type=float, default=2.0)

    p = sub.add_parser("trim", help="steady level flight report")
    p.add_argument("--config", default=None)
    p.add_argument("--altitude", type=float, default=10000.0,
                   help="altitude above sea level, m")
    p.add_argument("--speed", type=float, default=200.0, help="m/s")

    p = sub.add_parser("converge", help="step-size sensitivity study")
    add_common(p)
    p.add_argument("--dt", type=float, action="append", dest="dts",
                   required=True,
                   help="time step, s (give at least twice)")
    p.add_argument("--threshold", type=float, default=0.01,
                   help="relative deviation verdict threshold")

    return parser


def _manifest_from_args(args) -> RunManifest:
    return RunManifest(
        subcommand=args.subcommand,
        config_path=getattr(args, "config", None),
        maneuver=getattr(args, "maneuver", None),
        maneuver_file=getattr(args, "maneuver_file", None),
        history_file=getattr(args, "history", None),
        dt=getattr(args, "dt", None),
        dts=tuple(getattr(args, "dts", ()) or ()),
        out_dir=getattr(args, "out", "."),
        angle_unit=getattr(args, "angles", "deg"),
        altitude=getattr(args, "altitude", 10000.0),
        speed=getattr(args, "speed", 200.0),
        pos_tol_frac=getattr(args, "pos_tol_frac", 0.005),
        phi_tol_deg=getattr(args, "phi_tol_deg", 2.0),
        threshold=getattr(args, "threshold", 0.01),
        diagnostics=getattr(args, "diagnostics", False),
    )


_RUNNERS = {
    "inverse": run_inverse,
    "forward": run_forward,
    "roundtrip": run_roundtrip,
    "trim": run_trim,
    "converge": run_converge,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    manifest = _manifest_from_args(args)
    if manifest.subcommand == "converge" and len(manifest.dts) < 2:
        print("converge needs at least two --dt values", file=sys.stderr)
        return EXIT_INPUT
    try:
        return _RUNNERS[manifest.subcommand](manifest)
    except (ConfigError, ConfigFileError, FileNotFoundError, OSError) as err:
        print(f"input error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except FlightMechanicsError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
