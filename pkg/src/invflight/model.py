"""Domain types, units policy, and validation of aircraft and maneuver inputs.

Units are SI throughout: kg, m, s, N, rad. Angles are stored in radians
internally; degrees appear only at I/O boundaries (CLI formatting and the
summary report). Gravity is a fixed constant, not a field model.

Axis conventions:
    ground axes   x_g north-ish, y_g east-ish, z_g down (altitude = -z_g)
    body axes     x_b out the nose, y_b starboard, z_b down
    attitude      phi (bank), theta (pitch), psi (heading)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError, ConfigFileError

__all__ = [
    "FlightEnvironment",
    "ISA",
    "AeroCoefficients",
    "AircraftConfig",
    "FlightState",
    "AnalyticChannel",
    "AnalyticManeuver",
    "SampledManeuver",
    "TrajectorySpec",
    "mirage_iii",
    "validate_config",
    "load_config",
    "load_sampled_maneuver",
    "CONFIG_KEYS",
]


@dataclass(frozen=True)
class FlightEnvironment:
    """Physical constants for the standard atmosphere and gravity.

    Immutable per run; the defaults are the only values used in practice.
    """

    g: float = 9.81              # m/s^2
    rho_sl: float = 1.225        # sea-level density, kg/m^3
    lapse_rate: float = 0.0065   # temperature lapse rate, K/m
    temp_sl: float = 288.0       # sea-level temperature, K
    gas_constant: float = 287.0  # specific gas constant of air, J/(kg K)


ISA = FlightEnvironment()


@dataclass(frozen=True)
class AeroCoefficients:
    """Dimensionless aerodynamic and stability coefficients.

    Lift/drag/side-force build-up plus the moment derivatives. The pitch
    channel carries alpha, q and elevator; the roll/yaw channels carry
    beta, the rate terms p*b/V and r*b/V, and the aileron/rudder pair.
    Angle derivatives are per radian, as tabulated in the usual data
    sheets.
    """

    # force build-up
    c_lift0: float          # lift coefficient at zero angle of attack
    c_lift_alpha: float     # lift slope, 1/rad
    c_drag0: float          # zero-lift drag
    k_drag: float           # induced-drag factor of the drag polar
    c_side_beta: float      # side force per sideslip, 1/rad

    # pitching moment (longitudinal)
    c_pitch0: float
    c_pitch_alpha: float    # 1/rad
    c_pitch_q: float        # applied to bare pitch rate q
    c_pitch_dm: float       # elevator effectiveness, 1/rad

    # rolling moment (lateral)
    c_roll_beta: float
    c_roll_p: float         # applied to p*b/V
    c_roll_r: float         # applied to r*b/V
    c_roll_dl: float        # aileron effectiveness, 1/rad
    c_roll_dn: float        # rudder cross effectiveness, 1/rad

    # yawing moment (lateral)
    c_yaw_beta: float
    c_yaw_p: float          # applied to p*b/V
    c_yaw_r: float          # applied to r*b/V
    c_yaw_dl: float         # aileron cross effectiveness, 1/rad
    c_yaw_dn: float         # rudder effectiveness, 1/rad

    @property
    def control_determinant(self) -> float:
        """Determinant of the aileron/rudder effectiveness 2x2 system."""
        return self.c_roll_dl * self.c_yaw_dn - self.c_roll_dn * self.c_yaw_dl


@dataclass(frozen=True)
class AircraftConfig:
    """Mass, inertia tensor entries, reference geometry, and aero data.

    Inertia naming: i_roll/i_pitch/i_yaw are the moments about the body
    x/y/z axes; i_yz, i_zx, i_xy are the products of inertia in the
    corresponding body-axis planes (zero for the usual x-z symmetric
    airframe except i_zx).
    """

    mass: float        # kg
    i_roll: float      # kg m^2
    i_pitch: float     # kg m^2
    i_yaw: float       # kg m^2
    i_yz: float        # kg m^2
    i_zx: float        # kg m^2
    i_xy: float        # kg m^2
    wing_area: float   # m^2
    span_ref: float    # lateral reference length, m
    chord_ref: float   # longitudinal reference length, m
    aero: AeroCoefficients

    @property
    def inertia_determinant(self) -> float:
        """Coupling scalar of the inertia system.

        Equals det of the inertia tensor; must be nonzero for the moment
        equations to be solvable in either direction.
        """
        a, b, c = self.i_roll, self.i_pitch, self.i_yaw
        d, e, f = self.i_yz, self.i_zx, self.i_xy
        return a * b * c - a * d * d - b * e * e - c * f * f - 2.0 * d * e * f


@dataclass
class FlightState:
    """All solved flight variables at one time station.

    The four control variables (three surface deflections plus thrust)
    and the fourteen flight variables, together with the auxiliary time
    derivatives the marching scheme carries between stations.
    """

    t: float = 0.0
    v: float = 0.0           # speed along the flight path, m/s
    alpha: float = 0.0       # angle of attack (procedure value), rad
    beta: float = 0.0        # sideslip, rad
    p: float = 0.0           # roll rate, rad/s
    q: float = 0.0           # pitch rate, rad/s
    r: float = 0.0           # yaw rate, rad/s
    phi: float = 0.0         # bank, rad
    theta: float = 0.0       # pitch, rad
    psi: float = 0.0         # heading, rad
    theta_w: float = 0.0     # flight-path elevation, rad
    psi_w: float = 0.0       # flight-path azimuth, rad
    delta_l: float = 0.0     # aileron, rad
    delta_m: float = 0.0     # elevator, rad
    delta_n: float = 0.0     # rudder, rad
    thrust: float = 0.0      # N
    xg_dot: float = 0.0      # ground-axes velocity components, m/s
    yg_dot: float = 0.0
    zg_dot: float = 0.0
    # auxiliary derivatives carried between stations
    alpha_dot: float = 0.0
    beta_dot: float = 0.0
    theta_dot: float = 0.0
    psi_dot: float = 0.0
    thrust_dot: float = 0.0


@dataclass(frozen=True)
class AnalyticChannel:
    """One prescribed scalar of time with its analytic derivatives.

    All callables must accept numpy arrays. ``d3`` may be omitted for
    channels that are never differentiated three times (the bank angle).
    """

    f: Callable
    d1: Callable
    d2: Callable
    d3: Callable | None = None


@dataclass(frozen=True)
class AnalyticManeuver:
    """Closed-form constraint functions: three coordinates plus bank."""

    x: AnalyticChannel
    y: AnalyticChannel
    z: AnalyticChannel
    phi: AnalyticChannel


@dataclass(frozen=True)
class SampledManeuver:
    """Uniformly sampled constraint series: three coordinates plus bank."""

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    phi: np.ndarray


@dataclass(frozen=True)
class TrajectorySpec:
    """The four prescribed constraint histories plus the time grid.

    Exactly one of ``analytic`` or ``samples`` is set. For sampled input
    the grid is taken from the sample times.
    """

    duration: float
    dt: float
    analytic: AnalyticManeuver | None = None
    samples: SampledManeuver | None = None
    name: str = "custom"

    @property
    def station_count(self) -> int:
        return int(round(self.duration / self.dt)) + 1

    def validate(self) -> "TrajectorySpec":
        problems = []
        if not self.dt > 0.0:
            problems.append(("non_positive_dt", f"dt = {self.dt} must be > 0"))
        if not self.duration > 0.0:
            problems.append(("non_positive_duration",
                             f"duration = {self.duration} must be > 0"))
        if (self.analytic is None) == (self.samples is None):
            problems.append(("bad_channels",
                             "exactly one of analytic/samples must be set"))
        if self.dt > 0.0 and self.duration > 0.0:
            n = self.duration / self.dt
            if abs(n - round(n)) > 1e-6:
                problems.append(("grid_mismatch",
                                 f"duration {self.duration} is not an integer "
                                 f"multiple of dt {self.dt}"))
            elif self.station_count < 4:
                problems.append(("too_few_stations",
                                 f"{self.station_count} stations; boundary "
                                 "stencils need at least 4"))
        if self.samples is not None:
            s = self.samples
            n = len(s.t)
            if any(len(a) != n for a in (s.x, s.y, s.z, s.phi)):
                problems.append(("ragged_samples",
                                 "sample columns have unequal lengths"))
            elif n >= 2:
                steps = np.diff(s.t)
                if np.max(np.abs(steps - self.dt)) > 1e-9 * max(self.dt, 1.0):
                    problems.append(("non_uniform_samples",
                                     "sample times are not uniformly spaced "
                                     f"at dt = {self.dt}"))
        if problems:
            raise ConfigError(problems)
        return self


def mirage_iii() -> AircraftConfig:
    """Characteristic data set for the Mirage-III fighter."""
    return AircraftConfig(
        mass=7400.0,
        i_roll=90000.0,
        i_pitch=54000.0,
        i_yaw=60000.0,
        i_yz=0.0,
        i_zx=1800.0,
        i_xy=0.0,
        wing_area=36.0,
        span_ref=5.25,
        chord_ref=5.25,
        aero=AeroCoefficients(
            c_lift0=0.0,
            c_lift_alpha=2.204,
            c_drag0=0.015,
            k_drag=0.4,
            c_side_beta=-0.60,
            c_pitch0=0.0,
            c_pitch_alpha=-0.17,
            c_pitch_q=-0.4,
            c_pitch_dm=-0.45,
            c_roll_beta=-0.05,
            c_roll_p=-0.25,
            c_roll_r=0.06,
            c_roll_dl=-0.30,
            c_roll_dn=0.018,
            c_yaw_beta=0.15,
            c_yaw_p=0.055,
            c_yaw_r=-0.7,
            c_yaw_dl=0.0,
            c_yaw_dn=-0.085,
        ),
    )


def validate_config(cfg: AircraftConfig) -> AircraftConfig:
    """Check every aircraft invariant; report all violations at once.

    Returns the config unchanged when everything holds. Side-effect-free
    and idempotent.
    """
    v = []
    if not cfg.mass > 0.0:
        v.append(("non_positive_mass", f"mass = {cfg.mass} must be > 0"))
    for name in ("i_roll", "i_pitch", "i_yaw"):
        val = getattr(cfg, name)
        if not val > 0.0:
            v.append(("non_positive_inertia", f"{name} = {val} must be > 0"))
    for name in ("wing_area", "span_ref", "chord_ref"):
        val = getattr(cfg, name)
        if not val > 0.0:
            v.append(("non_positive_geometry", f"{name} = {val} must be > 0"))

    scale = abs(cfg.i_roll * cfg.i_pitch * cfg.i_yaw)
    if scale > 0.0 and abs(cfg.inertia_determinant) <= 1e-9 * scale:
        v.append(("singular_inertia",
                  "inertia coupling determinant is (numerically) zero; the "
                  "moment equations cannot be inverted"))

    a = cfg.aero
    if not a.c_lift_alpha > 0.0:
        v.append(("non_positive_lift_slope",
                  f"c_lift_alpha = {a.c_lift_alpha} must be > 0"))
    if a.c_drag0 < 0.0:
        v.append(("negative_drag", f"c_drag0 = {a.c_drag0} must be >= 0"))
    if a.k_drag < 0.0:
        v.append(("negative_drag", f"k_drag = {a.k_drag} must be >= 0"))

    det_scale = max(abs(a.c_roll_dl * a.c_yaw_dn),
                    abs(a.c_roll_dn * a.c_yaw_dl), 1e-30)
    if abs(a.control_determinant) <= 1e-12 * det_scale:
        v.append(("singular_control_matrix",
                  "aileron/rudder effectiveness determinant is zero"))
    if a.c_pitch_dm == 0.0:
        v.append(("singular_control_matrix",
                  "elevator effectiveness c_pitch_dm is zero"))

    if v:
        raise ConfigError(v)
    return cfg


# Config file keys use the conventional data-sheet symbols.
CONFIG_KEYS = {
    "m": "mass",
    "A": "i_roll",
    "B": "i_pitch",
    "C": "i_yaw",
    "D": "i_yz",
    "E": "i_zx",
    "F": "i_xy",
    "S": "wing_area",
    "b": "span_ref",
    "d": "chord_ref",
    "C_L0": "c_lift0",
    "C_L_alpha": "c_lift_alpha",
    "C_D0": "c_drag0",
    "K_CD": "k_drag",
    "C_y_beta": "c_side_beta",
    "C_m0": "c_pitch0",
    "C_m_alpha": "c_pitch_alpha",
    "C_m_q": "c_pitch_q",
    "C_m_delta_m": "c_pitch_dm",
    "C_l_beta": "c_roll_beta",
    "C_l_p": "c_roll_p",
    "C_l_r": "c_roll_r",
    "C_l_delta_l": "c_roll_dl",
    "C_l_delta_n": "c_roll_dn",
    "C_n_beta": "c_yaw_beta",
    "C_n_p": "c_yaw_p",
    "C_n_r": "c_yaw_r",
    "C_n_delta_l": "c_yaw_dl",
    "C_n_delta_n": "c_yaw_dn",
}

_AERO_FIELDS = {f for f in AeroCoefficients.__dataclass_fields__}


def load_config(path) -> AircraftConfig:
    """Parse a key=value aircraft data file and validate the result.

    Keys are the table symbols (m, A..F, S, b, d, C_L0, C_l_p, ...).
    Lines starting with '#' and blank lines are ignored. Every parse
    problem cites the key and the 1-based line number.
    """
    values: dict[str, float] = {}
    seen: dict[str, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigFileError(
                    f"{path}: line {lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, text = line.partition("=")
            key = key.strip()
            text = text.strip()
            if key not in CONFIG_KEYS:
                raise ConfigFileError(
                    f"{path}: line {lineno}: unknown key {key!r}")
            if key in seen:
                raise ConfigFileError(
                    f"{path}: line {lineno}: duplicate key {key!r} "
                    f"(first set on line {seen[key]})")
            try:
                values[key] = float(text)
            except ValueError:
                raise ConfigFileError(
                    f"{path}: line {lineno}: key {key!r}: "
                    f"{text!r} is not a number") from None
            seen[key] = lineno

    missing = [k for k in CONFIG_KEYS if k not in values]
    if missing:
        raise ConfigFileError(
            f"{path}: missing keys: {', '.join(missing)}")

    fields = {CONFIG_KEYS[k]: v for k, v in values.items()}
    aero = AeroCoefficients(**{k: v for k, v in fields.items()
                               if k in _AERO_FIELDS})
    body = {k: v for k, v in fields.items() if k not in _AERO_FIELDS}
    return validate_config(AircraftConfig(aero=aero, **body))


def load_sampled_maneuver(path) -> TrajectorySpec:
    """Parse a sampled maneuver file: rows of 't x_g y_g z_g phi'.

    Columns may be separated by commas or whitespace. The time column
    must be uniformly spaced.
    """
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 5:
                raise ConfigFileError(
                    f"{path}: line {lineno}: expected 5 columns "
                    f"(t, x_g, y_g, z_g, phi), got {len(parts)}")
            try:
                rows.append([float(p) for p in parts])
            except ValueError:
                raise ConfigFileError(
                    f"{path}: line {lineno}: non-numeric entry") from None
    if len(rows) < 4:
        raise ConfigFileError(
            f"{path}: only {len(rows)} sample rows; at least 4 required")
    data = np.asarray(rows, dtype=float)
    t = data[:, 0]
    steps = np.diff(t)
    dt = float(steps[0])
    if dt <= 0.0 or np.max(np.abs(steps - dt)) > 1e-9 * max(dt, 1.0):
        raise ConfigFileError(
            f"{path}: time column is not uniformly increasing")
    maneuver = SampledManeuver(t=t, x=data[:, 1], y=data[:, 2],
                               z=data[:, 3], phi=data[:, 4])
    return TrajectorySpec(duration=float(t[-1] - t[0]), dt=dt,
                          samples=maneuver, name="sampled").validate()
