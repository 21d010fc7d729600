"""Direct 6-DOF simulation: integrate the equations of motion forward
under given control histories.

Used as the round-trip oracle for the inverse solver. The state is kept
in body axes (velocity components u, v, w rather than wind-axes speed
and airflow angles), deliberately the other formulation than the inverse
path, so a successful round trip cross-validates both. Gravity enters
as the explicit weight resolution along body axes; thrust acts along
the body x axis only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import aero, dynamics, kinematics
from .atmosphere import density
from .errors import NonFiniteState
from .model import ISA, AircraftConfig, FlightEnvironment, FlightState
from .numerics import UniformGrid, rk4_step

__all__ = ["ControlHistory", "ForwardHistory", "simulate"]


@dataclass(frozen=True)
class ControlHistory:
    """Per-station surface deflections (rad) and thrust (N)."""

    grid: UniformGrid
    delta_l: np.ndarray
    delta_m: np.ndarray
    delta_n: np.ndarray
    thrust: np.ndarray


@dataclass
class ForwardHistory:
    """Per-station simulated state of the direct 6-DOF run."""

    grid: UniformGrid
    t: np.ndarray
    u: np.ndarray
    v_side: np.ndarray
    w: np.ndarray
    p: np.ndarray
    q: np.ndarray
    r: np.ndarray
    phi: np.ndarray
    theta: np.ndarray
    psi: np.ndarray
    xg: np.ndarray
    yg: np.ndarray
    zg: np.ndarray
    v: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray


def simulate(initial: FlightState, controls: ControlHistory,
             cfg: AircraftConfig, env: FlightEnvironment = ISA,
             position0=(0.0, 0.0, 0.0),
             coeffs=None) -> ForwardHistory:
    """Integrate the body-axes equations of motion under the controls.

    The twelve-variable state is (u, v, w, p, q, r, phi, theta, psi,
    x_g, y_g, z_g), advanced with fixed-step RK4 on the control grid;
    controls are interpolated linearly between stations for the
    half-step stage evaluations. ``coeffs`` overrides the aircraft
    coefficient set (used by the round trip to keep the trim-shifted
    lift curve of the inverse run); the default is ``cfg.aero``.
    """
    if coeffs is None:
        coeffs = cfg.aero
    inertia = dynamics.inertia_system(cfg)
    grid = controls.grid
    n = grid.count
    dt = grid.dt
    t0 = grid.t0

    mass = cfg.mass
    g = env.g
    s_ref = cfg.wing_area
    span = cfg.span_ref
    chord = cfg.chord_ref
    c_lift0 = coeffs.c_lift0
    c_lift_alpha = coeffs.c_lift_alpha
    c_drag0 = coeffs.c_drag0
    k_drag = coeffs.k_drag
    c_side_beta = coeffs.c_side_beta

    dl = controls.delta_l.tolist()
    dm = controls.delta_m.tolist()
    dn = controls.delta_n.tolist()
    th = controls.thrust.tolist()
    inv_dt = 1.0 / dt
    last = n - 2

    def rates(t, y):
        (u, v_side, w, p, q, r, phi, theta, psi, xg, yg, zg) = y
        x = (t - t0) * inv_dt
        i = int(x)
        if i > last:
            i = last
        frac = x - i
        delta_l = dl[i] + (dl[i + 1] - dl[i]) * frac
        delta_m = dm[i] + (dm[i + 1] - dm[i]) * frac
        delta_n = dn[i] + (dn[i + 1] - dn[i]) * frac
        thrust = th[i] + (th[i + 1] - th[i]) * frac

        v, alpha, beta = kinematics.airflow_from_body(u, v_side, w)
        rho = density(zg, env)
        qbar = 0.5 * rho * v * v

        c_lift = c_lift0 + c_lift_alpha * alpha
        c_drag = c_drag0 + k_drag * c_lift * c_lift
        c_side = c_side_beta * beta
        body = aero.body_force_coefficients(c_drag, c_side, c_lift,
                                            alpha, beta)
        moments = aero.moment_coefficients(alpha, beta, p, q, r, v, span,
                                           delta_l, delta_m, delta_n, coeffs)
        fx, fy, fz, ml, mm, mn = aero.dimensionalize(qbar, s_ref, chord,
                                                     body, moments)

        st, ct = math.sin(theta), math.cos(theta)
        sp, cp = math.sin(phi), math.cos(phi)
        u_dot = (fx + thrust - mass * g * st) / mass + v_side * r - w * q
        v_dot = (fy + mass * g * ct * sp) / mass + w * p - u * r
        w_dot = (fz + mass * g * ct * cp) / mass + u * q - v_side * p

        p_dot, q_dot, r_dot = dynamics.angular_accels_forward(
            p, q, r, ml, mm, mn, inertia)
        phi_dot, theta_dot, psi_dot = kinematics.euler_rates_from_body(
            phi, theta, p, q, r)
        theta_w, psi_w = kinematics.path_angles_from_attitude(
            alpha, beta, phi, theta, psi)
        xg_dot, yg_dot, zg_dot = kinematics.ground_velocity_from_path(
            v, theta_w, psi_w)
        return (u_dot, v_dot, w_dot, p_dot, q_dot, r_dot,
                phi_dot, theta_dot, psi_dot, xg_dot, yg_dot, zg_dot)

    u0, v0, w0 = kinematics.velocity_triplet(initial.v, initial.alpha,
                                             initial.beta)
    y = (u0, v0, w0, initial.p, initial.q, initial.r,
         initial.phi, initial.theta, initial.psi,
         float(position0[0]), float(position0[1]), float(position0[2]))

    out = np.empty((12, n))
    v_arr = np.empty(n)
    alpha_arr = np.empty(n)
    beta_arr = np.empty(n)

    def record(i, state):
        for j, value in enumerate(state):
            out[j, i] = value
        v_i, a_i, b_i = kinematics.airflow_from_body(state[0], state[1],
                                                     state[2])
        v_arr[i] = v_i
        alpha_arr[i] = a_i
        beta_arr[i] = b_i

    record(0, y)
    for i in range(n - 1):
        t_n = t0 + i * dt
        y, _ = rk4_step(rates, t_n, y, dt)
        for value in y:
            if not math.isfinite(value):
                raise NonFiniteState(
                    f"forward state went non-finite at station {i + 1}")
        record(i + 1, y)

    return ForwardHistory(
        grid=grid, t=grid.times(),
        u=out[0], v_side=out[1], w=out[2],
        p=out[3], q=out[4], r=out[5],
        phi=out[6], theta=out[7], psi=out[8],
        xg=out[9], yg=out[10], zg=out[11],
        v=v_arr, alpha=alpha_arr, beta=beta_arr)
