"""Shared finite-difference oracles and synthetic smooth motions.

The differentiated flight equations are verified against their parent
algebraic relations along closed-form sinusoidal motions. Where a parent
relation constrains one of its own inputs (the lateral balance fixes the
roll rate needed for a prescribed sideslip rate, the normal balance the
pitch rate), the motion is made exactly consistent by solving the affine
dependence of the parent on that input.
"""

from __future__ import annotations

import math

from invflight import aero, dynamics, mirage_iii


class Sine:
    """A smooth scalar signal mean + amp*sin(w*t + phase)."""

    def __init__(self, mean, amp, w, phase=0.0):
        self.mean = mean
        self.amp = amp
        self.w = w
        self.phase = phase

    def __call__(self, t):
        return self.mean + self.amp * math.sin(self.w * t + self.phase)

    def d1(self, t):
        return self.amp * self.w * math.cos(self.w * t + self.phase)

    def d2(self, t):
        return -self.amp * self.w ** 2 * math.sin(self.w * t + self.phase)

    def d3(self, t):
        return -self.amp * self.w ** 3 * math.cos(self.w * t + self.phase)


def d1_5pt(f, t, h=1e-3):
    """Fourth-order central first derivative of a callable."""
    return (-f(t + 2 * h) + 8 * f(t + h)
            - 8 * f(t - h) + f(t - 2 * h)) / (12 * h)


def d2_5pt(f, t, h=1e-3):
    """Fourth-order central second derivative of a callable."""
    return (-f(t + 2 * h) + 16 * f(t + h) - 30 * f(t)
            + 16 * f(t - h) - f(t - 2 * h)) / (12 * h * h)


def d1_central(f, t, h):
    return (f(t + h) - f(t - h)) / (2 * h)


def d2_central(f, t, h):
    return (f(t + h) - 2 * f(t) + f(t - h)) / (h * h)


def convergence_order(f_exact, f_fd, ts, h=2e-3):
    """Observed order of an FD oracle against an analytic value.

    ``f_exact(t)`` is the analytic derivative under test; ``f_fd(t, h)``
    the finite-difference estimate from the parent. Returns the minimum
    observed order over the probe times (capped handling for errors at
    roundoff level).
    """
    worst = math.inf
    for t in ts:
        e1 = abs(f_fd(t, h) - f_exact(t))
        e2 = abs(f_fd(t, h / 2) - f_exact(t))
        if e2 < 1e-13 * max(1.0, abs(f_exact(t))):
            continue  # already at roundoff; treat as converged
        worst = min(worst, math.log2(e1 / e2))
    return worst


class AttitudeMotion:
    """Free smooth attitude/airflow motion for the coupling oracles."""

    def __init__(self):
        self.alpha = Sine(0.05, 0.04, 1.1, 0.4)
        self.beta = Sine(0.01, 0.05, 0.7, 1.3)
        self.phi = Sine(0.15, 0.45, 0.6, 0.7)
        self.theta = Sine(0.10, 0.08, 0.9, 2.1)
        self.psi = Sine(-0.05, 0.12, 0.8, 0.3)


class WindChannelMotion:
    """Exactly consistent motion for the translational-channel oracles.

    All signals are free sinusoids except the roll and pitch rates,
    which are solved from the lateral and normal force balances so that
    the sideslip and angle-of-attack rates along the motion equal the
    time derivatives of the prescribed sideslip/angle-of-attack signals.
    """

    def __init__(self, coeffs=None):
        cfg = mirage_iii()
        self.coeffs = coeffs if coeffs is not None else cfg.aero
        self.mass = cfg.mass
        self.g = 9.81
        self.s_ref = cfg.wing_area
        self.alpha = Sine(0.09, 0.05, 1.1, 0.4)
        self.beta = Sine(0.02, 0.05, 0.7, 1.3)
        self.theta = Sine(0.08, 0.06, 0.9, 2.1)
        self.phi = Sine(0.2, 0.5, 0.6, 0.7)
        self.v = Sine(190.0, 12.0, 0.5, 0.9)
        self.rho = Sine(0.5, 0.05, 0.3, 0.2)
        self.thrust = Sine(12000.0, 3000.0, 0.8, 1.7)
        self.r = Sine(0.05, 0.2, 1.2, 0.5)

    def qbar(self, t):
        return 0.5 * self.rho(t) * self.v(t) ** 2

    def qbar_dot(self, t):
        return (0.5 * self.rho.d1(t) * self.v(t) ** 2
                + self.rho(t) * self.v(t) * self.v.d1(t))

    def force_coeffs(self, t):
        c = self.coeffs
        c_lift = c.c_lift0 + c.c_lift_alpha * self.alpha(t)
        c_drag = c.c_drag0 + c.k_drag * c_lift ** 2
        c_side = c.c_side_beta * self.beta(t)
        return aero.body_force_coefficients(c_drag, c_side, c_lift,
                                            self.alpha(t), self.beta(t))

    def force_coeff_rates(self, t, h=1e-3):
        return tuple(
            d1_5pt(lambda u, i=i: self.force_coeffs(u)[i], t, h)
            for i in range(3))

    def common(self, t):
        c_x, c_y, c_z = self.force_coeffs(t)
        return dict(mass=self.mass, g=self.g, s_ref=self.s_ref,
                    qbar=self.qbar(t), alpha=self.alpha(t),
                    beta=self.beta(t), theta=self.theta(t),
                    phi=self.phi(t), c_x=c_x, c_y=c_y, c_z=c_z)

    def p(self, t):
        """Roll rate that makes the lateral balance yield beta.d1(t)."""
        kw = self.common(t)
        kw.update(v=self.v(t), thrust=self.thrust(t), r=self.r(t))
        base = dynamics.sideslip_rate(p=0.0, **kw)
        slope = dynamics.sideslip_rate(p=1.0, **kw) - base
        return (self.beta.d1(t) - base) / slope

    def q(self, t):
        """Pitch rate that makes the normal balance yield alpha.d1(t)."""
        kw = self.common(t)
        kw.update(v=self.v(t), thrust=self.thrust(t), r=self.r(t),
                  p=self.p(t))
        base = dynamics.aoa_rate(q=0.0, **kw)
        slope = dynamics.aoa_rate(q=1.0, **kw) - base
        return (self.alpha.d1(t) - base) / slope

    def balance_thrust(self, t):
        """Thrust closing the axial balance along the motion."""
        kw = self.common(t)
        return dynamics.thrust_from_force_balance(v_dot=self.v.d1(t), **kw)

    def rate_kwargs(self, t):
        """Full keyword set for the differentiated-channel calls."""
        kw = self.common(t)
        cx_d, cy_d, cz_d = self.force_coeff_rates(t)
        kw.update(
            qbar_dot=self.qbar_dot(t),
            v=self.v(t), v_dot=self.v.d1(t),
            thrust=self.thrust(t), thrust_dot=self.thrust.d1(t),
            alpha_dot=self.alpha.d1(t), beta_dot=self.beta.d1(t),
            theta_dot=self.theta.d1(t), phi_dot=self.phi.d1(t),
            p=self.p(t), q=self.q(t), r=self.r(t),
            p_dot=d1_5pt(self.p, t, 1e-4),
            q_dot=d1_5pt(self.q, t, 1e-4),
            r_dot=self.r.d1(t),
            c_x_dot=cx_d, c_y_dot=cy_d, c_z_dot=cz_d)
        return kw
