"""Identical-atoms limit (omega_B -> omega_A, Gamma_B -> Gamma_A, mu_A = mu_B),
weak-interaction regime.

The limit formulas are implemented directly; the dissimilar module evaluated at
tiny detuning appears only as a test oracle.  The T-linear block of the force
on atom B uses the limit-consistent sign by default (`fb0_sign="limit"`); the
as-printed opposite sign is available via `fb0_sign="printed"` so the
inconsistency it causes in the net-force additivity can be demonstrated.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .dissimilar import (ForceBreakdown, _check_direction, _momentum_rate,
                         _polarization, _u_dim, _u_dre, _u_im, _u_re)
from .green import contraction_bundle
from .params import AtomSpec, ValidityWarning
from .quadrature import (QuadratureSettings, integral_off_resonant,
                         integral_semi_resonant)

__all__ = [
    "IdenticalConfig",
    "force_A_identical",
    "force_B_identical",
    "net_force_identical",
    "emission_rate_identical",
    "momentum_rate_identical",
    "figure_net_force_curve",
]


@dataclass(frozen=True)
class IdenticalConfig:
    """Degenerate pair: common frequency and linewidth, dipoles kept separate
    (equal by default) so orientation tests stay expressible."""

    omega0: float
    gamma0: float
    dipole_a: np.ndarray
    dipole_b: np.ndarray
    separation: np.ndarray

    def __post_init__(self):
        spec = AtomSpec(self.omega0, self.gamma0, self.dipole_a)
        object.__setattr__(self, "dipole_a", spec.dipole)
        object.__setattr__(self, "dipole_b", np.asarray(self.dipole_b, dtype=float))
        sep = np.asarray(self.separation, dtype=float)
        if sep.shape != (3,) or np.linalg.norm(sep) == 0.0:
            raise ValueError("separation must be a nonzero 3-vector")
        object.__setattr__(self, "separation", sep)

    @classmethod
    def isotropic(cls, omega0, gamma0, distance, dipole_scale=1.0):
        """Isotropic dipoles mu_x = mu_y = mu_z on both atoms, R along z."""
        mu = dipole_scale * np.ones(3) / np.sqrt(3.0)
        return cls(omega0, gamma0, mu, mu.copy(), np.array([0.0, 0.0, distance]))

    @property
    def k0(self) -> float:
        return self.omega0

    @property
    def distance(self) -> float:
        return float(np.linalg.norm(self.separation))

    @property
    def r_hat(self) -> np.ndarray:
        return self.separation / self.distance

    @property
    def atom_a(self):
        return AtomSpec(self.omega0, self.gamma0, self.dipole_a)

    @property
    def atom_b(self):
        return AtomSpec(self.omega0, self.gamma0, self.dipole_b)


class _IdemIngredients:
    def __init__(self, cfg: IdenticalConfig, t: float, settings: QuadratureSettings):
        if not np.isfinite(t) or t <= 0:
            raise ValueError("observation time must be positive and finite")
        self.cfg = cfg
        self.t = t
        self.k0 = cfg.k0
        self.c0 = contraction_bundle(cfg.dipole_a, cfg.dipole_b, cfg.k0, cfg.separation)
        self.e0 = np.exp(-cfg.gamma0 * t)
        self.isr = integral_semi_resonant(cfg.k0, cfg.k0, cfg.dipole_a, cfg.dipole_b,
                                          cfg.separation, settings)
        self._ior = None
        self._settings = settings
        if t <= cfg.distance:
            warnings.warn(
                f"T = {t:g} does not exceed R = {cfg.distance:g}; outside the causal region",
                ValidityWarning,
                stacklevel=3,
            )

    @property
    def ior(self):
        if self._ior is None:
            self._ior = integral_off_resonant(
                self.cfg.k0, self.cfg.k0, self.cfg.dipole_a, self.cfg.dipole_b,
                self.cfg.separation, self._settings)
        return self._ior


def _prep(cfg, t, settings):
    return _IdemIngredients(cfg, float(t), settings or QuadratureSettings())


def force_A_identical(cfg: IdenticalConfig, t,
                      settings: QuadratureSettings | None = None) -> ForceBreakdown:
    """Force on the excited atom in the degenerate limit."""
    g = _prep(cfg, t, settings)
    c = g.c0
    w = g.k0
    blocks = {
        "t_linear": (-2.0 * w**4 * g.e0 * g.t)
        * (c.re * c.grad_im + c.im * c.grad_re),
        "omega_deriv": (-2.0 * g.e0)
        * (4.0 * w**3 * (c.re * c.grad_re - c.im * c.grad_im)
           + w**4 * (c.domega_re * c.grad_re + c.re * c.domega_grad_re
                     - c.domega_im * c.grad_im - c.im * c.domega_grad_im)),
        "omega_cubed": (w**3 * g.e0) * (c.re * c.grad_re - c.im * c.grad_im),
        "semi_resonant": (-2.0 * w**2 * g.e0 * g.isr.value) * c.grad_re,
        "off_resonant": 4.0 * w**2 * (1.0 - 2.0 * g.e0) * g.ior.value,
    }
    return ForceBreakdown(blocks=blocks)


def force_B_identical(cfg: IdenticalConfig, t,
                      settings: QuadratureSettings | None = None,
                      fb0_sign: str = "limit") -> ForceBreakdown:
    """Force on the ground-state atom.  fb0_sign selects the T-linear block sign:
    "limit" (default, consistent with the detuned formulas) or "printed"."""
    if fb0_sign not in ("limit", "printed"):
        raise ValueError("fb0_sign must be 'limit' or 'printed'")
    g = _prep(cfg, t, settings)
    c = g.c0
    w = g.k0
    sign = -1.0 if fb0_sign == "limit" else 1.0
    blocks = {
        "t_linear": (sign * 2.0 * w**4 * g.e0 * g.t)
        * (c.re * c.grad_im - c.im * c.grad_re),
        "omega_deriv": (2.0 * g.e0 * w**2)
        * ((2.0 * w * c.re + w**2 * c.domega_re) * c.grad_re
           + (2.0 * w * c.im + w**2 * c.domega_im) * c.grad_im),
        "omega_cubed": (-w**3 * g.e0) * (c.re * c.grad_re + c.im * c.grad_im),
        "semi_resonant": (2.0 * w**2 * g.e0 * g.isr.value) * c.grad_re,
        "off_resonant": -4.0 * w**2 * (1.0 - 2.0 * g.e0) * g.ior.value,
    }
    return ForceBreakdown(blocks=blocks)


def net_force_identical(cfg: IdenticalConfig, t,
                        settings: QuadratureSettings | None = None) -> ForceBreakdown:
    """Net force on the pair: the exact degenerate limit of the detuned net
    force, equal to the sum of the per-atom forces under the default sign
    convention.  Fully resonant: no semi- or off-resonant blocks survive."""
    g = _prep(cfg, t, settings)
    c = g.c0
    w = g.k0
    blocks = {
        "t_linear": (-4.0 * w**4 * g.e0 * g.t) * (c.re * c.grad_im),
        "omega_deriv": g.e0 * w**4
        * (4.0 * c.domega_im * c.grad_im + 2.0 * c.im * c.domega_grad_im
           - 2.0 * c.re * c.domega_grad_re),
        "omega3_im": (10.0 * w**3 * g.e0) * (c.im * c.grad_im),
        "omega3_re": (-4.0 * w**3 * g.e0) * (c.re * c.grad_re),
    }
    return ForceBreakdown(blocks=blocks)


def _emission_content_identical(g: _IdemIngredients):
    """Angular profile h(c) whose first moment balances the net force exactly."""
    k0, r = g.k0, g.cfg.distance
    c0 = g.c0
    coeff_im = (-4.0 * k0**4 * g.t * c0.re + 10.0 * k0**3 * c0.im
                + 4.0 * k0**4 * c0.domega_im)
    coeff_dim = 2.0 * k0**4 * c0.im
    coeff_re = -4.0 * k0**3 * c0.re
    coeff_dre = -2.0 * k0**4 * c0.re

    def content(c):
        tot = coeff_im * _u_im(k0, r, c)
        tot = tot + coeff_dim * _u_dim(k0, r, c)
        tot = tot + coeff_re * _u_re(k0, r, c)
        tot = tot + coeff_dre * _u_dre(k0, r, c)
        return -(2.0 * np.pi**2 / k0) * g.e0 * tot

    return content


def emission_rate_identical(cfg: IdenticalConfig, t, direction,
                            settings: QuadratureSettings | None = None) -> float:
    """Directional one-photon emission density in the degenerate limit."""
    d = _check_direction(direction)
    g = _prep(cfg, t, settings)
    content = _emission_content_identical(g)
    c = float(d @ cfg.r_hat)
    if abs(c) < 1e-15:
        c = 0.0
    p = _polarization(cfg.dipole_a, cfg.dipole_b, d[None])[0]
    return float(p * content(np.asarray(c)) / (2.0 * np.pi**2))


def momentum_rate_identical(cfg: IdenticalConfig, t,
                            settings: QuadratureSettings | None = None) -> np.ndarray:
    """hbar k0 times the first angular moment of the directional density."""
    g = _prep(cfg, t, settings)
    content = _emission_content_identical(g)
    value, _ = _momentum_rate(cfg.r_hat, cfg.dipole_a, cfg.dipole_b,
                              content, g.k0, settings)
    return value


def figure_net_force_curve(omega0, gamma0, t, r_grid, delta_ratio=1e-3,
                           dipole_scale=1.0,
                           settings: QuadratureSettings | None = None):
    """Normalized net-force curves versus k0 R for isotropic dipoles.

    Returns an array of rows (k0R, identical net force / N1, stationary
    dissimilar net force / N2, validity_flag) with
    N1 = |mu_A|^2 |mu_B|^2 omega0^7 T / 100 and
    N2 = |mu_A|^2 |mu_B|^2 omega_A^7 / (100 Delta).  The dissimilar column is
    the non-oscillating block, which is the adiabatic-excitation net force the
    comparison curve shows.
    """
    from .params import AtomPairConfig, AtomSpec, EvalPoint, check_validity

    r_grid = np.asarray(r_grid, dtype=float)
    if np.any(r_grid <= 0):
        raise ValueError("r_grid must be positive")
    mu = dipole_scale * np.ones(3) / np.sqrt(3.0)
    mu2 = float(mu @ mu)
    delta = delta_ratio * omega0
    omega_b = omega0 - delta
    n1 = mu2 * mu2 * omega0**7 * t / 100.0
    n2 = mu2 * mu2 * omega0**7 / (100.0 * delta)
    settings = settings or QuadratureSettings()

    rows = np.empty((r_grid.size, 4))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        for i, dist in enumerate(r_grid):
            cfg_i = IdenticalConfig.isotropic(omega0, gamma0, dist, dipole_scale)
            f_id = net_force_identical(cfg_i, t, settings)
            pair = AtomPairConfig(
                atom_a=AtomSpec(omega0, gamma0, mu),
                atom_b=AtomSpec(omega_b, gamma0, mu),
                separation=np.array([0.0, 0.0, dist]),
            )
            f_diss = net_force_dissimilar_stationary(pair, t, settings)
            report = check_validity(pair, EvalPoint(t), regime="identical-limit")
            rows[i] = (
                omega0 * dist,
                float(f_id.total @ cfg_i.r_hat) / n1,
                float(f_diss @ pair.r_hat) / n2,
                1.0 if report.all_ok() else 0.0,
            )
    return rows


def net_force_dissimilar_stationary(cfg, t, settings=None):
    """Non-oscillating block of the detuned net force (adiabatic-excitation form)."""
    from .dissimilar import net_force_dissimilar

    return net_force_dissimilar(cfg, t, settings)["stationary"]
