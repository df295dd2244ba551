"""Forces, interaction energies, directional emission and photon-momentum rate
for dissimilar atoms (omega_A != omega_B) after sudden excitation of atom A.

Every quantity is assembled from named blocks (resonant 1/Delta, cos, sin,
sum-frequency, semi-resonant, off-resonant); totals are block sums.  All
prefactors are in natural units (hbar = c = eps0 = 1).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .green import contraction_bundle
from .params import AtomPairConfig, EvalPoint, ValidityWarning
from .quadrature import (QuadratureSettings, integral_off_resonant,
                         integral_semi_resonant, integrate_solid_angle)

__all__ = [
    "ForceBreakdown",
    "EnergyBreakdown",
    "force_A_dissimilar",
    "force_B_dissimilar",
    "net_force_dissimilar",
    "energy_A_dissimilar",
    "energy_B_dissimilar",
    "emission_rate_dissimilar",
    "momentum_rate_dissimilar",
]

_MAX_PHASE = 1e12


@dataclass(frozen=True)
class ForceBreakdown:
    """Force 3-vector decomposed into named physical blocks."""

    blocks: dict

    @property
    def total(self) -> np.ndarray:
        return sum(self.blocks.values(), np.zeros(3))

    def __getitem__(self, name):
        return self.blocks[name]

    @property
    def names(self):
        return tuple(self.blocks)


@dataclass(frozen=True)
class EnergyBreakdown:
    """Interaction energy decomposed into the same named blocks, scalar-valued."""

    blocks: dict

    @property
    def total(self) -> float:
        return float(sum(self.blocks.values()))

    def __getitem__(self, name):
        return self.blocks[name]

    @property
    def names(self):
        return tuple(self.blocks)


class _Ingredients:
    """Shared contraction bundles, exponentials and q-integrals for one (cfg, T)."""

    def __init__(self, cfg: AtomPairConfig, t: float, settings: QuadratureSettings):
        if not np.isfinite(t) or t <= 0:
            raise ValueError("observation time must be positive and finite")
        self.cfg = cfg
        self.t = t
        self.wa, self.wb = cfg.atom_a.omega, cfg.atom_b.omega
        self.ga, self.gb = cfg.atom_a.gamma, cfg.atom_b.gamma
        self.delta = cfg.detuning
        if abs(self.delta * t) > _MAX_PHASE:
            raise ValueError("phase precision loss: |Delta_AB * T| exceeds 1e12")
        mu_a, mu_b, sep = cfg.atom_a.dipole, cfg.atom_b.dipole, cfg.separation
        self.ca = contraction_bundle(mu_a, mu_b, self.wa, sep)
        self.cb = contraction_bundle(mu_a, mu_b, self.wb, sep)
        self.e_a = np.exp(-self.ga * t)
        self.e_ab = np.exp(-(self.ga + self.gb) * t / 2.0)
        self.cos_d = np.cos(self.delta * t)
        self.sin_d = np.sin(self.delta * t)
        self.isr = integral_semi_resonant(self.wa, self.wb, mu_a, mu_b, sep, settings)
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
                self.wa, self.wb, self.cfg.atom_a.dipole, self.cfg.atom_b.dipole,
                self.cfg.separation, self._settings)
        return self._ior


def _require_dissimilar(cfg: AtomPairConfig):
    if cfg.detuning == 0.0:
        raise ValueError(
            "Delta_AB = 0: the 1/Delta blocks are singular; use the identical-atoms module")


def _prep(cfg, t, settings):
    _require_dissimilar(cfg)
    if isinstance(t, EvalPoint):
        t = t.t
    return _Ingredients(cfg, float(t), settings or QuadratureSettings())


def force_A_dissimilar(cfg: AtomPairConfig, t,
                       settings: QuadratureSettings | None = None) -> ForceBreakdown:
    """Force on the initially excited atom A, six-block decomposition."""
    g = _prep(cfg, t, settings)
    ca, cb = g.ca, g.cb
    blocks = {
        "resonant_over_delta": (-2.0 * g.wa**4 * g.e_a / g.delta)
        * (ca.re * ca.grad_re - ca.im * ca.grad_im),
        "resonant_cos": (2.0 * g.wb**4 * g.e_ab * g.cos_d / g.delta)
        * (cb.re * cb.grad_re - cb.im * cb.grad_im),
        "resonant_sin": (-2.0 * g.wb**4 * g.e_ab * g.sin_d / g.delta)
        * (cb.re * cb.grad_im + cb.im * cb.grad_re),
        "resonant_sum_freq": (2.0 * g.wa**4 * g.e_a / (g.wa + g.wb))
        * (ca.re * ca.grad_re - ca.im * ca.grad_im),
        "semi_resonant": (-2.0 * g.wb**2 * g.e_ab * g.isr.value)
        * (g.cos_d * cb.grad_re - g.sin_d * cb.grad_im),
        "off_resonant": 4.0 * g.wa * g.wb * (1.0 - 2.0 * g.e_a) * g.ior.value,
    }
    return ForceBreakdown(blocks=blocks)


def force_B_dissimilar(cfg: AtomPairConfig, t,
                       settings: QuadratureSettings | None = None) -> ForceBreakdown:
    """Force on atom B; note the mixed-wavenumber products G(k_B) grad G(k_A)."""
    g = _prep(cfg, t, settings)
    ca, cb = g.ca, g.cb
    blocks = {
        "resonant_over_delta": (2.0 * g.wa**4 * g.e_a / g.delta)
        * (ca.re * ca.grad_re + ca.im * ca.grad_im),
        "resonant_cos": (-2.0 * g.wb**2 * g.wa**2 * g.e_ab * g.cos_d / g.delta)
        * (cb.re * ca.grad_re + cb.im * ca.grad_im),
        "resonant_sin": (-2.0 * g.wb**2 * g.wa**2 * g.e_ab * g.sin_d / g.delta)
        * (cb.re * ca.grad_im - cb.im * ca.grad_re),
        "resonant_sum_freq": (-2.0 * g.wa**4 * g.e_a / (g.wa + g.wb))
        * (ca.re * ca.grad_re + ca.im * ca.grad_im),
        "semi_resonant": (2.0 * g.wa**2 * g.e_ab * g.isr.value)
        * (g.cos_d * ca.grad_re + g.sin_d * ca.grad_im),
        "off_resonant": -4.0 * g.wa * g.wb * (1.0 - 2.0 * g.e_a) * g.ior.value,
    }
    return ForceBreakdown(blocks=blocks)


def net_force_dissimilar(cfg: AtomPairConfig, t,
                         settings: QuadratureSettings | None = None) -> ForceBreakdown:
    """Net force on the pair, evaluated directly from its closed form (not as a
    sum of the per-atom forces); the off-resonant blocks cancel identically."""
    g = _prep(cfg, t, settings)
    if abs(g.delta) > 0.1 * g.wa:
        warnings.warn(
            "net-force closed form assumes |Delta_AB| << omega_A; "
            f"|Delta|/omega = {abs(g.delta) / g.wa:g}",
            ValidityWarning,
            stacklevel=2,
        )
    ca, cb = g.ca, g.cb
    ka2, kb2 = g.wa**2, g.wb**2
    inner_re = kb2 * cb.grad_re - ka2 * ca.grad_re
    inner_im = kb2 * cb.grad_im + ka2 * ca.grad_im
    blocks = {
        "stationary": (8.0 * g.e_a * g.wa**4 * g.wb / (g.wa**2 - g.wb**2))
        * (ca.im * ca.grad_im),
        "resonant_cos": (2.0 * g.e_ab * kb2 * g.cos_d / g.delta)
        * (cb.re * inner_re - cb.im * inner_im),
        "resonant_sin": (-2.0 * g.e_ab * kb2 * g.sin_d / g.delta)
        * (cb.re * inner_im + cb.im * inner_re),
        "semi_resonant": (-2.0 * g.e_ab * g.isr.value)
        * (g.cos_d * inner_re - g.sin_d * inner_im),
    }
    return ForceBreakdown(blocks=blocks)


def energy_A_dissimilar(cfg: AtomPairConfig, t,
                        settings: QuadratureSettings | None = None) -> EnergyBreakdown:
    g = _prep(cfg, t, settings)
    ca, cb = g.ca, g.cb
    jor = _energy_off_resonant_integral(cfg, settings or QuadratureSettings())
    blocks = {
        "resonant_over_delta": (2.0 * g.wa**4 * g.e_a / g.delta)
        * (ca.re**2 - ca.im**2),
        "resonant_cos": (-2.0 * g.wb**4 * g.e_ab * g.cos_d / g.delta)
        * (cb.re**2 - cb.im**2),
        "resonant_sin": (4.0 * g.wb**4 * g.e_ab * g.sin_d / g.delta)
        * (cb.re * cb.im),
        "resonant_sum_freq": (-2.0 * g.wa**4 * g.e_a / (g.wa + g.wb))
        * (ca.re**2 - ca.im**2),
        "semi_resonant": (2.0 * g.wb**2 * g.e_ab * g.isr.value)
        * (cb.re * g.cos_d - cb.im * g.sin_d),
        "off_resonant": -4.0 * g.wa * g.wb * (2.0 * g.e_a - 1.0) * jor,
    }
    return EnergyBreakdown(blocks=blocks)


def energy_B_dissimilar(cfg: AtomPairConfig, t,
                        settings: QuadratureSettings | None = None) -> EnergyBreakdown:
    g = _prep(cfg, t, settings)
    ca, cb = g.ca, g.cb
    jor = _energy_off_resonant_integral(cfg, settings or QuadratureSettings())
    blocks = {
        "resonant_over_delta": (2.0 * g.wa**4 * g.e_a / g.delta)
        * (ca.re**2 + ca.im**2),
        "resonant_cos": (-2.0 * g.wa**2 * g.wb**2 * g.e_ab * g.cos_d / g.delta)
        * (ca.re * cb.re + ca.im * cb.im),
        "resonant_sin": (-2.0 * g.wa**2 * g.wb**2 * g.e_ab * g.sin_d / g.delta)
        * (ca.re * cb.im - ca.im * cb.re),
        "resonant_sum_freq": (-2.0 * g.wa**4 * g.e_a / (g.wa + g.wb))
        * (ca.re**2 + ca.im**2),
        "semi_resonant": (2.0 * g.wa**2 * g.e_ab * g.isr.value)
        * (ca.re * g.cos_d + ca.im * g.sin_d),
        "off_resonant": -4.0 * g.wa * g.wb * (2.0 * g.e_a - 1.0) * jor,
    }
    return EnergyBreakdown(blocks=blocks)


def _energy_off_resonant_integral(cfg, settings):
    """int_0^inf dq/pi q^4 [mu_A.G(iqR).mu_B]^2 / ((q^2+k_A^2)(q^2+k_B^2))."""
    from scipy import integrate as _si
    from .green import imag_axis_contraction_scaled
    from .quadrature import _q_cutoff

    ka, kb = cfg.k_a, cfg.k_b
    r = cfg.distance

    def f(q):
        val, _ = imag_axis_contraction_scaled(q, cfg.atom_a.dipole, cfg.atom_b.dipole,
                                              cfg.separation)
        return val * val / ((q * q + ka * ka) * (q * q + kb * kb))

    hi = _q_cutoff(ka, kb, r, settings.abs_tol, decay=2.0)
    val, _ = _si.quad(f, 0.0, hi, epsabs=settings.abs_tol, epsrel=settings.rel_tol,
                      limit=settings.max_subdivisions)
    return val / np.pi


# --- directional emission -----------------------------------------------------
#
# The directional (parity-odd) one-photon emission density is built so that its
# first angular moment reproduces the net force exactly, block by block, via
# the exact identities (R-hat polar axis, c = cos theta, x = kR):
#
#   int dTheta khat p(khat) sin(kRc)                    = (16 pi^2/k^2) grad[mu.ImG.mu]
#   int dTheta khat p(khat) [Rc cos(kRc) + (2/k)sin(kRc)]
#                                                       = (16 pi^2/k^2) d/dw grad[mu.ImG.mu]
#   int dTheta khat p(khat) sgn(c)[cos(kRc) - (2/x^2)(6c^2-4) - (12/x^4)(12c^2-6)]
#                                                       = (16 pi^2/k^2) grad[mu.ReG.mu]
#
# with p(khat) = mu_A.(I - khat khat).mu_B.  The sgn(c) pieces carry the
# hemisphere asymmetry; sgn(0) = 0 realizes the H(0) = 1/2 convention as the
# average of the two branches.


def _u_im(k, r, c):
    scale = k * k / (16.0 * np.pi**2)
    return scale * np.sin(k * r * c)


def _u_re(k, r, c):
    x = k * r
    scale = k * k / (16.0 * np.pi**2)
    return scale * np.sign(c) * (np.cos(k * r * c)
                                 - (2.0 / x**2) * (6.0 * c * c - 4.0)
                                 - (12.0 / x**4) * (12.0 * c * c - 6.0))


def _u_dim(k, r, c):
    scale = k * k / (16.0 * np.pi**2)
    return scale * (r * c * np.cos(k * r * c) + (2.0 / k) * np.sin(k * r * c))


def _u_dre(k, r, c):
    x = k * r
    scale = k * k / (16.0 * np.pi**2)
    return scale * np.sign(c) * (-r * c * np.sin(k * r * c)
                                 + (2.0 / k) * np.cos(k * r * c)
                                 + (24.0 / (k * x**4)) * (12.0 * c * c - 6.0))


def _emission_content_dissimilar(g: _Ingredients):
    """Scalar angular profile h(c); the rate is p(khat) h(c) / (2 pi^2)."""
    ka, kb, r = g.wa, g.wb, g.cfg.distance
    ca, cb = g.ca, g.cb
    ka2, kb2 = ka * ka, kb * kb
    x1 = 8.0 * g.e_a * ka**4 * kb / (ka2 - kb2) * ca.im
    pre2 = 2.0 * g.e_ab * kb2 * g.cos_d / g.delta
    pre3 = -2.0 * g.e_ab * kb2 * g.sin_d / g.delta
    pre4 = -2.0 * g.e_ab * g.isr.value

    def content(c):
        uim_a = _u_im(ka, r, c)
        uim_b = _u_im(kb, r, c)
        ure_a = _u_re(ka, r, c)
        ure_b = _u_re(kb, r, c)
        d_re = kb2 * ure_b - ka2 * ure_a
        s_im = kb2 * uim_b + ka2 * uim_a
        tot = x1 * uim_a
        tot = tot + pre2 * (cb.re * d_re - cb.im * s_im)
        tot = tot + pre3 * (cb.re * s_im + cb.im * d_re)
        tot = tot + pre4 * (g.cos_d * d_re - g.sin_d * s_im)
        return -(2.0 * np.pi**2 / ka) * tot

    return content


def _polarization(mu_a, mu_b, dirs):
    """mu_A.(I - khat khat).mu_B for an (..., 3) array of unit vectors."""
    dirs = np.asarray(dirs, dtype=float)
    da = dirs @ mu_a
    db = dirs @ mu_b
    return float(mu_a @ mu_b) - da * db


def _check_direction(direction):
    d = np.asarray(direction, dtype=float)
    if d.shape != (3,):
        raise ValueError("direction must be a 3-vector")
    n = np.linalg.norm(d)
    if abs(n - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    return d


def emission_rate_dissimilar(cfg: AtomPairConfig, t, direction,
                             settings: QuadratureSettings | None = None) -> float:
    """Directional one-photon emission density dGamma_dir/dTheta along `direction`.

    Piecewise across the two hemispheres defined by the interatomic axis; at
    cos(theta) = 0 the value is the average of the two branches.
    """
    d = _check_direction(direction)
    g = _prep(cfg, t, settings)
    content = _emission_content_dissimilar(g)
    c = float(d @ cfg.r_hat)
    if abs(c) < 1e-15:
        c = 0.0
    p = _polarization(cfg.atom_a.dipole, cfg.atom_b.dipole, d[None])[0]
    return float(p * content(np.asarray(c)) / (2.0 * np.pi**2))


def _axis_frame(r_hat):
    """Orthonormal triad with third column along r_hat."""
    idx = int(np.argmin(np.abs(r_hat)))
    e1 = np.zeros(3)
    e1[idx] = 1.0
    e1 = e1 - (e1 @ r_hat) * r_hat
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(r_hat, e1)
    return np.column_stack([e1, e2, r_hat])


def _momentum_rate(r_hat, mu_a, mu_b, content, k_photon, settings):
    frame = _axis_frame(r_hat)

    def f(dirs_frame):
        dirs_lab = dirs_frame @ frame.T
        p = _polarization(mu_a, mu_b, dirs_lab)
        return p * content(dirs_frame[..., 2]) / (2.0 * np.pi**2)

    res = integrate_solid_angle(f, settings or QuadratureSettings())
    return k_photon * (frame @ res.value), k_photon * np.abs(frame) @ res.error_estimate


def momentum_rate_dissimilar(cfg: AtomPairConfig, t,
                             settings: QuadratureSettings | None = None) -> np.ndarray:
    """Rate of change of the transverse photon momentum, hbar k_A times the
    first angular moment of the directional emission density."""
    g = _prep(cfg, t, settings)
    if abs(g.delta) > 0.1 * g.wa:
        warnings.warn(
            "momentum-rate closed form assumes |Delta_AB| << omega_A",
            ValidityWarning,
            stacklevel=2,
        )
    content = _emission_content_dissimilar(g)
    value, _ = _momentum_rate(cfg.r_hat, cfg.atom_a.dipole, cfg.atom_b.dipole,
                              content, g.wa, settings)
    return value
