"""Adaptive integration for the semi-infinite imaginary-frequency integrals and
the hemisphere-split solid-angle moments.

The q-integrands decay like e^{-qR} (semi-resonant) or e^{-2qR} (off-resonant),
so the semi-infinite range is truncated where the envelope falls below the
absolute floor and the finite interval handed to adaptive Gauss-Kronrod
(QUADPACK).  Small q is safe because the integrands are assembled from the
algebraically cancelled q^2 G(iqR) forms.

Solid-angle moments use a Gauss-Legendre x uniform-azimuth product rule with
the polar range split at cos(theta) = 0, so integrands that are smooth on each
hemisphere (but may jump across the equator) are integrated at spectral
accuracy.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate

from .green import imag_axis_contraction_scaled

__all__ = [
    "QuadratureSettings",
    "QuadratureResult",
    "QuadratureError",
    "integral_semi_resonant",
    "integral_off_resonant",
    "integrate_solid_angle",
]


class QuadratureError(RuntimeError):
    """Tolerance not reached; carries the best estimate."""

    def __init__(self, message, estimate, error_estimate):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 60
    angular_nodes: tuple = (128, 64)

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.angular_nodes[0] < 8 or self.angular_nodes[1] < 8:
            raise ValueError("angular node counts must be at least 8")


@dataclass(frozen=True)
class QuadratureResult:
    value: object
    error_estimate: object
    evaluations: int


def _q_cutoff(k_a, k_b, r, abs_tol, decay):
    """Truncation point where the e^{-decay q R} envelope is below abs_tol."""
    q_peak = max(k_a, k_b, 1.0 / r)
    return q_peak + (-np.log(abs_tol) + 12.0) / (decay * r)


def _quad(f, lo, hi, settings):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err, info = integrate.quad(
                f, lo, hi,
                epsabs=settings.abs_tol,
                epsrel=settings.rel_tol,
                limit=settings.max_subdivisions,
                full_output=True,
            )[:3]
        except integrate.IntegrationWarning as exc:
            val, err, info = integrate.quad(
                f, lo, hi,
                epsabs=settings.abs_tol,
                epsrel=settings.rel_tol,
                limit=settings.max_subdivisions,
                full_output=True,
            )[:3]
            raise QuadratureError(str(exc), val, err) from exc
    return val, err, info["neval"]


def integral_semi_resonant(k_a, k_b, mu_a, mu_b, separation,
                           settings: QuadratureSettings = QuadratureSettings()) -> QuadratureResult:
    """int_0^inf dq/pi (q^2 - k_A k_B) q^2 mu_A.G(iqR).mu_B / ((q^2+k_A^2)(q^2+k_B^2))."""
    if k_a <= 0 or k_b <= 0:
        raise ValueError("wavenumbers must be positive")
    r = float(np.linalg.norm(np.asarray(separation, dtype=float)))

    def f(q):
        val, _ = imag_axis_contraction_scaled(q, mu_a, mu_b, separation)
        return (q * q - k_a * k_b) * val / ((q * q + k_a * k_a) * (q * q + k_b * k_b))

    hi = _q_cutoff(k_a, k_b, r, settings.abs_tol, decay=1.0)
    val, err, n = _quad(f, 0.0, hi, settings)
    return QuadratureResult(value=val / np.pi, error_estimate=err / np.pi, evaluations=n)


def integral_off_resonant(k_a, k_b, mu_a, mu_b, separation,
                          settings: QuadratureSettings = QuadratureSettings()) -> QuadratureResult:
    """int_0^inf dq/pi q^4 [mu_A.G(iqR).mu_B] grad[mu_B.G(iqR).mu_A] / ((q^2+k_A^2)(q^2+k_B^2))."""
    if k_a <= 0 or k_b <= 0:
        raise ValueError("wavenumbers must be positive")
    r = float(np.linalg.norm(np.asarray(separation, dtype=float)))
    hi = _q_cutoff(k_a, k_b, r, settings.abs_tol, decay=2.0)

    vals = np.zeros(3)
    errs = np.zeros(3)
    total_n = 0
    for i in range(3):
        def f(q, i=i):
            val, grad = imag_axis_contraction_scaled(q, mu_a, mu_b, separation)
            return val * grad[i] / ((q * q + k_a * k_a) * (q * q + k_b * k_b))

        vals[i], errs[i], n = _quad(f, 0.0, hi, settings)
        total_n += n
    return QuadratureResult(value=vals / np.pi, error_estimate=errs / np.pi,
                            evaluations=total_n)


def _angular_grid(n_theta, n_phi):
    """Directions and weights for the hemisphere-split product rule."""
    n_half = max(n_theta // 2, 4)
    nodes, weights = leggauss(n_half)
    # map [-1,1] -> [0,1] and [-1,0]; equator is a panel endpoint on both
    c_up = 0.5 * (nodes + 1.0)
    c_dn = 0.5 * (nodes - 1.0)
    c = np.concatenate([c_dn, c_up])
    w_c = np.concatenate([0.5 * weights, 0.5 * weights])
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    w_phi = 2.0 * np.pi / n_phi
    s = np.sqrt(np.clip(1.0 - c * c, 0.0, None))
    dirs = np.empty((c.size, n_phi, 3))
    dirs[..., 0] = s[:, None] * np.cos(phi)[None, :]
    dirs[..., 1] = s[:, None] * np.sin(phi)[None, :]
    dirs[..., 2] = c[:, None]
    return dirs, w_c * w_phi


def _moment_on_grid(f, dirs, w):
    flat = dirs.reshape(-1, 3)
    try:
        vals = np.asarray(f(flat), dtype=float)
        if vals.shape != (flat.shape[0],):
            raise ValueError
    except (TypeError, ValueError):
        vals = np.array([float(f(d)) for d in flat])
    if not np.all(np.isfinite(vals)):
        bad = flat[~np.isfinite(vals)][0]
        raise ValueError(f"non-finite integrand sample at direction {bad}")
    vals = vals.reshape(dirs.shape[:2])
    return np.einsum("cp,cpi,c->i", vals, dirs, w), vals.size


def integrate_solid_angle(f, settings: QuadratureSettings = QuadratureSettings()) -> QuadratureResult:
    """First angular moment int dTheta khat f(khat), with the polar axis along z.

    f may be vectorized over an (n, 3) array of unit vectors or accept a single
    3-vector.  cos(theta) = 0 lies on panel boundaries, so piecewise-smooth
    integrands keep spectral accuracy.
    """
    n_theta, n_phi = settings.angular_nodes
    dirs, w = _angular_grid(n_theta, n_phi)
    moment, n_full = _moment_on_grid(f, dirs, w)
    dirs_h, w_h = _angular_grid(max(n_theta // 2, 8), max(n_phi // 2, 8))
    moment_h, n_half = _moment_on_grid(f, dirs_h, w_h)
    err = np.abs(moment - moment_h)
    return QuadratureResult(value=moment, error_estimate=err,
                            evaluations=n_full + n_half)
