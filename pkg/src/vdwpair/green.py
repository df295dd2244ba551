"""Free-space electromagnetic dyadic Green tensor and its dipole contractions.

Convention (natural units, c = 1, wavenumber k = omega):

    G(kR) = -(k e^{ikR} / 4 pi) [ alpha/(kR) + i beta/(kR)^2 - beta/(kR)^3 ]

with alpha = I - RR/R^2 and beta = I - 3 RR/R^2.  On the imaginary frequency
axis (k = i q) the tensor is real:

    G(iqR) = -(e^{-qR} / 4 pi R) [ alpha + beta/(qR) + beta/(qR)^2 ]

and is evaluated in this explicitly real form to avoid cancellation at large
qR.  Spatial gradients and frequency derivatives are closed-form analytic;
finite differences appear only in the test suite.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Projectors",
    "GreenEval",
    "ContractionBundle",
    "projectors",
    "green_real_freq",
    "green_imag_freq",
    "contraction_bundle",
]

_MIN_KR = 1e-8


@dataclass(frozen=True)
class Projectors:
    """Transverse (alpha = I - RR/R^2) and near-field (beta = I - 3 RR/R^2) tensors."""

    alpha: np.ndarray
    beta: np.ndarray


def projectors(separation) -> Projectors:
    r = np.asarray(separation, dtype=float)
    d = np.linalg.norm(r)
    if d == 0.0:
        raise ValueError("coincident atoms: projectors undefined at zero separation")
    rr = np.outer(r, r) / d**2
    eye = np.eye(3)
    return Projectors(alpha=eye - rr, beta=eye - 3.0 * rr)


@dataclass(frozen=True)
class GreenEval:
    """Tensor value, spatial gradient grad[i,j,l] = d G_ij / d R_l, and d/d omega."""

    value: np.ndarray
    grad: np.ndarray
    omega_deriv: np.ndarray


def _radial_funcs(x):
    """P, Q and derivatives for G = -(k/4pi)(alpha P + beta Q), x = kR."""
    e = np.exp(1j * x)
    P = e / x
    Q = e * (1j / x**2 - 1.0 / x**3)
    Pp = e * (1j / x - 1.0 / x**2)
    Qp = e * (-1.0 / x**2 - 3j / x**3 + 3.0 / x**4)
    Ppp = e * (-1.0 / x - 2j / x**2 + 2.0 / x**3)
    Qpp = e * (-1j / x**2 + 5.0 / x**3 + 12j / x**4 - 12.0 / x**5)
    return P, Q, Pp, Qp, Ppp, Qpp


def _tensor_structure_grad(r_hat):
    """W[i,j,l] = d_l(RhatRhat)_ij * R = delta_il rj + delta_jl ri - 2 ri rj rl."""
    eye = np.eye(3)
    return (np.einsum("il,j->ijl", eye, r_hat)
            + np.einsum("jl,i->ijl", eye, r_hat)
            - 2.0 * np.einsum("i,j,l->ijl", r_hat, r_hat, r_hat))


def green_real_freq(k, separation) -> GreenEval:
    """Green tensor at real wavenumber k > 0 (complex k accepted for cross-checks)."""
    r = np.asarray(separation, dtype=float)
    d = np.linalg.norm(r)
    if d == 0.0:
        raise ValueError("coincident atoms")
    if np.imag(k) == 0:
        k = float(np.real(k))
        if k <= 0:
            raise ValueError("wavenumber must be positive")
        if k * d < _MIN_KR:
            raise ValueError("near-field evaluation underflow: kR below 1e-8")
    r_hat = r / d
    proj = projectors(r)
    x = k * d
    P, Q, Pp, Qp, _, _ = _radial_funcs(x)
    pref = -k / (4.0 * np.pi)
    value = pref * (proj.alpha * P + proj.beta * Q)
    w = _tensor_structure_grad(r_hat)
    grad = pref * (np.einsum("ij,l->ijl", proj.alpha * Pp + proj.beta * Qp, k * r_hat)
                   - (P + 3.0 * Q) / d * w)
    omega_deriv = (-1.0 / (4.0 * np.pi)) * (proj.alpha * P + proj.beta * Q) \
        + pref * d * (proj.alpha * Pp + proj.beta * Qp)
    return GreenEval(value=value, grad=grad, omega_deriv=omega_deriv)


def green_imag_freq(q, separation) -> GreenEval:
    """Green tensor at imaginary frequency, real-valued; omega_deriv holds d/dq."""
    r = np.asarray(separation, dtype=float)
    d = np.linalg.norm(r)
    if d == 0.0:
        raise ValueError("coincident atoms")
    q = float(q)
    if q < 0:
        raise ValueError("imaginary wavenumber magnitude must be non-negative")
    r_hat = r / d
    proj = projectors(r)
    y = q * d
    e = np.exp(-y)
    f_a = e / d
    f_b = e * (1.0 / (q * d**2) + 1.0 / (q**2 * d**3))
    f_ap = -e * (y + 1.0) / d**2
    f_bp = -e * (1.0 / d**2 + 3.0 / (q * d**3) + 3.0 / (q**2 * d**4))
    dq_f_a = -e
    dq_f_b = -e * (1.0 / (q * d) + 2.0 / (q**2 * d**2) + 2.0 / (q**3 * d**3))
    pref = -1.0 / (4.0 * np.pi)
    value = pref * (proj.alpha * f_a + proj.beta * f_b)
    w = _tensor_structure_grad(r_hat)
    grad = pref * (np.einsum("ij,l->ijl", proj.alpha * f_ap + proj.beta * f_bp, r_hat)
                   - (f_a + 3.0 * f_b) / d * w)
    omega_deriv = pref * (proj.alpha * dq_f_a + proj.beta * dq_f_b)
    return GreenEval(value=value, grad=grad, omega_deriv=omega_deriv)


def _orientation_scalars(mu_a, mu_b, separation):
    """alpha/beta contractions a, b and the transverse structure vector v."""
    mu_a = np.asarray(mu_a, dtype=float)
    mu_b = np.asarray(mu_b, dtype=float)
    r = np.asarray(separation, dtype=float)
    d = np.linalg.norm(r)
    if d == 0.0:
        raise ValueError("coincident atoms")
    r_hat = r / d
    u = float(mu_a @ mu_b)
    az = float(mu_a @ r_hat)
    bz = float(mu_b @ r_hat)
    a = u - az * bz
    b = u - 3.0 * az * bz
    v = az * mu_b + bz * mu_a - 2.0 * az * bz * r_hat
    return a, b, v, r_hat, d


@dataclass(frozen=True)
class ContractionBundle:
    """mu_A . G . mu_B split into real/imaginary parts with all derivatives.

    grad_* are gradients with respect to the separation vector R; domega_* are
    d/d omega at fixed R with k = omega.
    """

    re: float
    im: float
    grad_re: np.ndarray
    grad_im: np.ndarray
    domega_re: float
    domega_im: float
    domega_grad_re: np.ndarray
    domega_grad_im: np.ndarray


def contraction_bundle(mu_a, mu_b, k, separation) -> ContractionBundle:
    a, b, v, r_hat, d = _orientation_scalars(mu_a, mu_b, separation)
    k = float(k)
    if k <= 0:
        raise ValueError("wavenumber must be positive")
    x = k * d
    if x < _MIN_KR:
        raise ValueError("near-field evaluation underflow: kR below 1e-8")
    P, Q, Pp, Qp, Ppp, Qpp = _radial_funcs(x)
    pref = -k / (4.0 * np.pi)
    val = pref * (a * P + b * Q)
    grad = (pref * k * (a * Pp + b * Qp)) * r_hat \
        + (k / (4.0 * np.pi * d)) * (P + 3.0 * Q) * v
    dval = (-1.0 / (4.0 * np.pi)) * (a * P + b * Q) + pref * d * (a * Pp + b * Qp)
    dgrad = (-1.0 / (4.0 * np.pi)) * (
        (2.0 * k * (a * Pp + b * Qp) + k * x * (a * Ppp + b * Qpp)) * r_hat
        - (k * (Pp + 3.0 * Qp) + (P + 3.0 * Q) / d) * v)
    return ContractionBundle(
        re=float(val.real),
        im=float(val.imag),
        grad_re=grad.real.copy(),
        grad_im=grad.imag.copy(),
        domega_re=float(dval.real),
        domega_im=float(dval.imag),
        domega_grad_re=dgrad.real.copy(),
        domega_grad_im=dgrad.imag.copy(),
    )


def imag_axis_contraction_scaled(q, mu_a, mu_b, separation):
    """(q^2 mu_A.G(iqR).mu_B, q^2 grad[mu_B.G(iqR).mu_A]) with the 1/q^2
    cancellation done algebraically, stable down to q = 0."""
    a, b, v, r_hat, d = _orientation_scalars(mu_a, mu_b, separation)
    y = q * d
    e = np.exp(-y)
    # q^2 (a F_alpha + b F_beta) = e^{-y} (a q^2/R + b (q/R^2 + 1/R^3))
    val = -(e / (4.0 * np.pi)) * (a * q * q / d + b * (q / d**2 + 1.0 / d**3))
    # q^2 F_alpha' and q^2 F_beta'
    f_ap = -e * (q * q) * (y + 1.0) / d**2
    f_bp = -e * (q * q / d**2 + 3.0 * q / d**3 + 3.0 / d**4)
    f_a = e * q * q / d
    f_b = e * (q / d**2 + 1.0 / d**3)
    grad = -(1.0 / (4.0 * np.pi)) * ((a * f_ap + b * f_bp) * r_hat - (f_a + 3.0 * f_b) / d * v)
    return val, grad
