"""Physical parameters, unit conventions and validity diagnostics.

Natural units hbar = c = eps0 = 1 throughout: wavenumbers equal angular
frequencies, distances enter as k*R and times as Gamma*T.  Atom A is the one
prepared in its excited state at T = 0.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "AtomSpec",
    "AtomPairConfig",
    "EvalPoint",
    "ValidityReport",
    "ValidityWarning",
    "check_validity",
    "gamma_from_dipole",
    "load_config",
]


class ValidityWarning(UserWarning):
    """A physical validity condition is violated; evaluation proceeds anyway."""


def _vec3(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite vector component")
    return v


@dataclass(frozen=True)
class AtomSpec:
    """Two-level atom: transition frequency, natural linewidth, real dipole vector."""

    omega: float
    gamma: float
    dipole: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dipole", _vec3(self.dipole))
        if not (np.isfinite(self.omega) and self.omega > 0):
            raise ValueError("omega must be positive and finite")
        if not (np.isfinite(self.gamma) and self.gamma >= 0):
            raise ValueError("gamma must be non-negative and finite")
        if self.gamma > 0.1 * self.omega:
            warnings.warn(
                f"gamma = {self.gamma:g} is not small against omega = {self.omega:g}; "
                "the Weisskopf-Wigner treatment assumes gamma << omega",
                ValidityWarning,
                stacklevel=2,
            )
        ww = gamma_from_dipole(self.omega, self.dipole)
        if ww > 0 and self.gamma > 0 and not (0.1 <= self.gamma / ww <= 10.0):
            warnings.warn(
                f"gamma = {self.gamma:g} deviates by more than 10x from the "
                f"Weisskopf-Wigner value {ww:g} for this dipole",
                ValidityWarning,
                stacklevel=2,
            )


@dataclass(frozen=True)
class AtomPairConfig:
    """Atom pair with separation vector pointing from atom A (excited) to atom B."""

    atom_a: AtomSpec
    atom_b: AtomSpec
    separation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "separation", _vec3(self.separation))
        if np.linalg.norm(self.separation) == 0.0:
            raise ValueError("coincident atoms: |separation| must be positive")

    @property
    def detuning(self) -> float:
        """Delta_AB = omega_A - omega_B."""
        return self.atom_a.omega - self.atom_b.omega

    @property
    def k_a(self) -> float:
        return self.atom_a.omega

    @property
    def k_b(self) -> float:
        return self.atom_b.omega

    @property
    def distance(self) -> float:
        return float(np.linalg.norm(self.separation))

    @property
    def r_hat(self) -> np.ndarray:
        return self.separation / self.distance


@dataclass(frozen=True)
class EvalPoint:
    """Observation time after the sudden excitation."""

    t: float

    def __post_init__(self):
        if not (np.isfinite(self.t) and self.t > 0):
            raise ValueError("observation time must be positive and finite")


@dataclass
class ValidityReport:
    """Diagnostic flags with margins; never blocks evaluation."""

    causal: bool
    weak_interaction: bool
    perturbative: bool
    regime: str
    margins: dict = field(default_factory=dict)

    def all_ok(self) -> bool:
        return self.causal and self.weak_interaction and self.perturbative


def gamma_from_dipole(omega: float, dipole) -> float:
    """Weisskopf-Wigner linewidth omega^3 |mu|^2 / (3 pi) in natural units."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    mu2 = float(np.dot(dipole, dipole))
    return omega**3 * mu2 / (3.0 * np.pi)


def check_validity(cfg: AtomPairConfig, t: EvalPoint, regime: str = "dissimilar") -> ValidityReport:
    """Causality, weak-interaction and perturbative diagnostics at time t.

    weak_interaction:  k0^2 |mu_A . Re G(k0 R) . mu_B| <= 1/T
    perturbative:      24 pi |Tr Re G(k0 R)| <= k0 / (Gamma0 T)
    causal:            T > R

    Margins are the ratios LHS/RHS; a margin above 1 marks a violation.  The
    magnitude of the oscillating trace is used so the bound is meaningful on
    both sides of its sign flips.
    """
    if regime not in ("dissimilar", "identical-limit"):
        raise ValueError(f"unknown regime {regime!r}")
    from .green import green_real_freq

    k0 = cfg.k_a
    gamma0 = cfg.atom_a.gamma
    r = cfg.distance
    tt = t.t
    g = green_real_freq(k0, cfg.separation)
    re_g = g.value.real
    contraction = float(cfg.atom_a.dipole @ re_g @ cfg.atom_b.dipole)

    causal = tt > r
    m_weak = k0**2 * abs(contraction) * tt
    weak = m_weak <= 1.0

    trace = abs(np.trace(re_g))
    if gamma0 > 0:
        m_pert = 24.0 * np.pi * trace * gamma0 * tt / k0
    else:
        m_pert = 0.0
    pert = m_pert <= 1.0

    report = ValidityReport(
        causal=causal,
        weak_interaction=weak,
        perturbative=pert,
        regime=regime,
        margins={
            "causal": r / tt,
            "weak_interaction": m_weak,
            "perturbative": m_pert,
        },
    )
    if not causal:
        warnings.warn(
            f"T = {tt:g} does not exceed R = {r:g}; outside the causal region",
            ValidityWarning,
            stacklevel=2,
        )
    return report


_CONFIG_KEYS = ("omega_a", "omega_b", "gamma_a", "gamma_b", "dipole_a", "dipole_b", "separation")


def load_config(source) -> AtomPairConfig:
    """Build an AtomPairConfig from a JSON file path or a mapping.

    Keys: omega_a, omega_b, gamma_a, gamma_b, dipole_a, dipole_b, separation.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    else:
        data = dict(source)
    missing = [k for k in _CONFIG_KEYS if k not in data]
    if missing:
        raise ValueError(f"config missing keys: {', '.join(missing)}")
    atom_a = AtomSpec(float(data["omega_a"]), float(data["gamma_a"]), data["dipole_a"])
    atom_b = AtomSpec(float(data["omega_b"]), float(data["gamma_b"]), data["dipole_b"])
    return AtomPairConfig(atom_a=atom_a, atom_b=atom_b, separation=data["separation"])
