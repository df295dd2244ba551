"""Time-dependent van der Waals forces, interaction energies and directional
spontaneous emission for a pair of two-level atoms with one atom suddenly
excited, in the dissimilar-atom and identical-atom regimes.

Natural units hbar = c = eps0 = 1 throughout.
"""
from .params import (AtomPairConfig, AtomSpec, EvalPoint, ValidityReport,
                     ValidityWarning, check_validity, gamma_from_dipole,
                     load_config)
from .green import (ContractionBundle, GreenEval, Projectors,
                    contraction_bundle, green_imag_freq, green_real_freq,
                    projectors)
from .quadrature import (QuadratureError, QuadratureResult, QuadratureSettings,
                         integral_off_resonant, integral_semi_resonant,
                         integrate_solid_angle)
from .dissimilar import (EnergyBreakdown, ForceBreakdown, emission_rate_dissimilar,
                         energy_A_dissimilar, energy_B_dissimilar,
                         force_A_dissimilar, force_B_dissimilar,
                         momentum_rate_dissimilar, net_force_dissimilar)
from .identical import (IdenticalConfig, emission_rate_identical,
                        figure_net_force_curve, force_A_identical,
                        force_B_identical, momentum_rate_identical,
                        net_force_identical)
from .verification import CheckReport, run_all

__version__ = "0.1.0"

__all__ = [
    "AtomPairConfig", "AtomSpec", "EvalPoint", "ValidityReport", "ValidityWarning",
    "check_validity", "gamma_from_dipole", "load_config",
    "ContractionBundle", "GreenEval", "Projectors", "contraction_bundle",
    "green_imag_freq", "green_real_freq", "projectors",
    "QuadratureError", "QuadratureResult", "QuadratureSettings",
    "integral_off_resonant", "integral_semi_resonant", "integrate_solid_angle",
    "EnergyBreakdown", "ForceBreakdown", "emission_rate_dissimilar",
    "energy_A_dissimilar", "energy_B_dissimilar", "force_A_dissimilar",
    "force_B_dissimilar", "momentum_rate_dissimilar", "net_force_dissimilar",
    "IdenticalConfig", "emission_rate_identical", "figure_net_force_curve",
    "force_A_identical", "force_B_identical", "momentum_rate_identical",
    "net_force_identical",
    "CheckReport", "run_all",
]
