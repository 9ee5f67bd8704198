"""Numerics for two-dimensional Coulomb gases confined by a hard wall inside their droplet."""

__version__ = "0.1.0"

from .errors import DomainError, QuadratureError, RegimeError, UnboundedDropletError
from .potential import HardWallEnsemble, RadialPotential, ginibre, laplacian, monomial, power, q_n_eval, v_tau
from .equilibrium import EquilibriumData, droplet_radii, equilibrium_measure, rho_tau
from .quadrature import LogIntegralResult, integrate_log_singular
from .special import erfc_eval, lower_inc_gamma, phi_alpha, upper_inc_gamma
from .norms import NormTable, compute_norms, norm_asymptotic_crit, norm_asymptotic_high
from .kernel import KernelContext, build_context, correlations, kernel_eval, kernel_high_part, rescaled_kernel
from .limits import (
    LaplaceKernelSpec,
    WardReport,
    canonical_spec,
    cauchy_transform,
    ginibre_kernel,
    k_alpha,
    k_f,
    kernel_free,
    kernel_hard,
    mass_one_residual,
    plasma_F,
    plasma_H,
    ward_residual,
)
from .extremes import MaxModulusLaw, a_n_const, i_n, max_modulus_cdf, tail_mass, weibull_cdf
from .tables import CdfTable
from .sampler import SampleBatch, build_radial_cdfs, empirical_max_modulus, sample_batch, sample_configuration
