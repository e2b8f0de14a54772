"""Geometric particle methods for fluid-like flows.

Particles carry momenta (and optionally first-order jet data); a kernel
or spectral interpolation turns particle data into a global velocity
field, and the induced kinetic metric drives Hamiltonian dynamics with
exactly conserved momentum maps.
"""

from .errors import (JetflowError, KernelRegularityError,
                     GramConditioningError, CollisionError,
                     NonConvergenceError, ConfigError)
from .kernels import (RadialKernel, GAUSSIAN, EXPONENTIAL,
                      kernel_eval, kernel_d1, kernel_d2, kernel_d3)
from .states import ParticleState, JetParticleState, jet_state_from_mu
from .interpolation import (gram_k0, solve_k0, eval_field_k0, eval_grad_k0,
                            gram_k1, solve_k1, eval_field_k1, eval_grad_k1,
                            eval_hessian_k1, KernelFieldK0, KernelFieldK1)
from .dynamics import (hamiltonian_k0, eom_k0, hamiltonian_k1, eom_k1,
                       mu_rate, curvature_value, constraint_force_monitor,
                       LandmarkSystem, JetSystem)
from .integrators import (IntegratorConfig, Trajectory, integrate,
                          step_rk4, step_implicit_midpoint,
                          RK4, IMPLICIT_MIDPOINT)
from .diagnostics import (noether_linear, noether_angular, noether_jet,
                          circulation, DiagnosticsRecord, record)
from .vortex import (VortexState, VortexSystem, blob_velocity, blob_eom,
                     blob_invariants, blob_hamiltonian, jet_state_for_blobs,
                     compare_with_jets, BlobJetReport)
from .spectral import (SpectralBasis, SpectralField, SpectralSystem,
                       solve_spectral)
from .scenarios import Scenario, load_scenario, preset, PRESETS

__all__ = [
    "JetflowError", "KernelRegularityError", "GramConditioningError",
    "CollisionError", "NonConvergenceError", "ConfigError",
    "RadialKernel", "GAUSSIAN", "EXPONENTIAL",
    "kernel_eval", "kernel_d1", "kernel_d2", "kernel_d3",
    "ParticleState", "JetParticleState", "jet_state_from_mu",
    "gram_k0", "solve_k0", "eval_field_k0", "eval_grad_k0",
    "gram_k1", "solve_k1", "eval_field_k1", "eval_grad_k1",
    "eval_hessian_k1", "KernelFieldK0", "KernelFieldK1",
    "hamiltonian_k0", "eom_k0", "hamiltonian_k1", "eom_k1", "mu_rate",
    "curvature_value", "constraint_force_monitor",
    "LandmarkSystem", "JetSystem",
    "IntegratorConfig", "Trajectory", "integrate",
    "step_rk4", "step_implicit_midpoint", "RK4", "IMPLICIT_MIDPOINT",
    "noether_linear", "noether_angular", "noether_jet", "circulation",
    "DiagnosticsRecord", "record",
    "VortexState", "VortexSystem", "blob_velocity", "blob_eom",
    "blob_invariants", "blob_hamiltonian", "jet_state_for_blobs",
    "compare_with_jets", "BlobJetReport",
    "SpectralBasis", "SpectralField", "SpectralSystem", "solve_spectral",
    "Scenario", "load_scenario", "preset", "PRESETS",
]

__version__ = "0.1.0"
