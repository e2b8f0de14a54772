"""Reduced Hamiltonians and equations of motion on particle phase space.

The interpolated field defines a kinetic-energy metric on configuration
space; its cotangent lift gives a canonical Hamiltonian system.  Order 0:

    H(x, p) = 1/2 sum_ij phi(s_ij) p_i . p_j
    xdot_i  = sum_j phi(s_ij) p_j
    pdot_i  = -sum_j 2 phi'(s_ij) (x_i - x_j) (p_i . p_j)

Order 1 uses the block Gram quadratic form in (p, mu) with mu = P D^T and
canonical coordinates (x, D, p, P):

    xdot = u(x_i),  Ddot_i = nu_i D_i,  Pdot_i = -nu_i^T P_i,
    pdot_i = -dH/dx_i,     nu_i = Du(x_i).

The module also provides the curvature two-form diagnostic and the
constraint-force monitor ||(u . grad) u||.
"""

from __future__ import annotations

import numpy as np

from . import interpolation as interp
from .errors import KernelRegularityError
from .kernels import (RadialKernel, kernel_eval, kernel_d1, kernel_d2,
                      kernel_d3)
from .states import ParticleState, JetParticleState, _pairwise_sq_dists


# ---------------------------------------------------------------------------
# Order 0
# ---------------------------------------------------------------------------

def hamiltonian_k0(kernel: RadialKernel, state: ParticleState) -> float:
    """Kinetic energy 1/2 p^T K(x) p of the interpolated field."""
    k = interp.gram_k0(kernel, state.positions)
    return 0.5 * float(np.einsum("ia,ij,ja->", state.momenta, k,
                                 state.momenta))


def eom_k0(kernel: RadialKernel, state: ParticleState):
    """Canonical equations (xdot, pdot) for the landmark system."""
    x, p = state.positions, state.momenta
    s = _pairwise_sq_dists(x)
    if not kernel.is_smooth and x.shape[0] > 1:
        off = s.copy()
        np.fill_diagonal(off, np.inf)
        if np.any(off == 0):
            raise KernelRegularityError(
                "exponential kernel forces undefined at coincident particles")
    xdot = kernel_eval(kernel, s) @ p
    if kernel.is_smooth:
        d1 = kernel_d1(kernel, s)
    else:
        # off-diagonal derivatives only; the diagonal never contributes
        d1 = np.zeros_like(s)
        mask = ~np.eye(len(x), dtype=bool)
        d1[mask] = kernel_d1(kernel, s[mask])
    pp = p @ p.T
    diff = x[:, None, :] - x[None, :, :]
    pdot = -2.0 * np.einsum("ij,ij,ijd->id", d1, pp, diff)
    return xdot, pdot


# ---------------------------------------------------------------------------
# Order 1
# ---------------------------------------------------------------------------

def hamiltonian_k1(kernel: RadialKernel, state: JetParticleState) -> float:
    """Quadratic form 1/2 z^T G(x) z of the jet block Gram."""
    n, d = state.count, state.dim
    g = interp.gram_k1(kernel, state.positions)
    mu = state.mu
    z = np.empty((n * (1 + d), d))
    z[:n] = state.momenta
    z[n:] = np.transpose(mu, (0, 2, 1)).reshape(n * d, d)
    return 0.5 * float(np.einsum("ra,rq,qa->", z, g, z))


def _jet_field_data(kernel, x, p, mu):
    """Velocities and gradients of the jet field at the particles."""
    u = interp.eval_field_k1(kernel, x, p, mu, x)
    nu = interp.eval_grad_k1(kernel, x, p, mu, x)
    return u, nu


def _grad_h_positions_k1(kernel, x, p, mu):
    """Analytic dH/dx_k for the order-1 Hamiltonian.

    dH/dx_k^e = sum_a p_k^a d_e u_{-k}^a(x_k)
              + sum_{a,c} mu_k^{ac} d_e d_c u_{-k}^a(x_k),

    where u_{-k} omits particle k's own contribution (the self block of
    the Gram matrix is constant in x_k).
    """
    n, d = x.shape
    grad = interp.eval_grad_k1(kernel, x, p, mu, x)       # (N, a, b)
    hess = interp.eval_hessian_k1(kernel, x, p, mu, x)    # (N, a, b, c)
    # remove self contributions (only constant-in-x_k terms survive at r=0)
    p1_0 = float(kernel_d1(kernel, 0.0))
    grad = grad + 2.0 * p1_0 * mu                          # minus (-2 phi'(0) mu)
    hess = hess - 2.0 * p1_0 * np.einsum("ia,bc->iabc", p, np.eye(d))
    # hess index [i, a, b, c] = d_b d_c u^a; pair e with the first derivative
    return (np.einsum("ia,iae->ie", p, grad)
            + np.einsum("iac,iaec->ie", mu, hess))


def eom_k1(kernel: RadialKernel, state: JetParticleState):
    """Canonical equations (xdot, Ddot, pdot, Pdot) for the jet system."""
    x, D, p, P = (state.positions, state.frames, state.momenta,
                  state.frame_momenta)
    mu = state.mu
    u, nu = _jet_field_data(kernel, x, p, mu)
    xdot = u
    ddot = np.einsum("iab,ibc->iac", nu, D)
    pdot = -_grad_h_positions_k1(kernel, x, p, mu)
    pdot_frame = -np.einsum("iba,ibc->iac", nu, P)        # -nu^T P
    return xdot, ddot, pdot, pdot_frame


def mu_rate(nu, mu):
    """Time derivative of mu = P D^T implied by the canonical equations:
    mudot = mu nu^T - nu^T mu."""
    return (np.einsum("iab,icb->iac", mu, nu)
            - np.einsum("iba,ibc->iac", nu, mu))


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------

def curvature_value(kernel: RadialKernel, positions, xdot, xdelta, query,
                    step: float = 1e-5):
    """Curvature two-form of the order-0 interpolation, evaluated at a point.

    Returns dI(xdot, xdelta)(m) + [I(xdot), I(xdelta)](m), where the
    Jacobi-Lie bracket uses analytic gradients and the exterior-derivative
    term differentiates the base-dependent solve by central differences
    along the two lifted base motions.  Values lie in the fields vanishing
    at the particles.
    """
    if not kernel.is_smooth:
        raise KernelRegularityError("curvature diagnostic requires the "
                                    "Gaussian family")
    x = np.asarray(positions, dtype=float)
    xdot = np.asarray(xdot, dtype=float)
    xdelta = np.asarray(xdelta, dtype=float)
    query = np.asarray(query, dtype=float)

    def field(base, data):
        return interp.KernelFieldK0.from_velocities(kernel, base, data)

    u_dot = field(x, xdot)
    u_delta = field(x, xdelta)
    bracket = (u_delta.grad(query) @ u_dot(query)
               - u_dot.grad(query) @ u_delta(query))

    def base_derivative(direction, data):
        plus = field(x + step * direction, data)(query)
        minus = field(x - step * direction, data)(query)
        return (plus - minus) / (2.0 * step)

    d_i = base_derivative(xdot, xdelta) - base_derivative(xdelta, xdot)
    return d_i + bracket


def constraint_force_monitor(field, sample_points) -> float:
    """max_m ||(u . grad) u (m)|| over the sample points.

    `field` is any velocity-field view exposing __call__ and grad
    (order 0, order 1, or spectral).  This is the force required to hold
    the exact fluid inside the interpolated subspace; it serves as an
    a-posteriori error indicator and stopping criterion.
    """
    points = np.atleast_2d(np.asarray(sample_points, dtype=float))
    worst = 0.0
    for m in points:
        adv = field.grad(m) @ field(m)
        worst = max(worst, float(np.linalg.norm(adv)))
    return worst


# ---------------------------------------------------------------------------
# Integrable system wrappers (flat phase vectors for the integrators)
# ---------------------------------------------------------------------------

class LandmarkSystem:
    """Order-0 system: phase vector [x, p]."""

    order = 0

    def __init__(self, kernel: RadialKernel):
        self.kernel = kernel

    def pack(self, state: ParticleState):
        self._shape = state.positions.shape
        return np.concatenate([state.positions.ravel(),
                               state.momenta.ravel()])

    def unpack(self, z) -> ParticleState:
        n, d = self._shape
        return ParticleState(z[:n * d].reshape(n, d),
                             z[n * d:].reshape(n, d))

    def rhs(self, z):
        n, d = self._shape
        x = z[:n * d].reshape(n, d)
        p = z[n * d:].reshape(n, d)
        state = ParticleState.__new__(ParticleState)
        state.positions, state.momenta = x, p
        xdot, pdot = eom_k0(self.kernel, state)
        return np.concatenate([xdot.ravel(), pdot.ravel()])

    def positions_of(self, z):
        n, d = self._shape
        return z[:n * d].reshape(n, d)

    def energy(self, state: ParticleState) -> float:
        return hamiltonian_k0(self.kernel, state)

    def field(self, state: ParticleState):
        return interp.KernelFieldK0(self.kernel, state.positions,
                                    state.momenta)


class JetSystem:
    """Order-1 system: phase vector [x, D, p, P]."""

    order = 1

    def __init__(self, kernel: RadialKernel, incompressible: bool = False):
        if not kernel.is_smooth:
            raise KernelRegularityError("jet dynamics require the Gaussian "
                                        "family")
        self.kernel = kernel
        self.incompressible = incompressible

    def pack(self, state: JetParticleState):
        self._shape = state.positions.shape
        return np.concatenate([state.positions.ravel(), state.frames.ravel(),
                               state.momenta.ravel(),
                               state.frame_momenta.ravel()])

    def _split(self, z):
        n, d = self._shape
        nd, ndd = n * d, n * d * d
        x = z[:nd].reshape(n, d)
        frames = z[nd:nd + ndd].reshape(n, d, d)
        p = z[nd + ndd:2 * nd + ndd].reshape(n, d)
        big_p = z[2 * nd + ndd:].reshape(n, d, d)
        return x, frames, p, big_p

    def unpack(self, z) -> JetParticleState:
        x, frames, p, big_p = self._split(z)
        return JetParticleState(x, frames, p, big_p,
                                incompressible=self.incompressible)

    def rhs(self, z):
        x, frames, p, big_p = self._split(z)
        state = JetParticleState.__new__(JetParticleState)
        state.positions, state.frames = x, frames
        state.momenta, state.frame_momenta = p, big_p
        state.incompressible = self.incompressible
        xdot, ddot, pdot, pdot_frame = eom_k1(self.kernel, state)
        return np.concatenate([xdot.ravel(), ddot.ravel(), pdot.ravel(),
                               pdot_frame.ravel()])

    def positions_of(self, z):
        return self._split(z)[0]

    def energy(self, state: JetParticleState) -> float:
        return hamiltonian_k1(self.kernel, state)

    def field(self, state: JetParticleState):
        return interp.KernelFieldK1(self.kernel, state.positions,
                                    state.momenta, state.mu)
