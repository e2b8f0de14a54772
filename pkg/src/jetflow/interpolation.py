"""Kernel interpolation: particle data -> globally defined velocity field.

Order 0: given velocities xdot at the particles, solve the Gram system
K p = xdot (K_ij = phi(||x_i - x_j||^2)) so that the field

    u(m) = sum_j phi(||m - x_j||^2) p_j

matches the prescribed velocities exactly at the particles.

Order 1: the field carries derivative sources as well,

    u^a(m) = sum_j [ phi(s_j) p_j^a - 2 phi'(s_j) mu_j^{ab} (m - x_j)_b ],

and a symmetric block Gram system enforces u(x_i) = xdot_i and
Du(x_i) = nu_i simultaneously.  This requires phi', phi'' at zero
separation, hence a Gaussian kernel.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import GramConditioningError, KernelRegularityError
from .kernels import RadialKernel, kernel_eval, kernel_d1, kernel_d2
from .states import _pairwise_sq_dists

COND_LIMIT = 1e12


def _closest_pair(positions):
    s = _pairwise_sq_dists(positions)
    np.fill_diagonal(s, np.inf)
    i, j = np.unravel_index(np.argmin(s), s.shape)
    return int(i), int(j), float(np.sqrt(s[i, j]))


def _solve_spd(matrix, rhs, positions, what):
    """Cholesky solve with a conditioning check.

    Near-coincident particles make the Gram matrix numerically singular;
    that is reported (with the offending pair) instead of regularized.
    """
    cond = np.linalg.cond(matrix)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        i, j, dist = _closest_pair(positions)
        raise GramConditioningError(
            f"{what} Gram matrix is ill-conditioned (cond ~ {cond:.2e}); "
            f"closest particles are {i} and {j} at distance {dist:.3e}")
    try:
        factor = cho_factor(matrix)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - cond caught above
        raise GramConditioningError(f"{what} Gram factorization failed: {exc}")
    return cho_solve(factor, rhs)


def gram_k0(kernel: RadialKernel, positions, jitter: float = 0.0):
    """Order-0 Gram matrix K_ij = phi(s_ij), optionally with diagonal jitter."""
    positions = np.asarray(positions, dtype=float)
    k = kernel_eval(kernel, _pairwise_sq_dists(positions))
    if jitter:
        k = k + jitter * np.eye(len(positions))
    return k


def solve_k0(kernel: RadialKernel, positions, velocities, jitter: float = 0.0):
    """Momenta p with Gram(x) p = velocities, enforcing exact interpolation."""
    positions = np.asarray(positions, dtype=float)
    velocities = np.asarray(velocities, dtype=float)
    k = gram_k0(kernel, positions, jitter)
    return _solve_spd(k, velocities, positions, "order-0")


def eval_field_k0(kernel: RadialKernel, positions, momenta, query):
    """Evaluate u(m) = sum_j phi(||m - x_j||^2) p_j at one or many queries."""
    positions = np.asarray(positions, dtype=float)
    momenta = np.asarray(momenta, dtype=float)
    query = np.asarray(query, dtype=float)
    single = query.ndim == 1
    q = np.atleast_2d(query)
    diff = q[:, None, :] - positions[None, :, :]    # (Q, N, d)
    s = np.einsum("qjd,qjd->qj", diff, diff)
    u = kernel_eval(kernel, s) @ momenta            # (Q, d)
    return u[0] if single else u


def eval_grad_k0(kernel: RadialKernel, positions, momenta, query):
    """Spatial gradient Du(m), entries [a, b] = d u^a / d m^b."""
    positions = np.asarray(positions, dtype=float)
    momenta = np.asarray(momenta, dtype=float)
    query = np.asarray(query, dtype=float)
    single = query.ndim == 1
    q = np.atleast_2d(query)
    diff = q[:, None, :] - positions[None, :, :]
    s = np.einsum("qjd,qjd->qj", diff, diff)
    if kernel.family != "gaussian" and np.any(s == 0):
        raise KernelRegularityError(
            "exponential kernel field is not differentiable at a particle")
    d1 = kernel_d1(kernel, s)
    grad = 2.0 * np.einsum("qj,qjb,ja->qab", d1, diff, momenta)
    return grad[0] if single else grad


# ---------------------------------------------------------------------------
# Order 1 (jet) interpolation
# ---------------------------------------------------------------------------

def _require_smooth(kernel: RadialKernel):
    if not kernel.is_smooth:
        raise KernelRegularityError(
            "insufficient kernel regularity for order-1 interpolation; "
            "use the Gaussian family")


def gram_k1(kernel: RadialKernel, positions, jitter: float = 0.0):
    """Symmetric block Gram of evaluation and first-derivative functionals.

    Row/column layout: N evaluation slots first, then N*d derivative slots
    ((i, c) flattened row-major).  The same scalar matrix serves every
    field component.
    """
    _require_smooth(kernel)
    positions = np.asarray(positions, dtype=float)
    n, d = positions.shape
    diff = positions[:, None, :] - positions[None, :, :]   # r_ij = x_i - x_j
    s = np.einsum("ijd,ijd->ij", diff, diff)
    phi = kernel_eval(kernel, s)
    p1 = kernel_d1(kernel, s)
    p2 = kernel_d2(kernel, s)

    g = np.empty((n * (1 + d), n * (1 + d)))
    g[:n, :n] = phi
    # <delta_i, d_b delta_j> = -2 phi'(s_ij) r_ij,b
    ed = -2.0 * np.einsum("ij,ijb->ijb", p1, diff)
    g[:n, n:] = ed.reshape(n, n * d)
    # <d_c delta_i, delta_j> = 2 phi'(s_ij) r_ij,c
    de = 2.0 * np.einsum("ij,ijc->icj", p1, diff)
    g[n:, :n] = de.reshape(n * d, n)
    # <d_c delta_i, d_b delta_j> = -4 phi'' r_c r_b - 2 phi' delta_cb
    dd = (-4.0 * np.einsum("ij,ijc,ijb->icjb", p2, diff, diff)
          - 2.0 * np.einsum("ij,cb->icjb", p1, np.eye(d)))
    g[n:, n:] = dd.reshape(n * d, n * d)
    if jitter:
        g = g + jitter * np.eye(n * (1 + d))
    return g


def solve_k1(kernel: RadialKernel, positions, velocities, frame_rates,
             jitter: float = 0.0, incompressible: bool = False):
    """Solve the block Gram system for (momenta, mu).

    velocities:  (N, d) prescribed u(x_i)
    frame_rates: (N, d, d) prescribed gradients nu_i = Du(x_i)
    Returns (momenta (N, d), mu (N, d, d)).
    """
    _require_smooth(kernel)
    positions = np.asarray(positions, dtype=float)
    velocities = np.asarray(velocities, dtype=float)
    frame_rates = np.asarray(frame_rates, dtype=float)
    n, d = positions.shape
    if incompressible:
        traces = np.trace(frame_rates, axis1=1, axis2=2)
        if np.any(np.abs(traces) > 1e-9):
            raise ValueError("incompressible flow requires traceless "
                             "frame rates; got trace "
                             f"{np.max(np.abs(traces)):.3e}")
    g = gram_k1(kernel, positions, jitter)
    rhs = np.empty((n * (1 + d), d))
    rhs[:n] = velocities
    # derivative slot (i, c), component a holds nu_i^{ac}
    rhs[n:] = np.transpose(frame_rates, (0, 2, 1)).reshape(n * d, d)
    z = _solve_spd(g, rhs, positions, "order-1")
    momenta = z[:n]
    mu = np.transpose(z[n:].reshape(n, d, d), (0, 2, 1))
    return momenta, mu


def _k1_terms(kernel, positions, momenta, mu, query):
    query = np.asarray(query, dtype=float)
    single = query.ndim == 1
    q = np.atleast_2d(query)
    diff = q[:, None, :] - positions[None, :, :]     # (Q, N, d)
    s = np.einsum("qjd,qjd->qj", diff, diff)
    mur = np.einsum("jab,qjb->qja", mu, diff)        # mu_j (m - x_j)
    return single, q, diff, s, mur


def eval_field_k1(kernel: RadialKernel, positions, momenta, mu, query):
    """Evaluate the order-1 field at one or many query points."""
    _require_smooth(kernel)
    positions = np.asarray(positions, dtype=float)
    momenta = np.asarray(momenta, dtype=float)
    mu = np.asarray(mu, dtype=float)
    single, _, _, s, mur = _k1_terms(kernel, positions, momenta, mu, query)
    phi = kernel_eval(kernel, s)
    p1 = kernel_d1(kernel, s)
    u = phi @ momenta - 2.0 * np.einsum("qj,qja->qa", p1, mur)
    return u[0] if single else u


def eval_grad_k1(kernel: RadialKernel, positions, momenta, mu, query):
    """Gradient of the order-1 field; entries [a, b] = d u^a / d m^b."""
    _require_smooth(kernel)
    positions = np.asarray(positions, dtype=float)
    momenta = np.asarray(momenta, dtype=float)
    mu = np.asarray(mu, dtype=float)
    single, _, diff, s, mur = _k1_terms(kernel, positions, momenta, mu, query)
    p1 = kernel_d1(kernel, s)
    p2 = kernel_d2(kernel, s)
    grad = (2.0 * np.einsum("qj,qjb,ja->qab", p1, diff, momenta)
            - 4.0 * np.einsum("qj,qjb,qja->qab", p2, diff, mur)
            - 2.0 * np.einsum("qj,jab->qab", p1, mu))
    return grad[0] if single else grad


def eval_hessian_k1(kernel: RadialKernel, positions, momenta, mu, query):
    """Second derivatives; entries [a, b, c] = d^2 u^a / d m^b d m^c."""
    from .kernels import kernel_d3
    _require_smooth(kernel)
    positions = np.asarray(positions, dtype=float)
    momenta = np.asarray(momenta, dtype=float)
    mu = np.asarray(mu, dtype=float)
    single, _, diff, s, mur = _k1_terms(kernel, positions, momenta, mu, query)
    p1 = kernel_d1(kernel, s)
    p2 = kernel_d2(kernel, s)
    p3 = kernel_d3(kernel, s)
    eye = np.eye(positions.shape[1])
    hess = (4.0 * np.einsum("qj,qjb,qjc,ja->qabc", p2, diff, diff, momenta)
            + 2.0 * np.einsum("qj,bc,ja->qabc", p1, eye, momenta)
            - 8.0 * np.einsum("qj,qjb,qjc,qja->qabc", p3, diff, diff, mur)
            - 4.0 * np.einsum("qj,bc,qja->qabc", p2, eye, mur)
            - 4.0 * np.einsum("qj,qjc,jab->qabc", p2, diff, mu)
            - 4.0 * np.einsum("qj,qjb,jac->qabc", p2, diff, mu))
    return hess[0] if single else hess


# ---------------------------------------------------------------------------
# Field views
# ---------------------------------------------------------------------------

class KernelFieldK0:
    """Immutable view of a solved order-0 velocity field."""

    backend = "kernel-k0"

    def __init__(self, kernel, positions, momenta):
        self.kernel = kernel
        self.positions = np.array(positions, dtype=float)
        self.momenta = np.array(momenta, dtype=float)

    @classmethod
    def from_velocities(cls, kernel, positions, velocities, jitter=0.0):
        return cls(kernel, positions,
                   solve_k0(kernel, positions, velocities, jitter))

    def __call__(self, query):
        return eval_field_k0(self.kernel, self.positions, self.momenta, query)

    def grad(self, query):
        return eval_grad_k0(self.kernel, self.positions, self.momenta, query)


class KernelFieldK1:
    """Immutable view of a solved order-1 (jet) velocity field."""

    backend = "kernel-k1"

    def __init__(self, kernel, positions, momenta, mu):
        self.kernel = kernel
        self.positions = np.array(positions, dtype=float)
        self.momenta = np.array(momenta, dtype=float)
        self.mu = np.array(mu, dtype=float)

    @classmethod
    def from_data(cls, kernel, positions, velocities, frame_rates, jitter=0.0,
                  incompressible=False):
        p, mu = solve_k1(kernel, positions, velocities, frame_rates,
                         jitter=jitter, incompressible=incompressible)
        return cls(kernel, positions, p, mu)

    def __call__(self, query):
        return eval_field_k1(self.kernel, self.positions, self.momenta,
                             self.mu, query)

    def grad(self, query):
        return eval_grad_k1(self.kernel, self.positions, self.momenta,
                            self.mu, query)

    def hessian(self, query):
        return eval_hessian_k1(self.kernel, self.positions, self.momenta,
                               self.mu, query)
