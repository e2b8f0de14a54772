"""2D regularized point-vortex (vortex blob) reference method.

Each blob carries a circulation Gamma_i and induces the Krasny-regularized
velocity

    u(m) = sum_j Gamma_j K_delta(m - x_j),
    K_delta(r) = r_perp / (2 pi |r|^2) * (1 - exp(-|r|^2 / delta^2)),

with r_perp = (-r_y, r_x).  The kernel is smooth everywhere; the limit at
r -> 0 is zero, so blobs do not advect themselves.  The blob system is
Hamiltonian in the vortex symplectic structure and conserves total
circulation, linear impulse and angular impulse.

The module also quantifies how closely spin-only jet particles shadow the
blob dynamics; the match is measured, not asserted, because the Gaussian
Gram-solve interpolation differs from the interpolation for which the
correspondence is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import exp1

from .errors import ConfigError
from .states import _pairwise_sq_dists


@dataclass
class VortexState:
    """Positions and circulations of N Gaussian vortex blobs."""

    positions: np.ndarray   # (N, 2)
    strengths: np.ndarray   # (N,)
    blob_width: float

    def __post_init__(self):
        self.positions = np.array(self.positions, dtype=float)
        self.strengths = np.array(self.strengths, dtype=float)
        if self.positions.ndim != 2 or self.positions.shape[1] != 2:
            raise ValueError("positions must be an (N, 2) array")
        if self.strengths.shape != (self.positions.shape[0],):
            raise ValueError("need one strength per vortex")
        if not (np.all(np.isfinite(self.positions))
                and np.all(np.isfinite(self.strengths))):
            raise ValueError("state entries must be finite")
        if self.blob_width <= 0:
            raise ValueError("blob width must be positive")
        if self.positions.shape[0] > 1:
            s = _pairwise_sq_dists(self.positions)
            np.fill_diagonal(s, np.inf)
            if np.min(s) <= 0:
                raise ValueError("vortex positions must be distinct")

    @property
    def count(self) -> int:
        return self.positions.shape[0]

    @property
    def dim(self) -> int:
        return 2

    def copy(self) -> "VortexState":
        return VortexState(self.positions.copy(), self.strengths.copy(),
                           self.blob_width)


def _blob_factor(s, delta):
    """(1 - exp(-s/delta^2)) / (2 pi s) with its removable limit at s = 0."""
    out = np.empty_like(s)
    small = s < 1e-300
    out[small] = 1.0 / (2.0 * np.pi * delta**2)
    ss = s[~small]
    out[~small] = (1.0 - np.exp(-ss / delta**2)) / (2.0 * np.pi * ss)
    return out


def blob_velocity(state: VortexState, query):
    """Velocity induced by all blobs at one or many query points."""
    q = np.asarray(query, dtype=float)
    single = q.ndim == 1
    q = np.atleast_2d(q)
    diff = q[:, None, :] - state.positions[None, :, :]
    s = np.einsum("qjd,qjd->qj", diff, diff)
    factor = _blob_factor(s, state.blob_width)
    # self term: factor is finite but r_perp = 0, so it contributes nothing
    perp = np.stack([-diff[..., 1], diff[..., 0]], axis=-1)
    u = np.einsum("qj,j,qja->qa", factor, state.strengths, perp)
    return u[0] if single else u


def blob_velocity_gradient(state: VortexState, query, h: float = 1e-6):
    """Central-difference gradient of the blob field, entries [a, b]."""
    q = np.asarray(query, dtype=float)
    grad = np.empty((2, 2))
    for b in range(2):
        e = np.zeros(2)
        e[b] = h
        grad[:, b] = (blob_velocity(state, q + e)
                      - blob_velocity(state, q - e)) / (2.0 * h)
    return grad


def blob_eom(state: VortexState) -> np.ndarray:
    """xdot_i = velocity induced at vortex i (zero self-induction)."""
    return blob_velocity(state, state.positions)


def blob_invariants(state: VortexState):
    """(total circulation, linear impulse, angular impulse)."""
    gam = state.strengths
    x = state.positions
    return (float(gam.sum()),
            gam @ x,
            float(gam @ np.einsum("ia,ia->i", x, x)))


def blob_hamiltonian(state: VortexState) -> float:
    """Conserved interaction energy of the Gaussian-blob system.

    Pairwise stream function psi(r) = -(1/4pi)(ln r^2 + E1(r^2/delta^2));
    may be negative (unlike the kernel-method kinetic energies).
    """
    x, gam, delta = state.positions, state.strengths, state.blob_width
    s = _pairwise_sq_dists(x)
    iu = np.triu_indices(state.count, k=1)
    if len(iu[0]) == 0:
        return 0.0
    sij = s[iu]
    psi = -(np.log(sij) + exp1(sij / delta**2)) / (4.0 * np.pi)
    return float(np.sum(gam[iu[0]] * gam[iu[1]] * psi))


class VortexSystem:
    """Integrator wrapper: phase vector is the flattened positions."""

    def __init__(self, strengths, blob_width):
        self.strengths = np.asarray(strengths, dtype=float)
        self.blob_width = float(blob_width)
        self.length_scale = float(blob_width)

    def pack(self, state: VortexState):
        return state.positions.ravel().copy()

    def unpack(self, z) -> VortexState:
        return VortexState(z.reshape(-1, 2), self.strengths, self.blob_width)

    def rhs(self, z):
        state = VortexState.__new__(VortexState)
        state.positions = z.reshape(-1, 2)
        state.strengths = self.strengths
        state.blob_width = self.blob_width
        return blob_eom(state).ravel()

    def positions_of(self, z):
        return z.reshape(-1, 2)

    def energy(self, state: VortexState) -> float:
        return blob_hamiltonian(state)

    def field(self, state: VortexState):
        return _BlobField(state)


class _BlobField:
    backend = "vortex_blob"

    def __init__(self, state):
        self.state = state.copy()

    def __call__(self, query):
        return blob_velocity(self.state, query)

    def grad(self, query):
        return blob_velocity_gradient(self.state, query)


# ---------------------------------------------------------------------------
# Blob vs jet comparison
# ---------------------------------------------------------------------------

def jet_state_for_blobs(state: VortexState, incompressible: bool = False):
    """Spin-only jet initial data shadowing a blob configuration.

    The Gaussian kernel width sigma = delta / sqrt(2) matches the blob
    vorticity profile, and the spin magnitude Gamma / (4 pi) matches the
    near-field rotation rate.  p = 0: pure spin.
    """
    from .kernels import RadialKernel
    from .states import jet_state_from_mu

    n = state.count
    j = np.array([[0.0, -1.0], [1.0, 0.0]])
    mu = np.einsum("i,ab->iab", state.strengths / (4.0 * np.pi), j)
    frames = np.tile(np.eye(2), (n, 1, 1))
    kernel = RadialKernel("gaussian", state.blob_width / np.sqrt(2.0))
    jet = jet_state_from_mu(state.positions, frames, np.zeros((n, 2)), mu,
                            incompressible=incompressible)
    return kernel, jet


@dataclass
class BlobJetReport:
    """Measured discrepancy between blob and spin-only jet trajectories."""

    times: np.ndarray
    position_discrepancy: np.ndarray     # max over particles, per time
    max_jet_linear_momentum: np.ndarray  # max_i |p_i|, per time
    rotation_sign_consistent: bool
    momentum_within_tolerance: bool


def compare_with_jets(state: VortexState, t_end: float, dt: float,
                      tolerance: float = 1e-8) -> BlobJetReport:
    """Integrate the same vorticity configuration both ways and compare.

    Runs (a) the blob equations and (b) jet particles initialized with
    pure antisymmetric spin, then reports per-step position discrepancy
    and whether each jet particle's linear momentum stays below the
    tolerance.  RK4 with the given dt for both.
    """
    from .dynamics import JetSystem
    from .integrators import IntegratorConfig, RK4, integrate

    if state.count < 1:
        raise ConfigError("need at least one vortex")
    kernel, jet0 = jet_state_for_blobs(state)
    if jet0.count != state.count:
        raise ConfigError("particle counts must match")

    config = IntegratorConfig(method=RK4, dt=dt, t_end=t_end)
    blob_traj = integrate(VortexSystem(state.strengths, state.blob_width),
                          state, config)
    jet_traj = integrate(JetSystem(kernel), jet0, config)

    times = np.array(blob_traj.times)
    disc = np.array([
        np.max(np.linalg.norm(b.positions - j.positions, axis=1))
        for b, j in zip(blob_traj.states, jet_traj.states)])
    pnorm = np.array([
        np.max(np.linalg.norm(j.momenta, axis=1)) for j in jet_traj.states])

    sign_ok = True
    if state.count >= 2 and len(times) > 1:
        # compare the rotation sense of both trajectories about the centroid
        def rotation_angle(states, get):
            first, last = get(states[0]), get(states[-1])
            rel0 = first[0] - first.mean(axis=0)
            rel1 = last[0] - last.mean(axis=0)
            cross = rel0[0] * rel1[1] - rel0[1] * rel1[0]
            return np.arctan2(cross, rel0 @ rel1)

        ang_blob = rotation_angle(blob_traj.states, lambda s: s.positions)
        ang_jet = rotation_angle(jet_traj.states, lambda s: s.positions)
        if abs(ang_blob) > 1e-12 or abs(ang_jet) > 1e-12:
            sign_ok = np.sign(ang_blob) == np.sign(ang_jet)

    return BlobJetReport(
        times=times,
        position_discrepancy=disc,
        max_jet_linear_momentum=pnorm,
        rotation_sign_consistent=bool(sign_ok),
        momentum_within_tolerance=bool(np.all(pnorm <= tolerance)),
    )
