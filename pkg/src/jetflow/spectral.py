"""Divergence-free Fourier interpolation on a 2D periodic box.

The basis holds two real fields per retained integer wave-vector kappa,

    w_cos(m) = khat_perp cos(2 pi kappa . m / L),
    w_sin(m) = khat_perp sin(2 pi kappa . m / L),

with polarization perpendicular to the wave-vector, so every basis field
is analytically divergence-free.  Wave-vectors are taken from a half
plane (kappa and -kappa span the same fields).  Matching the particle
velocities is an underdetermined linear problem; the minimum-norm
coefficient vector is returned.

Because the basis is independent of particle positions, the induced
kinetic metric on configuration space has the explicit Hamiltonian
H(x, p) = 1/2 p^T A(x) A(x)^T p (basis fields normalized to unit L2 norm
on the box), which `SpectralSystem` integrates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GramConditioningError
from .states import ParticleState


@dataclass
class SpectralBasis:
    """Divergence-free sin/cos basis on the periodic box [0, L)^2."""

    box_size: float
    cutoff: float

    modes: np.ndarray = field(init=False)   # (M, 2) integer wave-vectors

    def __post_init__(self):
        if self.box_size <= 0:
            raise ValueError("box size must be positive")
        if self.cutoff < 1:
            raise ValueError("cutoff must be at least 1")
        kmax = int(np.floor(self.cutoff))
        modes = []
        for k1 in range(0, kmax + 1):
            for k2 in range(-kmax, kmax + 1):
                if k1 == 0 and k2 <= 0:
                    continue  # half plane; kappa = 0 spans nothing
                if k1 * k1 + k2 * k2 <= self.cutoff**2:
                    modes.append((k1, k2))
        self.modes = np.array(modes, dtype=int)

    @property
    def size(self) -> int:
        """Number of real coefficients (two phases per mode)."""
        return 2 * len(self.modes)

    def _phases(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return (2.0 * np.pi / self.box_size) * (points @ self.modes.T)

    def design_matrix(self, points) -> np.ndarray:
        """Stacked basis-field values: rows (point, component), columns
        coefficients [cos phases | sin phases].  Fields have unit L2 norm
        on the box."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        q = len(points)
        theta = self._phases(points)                       # (Q, M)
        knorm = np.linalg.norm(self.modes, axis=1)
        perp = np.stack([-self.modes[:, 1], self.modes[:, 0]],
                        axis=1) / knorm[:, None]           # unit polarization
        # ||khat_perp cos(.)||_{L2}^2 = L^2 / 2
        norm = self.box_size / np.sqrt(2.0)
        a = np.empty((q * 2, self.size))
        a[:, :len(self.modes)] = np.einsum(
            "qm,ma->qam", np.cos(theta), perp).reshape(q * 2, -1) / norm
        a[:, len(self.modes):] = np.einsum(
            "qm,ma->qam", np.sin(theta), perp).reshape(q * 2, -1) / norm
        return a

    def design_matrix_gradient(self, points) -> np.ndarray:
        """Derivative of the design matrix rows with respect to the point
        coordinates; shape (Q, 2(component), n_coeff, 2(deriv))."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        q = len(points)
        theta = self._phases(points)
        knorm = np.linalg.norm(self.modes, axis=1)
        perp = np.stack([-self.modes[:, 1], self.modes[:, 0]],
                        axis=1) / knorm[:, None]
        norm = self.box_size / np.sqrt(2.0)
        wave = (2.0 * np.pi / self.box_size) * self.modes   # (M, 2)
        out = np.zeros((q, 2, self.size, 2))
        out[:, :, :len(self.modes), :] = np.einsum(
            "qm,ma,mb->qamb", -np.sin(theta), perp, wave) / norm
        out[:, :, len(self.modes):, :] = np.einsum(
            "qm,ma,mb->qamb", np.cos(theta), perp, wave) / norm
        return out

    def evaluate(self, coefficients, points):
        """Velocity field sum_i c_i u_i at one or many points."""
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        u = (self.design_matrix(pts) @ coefficients).reshape(-1, 2)
        return u[0] if single else u

    def evaluate_gradient(self, coefficients, point):
        """Analytic spatial gradient of the field, entries [a, b]."""
        g = self.design_matrix_gradient(point)[0]       # (2, K, 2)
        return np.einsum("akb,k->ab", g, coefficients)


def solve_spectral(basis: SpectralBasis, positions, velocities) -> np.ndarray:
    """Minimum-norm coefficients matching the particle velocities."""
    positions = np.asarray(positions, dtype=float)
    velocities = np.asarray(velocities, dtype=float)
    n = positions.shape[0]
    if 2 * n > basis.size:
        raise GramConditioningError(
            f"{2 * n} matching constraints exceed {basis.size} basis "
            f"coefficients; raise the cutoff")
    a = basis.design_matrix(positions)
    rank = np.linalg.matrix_rank(a)
    if rank < 2 * n:
        raise GramConditioningError(
            "degenerate particle/basis geometry: matching matrix rank "
            f"{rank} < {2 * n}")
    coeff, *_ = np.linalg.lstsq(a, velocities.ravel(), rcond=None)
    return coeff


class SpectralField:
    """Immutable view of a solved spectral velocity field."""

    backend = "spectral"

    def __init__(self, basis, coefficients):
        self.basis = basis
        self.coefficients = np.array(coefficients, dtype=float)

    @classmethod
    def from_velocities(cls, basis, positions, velocities):
        return cls(basis, solve_spectral(basis, positions, velocities))

    def __call__(self, query):
        return self.basis.evaluate(self.coefficients, query)

    def grad(self, query):
        return self.basis.evaluate_gradient(self.coefficients, query)


class SpectralSystem:
    """Geodesic flow of the spectral kinetic metric; phase vector [x, p].

    H(x, p) = 1/2 p^T A A^T p with A the design matrix at the particle
    positions; pdot comes from the analytic derivative of A.
    """

    order = 0

    def __init__(self, basis: SpectralBasis):
        self.basis = basis
        self.length_scale = basis.box_size / (2.0 * np.pi * basis.cutoff)

    def pack(self, state: ParticleState):
        self._shape = state.positions.shape
        return np.concatenate([state.positions.ravel(),
                               state.momenta.ravel()])

    def unpack(self, z) -> ParticleState:
        n, d = self._shape
        return ParticleState(z[:n * d].reshape(n, d), z[n * d:].reshape(n, d))

    def rhs(self, z):
        n, d = self._shape
        x = z[:n * d].reshape(n, d)
        p = z[n * d:].reshape(n, d)
        a = self.basis.design_matrix(x)
        coeff = a.T @ p.ravel()
        xdot = (a @ coeff).reshape(n, d)
        da = self.basis.design_matrix_gradient(x)   # (N, 2, K, 2)
        # dH/dx_i^b = p_i^a (dA/dx_i^b)[(i,a), :] . c  (rows of other
        # particles do not depend on x_i)
        dh = np.einsum("ia,iakb,k->ib", p, da, coeff)
        return np.concatenate([xdot.ravel(), (-dh).ravel()])

    def positions_of(self, z):
        n, d = self._shape
        return z[:n * d].reshape(n, d)

    def energy(self, state: ParticleState) -> float:
        a = self.basis.design_matrix(state.positions)
        c = a.T @ state.momenta.ravel()
        return 0.5 * float(c @ c)

    def field(self, state: ParticleState):
        a = self.basis.design_matrix(state.positions)
        return SpectralField(self.basis, a.T @ state.momenta.ravel())
