"""Particle phase-space states.

A landmark (order-0) particle carries a position and a conjugate momentum.
A jet (order-1) particle additionally carries an invertible frame matrix D
describing its first-order deformation, and a matrix momentum.  Dynamics
uses the canonical frame momentum P (conjugate to D); the left-trivialized
momentum mu = P D^T is derived where needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DET_TOL = 1e-9


def _pairwise_sq_dists(x: np.ndarray) -> np.ndarray:
    diff = x[:, None, :] - x[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _validate_positions(positions: np.ndarray):
    if positions.ndim != 2:
        raise ValueError("positions must be an (N, d) array")
    n, d = positions.shape
    if n < 1 or d not in (1, 2, 3):
        raise ValueError(f"need N >= 1 particles in dimension 1, 2 or 3, "
                         f"got shape {positions.shape}")
    if not np.all(np.isfinite(positions)):
        raise ValueError("positions must be finite")
    if n > 1:
        s = _pairwise_sq_dists(positions)
        np.fill_diagonal(s, np.inf)
        if np.min(s) <= 0.0:
            i, j = np.unravel_index(np.argmin(s), s.shape)
            raise ValueError(f"particles {i} and {j} coincide")


@dataclass
class ParticleState:
    """Positions and momenta of N landmark particles in R^d."""

    positions: np.ndarray  # (N, d)
    momenta: np.ndarray    # (N, d)

    def __post_init__(self):
        self.positions = np.array(self.positions, dtype=float)
        self.momenta = np.array(self.momenta, dtype=float)
        _validate_positions(self.positions)
        if self.momenta.shape != self.positions.shape:
            raise ValueError("momenta must have the same shape as positions")
        if not np.all(np.isfinite(self.momenta)):
            raise ValueError("momenta must be finite")

    @property
    def count(self) -> int:
        return self.positions.shape[0]

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    def copy(self) -> "ParticleState":
        return ParticleState(self.positions.copy(), self.momenta.copy())


@dataclass
class JetParticleState:
    """Jet particles: positions, frames D, momenta p and frame momenta P.

    The momentum conjugate to the frame rate nu = Ddot D^{-1} is
    mu = P D^T.  With the incompressible flag set, frames must be
    unit-volume (det D = 1) and admissible frame rates traceless.
    """

    positions: np.ndarray       # (N, d)
    frames: np.ndarray          # (N, d, d)
    momenta: np.ndarray         # (N, d)
    frame_momenta: np.ndarray   # (N, d, d), canonical P
    incompressible: bool = False

    def __post_init__(self):
        self.positions = np.array(self.positions, dtype=float)
        self.frames = np.array(self.frames, dtype=float)
        self.momenta = np.array(self.momenta, dtype=float)
        self.frame_momenta = np.array(self.frame_momenta, dtype=float)
        _validate_positions(self.positions)
        n, d = self.positions.shape
        if self.frames.shape != (n, d, d):
            raise ValueError(f"frames must have shape {(n, d, d)}")
        if self.momenta.shape != (n, d):
            raise ValueError(f"momenta must have shape {(n, d)}")
        if self.frame_momenta.shape != (n, d, d):
            raise ValueError(f"frame_momenta must have shape {(n, d, d)}")
        for arr in (self.frames, self.momenta, self.frame_momenta):
            if not np.all(np.isfinite(arr)):
                raise ValueError("state entries must be finite")
        dets = np.linalg.det(self.frames)
        if np.any(dets == 0.0):
            raise ValueError("frames must be invertible")
        if self.incompressible and np.any(np.abs(dets - 1.0) > DET_TOL):
            raise ValueError("incompressible frames must have det(D) = 1")

    @property
    def count(self) -> int:
        return self.positions.shape[0]

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    @property
    def mu(self) -> np.ndarray:
        """Left-trivialized frame momenta mu_i = P_i D_i^T, shape (N, d, d)."""
        return np.einsum("iab,icb->iac", self.frame_momenta, self.frames)

    def copy(self) -> "JetParticleState":
        return JetParticleState(self.positions.copy(), self.frames.copy(),
                                self.momenta.copy(), self.frame_momenta.copy(),
                                incompressible=self.incompressible)


def jet_state_from_mu(positions, frames, momenta, mu, incompressible=False):
    """Build a JetParticleState from left-trivialized momenta mu = P D^T."""
    frames = np.asarray(frames, dtype=float)
    mu = np.asarray(mu, dtype=float)
    inv_t = np.linalg.inv(np.transpose(frames, (0, 2, 1)))
    frame_momenta = np.einsum("iab,ibc->iac", mu, inv_t)
    return JetParticleState(positions, frames, momenta, frame_momenta,
                            incompressible=incompressible)
