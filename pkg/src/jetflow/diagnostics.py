"""Conservation and Kelvin-theorem diagnostics.

Translational and rotational momentum maps are computed directly in
momentum variables (they agree with the metric-pairing definition because
momenta are defined by that pairing).  The per-particle jet momenta
D_i^T P_i are the Noether quantities of the residual frame action; in 2D
their conservation manifests as conservation of circulation around
infinitesimal loops circling the particles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .states import ParticleState, JetParticleState

CIRCULATION_RADIUS_FACTOR = 0.01  # default loop radius, in length scales


def noether_linear(state) -> np.ndarray:
    """Total linear momentum sum_i p_i (frames contribute nothing)."""
    return state.momenta.sum(axis=0)


def _rotation_generators(d: int):
    if d == 2:
        j = np.array([[0.0, -1.0], [1.0, 0.0]])
        return [j]
    if d == 3:
        gens = []
        for c in range(3):
            e = np.zeros(3)
            e[c] = 1.0
            g = np.array([np.cross(e, row) for row in np.eye(3)]).T
            gens.append(g)
        return gens
    return []


def noether_angular(state) -> np.ndarray:
    """Rotational momentum map: scalar in 2D, 3-vector in 3D, empty in 1D.

    For jet states the frames contribute sum_i P_i : (omega D_i) per
    rotation generator omega; this follows from invariance of H under
    simultaneous rotation of all positions, momenta and frame data.
    """
    d = state.dim
    gens = _rotation_generators(d)
    if not gens:
        return np.zeros(0)
    x, p = state.positions, state.momenta
    values = []
    for omega in gens:
        val = float(np.einsum("ia,ab,ib->", p, omega, x))
        if isinstance(state, JetParticleState):
            val += float(np.einsum("iab,ac,icb->", state.frame_momenta,
                                   omega, state.frames))
        values.append(val)
    return np.array(values[0]) if d == 2 else np.array(values)


def noether_jet(state: JetParticleState, i: int) -> np.ndarray:
    """Per-particle conserved matrix D_i^T P_i."""
    if not isinstance(state, JetParticleState):
        raise TypeError("jet momenta require a JetParticleState")
    return state.frames[i].T @ state.frame_momenta[i]


def circulation(field, center, radius: float, n_quad: int = 64) -> float:
    """Line integral of u around a circle, by trapezoidal quadrature.

    The trapezoid rule is spectrally accurate for smooth periodic
    integrands, so modest n_quad suffices.
    """
    center = np.asarray(center, dtype=float)
    if center.shape != (2,):
        raise ValueError("circulation is only defined in 2D")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if n_quad < 16:
        raise ValueError("need at least 16 quadrature points")
    theta = np.linspace(0.0, 2.0 * np.pi, n_quad, endpoint=False)
    points = center + radius * np.stack([np.cos(theta), np.sin(theta)],
                                        axis=1)
    tangents = radius * np.stack([-np.sin(theta), np.cos(theta)], axis=1)
    u = np.atleast_2d(field(points))
    return float(np.einsum("qa,qa->", u, tangents) * (2.0 * np.pi / n_quad))


@dataclass
class DiagnosticsRecord:
    """Per-step snapshot of every tracked conserved quantity."""

    t: float
    energy: float
    linear_momentum: np.ndarray
    angular_momentum: np.ndarray
    jet_momenta: Optional[np.ndarray]  # (N, d, d) matrices D_i^T P_i
    circulations: Optional[np.ndarray]
    monitor: float


def record(system, state, t: float,
           circulation_radius: Optional[float] = None,
           n_quad: int = 64) -> DiagnosticsRecord:
    """Assemble all diagnostics for one state.

    Pure function of (state, t): repeated calls are bit-identical.
    """
    from .dynamics import constraint_force_monitor

    field = system.field(state)
    energy = system.energy(state)
    jet = None
    if isinstance(state, JetParticleState):
        jet = np.array([noether_jet(state, i) for i in range(state.count)])
    circs = None
    if state.dim == 2:
        if circulation_radius is None:
            length_scale = getattr(getattr(system, "kernel", None),
                                   "length_scale", 1.0)
            circulation_radius = CIRCULATION_RADIUS_FACTOR * length_scale
        circs = np.array([circulation(field, c, circulation_radius, n_quad)
                          for c in state.positions])
    monitor = constraint_force_monitor(field, state.positions)
    return DiagnosticsRecord(
        t=t,
        energy=energy,
        linear_momentum=noether_linear(state),
        angular_momentum=noether_angular(state),
        jet_momenta=jet,
        circulations=circs,
        monitor=monitor,
    )
