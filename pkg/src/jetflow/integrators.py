"""Fixed-step time integration: explicit RK4 and symplectic implicit midpoint.

The implicit midpoint rule is symmetric and symplectic and conserves
quadratic invariants of the flow exactly (up to the nonlinear-solver
tolerance); that covers every Noether quantity this package tracks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import CollisionError, NonConvergenceError
from .states import _pairwise_sq_dists

RK4 = "rk4"
IMPLICIT_MIDPOINT = "implicit_midpoint"

COLLISION_FACTOR = 1e-8


@dataclass
class IntegratorConfig:
    method: str = IMPLICIT_MIDPOINT
    dt: float = 1e-2
    t_end: float = 1.0
    newton_tol: float = 1e-12
    newton_max_iter: int = 50
    observer_stride: int = 1
    stop_on_monitor: Optional[float] = None

    def __post_init__(self):
        if self.method not in (RK4, IMPLICIT_MIDPOINT):
            raise ValueError(f"unknown method {self.method!r}")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_end < 0:
            raise ValueError("t_end must be nonnegative")
        if self.newton_tol <= 0:
            raise ValueError("newton_tol must be positive")
        if self.observer_stride < 1:
            raise ValueError("observer_stride must be >= 1")


def _check_separation(system, z):
    positions = getattr(system, "positions_of", lambda _z: None)(z)
    if positions is None or positions.shape[0] < 2:
        return
    length_scale = getattr(getattr(system, "kernel", None), "length_scale",
                           None)
    if length_scale is None:
        length_scale = getattr(system, "length_scale", 1.0)
    s = _pairwise_sq_dists(positions)
    np.fill_diagonal(s, np.inf)
    limit = COLLISION_FACTOR * length_scale
    if np.min(s) < limit * limit:
        i, j = np.unravel_index(np.argmin(s), s.shape)
        raise CollisionError(
            f"particles {i} and {j} closer than {limit:.1e} "
            f"(distance {np.sqrt(s[i, j]):.3e}); run aborted")


def step_rk4(system, z, dt):
    """One classical fourth-order Runge-Kutta step on the phase vector."""
    k1 = system.rhs(z)
    k2 = system.rhs(z + 0.5 * dt * k1)
    k3 = system.rhs(z + 0.5 * dt * k2)
    k4 = system.rhs(z + dt * k3)
    z_new = z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    _check_separation(system, z_new)
    return z_new


def step_implicit_midpoint(system, z, dt, tol=1e-12, max_iter=50):
    """One implicit midpoint step: z1 = z + dt f((z + z1)/2).

    Fixed-point iteration handles the non-stiff case in a few sweeps; if
    it fails to contract, Newton iterations with a finite-difference
    Jacobian take over (particle near-encounters make the vector field
    stiff).  The returned step is built from the converged midpoint
    slope, so linear invariants of f are conserved to roundoff.
    """
    scale = max(1.0, float(np.linalg.norm(z)))
    z1 = z + dt * system.rhs(z)

    fp_sweeps = min(12, max_iter)
    for _ in range(fp_sweeps):
        z_next = z + dt * system.rhs(0.5 * (z + z1))
        done = np.linalg.norm(z_next - z1) <= tol * scale
        z1 = z_next
        if done:
            _check_separation(system, z1)
            return z1

    # Newton fallback
    n = len(z)
    best_residual = None
    for _ in range(max_iter):
        mid = 0.5 * (z + z1)
        residual = z1 - z - dt * system.rhs(mid)
        r_norm = float(np.linalg.norm(residual))
        if r_norm <= tol * scale:
            _check_separation(system, z1)
            return z1
        if best_residual is not None and r_norm >= 0.9 * best_residual:
            # stagnated at the roundoff floor
            _check_separation(system, z1)
            return z1
        best_residual = (r_norm if best_residual is None
                         else min(best_residual, r_norm))
        jac = np.empty((n, n))
        h = 1e-7 * max(1.0, float(np.linalg.norm(mid)))
        f_mid = system.rhs(mid)
        for j in range(n):
            e = np.zeros(n)
            e[j] = h
            jac[:, j] = (system.rhs(mid + e) - f_mid) / h
        z1 = z1 - np.linalg.solve(np.eye(n) - 0.5 * dt * jac, residual)
    raise NonConvergenceError(
        f"implicit midpoint failed to converge in {max_iter} iterations; "
        f"try a smaller dt than {dt}")


@dataclass
class Trajectory:
    """Recorded states of one integration run."""

    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    status: str = "completed"
    stopped_at_step: Optional[int] = None

    def __len__(self):
        return len(self.times)


def integrate(system, state, config: IntegratorConfig,
              observers: Optional[list] = None) -> Trajectory:
    """Run the configured integrator, invoking observers at the stride.

    Observers are callables (t, state, system) -> None.  If
    ``stop_on_monitor`` is set, the constraint-force monitor is evaluated
    at the particle positions before each step and the run stops with
    status "monitor-triggered" once it reaches the threshold.
    """
    from .dynamics import constraint_force_monitor

    observers = observers or []
    traj = Trajectory()
    z = system.pack(state)
    n_steps = int(round(config.t_end / config.dt))

    def emit(t, z_now):
        st = system.unpack(z_now)
        traj.times.append(t)
        traj.states.append(st)
        for obs in observers:
            obs(t, st, system)

    emit(0.0, z)
    for step in range(1, n_steps + 1):
        if config.stop_on_monitor is not None:
            st = system.unpack(z)
            monitor = constraint_force_monitor(system.field(st),
                                               st.positions)
            if monitor >= config.stop_on_monitor:
                traj.status = "monitor-triggered"
                traj.stopped_at_step = step
                return traj
        try:
            if config.method == RK4:
                z = step_rk4(system, z, config.dt)
            else:
                z = step_implicit_midpoint(system, z, config.dt,
                                           tol=config.newton_tol,
                                           max_iter=config.newton_max_iter)
        except (CollisionError, NonConvergenceError) as exc:
            raise type(exc)(f"step {step} (t = {step * config.dt:.6g}): "
                            f"{exc}") from exc
        if step % config.observer_stride == 0 or step == n_steps:
            emit(step * config.dt, z)
    return traj
