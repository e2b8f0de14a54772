"""Scenario configuration: named presets and TOML files.

A scenario bundles everything one simulation run needs: the method tag,
kernel or basis parameters, the integrator settings, and the initial
particle data.  Files are TOML (diffable, versionable); a file may name
a preset and override individual sections.
"""

from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:        # Python < 3.11
    import tomli as tomllib

from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .errors import ConfigError
from .integrators import IntegratorConfig
from .kernels import RadialKernel
from .spectral import SpectralBasis
from .states import ParticleState, JetParticleState, jet_state_from_mu
from .vortex import VortexState, VortexSystem

METHODS = ("landmark_k0", "jet_k1", "spectral_k0", "vortex_blob")


@dataclass
class Scenario:
    """One runnable simulation configuration."""

    name: str
    method: str
    integrator: IntegratorConfig
    positions: np.ndarray
    momenta: Optional[np.ndarray] = None
    frames: Optional[np.ndarray] = None
    frame_momenta: Optional[np.ndarray] = None
    strengths: Optional[np.ndarray] = None
    blob_width: Optional[float] = None
    incompressible: bool = False
    kernel: Optional[RadialKernel] = None
    basis: Optional[SpectralBasis] = None
    field_grid: Optional[tuple] = None    # (nx, ny, xmin, xmax, ymin, ymax)
    field_times: list = dc_field(default_factory=list)

    def __post_init__(self):
        problems = []
        if self.method not in METHODS:
            problems.append(f"method: must be one of {METHODS}, "
                            f"got {self.method!r}")
        self.positions = np.asarray(self.positions, dtype=float)
        if self.method in ("landmark_k0", "jet_k1") and self.kernel is None:
            problems.append("kernel: required for kernel methods")
        if self.method == "spectral_k0" and self.basis is None:
            problems.append("basis: required for the spectral method")
        if self.method == "vortex_blob":
            if self.strengths is None:
                problems.append("initial.strengths: required for vortex_blob")
            if self.blob_width is None:
                problems.append("initial.blob_width: required for vortex_blob")
        elif self.momenta is None:
            problems.append("initial.momenta: required for particle methods")
        if self.method == "jet_k1" and self.frame_momenta is None:
            problems.append("initial.frame_momenta: required for jet_k1")
        if self.method != "jet_k1":
            for key in ("frames", "frame_momenta"):
                if getattr(self, key) is not None:
                    problems.append(f"initial.{key}: only valid for jet_k1")
        if self.method != "vortex_blob":
            for key in ("strengths", "blob_width"):
                if getattr(self, key) is not None:
                    problems.append(f"initial.{key}: only valid for "
                                    "vortex_blob")
        if problems:
            raise ConfigError("invalid scenario: " + "; ".join(problems))
        if self.method == "jet_k1" and self.frames is None:
            n, d = self.positions.shape
            self.frames = np.tile(np.eye(d), (n, 1, 1))

    def build_system(self):
        from .dynamics import LandmarkSystem, JetSystem
        from .spectral import SpectralSystem

        if self.method == "landmark_k0":
            return LandmarkSystem(self.kernel)
        if self.method == "jet_k1":
            return JetSystem(self.kernel, incompressible=self.incompressible)
        if self.method == "spectral_k0":
            return SpectralSystem(self.basis)
        return VortexSystem(self.strengths, self.blob_width)

    def build_state(self):
        if self.method == "vortex_blob":
            return VortexState(self.positions, self.strengths,
                               self.blob_width)
        if self.method == "jet_k1":
            return JetParticleState(self.positions, self.frames,
                                    self.momenta, self.frame_momenta,
                                    incompressible=self.incompressible)
        return ParticleState(self.positions, self.momenta)


# ---------------------------------------------------------------------------
# Preset library
# ---------------------------------------------------------------------------

_J = np.array([[0.0, -1.0], [1.0, 0.0]])


def _spin_jet(positions, spins, sigma, **kw):
    """Spin-only jet data: p = 0, mu_i = spins[i] * 90-degree rotation."""
    positions = np.asarray(positions, dtype=float)
    n = positions.shape[0]
    mu = np.einsum("i,ab->iab", np.asarray(spins, dtype=float), _J)
    frames = np.tile(np.eye(2), (n, 1, 1))
    state = jet_state_from_mu(positions, frames, np.zeros((n, 2)), mu)
    return dict(positions=positions, momenta=state.momenta,
                frames=state.frames, frame_momenta=state.frame_momenta,
                kernel=RadialKernel("gaussian", sigma), **kw)


def _preset_single_free_particle():
    return Scenario(
        name="single_free_particle", method="landmark_k0",
        kernel=RadialKernel("gaussian", 1.0),
        positions=[[0.0, 0.0]], momenta=[[1.0, 0.0]],
        integrator=IntegratorConfig(method="implicit_midpoint", dt=1e-2,
                                    t_end=5.0))


def _preset_headon_pair_k0():
    # symmetric 1D approach; the pair slows without crossing
    return Scenario(
        name="headon_pair_k0", method="landmark_k0",
        kernel=RadialKernel("gaussian", 1.0),
        positions=[[-2.0], [2.0]], momenta=[[1.0], [-1.0]],
        integrator=IntegratorConfig(method="implicit_midpoint", dt=1e-2,
                                    t_end=8.0))


def _preset_ring_8_k0():
    theta = np.linspace(0.0, 2.0 * np.pi, 8, endpoint=False)
    pos = 2.0 * np.stack([np.cos(theta), np.sin(theta)], axis=1)
    mom = 0.5 * np.stack([-np.sin(theta), np.cos(theta)], axis=1)
    return Scenario(
        name="ring_8_k0", method="landmark_k0",
        kernel=RadialKernel("gaussian", 1.0),
        positions=pos, momenta=mom,
        integrator=IntegratorConfig(method="implicit_midpoint", dt=1e-2,
                                    t_end=5.0))


def _preset_single_spin_jet():
    return Scenario(
        name="single_spin_jet", method="jet_k1",
        integrator=IntegratorConfig(method="implicit_midpoint", dt=1e-2,
                                    t_end=5.0),
        **_spin_jet([[0.0, 0.0]], [0.5], 1.0))


def _preset_corotating_jets():
    # spin and separation chosen so the small-loop circulation stays
    # within a couple of percent of its initial value
    return Scenario(
        name="corotating_jets", method="jet_k1",
        integrator=IntegratorConfig(method="implicit_midpoint", dt=1e-2,
                                    t_end=5.0),
        **_spin_jet([[1.5, 0.0], [-1.5, 0.0]], [0.1, 0.1], 1.0))


def _preset_vortex_pair_translate():
    return Scenario(
        name="vortex_pair_translate", method="vortex_blob",
        positions=[[0.0, 0.5], [0.0, -0.5]],
        strengths=[2.0 * np.pi, -2.0 * np.pi], blob_width=0.1,
        integrator=IntegratorConfig(method="rk4", dt=1e-2, t_end=2.0))


def _preset_corotating_blobs():
    # equal-strength pair; rotation period 2 pi^2 d^2 / Gamma = pi here
    return Scenario(
        name="corotating_blobs", method="vortex_blob",
        positions=[[0.5, 0.0], [-0.5, 0.0]],
        strengths=[2.0 * np.pi, 2.0 * np.pi], blob_width=0.1,
        integrator=IntegratorConfig(method="rk4", dt=1e-3, t_end=np.pi))


def _preset_spectral_torus_4():
    box = 2.0 * np.pi
    q = box / 4.0
    return Scenario(
        name="spectral_torus_4", method="spectral_k0",
        basis=SpectralBasis(box_size=box, cutoff=2.0),
        positions=[[q, q], [3 * q, q], [3 * q, 3 * q], [q, 3 * q]],
        momenta=[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]],
        integrator=IntegratorConfig(method="implicit_midpoint", dt=1e-2,
                                    t_end=2.0))


PRESETS = {
    "single_free_particle": _preset_single_free_particle,
    "headon_pair_k0": _preset_headon_pair_k0,
    "ring_8_k0": _preset_ring_8_k0,
    "single_spin_jet": _preset_single_spin_jet,
    "corotating_jets": _preset_corotating_jets,
    "vortex_pair_translate": _preset_vortex_pair_translate,
    "corotating_blobs": _preset_corotating_blobs,
    "spectral_torus_4": _preset_spectral_torus_4,
}


def preset(name: str) -> Scenario:
    """Fresh copy of a named preset scenario."""
    try:
        return PRESETS[name]()
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; available: "
                          + ", ".join(sorted(PRESETS))) from None


# ---------------------------------------------------------------------------
# TOML loading
# ---------------------------------------------------------------------------

_TOP_KEYS = {"name", "method", "preset", "kernel", "basis", "integrator",
             "initial", "output"}
_INITIAL_KEYS = {"positions", "momenta", "frames", "frame_momenta",
                 "strengths", "blob_width", "incompressible"}


def _integrator_from(table, base: Optional[IntegratorConfig]):
    cfg = {} if base is None else dict(
        method=base.method, dt=base.dt, t_end=base.t_end,
        newton_tol=base.newton_tol, newton_max_iter=base.newton_max_iter,
        observer_stride=base.observer_stride,
        stop_on_monitor=base.stop_on_monitor)
    rename = {"stride": "observer_stride"}
    for key, value in table.items():
        cfg[rename.get(key, key)] = value
    return IntegratorConfig(**cfg)


def load_scenario(path) -> Scenario:
    """Parse a TOML scenario file, with optional preset inheritance.

    Every invalid or unknown key is reported in a single error.
    """
    with open(path, "rb") as handle:
        try:
            doc = tomllib.load(handle)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: not valid TOML: {exc}") from exc

    problems = [f"unknown key {key!r}" for key in doc if key not in _TOP_KEYS]
    initial = doc.get("initial", {})
    problems += [f"unknown key initial.{key!r}" for key in initial
                 if key not in _INITIAL_KEYS]
    if problems:
        raise ConfigError(f"{path}: " + "; ".join(problems))

    base = preset(doc["preset"]) if "preset" in doc else None

    def pick(key, default=None):
        if key in initial:
            return initial[key]
        if base is not None:
            return getattr(base, key)
        return default

    kernel = base.kernel if base is not None else None
    if "kernel" in doc:
        kernel = RadialKernel(doc["kernel"]["family"],
                              doc["kernel"]["length_scale"])
    basis = base.basis if base is not None else None
    if "basis" in doc:
        basis = SpectralBasis(doc["basis"]["box_size"],
                              doc["basis"]["cutoff"])
    integrator = _integrator_from(doc.get("integrator", {}),
                                  base.integrator if base else None)

    output = doc.get("output", {})
    grid = output.get("field_grid")
    if grid is not None:
        if len(grid) != 6:
            raise ConfigError(f"{path}: output.field_grid must be "
                              "[nx, ny, xmin, xmax, ymin, ymax]")
        grid = (int(grid[0]), int(grid[1])) + tuple(float(v)
                                                    for v in grid[2:])

    method = doc.get("method", base.method if base else None)
    if method is None:
        raise ConfigError(f"{path}: method (or preset) is required")
    if "positions" not in initial and base is None:
        raise ConfigError(f"{path}: initial.positions (or preset) required")

    return Scenario(
        name=doc.get("name", base.name if base else "unnamed"),
        method=method,
        integrator=integrator,
        positions=pick("positions"),
        momenta=pick("momenta"),
        frames=pick("frames"),
        frame_momenta=pick("frame_momenta"),
        strengths=pick("strengths"),
        blob_width=pick("blob_width"),
        incompressible=bool(pick("incompressible", False)),
        kernel=kernel,
        basis=basis,
        field_grid=grid if grid is not None
        else (base.field_grid if base else None),
        field_times=list(output.get("field_times",
                                    base.field_times if base else [])),
    )
