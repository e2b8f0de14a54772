"""File formats: trajectory JSONL, diagnostics CSV, field-sample CSV.

Trajectories are line-delimited JSON so long runs stream without
buffering the whole file: the first line is a meta record carrying
enough configuration to rebuild the velocity field of any saved step;
each following line is one saved state.  Diagnostics go to CSV for
direct plotting; the header is fixed per method tag.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .errors import ConfigError
from .interpolation import KernelFieldK0, KernelFieldK1
from .kernels import RadialKernel
from .spectral import SpectralBasis, SpectralField
from .states import JetParticleState
from .vortex import VortexState, blob_velocity


def scenario_meta(scenario, seed=None) -> dict:
    """JSON-serializable run description stored on the first line."""
    meta = {
        "meta": {
            "name": scenario.name,
            "method": scenario.method,
            "integrator": {
                "method": scenario.integrator.method,
                "dt": scenario.integrator.dt,
                "t_end": scenario.integrator.t_end,
                "stride": scenario.integrator.observer_stride,
            },
            "seed": seed,
        }
    }
    inner = meta["meta"]
    if scenario.kernel is not None:
        inner["kernel"] = {"family": scenario.kernel.family,
                           "length_scale": scenario.kernel.length_scale}
    if scenario.basis is not None:
        inner["basis"] = {"box_size": scenario.basis.box_size,
                          "cutoff": scenario.basis.cutoff}
    if scenario.method == "vortex_blob":
        inner["strengths"] = np.asarray(scenario.strengths,
                                        dtype=float).tolist()
        inner["blob_width"] = float(scenario.blob_width)
    return meta


def state_record(t: float, state) -> dict:
    """One trajectory line for any supported state type."""
    rec = {"t": float(t), "positions": state.positions.tolist()}
    if isinstance(state, VortexState):
        return rec
    rec["momenta"] = state.momenta.tolist()
    if isinstance(state, JetParticleState):
        rec["frames"] = state.frames.tolist()
        rec["frame_momenta"] = state.frame_momenta.tolist()
    return rec


def write_trajectory(path, scenario, times, states, seed=None):
    with open(path, "w") as handle:
        handle.write(json.dumps(scenario_meta(scenario, seed),
                                sort_keys=True) + "\n")
        for t, state in zip(times, states):
            handle.write(json.dumps(state_record(t, state),
                                    sort_keys=True) + "\n")


def read_trajectory(path):
    """Returns (meta dict, list of record dicts with numpy arrays)."""
    with open(path) as handle:
        first = handle.readline()
        if not first:
            raise ConfigError(f"{path}: empty trajectory file")
        meta = json.loads(first).get("meta")
        if meta is None:
            raise ConfigError(f"{path}: missing meta line")
        records = []
        for line in handle:
            if not line.strip():
                continue
            raw = json.loads(line)
            rec = {"t": raw["t"]}
            for key in ("positions", "momenta", "frames", "frame_momenta"):
                if key in raw:
                    rec[key] = np.array(raw[key], dtype=float)
            records.append(rec)
    return meta, records


def field_from_record(meta, record):
    """Rebuild the velocity-field view of one saved trajectory step."""
    method = meta["method"]
    x = record["positions"]
    if method == "landmark_k0":
        kernel = RadialKernel(meta["kernel"]["family"],
                              meta["kernel"]["length_scale"])
        return KernelFieldK0(kernel, x, record["momenta"])
    if method == "jet_k1":
        kernel = RadialKernel(meta["kernel"]["family"],
                              meta["kernel"]["length_scale"])
        mu = np.einsum("iab,icb->iac", record["frame_momenta"],
                       record["frames"])
        return KernelFieldK1(kernel, x, record["momenta"], mu)
    if method == "spectral_k0":
        basis = SpectralBasis(meta["basis"]["box_size"],
                              meta["basis"]["cutoff"])
        a = basis.design_matrix(x)
        return SpectralField(basis, a.T @ record["momenta"].ravel())
    if method == "vortex_blob":
        state = VortexState(x, np.array(meta["strengths"], dtype=float),
                            meta["blob_width"])

        class _Blob:
            backend = "vortex_blob"

            def __call__(self, query):
                return blob_velocity(state, query)

        return _Blob()
    raise ConfigError(f"unknown method tag {method!r}")


# ---------------------------------------------------------------------------
# Diagnostics CSV
# ---------------------------------------------------------------------------

def diagnostics_header(method: str, dim: int, count: int) -> list:
    cols = ["t", "energy"] + ["px", "py", "pz"][:dim]
    if dim == 2:
        cols.append("ang")
    elif dim == 3:
        cols += ["ang_x", "ang_y", "ang_z"]
    cols += ["jet_norm_drift", "monitor"]
    if dim == 2:
        cols += [f"circ_{i + 1}" for i in range(count)]
    return cols


def diagnostics_rows(system, scenario, times, states):
    """Header and rows of the diagnostics table for a finished run.

    The jet_norm_drift column is the largest relative change of any
    per-particle conserved jet matrix since t = 0 (zero for methods
    without frames).  For vortex runs the momentum columns carry the
    blob impulses, which play the same conservation role.
    """
    from . import diagnostics as diag
    from .vortex import blob_invariants, blob_hamiltonian

    dim = 2 if scenario.method == "vortex_blob" else states[0].dim
    count = states[0].count
    header = diagnostics_header(scenario.method, dim, count)
    rows = []
    jet0 = None
    for t, state in zip(times, states):
        if scenario.method == "vortex_blob":
            total, impulse, angular = blob_invariants(state)
            row = [t, blob_hamiltonian(state), impulse[0], impulse[1],
                   angular, 0.0]
            field = system.field(state)
            from .dynamics import constraint_force_monitor
            row.append(constraint_force_monitor(field, state.positions))
            radius = diag.CIRCULATION_RADIUS_FACTOR * state.blob_width
            row += [diag.circulation(field, c, radius)
                    for c in state.positions]
        else:
            rec = diag.record(system, state, t)
            row = [t, rec.energy] + list(np.atleast_1d(rec.linear_momentum))
            row += list(np.atleast_1d(rec.angular_momentum))
            if rec.jet_momenta is not None:
                if jet0 is None:
                    jet0 = rec.jet_momenta
                scale = max(np.max(np.linalg.norm(jet0, axis=(1, 2))),
                            1e-300)
                drift = np.max(np.linalg.norm(rec.jet_momenta - jet0,
                                              axis=(1, 2))) / scale
                row.append(drift)
            else:
                row.append(0.0)
            row.append(rec.monitor)
            if rec.circulations is not None:
                row += list(rec.circulations)
        rows.append(row)
    return header, rows


def write_diagnostics(path, system, scenario, times, states):
    header, rows = diagnostics_rows(system, scenario, times, states)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{v:.17g}" if isinstance(v, float)
                             else v for v in row])


# ---------------------------------------------------------------------------
# Field samples CSV
# ---------------------------------------------------------------------------

def write_field_samples(path, field, grid):
    """Sample a 2D velocity field on a rectangular grid.

    grid = (nx, ny, xmin, xmax, ymin, ymax); one CSV row per grid point,
    columns x, y, u, v.
    """
    nx, ny, xmin, xmax, ymin, ymax = grid
    if nx < 1 or ny < 1:
        raise ConfigError("field grid needs at least one point per axis")
    xs = np.linspace(xmin, xmax, nx)
    ys = np.linspace(ymin, ymax, ny)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["x", "y", "u", "v"])
        for y in ys:
            for x in xs:
                u = np.asarray(field(np.array([x, y])), dtype=float)
                writer.writerow([f"{x:.17g}", f"{y:.17g}",
                                 f"{u[0]:.17g}", f"{u[1]:.17g}"])
