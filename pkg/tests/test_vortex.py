"""Vortex-blob reference dynamics and the jet-particle comparison."""

import numpy as np
import pytest

from jetflow.integrators import IntegratorConfig, integrate
from jetflow.vortex import (VortexState, VortexSystem, blob_velocity,
                            blob_eom, blob_invariants, blob_hamiltonian,
                            jet_state_for_blobs, compare_with_jets)

TWO_PI = 2.0 * np.pi


def pair(gamma2=TWO_PI, d=1.0, delta=0.1):
    return VortexState([[0.0, d / 2.0], [0.0, -d / 2.0]],
                       [TWO_PI, gamma2], delta)


class TestVelocity:
    def test_no_self_induction(self):
        st = VortexState([[0.3, -0.7]], [TWO_PI], 0.2)
        np.testing.assert_allclose(blob_velocity(st, st.positions[0]),
                                   [0.0, 0.0], atol=1e-15)

    def test_point_vortex_limit(self):
        # speed Gamma / (2 pi d) once the query leaves the blob core
        st = VortexState([[0.0, 0.0]], [TWO_PI], 0.05)
        u = blob_velocity(st, np.array([1.0, 0.0]))
        speed = np.linalg.norm(u)
        assert speed == pytest.approx(1.0, abs=np.exp(-1.0 / 0.05**2) + 1e-12)
        # counterclockwise for positive strength
        assert u[1] > 0.0

    def test_midpoint_of_opposite_pair_is_perpendicular(self):
        st = pair(gamma2=-TWO_PI)
        u = blob_velocity(st, np.array([0.0, 0.0]))
        # separation axis is y; velocity must be pure x
        assert abs(u[1]) < 1e-14
        assert abs(u[0]) > 1.0

    def test_rotational_equivariance(self):
        rng = np.random.default_rng(0)
        st = VortexState(rng.standard_normal((4, 2)),
                         rng.standard_normal(4), 0.3)
        theta = 0.83
        rot = np.array([[np.cos(theta), -np.sin(theta)],
                        [np.sin(theta), np.cos(theta)]])
        q = rng.standard_normal(2)
        u = blob_velocity(st, q)
        st_rot = VortexState(st.positions @ rot.T, st.strengths, 0.3)
        u_rot = blob_velocity(st_rot, rot @ q)
        np.testing.assert_allclose(u_rot, rot @ u, atol=1e-14)


class TestEom:
    def test_single_vortex_stationary(self):
        st = VortexState([[1.0, 2.0]], [3.0], 0.1)
        np.testing.assert_allclose(blob_eom(st), 0.0, atol=1e-15)

    def test_corotating_pair_centroid_still(self):
        st = pair()
        v = blob_eom(st)
        np.testing.assert_allclose(v.sum(axis=0), 0.0, atol=1e-13)
        # tangential: perpendicular to the separation axis (y)
        assert np.all(np.abs(v[:, 1]) < 1e-14)

    def test_phase_space_divergence_free(self):
        rng = np.random.default_rng(1)
        st = VortexState(rng.standard_normal((3, 2)),
                         rng.standard_normal(3), 0.4)
        h = 1e-6
        trace = 0.0
        for i in range(3):
            for b in range(2):
                bump = st.positions.copy()
                bump[i, b] += h
                plus = blob_eom(VortexState(bump, st.strengths, 0.4))
                bump[i, b] -= 2.0 * h
                minus = blob_eom(VortexState(bump, st.strengths, 0.4))
                trace += (plus[i, b] - minus[i, b]) / (2.0 * h)
        assert abs(trace) < 1e-8


class TestInvariants:
    def test_frozen_single_vortex_values(self):
        st = VortexState([[1.0, 0.0]], [3.0], 0.1)
        total, impulse, angular = blob_invariants(st)
        assert total == 3.0
        np.testing.assert_allclose(impulse, [3.0, 0.0])
        assert angular == 3.0

    def test_opposite_pair_total_circulation_zero(self):
        st = pair(gamma2=-TWO_PI)
        assert blob_invariants(st)[0] == pytest.approx(0.0, abs=1e-13)

    def test_conserved_along_trajectory(self):
        st = pair()
        system = VortexSystem(st.strengths, st.blob_width)
        traj = integrate(system, st, IntegratorConfig(
            method="rk4", dt=1e-3, t_end=1.0))
        ref = blob_invariants(st)
        for s in traj.states:
            total, impulse, angular = blob_invariants(s)
            assert abs(total - ref[0]) < 1e-12
            np.testing.assert_allclose(impulse, ref[1], atol=1e-11)
            assert abs(angular - ref[2]) < 1e-10

    def test_hamiltonian_conserved(self):
        st = pair()
        system = VortexSystem(st.strengths, st.blob_width)
        traj = integrate(system, st, IntegratorConfig(
            method="rk4", dt=1e-3, t_end=1.0))
        e0 = blob_hamiltonian(st)
        drift = max(abs(blob_hamiltonian(s) - e0) for s in traj.states)
        assert drift < 1e-10 * max(abs(e0), 1.0)


class TestValidation:
    def test_bad_shapes_rejected(self):
        with pytest.raises(ValueError):
            VortexState([[0.0, 0.0, 0.0]], [1.0], 0.1)
        with pytest.raises(ValueError):
            VortexState([[0.0, 0.0]], [1.0, 2.0], 0.1)
        with pytest.raises(ValueError):
            VortexState([[0.0, 0.0]], [1.0], 0.0)

    def test_duplicate_positions_rejected(self):
        with pytest.raises(ValueError):
            VortexState([[0.0, 0.0], [0.0, 0.0]], [1.0, 1.0], 0.1)


class TestJetComparison:
    def test_matching_jet_data_is_spin_only(self):
        st = pair()
        kernel, jet = jet_state_for_blobs(st)
        assert kernel.length_scale == pytest.approx(
            st.blob_width / np.sqrt(2.0))
        np.testing.assert_allclose(jet.momenta, 0.0, atol=1e-15)
        mu = jet.mu
        np.testing.assert_allclose(mu + np.transpose(mu, (0, 2, 1)), 0.0,
                                   atol=1e-15)
        np.testing.assert_allclose(mu[:, 1, 0],
                                   st.strengths / (4.0 * np.pi),
                                   rtol=1e-14)

    def test_single_vortex_agrees_exactly(self):
        st = VortexState([[0.4, -0.2]], [TWO_PI], 0.3)
        report = compare_with_jets(st, t_end=0.5, dt=1e-2)
        assert np.max(report.position_discrepancy) == 0.0
        assert report.momentum_within_tolerance

    def test_zero_strength_configuration_is_static(self):
        st = VortexState([[0.0, 0.0], [1.0, 0.0]], [0.0, 0.0], 0.2)
        report = compare_with_jets(st, t_end=0.5, dt=1e-2)
        assert np.max(report.position_discrepancy) == 0.0

    def test_corotating_pair_rotates_same_way(self):
        st = VortexState([[0.5, 0.0], [-0.5, 0.0]], [TWO_PI, TWO_PI], 0.5)
        report = compare_with_jets(st, t_end=0.5, dt=1e-2)
        assert report.rotation_sign_consistent
        # discrepancy is measured, not asserted small; it must be finite
        assert np.all(np.isfinite(report.position_discrepancy))
