"""Momentum maps, circulation quadrature and the diagnostics record."""

import numpy as np
import pytest

from jetflow import diagnostics as diag
from jetflow.dynamics import LandmarkSystem, JetSystem
from jetflow.kernels import RadialKernel
from jetflow.states import ParticleState, jet_state_from_mu

GAUSS = RadialKernel("gaussian", 1.0)
J = np.array([[0.0, -1.0], [1.0, 0.0]])


class TestNoether:
    def test_linear_is_momentum_sum(self):
        st = ParticleState([[0.0, 0.0], [1.0, 0.0]],
                           [[1.0, 2.0], [3.0, -1.0]])
        np.testing.assert_allclose(diag.noether_linear(st), [4.0, 1.0])

    def test_angular_2d_value(self):
        # x ^ p for a single particle at (1, 0) with p = (0, 2)
        st = ParticleState([[1.0, 0.0]], [[0.0, 2.0]])
        assert diag.noether_angular(st) == pytest.approx(2.0)

    def test_angular_empty_in_1d(self):
        st = ParticleState([[0.0], [1.0]], [[1.0], [0.0]])
        assert diag.noether_angular(st).shape == (0,)

    def test_angular_3d_components(self):
        st = ParticleState([[1.0, 0.0, 0.0]], [[0.0, 1.0, 0.0]])
        np.testing.assert_allclose(diag.noether_angular(st),
                                   [0.0, 0.0, 1.0], atol=1e-15)

    def test_angular_includes_frame_term(self):
        mu = np.array([0.3 * J])
        st = jet_state_from_mu(np.zeros((1, 2)), np.eye(2)[None],
                               np.zeros((1, 2)), mu)
        plain = ParticleState(st.positions, st.momenta)
        # spin contributes even though x ^ p vanishes
        assert abs(diag.noether_angular(st)) > 0.1
        assert diag.noether_angular(plain) == pytest.approx(0.0)

    def test_jet_matrix(self):
        rng = np.random.default_rng(0)
        frames = rng.standard_normal((2, 2, 2)) + 2.0 * np.eye(2)
        big_p = rng.standard_normal((2, 2, 2))
        st = jet_state_from_mu(np.array([[0.0, 0.0], [1.0, 0.0]]),
                               frames, np.zeros((2, 2)),
                               rng.standard_normal((2, 2, 2)))
        got = diag.noether_jet(st, 1)
        np.testing.assert_allclose(got,
                                   st.frames[1].T @ st.frame_momenta[1])

    def test_jet_matrix_needs_jet_state(self):
        st = ParticleState([[0.0, 0.0]], [[1.0, 0.0]])
        with pytest.raises(TypeError):
            diag.noether_jet(st, 0)


class TestCirculation:
    def test_uniform_field_gives_zero(self):
        field = lambda pts: np.tile([1.0, 2.0], (len(np.atleast_2d(pts)), 1))
        val = diag.circulation(field, [0.0, 0.0], 1.0)
        assert val == pytest.approx(0.0, abs=1e-14)

    def test_rigid_rotation_value(self):
        # u = omega J m has circulation 2 pi r^2 omega on a centered circle
        omega = 0.7
        field = lambda pts: omega * np.atleast_2d(pts) @ J.T
        r = 0.35
        val = diag.circulation(field, [0.0, 0.0], r)
        assert val == pytest.approx(2.0 * np.pi * r * r * omega, rel=1e-12)

    def test_errors(self):
        field = lambda pts: np.atleast_2d(pts)
        with pytest.raises(ValueError):
            diag.circulation(field, [0.0, 0.0, 0.0], 1.0)
        with pytest.raises(ValueError):
            diag.circulation(field, [0.0, 0.0], 0.0)
        with pytest.raises(ValueError):
            diag.circulation(field, [0.0, 0.0], 1.0, n_quad=8)


class TestRecord:
    def test_landmark_2d_record(self):
        st = ParticleState([[0.0, 0.0], [1.5, 0.0]],
                           [[1.0, 0.0], [0.0, 1.0]])
        system = LandmarkSystem(GAUSS)
        rec = diag.record(system, st, 0.25)
        assert rec.t == 0.25
        assert rec.energy > 0.0
        assert rec.jet_momenta is None
        assert rec.circulations.shape == (2,)
        assert rec.monitor >= 0.0

    def test_landmark_1d_record_has_no_circulation(self):
        st = ParticleState([[0.0], [2.0]], [[1.0], [-1.0]])
        system = LandmarkSystem(GAUSS)
        rec = diag.record(system, st, 0.0)
        assert rec.circulations is None
        assert rec.angular_momentum.shape == (0,)

    def test_jet_record_carries_matrices(self):
        mu = np.array([0.2 * J, -0.1 * J])
        st = jet_state_from_mu(np.array([[1.0, 0.0], [-1.0, 0.0]]),
                               np.tile(np.eye(2), (2, 1, 1)),
                               np.zeros((2, 2)), mu)
        system = JetSystem(GAUSS)
        rec = diag.record(system, st, 0.0)
        assert rec.jet_momenta.shape == (2, 2, 2)

    def test_record_is_deterministic(self):
        st = ParticleState([[0.0, 0.0], [1.5, 0.0]],
                           [[1.0, 0.0], [0.0, 1.0]])
        system = LandmarkSystem(GAUSS)
        a = diag.record(system, st, 0.0)
        b = diag.record(system, st, 0.0)
        assert a.energy == b.energy
        np.testing.assert_array_equal(a.circulations, b.circulations)

    def test_small_loop_circulation_tracks_spin(self):
        # for a spin-only jet particle the loop integral divided by
        # pi eps^2 approximates the local vorticity 2 * spin / sigma^2
        spin = 0.4
        sigma = 1.0
        st = jet_state_from_mu(np.zeros((1, 2)), np.eye(2)[None],
                               np.zeros((1, 2)), np.array([spin * J]))
        system = JetSystem(RadialKernel("gaussian", sigma))
        field = system.field(st)
        eps = 0.01 * sigma
        circ = diag.circulation(field, [0.0, 0.0], eps)
        vorticity = circ / (np.pi * eps * eps)
        assert vorticity == pytest.approx(2.0 * spin / sigma**2, rel=1e-3)
