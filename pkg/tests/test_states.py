"""Particle state containers and their validation rules."""

import numpy as np
import pytest

from jetflow.states import (ParticleState, JetParticleState,
                            jet_state_from_mu)


def test_basic_particle_state():
    st = ParticleState([[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]])
    assert st.count == 2
    assert st.dim == 2


def test_copy_is_independent():
    st = ParticleState([[0.0], [1.0]], [[1.0], [2.0]])
    other = st.copy()
    other.positions[0, 0] = 5.0
    assert st.positions[0, 0] == 0.0


def test_duplicate_positions_rejected_with_pair_named():
    with pytest.raises(ValueError, match="0.*2|2.*0"):
        ParticleState([[0.0], [1.0], [0.0]], np.zeros((3, 1)))


def test_nonfinite_rejected():
    with pytest.raises(ValueError):
        ParticleState([[np.nan, 0.0]], [[0.0, 0.0]])


def test_momentum_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        ParticleState([[0.0, 0.0]], [[1.0]])


def test_unsupported_dimension_rejected():
    with pytest.raises(ValueError):
        ParticleState(np.zeros((1, 4)), np.zeros((1, 4)))


class TestJetState:
    def make(self, frames=None):
        n, d = 2, 2
        if frames is None:
            frames = np.tile(np.eye(d), (n, 1, 1))
        return JetParticleState([[0.0, 0.0], [1.0, 0.0]], frames,
                                np.zeros((n, d)), np.zeros((n, d, d)))

    def test_mu_is_frame_momentum_times_frame_transpose(self):
        rng = np.random.default_rng(3)
        frames = rng.standard_normal((2, 2, 2)) + 2.0 * np.eye(2)
        big_p = rng.standard_normal((2, 2, 2))
        st = JetParticleState([[0.0, 0.0], [1.0, 0.0]], frames,
                              np.zeros((2, 2)), big_p)
        expect = np.einsum("iab,icb->iac", big_p, frames)
        np.testing.assert_allclose(st.mu, expect, rtol=1e-14)

    def test_singular_frame_rejected(self):
        frames = np.zeros((2, 2, 2))
        with pytest.raises(ValueError):
            self.make(frames)

    def test_incompressible_requires_unit_determinant(self):
        frames = np.tile(2.0 * np.eye(2), (2, 1, 1))
        with pytest.raises(ValueError):
            JetParticleState([[0.0, 0.0], [1.0, 0.0]], frames,
                             np.zeros((2, 2)), np.zeros((2, 2, 2)),
                             incompressible=True)

    def test_from_mu_roundtrip(self):
        rng = np.random.default_rng(9)
        frames = rng.standard_normal((3, 2, 2)) + 2.0 * np.eye(2)
        mu = rng.standard_normal((3, 2, 2))
        x = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        st = jet_state_from_mu(x, frames, np.zeros((3, 2)), mu)
        np.testing.assert_allclose(st.mu, mu, rtol=1e-12, atol=1e-13)
