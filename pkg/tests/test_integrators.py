"""Time stepping: accuracy, invariant preservation, safety rails."""

import numpy as np
import pytest

from jetflow.dynamics import LandmarkSystem, hamiltonian_k0
from jetflow.errors import CollisionError
from jetflow.integrators import (IntegratorConfig, integrate, step_rk4,
                                 step_implicit_midpoint)
from jetflow.kernels import RadialKernel
from jetflow.scenarios import preset
from jetflow.states import ParticleState

GAUSS = RadialKernel("gaussian", 1.0)


def ring_state(n=6, radius=2.0, speed=0.5):
    theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    x = radius * np.stack([np.cos(theta), np.sin(theta)], axis=1)
    p = speed * np.stack([-np.sin(theta), np.cos(theta)], axis=1)
    return ParticleState(x, p)


class TestConfig:
    def test_rejects_bad_method(self):
        with pytest.raises(ValueError):
            IntegratorConfig(method="euler")

    def test_rejects_nonpositive_dt(self):
        with pytest.raises(ValueError):
            IntegratorConfig(dt=0.0)

    def test_rejects_bad_stride(self):
        with pytest.raises(ValueError):
            IntegratorConfig(observer_stride=0)


class TestFreeParticle:
    def test_straight_line_both_methods(self):
        st = ParticleState([[0.0, 0.0]], [[1.0, 0.5]])
        for method in ("rk4", "implicit_midpoint"):
            system = LandmarkSystem(GAUSS)
            config = IntegratorConfig(method=method, dt=0.1, t_end=2.0)
            traj = integrate(system, st, config)
            final = traj.states[-1]
            np.testing.assert_allclose(final.positions, [[2.0, 1.0]],
                                       atol=1e-12)
            np.testing.assert_allclose(final.momenta, [[1.0, 0.5]],
                                       atol=1e-14)


class TestMidpoint:
    def test_conserves_linear_momentum_exactly(self):
        system = LandmarkSystem(GAUSS)
        st = ring_state()
        config = IntegratorConfig(method="implicit_midpoint", dt=0.02,
                                  t_end=2.0)
        traj = integrate(system, st, config)
        p0 = st.momenta.sum(axis=0)
        for s in traj.states:
            np.testing.assert_allclose(s.momenta.sum(axis=0), p0,
                                       atol=1e-13)

    def test_energy_drift_small(self):
        system = LandmarkSystem(GAUSS)
        st = ring_state()
        config = IntegratorConfig(method="implicit_midpoint", dt=0.02,
                                  t_end=2.0)
        traj = integrate(system, st, config)
        e0 = hamiltonian_k0(GAUSS, st)
        drift = max(abs(hamiltonian_k0(GAUSS, s) - e0)
                    for s in traj.states) / abs(e0)
        assert drift < 1e-5

    def test_second_order_accuracy(self):
        system = LandmarkSystem(GAUSS)
        st = ring_state(n=3)
        errors = []
        dts = [0.1, 0.05, 0.025]
        ref = integrate(system, st, IntegratorConfig(
            method="rk4", dt=1e-3, t_end=1.0, observer_stride=10**9))
        target = ref.states[-1].positions
        for dt in dts:
            traj = integrate(system, st, IntegratorConfig(
                method="implicit_midpoint", dt=dt, t_end=1.0,
                observer_stride=10**9))
            errors.append(np.max(np.abs(traj.states[-1].positions
                                        - target)))
        slope = np.polyfit(np.log(dts), np.log(errors), 1)[0]
        assert 1.8 < slope < 2.2


class TestSafety:
    def test_collision_aborts_run(self):
        # closer than the hard floor of 1e-8 kernel widths
        st = ParticleState([[0.0, 0.0], [5e-9, 0.0]],
                           [[1.0, 0.0], [-1.0, 0.0]])
        system = LandmarkSystem(GAUSS)
        with pytest.raises(CollisionError):
            step_rk4(system, system.pack(st), 1e-3)

    def test_step_errors_carry_time_context(self):
        st = ParticleState([[0.0, 0.0], [5e-9, 0.0]],
                           [[1.0, 0.0], [-1.0, 0.0]])
        system = LandmarkSystem(GAUSS)
        config = IntegratorConfig(method="rk4", dt=1e-3, t_end=1.0)
        with pytest.raises(CollisionError, match="step 1 "):
            integrate(system, st, config)

    def test_monitor_stop(self):
        scenario = preset("ring_8_k0")
        system = scenario.build_system()
        config = IntegratorConfig(method="rk4", dt=1e-2, t_end=1.0,
                                  stop_on_monitor=0.0)
        traj = integrate(system, scenario.build_state(), config)
        assert traj.status == "monitor-triggered"
        assert traj.stopped_at_step == 1


class TestRecording:
    def test_observer_stride(self):
        system = LandmarkSystem(GAUSS)
        st = ParticleState([[0.0, 0.0]], [[1.0, 0.0]])
        config = IntegratorConfig(method="rk4", dt=0.1, t_end=1.0,
                                  observer_stride=4)
        traj = integrate(system, st, config)
        # initial, steps 4 and 8, and the forced final step
        np.testing.assert_allclose(traj.times, [0.0, 0.4, 0.8, 1.0])

    def test_observers_called(self):
        seen = []
        system = LandmarkSystem(GAUSS)
        st = ParticleState([[0.0, 0.0]], [[1.0, 0.0]])
        config = IntegratorConfig(method="rk4", dt=0.5, t_end=1.0)
        integrate(system, st, config, observers=[
            lambda t, state, sys_: seen.append(t)])
        assert seen == [0.0, 0.5, 1.0]


def test_midpoint_step_agrees_with_rk4_for_small_dt():
    system = LandmarkSystem(GAUSS)
    st = ring_state(n=4)
    z = system.pack(st)
    a = step_rk4(system, z, 1e-4)
    b = step_implicit_midpoint(system, z, 1e-4)
    np.testing.assert_allclose(a, b, atol=1e-11)
