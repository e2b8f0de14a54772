"""Acceptance suite: ten numbered criteria, one verdict line each.

Each test prints its PASS/FAIL line with the measured values even when
the surrounding pytest run captures output, then asserts.  Expensive
preset runs are shared between criteria through module-scoped fixtures.
"""

import pytest

from jetflow.verify import (suite_interpolation, suite_gradients,
                            suite_conservation, suite_curvature,
                            suite_convergence, suite_vortex,
                            suite_spectral)


@pytest.fixture(scope="module")
def conservation_results():
    return suite_conservation()


@pytest.fixture(scope="module")
def vortex_results():
    return suite_vortex()


def report(capsys, number, title, results):
    passed = all(r.passed for r in results)
    detail = "; ".join(r.measured for r in results)
    with capsys.disabled():
        print(f"\n[criterion {number:2d}] "
              f"{'PASS' if passed else 'FAIL'}  {title}: {detail}")
    assert passed, "\n".join(r.line() for r in results if not r.passed)


def test_criterion_01_interpolation_exactness(capsys):
    report(capsys, 1, "interpolation exactness", suite_interpolation())


def test_criterion_02_gradient_oracle(capsys):
    report(capsys, 2, "momentum rates match energy gradients",
           suite_gradients())


def test_criterion_03_energy_conservation(capsys, conservation_results):
    results = [r for r in conservation_results
               if r.name.startswith("energy conservation")]
    assert len(results) == 2
    report(capsys, 3, "energy conservation at dt=1e-2, t=10", results)


def test_criterion_04_momentum_map_conservation(capsys,
                                                conservation_results):
    results = [r for r in conservation_results
               if "momentum drift" in r.name or "jet matrix" in r.name]
    assert len(results) == 3
    report(capsys, 4, "linear/angular/jet momentum conservation", results)


def test_criterion_05_particle_circulation(capsys, conservation_results):
    results = [r for r in conservation_results
               if "circulation" in r.name]
    assert len(results) == 1
    report(capsys, 5, "small-loop circulation constancy", results)


def test_criterion_06_curvature_codomain(capsys):
    report(capsys, 6, "curvature vanishes at particles, antisymmetric",
           suite_curvature())


def test_criterion_07_integrator_order(capsys):
    report(capsys, 7, "RK4 global-error order", suite_convergence())


def test_criterion_08_vortex_blob_physics(capsys, vortex_results):
    results = [r for r in vortex_results
               if "blob vs jet" not in r.name]
    assert len(results) == 3
    report(capsys, 8, "vortex-blob physics vs point-vortex oracles",
           results)


def test_criterion_09_spectral_backend(capsys):
    report(capsys, 9, "spectral matching/divergence/periodicity",
           suite_spectral())


def test_criterion_10_blob_vs_jet_comparison(capsys, vortex_results):
    results = [r for r in vortex_results if "blob vs jet" in r.name]
    assert len(results) == 2
    report(capsys, 10, "blob vs spin-only jet comparison", results)
