"""Kernel profiles and their derivatives in the squared-distance variable."""

import numpy as np
import pytest

from jetflow.errors import KernelRegularityError
from jetflow.kernels import (RadialKernel, kernel_eval, kernel_d1,
                             kernel_d2, kernel_d3)


def fd(fn, s, h=1e-6):
    return (fn(s + h) - fn(s - h)) / (2.0 * h)


class TestGaussian:
    kernel = RadialKernel("gaussian", 1.0)

    def test_unit_at_zero(self):
        assert kernel_eval(self.kernel, 0.0) == 1.0

    def test_known_value(self):
        # phi(s) = exp(-s / 2) for unit length scale
        assert kernel_eval(self.kernel, 2.0) == pytest.approx(np.exp(-1.0),
                                                              rel=1e-15)

    def test_derivative_ladder(self):
        # every derivative is a constant multiple of the profile
        s = np.array([0.0, 0.3, 1.7, 4.0])
        phi = kernel_eval(self.kernel, s)
        np.testing.assert_allclose(kernel_d1(self.kernel, s), -0.5 * phi,
                                   rtol=1e-14)
        np.testing.assert_allclose(kernel_d2(self.kernel, s), 0.25 * phi,
                                   rtol=1e-14)
        np.testing.assert_allclose(kernel_d3(self.kernel, s), -0.125 * phi,
                                   rtol=1e-14)

    def test_derivatives_match_finite_differences(self):
        k = RadialKernel("gaussian", 0.7)
        for s in (0.2, 1.0, 3.5):
            assert kernel_d1(k, s) == pytest.approx(
                fd(lambda t: kernel_eval(k, t), s), rel=1e-8)
            assert kernel_d2(k, s) == pytest.approx(
                fd(lambda t: kernel_d1(k, t), s), rel=1e-8)
            assert kernel_d3(k, s) == pytest.approx(
                fd(lambda t: kernel_d2(k, t), s), rel=1e-8)

    def test_is_smooth(self):
        assert self.kernel.is_smooth


class TestExponential:
    kernel = RadialKernel("exponential", 1.0)

    def test_value(self):
        # phi(s) = exp(-sqrt(s)) for unit length scale
        assert kernel_eval(self.kernel, 4.0) == pytest.approx(np.exp(-2.0),
                                                              rel=1e-15)
        assert kernel_eval(self.kernel, 0.0) == 1.0

    def test_first_derivative_away_from_zero(self):
        k = RadialKernel("exponential", 0.5)
        for s in (0.5, 2.0):
            assert kernel_d1(k, s) == pytest.approx(
                fd(lambda t: kernel_eval(k, t), s), rel=1e-7)

    def test_derivatives_undefined_at_zero(self):
        with pytest.raises(KernelRegularityError):
            kernel_d1(self.kernel, 0.0)
        with pytest.raises(KernelRegularityError):
            kernel_d2(self.kernel, np.array([1.0, 0.0]))

    def test_not_smooth(self):
        assert not self.kernel.is_smooth

    def test_no_third_derivative(self):
        with pytest.raises(KernelRegularityError):
            kernel_d3(self.kernel, 1.0)


def test_invalid_family_rejected():
    with pytest.raises(ValueError):
        RadialKernel("cubic", 1.0)


def test_invalid_length_scale_rejected():
    with pytest.raises(ValueError):
        RadialKernel("gaussian", 0.0)
    with pytest.raises(ValueError):
        RadialKernel("gaussian", -2.0)


def test_negative_squared_distance_rejected():
    k = RadialKernel("gaussian", 1.0)
    with pytest.raises(ValueError):
        kernel_eval(k, -1e-3)


def test_vectorized_shapes():
    k = RadialKernel("gaussian", 2.0)
    s = np.linspace(0.0, 5.0, 7).reshape(7, 1)
    assert kernel_eval(k, s).shape == (7, 1)
    assert kernel_d1(k, s).shape == (7, 1)
