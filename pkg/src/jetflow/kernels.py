"""Radial kernel profiles and their derivatives.

Kernels are parameterized by the *squared* separation s = ||r||^2 rather
than the distance itself.  The Gaussian profile is smooth in s everywhere,
so first and second derivatives exist at coincident points; that is what
the first-order (jet) interpolation blocks need.  The exponential profile
exp(-sqrt(s)/alpha) is only continuous at the origin and its s-derivative
diverges there, so it is restricted to zeroth-order use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import KernelRegularityError

GAUSSIAN = "gaussian"
EXPONENTIAL = "exponential"

_FAMILIES = (GAUSSIAN, EXPONENTIAL)


@dataclass(frozen=True)
class RadialKernel:
    """Scalar kernel profile phi(s), s = squared distance.

    family:       "gaussian" -> phi(s) = exp(-s / (2 sigma^2))
                  "exponential" -> phi(s) = exp(-sqrt(s) / alpha)
    length_scale: sigma (Gaussian) or alpha (exponential), > 0
    """

    family: str
    length_scale: float

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}; "
                             f"expected one of {_FAMILIES}")
        if not (self.length_scale > 0.0 and np.isfinite(self.length_scale)):
            raise ValueError(f"length_scale must be positive and finite, "
                             f"got {self.length_scale}")

    @property
    def is_smooth(self) -> bool:
        """True if phi is differentiable in s at s = 0."""
        return self.family == GAUSSIAN


def _check_nonnegative(s):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("squared distance must be nonnegative")
    return s


def kernel_eval(kernel: RadialKernel, s):
    """Evaluate phi(s).  Accepts scalars or arrays of squared distances."""
    s = _check_nonnegative(s)
    if kernel.family == GAUSSIAN:
        return np.exp(-s / (2.0 * kernel.length_scale**2))
    return np.exp(-np.sqrt(s) / kernel.length_scale)


def kernel_d1(kernel: RadialKernel, s):
    """First derivative d phi / d s."""
    s = _check_nonnegative(s)
    if kernel.family == GAUSSIAN:
        c = -1.0 / (2.0 * kernel.length_scale**2)
        return c * np.exp(c * s)
    if np.any(s == 0):
        raise KernelRegularityError(
            "exponential kernel is not differentiable at the origin")
    r = np.sqrt(s)
    # d/ds exp(-r/alpha) = -exp(-r/alpha) / (2 alpha r)
    return -np.exp(-r / kernel.length_scale) / (2.0 * kernel.length_scale * r)


def kernel_d2(kernel: RadialKernel, s):
    """Second derivative d^2 phi / d s^2."""
    s = _check_nonnegative(s)
    if kernel.family == GAUSSIAN:
        c = -1.0 / (2.0 * kernel.length_scale**2)
        return c * c * np.exp(c * s)
    if np.any(s == 0):
        raise KernelRegularityError(
            "exponential kernel is not differentiable at the origin")
    r = np.sqrt(s)
    a = kernel.length_scale
    phi = np.exp(-r / a)
    return phi * (1.0 / (4.0 * a * a * s) + 1.0 / (4.0 * a * s * r))


def kernel_d3(kernel: RadialKernel, s):
    """Third derivative d^3 phi / d s^3 (Gaussian only; used by jet forces)."""
    if kernel.family != GAUSSIAN:
        raise KernelRegularityError(
            "third kernel derivative requires the Gaussian family")
    s = _check_nonnegative(s)
    c = -1.0 / (2.0 * kernel.length_scale**2)
    return c**3 * np.exp(c * s)
