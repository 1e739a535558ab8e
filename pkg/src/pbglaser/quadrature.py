"""Normally ordered quadrature variances of the cavity field.

For the phase-rotated quadrature ``X(theta) = a e^{i theta} + a+ e^{-i theta}``
the normally ordered steady variance follows directly from the second
moments.  On resonance (``delta_c = 0``) it also has a closed form that
splits into a non-negative linear-interaction part ``s1`` and a
phase-sensitive part ``s2`` carried entirely by the non-secular coupling;
``s2`` is the only route to negative values (squeezing below shot noise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import DressedParams
from .moments import MomentVector

__all__ = [
    "VarianceResult",
    "variance_from_moments",
    "variance_closed_form",
    "variance_minus",
]

_REALITY_TOL = 1e-8


@dataclass(frozen=True)
class VarianceResult:
    """Variance at quadrature phase ``theta`` (radians).

    ``s1``/``s2`` are populated only by the closed-form path, where
    ``value = s1 + s2`` holds exactly.
    """

    theta: float
    value: float
    s1: float | None = None
    s2: float | None = None


def variance_from_moments(m: MomentVector, theta: float) -> VarianceResult:
    """<:(dX)^2:> from steady moments; real by conjugate pairing."""
    phase = complex(math.cos(2.0 * theta), math.sin(2.0 * theta))
    value = (
        phase * (m.a2 - m.a * m.a)
        + phase.conjugate() * (m.adag2 - m.adag * m.adag)
        + 2.0 * (m.n - m.adag * m.a)
    )
    scale = max(1.0, abs(value))
    if abs(value.imag) > _REALITY_TOL * scale:
        raise ValueError(
            f"variance has imaginary part {value.imag:.3e}; "
            "moment vector is not conjugate-consistent"
        )
    return VarianceResult(theta=theta, value=value.real)


def variance_minus(m: MomentVector, theta: float) -> VarianceResult:
    """Variance of the conjugate quadrature ``-i(a e^{i th} - a+ e^{-i th})``.

    Operator identity: equals the plus-quadrature variance at theta + pi/2.
    """
    shifted = variance_from_moments(m, theta + 0.5 * math.pi)
    return VarianceResult(theta=theta, value=shifted.value)


def variance_closed_form(dressed: DressedParams, theta: float) -> VarianceResult:
    """Resonant (delta_c = 0) closed form, split as ``s1 + s2``.

    ``s1 >= 0`` vanishes only for ``gamma1 = |gamma2|``; ``s2`` carries one
    factor ``v = g1^2/Omega`` per 1/Omega order and therefore vanishes in
    secular mode.
    """
    g1 = dressed.g1
    k = dressed.kappa
    gam1 = dressed.gamma1
    gam2 = dressed.gamma2
    v = dressed.coeff_twophoton.imag  # g1^2 / Omega
    d12 = gam1 * gam1 - gam2 * gam2
    cos2t = math.cos(2.0 * theta)
    sin2t = math.sin(2.0 * theta)

    s1 = 8.0 * g1 * g1 * d12 * (1.0 + cos2t) / (k * gam1 * gam1 * (k + 2.0 * gam1))

    s2 = -2.0 * v * gam2 * sin2t / (k * gam1) * (
        1.0
        + 32.0
        * g1
        * g1
        * d12
        * (3.0 * gam1 + 2.0 * k)
        / (k * gam1 * (k + gam1) * (k + 2.0 * gam1) ** 2)
    ) + 4.0 * v * v * (1.0 - cos2t) / (k * k) * (
        1.0
        - d12 / (gam1 * (k + gam1))
        + 32.0
        * g1
        * g1
        * d12
        * (k * gam1 * (k + gam1) + (5.0 * gam1 + 4.0 * k) * gam2 * gam2)
        / (k * gam1 * gam1 * (k + gam1) ** 2 * (k + 2.0 * gam1) ** 2)
    )

    return VarianceResult(theta=theta, value=s1 + s2, s1=s1, s2=s2)
