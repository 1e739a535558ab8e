"""Cavity-field spectra from the regression of the moment equations.

The stationary field correlation splits into a coherent delta peak at the
drive frequency with weight ``|<a>|^2`` and a broadband incoherent part

    S_in(w) = 2 Re < da+(p), da >  at  p = i (w - wL),

evaluated from the closed five-moment subsystem {R3, a, a+, R3 a, R3 a+}:
connected initial conditions make the correlation flow homogeneous, so each
frequency costs one shifted 5x5 solve.  On resonance the same transform has
a closed rational form (quartic numerator over ``2 (p + gamma1) D(p)``)
which this module also evaluates; the regression solve is the oracle for
that transcription.

Phase-dependent noise spectra ``X+(w)``/``X-(w)`` of the two normally
ordered quadratures are assembled from the one-sided transforms of the
``<da(t) da>`` and ``<da+(t) da+>`` correlations; the negative-time branch
follows from stationarity, which yields the exact identity

    X+(w) + X-(w) = 2 [S_in(w) + S_in(2 wL - w)].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import DressedParams
from .moments import FIRST_BLOCK, MomentVector, assemble
from .numerics import NumericsError, lu_solve

__all__ = [
    "RegressionSubsystem",
    "SpectrumSamples",
    "build_regression",
    "elastic_weight",
    "incoherent_regression",
    "incoherent_closed_form",
    "squeezing_spectrum",
]

_IDX_A = 1
_IDX_ADAG = 2


@dataclass(frozen=True)
class SpectrumSamples:
    """Real spectral values on a grid of offsets ``(w - wL)`` (units of gamma)."""

    delta: np.ndarray
    values: np.ndarray
    kind: str


@dataclass(frozen=True)
class RegressionSubsystem:
    """5x5 correlation generator plus connected initial vectors.

    ``init_a``/``init_adag`` hold ``<O B> - <O><B>`` for the five left
    operators O and right operator B = a or a+; the commutator terms in the
    a+ column (``<a a+> = <a+ a> + 1`` and ``<R3 a a+> = <R3 a+ a> + <R3>``)
    are already folded in.
    """

    generator5: np.ndarray
    init_a: np.ndarray
    init_adag: np.ndarray


def build_regression(dressed: DressedParams, delta_c: float, m: MomentVector) -> RegressionSubsystem:
    full = assemble(dressed, delta_c).a_matrix
    gen5 = full[np.ix_(FIRST_BLOCK, FIRST_BLOCK)].copy()

    init_a = np.array(
        [
            m.r3a - m.r3 * m.a,
            m.a2 - m.a * m.a,
            m.n - m.adag * m.a,
            m.r3a2 - m.r3a * m.a,
            m.r3n - m.r3adag * m.a,
        ],
        dtype=complex,
    )
    init_adag = np.array(
        [
            m.r3adag - m.r3 * m.adag,
            m.n + 1.0 - m.a * m.adag,
            m.adag2 - m.adag * m.adag,
            m.r3n + m.r3 - m.r3a * m.adag,
            m.r3adag2 - m.r3adag * m.adag,
        ],
        dtype=complex,
    )
    return RegressionSubsystem(generator5=gen5, init_a=init_a, init_adag=init_adag)


def _transforms(gen5: np.ndarray, init: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    """One-sided transforms ``(i d I - M)^-1 init`` for every grid offset."""
    eye = np.eye(gen5.shape[0], dtype=complex)
    out = np.empty((deltas.size, gen5.shape[0]), dtype=complex)
    for idx, d in enumerate(deltas):
        try:
            out[idx] = lu_solve(1j * d * eye - gen5, init)
        except NumericsError as exc:
            raise NumericsError(
                f"resolvent singular at offset {d}: marginally stable parameter set ({exc})"
            ) from exc
    return out


def elastic_weight(m: MomentVector) -> float:
    """Coefficient of the coherent 2*pi*delta(w - wL) spectral component."""
    return float(abs(m.a) ** 2)


def incoherent_regression(
    dressed: DressedParams,
    delta_c: float,
    m: MomentVector,
    grid: np.ndarray,
) -> SpectrumSamples:
    """Broadband spectrum by shifted solves of the correlation subsystem."""
    grid = np.asarray(grid, dtype=float)
    sub = build_regression(dressed, delta_c, m)
    sols = _transforms(sub.generator5, sub.init_a, grid)
    values = 2.0 * sols[:, _IDX_ADAG].real
    return SpectrumSamples(delta=grid, values=values, kind="incoherent")


def incoherent_closed_form(
    dressed: DressedParams,
    m: MomentVector,
    grid: np.ndarray,
) -> SpectrumSamples:
    """Resonant (delta_c = 0) rational form of the incoherent spectrum.

    The quartic numerator coefficients mix the steady moments with the
    non-secular coefficients; ``m`` must hold the steady state of the same
    parameter point (closed form or exact solve).
    """
    grid = np.asarray(grid, dtype=float)
    g1 = dressed.g1
    k = dressed.kappa
    gam1 = dressed.gamma1
    gam2 = dressed.gamma2
    al = dressed.alpha
    alp = dressed.alpha_prime
    am = al - alp
    ap = al + alp
    aa = al * alp

    a_m = m.a
    ad_m = m.adag
    n_m = m.n
    ra_m = m.r3a
    a2_m = m.a2
    r3a2_m = m.r3a2
    r3n_m = m.r3n
    aad = a_m * ad_m

    m4 = 2.0 * (aad - n_m)

    m3 = -am * r3a2_m - ap * r3n_m - 2.0 * g1 * ra_m - 3.0 * (2.0 * gam1 + k) * n_m + 2.0 * (
        3.0 * gam1 + 2.0 * k
    ) * aad

    m2 = (
        -(am * r3a2_m + ap * r3n_m) * (k + 2.0 * gam1)
        - g1 * (4.0 * gam1 + 3.0 * k) * ra_m
        + (
            -gam1 * (4.0 * gam1 + 3.0 * k)
            - (1.5 * k + gam1) * (k + 2.0 * gam1)
            + gam2 * ap
            + 2.0 * aa
        )
        * n_m
        + gam2 * am * a2_m
        + 2.0
        * ((gam1 + k) ** 2 + 2.0 * gam1 * (gam1 + k) + k * (gam1 + 0.5 * k) - 2.0 * aa)
        * aad
        + 2.0 * g1 * (gam2 - al) * a_m
    )

    m1 = (
        (2.0 * g1 * ra_m + (4.0 * gam1 + k) * n_m + am * r3a2_m + ap * r3n_m)
        * (-0.5 * k * (gam1 + 0.5 * k) + aa)
        - (gam1 + k)
        * (
            2.0 * (g1 * ra_m + gam1 * n_m) * (gam1 + 0.5 * k)
            + gam1 * am * r3a2_m
            + gam1 * ap * r3n_m
        )
        + 2.0
        * (
            gam1 * ((gam1 + k) ** 2 + k * (gam1 + 0.5 * k) - 2.0 * aa)
            + (k * (gam1 + 0.5 * k) - 2.0 * aa) * (gam1 + k)
        )
        * aad
        + (
            (2.0 * gam1 + 0.5 * k) * (ap * n_m + am * a2_m)
            + 2.0 * g1 * al * ra_m
            + 2.0 * aa * r3n_m
        )
        * gam2
        + 2.0 * g1 * ((gam2 - al) * (2.0 * gam1 + k) + 0.5 * gam2 * k) * a_m
    )

    m0 = (
        (2.0 * (g1 * ra_m + gam1 * n_m) * (gam1 + 0.5 * k) + (am * r3a2_m + ap * r3n_m) * gam1)
        * (-0.5 * k * (gam1 + 0.5 * k) + aa)
        + 2.0 * gam1 * (k * (gam1 + 0.5 * k) - 2.0 * aa) * (gam1 + k) * aad
        + gam2 * (gam1 + 0.5 * k) * (gam1 * (ap * n_m + am * a2_m) + 2.0 * g1 * al * ra_m)
        + 2.0 * gam1 * gam2 * aa * r3n_m
        + 2.0
        * g1
        * (
            gam1 * (gam2 - al) * (gam1 + k)
            + gam2
            * k
            * (gam1 * gam1 - 0.25 * k * k + 0.5 * gam1 * k + gam2 * al + aa)
            / (2.0 * gam1)
        )
        * a_m
    )

    p = 1j * grid
    numer = ((m4 * p + m3) * p + m2) * p * p + m1 * p + m0
    dpoly = aa * gam2 * gam2 - ((p + 0.5 * k) * (p + 0.5 * k + gam1) - aa) ** 2
    corr = numer / (2.0 * (p + gam1) * dpoly)
    return SpectrumSamples(delta=grid, values=2.0 * corr.real, kind="incoherent")


def squeezing_spectrum(
    dressed: DressedParams,
    delta_c: float,
    m: MomentVector,
    theta: float,
    grid: np.ndarray,
) -> tuple[SpectrumSamples, SpectrumSamples]:
    """Squeezing spectra of the two normally ordered quadratures at ``theta``.

    Negative stretches of ``X+``/``X-`` flag squeezed fluctuations at those
    sideband frequencies; the frequency integral over 2*pi recovers the
    corresponding total variance.
    """
    grid = np.asarray(grid, dtype=float)
    sub = build_regression(dressed, delta_c, m)

    sols_a = _transforms(sub.generator5, sub.init_a, grid)
    sols_a_neg = _transforms(sub.generator5, sub.init_a, -grid)
    sols_adag = _transforms(sub.generator5, sub.init_adag, grid)

    c_aa = sols_a[:, _IDX_A]
    c_adad = sols_adag[:, _IDX_ADAG]
    s_in = 2.0 * sols_a[:, _IDX_ADAG].real
    s_in_mirror = 2.0 * sols_a_neg[:, _IDX_ADAG].real

    phase = complex(math.cos(2.0 * theta), math.sin(2.0 * theta))
    phased = 2.0 * (phase * c_aa).real + 2.0 * (phase.conjugate() * c_adad).real
    base = s_in + s_in_mirror

    x_plus = SpectrumSamples(delta=grid, values=base + phased, kind="squeeze_plus")
    x_minus = SpectrumSamples(delta=grid, values=base - phased, kind="squeeze_minus")
    return x_plus, x_minus
