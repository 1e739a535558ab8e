"""Closed 11-moment flow of the dressed emitter + cavity field.

The effective dressed-frame dynamics closes exactly on eleven expectation
values,

    <R3>, <a>, <a+>, <R3 a>, <R3 a+>, <a^2>, <a+^2>, <a+a>,
    <R3 a^2>, <R3 a+^2>, <R3 a+a>,

which obey ``dx/dt = A x + b`` with a constant generator.  This module
assembles ``(A, b)``, solves the steady state exactly, propagates transients
through the matrix exponential, and evaluates the closed-form steady state
available at ``delta_c = 0`` (a perturbative series in the two imaginary
coefficients ``alpha``, ``alpha_prime``; exact when the dressing is
symmetric and the lower sideband is dark).

Index convention is fixed by ``MOMENT_NAMES`` and shared by every module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import DressedParams
from .numerics import NumericsError, expm_action, lu_solve

__all__ = [
    "MOMENT_NAMES",
    "CONJUGATE_PAIRS",
    "REAL_MOMENTS",
    "MomentVector",
    "MomentSystem",
    "assemble",
    "steady_state",
    "evolve",
    "closed_form_steady",
    "resonant_field_moments",
]

MOMENT_NAMES = (
    "R3",
    "a",
    "adag",
    "R3a",
    "R3adag",
    "a2",
    "adag2",
    "n",
    "R3a2",
    "R3adag2",
    "R3n",
)

# (index, conjugate-partner index); the remaining moments are real
CONJUGATE_PAIRS = ((1, 2), (3, 4), (5, 6), (8, 9))
REAL_MOMENTS = (0, 7, 10)

# indices of the closed 5-moment subsystem {R3, a, a+, R3a, R3a+}
FIRST_BLOCK = (0, 1, 2, 3, 4)


@dataclass
class MomentVector:
    """Ordered complex expectation values, indexed per MOMENT_NAMES."""

    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (len(MOMENT_NAMES),):
            raise ValueError(f"expected {len(MOMENT_NAMES)} moments, got {self.values.shape}")

    def __getitem__(self, idx: int) -> complex:
        return complex(self.values[idx])

    @property
    def r3(self) -> complex:
        return complex(self.values[0])

    @property
    def a(self) -> complex:
        return complex(self.values[1])

    @property
    def adag(self) -> complex:
        return complex(self.values[2])

    @property
    def r3a(self) -> complex:
        return complex(self.values[3])

    @property
    def r3adag(self) -> complex:
        return complex(self.values[4])

    @property
    def a2(self) -> complex:
        return complex(self.values[5])

    @property
    def adag2(self) -> complex:
        return complex(self.values[6])

    @property
    def n(self) -> complex:
        return complex(self.values[7])

    @property
    def r3a2(self) -> complex:
        return complex(self.values[8])

    @property
    def r3adag2(self) -> complex:
        return complex(self.values[9])

    @property
    def r3n(self) -> complex:
        return complex(self.values[10])

    def conjugation_defect(self) -> float:
        """Largest violation of the conjugate pairing between entries."""
        v = self.values
        defects = [abs(v[i] - np.conj(v[j])) for i, j in CONJUGATE_PAIRS]
        defects += [abs(v[i].imag) for i in REAL_MOMENTS]
        return float(max(defects))


@dataclass
class MomentSystem:
    """Linear generator ``dx/dt = a_matrix x + drive``."""

    a_matrix: np.ndarray
    drive: np.ndarray

    def derivative(self, x: np.ndarray) -> np.ndarray:
        return self.a_matrix @ np.asarray(x, dtype=complex) + self.drive


def assemble(dressed: DressedParams, delta_c: float) -> MomentSystem:
    """Transcribe the coupled moment equations for one parameter point.

    ``cu = i g2^2/(2 Omega)`` multiplies the inversion-dependent cavity
    shift, ``cv = i g1^2/Omega`` the two-photon (sideband) coupling; both
    vanish in secular mode.  Conjugate rows follow from conjugating the
    originals and swapping each moment with its partner.
    """
    g1 = dressed.g1
    k = dressed.kappa
    gam1 = dressed.gamma1
    gam2 = dressed.gamma2
    cu = dressed.coeff_shift  # i g2^2 / (2 Omega)
    cv = dressed.coeff_twophoton  # i g1^2 / Omega
    idc = 1j * delta_c

    a = np.zeros((11, 11), dtype=complex)
    b = np.zeros(11, dtype=complex)

    # <R3>: decoupled relaxation towards -gamma2/gamma1
    a[0, 0] = -gam1
    b[0] = -gam2

    # <a>
    a[1, 1] = idc - 0.5 * k
    a[1, 0] = g1
    a[1, 3] = -cu
    a[1, 4] = -cv

    # <a+> (conjugate of <a>)
    a[2, 2] = -idc - 0.5 * k
    a[2, 0] = g1
    a[2, 4] = cu
    a[2, 3] = cv

    # <R3 a>
    a[3, 3] = idc - gam1 - 0.5 * k
    a[3, 1] = -gam2 - cu
    a[3, 2] = -cv
    b[3] = g1

    # <R3 a+>
    a[4, 4] = -idc - gam1 - 0.5 * k
    a[4, 2] = -gam2 + cu
    a[4, 1] = cv
    b[4] = g1

    # <a^2>
    a[5, 5] = 2.0 * idc - k
    a[5, 0] = -cv
    a[5, 3] = 2.0 * g1
    a[5, 8] = -2.0 * cu
    a[5, 10] = -2.0 * cv

    # <a+^2>
    a[6, 6] = -2.0 * idc - k
    a[6, 0] = cv
    a[6, 4] = 2.0 * g1
    a[6, 9] = 2.0 * cu
    a[6, 10] = 2.0 * cv

    # <a+a>
    a[7, 7] = -k
    a[7, 3] = g1
    a[7, 4] = g1
    a[7, 8] = cv
    a[7, 9] = -cv

    # <R3 a^2>
    a[8, 8] = 2.0 * idc - gam1 - k
    a[8, 1] = 2.0 * g1
    a[8, 5] = -gam2 - 2.0 * cu
    a[8, 7] = -2.0 * cv
    b[8] = -cv

    # <R3 a+^2>
    a[9, 9] = -2.0 * idc - gam1 - k
    a[9, 2] = 2.0 * g1
    a[9, 6] = -gam2 + 2.0 * cu
    a[9, 7] = 2.0 * cv
    b[9] = cv

    # <R3 a+a>
    a[10, 10] = -(gam1 + k)
    a[10, 1] = g1
    a[10, 2] = g1
    a[10, 7] = -gam2
    a[10, 5] = cv
    a[10, 6] = -cv

    return MomentSystem(a_matrix=a, drive=b)


def steady_state(system: MomentSystem) -> MomentVector:
    """Exact steady state from the dense solve ``A x = -b``."""
    try:
        x = lu_solve(system.a_matrix, -system.drive)
    except NumericsError as exc:
        raise NumericsError(f"moment generator is singular (unstable parameter set): {exc}") from exc
    return MomentVector(x)


def evolve(system: MomentSystem, x0: MomentVector, t: float) -> MomentVector:
    """Propagate ``x(t) = x_ss + expm(A t)(x0 - x_ss)`` exactly."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    xss = steady_state(system).values
    prop = expm_action(system.a_matrix, x0.values - xss, t)
    return MomentVector(xss + prop)


def resonant_field_moments(dressed: DressedParams) -> tuple[complex, complex, float]:
    """Reduced steady field moments ``(<a>, <a^2>, <a+a>)`` on resonance.

    Valid for the fully symmetric point delta_c = delta_a = 0, where the
    steady state takes a compact form in ``gamma1``, ``gamma2``, ``kappa``,
    ``g1`` with corrections carried entirely by ``v = g1^2/Omega`` (so the
    secular limit drops them automatically).
    """
    g1 = dressed.g1
    if g1 == 0.0:
        return 0j, 0j, 0.0
    k = dressed.kappa
    gam1 = dressed.gamma1
    gam2 = dressed.gamma2
    v = dressed.coeff_twophoton.imag  # g1^2 / Omega, 0 in secular mode
    d12 = gam1 * gam1 - gam2 * gam2

    a_mean = (
        -2.0
        * g1
        * gam2
        / (gam1 * k)
        * (
            1.0
            + 1j * 4.0 * v * gam1 / (k * gam2)
            - 1j * 8.0 * v * d12 / (k * gam2 * (2.0 * gam1 + k))
        )
    )

    big_u = (gam1 + k) * (2.0 * gam1 + k) * (2.0 * gam1 + 3.0 * k) + (
        4.0 * gam1 + 3.0 * k
    ) * gam2 * gam2
    tail = (
        1.0
        - d12 / (gam1 * (gam1 + k))
        + 32.0
        * g1
        * g1
        / (k * k)
        * (1.0 - big_u * d12 / (gam1 * (gam1 + k) ** 2 * (2.0 * gam1 + k) ** 2))
    )

    a2_mean = (
        4.0 * g1 * g1 / (k * k) * (1.0 - 2.0 * d12 / (gam1 * (2.0 * gam1 + k)))
        + 1j
        * v
        * gam2
        / (k * gam1)
        * (
            1.0
            + 32.0
            * g1
            * g1
            / (k * k)
            * (1.0 - (3.0 * k + 4.0 * gam1) * d12 / ((k + gam1) * (k + 2.0 * gam1) ** 2))
        )
        - 2.0 * v * v / (k * k) * tail
    )

    n_mean = (
        4.0
        * g1
        * g1
        / (k * k)
        * (1.0 - 2.0 * d12 / (gam1 * (2.0 * gam1 + k)) + v * v / (2.0 * g1 * g1) * tail)
    )

    return a_mean, a2_mean, n_mean


def closed_form_steady(dressed: DressedParams, delta_c: float = 0.0) -> MomentVector:
    """Closed-form steady moments at ``delta_c = 0``.

    Transcribed with one named intermediate per coefficient; ``aa`` denotes
    the (real, non-positive) product ``alpha * alpha_prime``.  Requires
    ``gamma2 != 0`` because several coefficients carry it in denominators.
    """
    if delta_c != 0.0:
        raise ValueError("closed-form steady state is only available at delta_c = 0")
    g1 = dressed.g1
    k = dressed.kappa
    gam1 = dressed.gamma1
    gam2 = dressed.gamma2
    al = dressed.alpha
    alp = dressed.alpha_prime
    if gam2 == 0.0:
        raise ValueError("closed form has gamma2 in denominators; use the numeric solve")

    aa = (al * alp).real  # alpha, alpha' are imaginary, so the product is real
    g1sq = g1 * g1
    gam2sq = gam2 * gam2
    d12 = gam1 * gam1 - gam2sq

    f1 = -4.0 * aa * gam1 - 2.0 * gam2 * k * alp + (2.0 * gam1 + k) * (k * gam1 + 2.0 * gam2sq)

    f2 = (
        16.0 * aa**3 * gam1
        - 4.0
        * (3.0 * gam1 * (k + gam1) ** 2 + 2.0 * gam1**3 + (gam2sq - gam1 * gam1) * (k + 5.0 * gam1))
        * aa**2
        + (
            gam1 * k * k * (2.0 * gam1 + k) ** 2
            + 2.0 * (k + gam1) * (k * gam1 + gam2sq) * ((k + gam1) ** 2 + 2.0 * gam2sq - gam1 * gam1)
        )
        * aa
        - k * k * (k + gam1) * (k * gam1 + gam2sq) * (2.0 * gam1 + k) ** 2 / 4.0
    )

    f3 = (
        32.0 * aa**2 * gam1
        - 8.0 * ((k * gam1 + 2.0 * gam2sq) * (2.0 * gam1 + k) + (k + gam1) * (k * gam1 + gam2sq)) * aa
        + (2.0 * gam1 + k) * (gam1 * k + 2.0 * gam2sq) * (2.0 * k * k + 2.0 * k * gam1 + gam2sq)
        + gam2sq * (2.0 * gam1 + k) ** 2 * (gam1 + 2.0 * k)
        - 4.0 * gam2sq * (gam1 + k) * d12
    )

    f4 = (k * (k + gam1) - 4.0 * aa) / gam2 + al + alp

    f5 = (
        -64.0 * aa**3 * gam1
        + 16.0 * ((3.0 * k * gam1 + 2.0 * gam2sq) * (k + gam1) + gam1 * (3.0 * gam2sq + k * gam1)) * aa**2
        - 4.0
        * (
            (k * gam1 + 2.0 * gam2sq) * (2.0 * gam1 + k) * (2.0 * k * gam1 + 2.0 * k * k + gam2sq)
            + gam1 * k * k * (k + gam1) ** 2
        )
        * aa
        + k * k * (2.0 * gam1 + k) * (k * gam1 + 2.0 * gam2sq) * (k + gam1) ** 2
    )

    k1 = ((4.0 * aa - k * (2.0 * gam1 + k)) ** 2 - 16.0 * gam2sq * aa) * gam1

    k2 = (
        256.0 * aa**4
        - 64.0 * (4.0 * k * k + 6.0 * k * gam1 + 5.0 * gam2sq) * aa**3
        + 16.0
        * (
            2.0 * (k * k + 2.0 * k * gam1 + 2.0 * gam2sq) * (2.0 * k * k + 2.0 * k * gam1 + gam2sq)
            + k * k * ((2.0 * gam1 + k) ** 2 + (k + gam1) ** 2)
        )
        * aa**2
        - 4.0
        * k
        * k
        * (
            2.0 * (k * k + 2.0 * k * gam1 + 2.0 * gam2sq) * (gam1 + k) ** 2
            + (2.0 * k * k + 2.0 * k * gam1 + gam2sq) * (k + 2.0 * gam1) ** 2
        )
        * aa
        + k**4 * (k + gam1) ** 2 * (k + 2.0 * gam1) ** 2
    ) * gam1

    k3 = (4.0 * aa - k * (gam1 + k)) ** 2 - 4.0 * gam2sq * aa

    x0 = gam2sq + k * (k + gam1) - 4.0 * aa
    x1 = x0 * (al + alp) / gam2 + k * (k + gam1)
    x2 = -gam2 + 4.0 * al * (al + alp) / gam2
    x3 = (al * al - alp * alp) / gam2 - 8.0 * g1sq * k * gam2 * ((k + 2.0 * gam1) ** 2 - 4.0 * aa) * k3 / k2

    a_mean = -2.0 * g1 * (2.0 * al * f1 + gam2 * k * (2.0 * gam1 + k) ** 2) / k1

    a2_mean = (
        ((-2.0 * (al - alp) * f2 + 8.0 * g1sq * al * f3) * f4 + 4.0 * g1sq * (1.0 - 4.0 * al / gam2) * f5)
        / k2
        - (al - alp) / (2.0 * gam2)
    )

    n_mean = 2.0 * ((al - alp) ** 2 * f2 - 4.0 * g1sq * al * (al - alp) * f3 + 2.0 * g1sq * f5) / k2

    r3n_mean = (
        -2.0 * (al - alp) ** 2 * x0 * f2
        + 8.0 * g1sq * al * (al - alp) * x0 * f3
        - 4.0 * g1sq * (gam2sq + 4.0 * al * (al - alp)) * f5
        - 4.0 * g1sq * k * gam2sq * ((k + 2.0 * gam1) ** 2 - 4.0 * aa) * k3
        - (al - alp) ** 2 * k2 / 2.0
    ) / ((k + gam1) * k2 * gam2)

    r3a_mean = (
        2.0
        * g1
        / k1
        * (
            -4.0 * (k * gam1 + 2.0 * gam2 * al) * aa
            + 2.0 * gam2 * (k * k + 4.0 * gam2sq + 4.0 * k * gam1) * al
            + k * (k * gam1 + 2.0 * gam2sq) * (2.0 * gam1 + k)
        )
    )

    r3a2_mean = (
        2.0
        / (k + gam1)
        * (((al - alp) * x1 * f2 - 4.0 * g1sq * al * x1 * f3 + 2.0 * g1sq * x2 * f5) / k2 + x3 / 4.0)
    )

    values = np.empty(11, dtype=complex)
    values[0] = -gam2 / gam1
    values[1] = a_mean
    values[2] = np.conj(a_mean)
    values[3] = r3a_mean
    values[4] = np.conj(r3a_mean)
    values[5] = a2_mean
    values[6] = np.conj(a2_mean)
    values[7] = n_mean
    values[8] = r3a2_mean
    values[9] = np.conj(r3a2_mean)
    values[10] = r3n_mean
    return MomentVector(values)
