"""Physical parameters and dressed-frame quantities.

A two-level emitter is driven by a strong classical field (resonant Rabi
frequency ``epsilon``, detuning ``delta_a``) and coupled with strength ``g``
to a single damped cavity mode (rate ``kappa``, detuning ``delta_c``).
Spontaneous emission (rate ``gamma``) goes into a frequency-filtered
reservoir whose transmission ``|D(w)|^2`` is sampled at the carrier and at
the two sidebands ``wL +- 2*Omega`` of the doublet splitting
``Omega = sqrt(4 epsilon^2 + delta_a^2)``.

Everything downstream works in the doublet ("dressed") frame, where the
dynamics is fixed by a handful of derived quantities:

* effective couplings ``g1 = g s c`` and ``g2 = g sqrt(s^4 + c^4)``,
* filtered decay rates ``gamma0``, ``gamma_plus``, ``gamma_minus``,
* inversion rates ``gamma1 = gamma_plus + gamma_minus`` and
  ``gamma2 = gamma_plus - gamma_minus``,
* the two purely imaginary coefficients ``alpha = i g^2 / (2 Omega)`` and
  ``alpha_prime = i g^2 (s^2 - c^2)^2 / (2 Omega)`` that carry every
  beyond-rotating-wave (non-secular) term.  Secular mode zeroes both.

All rates and frequencies are dimensionless, expressed in units of the
free-space emission rate ``gamma`` (which therefore defaults to 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

__all__ = [
    "SystemParams",
    "ReservoirProfile",
    "DressedParams",
    "band_edge_profile",
    "derive_dressed",
    "dressed_from_rates",
]


class ModelError(ValueError):
    """Raised for physically inadmissible parameter sets."""


@dataclass(frozen=True)
class SystemParams:
    """Raw inputs, in units of the free-space rate gamma.

    gamma    : spontaneous emission rate (the unit; keep at 1 unless scaling)
    gamma_p  : pure dephasing rate
    kappa    : cavity field damping rate
    g        : emitter-cavity coupling
    epsilon  : resonant Rabi frequency of the drive
    delta_a  : emitter-drive detuning  (w_a - w_L)
    delta_c  : cavity-drive detuning   (w_c - w_L)
    """

    gamma: float = 1.0
    gamma_p: float = 0.0
    kappa: float = 1.0
    g: float = 0.0
    epsilon: float = 0.0
    delta_a: float = 0.0
    delta_c: float = 0.0

    def __post_init__(self) -> None:
        if self.gamma < 0:
            raise ModelError(f"gamma must be >= 0, got {self.gamma}")
        if self.gamma_p < 0:
            raise ModelError(f"gamma_p must be >= 0, got {self.gamma_p}")
        if self.kappa <= 0:
            raise ModelError(f"kappa must be > 0, got {self.kappa}")
        if self.g < 0:
            raise ModelError(f"g must be >= 0, got {self.g}")

    @property
    def omega(self) -> float:
        """Generalized Rabi frequency sqrt(4 eps^2 + delta_a^2)."""
        return math.hypot(2.0 * self.epsilon, self.delta_a)


@dataclass(frozen=True)
class ReservoirProfile:
    """Reservoir transmission |D|^2 sampled at the three emission lines.

    d2_central : |D(wL)|^2
    d2_upper   : |D(wL + 2 Omega)|^2
    d2_lower   : |D(wL - 2 Omega)|^2

    A hard band edge gives exactly 0 or 1; fractional values in [0, 1] are
    accepted so that small residual transmissions (e.g. 1e-4) can be modeled.
    """

    d2_central: float = 1.0
    d2_upper: float = 1.0
    d2_lower: float = 1.0

    def __post_init__(self) -> None:
        for name in ("d2_central", "d2_upper", "d2_lower"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ModelError(f"{name} must lie in [0, 1], got {val}")


def band_edge_profile(omega_b_offset: float, omega: float) -> ReservoirProfile:
    """Step-function reservoir: transmission 0 below the band edge, 1 above.

    ``omega_b_offset`` is the band-edge frequency relative to the drive
    frequency wL; the three sampled lines sit at offsets 0 and +-2*omega.
    """

    def step(line_offset: float) -> float:
        return 0.0 if line_offset < omega_b_offset else 1.0

    return ReservoirProfile(
        d2_central=step(0.0),
        d2_upper=step(2.0 * omega),
        d2_lower=step(-2.0 * omega),
    )


@dataclass(frozen=True)
class DressedParams:
    """Derived dressed-frame quantities consumed by all solvers.

    The cavity rate ``kappa`` rides along so that downstream code needs no
    second parameter object.  ``alpha`` and ``alpha_prime`` are purely
    imaginary; both vanish in secular mode, which removes every 1/Omega
    coefficient from the dynamics.
    """

    omega: float
    kappa: float
    phi: float
    s: float
    c: float
    g1: float
    g2: float
    gamma0: float
    gamma_plus: float
    gamma_minus: float
    gamma1: float
    gamma2: float
    alpha: complex
    alpha_prime: complex

    @property
    def secular(self) -> bool:
        return self.alpha == 0 and self.alpha_prime == 0

    @property
    def coeff_shift(self) -> complex:
        """(alpha + alpha_prime)/2 = i g2^2 / (2 Omega): dispersive shift."""
        return 0.5 * (self.alpha + self.alpha_prime)

    @property
    def coeff_twophoton(self) -> complex:
        """(alpha - alpha_prime)/2 = i g1^2 / Omega: two-photon coupling."""
        return 0.5 * (self.alpha - self.alpha_prime)

    @property
    def r3_steady(self) -> float:
        """Steady inversion -gamma2/gamma1 of the doublet populations."""
        return -self.gamma2 / self.gamma1


def _dressing_angle(delta_a: float, omega: float) -> tuple[float, float, float]:
    c2 = 0.5 * (1.0 + delta_a / omega)
    # guard rounding at |delta_a| = omega
    c2 = min(1.0, max(0.0, c2))
    c = math.sqrt(c2)
    s = math.sqrt(1.0 - c2)
    return math.atan2(s, c), s, c


def derive_dressed(
    params: SystemParams,
    reservoir: ReservoirProfile | None = None,
    secular: bool = False,
) -> DressedParams:
    """Map raw parameters + reservoir transmissions to dressed-frame rates.

    Raises ModelError for an undriven emitter (omega == 0), where the
    doublet frame is undefined.
    """
    if reservoir is None:
        reservoir = ReservoirProfile()
    omega = params.omega
    if omega <= 0.0:
        raise ModelError("undriven emitter: omega = 0 leaves the dressed frame undefined")

    phi, s, c = _dressing_angle(params.delta_a, omega)
    s2, c2 = s * s, c * c

    gamma0 = s2 * c2 * params.gamma * reservoir.d2_central + (c2 - s2) * params.gamma_p
    gamma_minus = s2 * s2 * params.gamma * reservoir.d2_lower + 4.0 * s2 * c2 * params.gamma_p
    gamma_plus = c2 * c2 * params.gamma * reservoir.d2_upper + 4.0 * s2 * c2 * params.gamma_p

    return _finish(params, omega, phi, s, c, gamma0, gamma_plus, gamma_minus, secular)


def dressed_from_rates(
    params: SystemParams,
    gamma_plus: float,
    gamma_minus: float,
    d2_central: float = 1.0,
    secular: bool = False,
) -> DressedParams:
    """Dressed parameters with the sideband rates imposed directly.

    Figure captions quote the sideband rates themselves; this constructor
    takes them at face value instead of reverse-engineering transmissions.
    ``d2_central`` still fixes gamma0 (it never enters the moment flow, only
    the density-matrix generator).
    """
    omega = params.omega
    if omega <= 0.0:
        raise ModelError("undriven emitter: omega = 0 leaves the dressed frame undefined")
    if gamma_plus < 0 or gamma_minus < 0:
        raise ModelError("sideband rates must be >= 0")

    phi, s, c = _dressing_angle(params.delta_a, omega)
    s2, c2 = s * s, c * c
    gamma0 = s2 * c2 * params.gamma * d2_central + (c2 - s2) * params.gamma_p
    return _finish(params, omega, phi, s, c, gamma0, gamma_plus, gamma_minus, secular)


def _finish(
    params: SystemParams,
    omega: float,
    phi: float,
    s: float,
    c: float,
    gamma0: float,
    gamma_plus: float,
    gamma_minus: float,
    secular: bool,
) -> DressedParams:
    g = params.g
    s2, c2 = s * s, c * c
    g1 = g * s * c
    g2 = g * math.sqrt(s2 * s2 + c2 * c2)
    alpha = 1j * g * g / (2.0 * omega)
    alpha_prime = 1j * g * g * (s2 - c2) ** 2 / (2.0 * omega)
    if secular:
        alpha = 0j
        alpha_prime = 0j
    return DressedParams(
        omega=omega,
        kappa=params.kappa,
        phi=phi,
        s=s,
        c=c,
        g1=g1,
        g2=g2,
        gamma0=gamma0,
        gamma_plus=gamma_plus,
        gamma_minus=gamma_minus,
        gamma1=gamma_plus + gamma_minus,
        gamma2=gamma_plus - gamma_minus,
        alpha=alpha,
        alpha_prime=alpha_prime,
    )


def secular_variant(dressed: DressedParams) -> DressedParams:
    """Same parameter point with every 1/Omega coefficient removed."""
    return replace(dressed, alpha=0j, alpha_prime=0j)
