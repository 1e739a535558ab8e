"""Dense complex linear-algebra kernels shared by the solver modules.

Thin wrappers over LAPACK via numpy/scipy: LU solves with partial pivoting
and an optional condition estimate, a trace-constrained nullvector solve for
generator steady states, matrix-exponential propagation, and composite
trapezoidal quadrature.  All kernels are deterministic.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

__all__ = [
    "NumericsError",
    "lu_solve",
    "condition_estimate",
    "constrained_nullvector",
    "expm_action",
    "trapezoid",
    "richardson_trapezoid",
]


class NumericsError(RuntimeError):
    """Raised when a kernel cannot meet its contract (singularity, rank)."""


def _as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise NumericsError(f"expected a matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise NumericsError("matrix contains non-finite entries")
    return a


def lu_solve(a, b, return_cond: bool = False):
    """Solve ``a x = b`` by LU with partial pivoting.

    With ``return_cond=True`` also returns the 1-norm condition number of
    ``a`` so callers can assert well-conditioning.
    """
    a = _as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise NumericsError(f"matrix must be square, got {a.shape}")
    b = np.asarray(b, dtype=complex)
    try:
        lu, piv = scipy.linalg.lu_factor(a)
    except scipy.linalg.LinAlgError as exc:
        raise NumericsError(f"singular matrix: {exc}") from exc
    if np.any(np.abs(np.diag(lu)) == 0.0):
        raise NumericsError("matrix is singular to working precision")
    x = scipy.linalg.lu_solve((lu, piv), b)
    if return_cond:
        return x, condition_estimate(a)
    return x


def condition_estimate(a) -> float:
    """1-norm condition number (exact for the dense sizes used here)."""
    a = _as_matrix(a)
    return float(np.linalg.cond(a, 1))


def constrained_nullvector(a, constraint_row, constraint_value=1.0, rtol: float = 1e-8):
    """Solve ``a x = 0`` subject to ``constraint_row . x = constraint_value``.

    The first matrix row is replaced by the constraint; the result is
    accepted only if the replaced row's own equation is also satisfied, which
    fails exactly when the nullspace is empty or has dimension > 1.
    """
    a = _as_matrix(a)
    n = a.shape[0]
    row = np.asarray(constraint_row, dtype=complex)
    if row.shape != (n,):
        raise NumericsError(f"constraint row has shape {row.shape}, expected ({n},)")

    system = a.copy()
    system[0, :] = row
    rhs = np.zeros(n, dtype=complex)
    rhs[0] = constraint_value
    x = lu_solve(system, rhs)

    residual = np.linalg.norm(a @ x, np.inf)
    scale = np.linalg.norm(a, np.inf) * max(np.linalg.norm(x, np.inf), 1e-300)
    if residual > rtol * scale:
        raise NumericsError(
            "nullspace solve failed: residual "
            f"{residual:.3e} exceeds {rtol:.1e} * {scale:.3e} "
            "(no nullvector, or nullspace dimension != 1)"
        )
    return x


def expm_action(a, x, t: float):
    """Return ``expm(a t) x`` (scaling-and-squaring Pade via scipy).

    ``t`` must be >= 0; the problem sizes here are small enough that forming
    the full exponential is the most robust route.
    """
    if t < 0:
        raise NumericsError(f"propagation time must be >= 0, got {t}")
    a = _as_matrix(a)
    x = np.asarray(x, dtype=complex)
    if t == 0.0:
        return x.copy()
    return scipy.linalg.expm(a * t) @ x


def trapezoid(values, spacing: float) -> float:
    """Composite trapezoidal rule on a uniformly spaced sample set."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size < 2:
        raise NumericsError("need a 1-d array with at least two samples")
    if spacing <= 0:
        raise NumericsError(f"spacing must be > 0, got {spacing}")
    return float(np.trapezoid(values, dx=spacing))


def richardson_trapezoid(values, spacing: float) -> tuple[float, float]:
    """Trapezoid integral plus a Richardson error estimate.

    Compares the full-resolution rule with the every-other-point rule and
    extrapolates the h^2 error away.  Returns ``(refined, error_estimate)``
    where the estimate is the difference between refined and unrefined.
    The sample count must be odd so the coarse grid shares both endpoints.
    """
    values = np.asarray(values, dtype=float)
    if values.size < 3 or values.size % 2 == 0:
        raise NumericsError("Richardson refinement needs an odd sample count >= 3")
    fine = trapezoid(values, spacing)
    coarse = trapezoid(values[::2], 2.0 * spacing)
    refined = (4.0 * fine - coarse) / 3.0
    return refined, abs(refined - fine)
