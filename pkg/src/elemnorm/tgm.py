"""The tracial geometric mean of positive semidefinite matrices.

For PSD matrices X, Y of equal size,

    tgm(X, Y) = trace sqrt( sqrt(X) Y sqrt(X) ) = sum_i sqrt(lambda_i(XY)),

where lambda_i(XY) are the (nonnegative) eigenvalues of the product XY.
The mean is symmetric, monotone in both arguments, concave in each, and
dominates the trace of the Riccati geometric mean

    X # Y = sqrt(X) (X^{-1/2} Y X^{-1/2})^{1/2} sqrt(X),

with strict inequality possible. The evaluation route is the Hermitian one:
form sqrt(X), diagonalise sqrt(X) Y sqrt(X), clamp roundoff negatives at
zero, and sum the square roots. This avoids a non-Hermitian eigenproblem on
XY while producing the same spectrum.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    DimMismatch,
    IllConditioned,
    InvalidProjection,
    SingularBase,
    ToleranceViolation,
)
from .linalg import (
    as_complex_matrix,
    hermitian_part,
    psd_power,
    psd_sqrt,
    require_psd,
)

# Relative eigenvalue ratio below which the base of the # mean counts as
# singular and the regularisation policy kicks in.
SHARP_SINGULAR_REL = 1e-12

# Condition-number ceiling for the congruence transform check.
TRANSFORM_COND_MAX = 1e12


def _sqrt_clamped(q: np.ndarray) -> np.ndarray:
    # Internal square root for matrices that are PSD by construction:
    # clamp roundoff negatives, skip the validation pass.
    w, v = np.linalg.eigh(hermitian_part(q))
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def tgm_psd(x: np.ndarray, y: np.ndarray) -> float:
    """tgm for matrices already known to be PSD (no validation pass)."""
    r = _sqrt_clamped(x)
    s = hermitian_part(r @ y @ r)
    w = np.linalg.eigvalsh(s)
    return float(np.sqrt(np.clip(w, 0.0, None)).sum())


def tgm(x, y) -> float:
    """Tracial geometric mean trace sqrt(sqrt(X) Y sqrt(X)) of PSD X, Y."""
    a = require_psd(x, name="x")
    b = require_psd(y, name="y")
    if a.shape != b.shape:
        raise DimMismatch(f"tgm needs equal dims, got {a.shape} and {b.shape}")
    return tgm_psd(a, b)


def sharp_mean(x, y, return_reg: bool = False):
    """Riccati geometric mean X # Y = sqrt(X) (X^{-1/2} Y X^{-1/2})^{1/2} sqrt(X).

    Defined for positive definite X and extended by continuity. A singular X
    is regularised as X + eps*I with eps = 1e-10 * trace(X) / dim; the eps
    actually used is returned alongside the mean when ``return_reg`` is set,
    so the regularisation is visible to the caller rather than hidden.
    """
    a = require_psd(x, name="x")
    b = require_psd(y, name="y")
    if a.shape != b.shape:
        raise DimMismatch(f"sharp_mean needs equal dims, got {a.shape} and {b.shape}")
    dim = a.shape[0]
    w = np.linalg.eigvalsh(a)
    eps = 0.0
    if float(w[0]) <= SHARP_SINGULAR_REL * max(float(w[-1]), 0.0):
        eps = 1e-10 * float(np.trace(a).real) / dim
        if eps <= 0.0:
            raise SingularBase("base matrix is zero; no regularisation possible")
        a = a + eps * np.eye(dim)
    rx = psd_sqrt(a, name="x")
    rxi = psd_power(a, -0.5, name="x")
    inner = _sqrt_clamped(rxi @ b @ rxi)
    res = hermitian_part(rx @ inner @ rx)
    return (res, eps) if return_reg else res


def pinch(x, p) -> np.ndarray:
    """Pinching P X P + (I-P) X (I-P) for an orthogonal projection P."""
    a = require_psd(x, name="x")
    pr = as_complex_matrix(p, "projection")
    if pr.shape != a.shape:
        raise DimMismatch(f"projection shape {pr.shape} does not match {a.shape}")
    scale = max(1.0, float(np.abs(pr).max()))
    if float(np.abs(pr @ pr - pr).max()) > 1e-9 * scale:
        raise InvalidProjection("matrix is not idempotent")
    if float(np.abs(pr - pr.conj().T).max()) > 1e-9 * scale:
        raise InvalidProjection("matrix is not self-adjoint")
    q = np.eye(a.shape[0]) - pr
    return hermitian_part(pr @ a @ pr + q @ a @ q)


def tgm_transform_check(x, y, alpha) -> tuple[float, float]:
    """Evaluate both sides of tgm(a* X a, a^{-1} Y a^{-*}) = tgm(X, Y).

    Returns (lhs, rhs) and enforces their agreement within
    1e-7 * (1 + rhs) * cond(alpha). A numerically singular alpha
    (condition number beyond 1e12) raises IllConditioned.
    """
    a = require_psd(x, name="x")
    b = require_psd(y, name="y")
    al = as_complex_matrix(alpha, "alpha")
    if a.shape != b.shape or al.shape != a.shape:
        raise DimMismatch("x, y and alpha must share one square shape")
    cond = float(np.linalg.cond(al))
    if not np.isfinite(cond) or cond > TRANSFORM_COND_MAX:
        raise IllConditioned(f"alpha has condition number {cond:.3e}")
    ai = np.linalg.inv(al)
    lhs = tgm_psd(hermitian_part(al.conj().T @ a @ al), hermitian_part(ai @ b @ ai.conj().T))
    rhs = tgm_psd(a, b)
    if abs(lhs - rhs) > 1e-7 * (1.0 + rhs) * cond:
        raise ToleranceViolation(
            f"transform invariance violated: lhs={lhs!r} rhs={rhs!r} cond={cond:.3e}"
        )
    return lhs, rhs
