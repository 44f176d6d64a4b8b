"""Hermitian/PSD matrix calculus.

Everything here is a pure function of dense complex numpy arrays. The
spectral decomposition (``numpy.linalg.eigh``) is the single primitive;
square roots, powers and the norms are derived from it or from the SVD.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInput, NotHermitian, NotPSD

# Relative tolerance for accepting an input matrix as Hermitian. Inputs that
# fail are rejected rather than silently symmetrised; only internally built
# Gram forms (Hermitian analytically) get symmetrised to kill roundoff.
HERMITIAN_TOL = 1e-9

# Eigenvalues in [-tol * max_eig, 0) are treated as roundoff and clamped to
# zero; anything below that signals a caller bug and raises NotPSD.
PSD_CLAMP_TOL = 1e-9


def as_complex_matrix(m, name: str = "matrix") -> np.ndarray:
    """Validate and return a finite complex 2-d array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidInput(f"{name} must be a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{name} has non-finite entries")
    return a


def hermitian_part(m: np.ndarray) -> np.ndarray:
    """(M + M*) / 2."""
    return 0.5 * (m + m.conj().T)


def require_hermitian(m, tol: float = HERMITIAN_TOL, name: str = "matrix") -> np.ndarray:
    """Reject matrices that are not Hermitian within ``tol`` (relative).

    Returns the exactly symmetrised form of an accepted input.
    """
    a = as_complex_matrix(m, name)
    if a.shape[0] != a.shape[1]:
        raise NotHermitian(f"{name} must be square, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max()))
    dev = float(np.abs(a - a.conj().T).max())
    if dev > tol * scale:
        raise NotHermitian(f"{name} deviates from Hermitian by {dev:.3e} (tol {tol * scale:.3e})")
    return hermitian_part(a)


def require_psd(m, name: str = "matrix") -> np.ndarray:
    """Hermitian check plus a PSD spectrum check with the clamping rule."""
    a = require_hermitian(m, name=name)
    w = np.linalg.eigvalsh(a)
    floor = -PSD_CLAMP_TOL * max(float(w[-1]), 0.0)
    if float(w[0]) < floor:
        raise NotPSD(f"{name} has eigenvalue {float(w[0]):.6e} below the PSD tolerance")
    return a


def eig_hermitian(m) -> tuple[np.ndarray, np.ndarray]:
    """Spectral decomposition of a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` sorted non-increasing and
    orthonormal eigenvector columns ``v``, so ``m = v @ diag(w) @ v.conj().T``.
    """
    a = require_hermitian(m)
    w, v = np.linalg.eigh(a)
    return w[::-1].copy(), v[:, ::-1].copy()


def _clamped_psd_eig(a: np.ndarray, name: str) -> tuple[np.ndarray, np.ndarray]:
    w, v = np.linalg.eigh(a)
    floor = -PSD_CLAMP_TOL * max(float(w[-1]), 0.0)
    if float(w[0]) < floor:
        raise NotPSD(f"{name} has eigenvalue {float(w[0]):.6e} below the PSD tolerance")
    return np.clip(w, 0.0, None), v


def psd_sqrt(x, name: str = "matrix") -> np.ndarray:
    """Positive semidefinite square root via the spectral decomposition."""
    a = require_hermitian(x, name=name)
    w, v = _clamped_psd_eig(a, name)
    return hermitian_part((v * np.sqrt(w)) @ v.conj().T)


def psd_power(x, p: float, name: str = "matrix") -> np.ndarray:
    """``x ** p`` for PSD ``x``; negative powers require positive definite."""
    a = require_hermitian(x, name=name)
    w, v = _clamped_psd_eig(a, name)
    if p < 0 and float(w[0]) <= 0.0:
        raise NotPSD(f"{name} is singular, cannot raise to power {p}")
    return hermitian_part((v * np.power(w, p)) @ v.conj().T)


def trace_norm(m) -> float:
    """Sum of singular values (Schatten-1 norm)."""
    a = as_complex_matrix(m)
    return float(np.linalg.svd(a, compute_uv=False).sum())


def spectral_norm(m) -> float:
    """Largest singular value (operator norm)."""
    a = as_complex_matrix(m)
    return float(np.linalg.svd(a, compute_uv=False)[0])


def unit_vector(v, name: str = "vector") -> np.ndarray:
    """Flatten, validate and normalise a nonzero complex vector."""
    a = np.asarray(v, dtype=complex).reshape(-1)
    if a.size < 1:
        raise InvalidInput(f"{name} is empty")
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{name} has non-finite entries")
    nrm = float(np.linalg.norm(a))
    if nrm == 0.0:
        raise InvalidInput(f"{name} is the zero vector")
    if abs(nrm - 1.0) <= 1e-12:
        return a
    return a / nrm


def expm_i_hermitian(h) -> np.ndarray:
    """exp(i*H) for Hermitian H, a unitary, via the spectral decomposition."""
    a = require_hermitian(h, name="exponent")
    w, v = np.linalg.eigh(a)
    return (v * np.exp(1j * w)) @ v.conj().T


def polar_unitary(m) -> np.ndarray:
    """Unitary polar factor W Z* from the SVD M = W diag(s) Z*."""
    u, _, vh = np.linalg.svd(np.asarray(m, dtype=complex))
    return u @ vh
