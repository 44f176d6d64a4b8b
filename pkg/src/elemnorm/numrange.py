"""Gram forms of coefficient tuples and matrix-numerical-range extremals.

A coefficient tuple is an array of shape (l, n, n): l matrices acting on
C^n. For a column tuple b and a unit vector eta the Gram form is

    Q(b, eta)[i, j] = <b_j eta, b_i eta>,

the Gram matrix of the vectors b_j eta (so PSD by construction); replacing
the vector state by a density matrix rho gives Q(b, rho)[i, j] =
trace(rho b_i* b_j). The trace of Q(b, eta) is maximal exactly on the top
eigenspace of sum_j b_j* b_j, which is where the extremal numerical range
lives at finite dimension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, InvalidInput, InvalidState
from .linalg import hermitian_part, unit_vector
from .optimizer import OptimizerConfig, OptimizerResult, maximize_sphere_pair

# Membership in the maximal-trace eigenspace, relative to the top eigenvalue.
EIGENGAP_TOL = 1e-8

# Rank threshold on the accumulated Gram witness for linear independence.
INDEP_TOL = 1e-10


def as_coefficient_tuple(mats, name: str = "tuple") -> np.ndarray:
    """Validate an (l, n, n) stack of complex matrices."""
    arr = np.asarray(mats, dtype=complex)
    if arr.ndim != 3:
        raise InvalidInput(f"{name} must be a stack of matrices, got shape {arr.shape}")
    l, n, n2 = arr.shape
    if l < 1 or n < 1 or n != n2:
        raise InvalidInput(f"{name} members must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} has non-finite entries")
    return arr


def adjoint_tuple(a) -> np.ndarray:
    """Entrywise adjoint: the column tuple a* from a row tuple a."""
    arr = as_coefficient_tuple(a)
    return np.conj(np.transpose(arr, (0, 2, 1)))


def gram_block(b) -> np.ndarray:
    """The full l*n-by-l*n block matrix with (i, j) block b_i* b_j."""
    arr = as_coefficient_tuple(b)
    l, n, _ = arr.shape
    row = arr.transpose(1, 0, 2).reshape(n, l * n)
    return hermitian_part(row.conj().T @ row)


def gram_at_vector(b, eta) -> np.ndarray:
    """Q(b, eta): the l-by-l Gram matrix of the vectors b_j eta."""
    arr = as_coefficient_tuple(b)
    v = unit_vector(eta, "eta")
    if v.size != arr.shape[1]:
        raise DimMismatch(f"vector has dim {v.size}, tuple acts on C^{arr.shape[1]}")
    rows = arr @ v  # row j = b_j eta
    return hermitian_part(rows.conj() @ rows.T)


def validate_density(rho, rank_bound: int | None = None) -> np.ndarray:
    """Check density-matrix invariants; returns the symmetrised matrix."""
    a = np.asarray(rho, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidState(f"density matrix must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidState("density matrix has non-finite entries")
    scale = max(1.0, float(np.abs(a).max()))
    if float(np.abs(a - a.conj().T).max()) > 1e-9 * scale:
        raise InvalidState("density matrix is not Hermitian")
    a = hermitian_part(a)
    tr = float(np.trace(a).real)
    if abs(tr - 1.0) > 1e-10:
        raise InvalidState(f"density matrix has trace {tr!r}, expected 1")
    w = np.linalg.eigvalsh(a)
    if float(w[0]) < -1e-10:
        raise InvalidState(f"density matrix has eigenvalue {float(w[0]):.3e} < 0")
    if rank_bound is not None:
        rank = int(np.count_nonzero(w > 1e-10))
        if rank > rank_bound:
            raise InvalidState(f"density matrix has rank {rank} > bound {rank_bound}")
    return a


def gram_at_state(b, rho, rank_bound: int | None = None) -> np.ndarray:
    """Q(b, rho)[i, j] = trace(rho b_i* b_j) for a density matrix rho.

    Computed as the Gram matrix of the Hilbert-Schmidt vectors b_j rho^{1/2},
    which makes positivity automatic; reduces to ``gram_at_vector`` when
    rho is the rank-one projection onto eta.
    """
    arr = as_coefficient_tuple(b)
    a = validate_density(rho, rank_bound)
    if a.shape[0] != arr.shape[1]:
        raise DimMismatch(f"state has dim {a.shape[0]}, tuple acts on C^{arr.shape[1]}")
    w, v = np.linalg.eigh(a)
    s = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    rows = (arr @ s).reshape(arr.shape[0], -1)  # row j = vec(b_j rho^{1/2})
    return hermitian_part(rows.conj() @ rows.T)


def extremal_range_basis(b) -> tuple[float, np.ndarray]:
    """Maximal trace of Q(b, .) and an orthonormal basis of its eigenspace.

    The maximal trace equals the top eigenvalue of sum_j b_j* b_j; the basis
    spans the eigenvectors within EIGENGAP_TOL (relative) of it. At finite
    dimension the extremal numerical range is the image of this subspace.
    """
    arr = as_coefficient_tuple(b)
    s = hermitian_part(np.einsum("jki,jkl->il", arr.conj(), arr))
    w, v = np.linalg.eigh(s)
    top = float(w[-1])
    keep = w >= top - EIGENGAP_TOL * max(top, 1e-300)
    return top, v[:, keep]


def linearly_independent(b) -> tuple[bool, np.ndarray]:
    """Linear independence of the tuple via an accumulated Gram witness.

    Sums Q(b, e_k) over the standard basis vectors; the accumulated matrix
    is the Hilbert-Schmidt Gram matrix trace(b_i* b_j), positive definite
    exactly when the b_j are linearly independent.
    """
    arr = as_coefficient_tuple(b)
    l, n, _ = arr.shape
    m = np.zeros((l, l), dtype=complex)
    for k in range(n):
        e = np.zeros(n, dtype=complex)
        e[k] = 1.0
        rows = arr @ e
        m += rows.conj() @ rows.T
    m = hermitian_part(m)
    w = np.linalg.eigvalsh(m)
    independent = bool(float(w[0]) > INDEP_TOL * max(float(w[-1]), 0.0))
    return independent, m


@dataclass
class GapReport:
    """Distance estimate between the extremal Gram sets of two tuples."""
    gap: float
    optimizer: OptimizerResult


def haagerup_equality_gap(a, b, cfg: OptimizerConfig | None = None) -> GapReport:
    """Estimate inf |Q(a*, xi) - Q(b, eta)|_F over the extremal subspaces.

    A gap near zero is evidence that the extremal numerical ranges of a* and
    b intersect, the known criterion for equality in the Haagerup estimate
    |T| <= |a||b|. This is a nonconvex multistart minimisation: the value is
    an upper bound on the true infimum and comes with optimizer diagnostics,
    never a certified statement that the sets do not meet.
    """
    ta = as_coefficient_tuple(a, "a")
    tb = as_coefficient_tuple(b, "b")
    if ta.shape[0] != tb.shape[0]:
        raise DimMismatch("tuples have different lengths")
    if ta.shape[1] != tb.shape[1]:
        raise DimMismatch("tuples act on different spaces")
    cfg = cfg or OptimizerConfig()
    a_star = adjoint_tuple(ta)
    _, basis_a = extremal_range_basis(a_star)
    _, basis_b = extremal_range_basis(tb)
    ca = a_star @ basis_a  # (l, n, ma): columns of a_j* restricted to the subspace
    cb = tb @ basis_b

    def grams(point):
        u, v = point
        ru = ca @ u  # row j = a_j* (Ba u)
        rv = cb @ v
        qa = hermitian_part(ru.conj() @ ru.T)
        qb = hermitian_part(rv.conj() @ rv.T)
        return ru, rv, qa, qb

    def f(point):
        _, _, qa, qb = grams(point)
        d = qa - qb
        return -float(np.vdot(d, d).real)

    def fgrad(point):
        ru, rv, qa, qb = grams(point)
        d = qa - qb
        val = -float(np.vdot(d, d).real)
        # grad wrt the stacked columns U of a_j*(Ba u): 4 U D for |U*U - S|^2
        gu_cols = 4.0 * (ru.T @ d)          # (n, l), column j
        gv_cols = -4.0 * (rv.T @ d)
        gu = -np.einsum("jnm,nj->m", ca.conj(), gu_cols)
        gv = -np.einsum("jnm,nj->m", cb.conj(), gv_cols)
        return val, (gu, gv)

    res = maximize_sphere_pair(f, (basis_a.shape[1], basis_b.shape[1]), cfg, fgrad=fgrad)
    gap = float(np.sqrt(max(0.0, -res.best_value)))
    return GapReport(gap=gap, optimizer=res)
