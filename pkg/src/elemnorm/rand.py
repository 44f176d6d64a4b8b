"""Deterministic random generation.

Every stream is a Philox (counter-based) generator keyed by an integer seed
plus an arbitrary tuple of stream indices, so independent draws can be made
concurrently and still reproduce bit-for-bit for a fixed seed.
"""

from __future__ import annotations

import numpy as np


def rng_for(seed: int, *key: int) -> np.random.Generator:
    """Philox generator for stream ``key`` under ``seed``."""
    ss = np.random.SeedSequence(
        entropy=int(seed) & (2**64 - 1),
        spawn_key=tuple(int(k) for k in key),
    )
    return np.random.Generator(np.random.Philox(ss))


def random_complex(rng: np.random.Generator, *shape: int) -> np.ndarray:
    """Standard complex Gaussian entries (unit total variance per entry)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_unit(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform point on the complex unit sphere in C^n."""
    v = random_complex(rng, n)
    nrm = float(np.linalg.norm(v))
    if nrm == 0.0:  # probability zero, but keep the contract
        v = np.zeros(n, dtype=complex)
        v[0] = 1.0
        return v
    return v / nrm


def random_psd(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    """Random PSD matrix G G* with G of shape (dim, rank)."""
    r = dim if rank is None else max(1, min(rank, dim))
    g = random_complex(rng, dim, r)
    x = g @ g.conj().T
    return 0.5 * (x + x.conj().T)


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    a = random_complex(rng, n, n)
    return 0.5 * (a + a.conj().T)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-ish unitary from the QR decomposition with phase fixing."""
    q, r = np.linalg.qr(random_complex(rng, n, n))
    d = np.diagonal(r)
    ph = d / np.abs(np.where(d == 0, 1.0, d))
    return q * ph


def random_conditioned(rng: np.random.Generator, n: int, cond: float = 10.0) -> np.ndarray:
    """Invertible matrix with condition number at most ``cond``."""
    u = random_unitary(rng, n)
    v = random_unitary(rng, n)
    if n == 1:
        s = np.ones(1)
    else:
        s = np.exp(np.linspace(0.0, np.log(cond), n))
        rng.shuffle(s)
    return (u * s) @ v
