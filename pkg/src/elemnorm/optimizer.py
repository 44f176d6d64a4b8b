"""Multistart ascent over unit spheres, unitaries and density factors.

One engine drives every domain: a monotone projected-gradient ascent with a
step-halving line search, restarted from independent random points. Each
restart draws its start from a Philox stream keyed by (seed, restart index),
and restarts are reduced in index order, so results are bit-identical for a
fixed seed whether or not the restarts run on a thread pool.

Objectives may supply ``fgrad(point) -> (value, grads)`` with ambient
(unprojected) gradients; the engine projects onto the domain tangent space
and retracts. Without ``fgrad`` a central-difference gradient of ``f`` is
used, which is fine for tests and small dimensions.

No global optimality is claimed. ``converged_fraction`` reports how many
restarts reached the best value (within ``value_tol`` relative), so callers
can decide whether to raise ``restarts``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput
from .linalg import polar_unitary
from .rand import random_complex, random_unit, rng_for

_ARMIJO = 1e-4
_STEP_GROW = 2.0


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 64
    max_iters: int = 500
    step_init: float = 0.5
    step_min: float = 1e-12
    value_tol: float = 1e-6
    seed: int = 0
    parallel: bool = False
    threads: int | None = None
    debug: bool = False

    def __post_init__(self):
        if self.restarts < 1:
            raise InvalidInput("restarts must be >= 1")
        if not self.step_min < self.step_init:
            raise InvalidInput("step_min must be smaller than step_init")
        if not self.value_tol > 0:
            raise InvalidInput("value_tol must be positive")


@dataclass
class OptimizerResult:
    best_value: float
    best_point: tuple | None
    per_restart_values: list
    converged_fraction: float
    best_converged: bool = False
    per_restart_points: list | None = None
    discarded: int = 0
    traces: list | None = None


def _block_norm(blocks) -> float:
    return float(np.sqrt(sum(float(np.vdot(b, b).real) for b in blocks)))


def _numeric_fgrad(f, h: float = 1e-7):
    def fg(point):
        base = f(point)
        grads = []
        for bi, block in enumerate(point):
            g = np.zeros_like(np.asarray(block), dtype=complex)
            gflat = g.reshape(-1)
            src = np.asarray(block).reshape(-1)
            for i in range(src.size):
                for unit in (1.0, 1j):
                    plus = tuple(p.copy() for p in point)
                    minus = tuple(p.copy() for p in point)
                    plus[bi].reshape(-1)[i] = src[i] + unit * h
                    minus[bi].reshape(-1)[i] = src[i] - unit * h
                    d = (f(plus) - f(minus)) / (2.0 * h)
                    gflat[i] += unit * d
            grads.append(g)
        return base, tuple(grads)

    return fg


def _ascend(point, value, f, fgrad, tangent, retract, cfg: OptimizerConfig):
    """Monotone line-search ascent from one start.

    Returns (point, value, converged, trace); ``converged`` means the ascent
    stalled (vanishing tangent gradient or exhausted step) rather than
    hitting the iteration cap. The ``value`` is always a genuinely attained
    objective value at ``point``.
    """
    step = cfg.step_init
    trace = [value] if cfg.debug else None
    converged = False
    for _ in range(cfg.max_iters):
        _, grads = fgrad(point)
        d = tangent(point, grads)
        dn = _block_norm(d)
        if not np.isfinite(dn) or dn <= 1e-15 * (1.0 + abs(value)):
            converged = True
            break
        d = tuple(di / dn for di in d)
        accepted = False
        while step >= cfg.step_min:
            trial = retract(tuple(p + step * di for p, di in zip(point, d)))
            ft = f(trial)
            if np.isfinite(ft) and ft > value + _ARMIJO * step * dn:
                point, value = trial, float(ft)
                accepted = True
                break
            step *= 0.5
        if not accepted:
            converged = True
            break
        if cfg.debug:
            trace.append(value)
        step = min(step * _STEP_GROW, 4.0 * cfg.step_init)
    return point, value, converged, trace


def _multistart(warm, random_start, f, fgrad, tangent, retract,
                cfg: OptimizerConfig, keep_points: bool, stream: tuple) -> OptimizerResult:
    """Run ``cfg.restarts`` independent ascents and reduce in index order.

    Warm starts (deterministic points) occupy the lowest restart indices;
    the rest draw random starts from their own streams. Starts where the
    objective is non-finite are discarded and flagged with value -inf.
    """
    fgrad_eff = fgrad if fgrad is not None else _numeric_fgrad(f)

    def run(idx):
        rng = rng_for(cfg.seed, *stream, idx)
        x0 = retract(warm[idx]) if idx < len(warm) else retract(random_start(rng))
        f0 = f(x0)
        if not np.isfinite(f0):
            return float("-inf"), None, False, None
        pt, val, conv, tr = _ascend(x0, float(f0), f, fgrad_eff, tangent, retract, cfg)
        return val, pt, conv, tr

    if cfg.parallel and cfg.restarts > 1:
        workers = cfg.threads or os.cpu_count() or 1
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, range(cfg.restarts)))
    else:
        rows = [run(i) for i in range(cfg.restarts)]

    values = [float(r[0]) for r in rows]
    points = [r[1] for r in rows]
    best_idx = int(np.argmax(values))  # first maximum wins under the seed order
    best_value = values[best_idx]
    near = sum(1 for v in values if v >= best_value - cfg.value_tol * (1.0 + abs(best_value)))
    return OptimizerResult(
        best_value=best_value,
        best_point=points[best_idx],
        per_restart_values=values,
        converged_fraction=near / cfg.restarts,
        best_converged=bool(rows[best_idx][2]),
        per_restart_points=points if keep_points else None,
        discarded=sum(1 for p in points if p is None),
        traces=[r[3] for r in rows] if cfg.debug else None,
    )


def _as_warm(extra_starts):
    return [tuple(np.asarray(w, dtype=complex) for w in ws) for ws in (extra_starts or [])]


# ---------------------------------------------------------------------------
# sphere domains


def _sphere_tangent(point, grads):
    return tuple(g - np.vdot(x, g).real * x for x, g in zip(point, grads))


def _sphere_retract(point):
    out = []
    for x in point:
        nrm = float(np.linalg.norm(x))
        out.append(x if nrm == 0.0 else x / nrm)
    return tuple(out)


def maximize_sphere(f, dim: int, cfg: OptimizerConfig | None = None, fgrad=None,
                    extra_starts=None, stream: tuple = (), keep_points: bool = False) -> OptimizerResult:
    """Maximise f((xi,)) over the complex unit sphere in C^dim."""
    cfg = cfg or OptimizerConfig()
    return _multistart(
        _as_warm(extra_starts), lambda rng: (random_unit(rng, dim),),
        f, fgrad, _sphere_tangent, _sphere_retract, cfg, keep_points, stream,
    )


def maximize_sphere_pair(f, dims, cfg: OptimizerConfig | None = None, fgrad=None,
                         extra_starts=None, stream: tuple = (), keep_points: bool = False) -> OptimizerResult:
    """Maximise f((xi, eta)) over a product of complex unit spheres."""
    cfg = cfg or OptimizerConfig()
    n1, n2 = dims
    return _multistart(
        _as_warm(extra_starts), lambda rng: (random_unit(rng, n1), random_unit(rng, n2)),
        f, fgrad, _sphere_tangent, _sphere_retract, cfg, keep_points, stream,
    )


# ---------------------------------------------------------------------------
# unitary group


def _unitary_tangent(point, grads):
    (u,) = point
    (g,) = grads
    m = u.conj().T @ g
    return (u @ (0.5 * (m - m.conj().T)),)


def _unitary_retract(point):
    (u,) = point
    return (polar_unitary(u),)


def _random_start_unitary(rng, n):
    # Starts parameterised as exp(iH), H Hermitian with entries bounded by pi.
    x = rng.uniform(-np.pi, np.pi, size=(n, n))
    y = rng.uniform(-np.pi, np.pi, size=(n, n))
    h = (x + 1j * y) / np.sqrt(2.0)
    h = 0.5 * (h + h.conj().T)
    w, v = np.linalg.eigh(h)
    return ((v * np.exp(1j * w)) @ v.conj().T,)


def maximize_unitary(f, n: int, cfg: OptimizerConfig | None = None, fgrad=None,
                     extra_starts=None, stream: tuple = (), keep_points: bool = False) -> OptimizerResult:
    """Maximise f((U,)) over n-by-n unitaries.

    Starts are exp(iH) for random Hermitian H; iterates stay unitary via the
    polar retraction, so every point remains inside the exp(iH) image.
    """
    cfg = cfg or OptimizerConfig()
    return _multistart(
        _as_warm(extra_starts), lambda rng: _random_start_unitary(rng, n),
        f, fgrad, _unitary_tangent, _unitary_retract, cfg, keep_points, stream,
    )


# ---------------------------------------------------------------------------
# bounded-rank density factors


def _density_retract(point):
    out = []
    for c in point:
        nrm = float(np.linalg.norm(c))
        out.append(c if nrm == 0.0 else c / nrm)
    return tuple(out)


def maximize_density_pair(f, n: int, k: int, cfg: OptimizerConfig | None = None, fgrad=None,
                          extra_starts=None, stream: tuple = (), keep_points: bool = False) -> OptimizerResult:
    """Maximise f((C1, C2)) over pairs of n-by-k factors of unit Frobenius
    norm; rho_i = C_i C_i* are then rank-at-most-k density matrices.

    Objectives must be positively homogeneous of degree one in each factor
    (every Gram/trace-norm objective here is); the radial projection in the
    tangent map then matches the gradient of the normalised objective.
    """
    cfg = cfg or OptimizerConfig()
    if k < 1:
        raise InvalidInput("rank bound k must be >= 1")

    def start(rng):
        return (random_complex(rng, n, k), random_complex(rng, n, k))

    return _multistart(
        _as_warm(extra_starts), start, f, fgrad,
        _sphere_tangent, _density_retract, cfg, keep_points, stream,
    )
