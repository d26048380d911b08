"""Brownian motion on U(N) and GL(N; C) by Lie-Euler steps U <- U exp(sqrt(dt) xi).

xi is the standard Gaussian on the Lie algebra for <X, Y>_N = N Re Trace(X* Y),
i.e. sum_j g_j X_j over an orthonormal basis. It is drawn directly: for a
complex Ginibre matrix A, (A - A*)/(2 sqrt N) has exactly that law on u(N),
and X + iY with independent u(N) draws gives gl(N; C). Paths run to
``cfg.horizon``, which is t/2 on GL(N; C) so that endpoints follow mu_t^N.

Path p draws every increment from default_rng(SeedSequence([seed, p])).
Chunks only batch the matrix work, and results are reduced in chunk order,
so output depends on (config, seed) and not on chunk_size or the worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Iterator, Sequence

import numpy as np
from loguru import logger
from scipy.linalg import expm

from tracecalc.lab.types import BrownianConfig


def path_rng(seed: int, path: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, path]))


def _skew(g: np.ndarray, N: int) -> np.ndarray:
    A = g[..., 0] + 1j * g[..., 1]
    return (A - np.conj(np.swapaxes(A, -1, -2))) / (2 * np.sqrt(N))


def lie_increment(rngs: Sequence[np.random.Generator], group: str, N: int) -> np.ndarray:
    """One Gaussian Lie-algebra element per path, each drawn from that path's stream."""
    parts = 4 if group == "gl" else 2
    g = np.stack([rng.standard_normal((N, N, parts)) for rng in rngs])
    xi = _skew(g[..., :2], N)
    if group == "gl":
        xi = xi + 1j * _skew(g[..., 2:], N)
    return xi


def polar_unitary(U: np.ndarray) -> np.ndarray:
    """Nearest unitary W V* from the SVD U = W S V*."""
    W, _, Vh = np.linalg.svd(U)
    return W @ Vh


def unitarity_defect(U: np.ndarray) -> float:
    eye = np.eye(U.shape[-1])
    gram = np.conj(np.swapaxes(U, -1, -2)) @ U
    return float(np.max(np.linalg.norm(gram - eye, axis=(-2, -1))))


def simulate_chunk(cfg: BrownianConfig, index: int) -> np.ndarray:
    """Endpoints of the paths in chunk ``index``, shape (size, N, N)."""
    start, stop = cfg.chunk_bounds(index)
    size = stop - start
    rngs = [path_rng(cfg.seed, p) for p in range(start, stop)]
    U = np.broadcast_to(np.eye(cfg.N, dtype=complex), (size, cfg.N, cfg.N)).copy()
    root = np.sqrt(cfg.dt)
    for step in range(1, cfg.steps + 1):
        U = U @ expm(root * lie_increment(rngs, cfg.group, cfg.N))
        if cfg.group == "u" and step % cfg.reorthonormalize_every == 0:
            U = polar_unitary(U)
    if cfg.group == "u" and cfg.steps:
        U = polar_unitary(U)
    return U


def sample_bm(cfg: BrownianConfig) -> Iterator[np.ndarray]:
    """Yield endpoint batches in chunk order."""
    logger.debug(
        f"brownian: group={cfg.group} N={cfg.N} t={cfg.t} steps={cfg.steps} "
        f"paths={cfg.paths} chunks={cfg.chunks} workers={cfg.workers}"
    )
    if cfg.workers == 1:
        for index in range(cfg.chunks):
            yield simulate_chunk(cfg, index)
        return
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        yield from pool.map(lambda i: simulate_chunk(cfg, i), range(cfg.chunks))


def sample_endpoints(cfg: BrownianConfig) -> np.ndarray:
    return np.concatenate(list(sample_bm(cfg)))


def random_unitary(N: int, seed: int = 0, t: float = 4.0, step: float = 0.02) -> np.ndarray:
    """A generic element of U(N): the endpoint of one long Brownian path."""
    cfg = BrownianConfig("u", N, t, step=step, paths=1, seed=seed, chunk_size=1)
    return simulate_chunk(cfg, 0)[0]
