"""Monte Carlo engine for free (non-interfering) walks.

A walk carries an integer site, a tick counter, a net-displacement
counter, and its preparation propensity.  Free ensembles are simulated
with one vectorized uniform draw per tick across all particles, which is
step-for-step the same sampling rule as ``step`` (u < up -> +1,
u < up + stay -> 0, else -1) applied in parallel.

Sharded runs derive one child generator per shard from a single seed, so
the merged histogram is bit-reproducible for a fixed (seed, shards) pair
no matter how shards are scheduled.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .lattice import transition_probs
from .stats import Histogram, merge


@dataclass
class ParticleState:
    """Mutable walk state; ``bosons`` maps a pair key to a carried boson."""

    xi: int = 0
    tau: int = 0
    counter: int = 0
    p0: float = 0.0
    bosons: dict = field(default_factory=dict)


def step(state: ParticleState, p_eff: float, rng: np.random.Generator) -> int:
    """Advance one tick with effective propensity ``p_eff``; returns the move."""
    probs = transition_probs(p_eff)
    u = rng.random()
    if u < probs.up:
        v = 1
    elif u < probs.up + probs.stay:
        v = 0
    else:
        v = -1
    state.xi += v
    state.counter += v
    state.tau += 1
    return v


def run_free(xi0: int, p: float, n_steps: int, rng: np.random.Generator) -> int:
    """Final site of one free walk of ``n_steps`` ticks at constant propensity."""
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    probs = transition_probs(p)
    if n_steps == 0:
        return int(xi0)
    u = rng.random(n_steps)
    moves = (u < probs.up).astype(np.int64) - (u >= probs.up + probs.stay)
    return int(xi0 + moves.sum())


def uniform_propensity(rng: np.random.Generator, n: int) -> np.ndarray:
    """Default preparation: propensity uniform on [-1, 1]."""
    return rng.uniform(-1.0, 1.0, size=n)


def fixed_propensity(p: float):
    """Point-mass preparation at propensity ``p``."""
    transition_probs(p)  # domain check up front
    def sampler(rng: np.random.Generator, n: int) -> np.ndarray:
        return np.full(n, float(p))
    return sampler


def point_source(xi0: int = 0):
    """All particles emitted from the same site."""
    def sampler(rng: np.random.Generator, n: int) -> np.ndarray:
        return np.full(n, int(xi0), dtype=np.int64)
    return sampler


def _simulate_free_shard(
    n_particles: int,
    n_steps: int,
    p_sampler,
    xi0_sampler,
    rng: np.random.Generator,
) -> Histogram:
    p = np.asarray(p_sampler(rng, n_particles), dtype=float)
    if np.any(np.abs(p) > 1.0):
        raise ValueError("propensity sampler produced values outside [-1, 1]")
    xi = np.asarray(xi0_sampler(rng, n_particles), dtype=np.int64).copy()
    up = ((1.0 + p) / 2.0) ** 2
    move_cut = up + (1.0 - p * p) / 2.0
    for _ in range(n_steps):
        u = rng.random(n_particles)
        xi += (u < up).astype(np.int64) - (u >= move_cut)
    return Histogram.from_samples(xi)


def run_ensemble_free(
    n_particles: int,
    n_steps: int,
    p_sampler=None,
    xi0_sampler=None,
    seed=None,
    shards: int = 1,
    threads: int = 1,
) -> Histogram:
    """Histogram of final sites for an ensemble of independent free walks.

    ``p_sampler(rng, n)`` draws per-particle propensities (default uniform
    on [-1, 1]); ``xi0_sampler`` draws emission sites (default all zero).
    ``seed`` may be an int, a SeedSequence, or a Generator (single shard
    only).  With ``shards > 1`` the particles are split as evenly as
    possible and each shard gets its own spawned generator; ``threads``
    only controls scheduling and never changes the result.
    """
    if n_particles < 1:
        raise ValueError("n_particles must be >= 1")
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    if shards < 1:
        raise ValueError("shards must be >= 1")
    p_sampler = p_sampler or uniform_propensity
    xi0_sampler = xi0_sampler or point_source(0)

    if isinstance(seed, np.random.Generator):
        if shards != 1:
            raise ValueError("pass a seed, not a Generator, for sharded runs")
        rngs = [seed]
    else:
        ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        rngs = [np.random.Generator(np.random.PCG64(child)) for child in ss.spawn(shards)]

    base = n_particles // shards
    sizes = [base + (1 if i < n_particles % shards else 0) for i in range(shards)]
    jobs = [(n, rng) for n, rng in zip(sizes, rngs) if n > 0]

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_simulate_free_shard, n, n_steps, p_sampler, xi0_sampler, rng)
                for n, rng in jobs
            ]
            parts = [f.result() for f in futures]
    else:
        parts = [
            _simulate_free_shard(n, n_steps, p_sampler, xi0_sampler, rng) for n, rng in jobs
        ]
    return merge(parts)
