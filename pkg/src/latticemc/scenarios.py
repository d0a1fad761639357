"""Interference scenario definitions and their steady-state laws.

A scenario fixes the source geometry (two sources, a general source list,
a ring, or a box), the ensemble sizes, and the preparation.  The
steady-state position and momentum densities here come from the walk
picture: each particle locks onto a ray whose effective momentum solves
q = p - sum of pairwise memory terms, and changing variables from the
preparation momentum to the ray gives the fringe densities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def round_half_away(x: float) -> int:
    """Round to the nearest integer, halves away from zero."""
    return int(math.floor(abs(x) + 0.5)) * (1 if x >= 0 else -1)


@dataclass(frozen=True)
class ScenarioConfig:
    """Geometry and run sizes for an interference run.

    ``kind`` is one of ``two-slit``, ``multi-slit``, ``ring``, ``box``.
    ``sources`` lists (site, weight) pairs for the slit kinds; ``ell`` is
    the ring circumference or box width in sites; ``p`` is the fixed
    preparation propensity for ring/box runs (slit runs draw it uniformly).
    """

    kind: str
    n_particles: int
    n_steps: int
    sources: tuple = ()
    ell: int = 0
    p: float | None = None
    seed: int = 0

    def validate(self) -> None:
        if self.kind not in ("two-slit", "multi-slit", "ring", "box"):
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        if self.n_particles < 1 or self.n_steps < 1:
            raise ValueError("n_particles and n_steps must be >= 1")
        if self.kind in ("two-slit", "multi-slit"):
            if len(self.sources) < 2:
                raise ValueError("slit scenarios need at least two sources")
            sites = [s for s, _ in self.sources]
            if len(set(sites)) != len(sites):
                raise ValueError("sources must occupy distinct sites")
            weights = [w for _, w in self.sources]
            if any(w < 0.0 for w in weights) or abs(sum(weights) - 1.0) > 1e-9:
                raise ValueError("source weights must be nonnegative and sum to 1")
            if self.kind == "two-slit":
                if len(self.sources) != 2:
                    raise ValueError("two-slit takes exactly two sources")
                if sites[0] != -sites[1] or sites[0] == 0:
                    raise ValueError("two-slit sources must sit at +/- delta/2")
        else:
            if self.ell < 2:
                raise ValueError("ring/box needs ell >= 2")
            if self.p is None or abs(self.p) > 1.0:
                raise ValueError("ring/box needs a fixed propensity in [-1, 1]")


def two_slit_config(
    delta: int, p1: float = 0.5, n_particles: int = 50000, n_steps: int = 300, seed: int = 0
) -> ScenarioConfig:
    """Symmetric pair of sources ``delta`` sites apart, weights (p1, 1-p1)."""
    if delta < 2 or delta % 2 != 0:
        raise ValueError("two-slit separation must be a positive even number of sites")
    if not 0.0 <= p1 <= 1.0:
        raise ValueError("p1 must lie in [0, 1]")
    cfg = ScenarioConfig(
        kind="two-slit",
        n_particles=n_particles,
        n_steps=n_steps,
        sources=((delta // 2, p1), (-delta // 2, 1.0 - p1)),
        seed=seed,
    )
    cfg.validate()
    return cfg


def multi_slit_config(
    sources, n_particles: int = 50000, n_steps: int = 300, seed: int = 0
) -> ScenarioConfig:
    cfg = ScenarioConfig(
        kind="multi-slit",
        n_particles=n_particles,
        n_steps=n_steps,
        sources=tuple((int(s), float(w)) for s, w in sources),
        seed=seed,
    )
    cfg.validate()
    return cfg


def ring_config(ell: int, p: float, n_steps: int = 40000, seed: int = 0) -> ScenarioConfig:
    cfg = ScenarioConfig(
        kind="ring", n_particles=1, n_steps=n_steps, ell=int(ell), p=float(p), seed=seed
    )
    cfg.validate()
    return cfg


def box_config(ell: int, p: float, n_steps: int = 40000, seed: int = 0) -> ScenarioConfig:
    cfg = ScenarioConfig(
        kind="box", n_particles=1, n_steps=n_steps, ell=int(ell), p=float(p), seed=seed
    )
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# steady-state densities


def two_slit_density(xi, tau: int, p1: float, p2: float, delta: int):
    """Arrival density (1 + 2 sqrt(p1 p2) cos(pi delta xi / tau)) / (2 tau)."""
    if tau < 1 or delta < 1:
        raise ValueError("tau and delta must be >= 1")
    x = np.asarray(xi, dtype=float)
    out = (1.0 + 2.0 * math.sqrt(p1 * p2) * np.cos(math.pi * delta * x / tau)) / (2.0 * tau)
    if np.isscalar(xi) or np.ndim(xi) == 0:
        return float(out)
    return out


def momentum_density_two_slit(pbar, p1: float, p2: float, delta: int):
    """Density of locked ray momenta: (1 + 2 sqrt(p1 p2) cos(pi delta pbar)) / 2."""
    if delta < 1:
        raise ValueError("delta must be >= 1")
    q = np.asarray(pbar, dtype=float)
    out = (1.0 + 2.0 * math.sqrt(p1 * p2) * np.cos(math.pi * delta * q)) / 2.0
    if np.isscalar(pbar) or np.ndim(pbar) == 0:
        return float(out)
    return out


def multi_slit_density(xi, tau: int, sources):
    """Arrival density for a weighted source list; pairwise cosine terms."""
    if tau < 1:
        raise ValueError("tau must be >= 1")
    sources = [(int(s), float(w)) for s, w in sources]
    x = np.asarray(xi, dtype=float)
    out = np.ones_like(x)
    for i in range(len(sources)):
        si, wi = sources[i]
        for j in range(i + 1, len(sources)):
            sj, wj = sources[j]
            delta = abs(si - sj)
            if delta == 0:
                raise ValueError("sources must occupy distinct sites")
            out = out + 2.0 * math.sqrt(wi * wj) * np.cos(math.pi * delta * x / tau)
    out = out / (2.0 * tau)
    if np.isscalar(xi) or np.ndim(xi) == 0:
        return float(out)
    return out


def momentum_density_multi(pbar, sources):
    """Density of locked ray momenta for a weighted source list."""
    sources = [(int(s), float(w)) for s, w in sources]
    q = np.asarray(pbar, dtype=float)
    out = np.ones_like(q)
    for i in range(len(sources)):
        si, wi = sources[i]
        for j in range(i + 1, len(sources)):
            sj, wj = sources[j]
            delta = abs(si - sj)
            if delta == 0:
                raise ValueError("sources must occupy distinct sites")
            out = out + 2.0 * math.sqrt(wi * wj) * np.cos(math.pi * delta * q)
    out = out / 2.0
    if np.isscalar(pbar) or np.ndim(pbar) == 0:
        return float(out)
    return out


def finite_time_slit_density(xi, tau: int, sources, n_nodes: int = 400):
    """Exact arrival pmf of the locked-ray walk after ``tau`` ticks.

    The cosine fringe law is the infinite-time limit of this pmf: a walker
    locked at momentum q lands with the free-walk kernel around q*tau, and
    the locked momenta are distributed with the ray density, so the arrival
    law is that density pushed through the kernel.  The second-order
    difference from the limit law, (step variance * tau / 2) * curvature,
    fills the fringe zeros at small tau and vanishes as tau grows.  The
    quadrature resolves the kernel width sqrt(b/tau) provided n_nodes is
    well above 2/sqrt(b/tau); the default covers tau up to a few thousand.
    """
    from .analytic import pmf_free

    if tau < 1:
        raise ValueError("tau must be >= 1")
    sources = [(int(s), float(w)) for s, w in sources]
    x = np.asarray(xi, dtype=np.int64)
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    ray_density = momentum_density_multi(nodes, sources)
    out = np.zeros(x.shape, dtype=float)
    for site, w_src in sources:
        for q, glw, rho in zip(nodes, weights, ray_density):
            out += w_src * glw * rho * pmf_free(x - site, tau, q)
    if np.isscalar(xi) or np.ndim(xi) == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# mean motion


def ray_equation(q: float, p: float, p1: float, p2: float, delta: int) -> float:
    """Residual of the locked-ray condition q = p - g(q)."""
    return q - p + 2.0 * math.sqrt(p1 * p2) * math.sin(math.pi * delta * q) / (math.pi * delta)


def solve_ray(p: float, p1: float, p2: float, delta: int, tol: float = 1e-12) -> float:
    """Stable ray momentum for preparation ``p`` (bisection on the ray equation).

    The map q -> p - g(q) moves rays toward fringe maxima; between two
    consecutive repellers there is exactly one stable root.
    """
    lo, hi = -1.5, 1.5
    flo = ray_equation(lo, p, p1, p2, delta)
    fhi = ray_equation(hi, p, p1, p2, delta)
    if flo > 0.0 or fhi < 0.0:
        raise ValueError("no bracketed ray for these parameters")
    # Bisect on the increasing envelope; ray_equation is monotone in q up to
    # the bounded memory term, so plain bisection on sign works.
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ray_equation(mid, p, p1, p2, delta) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def mean_motion(
    p: float, p1: float, p2: float, delta: int, tau_max: int
) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic mean trajectory of the walk under the memory force.

    Iterates mean position and effective momentum from one tick after
    emission; returns (positions, momenta) arrays of length ``tau_max``
    indexed by tick (entry 0 is tick 1).
    """
    if tau_max < 1:
        raise ValueError("tau_max must be >= 1")
    xs = np.empty(tau_max)
    ps = np.empty(tau_max)
    x = p  # one free tick from the source
    for i in range(tau_max):
        tau = i + 1
        xs[i] = x
        q = x / tau
        p_eff = p - 2.0 * math.sqrt(p1 * p2) * math.sin(math.pi * delta * q) / (math.pi * delta)
        p_eff = max(-1.0, min(1.0, p_eff))
        ps[i] = p_eff
        x += p_eff
    return xs, ps


# ---------------------------------------------------------------------------
# bound geometries


def ring_steady_momentum(p: float, ell: int) -> float:
    """Quantized ray momentum on a ring: (2/ell) * round(p*ell/2)."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    if abs(p) > 1.0:
        raise ValueError("p must lie in [-1, 1]")
    return 2.0 * round_half_away(p * ell / 2.0) / ell


def box_steady_momentum(p: float, ell: int) -> float:
    """Quantized momentum magnitude in a box: round(p*ell)/ell."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    if abs(p) > 1.0:
        raise ValueError("p must lie in [-1, 1]")
    return round_half_away(p * ell) / ell


def ring_limit_sum(pbar: float, ell: int, n_sources: int) -> float:
    """Partial pairwise memory sum for a ring seen as equally spaced sources.

    sum over separations d = 1..n_sources-1 of
    (2 (n_sources - d) / n_sources) * sin(pi d ell pbar) / (pi d ell);
    converges (in the averaged sense) to ``ring_limit_closed``.
    """
    if ell < 2 or n_sources < 2:
        raise ValueError("ell and n_sources must be >= 2")
    d = np.arange(1, n_sources, dtype=float)
    weights = 2.0 * (n_sources - d) / n_sources
    return float(np.sum(weights * np.sin(math.pi * d * ell * pbar) / (math.pi * d * ell)))


def ring_limit_closed(pbar: float, ell: int) -> float:
    """Sawtooth limit of the ring memory sum: 1/ell - pbar + (2/ell)*floor(pbar*ell/2)."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    return 1.0 / ell - pbar + (2.0 / ell) * math.floor(pbar * ell / 2.0)


def ring_memory_force(pbar: float, ell: int) -> float:
    """Memory force on a ring walker moving at sample momentum ``pbar``.

    The ring is equivalent to infinitely many equal sources spaced ell
    apart, so the pairwise memory sum converges to the sawtooth
    ``ring_limit_closed`` except at the quantized rays pbar = 2n/ell,
    where every sine term vanishes and the force is exactly zero.  The
    force is zero there and follows the sawtooth elsewhere; a walker is
    pushed toward the nearest quantized ray and chatters around it.
    """
    if ell < 2:
        raise ValueError("ell must be >= 2")
    half = pbar * ell / 2.0
    if half == math.floor(half):
        return 0.0
    return ring_limit_closed(pbar, ell)


def box_memory_force(pbar: float, ell: int) -> float:
    """Memory force in a box of width ``ell``: mirror images sit 2*ell apart.

    Same sawtooth as the ring with circumference 2*ell, so the stable
    rays sit at multiples of 1/ell (half the ring spacing).
    """
    if ell < 2:
        raise ValueError("ell must be >= 2")
    return ring_memory_force(pbar, 2 * ell)
