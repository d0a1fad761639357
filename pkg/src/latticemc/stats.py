"""Histogram accumulation and goodness-of-fit reporting.

Counts are kept as int64 on a contiguous integer support starting at
``offset``.  Merging histograms adds counts (associative and commutative),
which is what makes sharded runs reproducible: the merged result depends
only on the per-shard streams, not on scheduling.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

# 99.9th percentile of the standard normal, used by the chi-square gate.
_Z_999 = 3.090232306167813


@dataclass
class Histogram:
    offset: int
    counts: np.ndarray

    def __post_init__(self) -> None:
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.ndim != 1:
            raise ValueError("counts must be one-dimensional")

    @classmethod
    def from_samples(cls, xs: np.ndarray) -> "Histogram":
        xs = np.asarray(xs, dtype=np.int64)
        if xs.size == 0:
            raise ValueError("cannot build a histogram from no samples")
        offset = int(xs.min())
        counts = np.bincount(xs - offset)
        return cls(offset=offset, counts=counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def support(self) -> np.ndarray:
        """Integer coordinates of the bins."""
        return np.arange(self.offset, self.offset + len(self.counts))

    def frequency(self) -> np.ndarray:
        total = self.total
        if total == 0:
            raise ValueError("empty histogram has no frequencies")
        return self.counts / total

    def merge(self, other: "Histogram") -> "Histogram":
        lo = min(self.offset, other.offset)
        hi = max(self.offset + len(self.counts), other.offset + len(other.counts))
        counts = np.zeros(hi - lo, dtype=np.int64)
        counts[self.offset - lo : self.offset - lo + len(self.counts)] += self.counts
        counts[other.offset - lo : other.offset - lo + len(other.counts)] += other.counts
        return Histogram(offset=lo, counts=counts)


def merge(histograms) -> Histogram:
    """Fold a sequence of histograms into one by adding counts."""
    it = iter(histograms)
    try:
        acc = next(it)
    except StopIteration:
        raise ValueError("merge needs at least one histogram") from None
    for h in it:
        acc = acc.merge(h)
    return acc


def chi2_critical(dof: int, alpha: float = 0.001) -> float:
    """Upper-tail chi-square critical value via the Wilson-Hilferty cube.

    Within ~1% of the exact quantile for dof >= 5 and ~0.25% for dof >= 24,
    always erring on the lenient side; only alpha = 0.001 is supported.
    """
    if alpha != 0.001:
        raise ValueError("only alpha = 0.001 is supported")
    if dof < 1:
        raise ValueError(f"dof must be >= 1, got {dof}")
    k = float(dof)
    return k * (1.0 - 2.0 / (9.0 * k) + _Z_999 * np.sqrt(2.0 / (9.0 * k))) ** 3


@dataclass(frozen=True)
class ComparisonReport:
    l1: float
    chi2: float
    dof: int
    max_abs_dev: float
    critical: float
    passed: bool


def _pool(observed: np.ndarray, expected: np.ndarray, min_expected: float):
    """Group consecutive bins so every group's expected count reaches the floor.

    Greedy left-to-right; a trailing underweight group is folded into its
    predecessor.  Keeps tails pooled inward and never reorders bins.
    """
    obs_groups: list[float] = []
    exp_groups: list[float] = []
    acc_o = 0.0
    acc_e = 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= min_expected:
            obs_groups.append(acc_o)
            exp_groups.append(acc_e)
            acc_o = 0.0
            acc_e = 0.0
    if acc_e > 0.0 or acc_o > 0.0:
        if obs_groups:
            obs_groups[-1] += acc_o
            exp_groups[-1] += acc_e
        else:
            obs_groups.append(acc_o)
            exp_groups.append(acc_e)
    return np.array(obs_groups), np.array(exp_groups)


def compare(
    frequency: np.ndarray,
    reference: np.ndarray,
    total: int,
    *,
    min_expected: float = 5.0,
    alpha: float = 0.001,
) -> ComparisonReport:
    """Compare an empirical frequency vector against a reference pmf.

    ``frequency`` and ``reference`` must share the same support ordering and
    ``reference`` must sum to 1 (within 1e-6).  The chi-square statistic is
    computed on bins pooled to ``min_expected`` expected counts and gated at
    the upper ``alpha`` percentile for the pooled dof.
    """
    frequency = np.asarray(frequency, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if frequency.shape != reference.shape:
        raise ValueError(
            f"support mismatch: {frequency.shape} vs {reference.shape}"
        )
    if total <= 0:
        raise ValueError("total must be positive")
    if abs(reference.sum() - 1.0) > 1e-6:
        raise ValueError(f"reference must sum to 1, got {reference.sum()!r}")
    if np.any(reference < 0.0):
        raise ValueError("reference has negative entries")

    dev = frequency - reference
    l1 = float(np.abs(dev).sum())
    max_abs_dev = float(np.abs(dev).max())

    observed = frequency * total
    expected = reference * total
    obs_g, exp_g = _pool(observed, expected, min_expected)
    if len(obs_g) < 2:
        raise ValueError("fewer than two pooled bins; chi-square undefined")
    chi2 = float(((obs_g - exp_g) ** 2 / exp_g).sum())
    dof = len(obs_g) - 1
    critical = chi2_critical(dof, alpha)
    return ComparisonReport(
        l1=l1,
        chi2=chi2,
        dof=dof,
        max_abs_dev=max_abs_dev,
        critical=critical,
        passed=chi2 < critical,
    )


def rebin(hist: Histogram, n_cells: int) -> tuple[np.ndarray, np.ndarray]:
    """Split a histogram's support into ``n_cells`` equal-width cells.

    Returns (cell edges as float array of length n_cells+1 in support
    coordinates, counts per cell).  Used when per-site statistics would be
    too sparse for a chi-square gate.
    """
    if n_cells < 2:
        raise ValueError("need at least two cells")
    edges = np.linspace(hist.offset - 0.5, hist.offset + len(hist.counts) - 0.5, n_cells + 1)
    idx = np.clip(np.searchsorted(edges, hist.support, side="right") - 1, 0, n_cells - 1)
    cells = np.zeros(n_cells, dtype=np.int64)
    np.add.at(cells, idx, hist.counts)
    return edges, cells


def bin_reference(reference: np.ndarray, support: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """Integrate a per-site reference pmf over the cells given by ``edges``."""
    n_cells = len(edges) - 1
    idx = np.clip(np.searchsorted(edges, support, side="right") - 1, 0, n_cells - 1)
    out = np.zeros(n_cells)
    np.add.at(out, idx, reference)
    return out


def write_histogram_csv(path, hist: Histogram, columns: dict[str, np.ndarray]) -> None:
    """Write ``xi,count,frequency[,extra columns]`` rows for a histogram."""
    freq = hist.frequency()
    names = ["xi", "count", "frequency", *columns.keys()]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for i, x in enumerate(hist.support):
            row = [int(x), int(hist.counts[i]), format(freq[i], ".17g")]
            row.extend(format(col[i], ".17g") for col in columns.values())
            writer.writerow(row)


def write_value_histogram_csv(path, centers: np.ndarray, counts: np.ndarray) -> None:
    """Write ``pbar,count,frequency`` rows for a real-valued histogram."""
    total = counts.sum()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pbar", "count", "frequency"])
        for c, n in zip(centers, counts):
            writer.writerow([format(c, ".17g"), int(n), format(n / total if total else 0.0, ".17g")])
