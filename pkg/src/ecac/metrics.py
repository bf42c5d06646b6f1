"""Partition-agreement scores: normalized mutual information and Rand index.

Both scores live in [0, 1], are symmetric, and are invariant under
relabeling of either partition.
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import DegenerateEntropyWarning, ZeroBaseline


def contingency_table(u, v) -> np.ndarray:
    """Co-occurrence counts ``n_ij`` between the classes of two labelings."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape or u.ndim != 1 or u.size < 1:
        raise ValueError("labelings must be equal-length 1-D arrays")
    _, ui = np.unique(u, return_inverse=True)
    _, vi = np.unique(v, return_inverse=True)
    counts = np.zeros((ui.max() + 1, vi.max() + 1), dtype=np.int64)
    np.add.at(counts, (ui, vi), 1)
    return counts


def nmi(u, v) -> float:
    """Mutual information normalized by the geometric mean of entropies.

    Natural-log based; the 0*log(0) terms are dropped. If either labeling
    has a single class its entropy is zero and the quotient is undefined:
    by convention the score is 1.0 when the two partitions are identical
    and 0.0 otherwise, and a :class:`DegenerateEntropyWarning` is emitted.
    """
    counts = contingency_table(u, v)
    n = counts.sum()
    pi = counts.sum(axis=1) / n
    pj = counts.sum(axis=0) / n
    hu = -np.sum(pi * np.log(pi))
    hv = -np.sum(pj * np.log(pj))
    if hu == 0.0 or hv == 0.0:
        # Entropy 0 means a single class, so the partitions can only be
        # identical when both collapse to one block.
        identical = counts.shape == (1, 1)
        warnings.warn(
            "a labeling has a single class; NMI set by convention",
            DegenerateEntropyWarning,
            stacklevel=2,
        )
        return 1.0 if identical else 0.0
    nz = counts > 0
    pij = counts[nz] / n
    outer = np.outer(pi, pj)[nz]
    mi = np.sum(pij * np.log(pij / outer))
    return float(mi / np.sqrt(hu * hv))


def pair_confusion(u, v) -> tuple[int, int, int, int]:
    """(TP, TN, FP, FN) over all unordered pairs of distinct objects.

    TP: same class in both; TN: different in both; FP: together in ``v``
    only; FN: together in ``u`` only. Computed from contingency sums, not
    the quadratic pair loop.
    """
    counts = contingency_table(u, v)
    n = int(counts.sum())
    pairs = n * (n - 1) // 2
    tp = int((counts * (counts - 1) // 2).sum())
    a = counts.sum(axis=1)
    b = counts.sum(axis=0)
    same_u = int((a * (a - 1) // 2).sum())
    same_v = int((b * (b - 1) // 2).sum())
    fn = same_u - tp
    fp = same_v - tp
    tn = pairs - tp - fp - fn
    return tp, tn, fp, fn


def rand_index(u, v) -> float:
    """Fraction of object pairs on which the two partitions agree."""
    tp, tn, fp, fn = pair_confusion(u, v)
    total = tp + tn + fp + fn
    if total == 0:
        raise ValueError("Rand index needs at least two objects")
    return (tp + tn) / total


def improvement_rate(original: float, optimized: float) -> float:
    """Signed percentage change of a score relative to its baseline."""
    if original == 0:
        raise ZeroBaseline("improvement rate is undefined for a zero baseline")
    return 100.0 * (optimized - original) / original
