"""Block index families and prefix-selection rules for adaptive sequencing.

A permuted candidate sequence ``v_1 .. v_m`` is examined at the prefix
lengths in ``lambdas`` (strictly increasing, all in ``1..m``).  Block ``i``
is the segment between ``lambdas[i-1]`` and ``lambdas[i]`` with
``lambdas[-1] = 0`` by convention.
"""
from __future__ import annotations

import math

import numpy as np


def geometric_indices(eps: float, upper: int) -> list[int]:
    """Distinct values ``floor((1+eps)^u)`` for ``u = 0, 1, ...`` not exceeding ``upper``."""
    out = []
    u = 0
    while True:
        v = math.floor((1.0 + eps) ** u)
        if v > upper:
            return out
        if not out or v != out[-1]:
            out.append(v)
        u += 1


def linear_seq_lambdas(k: int, size: int, eps: float) -> list[int]:
    """Geometric steps up to ``k``, arithmetic steps of ``eps*k`` beyond it, and ``size``.

    Every value is capped at ``size``, the number of candidates.
    """
    if size <= 0:
        return []
    values = set(geometric_indices(eps, min(k, size)))
    u = 0
    while True:
        v = math.floor(k + u * eps * k)
        if v > size:
            break
        values.add(v)
        u += 1
    values.add(size)
    return sorted(v for v in values if v >= 1)


def threshold_lambdas(s: int, eps: float) -> list[int]:
    if s <= 0:
        return []
    return sorted(set(geometric_indices(eps, s)) | {s})


def select_linear_prefix(lambdas, good, k: int) -> int:
    """Prefix length committed by LinearSeq; ``0`` commits nothing.

    Picks the largest bad block that is either within the first ``k``
    positions with every earlier block good, or beyond ``k`` and preceded by
    a run of good blocks spanning at least ``k`` elements.  When every block
    is good the whole sequence is taken.
    """
    lambdas = list(lambdas)
    good = list(good)
    if not lambdas:
        return 0
    if all(good):
        return lambdas[-1]
    best = 0
    all_good_before = True
    run_start = None  # index where the current run of good blocks began
    for i, lam in enumerate(lambdas):
        if not good[i]:
            if lam <= k:
                ok = all_good_before
            else:
                prev_end = lambdas[i - 1] if i >= 1 else 0
                run_begin = lambdas[run_start - 1] if run_start not in (None, 0) else 0
                ok = run_start is not None and prev_end - run_begin >= k
            if ok:
                best = lam
            all_good_before = False
            run_start = None
        elif run_start is None:
            run_start = i
    return best


def select_threshold_prefix(lambdas, good) -> int:
    """Smallest index exceeding every good prefix; the last index when all are good."""
    lambdas = list(lambdas)
    good = np.asarray(good, dtype=bool)
    if not lambdas:
        return 0
    if good[-1]:
        # no index exceeds the largest good one
        return lambdas[-1]
    if not good.any():
        return lambdas[0]
    last_good = int(np.flatnonzero(good)[-1])
    return lambdas[last_good + 1]
