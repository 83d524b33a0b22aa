from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np


class AlgorithmFailure(RuntimeError):
    """A randomized algorithm exhausted its iteration budget."""

    def __init__(self, message, partial=()):
        super().__init__(message)
        self.partial = list(partial)


@dataclass
class RunRecord:
    """Outcome of one algorithm execution."""

    algorithm: str
    solution: list[int]
    value: float
    queries: int
    rounds: int
    wall_seconds: float
    failed: bool
    k: int
    n: int
    seed: int | None = None
    attempts: int = 1
    info: dict = field(default_factory=dict)


def resolve_rng(rng) -> tuple[np.random.Generator, int | None]:
    """Accept an int seed, a Generator or ``None``; report the seed when known."""
    if isinstance(rng, np.random.Generator):
        return rng, None
    if rng is None:
        return np.random.default_rng(), None
    return np.random.default_rng(int(rng)), int(rng)


@contextmanager
def measured(oracle):
    """Capture ledger deltas and wall time for the enclosed run."""
    q0, r0 = oracle.ledger.snapshot()
    stats = {}
    t0 = time.perf_counter()
    try:
        yield stats
    finally:
        stats["wall_seconds"] = time.perf_counter() - t0
        q1, r1 = oracle.ledger.snapshot()
        stats["queries"] = q1 - q0
        stats["rounds"] = r1 - r0


def make_record(name, oracle, solution, stats, *, failed, k, seed, value=None, **info) -> RunRecord:
    solution = [int(x) for x in solution]
    if value is None:
        value = oracle.peek(solution)
    return RunRecord(name, solution, float(value), stats["queries"], stats["rounds"],
                     stats["wall_seconds"], bool(failed), int(k), oracle.n, seed, 1, info)
