"""Instrumented access to monotone submodular set functions.

Every algorithm in this package talks to its objective through an
:class:`Oracle`.  The oracle validates element ids, counts each set
evaluation as one query and lets the caller group queries into adaptive
rounds (``with oracle.round(): ...``).  Batches of independent evaluations
are fanned out over a thread pool; results are written into per-item slots
so the outcome never depends on the number of workers.
"""
from __future__ import annotations

import contextlib
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np


class QueryLedger:
    """Thread-safe monotone counters for oracle queries and adaptive rounds."""

    def __init__(self):
        self._queries = 0
        self._rounds = 0
        self._lock = threading.Lock()

    @property
    def queries(self) -> int:
        return self._queries

    @property
    def rounds(self) -> int:
        return self._rounds

    def add_queries(self, count: int) -> None:
        if count < 0:
            raise ValueError("query count must be non-negative")
        with self._lock:
            self._queries += count

    def add_round(self) -> None:
        with self._lock:
            self._rounds += 1

    def snapshot(self) -> tuple[int, int]:
        with self._lock:
            return self._queries, self._rounds

    def __repr__(self):
        return f"QueryLedger(queries={self._queries}, rounds={self._rounds})"


class SolutionSet:
    """Distinct element ids kept in insertion order."""

    def __init__(self, items: Iterable[int] = ()):
        self._order: list[int] = []
        self._members: set[int] = set()
        self.extend(items)

    def add(self, x: int) -> bool:
        x = int(x)
        if x in self._members:
            return False
        self._order.append(x)
        self._members.add(x)
        return True

    def extend(self, items: Iterable[int]) -> None:
        for x in items:
            self.add(x)

    def suffix(self, k: int) -> list[int]:
        """The last ``min(k, len(self))`` inserted ids, oldest first."""
        if k <= 0:
            return []
        return self._order[-k:]

    @property
    def ordered(self) -> list[int]:
        return list(self._order)

    def __contains__(self, x) -> bool:
        return int(x) in self._members

    def __len__(self) -> int:
        return len(self._order)

    def __iter__(self) -> Iterator[int]:
        return iter(self._order)

    def __repr__(self):
        return f"SolutionSet({self._order})"


class SetFunction:
    """Base class for objectives over the ground set ``0..n-1``.

    Subclasses implement :meth:`value` on a sorted array of distinct ids.
    The batch methods may be overridden with faster code paths, which must
    return exactly what :meth:`value` returns on the same sets.
    """

    n: int = 0

    def value(self, ids: np.ndarray) -> float:
        raise NotImplementedError

    def values_with(self, base: np.ndarray, candidates: np.ndarray) -> np.ndarray:
        """``f(base | {x})`` for every ``x`` in ``candidates``."""
        out = np.empty(len(candidates), dtype=np.float64)
        for i, x in enumerate(candidates):
            out[i] = self.value(np.union1d(base, [x]))
        return out

    def prefix_values(self, base: np.ndarray, seq: np.ndarray,
                      cuts: Sequence[int]) -> np.ndarray:
        """``f(base | seq[:c])`` for every cut ``c``."""
        out = np.empty(len(cuts), dtype=np.float64)
        for i, c in enumerate(cuts):
            out[i] = self.value(np.union1d(base, seq[:c]))
        return out


class CallableFunction(SetFunction):
    """Wrap a plain Python callable taking a frozenset of ids."""

    def __init__(self, n: int, fn: Callable[[frozenset], float]):
        self.n = int(n)
        self._fn = fn

    def value(self, ids):
        return float(self._fn(frozenset(int(i) for i in ids)))


def _as_ids(items, n: int) -> np.ndarray:
    if isinstance(items, np.ndarray):
        arr = items.astype(np.int64, copy=False).ravel()
    else:
        arr = np.fromiter((int(x) for x in items), dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        bad = arr[(arr < 0) | (arr >= n)][0]
        raise ValueError(f"element id {int(bad)} outside ground set of size {n}")
    return np.unique(arr)


def _split(count: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, count))
    bounds = np.linspace(0, count, parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


class Oracle:
    """Instrumented gateway to a :class:`SetFunction`.

    A restricted oracle (see :meth:`restrict`) evaluates ``f(base | S)`` and
    shares the ledger and worker pool of its parent.
    """

    def __init__(self, fn: SetFunction, *, workers: int = 1,
                 ledger: QueryLedger | None = None):
        if workers < 1:
            raise ValueError("workers must be >= 1")
        self.fn = fn
        self.n = int(fn.n)
        self.ledger = ledger if ledger is not None else QueryLedger()
        self.workers = int(workers)
        self.base = np.empty(0, dtype=np.int64)
        self._base_value: float | None = 0.0
        self._pool: ThreadPoolExecutor | None = None
        self._parent: Oracle | None = None

    # -- plumbing -----------------------------------------------------------
    def _executor(self) -> ThreadPoolExecutor | None:
        root = self
        while root._parent is not None:
            root = root._parent
        if root.workers == 1:
            return None
        if root._pool is None:
            root._pool = ThreadPoolExecutor(max_workers=root.workers)
        return root._pool

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def ids(self, items) -> np.ndarray:
        return _as_ids(items, self.n)

    def _full(self, ids: np.ndarray) -> np.ndarray:
        return np.union1d(self.base, ids) if self.base.size else ids

    @contextlib.contextmanager
    def round(self):
        """Group the enclosed queries into one adaptive round."""
        self.ledger.add_round()
        yield

    # -- queries ------------------------------------------------------------
    def evaluate(self, S) -> float:
        ids = self.ids(S)
        self.ledger.add_queries(1)
        return float(self.fn.value(self._full(ids)))

    def peek(self, S) -> float:
        """Evaluate without touching the ledger (bookkeeping and tests only)."""
        return float(self.fn.value(self._full(self.ids(S))))

    def marginal_gain(self, x: int, S, f_of_S: float) -> float:
        if not 0 <= int(x) < self.n:
            raise ValueError(f"element id {x} outside ground set of size {self.n}")
        return self.evaluate(list(S) + [int(x)]) - f_of_S

    @property
    def empty_value(self) -> float:
        """Value of the empty set for this handle, i.e. ``f(base)``."""
        if self._base_value is None:
            self._base_value = self.evaluate(())
        return self._base_value

    def values_with(self, S, candidates) -> np.ndarray:
        """``f(S | {x})`` for each candidate; one query per candidate."""
        base = self._full(self.ids(S))
        cand = np.asarray(candidates, dtype=np.int64)
        if cand.size and (cand.min() < 0 or cand.max() >= self.n):
            raise ValueError("candidate id outside ground set")
        self.ledger.add_queries(len(cand))
        if len(cand) == 0:
            return np.empty(0)
        pool = self._executor()
        if pool is None:
            return self.fn.values_with(base, cand)
        out = np.empty(len(cand), dtype=np.float64)
        chunks = _split(len(cand), self.workers * 4)
        futures = [(a, b, pool.submit(self.fn.values_with, base, cand[a:b]))
                   for a, b in chunks]
        for a, b, fut in futures:
            out[a:b] = fut.result()
        return out

    def prefix_values(self, S, seq, cuts: Sequence[int]) -> np.ndarray:
        """``f(S | seq[:c])`` for each cut; one query per cut."""
        base = self._full(self.ids(S))
        seq = np.asarray(seq, dtype=np.int64)
        cuts = [int(c) for c in cuts]
        self.ledger.add_queries(len(cuts))
        if not cuts:
            return np.empty(0)
        pool = self._executor()
        if pool is None:
            return self.fn.prefix_values(base, seq, cuts)
        out = np.empty(len(cuts), dtype=np.float64)
        chunks = _split(len(cuts), self.workers)
        futures = []
        for a, b in chunks:
            part = cuts[a:b]
            futures.append((a, b, pool.submit(self.fn.prefix_values, base,
                                              seq[:max(part)], part)))
        for a, b, fut in futures:
            out[a:b] = fut.result()
        return out

    def restrict(self, A, value: float | None = None) -> "Oracle":
        """Handle computing ``f(A | S)``; ``value`` caches ``f(A)`` if known."""
        child = Oracle.__new__(Oracle)
        child.fn = self.fn
        child.n = self.n
        child.ledger = self.ledger
        child.workers = self.workers
        child.base = self._full(self.ids(A))
        child._base_value = value
        child._pool = None
        child._parent = self
        return child

    def candidates(self) -> np.ndarray:
        """Ground-set ids not already in the restriction base."""
        return np.setdiff1d(np.arange(self.n, dtype=np.int64), self.base)


# -- utilities ---------------------------------------------------------------

def singleton_values(oracle: Oracle) -> np.ndarray:
    """All singleton values in one round of ``n`` queries."""
    with oracle.round():
        return oracle.values_with((), np.arange(oracle.n))


def rank_singletons(values: np.ndarray) -> np.ndarray:
    """Element ids sorted by descending value, ties to the smaller id."""
    values = np.asarray(values)
    return np.lexsort((np.arange(len(values)), -values))


def top_singletons(oracle: Oracle, m: int) -> list[tuple[int, float]]:
    if not 1 <= m <= oracle.n:
        raise ValueError(f"m must lie in [1, {oracle.n}], got {m}")
    vals = singleton_values(oracle)
    order = rank_singletons(vals)[:m]
    return [(int(i), float(vals[i])) for i in order]


def top_sum(values: np.ndarray, k: int) -> float:
    order = rank_singletons(values)[:k]
    return float(math.fsum(values[order]))


def singleton_sum_upper_bound(oracle: Oracle, k: int) -> float:
    """Sum of the ``k`` largest singleton values, an upper bound on OPT."""
    if not 1 <= k <= oracle.n:
        raise ValueError(f"k must lie in [1, {oracle.n}], got {k}")
    return top_sum(singleton_values(oracle), k)


@dataclass
class SubmodularityReport:
    trials: int
    passed: bool
    violation: dict | None = None
    checked: int = field(default=0)

    def __bool__(self):
        return self.passed


def check_submodularity(oracle: Oracle, trials: int = 100,
                        rng: np.random.Generator | int | None = None
                        ) -> SubmodularityReport:
    """Random spot checks of normalization, monotonicity and diminishing returns.

    Each trial draws ``S <= T`` and ``x`` outside ``T`` and checks
    ``f(S) <= f(T) + tol`` and ``gain(x|T) <= gain(x|S) + tol`` with
    ``tol = 1e-9 * max(1, |f(T)|)``.  Uses uncounted evaluations.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(rng)
    pool = oracle.candidates()
    f0 = oracle.peek(())
    # a restriction f(A | .) is normalized only after subtracting f(A)
    if oracle.base.size == 0 and abs(f0) > 1e-9:
        return SubmodularityReport(trials, False, {"kind": "normalization", "f_empty": f0})
    if len(pool) == 0:
        return SubmodularityReport(trials, True)
    for t in range(trials):
        i = int(rng.integers(len(pool)))
        x = int(pool[i])
        rest = np.delete(pool, i)
        T = rng.choice(rest, size=int(rng.integers(len(rest) + 1)), replace=False)
        S = rng.choice(T, size=int(rng.integers(len(T) + 1)), replace=False) if len(T) else T
        fS, fT = oracle.peek(S), oracle.peek(T)
        gS = oracle.peek(np.append(S, x)) - fS
        gT = oracle.peek(np.append(T, x)) - fT
        tol = 1e-9 * max(1.0, abs(fT))
        witness = {"trial": t, "S": sorted(int(i) for i in S),
                   "T": sorted(int(i) for i in T), "x": x,
                   "f_S": fS, "f_T": fT, "gain_S": gS, "gain_T": gT}
        if fS > fT + tol:
            return SubmodularityReport(trials, False, {"kind": "monotonicity", **witness}, t + 1)
        if gT > gS + tol:
            return SubmodularityReport(trials, False, {"kind": "diminishing_returns", **witness}, t + 1)
    return SubmodularityReport(trials, True, None, trials)
