"""Monotone submodular objectives used in the benchmark applications.

All instance data is immutable after construction, so the value functions
are safe to call from several threads at once.  Where a class overrides
``values_with`` / ``prefix_values`` it does so by reusing the state of the
base set and then applying the very same formula as ``value``; the results
are identical to evaluating each set from scratch.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .oracle import SetFunction


@dataclass(frozen=True, eq=False)
class CoverageGraph:
    """Undirected simple graph in CSR form with sorted neighbor lists."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "CoverageGraph":
        e = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= n:
                raise ValueError(f"edge endpoint outside 0..{n - 1}")
            if np.any(e[:, 0] == e[:, 1]):
                u = int(e[e[:, 0] == e[:, 1]][0, 0])
                raise ValueError(f"self-loop on node {u}")
        both = np.concatenate([e, e[:, ::-1]])
        both = np.unique(both, axis=0) if both.size else both
        counts = np.bincount(both[:, 0], minlength=n) if both.size else np.zeros(n, dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        indices = both[:, 1].copy() if both.size else np.empty(0, dtype=np.int64)
        return cls(int(n), indptr, indices)

    @classmethod
    def from_networkx(cls, g) -> "CoverageGraph":
        nodes = sorted(g.nodes())
        if nodes != list(range(len(nodes))):
            raise ValueError("networkx graph must use nodes 0..n-1")
        return cls.from_edges(len(nodes), g.edges())

    @property
    def num_edges(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    def edges(self) -> list[tuple[int, int]]:
        src = np.repeat(np.arange(self.n), self.degree())
        keep = src < self.indices
        return list(zip(src[keep].tolist(), self.indices[keep].tolist()))

    def __eq__(self, other):
        if not isinstance(other, CoverageGraph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    @cached_property
    def closed(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR of closed neighborhoods ``{u} | N(u)``."""
        deg = self.degree() + 1
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        indices = np.empty(indptr[-1], dtype=np.int64)
        indices[indptr[:-1]] = np.arange(self.n)
        mask = np.ones(indptr[-1], dtype=bool)
        mask[indptr[:-1]] = False
        indices[mask] = self.indices
        return indptr, indices


def _gather(indptr: np.ndarray, indices: np.ndarray, rows: np.ndarray):
    """Concatenated CSR rows plus the position of the source row for each entry."""
    rows = np.asarray(rows, dtype=np.int64)
    starts = indptr[rows]
    lengths = indptr[rows + 1] - starts
    total = int(lengths.sum())
    labels = np.repeat(np.arange(len(rows)), lengths)
    if total == 0:
        return np.empty(0, dtype=np.int64), labels
    offsets = np.cumsum(lengths) - lengths
    flat_pos = np.arange(total) - np.repeat(offsets, lengths) + np.repeat(starts, lengths)
    return indices[flat_pos], labels


class _GraphCoverage(SetFunction):
    def __init__(self, graph: CoverageGraph, closed: bool = True):
        self.graph = graph
        self.n = graph.n
        self.closed = closed
        if closed:
            self._indptr, self._indices = graph.closed
        else:
            self._indptr, self._indices = graph.indptr, graph.indices

    def covered(self, ids: np.ndarray) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        flat, _ = _gather(self._indptr, self._indices, ids)
        mask[flat] = True
        return mask

    def _first_cover(self, base: np.ndarray, seq: np.ndarray) -> np.ndarray:
        """Sorted sequence positions at which a node outside ``base`` coverage is first hit."""
        covered = self.covered(base)
        flat, pos = _gather(self._indptr, self._indices, seq)
        fresh = ~covered[flat]
        flat, pos = flat[fresh], pos[fresh]
        _, first = np.unique(flat, return_index=True)
        return np.sort(pos[first])


class MaxCover(_GraphCoverage):
    """Number of nodes covered by ``S``.

    With ``closed=True`` (default) a node is covered when it is in ``S`` or
    adjacent to a member of ``S``.  ``closed=False`` counts only nodes having
    at least one neighbor in ``S``.
    """

    def value(self, ids):
        return float(np.count_nonzero(self.covered(ids)))

    def values_with(self, base, candidates):
        uncovered = (~self.covered(base)).astype(np.float64)
        base_count = float(self.n - uncovered.sum())
        flat, labels = _gather(self._indptr, self._indices, candidates)
        gains = np.bincount(labels, weights=uncovered[flat], minlength=len(candidates))
        return base_count + gains

    def prefix_values(self, base, seq, cuts):
        base_count = float(np.count_nonzero(self.covered(base)))
        first = self._first_cover(base, seq)
        return base_count + np.searchsorted(first, np.asarray(cuts), side="left").astype(np.float64)


class TrafficMonitor(_GraphCoverage):
    """Total traffic weight over the closed neighborhood of the sensor set."""

    def __init__(self, graph: CoverageGraph, weights):
        super().__init__(graph, closed=True)
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (graph.n,):
            raise ValueError("need one traffic weight per node")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("traffic weights must be finite and non-negative")
        self.weights = w

    def _total(self, mask: np.ndarray) -> float:
        return float(np.sum(np.where(mask, self.weights, 0.0)))

    def value(self, ids):
        return self._total(self.covered(ids))

    def values_with(self, base, candidates):
        mask = self.covered(base)
        out = np.empty(len(candidates))
        for i, x in enumerate(candidates):
            m = mask.copy()
            m[self._indices[self._indptr[x]:self._indptr[x + 1]]] = True
            out[i] = self._total(m)
        return out

    def prefix_values(self, base, seq, cuts):
        mask = self.covered(base)
        out = np.empty(len(cuts))
        order = np.argsort(cuts, kind="stable")
        done = 0
        for j in order:
            for x in seq[done:cuts[j]]:
                mask[self._indices[self._indptr[x]:self._indptr[x + 1]]] = True
            done = max(done, cuts[j])
            out[j] = self._total(mask)
        return out


class InfluenceMax(SetFunction):
    """Expected number of influenced users under independent activation.

    ``f_i(S) = 1`` for ``i`` in ``S``; otherwise ``1 - (1 - p)^c`` where ``c``
    counts the neighbors of ``i`` inside ``S``.
    """

    def __init__(self, graph: CoverageGraph, p: float = 0.01):
        if not 0.0 < p < 1.0:
            raise ValueError("activation probability must lie in (0, 1)")
        self.graph = graph
        self.n = graph.n
        self.p = float(p)
        max_deg = int(graph.degree().max()) if graph.n else 0
        # lookup table keeps every evaluation path bit-identical
        self._table = 1.0 - (1.0 - self.p) ** np.arange(max_deg + 2, dtype=np.float64)

    def _terms(self, ids):
        flat, _ = _gather(self.graph.indptr, self.graph.indices, ids)
        counts = np.bincount(flat, minlength=self.n)
        terms = self._table[counts]
        terms[ids] = 1.0
        return counts, terms

    def value(self, ids):
        return float(np.sum(self._terms(ids)[1]))

    def values_with(self, base, candidates):
        counts, terms = self._terms(base)
        in_base = np.zeros(self.n, dtype=bool)
        in_base[base] = True
        base_value = float(np.sum(terms))
        out = np.empty(len(candidates))
        for i, x in enumerate(candidates):
            if in_base[x]:
                out[i] = base_value
                continue
            nb = self.graph.neighbors(x)
            t = terms.copy()
            t[nb] = np.where(in_base[nb], 1.0, self._table[counts[nb] + 1])
            t[x] = 1.0
            out[i] = np.sum(t)
        return out


class ImageSummarization(SetFunction):
    """``f(S) = sum_i max_{j in S} s[i, j]`` over a non-negative similarity matrix."""

    def __init__(self, similarity):
        sim = np.asarray(similarity, dtype=np.float64)
        if sim.ndim != 2 or sim.shape[0] != sim.shape[1]:
            raise ValueError("similarity matrix must be square")
        if not np.all(np.isfinite(sim)) or np.any(sim < 0):
            raise ValueError("similarities must be finite and non-negative")
        self.n = sim.shape[0]
        self.similarity = sim
        self._cols = np.ascontiguousarray(sim.T)

    def _best(self, ids):
        if len(ids) == 0:
            return np.zeros(self.n)
        return np.max(self._cols[ids], axis=0)

    def value(self, ids):
        if len(ids) == 0:
            return 0.0
        return float(np.sum(self._best(ids)))

    def values_with(self, base, candidates):
        best = self._best(base)
        out = np.empty(len(candidates))
        for i, x in enumerate(candidates):
            out[i] = np.sum(np.maximum(best, self._cols[x]))
        return out


@dataclass(frozen=True, eq=False)
class KeywordCorpus:
    retweets: np.ndarray
    indptr: np.ndarray
    keywords: np.ndarray
    vocabulary: list = field(default_factory=list)

    @classmethod
    def from_tweets(cls, tweets: Sequence[tuple[int, Iterable[int]]],
                    vocabulary: list | None = None) -> "KeywordCorpus":
        retweets = np.array([int(r) for r, _ in tweets], dtype=np.int64)
        if np.any(retweets < 0):
            raise ValueError("retweet counts must be non-negative")
        rows = [np.unique(np.asarray(list(kw), dtype=np.int64)) for _, kw in tweets]
        indptr = np.zeros(len(rows) + 1, dtype=np.int64)
        np.cumsum([len(r) for r in rows], out=indptr[1:])
        kws = np.concatenate(rows) if rows else np.empty(0, dtype=np.int64)
        n_words = int(kws.max()) + 1 if kws.size else 0
        vocab = list(vocabulary) if vocabulary is not None else list(range(n_words))
        if kws.size and (kws.min() < 0 or kws.max() >= len(vocab)):
            raise ValueError("keyword id outside vocabulary")
        return cls(retweets, indptr, kws, vocab)

    @property
    def n(self) -> int:
        return len(self.retweets)

    @property
    def vocab_size(self) -> int:
        return len(self.vocabulary)


class TweetSummarization(SetFunction):
    """``f(S) = sum_w sqrt(total retweets of selected tweets containing w)``."""

    def __init__(self, corpus: KeywordCorpus):
        self.corpus = corpus
        self.n = corpus.n
        self._w = corpus.retweets.astype(np.float64)

    def _totals(self, ids):
        flat, labels = _gather(self.corpus.indptr, self.corpus.keywords, ids)
        totals = np.bincount(flat, weights=self._w[ids][labels], minlength=self.corpus.vocab_size)
        return totals.astype(np.float64, copy=False)  # bincount of nothing comes back as int

    def value(self, ids):
        return float(np.sum(np.sqrt(self._totals(ids))))

    def values_with(self, base, candidates):
        totals = self._totals(base)
        base_value = float(np.sum(np.sqrt(totals)))
        in_base = np.zeros(self.n, dtype=bool)
        in_base[base] = True
        out = np.empty(len(candidates))
        kw, ptr = self.corpus.keywords, self.corpus.indptr
        for i, x in enumerate(candidates):
            if in_base[x]:
                out[i] = base_value
                continue
            t = totals.copy()
            # integer-valued sums stay exact in float64
            t[kw[ptr[x]:ptr[x + 1]]] += self._w[x]
            out[i] = np.sum(np.sqrt(t))
        return out


class RevenueMax(SetFunction):
    """``f(S) = sum_i (sum_{j in S} w[i, j]) ** alpha`` over users ``i``.

    ``weights`` has one row per user and one column per ground-set element.
    """

    def __init__(self, weights, alpha: float = 0.9):
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 2:
            raise ValueError("weights must be a users x candidates matrix")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and non-negative")
        if not 0.0 < alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        self.weights = w
        self.alpha = float(alpha)
        self.n = w.shape[1]

    @classmethod
    def from_graph(cls, graph: CoverageGraph, seed=None, alpha: float = 0.9) -> "RevenueMax":
        """Symmetric uniform(0, 1) influence weights on the edges of ``graph``."""
        rng = np.random.default_rng(seed)
        w = np.zeros((graph.n, graph.n))
        edges = np.asarray(graph.edges(), dtype=np.int64).reshape(-1, 2)
        vals = rng.random(len(edges))
        w[edges[:, 0], edges[:, 1]] = vals
        w[edges[:, 1], edges[:, 0]] = vals
        return cls(w, alpha)

    def value(self, ids):
        if len(ids) == 0:
            return 0.0
        totals = np.ascontiguousarray(self.weights[:, ids]).sum(axis=1)
        return float(np.sum(totals ** self.alpha))


class Modular(SetFunction):
    """Additive function ``f(S) = sum of weights``; the simplest test objective."""

    def __init__(self, weights):
        w = np.asarray(weights, dtype=np.float64)
        if np.any(w < 0):
            raise ValueError("modular weights must be non-negative for monotonicity")
        self.weights = w
        self.n = len(w)

    def value(self, ids):
        if len(ids) == 0:
            return 0.0
        return float(np.sum(self.weights[ids]))


def max_cover_value(graph: CoverageGraph, S, closed: bool = True) -> float:
    return MaxCover(graph, closed).value(np.unique(np.asarray(list(S), dtype=np.int64)))


def image_summ_value(sim, S) -> float:
    return ImageSummarization(sim).value(np.unique(np.asarray(list(S), dtype=np.int64)))


def tweet_summ_value(corpus: KeywordCorpus, S) -> float:
    return TweetSummarization(corpus).value(np.unique(np.asarray(list(S), dtype=np.int64)))


def influence_value(graph: CoverageGraph, p: float, S) -> float:
    return InfluenceMax(graph, p).value(np.unique(np.asarray(list(S), dtype=np.int64)))


def revenue_value(weights, S, alpha: float = 0.9) -> float:
    return RevenueMax(weights, alpha).value(np.unique(np.asarray(list(S), dtype=np.int64)))


def traffic_value(graph: CoverageGraph, weights, S) -> float:
    return TrafficMonitor(graph, weights).value(np.unique(np.asarray(list(S), dtype=np.int64)))


def cosine_similarity(features) -> np.ndarray:
    """Pairwise cosine similarity of the rows of a feature matrix; zero rows map to 0."""
    x = np.asarray(features, dtype=np.float64)
    norms = np.linalg.norm(x, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = x / safe[:, None]
    sim = unit @ unit.T
    np.fill_diagonal(sim, 1.0)
    return np.clip(sim, 0.0, 1.0)
