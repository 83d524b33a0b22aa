"""Seeded synthetic instances: random graphs and stand-ins for the real datasets."""
from __future__ import annotations

import networkx as nx
import numpy as np

from .objectives import CoverageGraph, KeywordCorpus, cosine_similarity

# defaults used for the MaxCover graphs in the experiments
ER_P = 0.0001
WS_RING_DEGREE = 10
WS_P = 0.1
BA_M = 5


def gen_er(n: int, p: float = ER_P, seed=None) -> CoverageGraph:
    """Erdos-Renyi G(n, p)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    g = nx.fast_gnp_random_graph(n, p, seed=seed) if 0 < p < 1 else nx.gnp_random_graph(n, p)
    return CoverageGraph.from_networkx(g)


def gen_ws(n: int, ring_degree: int = WS_RING_DEGREE, p: float = WS_P, seed=None) -> CoverageGraph:
    """Watts-Strogatz ring lattice with each edge rewired with probability ``p``."""
    if ring_degree < 2 or ring_degree % 2 or ring_degree >= n:
        raise ValueError("ring_degree must be even with 2 <= ring_degree < n")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return CoverageGraph.from_networkx(nx.watts_strogatz_graph(n, ring_degree, p, seed=seed))


def gen_ba(n: int, m: int = BA_M, seed=None) -> CoverageGraph:
    """Barabasi-Albert preferential attachment grown from a complete core on ``m`` nodes.

    Each new node picks ``m`` distinct existing nodes with probability
    proportional to their current degree, giving ``C(m, 2) + m (n - m)`` edges.
    """
    if not 1 <= m < n:
        raise ValueError("need 1 <= m < n")
    rng = np.random.default_rng(seed)
    edges = [(u, v) for u in range(m) for v in range(u + 1, m)]
    # each node appears once per incident edge; sampling this list is degree-proportional
    endpoints = [u for e in edges for u in e]
    for new in range(m, n):
        if not endpoints:
            targets = list(range(new))[:m]
        else:
            targets = set()
            while len(targets) < m:
                draw = rng.integers(len(endpoints), size=m - len(targets))
                for i in draw:
                    targets.add(endpoints[i])
                    if len(targets) == m:
                        break
            targets = sorted(targets)
        for t in targets:
            edges.append((t, new))
            endpoints.extend((t, new))
    return CoverageGraph.from_edges(n, edges)


def generate_graph(model: str, n: int, seed=None, **params) -> CoverageGraph:
    model = model.lower()
    if model == "er":
        return gen_er(n, params.get("p", ER_P), seed)
    if model == "ws":
        return gen_ws(n, params.get("ring", params.get("ring_degree", WS_RING_DEGREE)),
                      params.get("p", WS_P), seed)
    if model == "ba":
        return gen_ba(n, params.get("m", BA_M), seed)
    raise ValueError(f"unknown graph model {model!r} (expected er, ws or ba)")


def synth_features(n: int, dim: int = 64, clusters: int = 10, seed=None) -> np.ndarray:
    """Non-negative clustered feature vectors, a stand-in for image pixels."""
    rng = np.random.default_rng(seed)
    centers = rng.random((clusters, dim))
    labels = rng.integers(clusters, size=n)
    return np.clip(centers[labels] + 0.15 * rng.standard_normal((n, dim)), 0.0, None)


def synth_similarity(n: int, dim: int = 64, clusters: int = 10, seed=None) -> np.ndarray:
    return cosine_similarity(synth_features(n, dim, clusters, seed))


def synth_corpus(n: int, vocab: int = 200, max_keywords: int = 6, seed=None) -> KeywordCorpus:
    """Tweets with Zipf-like keyword popularity and heavy-tailed retweet counts."""
    rng = np.random.default_rng(seed)
    popularity = 1.0 / np.arange(1, vocab + 1)
    popularity /= popularity.sum()
    tweets = []
    for _ in range(n):
        size = int(rng.integers(1, max_keywords + 1))
        kws = rng.choice(vocab, size=min(size, vocab), replace=False, p=popularity)
        retweets = int(rng.geometric(0.02)) - 1
        tweets.append((retweets, kws.tolist()))
    return KeywordCorpus.from_tweets(tweets, list(range(vocab)))


def synth_traffic_weights(n: int, seed=None) -> np.ndarray:
    """Log-normal per-location traffic volumes."""
    rng = np.random.default_rng(seed)
    return rng.lognormal(mean=8.0, sigma=1.0, size=n)
