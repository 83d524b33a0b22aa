"""Experiment runner: build the instance, run every (algorithm, k, rep) cell, tabulate."""
from __future__ import annotations

import logging
import os
import zlib

from .algorithms import REGISTRY
from .dataio import (ConfigError, ExperimentConfig, ResultRow, ResultTable, load_dense_matrix,
                     load_edge_list, load_tweet_corpus)
from .generators import generate_graph, synth_corpus, synth_similarity, synth_traffic_weights
from .objectives import (ImageSummarization, InfluenceMax, MaxCover, RevenueMax, TrafficMonitor,
                         TweetSummarization)
from .oracle import Oracle, SetFunction

log = logging.getLogger(__name__)

SEED_MODULUS = 2**31


def cell_seed(base_seed: int, algorithm: str, k: int, rep: int, attempt: int = 0) -> int:
    """Seed for one cell, a pure function of its coordinates (crc32 is stable across runs)."""
    key = f"{algorithm}|{k}|{rep}" + (f"|retry{attempt}" if attempt else "")
    return (base_seed + zlib.crc32(key.encode())) % SEED_MODULUS


def default_threads(requested: int | None) -> int:
    cpus = os.cpu_count() or 1
    return max(1, requested) if requested else cpus


def build_objective(cfg: ExperimentConfig) -> SetFunction:
    """Materialize the objective described by ``cfg`` (generation or file load)."""
    ds = cfg.dataset
    seed = ds.get("seed", cfg.seed)
    params = dict(cfg.objective_params)
    gen = ds.get("generator")
    kind = cfg.objective

    if kind in ("max_cover", "traffic", "influence", "revenue"):
        if gen:
            extra = {k: v for k, v in gen.items() if k not in ("model", "n")}
            graph = generate_graph(gen["model"], int(gen["n"]), seed=seed, **extra)
        else:
            graph = load_edge_list(ds["path"])
        if kind == "max_cover":
            return MaxCover(graph, closed=params.get("closed", True))
        if kind == "traffic":
            return TrafficMonitor(graph, synth_traffic_weights(graph.n, seed=seed))
        if kind == "influence":
            return InfluenceMax(graph, params.get("p", 0.01))
        return RevenueMax.from_graph(graph, seed=seed, alpha=params.get("alpha", 0.9))

    if kind == "image":
        if gen:
            return ImageSummarization(synth_similarity(int(gen["n"]), gen.get("dim", 64),
                                                       gen.get("clusters", 10), seed=seed))
        return ImageSummarization(load_dense_matrix(ds["path"],
                                                    features=ds.get("format") == "features"))
    if kind == "tweet":
        if gen:
            return TweetSummarization(synth_corpus(int(gen["n"]), gen.get("vocab", 200),
                                                   gen.get("max_keywords", 6), seed=seed))
        return TweetSummarization(load_tweet_corpus(ds["path"]))
    raise ConfigError([f"unknown objective {kind!r}"])


def run_cell(oracle: Oracle, algorithm: str, params: dict, k: int, seed: int, retries: int,
             base_seed: int, rep: int):
    """Run one cell, retrying failed randomized runs with fresh seeds."""
    fn, randomized = REGISTRY[algorithm]
    attempt = 0
    while True:
        record = fn(oracle, k, rng=seed, **params) if randomized else fn(oracle, k, **params)
        record.attempts = attempt + 1
        if not randomized:
            record.seed = None
        if not record.failed or attempt >= retries:
            return record
        attempt += 1
        seed = cell_seed(base_seed, algorithm, k, rep, attempt)
        log.info("%s k=%d rep=%d failed; retrying with seed %d", algorithm, k, rep, seed)


def run_experiment(cfg: ExperimentConfig, threads: int | None = None,
                   progress=None) -> ResultTable:
    """Execute every cell of ``cfg``; data and config problems surface before any run."""
    fn = build_objective(cfg)
    ks = cfg.k_values(fn.n)
    for spec in cfg.algorithms:
        if spec.params.get("rng") is not None:
            raise ConfigError([f"{spec.name}: pass seeds through 'seed', not 'rng'"])

    table = ResultTable()
    workers = default_threads(threads if threads is not None else cfg.threads)
    with Oracle(fn, workers=workers) as oracle:
        for spec in cfg.algorithms:
            for k in ks:
                for rep in range(cfg.repetitions):
                    seed = cell_seed(cfg.seed, spec.name, k, rep)
                    record = run_cell(oracle, spec.name, spec.params, k, seed, cfg.retries,
                                      cfg.seed, rep)
                    row = ResultRow.from_record(record, cfg.objective, rep)
                    table.add(row)
                    if progress:
                        progress(row)
    return table


def format_aggregate(table: ResultTable) -> str:
    """Plain-text table of mean +- std per (algorithm, k)."""
    agg = table.aggregate()
    head = f"{'algorithm':<22}{'k':>7}{'runs':>6}{'fail':>6}{'value':>26}{'norm':>18}" \
           f"{'queries':>24}{'rounds':>20}{'seconds':>18}"
    lines = [head, "-" * len(head)]
    for (alg, k), s in agg.items():
        def pm(name, fmt):
            if name not in s:
                return "-"
            mean, std = s[name]
            return f"{mean:{fmt}} +- {std:{fmt}}"
        lines.append(f"{alg:<22}{k:>7}{s['runs']:>6}{s['failed']:>6}{pm('value', '.4g'):>26}"
                     f"{pm('value_norm', '.3f'):>18}{pm('queries', '.4g'):>24}"
                     f"{pm('rounds', '.4g'):>20}{pm('wall_seconds', '.3f'):>18}")
    return "\n".join(lines)
