"""File formats, experiment configuration and result tables.

Config files are YAML.  Grammar (keys not listed are rejected)::

    objective: max_cover          # or {kind: influence, p: 0.01}; kinds in OBJECTIVES
    dataset:                      # exactly one of generator / path
      generator: {model: ba, n: 10000, m: 5}   # er | ws | ba | features | corpus
      path: graph.txt
      format: edge_list           # edge_list | matrix | features | tweets
      seed: 0                     # seeds generators and synthetic weights
    algorithms:                   # names from algorithms.REGISTRY
      - lazy_greedy
      - {name: ls_pgb, epsilon: 0.1, epsilon_ls: 0.21}
    k: [10, 100, 1000]            # or a geometric range such as "n/1000..n/10 x2"
    repetitions: 5
    seed: 0
    threads: 8                    # optional; defaults to the machine's CPU count
    retries: 3
    output: results.csv
    timing: true                  # false writes wall_seconds = 0 for byte-stable CSVs
"""
from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .algorithms import REGISTRY
from .objectives import CoverageGraph, KeywordCorpus, cosine_similarity


class DataError(ValueError):
    """Malformed input file; the message carries the path and line number."""


class ConfigError(ValueError):
    """Invalid experiment configuration; ``problems`` lists every issue found."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid config:\n  " + "\n  ".join(self.problems))


def _read_lines(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from exc


# ---------------------------------------------------------------- graphs

_HEADER = re.compile(r"#\s*n\s*=\s*(\d+)\s*$")


def load_edge_list(path, *, remap: bool = False):
    """Read whitespace-separated ``u v`` pairs; ``#`` lines are comments.

    A ``# n=<N>`` comment fixes the node count, otherwise ``n = 1 + max id``.
    Duplicate and reversed edges collapse.  With ``remap=True`` arbitrary
    non-negative ids are relabelled densely in sorted order and the result is
    ``(graph, ids)`` where ``ids[i]`` is the original label of node ``i``.
    """
    n_header = None
    pairs = []
    for lineno, raw in enumerate(_read_lines(path), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _HEADER.match(line)
            if m:
                n_header = int(m.group(1))
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DataError(f"{path}:{lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise DataError(f"{path}:{lineno}: non-integer node id in {raw!r}") from None
        if u < 0 or v < 0:
            raise DataError(f"{path}:{lineno}: negative node id")
        if u == v:
            raise DataError(f"{path}:{lineno}: self-loop on node {u}")
        pairs.append((u, v))

    edges = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if remap:
        ids, inverse = np.unique(edges, return_inverse=True)
        n = len(ids) if n_header is None else max(n_header, len(ids))
        return CoverageGraph.from_edges(n, inverse.reshape(-1, 2)), ids
    n = int(edges.max()) + 1 if edges.size else 0
    if n_header is not None:
        if n_header < n:
            raise DataError(f"{path}: header n={n_header} but node id {n - 1} appears")
        n = n_header
    return CoverageGraph.from_edges(n, edges)


def write_edge_list(graph: CoverageGraph, path) -> None:
    """Write ``graph`` so that :func:`load_edge_list` reads back an equal graph."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"# n={graph.n}\n")
            fh.writelines(f"{u} {v}\n" for u, v in graph.edges())
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from exc


# ---------------------------------------------------------------- matrices

def load_dense_matrix(path, *, features: bool = False) -> np.ndarray:
    """Comma-separated numeric rows.

    In matrix mode the result must be square with entries in ``[0, 1]``.  With
    ``features=True`` the rows are feature vectors and their cosine-similarity
    matrix is returned.
    """
    rows = []
    width = None
    for lineno, raw in enumerate(_read_lines(path), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        try:
            row = [float(tok) for tok in raw.split(",")]
        except ValueError:
            raise DataError(f"{path}:{lineno}: non-numeric entry in {raw!r}") from None
        if not all(math.isfinite(x) for x in row):
            raise DataError(f"{path}:{lineno}: non-finite entry")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DataError(f"{path}:{lineno}: expected {width} columns, got {len(row)}")
        rows.append(row)
    mat = np.asarray(rows, dtype=np.float64).reshape(len(rows), width or 0)
    if features:
        return cosine_similarity(mat)
    if mat.shape[0] != mat.shape[1]:
        raise DataError(f"{path}: similarity matrix must be square, got {mat.shape[0]}x{mat.shape[1]}")
    if mat.size and (mat.min() < 0 or mat.max() > 1):
        raise DataError(f"{path}: similarities must lie in [0, 1]")
    return mat


def load_tweet_corpus(path) -> KeywordCorpus:
    """Lines ``retweets<TAB>kw1,kw2,...``; vocabulary in first-appearance order."""
    vocab: dict[str, int] = {}
    tweets = []
    for lineno, raw in enumerate(_read_lines(path), 1):
        if not raw.strip():
            continue
        head, sep, tail = raw.partition("\t")
        if not sep:
            raise DataError(f"{path}:{lineno}: expected 'retweets<TAB>keywords'")
        try:
            count = int(head.strip())
        except ValueError:
            raise DataError(f"{path}:{lineno}: retweet count {head!r} is not an integer") from None
        if count < 0:
            raise DataError(f"{path}:{lineno}: negative retweet count")
        words = [w.strip() for w in tail.split(",") if w.strip()]
        if not words:
            raise DataError(f"{path}:{lineno}: empty keyword list")
        tweets.append((count, [vocab.setdefault(w, len(vocab)) for w in words]))
    return KeywordCorpus.from_tweets(tweets, list(vocab))


# ---------------------------------------------------------------- configuration

OBJECTIVES = ("max_cover", "traffic", "influence", "revenue", "image", "tweet")
GRAPH_OBJECTIVES = ("max_cover", "traffic", "influence", "revenue")
_GENERATORS = {"er": GRAPH_OBJECTIVES, "ws": GRAPH_OBJECTIVES, "ba": GRAPH_OBJECTIVES,
               "features": ("image",), "corpus": ("tweet",)}
_FORMATS = {"edge_list": GRAPH_OBJECTIVES, "matrix": ("image",), "features": ("image",),
            "tweets": ("tweet",)}
_TOP_KEYS = {"objective", "dataset", "algorithms", "k", "repetitions", "seed", "threads",
             "retries", "output", "timing"}
_RANGE = re.compile(r"^\s*(n/\d+|\d+)\s*\.\.\s*(n/\d+|\d+)\s*[x×*]\s*(\d+(?:\.\d+)?)\s*$")


@dataclass
class AlgorithmSpec:
    name: str
    params: dict = field(default_factory=dict)


@dataclass
class ExperimentConfig:
    objective: str
    objective_params: dict
    dataset: dict
    algorithms: list[AlgorithmSpec]
    k_spec: list[int] | str
    repetitions: int = 5
    seed: int = 0
    threads: int | None = None
    retries: int = 3
    output: str | None = None
    timing: bool = True
    source: str | None = None

    def dataset_size(self) -> int | None:
        gen = self.dataset.get("generator")
        return int(gen["n"]) if gen else None

    def k_values(self, n: int) -> list[int]:
        """Expand the k schedule for a ground set of size ``n`` and validate it."""
        values = expand_k(self.k_spec, n)
        bad = [k for k in values if not 1 <= k <= n]
        if not values:
            raise ConfigError([f"k schedule {self.k_spec!r} is empty for n={n}"])
        if bad:
            raise ConfigError([f"k={k} outside 1..{n}" for k in bad])
        return values


def expand_k(spec, n: int) -> list[int]:
    """Explicit list, or ``"lo..hi xF"`` where ``lo``/``hi`` are ints or ``n/<d>``."""
    if isinstance(spec, list):
        return [int(k) for k in spec]
    m = _RANGE.match(str(spec))
    if not m:
        raise ConfigError([f"k: cannot parse range {spec!r} (expected e.g. 'n/1000..n/10 x2')"])

    def bound(tok):
        return n // int(tok[2:]) if tok.startswith("n/") else int(tok)

    lo, hi, factor = max(bound(m.group(1)), 1), bound(m.group(2)), float(m.group(3))
    if factor <= 1:
        raise ConfigError([f"k: growth factor must exceed 1, got {factor}"])
    out = []
    v = float(lo)
    while round(v) <= hi:
        if not out or round(v) != out[-1]:
            out.append(int(round(v)))
        v *= factor
    return out


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def parse_experiment_config(path) -> ExperimentConfig:
    """Load and validate a YAML config; every problem is reported at once."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([f"{path}: {exc.strerror or exc}"]) from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError([f"{path}: YAML syntax error: {exc}"]) from exc
    cfg = config_from_dict(raw)
    cfg.source = str(path)
    return cfg


def config_from_dict(raw) -> ExperimentConfig:
    problems: list[str] = []
    if not isinstance(raw, dict):
        raise ConfigError(["config must be a mapping at the top level"])
    for key in sorted(set(raw) - _TOP_KEYS):
        problems.append(f"unknown key {key!r}")

    # objective
    obj = raw.get("objective")
    obj_params: dict = {}
    kind = None
    if obj is None:
        problems.append("missing field 'objective'")
    elif isinstance(obj, str):
        kind = obj
    elif isinstance(obj, dict) and isinstance(obj.get("kind"), str):
        kind = obj["kind"]
        obj_params = {k: v for k, v in obj.items() if k != "kind"}
    else:
        problems.append("objective must be a name or a mapping with 'kind'")
    if kind is not None and kind not in OBJECTIVES:
        problems.append(f"unknown objective {kind!r} (expected one of {', '.join(OBJECTIVES)})")
        kind = None

    # dataset
    ds = raw.get("dataset")
    if ds is None:
        problems.append("missing field 'dataset'")
        ds = {}
    elif not isinstance(ds, dict):
        problems.append("dataset must be a mapping")
        ds = {}
    else:
        gen, src = ds.get("generator"), ds.get("path")
        if (gen is None) == (src is None):
            problems.append("dataset needs exactly one of 'generator' or 'path'")
        if gen is not None:
            if not isinstance(gen, dict) or "model" not in gen:
                problems.append("dataset.generator must be a mapping with 'model'")
            else:
                model = gen["model"]
                if model not in _GENERATORS:
                    problems.append(f"unknown generator model {model!r}")
                elif kind is not None and kind not in _GENERATORS[model]:
                    problems.append(f"generator {model!r} cannot feed objective {kind!r}")
                if not _is_int(gen.get("n")) or gen.get("n", 0) < 1:
                    problems.append("dataset.generator.n must be a positive integer")
        if src is not None:
            fmt = ds.get("format", "edge_list")
            if fmt not in _FORMATS:
                problems.append(f"unknown dataset format {fmt!r}")
            elif kind is not None and kind not in _FORMATS[fmt]:
                problems.append(f"format {fmt!r} cannot feed objective {kind!r}")
        if "seed" in ds and not _is_int(ds["seed"]):
            problems.append("dataset.seed must be an integer")

    # algorithms
    algos: list[AlgorithmSpec] = []
    raw_algos = raw.get("algorithms")
    if not raw_algos:
        problems.append("missing field 'algorithms'")
        raw_algos = []
    elif not isinstance(raw_algos, list):
        problems.append("algorithms must be a list")
        raw_algos = []
    for entry in raw_algos:
        if isinstance(entry, str):
            spec = AlgorithmSpec(entry)
        elif isinstance(entry, dict) and isinstance(entry.get("name"), str):
            spec = AlgorithmSpec(entry["name"], {k: v for k, v in entry.items() if k != "name"})
        else:
            problems.append(f"bad algorithm entry {entry!r}")
            continue
        if spec.name not in REGISTRY:
            problems.append(f"unknown algorithm {spec.name!r} (expected one of {', '.join(REGISTRY)})")
            continue
        algos.append(spec)

    # k schedule
    k_spec = raw.get("k")
    if k_spec is None:
        problems.append("missing field 'k'")
    elif isinstance(k_spec, int) and not isinstance(k_spec, bool):
        k_spec = [k_spec]
    if isinstance(k_spec, list):
        for k in k_spec:
            if not _is_int(k):
                problems.append(f"k value {k!r} is not an integer")
            elif k < 1:
                problems.append(f"k={k} must be at least 1")
    elif k_spec is not None and not isinstance(k_spec, str):
        problems.append("k must be an integer, a list or a range string")

    def int_field(name, default, lo):
        v = raw.get(name, default)
        if v is None and default is None:
            return None
        if not _is_int(v) or v < lo:
            problems.append(f"{name} must be an integer >= {lo}")
            return default
        return v

    reps = int_field("repetitions", 5, 1)
    seed = int_field("seed", 0, 0)
    threads = int_field("threads", None, 1)
    retries = int_field("retries", 3, 0)
    timing = raw.get("timing", True)
    if not isinstance(timing, bool):
        problems.append("timing must be true or false")
    output = raw.get("output")
    if output is not None and not isinstance(output, str):
        problems.append("output must be a path string")

    cfg = ExperimentConfig(kind or "", obj_params, ds, algos, k_spec or [], reps, seed, threads,
                           retries, output, bool(timing))
    n = cfg.dataset_size() if not problems else None
    if n is not None and k_spec is not None:
        try:
            cfg.k_values(n)
        except ConfigError as exc:
            problems.extend(exc.problems)
    elif isinstance(k_spec, str) and not problems:
        try:
            expand_k(k_spec, 10**6)
        except ConfigError as exc:
            problems.extend(exc.problems)
    if problems:
        raise ConfigError(problems)
    return cfg


# ---------------------------------------------------------------- results

CSV_HEADER = ("algorithm", "objective", "n", "k", "rep", "seed", "value", "value_norm",
              "queries", "rounds", "wall_seconds", "failed", "attempts")
NORMALIZER = "lazy_greedy"


@dataclass
class ResultRow:
    algorithm: str
    objective: str
    n: int
    k: int
    rep: int
    seed: int | None
    value: float
    queries: int
    rounds: int
    wall_seconds: float
    failed: bool
    attempts: int = 1
    solution: list[int] = field(default_factory=list, repr=False)

    @classmethod
    def from_record(cls, record, objective: str, rep: int) -> "ResultRow":
        return cls(record.algorithm, objective, record.n, record.k, rep, record.seed, record.value,
                   record.queries, record.rounds, record.wall_seconds, record.failed,
                   record.attempts, list(record.solution))


@dataclass
class ResultTable:
    rows: list[ResultRow] = field(default_factory=list)

    def add(self, row: ResultRow) -> None:
        self.rows.append(row)

    def sorted_rows(self) -> list[ResultRow]:
        return sorted(self.rows, key=lambda r: (r.algorithm, r.objective, r.k, r.rep))

    def normalizers(self) -> dict[tuple[str, int], float]:
        """Mean lazy-greedy value per ``(objective, k)``."""
        acc: dict[tuple[str, int], list[float]] = {}
        for r in self.rows:
            if r.algorithm == NORMALIZER and not r.failed:
                acc.setdefault((r.objective, r.k), []).append(r.value)
        return {key: math.fsum(v) / len(v) for key, v in acc.items()}

    def value_norm(self, row: ResultRow, norms=None) -> float | None:
        norms = self.normalizers() if norms is None else norms
        base = norms.get((row.objective, row.k))
        if base is None:
            return None
        if base == 0:
            return 1.0 if row.value == 0 else math.inf
        return row.value / base

    def aggregate(self) -> dict[tuple[str, int], dict]:
        """Mean and sample standard deviation per ``(algorithm, k)``."""
        norms = self.normalizers()
        groups: dict[tuple[str, int], list[ResultRow]] = {}
        for r in self.sorted_rows():
            groups.setdefault((r.algorithm, r.k), []).append(r)
        out = {}
        for key, rows in sorted(groups.items()):
            stats = {"runs": len(rows), "failed": sum(r.failed for r in rows)}
            columns = {
                "value": [r.value for r in rows],
                "queries": [float(r.queries) for r in rows],
                "rounds": [float(r.rounds) for r in rows],
                "wall_seconds": [r.wall_seconds for r in rows],
            }
            normed = [self.value_norm(r, norms) for r in rows]
            if all(v is not None for v in normed):
                columns["value_norm"] = normed
            for name, vals in columns.items():
                arr = np.asarray(vals, dtype=np.float64)
                stats[name] = (float(arr.mean()), float(arr.std(ddof=1)) if len(arr) > 1 else 0.0)
            out[key] = stats
        return out


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_results_csv(table: ResultTable, path, *, timing: bool = True) -> None:
    """One row per run in ``(algorithm, objective, k, rep)`` order.

    ``timing=False`` writes ``wall_seconds`` as 0 so repeated runs produce
    byte-identical files.
    """
    norms = table.normalizers()
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for r in table.sorted_rows():
                w.writerow([_fmt(v) for v in (
                    r.algorithm, r.objective, r.n, r.k, r.rep, r.seed, float(r.value),
                    table.value_norm(r, norms), r.queries, r.rounds,
                    float(r.wall_seconds) if timing else 0.0, r.failed, r.attempts)])
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from exc


def read_results_csv(path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
