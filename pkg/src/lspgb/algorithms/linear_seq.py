"""LinearSeq and its lower-adaptivity variant.

Both approximate the sequential rule "add ``u`` iff its gain is at least
``f(A)/k``" with two adaptive rounds per iteration: a filtering pass and a
parallel pass over the prefix blocks of a random permutation.
"""
from __future__ import annotations

import numpy as np

from ..oracle import Oracle, SolutionSet, rank_singletons, singleton_values, top_sum
from . import bounds
from .blocks import linear_seq_lambdas, select_linear_prefix
from .record import AlgorithmFailure, RunRecord, make_record, measured, resolve_rng


def _linear_seq(oracle: Oracle, k: int, eps: float, rng: np.random.Generator, *,
                low_adaptivity: bool = False, two_phase: bool = False,
                early_stop: bool = False, trace: list | None = None):
    """Core loop; returns ``(A, remaining, failed, info)``.

    ``remaining`` holds the surviving candidates when the loop stops.
    """
    n = oracle.n
    singles = singleton_values(oracle)
    order = rank_singletons(singles)
    a = int(order[0])
    A = SolutionSet([a])
    fA = float(singles[a])
    ell = bounds.linear_seq_iterations(n, k, eps, low_adaptivity)
    ratio = bounds.ls_ratio_bound(eps)
    upper = top_sum(singles, k) if early_stop else None
    stop_size = k if low_adaptivity else 0

    if two_phase and 5 * k < n:
        phases = [np.sort(order[1:5 * k]), np.sort(order[5 * k:])]
    else:
        phases = [np.sort(order[1:])]

    info = {"ell": ell, "iterations": 0, "early_stop": False}
    V = np.empty(0, dtype=np.int64)
    for V in phases:
        for _ in range(ell):
            if len(V) <= stop_size:
                break
            info["iterations"] += 1
            with oracle.round():
                with_x = oracle.values_with(A, V)
                if early_stop:
                    f_tail = oracle.evaluate(A.suffix(k)) if len(A) > k else fA
            if early_stop and f_tail >= ratio * upper:
                info["early_stop"] = True
                return A, V, False, info
            V = V[(with_x - fA) >= fA / k]
            if len(V) <= stop_size:
                break

            perm = rng.permutation(V)
            lambdas = linear_seq_lambdas(k, len(perm), eps)
            with oracle.round():
                prefix = oracle.prefix_values(A, perm, lambdas)
            before = np.concatenate(([fA], prefix[:-1]))
            sizes = np.diff(np.concatenate(([0], lambdas)))
            good = (prefix - before) / sizes >= (1.0 - eps) * before / k
            lam_star = select_linear_prefix(lambdas, good, k)
            if trace is not None:
                trace.append({"lambdas": lambdas, "good": good.tolist(), "lambda_star": lam_star,
                              "f_A": fA, "V": len(perm)})
            if lam_star:
                A.extend(perm[:lam_star])
                fA = float(prefix[lambdas.index(lam_star)])
                V = np.sort(perm[lam_star:])
        if len(V) > stop_size:
            return A, V, True, info
    return A, V, False, info


def _shortcut(name, oracle, k, seed):
    with measured(oracle) as stats:
        solution = list(range(oracle.n)) if k >= oracle.n else []
    return make_record(name, oracle, solution, stats, failed=False, k=k, seed=seed)


def linear_seq(oracle: Oracle, k: int, epsilon: float = 0.1, rng=None, *,
               two_phase: bool = False, early_stop: bool = False,
               trace: list | None = None) -> RunRecord:
    """Constant-factor approximation with linear expected query complexity.

    On success the returned solution (the last ``k`` elements added) has
    value at least ``ls_ratio_bound(epsilon) * OPT``.

    ``two_phase`` runs the main loop first over the ``5k`` best singletons and
    then over the rest; ``early_stop`` returns as soon as the current tail
    provably meets the ratio against the top-``k`` singleton sum.
    """
    bounds.ls_ratio_bound(epsilon)
    gen, seed = resolve_rng(rng)
    if k <= 0 or k >= oracle.n:
        return _shortcut("linear_seq", oracle, k, seed)
    with measured(oracle) as stats:
        A, V, failed, info = _linear_seq(oracle, k, epsilon, gen, two_phase=two_phase,
                                         early_stop=early_stop, trace=trace)
    info["round_budget"] = bounds.linear_seq_round_budget(oracle.n, k, epsilon, two_phase=two_phase)
    info["accumulated"] = len(A)
    return make_record("linear_seq", oracle, A.suffix(k), stats, failed=failed, k=k,
                       seed=seed, epsilon=epsilon, **info)


def low_adap_linear_seq(oracle: Oracle, k: int, epsilon: float = 0.1, rng=None) -> RunRecord:
    """LinearSeq variant with ``O(log(n/k))`` adaptivity.

    Stops once at most ``k`` candidates survive and returns the better of the
    tail ``A'`` and the surviving candidates.
    """
    bounds.low_adap_ratio_bound(epsilon)
    gen, seed = resolve_rng(rng)
    if k <= 0 or k >= oracle.n:
        return _shortcut("low_adap_linear_seq", oracle, k, seed)
    with measured(oracle) as stats:
        A, V, failed, info = _linear_seq(oracle, k, epsilon, gen, low_adaptivity=True)
        tail = A.suffix(k)
        solution = tail
        if not failed:
            with oracle.round():
                f_tail = oracle.evaluate(tail)
                f_rest = oracle.evaluate(V)
            if f_rest > f_tail:
                solution = V.tolist()
    info["round_budget"] = bounds.linear_seq_round_budget(oracle.n, k, epsilon, low_adaptivity=True)
    return make_record("low_adap_linear_seq", oracle, solution, stats, failed=failed, k=k,
                       seed=seed, epsilon=epsilon, **info)
