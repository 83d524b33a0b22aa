from __future__ import annotations

import numpy as np

from ..oracle import Oracle
from . import bounds
from .blocks import select_threshold_prefix, threshold_lambdas
from .record import AlgorithmFailure, RunRecord, make_record, measured, resolve_rng


def _threshold_seq(oracle: Oracle, k: int, delta: float, eps: float, tau: float,
                   rng: np.random.Generator, trace: list | None = None):
    """Add elements whose gain clears ``tau``; returns ``(added, f(base | added))``.

    Works relative to ``oracle`` (which may be a restriction).  Raises
    :class:`AlgorithmFailure` when the iteration budget runs out.
    """
    fA = oracle.empty_value
    if k <= 0:
        return [], fA
    ell = bounds.threshold_seq_iterations(oracle.n, delta, eps)
    A: list[int] = []
    V = oracle.candidates()
    for _ in range(ell):
        if len(V) == 0:
            return A, fA
        with oracle.round():
            with_x = oracle.values_with(A, V)
        V = V[(with_x - fA) >= tau]
        if len(V) == 0:
            return A, fA

        perm = rng.permutation(V)
        s = min(k - len(A), len(perm))
        lambdas = threshold_lambdas(s, eps)
        with oracle.round():
            prefix = oracle.prefix_values(A, perm, lambdas)
        good = (prefix - fA) / np.asarray(lambdas) >= (1.0 - eps) * tau
        lam_star = select_threshold_prefix(lambdas, good)
        if trace is not None:
            trace.append({"lambdas": lambdas, "good": good.tolist(), "lambda_star": lam_star,
                          "gain": float(prefix[lambdas.index(lam_star)] - fA)})
        A.extend(int(x) for x in perm[:lam_star])
        fA = float(prefix[lambdas.index(lam_star)])
        V = np.sort(perm[lam_star:])
        if len(A) == k:
            return A, fA
    if len(V) == 0:
        return A, fA
    raise AlgorithmFailure(f"ThresholdSeq did not finish within {ell} iterations", A)


def threshold_seq(oracle: Oracle, k: int, delta: float, epsilon: float, tau: float,
                  rng=None, *, trace: list | None = None) -> RunRecord:
    """Parallel thresholding: add up to ``k`` elements of gain at least ``tau``.

    On success the solution ``A`` has ``|A| <= k``, average gain at least
    ``(1 - epsilon) tau / (1 + epsilon)``, and if ``|A| < k`` no element has
    gain ``tau`` or more with respect to ``A``.  Failure (probability at most
    ``delta / n``) is reported through ``RunRecord.failed``.
    """
    if tau < 0:
        raise ValueError("tau must be non-negative")
    bounds.threshold_seq_iterations(max(oracle.n, 1), delta, epsilon)
    gen, seed = resolve_rng(rng)
    failed = False
    solution: list[int] = []
    with measured(oracle) as stats:
        try:
            solution, value = _threshold_seq(oracle, k, delta, epsilon, tau, gen, trace)
        except AlgorithmFailure as exc:
            failed = True
            solution, value = exc.partial, None
    return make_record("threshold_seq", oracle, solution, stats, failed=failed, k=k, seed=seed,
                       value=value, tau=tau, epsilon=epsilon, delta=delta,
                       round_budget=bounds.threshold_seq_round_budget(max(oracle.n, 1), delta, epsilon))
