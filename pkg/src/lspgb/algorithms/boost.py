"""ParallelGreedyBoost and the LS+PGB pipeline."""
from __future__ import annotations

from ..oracle import Oracle
from . import bounds
from .linear_seq import _linear_seq
from .record import AlgorithmFailure, RunRecord, make_record, measured, resolve_rng
from .threshold_seq import _threshold_seq


def _check_boost_args(alpha: float, eps: float) -> None:
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if not 0.0 < eps < bounds.ONE_MINUS_INV_E:
        raise ValueError(f"epsilon must lie in (0, 1 - 1/e), got {eps}")


def _boost(oracle: Oracle, k: int, alpha: float, gamma: float, eps: float, rng):
    """Descending-threshold greedy; returns ``(A, f(A), calls)``."""
    A: list[int] = []
    fA = oracle.empty_value
    calls = 0
    if gamma <= 0:
        # OPT = 0, every feasible set is optimal
        return A, fA, calls
    delta = bounds.boost_delta(alpha, eps)
    tau = gamma / (alpha * k)
    floor = gamma / (3.0 * k)
    while tau >= floor:
        tau *= 1.0 - eps
        calls += 1
        try:
            S, fA = _threshold_seq(oracle.restrict(A, fA), k - len(A), delta, eps / 3.0, tau, rng)
        except AlgorithmFailure as exc:
            raise AlgorithmFailure(str(exc), A + exc.partial) from exc
        A.extend(S)
        if len(A) == k:
            break
    return A, fA, calls


def parallel_greedy_boost(oracle: Oracle, k: int, alpha: float, gamma: float,
                          epsilon: float = 0.1, rng=None) -> RunRecord:
    """Boost a solution value ``gamma`` with ``gamma <= OPT <= gamma/alpha`` to ratio ``1 - 1/e - epsilon``."""
    _check_boost_args(alpha, epsilon)
    gen, seed = resolve_rng(rng)
    failed, calls = False, 0
    with measured(oracle) as stats:
        try:
            A, value, calls = _boost(oracle, k, alpha, gamma, epsilon, gen)
        except AlgorithmFailure as exc:
            failed, A, value = True, exc.partial, None
    return make_record("parallel_greedy_boost", oracle, A, stats, failed=failed, k=k, seed=seed,
                       value=value, alpha=alpha, gamma=gamma, epsilon=epsilon, calls=calls,
                       delta=bounds.boost_delta(alpha, epsilon),
                       round_budget=bounds.boost_round_budget(oracle.n, alpha, epsilon))


def ls_pgb(oracle: Oracle, k: int, epsilon: float = 0.1, epsilon_ls: float = 0.21, rng=None, *,
           two_phase: bool = False, early_stop: bool = False) -> RunRecord:
    """LinearSeq supplies ``gamma`` and ``alpha``; ParallelGreedyBoost finishes the job."""
    _check_boost_args(bounds.ls_ratio_bound(epsilon_ls), epsilon)
    gen, seed = resolve_rng(rng)
    n = oracle.n
    info = {"epsilon": epsilon, "epsilon_ls": epsilon_ls,
            "round_budget": bounds.ls_pgb_round_budget(n, k, epsilon, epsilon_ls, two_phase=two_phase)}
    if k <= 0 or k >= n:
        with measured(oracle) as stats:
            solution = list(range(n)) if k >= n else []
        return make_record("ls_pgb", oracle, solution, stats, failed=False, k=k, seed=seed, **info)

    alpha = bounds.ls_ratio_bound(epsilon_ls)
    failed = False
    value = None
    with measured(oracle) as stats:
        A_ls, _, ls_failed, ls_info = _linear_seq(oracle, k, epsilon_ls, gen, two_phase=two_phase,
                                                  early_stop=early_stop)
        solution = A_ls.suffix(k)
        if ls_failed:
            failed = True
            info["failed_stage"] = "linear_seq"
        else:
            with oracle.round():
                gamma = oracle.evaluate(solution)
            info.update(gamma=gamma, alpha=alpha)
            try:
                solution, value, info["calls"] = _boost(oracle, k, alpha, gamma, epsilon, gen)
            except AlgorithmFailure as exc:
                failed, solution = True, exc.partial
                info["failed_stage"] = "boost"
    return make_record("ls_pgb", oracle, solution, stats, failed=failed, k=k, seed=seed,
                       value=value, ls_iterations=ls_info["iterations"], **info)
