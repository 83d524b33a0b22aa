"""Closed-form parameters, approximation ratios and adaptivity budgets.

All logarithms are natural.
"""
from __future__ import annotations

import math

ONE_MINUS_INV_E = 1.0 - 1.0 / math.e


def _check_ls_eps(eps: float) -> None:
    if not 0.0 < eps < 0.5:
        raise ValueError(f"epsilon must lie in (0, 1/2), got {eps}")


def ls_beta(eps: float) -> float:
    """Filtering fraction constant ``eps / (16 log(8 / (1 - e^{-eps/2})))``."""
    _check_ls_eps(eps)
    return eps / (16.0 * math.log(8.0 / (1.0 - math.exp(-eps / 2.0))))


def _ls_excess(eps: float) -> float:
    return 4.0 * (2.0 - eps) * eps / ((1.0 - eps) * (1.0 - 2.0 * eps))


def ls_ratio_bound(eps: float) -> float:
    """Guaranteed ratio of a successful LinearSeq run."""
    _check_ls_eps(eps)
    return 1.0 / (4.0 + _ls_excess(eps))


def low_adap_ratio_bound(eps: float) -> float:
    """Guaranteed ratio of a successful LowAdapLinearSeq run."""
    _check_ls_eps(eps)
    return 1.0 / (5.0 + _ls_excess(eps))


def boost_ratio(eps: float) -> float:
    return ONE_MINUS_INV_E - eps


def linear_seq_iterations(n: int, k: int, eps: float, low_adaptivity: bool = False) -> int:
    """Outer-loop budget ``ceil(4 (1 + 1/(beta eps)) log(n))`` (``log(n/k)`` for the low-adaptivity variant)."""
    beta = ls_beta(eps)
    arg = n / k if low_adaptivity else n
    return max(0, math.ceil(4.0 * (1.0 + 1.0 / (beta * eps)) * math.log(arg)))


def threshold_seq_iterations(n: int, delta: float, eps: float) -> int:
    """Outer-loop budget ``ceil(4 (1 + 2/eps) log(n/delta))``."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {eps}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return max(1, math.ceil(4.0 * (1.0 + 2.0 / eps) * math.log(n / delta)))


def boost_log(alpha: float, eps: float) -> float:
    """``log_{1-eps}(alpha / 3)``."""
    return math.log(alpha / 3.0) / math.log(1.0 - eps)


def boost_delta(alpha: float, eps: float) -> float:
    """Failure split ``1 / (log_{1-eps}(alpha/3) + 1)`` handed to every ThresholdSeq call."""
    return 1.0 / (boost_log(alpha, eps) + 1.0)


def boost_max_calls(alpha: float, eps: float) -> int:
    """Upper bound on the number of ThresholdSeq calls made by the boosting loop.

    Equals ``ceil(log_{1-eps}(alpha/3))`` except when that logarithm is an exact
    integer, where the loop guard ``tau >= Gamma/(3k)`` admits one more pass.
    """
    return math.floor(boost_log(alpha, eps)) + 1


def linear_seq_round_budget(n: int, k: int, eps: float, *, low_adaptivity: bool = False,
                            two_phase: bool = False) -> int:
    ell = linear_seq_iterations(n, k, eps, low_adaptivity)
    phases = 2 if two_phase else 1
    return 2 * ell * phases + 2


def threshold_seq_round_budget(n: int, delta: float, eps: float) -> int:
    return 2 * threshold_seq_iterations(n, delta, eps)


def boost_round_budget(n: int, alpha: float, eps: float) -> int:
    delta = boost_delta(alpha, eps)
    return boost_max_calls(alpha, eps) * threshold_seq_round_budget(n, delta, eps / 3.0)


def ls_pgb_round_budget(n: int, k: int, eps: float, eps_ls: float, *, two_phase: bool = False) -> int:
    # the extra round evaluates the LinearSeq solution to obtain Gamma
    return (linear_seq_round_budget(n, k, eps_ls, two_phase=two_phase) + 1
            + boost_round_budget(n, ls_ratio_bound(eps_ls), eps))
