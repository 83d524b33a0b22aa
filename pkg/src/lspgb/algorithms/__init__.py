"""Algorithm suite and the ratio/parameter formulas."""
from .baselines import adaptive_linear, brute_force_opt, greedy, lazy_greedy
from .boost import ls_pgb, parallel_greedy_boost
from .bounds import (boost_delta, boost_max_calls, boost_ratio, linear_seq_iterations, ls_beta,
                     low_adap_ratio_bound, ls_ratio_bound, threshold_seq_iterations)
from .linear_seq import linear_seq, low_adap_linear_seq
from .record import AlgorithmFailure, RunRecord
from .threshold_seq import threshold_seq

# algorithms runnable from a config as f(oracle, k, **params): name -> (callable, randomized).
# threshold_seq and parallel_greedy_boost need tau / (alpha, gamma) from the caller.
REGISTRY = {
    "linear_seq": (linear_seq, True),
    "low_adap_linear_seq": (low_adap_linear_seq, True),
    "ls_pgb": (ls_pgb, True),
    "adaptive_linear": (adaptive_linear, False),
    "lazy_greedy": (lazy_greedy, False),
    "greedy": (greedy, False),
}

__all__ = [
    "AlgorithmFailure", "REGISTRY", "RunRecord", "adaptive_linear", "boost_delta", "boost_max_calls",
    "boost_ratio", "brute_force_opt", "greedy", "lazy_greedy", "linear_seq", "linear_seq_iterations",
    "low_adap_linear_seq", "low_adap_ratio_bound", "ls_beta", "ls_pgb", "ls_ratio_bound",
    "parallel_greedy_boost", "threshold_seq", "threshold_seq_iterations",
]
