"""Parallelizable monotone submodular maximization under a cardinality constraint."""
from .oracle import (CallableFunction, Oracle, QueryLedger, SetFunction, SolutionSet,
                     check_submodularity, singleton_sum_upper_bound, top_singletons)

__version__ = "0.1.0"

__all__ = ["CallableFunction", "Oracle", "QueryLedger", "SetFunction", "SolutionSet",
           "check_submodularity", "singleton_sum_upper_bound", "top_singletons"]
