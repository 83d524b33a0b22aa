import math

import numpy as np
import pytest

from lspgb import Oracle
from lspgb.algorithms import (AlgorithmFailure, adaptive_linear, bounds, brute_force_opt, greedy,
                              lazy_greedy, linear_seq, low_adap_linear_seq, ls_pgb,
                              parallel_greedy_boost, threshold_seq)
from lspgb.algorithms.blocks import select_linear_prefix
from lspgb.generators import gen_ba, gen_er
from lspgb.objectives import MaxCover
from lspgb.verify import small_instance

from conftest import modular


# -- linear_seq -------------------------------------------------------------------

def test_linear_seq_unique_max_k1():
    r = linear_seq(modular([1, 7, 3, 2]), 1, 0.1, rng=0)
    assert r.solution == [1] and r.value == 7 and not r.failed


def test_linear_seq_shortcuts():
    o = modular([1, 2, 3])
    r = linear_seq(o, 3, rng=0)
    assert r.solution == [0, 1, 2] and r.queries == 0
    r = linear_seq(o, 0, rng=0)
    assert r.solution == [] and r.queries == 0
    with pytest.raises(ValueError):
        linear_seq(o, 1, 0.5)


def test_linear_seq_ratio_on_small_coverage():
    rng = np.random.default_rng(1)
    ratio = bounds.ls_ratio_bound(0.1)
    for _ in range(30):
        fn, _ = small_instance("coverage", rng)
        k = int(rng.integers(1, 5))
        o = Oracle(fn)
        r = linear_seq(o, k, 0.1, rng=int(rng.integers(1000)))
        assert not r.failed and len(r.solution) <= k
        assert r.value >= ratio * brute_force_opt(o, k)[1] - 1e-9


def test_linear_seq_ledger_and_budget():
    fn = MaxCover(gen_ba(500, 5, seed=0))
    o = Oracle(fn)
    r = linear_seq(o, 10, 0.1, rng=3)
    assert (r.queries, r.rounds) == o.ledger.snapshot()
    assert r.rounds <= r.info["round_budget"]
    assert r.value == o.peek(r.solution)
    assert r.info["accumulated"] >= len(r.solution)


def test_linear_seq_prefix_rule_trace():
    trace = []
    fn = MaxCover(gen_ba(400, 3, seed=1))
    linear_seq(Oracle(fn), 8, 0.1, rng=2, trace=trace)
    assert trace
    for t in trace:
        assert t["lambda_star"] == select_linear_prefix(t["lambdas"], t["good"], 8)
        if all(t["good"]):
            assert t["lambda_star"] == t["V"]
        elif t["lambda_star"]:
            assert not t["good"][t["lambdas"].index(t["lambda_star"])]


@pytest.mark.parametrize("opts", [dict(two_phase=True), dict(early_stop=True),
                                  dict(two_phase=True, early_stop=True)])
def test_linear_seq_optimizations_keep_ratio(opts):
    rng = np.random.default_rng(4)
    for _ in range(15):
        fn, _ = small_instance("coverage", rng)
        k = int(rng.integers(1, 4))
        o = Oracle(fn)
        r = linear_seq(o, k, 0.1, rng=int(rng.integers(1000)), **opts)
        assert not r.failed
        assert r.value >= bounds.ls_ratio_bound(0.1) * brute_force_opt(o, k)[1] - 1e-9
        assert r.rounds <= r.info["round_budget"]


def test_early_stop_saves_queries():
    fn = MaxCover(gen_ba(3000, 5, seed=0))
    plain = linear_seq(Oracle(fn), 30, 0.1, rng=1)
    fast = linear_seq(Oracle(fn), 30, 0.1, rng=1, early_stop=True)
    assert fast.queries <= plain.queries


def test_low_adap_linear_seq():
    assert low_adap_linear_seq(modular([1, 2, 3]), 3, rng=0).solution == [0, 1, 2]
    r = low_adap_linear_seq(modular([1, 9, 3, 2, 2]), 1, rng=0)
    assert r.solution == [1]
    rng = np.random.default_rng(8)
    for _ in range(20):
        fn, _ = small_instance("coverage", rng)
        k = int(rng.integers(1, 5))
        o = Oracle(fn)
        r = low_adap_linear_seq(o, k, 0.1, rng=int(rng.integers(1000)))
        assert not r.failed and len(r.solution) <= k
        assert r.value >= bounds.low_adap_ratio_bound(0.1) * brute_force_opt(o, k)[1] - 1e-9
        assert r.rounds <= r.info["round_budget"]


# -- threshold_seq ------------------------------------------------------------------

def test_threshold_seq_high_tau_returns_empty():
    o = modular([5, 4, 3])
    r = threshold_seq(o, 2, 0.1, 0.1, 6.0, rng=0)
    assert r.solution == [] and r.rounds == 1 and r.queries == 3


def test_threshold_seq_modular_example():
    o = modular([5, 4, 3, 2, 1])
    r = threshold_seq(o, 3, 0.1, 0.1, 3.5, rng=0)
    assert sorted(r.solution) == [0, 1]
    filter_rounds = r.rounds - (r.rounds // 2)
    assert filter_rounds <= 2


def test_threshold_seq_takes_all_at_min_tau():
    w = [4.0, 2.0, 3.0, 1.0]
    r = threshold_seq(modular(w), 4, 0.1, 0.1, 1.0, rng=0)
    assert sorted(r.solution) == [0, 1, 2, 3]
    assert r.value / 4 >= 0.9 * 1.0 / 1.1


def test_threshold_seq_k0_and_errors():
    o = modular([1, 2])
    r = threshold_seq(o, 0, 0.1, 0.1, 1.0, rng=0)
    assert r.solution == [] and r.queries == 0
    with pytest.raises(ValueError):
        threshold_seq(o, 1, 0.1, 0.1, -1.0)
    with pytest.raises(ValueError):
        threshold_seq(o, 1, 1.5, 0.1, 1.0)


def test_threshold_seq_residual_gains_below_tau():
    rng = np.random.default_rng(2)
    for _ in range(30):
        fn, _ = small_instance("coverage", rng, (6, 25))
        o = Oracle(fn)
        tau = float(rng.uniform(0.5, 4))
        k = int(rng.integers(1, fn.n + 1))
        r = threshold_seq(o, k, 0.1, 0.2, tau, rng=int(rng.integers(1000)))
        assert len(r.solution) <= k
        if len(r.solution) < k:
            f_a = o.peek(r.solution)
            assert all(o.peek(r.solution + [x]) - f_a < tau for x in range(fn.n))
        assert r.rounds <= r.info["round_budget"]


def test_threshold_seq_on_restriction_counts_in_parent():
    o = modular([5, 4, 3, 2, 1])
    sub = o.restrict([0])
    r = threshold_seq(sub, 2, 0.1, 0.1, 2.5, rng=0)
    assert sorted(r.solution) == [1, 2]
    assert o.ledger.queries == r.queries > 0


def test_threshold_seq_failure_reports_partial(monkeypatch):
    monkeypatch.setattr(bounds, "threshold_seq_iterations", lambda n, d, e: 1)
    # one iteration on a coverage graph with overlapping neighborhoods cannot finish
    fn = MaxCover(gen_ba(200, 3, seed=0))
    r = threshold_seq(Oracle(fn), 100, 0.1, 0.1, 4.0, rng=0)
    assert r.failed
    assert 0 < len(r.solution) < 100


# -- boosting -------------------------------------------------------------------------

def test_pgb_modular_example():
    r = parallel_greedy_boost(modular([5, 4, 3]), 2, 1.0, 9.0, 0.1, rng=0)
    assert sorted(r.solution) == [0, 1] and r.value == 9


def test_pgb_call_count_and_rounds():
    fn = MaxCover(gen_ba(600, 5, seed=1))
    o = Oracle(fn)
    gamma = linear_seq(o, 12, 0.21, rng=0).value
    alpha = bounds.ls_ratio_bound(0.21)
    r = parallel_greedy_boost(o, 12, alpha, gamma, 0.1, rng=0)
    assert r.info["calls"] <= bounds.boost_max_calls(alpha, 0.1)
    assert r.rounds <= bounds.boost_round_budget(600, alpha, 0.1)


def test_pgb_zero_gamma():
    r = parallel_greedy_boost(modular([0, 0, 0]), 2, 0.5, 0.0, 0.1, rng=0)
    assert r.solution == [] and r.value == 0


def test_pgb_argument_checks():
    with pytest.raises(ValueError):
        parallel_greedy_boost(modular([1]), 1, 0.0, 1.0)
    with pytest.raises(ValueError):
        parallel_greedy_boost(modular([1]), 1, 0.5, 1.0, epsilon=0.7)


def test_ls_pgb_ratio_small_instances():
    rng = np.random.default_rng(3)
    for kind in ("coverage", "modular"):
        for _ in range(15):
            fn, _ = small_instance(kind, rng)
            k = int(rng.integers(1, 5))
            o = Oracle(fn)
            r = ls_pgb(o, k, 0.1, 0.21, rng=int(rng.integers(1000)))
            assert not r.failed and len(r.solution) <= k
            assert r.value >= (1 - 1 / math.e - 0.1) * brute_force_opt(o, k)[1] - 1e-9
            assert r.rounds <= r.info["round_budget"]


def test_ls_pgb_defaults():
    r = ls_pgb(modular([3, 1, 2, 5]), 2, rng=0)
    assert r.info["epsilon"] == 0.1 and r.info["epsilon_ls"] == 0.21
    assert r.info["alpha"] == pytest.approx(bounds.ls_ratio_bound(0.21))
    assert sorted(r.solution) == [0, 3]


# -- sequential baselines ------------------------------------------------------------

def test_adaptive_linear_examples():
    r = adaptive_linear(modular([3, 1, 1, 1]), 1)
    assert r.solution == [0] and r.value == 3
    assert r.queries == 4 and r.rounds == 4
    r = adaptive_linear(modular([1, 3]), 1)
    assert r.solution == [1] and r.value == 3


def test_adaptive_linear_quarter_ratio():
    rng = np.random.default_rng(6)
    for _ in range(30):
        fn, _ = small_instance("coverage", rng)
        k = int(rng.integers(1, 5))
        o = Oracle(fn)
        assert 4 * adaptive_linear(o, k).value >= brute_force_opt(o, k)[1] - 1e-9


def test_lazy_greedy_examples(path_cover):
    assert sorted(lazy_greedy(modular([2, 9, 4, 7]), 2).solution) == [1, 3]
    assert lazy_greedy(path_cover, 1).solution == [1]


def test_lazy_greedy_matches_greedy():
    rng = np.random.default_rng(0)
    for i in range(100):
        fn, _ = small_instance(("coverage", "modular", "image")[i % 3], rng, (5, 30))
        k = int(rng.integers(1, fn.n + 1))
        lazy, plain = lazy_greedy(Oracle(fn), k), greedy(Oracle(fn), k)
        assert lazy.solution == plain.solution
        assert lazy.value == plain.value


def test_lazy_greedy_tie_break_smaller_id():
    assert lazy_greedy(modular([1, 1, 1, 1]), 2).solution == [0, 1]


def test_brute_force(path_cover):
    assert brute_force_opt(path_cover, 1) == ([1], 3.0)
    assert brute_force_opt(modular([2, 9, 4, 7]), 2) == ([1, 3], 16.0)
    o = modular([1, 2, 3])
    assert brute_force_opt(o, 3) == ([0, 1, 2], 6.0)
    assert brute_force_opt(modular([1, 1, 1]), 2)[0] == [0, 1]
    with pytest.raises(ValueError):
        brute_force_opt(modular(np.ones(60)), 10)


@pytest.mark.parametrize("algo", [adaptive_linear, lazy_greedy, greedy])
def test_baselines_reject_bad_k(algo):
    with pytest.raises(ValueError):
        algo(modular([1, 2]), 3)


def test_failure_is_a_record_not_an_exception(monkeypatch):
    monkeypatch.setattr(bounds, "linear_seq_iterations", lambda *a, **kw: 0)
    r = linear_seq(Oracle(MaxCover(gen_er(30, 0.1, seed=0))), 3, 0.1, rng=0)
    assert r.failed
    assert isinstance(AlgorithmFailure("x", [1]).partial, list)


def test_same_seed_same_record():
    fn = MaxCover(gen_ba(800, 5, seed=5))
    a = ls_pgb(Oracle(fn), 15, rng=42)
    b = ls_pgb(Oracle(fn), 15, rng=42)
    assert (a.solution, a.queries, a.rounds) == (b.solution, b.queries, b.rounds)
    assert a.seed == 42
