"""Property suites run by ``lspgb verify`` and the acceptance tests."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algorithms import (adaptive_linear, bounds, brute_force_opt, linear_seq, low_adap_linear_seq,
                         ls_pgb, parallel_greedy_boost, threshold_seq)
from .generators import gen_ba, gen_er, synth_corpus, synth_similarity, synth_traffic_weights
from .objectives import (ImageSummarization, InfluenceMax, MaxCover, Modular, RevenueMax,
                         TrafficMonitor, TweetSummarization)
from .oracle import Oracle, check_submodularity, singleton_values

REL_TOL = 1e-9


@dataclass
class SuiteReport:
    name: str
    lines: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, message: str) -> bool:
        self.checked += 1
        self.lines.append(("ok    " if ok else "FAIL  ") + message)
        if not ok:
            self.failures.append(message)
        return ok

    def note(self, message: str) -> None:
        self.lines.append("      " + message)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name}: {status} ({self.checked - len(self.failures)}/{self.checked} checks)"


def _at_least(lhs: float, rhs: float) -> bool:
    return lhs >= rhs - REL_TOL * max(1.0, abs(rhs))


def small_instance(kind: str, rng: np.random.Generator, n_range=(6, 17)):
    n = int(rng.integers(*n_range))
    seed = int(rng.integers(2**31))
    if kind == "coverage":
        return MaxCover(gen_er(n, float(rng.uniform(0.1, 0.5)), seed=seed)), f"coverage(ER n={n})"
    if kind == "modular":
        return Modular(np.round(rng.uniform(0, 10, n), 3)), f"modular(n={n})"
    if kind == "image":
        return ImageSummarization(synth_similarity(n, dim=8, clusters=3, seed=seed)), f"image(n={n})"
    raise ValueError(kind)


# ---------------------------------------------------------------- ratios

def suite_ratios(trials: int = 50, seed: int = 0, epsilon: float = 0.1,
                 epsilon_ls: float = 0.21) -> SuiteReport:
    """Exact ratio certificates against brute force, ``trials`` instances per family."""
    report = SuiteReport("ratios")
    rng = np.random.default_rng(seed)
    ls_mult = 1.0 / bounds.ls_ratio_bound(epsilon)
    low_ratio = bounds.low_adap_ratio_bound(epsilon)
    boost = bounds.boost_ratio(epsilon)
    for kind in ("coverage", "modular"):
        for i in range(trials):
            fn, label = small_instance(kind, rng)
            k = int(rng.integers(1, 5))
            run_seed = int(rng.integers(2**31))
            o = Oracle(fn)
            _, opt = brute_force_opt(o, k)
            tag = f"{label} k={k} seed={run_seed} OPT={opt:.6g}"
            r = linear_seq(o, k, epsilon, rng=run_seed)
            if r.failed:
                report.note(f"linear_seq failed (excluded): {tag}")
            else:
                report.check(_at_least(r.value * ls_mult, opt),
                             f"linear_seq f={r.value:.6g} x {ls_mult:.4f} >= OPT: {tag}")
            r = low_adap_linear_seq(o, k, epsilon, rng=run_seed)
            if r.failed:
                report.note(f"low_adap_linear_seq failed (excluded): {tag}")
            else:
                report.check(_at_least(r.value, low_ratio * opt),
                             f"low_adap_linear_seq f={r.value:.6g} >= {low_ratio:.4f} OPT: {tag}")
            r = ls_pgb(o, k, epsilon, epsilon_ls, rng=run_seed)
            if r.failed:
                report.note(f"ls_pgb failed (excluded): {tag}")
            else:
                report.check(_at_least(r.value, boost * opt),
                             f"ls_pgb f={r.value:.6g} >= {boost:.4f} OPT: {tag}")
            r = adaptive_linear(o, k)
            report.check(_at_least(4 * r.value, opt), f"adaptive_linear 4f={4 * r.value:.6g} >= OPT: {tag}")
    return report


# ---------------------------------------------------------------- thresholdseq

def suite_thresholdseq(trials: int = 100, seed: int = 0, epsilons=(0.1, 0.3),
                       delta: float = 0.1) -> SuiteReport:
    """Postconditions of threshold_seq by full marginal sweeps.

    Odd-numbered instances run on a restriction ``f(B | .)`` with a random
    base ``B``, so gains are measured relative to that base.
    """
    report = SuiteReport("thresholdseq")
    rng = np.random.default_rng(seed)
    kinds = ("coverage", "modular", "image")
    for i in range(trials):
        fn, label = small_instance(kinds[i % 3], rng, (6, 31))
        root = Oracle(fn)
        o = root
        base: list[int] = []
        if i % 2:
            base = sorted(rng.choice(fn.n, size=int(rng.integers(1, 4)), replace=False).tolist())
            o = root.restrict(base)
        eps = epsilons[i % len(epsilons)]
        f_base = root.peek(base)
        cand = o.candidates()
        top = max(root.peek(base + [int(x)]) - f_base for x in cand)
        tau = float(rng.uniform(0, top))
        k = int(rng.integers(1, len(cand) + 1))
        run_seed = int(rng.integers(2**31))
        trace: list = []
        r = threshold_seq(o, k, delta, eps, tau, rng=run_seed, trace=trace)
        tag = f"{label} base={base} k={k} eps={eps} tau={tau:.6g} seed={run_seed}"
        if r.failed:
            report.note(f"failed (excluded): {tag}")
            continue
        A = r.solution
        gain = root.peek(base + A) - f_base
        report.check(len(A) <= k, f"|A|={len(A)} <= k: {tag}")
        if A:
            need = (1 - eps) * tau / (1 + eps)
            ok = _at_least(gain / len(A), need)
            msg = f"average gain {gain / len(A):.6g} >= (1-eps)tau/(1+eps)={need:.6g}: {tag}"
            if not ok:
                msg += f" [blocks taken: {[(t['lambdas'], t['lambda_star']) for t in trace]}]"
            report.check(ok, msg)
        if len(A) < k:
            f_all = root.peek(base + A)
            rest = [int(x) for x in cand if int(x) not in set(A)]
            best = max((root.peek(base + A + [x]) - f_all for x in rest), default=-math.inf)
            report.check(best < tau, f"max residual gain {best:.6g} < tau: {tag}")
    return report


# ---------------------------------------------------------------- submodularity

def objective_zoo(seed: int = 0, n: int = 40) -> dict:
    """One small instance of each of the six objectives."""
    g = gen_ba(n, 3, seed=seed)
    rng = np.random.default_rng(seed)
    return {
        "max_cover": MaxCover(g),
        "image": ImageSummarization(synth_similarity(n, dim=16, clusters=4, seed=seed)),
        "tweet": TweetSummarization(synth_corpus(n, vocab=30, seed=seed)),
        "influence": InfluenceMax(g, p=0.3),
        "revenue": RevenueMax(rng.random((25, n)) * (rng.random((25, n)) < 0.3), alpha=0.9),
        "traffic": TrafficMonitor(g, synth_traffic_weights(n, seed=seed)),
    }


def suite_submodularity(trials: int = 1000, seed: int = 0) -> SuiteReport:
    report = SuiteReport("submodularity")
    for name, fn in objective_zoo(seed).items():
        res = check_submodularity(Oracle(fn), trials, rng=seed)
        detail = "" if res.passed else f" witness={res.violation}"
        report.check(res.passed, f"{name} (n={fn.n}): {trials} trials{detail}")
    return report


# ---------------------------------------------------------------- determinism

def randomized_runs(fn, k: int, seed: int, threads: int, epsilon: float = 0.1) -> dict:
    """The five randomized algorithms on one instance with a given pool size."""
    out = {}
    with Oracle(fn, workers=threads) as o:
        out["linear_seq"] = linear_seq(o, k, epsilon, rng=seed)
        out["low_adap_linear_seq"] = low_adap_linear_seq(o, k, epsilon, rng=seed)
        singles = singleton_values(o)
        out["threshold_seq"] = threshold_seq(o, k, 0.1, epsilon, float(singles.max()) / 2, rng=seed)
        eps_ls = 0.21
        gamma = linear_seq(o, k, eps_ls, rng=seed + 1).value
        out["parallel_greedy_boost"] = parallel_greedy_boost(
            o, k, bounds.ls_ratio_bound(eps_ls), gamma, epsilon, rng=seed)
        out["ls_pgb"] = ls_pgb(o, k, epsilon, eps_ls, rng=seed)
    return out


def suite_determinism(trials: int = 1, seed: int = 0, threads=(1, 2, 8), n: int = 2000,
                      k: int = 20) -> SuiteReport:
    report = SuiteReport("determinism")
    for t in range(trials):
        fn = MaxCover(gen_ba(n, 5, seed=seed + t))
        runs = {w: randomized_runs(fn, k, seed + t, w) for w in threads}
        ref = runs[threads[0]]
        for name, rec in ref.items():
            for w in threads[1:]:
                other = runs[w][name]
                same = (rec.solution == other.solution and rec.queries == other.queries
                        and rec.rounds == other.rounds)
                report.check(same, f"{name} BA(n={n}) k={k} seed={seed + t}: threads {threads[0]} vs {w}"
                                   f" (queries {rec.queries}/{other.queries}, rounds {rec.rounds}/{other.rounds})")
    return report


# ---------------------------------------------------------------- adaptivity

def scaling_sweep(ns=(1000, 2000, 4000, 8000), seeds=5, epsilon: float = 0.1, k_div: int = 100,
                  base_seed: int = 0) -> dict:
    """Mean queries/n and rounds of linear_seq and threshold_seq on MaxCover(BA, m=5).

    threshold_seq uses ``tau`` = half the top singleton value and ``delta`` = 0.1.
    Every run is also checked against its round budget.
    """
    rows = {}
    for n in ns:
        k = max(1, n // k_div)
        stats = {"linear_seq": [], "threshold_seq": []}
        for s in range(seeds):
            fn = MaxCover(gen_ba(n, 5, seed=base_seed + s))
            o = Oracle(fn)
            r = linear_seq(o, k, epsilon, rng=base_seed + s)
            stats["linear_seq"].append((r.queries, r.rounds, r.info["round_budget"], r.failed))
            top = float(singleton_values(Oracle(fn)).max())
            r = threshold_seq(Oracle(fn), k, 0.1, epsilon, top / 2, rng=base_seed + s)
            stats["threshold_seq"].append((r.queries, r.rounds, r.info["round_budget"], r.failed))
        rows[n] = {
            name: {
                "queries_per_n": float(np.mean([q for q, *_ in v])) / n,
                "rounds_mean": float(np.mean([rd for _, rd, *_ in v])),
                "rounds_max": max(rd for _, rd, *_ in v),
                "within_budget": all(rd <= b for _, rd, b, _ in v),
                "failures": sum(f for *_, f in v),
                "ell": bounds.linear_seq_iterations(n, k, epsilon) if name == "linear_seq"
                else bounds.threshold_seq_iterations(n, 0.1, epsilon),
            }
            for name, v in stats.items()
        }
    return rows


def suite_adaptivity(trials: int = 10, seed: int = 0) -> SuiteReport:
    """Ledger rounds against the closed-form budgets on random BA coverage instances."""
    report = SuiteReport("adaptivity")
    rng = np.random.default_rng(seed)
    for t in range(trials):
        n = int(rng.integers(100, 1500))
        k = int(rng.integers(1, max(2, n // 20)))
        run_seed = int(rng.integers(2**31))
        fn = MaxCover(gen_ba(n, 5, seed=run_seed))
        tag = f"BA(n={n}) k={k} seed={run_seed}"
        for name, rec in randomized_runs(fn, k, run_seed, 1).items():
            if name == "parallel_greedy_boost":
                budget = bounds.boost_round_budget(n, bounds.ls_ratio_bound(0.21), 0.1)
            else:
                budget = rec.info["round_budget"]
            report.check(rec.rounds <= budget, f"{name} rounds {rec.rounds} <= {budget}: {tag}")
        r = adaptive_linear(Oracle(fn), k)
        report.check(r.queries == n and r.rounds == n,
                     f"adaptive_linear queries={r.queries} rounds={r.rounds} == n: {tag}")
    sweep = scaling_sweep(ns=(250, 500, 1000, 2000), seeds=2, base_seed=seed)
    ns = sorted(sweep)
    for name in ("linear_seq", "threshold_seq"):
        per_n = [sweep[n][name]["queries_per_n"] for n in ns]
        report.check(max(per_n) <= 2 * min(per_n),
                     f"{name} queries/n over n={ns}: {[round(x, 2) for x in per_n]} vary by <= 2x")
    lo, hi = sweep[ns[0]]["linear_seq"], sweep[ns[-1]]["linear_seq"]
    report.check(hi["rounds_max"] - lo["rounds_max"] <= hi["ell"] - lo["ell"] + 2,
                 f"linear_seq rounds growth {lo['rounds_max']} -> {hi['rounds_max']}"
                 f" within ell growth {lo['ell']} -> {hi['ell']} + 2")
    return report


# ---------------------------------------------------------------- failure rate

def suite_failure_rate(trials: int = 200, seed: int = 0, n: int = 100, epsilon: float = 0.1,
                       max_failures: int = 10) -> SuiteReport:
    report = SuiteReport("failure-rate")
    rng = np.random.default_rng(seed)
    failures = 0
    for _ in range(trials):
        run_seed = int(rng.integers(2**31))
        fn = MaxCover(gen_ba(n, 5, seed=run_seed))
        k = int(rng.integers(1, 11))
        r = linear_seq(Oracle(fn), k, epsilon, rng=run_seed)
        failures += r.failed
        report.note(f"BA(n={n}) k={k} seed={run_seed}: {'FAILED' if r.failed else 'ok'}"
                    f" after {r.info['iterations']} iterations")
    report.check(failures <= max_failures, f"{failures} failures in {trials} runs (allowed {max_failures})")
    return report


SUITES = {
    "ratios": suite_ratios,
    "thresholdseq": suite_thresholdseq,
    "submodularity": suite_submodularity,
    "determinism": suite_determinism,
    "adaptivity": suite_adaptivity,
    "failure-rate": suite_failure_rate,
}

DEFAULT_TRIALS = {"ratios": 50, "thresholdseq": 100, "submodularity": 1000, "determinism": 1,
                  "adaptivity": 10, "failure-rate": 200}


def run_suite(name: str, trials: int | None = None, seed: int = 0) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](trials=DEFAULT_TRIALS[name] if trials is None else trials, seed=seed)
