"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines; the random suites (50 seeded instances per nominal family, n <= 10,
both uncertainty types, at most 4 scenarios) are built once and shared.
"""

import time
from dataclasses import dataclass, field

import numpy as np
import pytest

from minregret.core import expected_regret, marginal_of_strategy
from minregret.decompose import decompose_marginal
from minregret.gen import generate_instance
from minregret.nominal import build_oracle
from minregret.regret import max_expected_regret, player_best_response
from minregret.sim import simulate
from minregret.solvers import (
    approx_mean_cost,
    approx_midpoint,
    bruteforce_game_value,
    solve_adversary_lp_discrete,
    solve_deterministic_exact,
    solve_randomized,
)

from conftest import random_support_strategy

FAMILIES = ("k-selection", "spanning-tree", "dag-path")
PER_FAMILY = 50
VALUE_TOL = 1e-6
ORDER_TOL = 1e-9
IDENTITY_TOL = 1e-9
RECONSTRUCT_TOL = 1e-7


def _report(name, ok, detail):
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


@dataclass
class SolvedInstance:
    instance: object
    oracle: object
    game: object
    z_d: float
    brute: float


@dataclass
class Suite:
    solved: list = field(default_factory=list)
    equivalence_seconds: float = 0.0
    max_iterations: int = 0


def _suite_instance(family, index):
    return generate_instance(
        family,
        n=4 + index % 7,  # n in 4..10
        uncertainty="interval" if index % 2 == 0 else "scenarios",
        n_scenarios=2 + index % 3,  # 2..4 scenarios
        seed=index * 7919 + FAMILIES.index(family) * 101,
    )


@pytest.fixture(scope="module")
def suite():
    built = Suite()
    for family in FAMILIES:
        for index in range(PER_FAMILY):
            instance = _suite_instance(family, index)
            oracle = build_oracle(instance)
            started = time.perf_counter()
            game = solve_randomized(instance, oracle=oracle)
            brute, _, _ = bruteforce_game_value(instance, oracle=oracle)
            built.equivalence_seconds += time.perf_counter() - started
            _, z_d = solve_deterministic_exact(instance, oracle=oracle)
            built.max_iterations = max(built.max_iterations, game.iterations)
            built.solved.append(SolvedInstance(instance, oracle, game, z_d, brute))
    return built


def test_criterion_1_tight_discrete_gap():
    worst_value = 0.0
    worst_cert = 0.0
    slowest = 0.0
    for k in (2, 3, 5, 10):
        instance = generate_instance("tight-discrete", k=k)
        oracle = build_oracle(instance)
        started = time.perf_counter()
        game = solve_randomized(instance, oracle=oracle)
        _, z_d = solve_deterministic_exact(instance, oracle=oracle)
        elapsed = time.perf_counter() - started
        slowest = max(slowest, elapsed)
        assert z_d == 1.0, f"k={k}: Z_D={z_d}"
        worst_value = max(worst_value, abs(game.value - 1.0 / k))
        ub = max_expected_regret(game.marginal, instance, oracle).value
        lb = player_best_response(game.adversary, instance, oracle).value
        worst_cert = max(worst_cert, ub - game.value, game.value - lb)
    _report(
        "criterion-1 tight-discrete-gap",
        worst_value <= VALUE_TOL and worst_cert <= VALUE_TOL and slowest < 1.0,
        f"max |Z_R - 1/k| = {worst_value:.2e}, max saddle slack = {worst_cert:.2e}, "
        f"slowest solve {slowest:.3f}s",
    )


def test_criterion_2_tight_interval_gap():
    instance = generate_instance("tight-interval")
    game = solve_randomized(instance)
    _, z_d = solve_deterministic_exact(instance)
    ok = z_d == 1.0 and abs(game.value - 0.5) <= VALUE_TOL
    _report(
        "criterion-2 tight-interval-gap",
        ok,
        f"Z_D={z_d}, Z_R={game.value:.9f}",
    )


def test_criterion_3_oracle_equivalence(suite):
    worst = max(abs(s.game.value - s.brute) for s in suite.solved)
    ok = worst <= VALUE_TOL and suite.equivalence_seconds < 60.0
    _report(
        "criterion-3 oracle-equivalence",
        ok,
        f"{len(suite.solved)} instances, max |double-oracle - exhaustive| = {worst:.2e}, "
        f"solve+bruteforce time {suite.equivalence_seconds:.1f}s",
    )


def test_criterion_4_ordering_and_gap_bounds(suite):
    worst_upper = -np.inf  # Z_R - Z_D must stay <= 0
    worst_lower = -np.inf  # Z_D/factor - Z_R must stay <= 0
    for s in suite.solved:
        factor = 2.0 if s.instance.is_interval else float(s.instance.uncertainty.k)
        worst_upper = max(worst_upper, s.game.value - s.z_d)
        worst_lower = max(worst_lower, s.z_d / factor - s.game.value)
    ok = worst_upper <= ORDER_TOL and worst_lower <= ORDER_TOL
    _report(
        "criterion-4 ordering-and-gap-bounds",
        ok,
        f"max Z_R - Z_D = {worst_upper:.2e}, max Z_D/factor - Z_R = {worst_lower:.2e}",
    )


def test_criterion_5_strong_duality_discrete(suite):
    worst = 0.0
    count = 0
    for s in suite.solved:
        if s.instance.is_interval:
            continue
        count += 1
        _, z_ar, _ = solve_adversary_lp_discrete(s.instance, oracle=s.oracle)
        worst = max(worst, abs(z_ar - s.game.value))
    _report(
        "criterion-5 strong-duality",
        worst <= VALUE_TOL,
        f"{count} discrete instances, max |Z_AR - Z_R| = {worst:.2e}",
    )


def test_criterion_6_approximation_guarantees(suite):
    worst_violation = -np.inf
    for s in suite.solved:
        if s.instance.is_interval:
            _, rmax = approx_midpoint(s.instance, s.oracle)
            bound = 2.0 * s.game.value
        else:
            _, rmax = approx_mean_cost(s.instance, s.oracle)
            bound = float(s.instance.uncertainty.k) * s.game.value
        worst_violation = max(worst_violation, rmax - bound)

    # the tight instances meet their factors exactly
    tight_errs = []
    for k in (2, 3, 5, 10):
        inst = generate_instance("tight-discrete", k=k)
        _, rmax = approx_mean_cost(inst)
        z_r = solve_randomized(inst).value
        tight_errs.append(abs(rmax / z_r - k))
    inst = generate_instance("tight-interval")
    _, rmax = approx_midpoint(inst)
    z_r = solve_randomized(inst).value
    tight_errs.append(abs(rmax / z_r - 2.0))

    ok = worst_violation <= VALUE_TOL and max(tight_errs) <= VALUE_TOL
    _report(
        "criterion-6 approximation-guarantees",
        ok,
        f"max guarantee violation = {worst_violation:.2e}, "
        f"max tight-ratio error = {max(tight_errs):.2e}",
    )


def test_criterion_7_midpoint_identity(suite):
    worst_identity = 0.0
    worst_anchor = 0.0
    count = 0
    for s in suite.solved:
        if not s.instance.is_interval:
            continue
        count += 1
        unc = s.instance.uncertainty
        M, rmax = approx_midpoint(s.instance, s.oracle)
        inside = M.indicator.astype(bool)
        f_low = s.oracle.solve(np.where(inside, unc.lower, unc.upper))[1]
        f_flip = s.oracle.solve(np.where(inside, unc.upper, unc.lower))[1]
        identity = float((unc.lower + unc.upper) @ M.indicator) - f_low - f_flip
        worst_identity = max(worst_identity, abs(identity - rmax))
        worst_anchor = max(worst_anchor, abs(f_low - float(unc.lower @ M.indicator)))
    ok = worst_identity <= IDENTITY_TOL and worst_anchor <= IDENTITY_TOL
    _report(
        "criterion-7 midpoint-identity",
        ok,
        f"{count} interval instances, max identity residual = {worst_identity:.2e}, "
        f"max lower-bound anchor residual = {worst_anchor:.2e}",
    )


def test_criterion_8_decomposition_round_trip():
    rng = np.random.default_rng(314159)
    worst_err = 0.0
    worst_support = 0
    for family in FAMILIES:
        instance = generate_instance(family, n=8, uncertainty="interval", seed=5)
        oracle = build_oracle(instance)
        for _ in range(100):
            y0 = random_support_strategy(oracle, rng, max_support=oracle.n + 1)
            p = marginal_of_strategy(y0)
            y1 = decompose_marginal(p, oracle)
            err = float(np.max(np.abs(marginal_of_strategy(y1).p - p.p)))
            worst_err = max(worst_err, err)
            worst_support = max(worst_support, y1.support_size - (oracle.n + 1))
    ok = worst_err <= RECONSTRUCT_TOL and worst_support <= 0
    _report(
        "criterion-8 decomposition-round-trip",
        ok,
        f"300 strategies, max reconstruction error = {worst_err:.2e}, "
        f"support excess over n+1 = {worst_support}",
    )


def test_criterion_9_simulation():
    started = time.perf_counter()
    devs = []
    for maker in (lambda: generate_instance("tight-discrete", k=3), lambda: generate_instance("tight-interval")):
        instance = maker()
        oracle = build_oracle(instance)
        game = solve_randomized(instance, oracle=oracle)
        est = simulate(instance, game.player, game.adversary, 10**6, seed=42, oracle=oracle)
        again = simulate(instance, game.player, game.adversary, 10**6, seed=42, oracle=oracle)
        assert est == again, "fixed seed must reproduce bit-identical output"
        devs.append(abs(est.mean - game.value) / est.stderr)
        exact = expected_regret(game.player, game.adversary, oracle)
        assert abs(exact - game.value) <= VALUE_TOL
    elapsed = time.perf_counter() - started
    ok = max(devs) <= 3.0 and elapsed < 10.0
    _report(
        "criterion-9 simulation",
        ok,
        f"max |mean - Z_R| / stderr = {max(devs):.2f}, wall time {elapsed:.1f}s",
    )


def test_note_double_oracle_iteration_counts(suite):
    _report(
        "note double-oracle-iterations",
        suite.max_iterations <= 50,
        f"max iterations over the suites = {suite.max_iterations}",
    )
