"""Top-level minmax-regret solvers.

``solve_randomized`` runs a double-oracle loop over the finite zero-sum game
whose rows are feasible sets and whose columns are scenario cost vectors
(discrete uncertainty) or extreme cost vectors c^A (interval uncertainty):
solve the restricted matrix game exactly, then let each side best-respond to
the other's current mix, and stop once the two best-response values bracket
the restricted value within tolerance.  The bracketing gap is certified in
the returned solution.

Deterministic minmax regret is solved by enumeration of the feasible family;
the mean-cost and midpoint-cost approximations and the adversary's
cutting-plane LP complete the suite, with ``bruteforce_game_value`` as the
exhaustive cross-check oracle.
"""

from __future__ import annotations

import numpy as np

from .core import (
    AdversaryMixedStrategy,
    CostVector,
    EnumerationCapError,
    FeasibleSet,
    GameSolution,
    Instance,
    InstanceError,
    IterationLimitError,
    MarginalVector,
    PlayerMixedStrategy,
    SolverError,
    marginal_of_strategy,
)
from .lp import GREATER, EQUAL, LinearProgram, solve_lp, solve_matrix_game
from .nominal import NominalOracle, build_oracle, enumeration_cap
from .regret import (
    extreme_cost_vector,
    max_expected_regret_discrete,
    max_expected_regret_interval,
    max_regret_det_discrete,
    max_regret_det_interval,
    scenario_optima,
)

# Dense payoff matrices above this size are refused; the exhaustive solver is
# a desk-scale testing oracle, not a production path.
MAX_PAYOFF_ENTRIES = 4_000_000


def _sorted_family(oracle: NominalOracle, cap=None) -> list[FeasibleSet]:
    family = oracle.enumerate_feasible(cap)
    return sorted(family, key=lambda T: T.indices)


class _Columns:
    """Active adversary pure strategies with their nominal optima."""

    def __init__(self, instance: Instance, oracle: NominalOracle):
        self.instance = instance
        self.oracle = oracle
        self.interval = instance.is_interval
        self.costs: list[np.ndarray] = []
        self.optima: list[float] = []
        self.labels: list = []  # scenario index or generating FeasibleSet
        self._seen = set()
        if not self.interval:
            self.scenario_optima = scenario_optima(instance, oracle)

    def add_scenario(self, s: int) -> bool:
        if s in self._seen:
            return False
        self._seen.add(s)
        self.costs.append(np.asarray(self.instance.uncertainty.costs[s]))
        self.optima.append(float(self.scenario_optima[s]))
        self.labels.append(s)
        return True

    def add_generator(self, A: FeasibleSet) -> bool:
        # keyed by the realized cost vector: distinct generating sets can
        # coincide wherever interval bounds are degenerate
        cost = extreme_cost_vector(A, self.instance.uncertainty).values
        key = cost.tobytes()
        if key in self._seen:
            return False
        self._seen.add(key)
        self.costs.append(cost)
        self.optima.append(float(self.oracle.solve(cost)[1]))
        self.labels.append(A)
        return True

    def add_best_response(self, br) -> bool:
        if self.interval:
            return self.add_generator(br.chosen_set)
        return self.add_scenario(br.scenario)

    def cleaned_strategy(self, probs) -> AdversaryMixedStrategy:
        support = tuple(CostVector(c) for c in self.costs)
        if self.interval:
            return AdversaryMixedStrategy.cleaned(support, probs, generators=tuple(self.labels))
        return AdversaryMixedStrategy.cleaned(
            support, probs, scenario_indices=tuple(self.labels)
        )


def _initial_player_set(instance: Instance, oracle: NominalOracle) -> FeasibleSet:
    # Warm start from the approximation solution: midpoint costs under
    # intervals, mean scenario costs otherwise.
    if instance.is_interval:
        unc = instance.uncertainty
        seed_costs = (unc.lower + unc.upper) / 2.0
    else:
        seed_costs = instance.uncertainty.costs.mean(axis=0)
    return oracle.solve(seed_costs)[0]


def solve_randomized(
    instance: Instance,
    tol: float = 1e-7,
    max_iter: int = 10000,
    oracle: NominalOracle | None = None,
) -> GameSolution:
    """Optimal randomized minmax regret via the double-oracle loop.

    Returns a :class:`GameSolution` whose ``certified_gap`` (final distance
    between the adversary's and the player's best-response values) is at most
    ``tol``.  Raises :class:`IterationLimitError` carrying the bracketing
    interval if ``max_iter`` is exhausted first.
    """
    oracle = build_oracle(instance) if oracle is None else oracle
    columns = _Columns(instance, oracle)

    rows: list[FeasibleSet] = [_initial_player_set(instance, oracle)]
    row_seen = {rows[0]}

    first_marginal = MarginalVector(rows[0].indicator.astype(float))
    if instance.is_interval:
        columns.add_best_response(max_expected_regret_interval(first_marginal, instance, oracle))
    else:
        columns.add_best_response(
            max_expected_regret_discrete(
                first_marginal, instance, oracle, optima=columns.scenario_optima
            )
        )

    best_lower = -np.inf
    best_upper = np.inf
    for iteration in range(1, max_iter + 1):
        X = np.stack([T.indicator for T in rows]).astype(float)
        C = np.stack(columns.costs)
        payoff = X @ C.T - np.asarray(columns.optima)
        y_mix, w_mix, value = solve_matrix_game(payoff)

        marginal = MarginalVector(y_mix @ X)
        if instance.is_interval:
            adv_br = max_expected_regret_interval(marginal, instance, oracle)
        else:
            adv_br = max_expected_regret_discrete(
                marginal, instance, oracle, optima=columns.scenario_optima
            )
        # player best response, inline: one nominal solve at the mix-averaged
        # costs (the active support may not be distinct-as-strategies yet)
        d = w_mix @ C
        T_br, value_at_d = oracle.solve(d)
        play_lower = float(value_at_d) - float(w_mix @ np.asarray(columns.optima))

        upper = adv_br.value
        lower = play_lower
        best_upper = min(best_upper, upper)
        best_lower = max(best_lower, lower)
        gap = upper - lower

        if gap <= tol:
            player = PlayerMixedStrategy.cleaned(rows, y_mix)
            return GameSolution(
                value=float(value),
                player=player,
                marginal=marginal_of_strategy(player),
                adversary=columns.cleaned_strategy(w_mix),
                iterations=iteration,
                certified_gap=float(max(gap, 0.0)),
            )

        progressed = columns.add_best_response(adv_br)
        if T_br not in row_seen:
            row_seen.add(T_br)
            rows.append(T_br)
            progressed = True
        if not progressed:
            raise SolverError(
                f"double oracle stalled with residual gap {gap:.3g} > tol {tol:.3g}"
            )

    raise IterationLimitError(
        f"double oracle exceeded {max_iter} iterations",
        lower=float(best_lower),
        upper=float(best_upper),
        iterations=max_iter,
    )


def solve_deterministic_exact(
    instance: Instance,
    oracle: NominalOracle | None = None,
    cap: int | None = None,
) -> tuple[FeasibleSet, float]:
    """Deterministic minmax regret by enumerating the feasible family.

    Ties between equal-regret sets go to the lexicographically smallest
    index tuple.
    """
    oracle = build_oracle(instance) if oracle is None else oracle
    family = _sorted_family(oracle, cap)
    optima = None if instance.is_interval else scenario_optima(instance, oracle)
    best_set = None
    best_val = np.inf
    for T in family:
        if instance.is_interval:
            val, _ = max_regret_det_interval(T, instance, oracle)
        else:
            val, _ = max_regret_det_discrete(T, instance, oracle, optima=optima)
        if val < best_val:
            best_set, best_val = T, val
    return best_set, float(best_val)


def approx_mean_cost(
    instance: Instance, oracle: NominalOracle | None = None
) -> tuple[FeasibleSet, float]:
    """Nominal minimizer of the scenario-mean costs and its true max regret.

    The returned regret is at most k times the randomized game value (and so
    at most k times the deterministic optimum) for k scenarios.
    """
    if instance.is_interval:
        raise InstanceError("mean-cost approximation requires scenario uncertainty")
    oracle = build_oracle(instance) if oracle is None else oracle
    mean = instance.uncertainty.costs.mean(axis=0)
    M = oracle.solve(mean)[0]
    value, _ = max_regret_det_discrete(M, instance, oracle)
    return M, value


def approx_midpoint(
    instance: Instance, oracle: NominalOracle | None = None
) -> tuple[FeasibleSet, float]:
    """Nominal minimizer of the midpoint costs and its true max regret.

    The returned regret is at most twice the randomized game value.  Two
    identities are verified on every call and raise ``SolverError`` if they
    fail: the minimum cost at c^M equals the lower-bound total on M, and
    sum over M of (lower+upper) minus the optima at c^M and its complement
    equals the max regret of M.
    """
    if not instance.is_interval:
        raise InstanceError("midpoint approximation requires interval uncertainty")
    oracle = build_oracle(instance) if oracle is None else oracle
    unc = instance.uncertainty
    M = oracle.solve((unc.lower + unc.upper) / 2.0)[0]
    value, worst = max_regret_det_interval(M, instance, oracle)

    inside = M.indicator.astype(bool)
    f_low = oracle.solve(np.where(inside, unc.lower, unc.upper))[1]
    lower_total = float(unc.lower @ M.indicator)
    if abs(f_low - lower_total) > 1e-9:
        raise SolverError("midpoint set is not optimal at its own lower-bound costs")
    f_flip = oracle.solve(worst.values)[1]
    identity = float((unc.lower + unc.upper) @ M.indicator) - f_low - f_flip
    if abs(identity - value) > 1e-9:
        raise SolverError("midpoint regret identity violated")
    return M, value


def approx_dual_weighted(
    instance: Instance,
    w: AdversaryMixedStrategy,
    oracle: NominalOracle | None = None,
) -> tuple[FeasibleSet, float]:
    """Heuristic: reweight scenario costs by an adversary mix, then solve.

    With the uniform mix this coincides with the mean-cost approximation; no
    guarantee is claimed for other weights.
    """
    if instance.is_interval:
        raise InstanceError("dual-weighted approximation requires scenario uncertainty")
    oracle = build_oracle(instance) if oracle is None else oracle
    w.validate_for(instance)
    M = oracle.solve(w.mean_costs())[0]
    value, _ = max_regret_det_discrete(M, instance, oracle)
    return M, value


def solve_adversary_lp_discrete(
    instance: Instance,
    tol: float = 1e-7,
    max_cuts: int = 10000,
    oracle: NominalOracle | None = None,
) -> tuple[AdversaryMixedStrategy, float, PlayerMixedStrategy]:
    """Adversary's maxmin expected regret by cutting planes, plus row duals.

    Maximizes z subject to: for every feasible set T, the expected regret of
    T under the scenario mix w is at least z.  Rows are generated by solving
    the nominal problem at the mix-averaged costs; the optimal row duals are
    the player's equilibrium probabilities, so the returned value equals the
    randomized minmax regret.
    """
    if instance.is_interval:
        raise InstanceError("the cutting-plane adversary LP requires scenarios")
    oracle = build_oracle(instance) if oracle is None else oracle
    unc = instance.uncertainty
    k = unc.k
    optima = scenario_optima(instance, oracle)

    rows: list[FeasibleSet] = [oracle.solve(unc.costs.mean(axis=0))[0]]
    row_seen = {rows[0]}

    w_cur = np.full(k, 1.0 / k)
    z_cur = 0.0
    for _ in range(max_cuts):
        n_rows = len(rows)
        lhs = np.zeros((n_rows + 1, k + 1))
        for i, T in enumerate(rows):
            lhs[i, :k] = unc.costs @ T.indicator - optima
            lhs[i, k] = -1.0
        lhs[n_rows, :k] = 1.0
        rhs = np.zeros(n_rows + 1)
        rhs[n_rows] = 1.0
        relations = (GREATER,) * n_rows + (EQUAL,)
        objective = np.zeros(k + 1)
        objective[k] = 1.0
        lower = np.zeros(k + 1)
        lower[k] = -np.inf
        sol = solve_lp(
            LinearProgram(objective, lhs, relations, rhs, lower=lower, sense="max")
        )
        if not sol.is_optimal:
            raise SolverError(f"adversary LP ended with status {sol.status}")
        w_cur, z_cur = sol.x[:k], float(sol.x[k])

        d = w_cur @ unc.costs
        T_new, val = oracle.solve(d)
        lowest = val - float(w_cur @ optima)
        if lowest >= z_cur - tol:
            player_probs = np.clip(-sol.duals[:n_rows], 0.0, None)
            total = player_probs.sum()
            if abs(total - 1.0) > 1e-6:
                raise SolverError("adversary LP row duals do not form a distribution")
            adversary = AdversaryMixedStrategy.cleaned(
                tuple(CostVector(unc.costs[s]) for s in range(k)),
                w_cur,
                scenario_indices=tuple(range(k)),
            )
            player = PlayerMixedStrategy.cleaned(rows, player_probs / total)
            return adversary, z_cur, player
        if T_new in row_seen:
            raise SolverError("adversary LP stalled: separating row already present")
        row_seen.add(T_new)
        rows.append(T_new)

    raise IterationLimitError(
        f"adversary LP exceeded {max_cuts} cuts",
        lower=None,
        upper=z_cur,
        iterations=max_cuts,
    )


def bruteforce_game_value(
    instance: Instance,
    cap: int | None = None,
    oracle: NominalOracle | None = None,
) -> tuple[float, PlayerMixedStrategy, AdversaryMixedStrategy]:
    """Exact game value from the full payoff matrix (testing oracle).

    Rows are all feasible sets; columns are all scenarios, or all extreme
    vectors c^A with A feasible under intervals.
    """
    oracle = build_oracle(instance) if oracle is None else oracle
    family = _sorted_family(oracle, cap)
    limit = enumeration_cap() if cap is None else cap

    X = np.stack([T.indicator for T in family]).astype(float)
    if instance.is_interval:
        unc = instance.uncertainty
        if len(family) > limit:
            raise EnumerationCapError("interval column count exceeds the cap")
        C = np.stack(
            [np.where(A.indicator.astype(bool), unc.lower, unc.upper) for A in family]
        )
        optima = np.array([oracle.solve(c)[1] for c in C])
        labels = {"generators": tuple(family)}
    else:
        unc = instance.uncertainty
        if unc.k > limit:
            raise EnumerationCapError("scenario count exceeds the cap")
        C = np.asarray(unc.costs)
        optima = scenario_optima(instance, oracle)
        labels = {"scenario_indices": tuple(range(unc.k))}

    if X.shape[0] * C.shape[0] > MAX_PAYOFF_ENTRIES:
        raise EnumerationCapError(
            "full payoff matrix would exceed the desk-scale size guard"
        )
    payoff = X @ C.T - optima
    y_mix, w_mix, value = solve_matrix_game(payoff)
    player = PlayerMixedStrategy.cleaned(family, y_mix)
    adversary = AdversaryMixedStrategy.cleaned(
        tuple(CostVector(c) for c in C), w_mix, **labels
    )
    return float(value), player, adversary
