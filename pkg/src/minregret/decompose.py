"""Recover an explicit mixed strategy from a marginal probability vector.

A marginal p lies in the convex hull of the feasible indicator vectors iff
the deviation LP

    minimize  sum_e (lam_plus_e + lam_minus_e)
    subject to  sum over generated T containing e of y_T
                  + lam_plus_e - lam_minus_e = p_e          for every item e,
                sum_T y_T = 1,   y, lam >= 0

reaches zero.  Columns y_T are generated on demand: the LP duals (u, w) price
a candidate set T at sum(u over T) + w, and the most violated column is found
by one nominal solve at costs -u.  At optimum the basic y variables are the
strategy (at most n+1 of them can be basic), and a strictly positive optimum
yields a separating certificate in the normalized form ``w' - sum(u' over T)
<= 0 for all feasible T`` yet ``w' - p @ u' > 0``.  The deviation columns
play the role of a phase-1 relaxation, so an out-of-hull p degrades to a
certified rejection instead of an unbounded dual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    FeasibleSet,
    IterationLimitError,
    MarginalVector,
    NotInHullError,
    PlayerMixedStrategy,
    SolverError,
    marginal_of_strategy,
)
from .lp import EQUAL, LinearProgram, solve_lp
from .nominal import NominalOracle


@dataclass(frozen=True, eq=False)
class HullCertificate:
    """Separating prices: w - sum(u[e] for e in T) <= 0 for all feasible T,
    while w - p @ u > 0."""

    u: np.ndarray
    w: float


def decompose_marginal(
    p: MarginalVector,
    oracle: NominalOracle,
    tol: float = 1e-7,
    max_cuts: int = 10000,
) -> PlayerMixedStrategy:
    """Mixed strategy whose marginal reproduces ``p`` within ``tol``.

    Raises :class:`NotInHullError` with a separating certificate when no such
    strategy exists.  The support of the returned strategy never exceeds
    n + 1 sets (one per LP row at a basic optimum).
    """
    n = len(p)
    if oracle.n != n:
        raise SolverError("marginal length differs from the oracle's item count")
    p_arr = p.p
    sep_tol = tol / 10.0  # inner column-pricing margin, decoupled from tol

    columns: list[FeasibleSet] = [oracle.solve(np.zeros(n))[0]]
    seen = {columns[0]}

    for _ in range(max_cuts):
        mu = len(columns)
        # variables: y (mu) then lam_plus (n) then lam_minus (n)
        lhs = np.zeros((n + 1, mu + 2 * n))
        for j, T in enumerate(columns):
            lhs[:n, j] = T.indicator
            lhs[n, j] = 1.0
        lhs[:n, mu : mu + n] = np.eye(n)
        lhs[:n, mu + n :] = -np.eye(n)
        rhs = np.concatenate([p_arr, [1.0]])
        objective = np.concatenate([np.zeros(mu), np.ones(2 * n)])
        sol = solve_lp(
            LinearProgram(objective, lhs, (EQUAL,) * (n + 1), rhs, sense="min")
        )
        if not sol.is_optimal:
            raise SolverError(f"decomposition LP ended with status {sol.status}")

        u = sol.duals[:n]
        w = float(sol.duals[n])
        # Most negative reduced cost over all feasible sets: maximize
        # sum(u over T), i.e. one nominal solve at costs -u.
        T_new, neg_val = oracle.solve(-u)
        violation = (-neg_val) + w  # = max_T sum(u over T) + w
        if violation > sep_tol and T_new not in seen:
            seen.add(T_new)
            columns.append(T_new)
            continue

        deviation = float(sol.objective)
        if deviation > tol:
            # Certificate in the standard orientation (see module docstring).
            raise NotInHullError(
                f"marginal is outside the feasible hull (L1 deviation {deviation:.3g})",
                u=-u,
                w=w,
            )
        weights = sol.x[:mu]
        strategy = PlayerMixedStrategy.cleaned(columns, weights)
        err = np.max(np.abs(marginal_of_strategy(strategy).p - p_arr))
        if err > tol:
            raise SolverError(
                f"decomposition reconstruction error {err:.3g} exceeds tol {tol:.3g}"
            )
        return strategy

    raise IterationLimitError(
        f"decomposition exceeded {max_cuts} generated columns", iterations=max_cuts
    )


def certify_in_hull(
    p: MarginalVector, oracle: NominalOracle, tol: float = 1e-7
) -> tuple[bool, PlayerMixedStrategy | HullCertificate]:
    """Membership verdict for p in the hull of feasible indicators.

    Returns ``(True, strategy)`` or ``(False, certificate)``.
    """
    try:
        return True, decompose_marginal(p, oracle, tol=tol)
    except NotInHullError as exc:
        return False, HullCertificate(u=exc.u, w=exc.w)
