"""Domain model for minmax-regret games over combinatorial ground sets.

An :class:`Instance` couples a ground set of ``n`` items with (a) a nominal
combinatorial family describing which subsets may be selected and (b) a cost
uncertainty description, either per-item intervals or a finite list of cost
scenarios.  The selecting player commits to a distribution over feasible
sets; the adversary answers with a distribution over cost vectors drawn from
the uncertainty set.  This module holds the value types shared by every
solver plus the elementary regret arithmetic; oracles, LPs and game solvers
live in the sibling modules.

All types are immutable after construction and safe to share across threads;
the operations here are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

# Mixed-strategy probabilities must sum to one within this tolerance.
PROB_SUM_TOL = 1e-9
# Probabilities below this are dropped and the remainder renormalized; they
# are round-off ghosts from LP basic solutions, not genuine support.
PROB_DROP = 1e-12


class MinregretError(Exception):
    """Base class for all package errors."""


class InstanceError(MinregretError):
    """An instance description violates a structural invariant."""


class EnumerationCapError(MinregretError):
    """Enumerating the feasible family would exceed the configured cap."""


class SolverError(MinregretError):
    """A solver failed in a way that indicates a numerical breakdown."""


class IterationLimitError(MinregretError):
    """An iterative solver hit its iteration/cut budget before converging.

    Carries the bracketing interval reached so far so callers can still
    report anytime bounds.
    """

    def __init__(self, message, lower=None, upper=None, iterations=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper
        self.iterations = iterations


class NotInHullError(MinregretError):
    """A marginal vector is not a convex combination of feasible sets.

    ``u`` and ``w`` form a separating certificate: ``w - sum(u[e] for e in T)
    <= 0`` for every feasible set ``T`` generated, yet ``w - p @ u > 0``.
    """

    def __init__(self, message, u, w):
        super().__init__(message)
        self.u = np.asarray(u, dtype=float)
        self.w = float(w)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


def as_costs(c, n: int | None = None) -> np.ndarray:
    """Coerce a cost argument (CostVector or array-like) to a float64 array."""
    values = c.values if isinstance(c, CostVector) else np.asarray(c, dtype=float)
    if values.ndim != 1:
        raise InstanceError("cost vector must be one-dimensional")
    if not np.all(np.isfinite(values)):
        raise InstanceError("cost vector entries must be finite")
    if n is not None and values.shape[0] != n:
        raise InstanceError(f"cost vector has length {values.shape[0]}, expected {n}")
    return values


# ---------------------------------------------------------------------------
# Nominal-problem descriptions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KSelection:
    """Select exactly k of n items."""

    n: int
    k: int


@dataclass(frozen=True)
class SpanningTree:
    """Select a spanning tree of an undirected graph; items are edges."""

    vertices: int
    edges: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class DagPath:
    """Select a source-to-target path in a DAG; items are arcs."""

    vertices: int
    arcs: tuple[tuple[int, int], ...]
    source: int
    target: int


@dataclass(frozen=True)
class Explicit:
    """Feasible family given as an explicit list of index sets."""

    sets: tuple[tuple[int, ...], ...]


NominalSpec = Union[KSelection, SpanningTree, DagPath, Explicit]


# ---------------------------------------------------------------------------
# Uncertainty descriptions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Intervals:
    """Independent per-item cost intervals [lower_e, upper_e]."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.ndim != 1 or upper.shape != lower.shape:
            raise InstanceError("interval bounds must be equal-length vectors")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise InstanceError("interval bounds must be finite")
        bad = np.nonzero(lower > upper)[0]
        if bad.size:
            raise InstanceError(f"lower > upper for item {int(bad[0])}")
        object.__setattr__(self, "lower", _freeze(lower))
        object.__setattr__(self, "upper", _freeze(upper))

    @property
    def n(self) -> int:
        return self.lower.shape[0]

    def contains(self, costs: np.ndarray, tol: float = 1e-9) -> bool:
        return bool(
            np.all(costs >= self.lower - tol) and np.all(costs <= self.upper + tol)
        )


@dataclass(frozen=True, eq=False)
class Scenarios:
    """Finite scenario set: row s of ``costs`` is the cost vector c^s."""

    costs: np.ndarray

    def __post_init__(self):
        costs = np.asarray(self.costs, dtype=float)
        if costs.ndim != 2 or costs.shape[0] < 1:
            raise InstanceError("scenario costs must be a nonempty k x n matrix")
        if not np.all(np.isfinite(costs)):
            raise InstanceError("scenario costs must be finite")
        object.__setattr__(self, "costs", _freeze(costs))

    @property
    def k(self) -> int:
        return self.costs.shape[0]

    @property
    def n(self) -> int:
        return self.costs.shape[1]

    def contains(self, costs: np.ndarray, tol: float = 1e-9) -> bool:
        return bool(np.any(np.all(np.abs(self.costs - costs) <= tol, axis=1)))


UncertaintySpec = Union[Intervals, Scenarios]


@dataclass(frozen=True, eq=False)
class Instance:
    """A named robust-selection problem: items, feasible family, uncertainty."""

    name: str
    n: int
    nominal: NominalSpec
    uncertainty: UncertaintySpec

    def __post_init__(self):
        if self.n < 1:
            raise InstanceError("instance needs at least one item")
        if self.uncertainty.n != self.n:
            raise InstanceError(
                f"uncertainty describes {self.uncertainty.n} items, instance has {self.n}"
            )
        _check_nominal(self.nominal, self.n)

    @property
    def is_interval(self) -> bool:
        return isinstance(self.uncertainty, Intervals)


def _check_nominal(spec: NominalSpec, n: int) -> None:
    if isinstance(spec, KSelection):
        if spec.n != n:
            raise InstanceError("k-selection item count differs from instance n")
        if not 1 <= spec.k <= spec.n:
            raise InstanceError(f"k={spec.k} out of range 1..{spec.n}")
    elif isinstance(spec, SpanningTree):
        if len(spec.edges) != n:
            raise InstanceError("edge count must equal item count")
        if spec.vertices < 2:
            raise InstanceError("spanning-tree graph needs at least two vertices")
        for u, v in spec.edges:
            if not (0 <= u < spec.vertices and 0 <= v < spec.vertices) or u == v:
                raise InstanceError(f"bad edge ({u},{v})")
    elif isinstance(spec, DagPath):
        if len(spec.arcs) != n:
            raise InstanceError("arc count must equal item count")
        if not (0 <= spec.source < spec.vertices and 0 <= spec.target < spec.vertices):
            raise InstanceError("source/target out of range")
        if spec.source == spec.target:
            raise InstanceError("source and target must differ")
        for u, v in spec.arcs:
            if not (0 <= u < spec.vertices and 0 <= v < spec.vertices) or u == v:
                raise InstanceError(f"bad arc ({u},{v})")
        _check_acyclic(spec)
    elif isinstance(spec, Explicit):
        if not spec.sets:
            raise InstanceError("explicit feasible family is empty")
        for s in spec.sets:
            if any(not 0 <= e < n for e in s):
                raise InstanceError(f"set {s} not a subset of 0..{n - 1}")
            if len(set(s)) != len(s):
                raise InstanceError(f"set {s} repeats an item")
    else:  # pragma: no cover - guarded by type checks upstream
        raise InstanceError(f"unknown nominal spec {type(spec).__name__}")


def _check_acyclic(spec: DagPath) -> None:
    # Kahn's algorithm; leftover vertices with unconsumed in-degree mean a cycle.
    indeg = [0] * spec.vertices
    out = [[] for _ in range(spec.vertices)]
    for u, v in spec.arcs:
        out[u].append(v)
        indeg[v] += 1
    queue = [v for v in range(spec.vertices) if indeg[v] == 0]
    seen = 0
    while queue:
        u = queue.pop()
        seen += 1
        for v in out[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    if seen != spec.vertices:
        raise InstanceError("dag-path graph is not acyclic")


# ---------------------------------------------------------------------------
# Vectors and strategies
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CostVector:
    """A finite real cost per item."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise InstanceError("cost vector must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise InstanceError("cost vector entries must be finite")
        object.__setattr__(self, "values", _freeze(values))

    def __eq__(self, other):
        return isinstance(other, CostVector) and np.array_equal(
            self.values, other.values
        )

    def __hash__(self):
        return hash(self.values.tobytes())

    def __len__(self):
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class FeasibleSet:
    """A subset of items as a 0/1 indicator vector."""

    indicator: np.ndarray

    def __post_init__(self):
        ind = np.asarray(self.indicator)
        if ind.ndim != 1:
            raise InstanceError("indicator must be one-dimensional")
        if not np.all((ind == 0) | (ind == 1)):
            raise InstanceError("indicator entries must be 0 or 1")
        object.__setattr__(self, "indicator", _freeze(ind.astype(np.int8)))

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "FeasibleSet":
        ind = np.zeros(n, dtype=np.int8)
        for e in indices:
            if not 0 <= e < n:
                raise InstanceError(f"item index {e} out of range 0..{n - 1}")
            ind[e] = 1
        return cls(ind)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.nonzero(self.indicator)[0])

    @property
    def size(self) -> int:
        return int(self.indicator.sum())

    def __eq__(self, other):
        return isinstance(other, FeasibleSet) and np.array_equal(
            self.indicator, other.indicator
        )

    def __hash__(self):
        return hash(self.indicator.tobytes())

    def __contains__(self, item: int) -> bool:
        return bool(self.indicator[item])

    def __len__(self):
        return self.indicator.shape[0]


def _clean_distribution(probs) -> np.ndarray:
    probs = np.asarray(probs, dtype=float)
    if probs.ndim != 1 or probs.size == 0:
        raise InstanceError("a mixed strategy needs a nonempty probability vector")
    if np.any(probs < -PROB_SUM_TOL):
        raise InstanceError("probabilities must be nonnegative")
    total = float(probs.sum())
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise InstanceError(f"probabilities sum to {total!r}, not 1")
    return probs


@dataclass(frozen=True, eq=False)
class PlayerMixedStrategy:
    """Finite-support distribution over feasible sets."""

    support: tuple[FeasibleSet, ...]
    probs: np.ndarray

    def __post_init__(self):
        probs = _clean_distribution(self.probs)
        if len(self.support) != probs.size:
            raise InstanceError("support and probability lengths differ")
        if len(set(self.support)) != len(self.support):
            raise InstanceError("support sets must be pairwise distinct")
        object.__setattr__(self, "support", tuple(self.support))
        object.__setattr__(self, "probs", _freeze(probs))

    @classmethod
    def cleaned(cls, support, probs) -> "PlayerMixedStrategy":
        """Merge duplicates, drop sub-``PROB_DROP`` weights, renormalize."""
        merged: dict[FeasibleSet, float] = {}
        for s, p in zip(support, probs):
            merged[s] = merged.get(s, 0.0) + float(p)
        kept = [(s, p) for s, p in merged.items() if p > PROB_DROP]
        if not kept:
            raise InstanceError("strategy support vanished after cleaning")
        sets, weights = zip(*kept)
        weights = np.asarray(weights, dtype=float)
        return cls(tuple(sets), weights / weights.sum())

    @property
    def support_size(self) -> int:
        return len(self.support)


@dataclass(frozen=True, eq=False)
class AdversaryMixedStrategy:
    """Finite-support distribution over cost vectors.

    ``scenario_indices`` labels support points with scenario numbers for
    discrete uncertainty; ``generators`` records, for interval uncertainty,
    the set A whose items sit at their lower bound in each support vector.
    """

    support: tuple[CostVector, ...]
    probs: np.ndarray
    scenario_indices: tuple[int, ...] | None = None
    generators: tuple[FeasibleSet, ...] | None = None

    def __post_init__(self):
        probs = _clean_distribution(self.probs)
        if len(self.support) != probs.size:
            raise InstanceError("support and probability lengths differ")
        if len(set(self.support)) != len(self.support):
            raise InstanceError("support cost vectors must be pairwise distinct")
        for extra in (self.scenario_indices, self.generators):
            if extra is not None and len(extra) != len(self.support):
                raise InstanceError("support labels must match support length")
        object.__setattr__(self, "support", tuple(self.support))
        object.__setattr__(self, "probs", _freeze(probs))

    @classmethod
    def cleaned(
        cls, support, probs, scenario_indices=None, generators=None
    ) -> "AdversaryMixedStrategy":
        entries: dict[CostVector, list] = {}
        for i, (c, p) in enumerate(zip(support, probs)):
            if c in entries:
                entries[c][0] += float(p)
            else:
                entries[c] = [
                    float(p),
                    None if scenario_indices is None else scenario_indices[i],
                    None if generators is None else generators[i],
                ]
        kept = [(c, rec) for c, rec in entries.items() if rec[0] > PROB_DROP]
        if not kept:
            raise InstanceError("strategy support vanished after cleaning")
        costs = tuple(c for c, _ in kept)
        weights = np.asarray([rec[0] for _, rec in kept], dtype=float)
        scen = tuple(rec[1] for _, rec in kept) if scenario_indices is not None else None
        gens = tuple(rec[2] for _, rec in kept) if generators is not None else None
        return cls(costs, weights / weights.sum(), scen, gens)

    def validate_for(self, instance: Instance, tol: float = 1e-9) -> None:
        """Check every support vector lies in the instance's uncertainty set."""
        for c in self.support:
            if len(c) != instance.n:
                raise InstanceError("cost vector length differs from instance n")
            if not instance.uncertainty.contains(c.values, tol):
                raise InstanceError(
                    "adversary support vector outside the uncertainty set"
                )

    @property
    def support_size(self) -> int:
        return len(self.support)

    def mean_costs(self) -> np.ndarray:
        stacked = np.stack([c.values for c in self.support])
        return self.probs @ stacked


@dataclass(frozen=True, eq=False)
class MarginalVector:
    """Per-item selection probabilities induced by a player strategy."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 1:
            raise InstanceError("marginal vector must be one-dimensional")
        if np.any(p < -PROB_SUM_TOL) or np.any(p > 1.0 + PROB_SUM_TOL):
            raise InstanceError("marginal entries must lie in [0, 1]")
        object.__setattr__(self, "p", _freeze(np.clip(p, 0.0, 1.0)))

    def __len__(self):
        return self.p.shape[0]


@dataclass(frozen=True, eq=False)
class GameSolution:
    """Solved randomized minmax-regret game.

    ``value`` is the game value; ``certified_gap`` is the final distance
    between the adversary's and player's best-response values, so the true
    value lies within ``certified_gap`` of ``value``.
    """

    value: float
    player: PlayerMixedStrategy
    marginal: MarginalVector
    adversary: AdversaryMixedStrategy
    iterations: int
    certified_gap: float


# ---------------------------------------------------------------------------
# Elementary regret arithmetic
# ---------------------------------------------------------------------------


def solution_cost(T: FeasibleSet, c) -> float:
    """Total cost of the selected items under cost vector ``c``."""
    costs = as_costs(c, len(T))
    return float(costs @ T.indicator)


def regret(T: FeasibleSet, c, nominal) -> float:
    """Cost of ``T`` at ``c`` minus the optimal cost at ``c``."""
    if not nominal.is_feasible(T):
        raise InstanceError("regret is defined only for feasible sets")
    costs = as_costs(c, len(T))
    _, best = nominal.solve(costs)
    return solution_cost(T, costs) - best


def expected_regret(
    y: PlayerMixedStrategy, w: AdversaryMixedStrategy, nominal
) -> float:
    """Expected regret when sets and costs are drawn independently from y, w."""
    optima = [nominal.solve(c.values)[1] for c in w.support]
    total = 0.0
    for T, py in zip(y.support, y.probs):
        for c, pw, best in zip(w.support, w.probs, optima):
            total += float(py) * float(pw) * (solution_cost(T, c) - best)
    return total


def marginal_of_strategy(y: PlayerMixedStrategy) -> MarginalVector:
    """Per-item probability of being selected: p_e = sum of y over sets with e."""
    stacked = np.stack([T.indicator for T in y.support]).astype(float)
    return MarginalVector(y.probs @ stacked)


# ---------------------------------------------------------------------------
# Instance descriptions (external JSON schema -> Instance)
# ---------------------------------------------------------------------------

_NOMINAL_FIELDS = {
    "k-selection": {"type", "n", "k"},
    "spanning-tree": {"type", "vertices", "edges"},
    "dag-path": {"type", "vertices", "arcs", "source", "target"},
    "explicit": {"type", "sets"},
}

_UNCERTAINTY_FIELDS = {
    "interval": {"type", "lower", "upper"},
    "scenarios": {"type", "costs"},
}


def _reject_unknown(d: dict, allowed: set, where: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise InstanceError(f"unknown field(s) {sorted(unknown)} in {where}")


def validate_instance(description: dict) -> Instance:
    """Build a validated :class:`Instance` from a plain-dict description.

    The description uses the documented JSON schema; unknown fields are
    rejected rather than ignored so that typos fail loudly.
    """
    if not isinstance(description, dict):
        raise InstanceError("instance description must be an object")
    _reject_unknown(description, {"name", "n", "nominal", "uncertainty"}, "instance")
    try:
        name = str(description.get("name", "unnamed"))
        n = int(description["n"])
        nom_d = dict(description["nominal"])
        unc_d = dict(description["uncertainty"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(f"malformed instance description: {exc}") from exc

    kind = nom_d.get("type")
    if kind not in _NOMINAL_FIELDS:
        raise InstanceError(f"unknown nominal type {kind!r}")
    _reject_unknown(nom_d, _NOMINAL_FIELDS[kind], f"nominal/{kind}")
    try:
        if kind == "k-selection":
            nominal: NominalSpec = KSelection(n=int(nom_d["n"]), k=int(nom_d["k"]))
        elif kind == "spanning-tree":
            nominal = SpanningTree(
                vertices=int(nom_d["vertices"]),
                edges=tuple((int(u), int(v)) for u, v in nom_d["edges"]),
            )
        elif kind == "dag-path":
            nominal = DagPath(
                vertices=int(nom_d["vertices"]),
                arcs=tuple((int(u), int(v)) for u, v in nom_d["arcs"]),
                source=int(nom_d["source"]),
                target=int(nom_d["target"]),
            )
        else:
            nominal = Explicit(
                sets=tuple(tuple(sorted(int(e) for e in s)) for s in nom_d["sets"])
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(f"malformed nominal spec: {exc}") from exc

    ukind = unc_d.get("type")
    if ukind not in _UNCERTAINTY_FIELDS:
        raise InstanceError(f"unknown uncertainty type {ukind!r}")
    _reject_unknown(unc_d, _UNCERTAINTY_FIELDS[ukind], f"uncertainty/{ukind}")
    try:
        if ukind == "interval":
            uncertainty: UncertaintySpec = Intervals(
                lower=np.asarray(unc_d["lower"], dtype=float),
                upper=np.asarray(unc_d["upper"], dtype=float),
            )
        else:
            uncertainty = Scenarios(costs=np.asarray(unc_d["costs"], dtype=float))
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(f"malformed uncertainty spec: {exc}") from exc

    return Instance(name=name, n=n, nominal=nominal, uncertainty=uncertainty)


def describe_instance(instance: Instance) -> dict:
    """Inverse of :func:`validate_instance`: emit the JSON-schema dict."""
    nom = instance.nominal
    if isinstance(nom, KSelection):
        nominal = {"type": "k-selection", "n": nom.n, "k": nom.k}
    elif isinstance(nom, SpanningTree):
        nominal = {
            "type": "spanning-tree",
            "vertices": nom.vertices,
            "edges": [list(e) for e in nom.edges],
        }
    elif isinstance(nom, DagPath):
        nominal = {
            "type": "dag-path",
            "vertices": nom.vertices,
            "arcs": [list(a) for a in nom.arcs],
            "source": nom.source,
            "target": nom.target,
        }
    else:
        nominal = {"type": "explicit", "sets": [list(s) for s in nom.sets]}

    unc = instance.uncertainty
    if isinstance(unc, Intervals):
        uncertainty = {
            "type": "interval",
            "lower": unc.lower.tolist(),
            "upper": unc.upper.tolist(),
        }
    else:
        uncertainty = {"type": "scenarios", "costs": unc.costs.tolist()}

    return {
        "name": instance.name,
        "n": instance.n,
        "nominal": nominal,
        "uncertainty": uncertainty,
    }
