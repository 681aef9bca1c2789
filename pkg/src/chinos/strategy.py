"""Strategies, best guesses and responses, equilibrium scans and crossing angles.

Scoring follows the semiclassical accounting: Alice's winning probability is
her chance of naming the measured outcome, and Bob is the residual claimant,
so P_B = 1 - P_A.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import bisect

from .errors import RootNotBracketed
from .games import (
    AveragedTable,
    GameDefinition,
    as_mixture,
    averaged_probs,
    classical_round,
    hardcore_game,
    probability_table,
    qubit_game,
)
from .modes import Mode
from .qstate import ATOL

IMPROVEMENT_TOL = 1e-12


class TieBreak(enum.Enum):
    LOWEST_OUTCOME = "lowest"
    RANDOMIZED = "randomized"


@dataclass(frozen=True)
class MixedStrategy:
    """Weights over choices plus a guess policy.

    ``guess_policy`` maps each choice to a fixed guess or to a probability
    vector over the guess set. ``None`` means "best guess against the
    opponent's current mixture", which is how the narrative strategies
    ("choose O1 or O4 at random and guess well") are meant.
    """

    choices: tuple
    weights: np.ndarray
    guess_policy: Mapping | None = None
    label: str = ""

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (len(self.choices),):
            raise ValueError("one weight per choice required")
        if np.any(w < -ATOL) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights must form a probability vector, got {w}")
        w = np.clip(w, 0.0, None)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if not self.label:
            object.__setattr__(self, "label", "uniform" + str(self.support))

    @classmethod
    def uniform(cls, choices: Sequence, subset: Sequence | None = None, guess_policy=None) -> "MixedStrategy":
        choices = tuple(choices)
        subset = tuple(choices if subset is None else subset)
        w = np.array([1.0 / len(subset) if c in subset else 0.0 for c in choices])
        return cls(choices, w, guess_policy, "uniform{" + ",".join(map(str, subset)) + "}")

    @property
    def support(self) -> tuple:
        return tuple(c for c, w in zip(self.choices, self.weights) if w > ATOL)

    def weight(self, choice) -> float:
        return float(self.weights[self.choices.index(choice)])

    def same_as(self, other: "MixedStrategy") -> bool:
        return (
            self.choices == other.choices
            and np.allclose(self.weights, other.weights, atol=1e-12, rtol=0)
            and _policy_key(self.guess_policy) == _policy_key(other.guess_policy)
        )

    def to_dict(self) -> dict:
        d = {"label": self.label, "choices": [_jsonable(c) for c in self.choices],
             "weights": [float(x) for x in self.weights]}
        if self.guess_policy is not None:
            d["guess_policy"] = {str(k): _jsonable(v) for k, v in self.guess_policy.items()}
        return d


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return [float(x) for x in v]
    if isinstance(v, tuple):
        return "".join(map(str, v))
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def _policy_key(policy):
    if policy is None:
        return None
    return tuple(sorted((str(k), str(_jsonable(v))) for k, v in policy.items()))


def best_guess(avg: AveragedTable, choice, tie_break: TieBreak = TieBreak.LOWEST_OUTCOME,
               rng: np.random.Generator | None = None, atol: float = 1e-12):
    """Outcome with the highest averaged probability for ``choice``.

    Values within ``atol`` of the maximum count as ties. ``LOWEST_OUTCOME``
    returns the first tied outcome; ``RANDOMIZED`` draws one uniformly.
    """
    row = avg.row(choice)
    tied = np.flatnonzero(row >= row.max() - atol)
    if tie_break is TieBreak.LOWEST_OUTCOME or len(tied) == 1:
        k = tied[0]
    else:
        if rng is None:
            raise ValueError("randomized tie-break needs a generator")
        k = rng.choice(tied)
    return avg.outcomes[k]


def guess_distribution(game: GameDefinition, strat: MixedStrategy, avg: AveragedTable) -> np.ndarray:
    """Per-choice probability vectors over guesses, shape (n_choices, n_guesses)."""
    n_g = len(game.guess_set)
    out = np.zeros((len(game.choice_set), n_g))
    for a, c in enumerate(game.choice_set):
        if strat.guess_policy is None or c not in strat.guess_policy:
            out[a, game.guess_index(best_guess(avg, c))] = 1.0
            continue
        g = strat.guess_policy[c]
        if np.ndim(g) == 1 and len(g) == n_g and not isinstance(g, tuple):
            out[a] = np.asarray(g, dtype=float)
        else:
            out[a, game.guess_index(g)] = 1.0
    return out


def _mixture_of(game: GameDefinition, opp) -> np.ndarray:
    if isinstance(opp, MixedStrategy):
        return as_mixture(game, dict(zip(opp.choices, opp.weights)))
    return as_mixture(game, opp)


def winning_probability(game: GameDefinition, strat_A: MixedStrategy, strat_B_choices=None,
                        table=None) -> tuple[float, float]:
    """(P_A, P_B) with P_A Alice's hit probability and P_B = 1 - P_A.

    ``strat_B_choices`` is Bob's mixture: a MixedStrategy, a mapping, a vector,
    or None for uniform.
    """
    table = table or probability_table(game)
    avg = averaged_probs(game, _mixture_of(game, strat_B_choices), table)
    wA = as_mixture(game, dict(zip(strat_A.choices, strat_A.weights)))
    pi = guess_distribution(game, strat_A, avg)
    p_a = float(np.einsum("a,an,an->", wA, pi, avg.avg))
    return p_a, 1.0 - p_a


def subset_strategies(choices: Sequence, min_size: int = 2) -> list[MixedStrategy]:
    """Uniform mixtures over all subsets of at least ``min_size`` choices, by size then lexicographically."""
    choices = tuple(choices)
    out = []
    for k in range(min_size, len(choices) + 1):
        for sub in itertools.combinations(choices, k):
            out.append(MixedStrategy.uniform(choices, sub))
    return out


def best_response(game: GameDefinition, opponent: MixedStrategy, search_space: Sequence[MixedStrategy] | None = None,
                  responder: str = "A", table=None) -> MixedStrategy:
    """Candidate that is best for ``responder`` against ``opponent``.

    Alice maximizes P_A. Bob minimizes P_A; when Alice's guess policy is
    adaptive it is re-optimized against each of Bob's candidates. The first
    candidate (in search-space order) attaining the optimum is returned.
    """
    return _best_response(game, opponent, search_space, responder, table)[0]


def _best_response(game, opponent, search_space, responder, table=None):
    table = table or probability_table(game)
    cands = list(search_space) if search_space is not None else subset_strategies(game.choice_set)
    if not cands:
        raise ValueError("search space is empty")
    best, best_val = None, None
    for cand in cands:
        if responder == "A":
            val = winning_probability(game, cand, opponent, table)[0]
            better = best_val is None or val > best_val + IMPROVEMENT_TOL
        elif responder == "B":
            val = winning_probability(game, opponent, cand, table)[0]
            better = best_val is None or val < best_val - IMPROVEMENT_TOL
        else:
            raise ValueError(f"responder must be 'A' or 'B', got {responder!r}")
        if better:
            best, best_val = cand, val
    return best, best_val


@dataclass(frozen=True)
class IterationRecord:
    strategy_A: MixedStrategy
    strategy_B: MixedStrategy
    P_A: float
    P_B: float
    mover: str

    def to_dict(self) -> dict:
        return {"mover": self.mover, "P_A": self.P_A, "P_B": self.P_B,
                "strategy_A": self.strategy_A.to_dict(), "strategy_B": self.strategy_B.to_dict()}


@dataclass(frozen=True)
class EquilibriumReport:
    game: str
    theta: float | None
    iterations: list[IterationRecord]
    stable: bool
    winner: str
    converged: bool = True

    @property
    def final(self) -> IterationRecord:
        return self.iterations[-1]

    def to_dict(self) -> dict:
        return {"game": self.game, "theta": self.theta, "stable": self.stable, "winner": self.winner,
                "converged": self.converged, "iterations": [it.to_dict() for it in self.iterations]}


def equilibrium_scan(game: GameDefinition, max_iters: int = 20, min_size: int = 2) -> EquilibriumReport:
    """Iterated best response starting from uniform play by both players.

    At each step the player below 1/2 best-responds. An exactly even profile
    is reported as symmetric. If the losing player cannot improve, the
    profile is stable and the other player wins. A revisited profile is a
    cycle and the scan stops without convergence.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    if game.kind.mode is Mode.TWO_QUBIT:
        from .metric import two_qubit_equilibrium

        return two_qubit_equilibrium(game.kind.theta, order=game.order)

    table = probability_table(game)
    space = subset_strategies(game.choice_set, min_size)
    sA = MixedStrategy.uniform(game.choice_set)
    sB = MixedStrategy.uniform(game.choice_set)
    p_a = winning_probability(game, sA, sB, table)[0]
    iters = [IterationRecord(sA, sB, p_a, 1.0 - p_a, "start")]
    seen = [(sA, sB)]
    for _ in range(max_iters):
        if abs(p_a - 0.5) <= IMPROVEMENT_TOL:
            return EquilibriumReport(game.name, game.kind.theta, iters, True, "symmetric")
        mover = "A" if p_a < 0.5 else "B"
        if mover == "A":
            cand, val = _best_response(game, sB, space, "A", table)
            improved = val > p_a + IMPROVEMENT_TOL
            if improved:
                sA = cand
        else:
            cand, val = _best_response(game, sA, space, "B", table)
            improved = val < p_a - IMPROVEMENT_TOL
            if improved:
                sB = cand
        if not improved:
            return EquilibriumReport(game.name, game.kind.theta, iters, True, "B" if mover == "A" else "A")
        p_a = winning_probability(game, sA, sB, table)[0]
        iters.append(IterationRecord(sA, sB, p_a, 1.0 - p_a, mover))
        if any(a.same_as(sA) and b.same_as(sB) for a, b in seen):
            return EquilibriumReport(game.name, game.kind.theta, iters, False, _lead(p_a), converged=False)
        seen.append((sA, sB))
    return EquilibriumReport(game.name, game.kind.theta, iters, False, _lead(p_a), converged=False)


def _lead(p_a: float) -> str:
    if abs(p_a - 0.5) <= IMPROVEMENT_TOL:
        return "symmetric"
    return "A" if p_a > 0.5 else "B"


CROSSING_INTERVALS = {
    "hardcore": (0.01, np.pi / 2 - 0.01),
    "qubit": (0.01, np.pi - 0.01),
}


def column_average(family: str, theta: float, choice: int, outcome: int = 0) -> float:
    """Alice's averaged probability of ``outcome`` for ``choice`` against uniform Bob."""
    game = hardcore_game(theta) if family == "hardcore" else qubit_game(theta)
    return float(averaged_probs(game).row(choice)[outcome])


def first_crossing(f, lo: float, hi: float, level: float = 0.5, grid: int = 400, xtol: float = 1e-13) -> float:
    """Smallest root of ``f - level`` on [lo, hi], bracketed on a grid and refined by bisection.

    Raises:
        RootNotBracketed: if no sign change is found on the grid.
    """
    xs = np.linspace(lo, hi, grid)
    vals = np.array([f(x) - level for x in xs])
    for k in range(grid - 1):
        if vals[k] == 0.0:
            return float(xs[k])
        if vals[k] * vals[k + 1] < 0:
            return float(bisect(lambda x: f(x) - level, xs[k], xs[k + 1], xtol=xtol, maxiter=200))
    raise RootNotBracketed(f"no crossing of {level} on [{lo}, {hi}]")


def crossing_angles(family: str) -> tuple[float, float]:
    """Angles where Alice's averaged probability of outcome 0 crosses 1/2.

    The first angle comes from the O2 row, the second from the O1 row.
    """
    if family not in CROSSING_INTERVALS:
        raise ValueError(f"family must be one of {sorted(CROSSING_INTERVALS)}, got {family!r}")
    lo, hi = CROSSING_INTERVALS[family]
    t1 = first_crossing(lambda t: column_average(family, t, 2), lo, hi)
    t2 = first_crossing(lambda t: column_average(family, t, 1), lo, hi)
    return t1, t2


@dataclass(frozen=True)
class MonteCarloResult:
    p_a: float
    p_b: float
    stderr: float
    rounds: int
    ties: int = 0


def _classical_bob_guess(game: GameDefinition, cB: int, gA: int) -> int:
    allowed = [g for g in sorted(game.intelligence[cB]) if g != gA]
    return allowed[0]


def monte_carlo_rounds(game: GameDefinition, strat_A: MixedStrategy, strat_B: MixedStrategy,
                       rounds: int, seed: int) -> MonteCarloResult:
    """Simulate ``rounds`` independent rounds with a seeded generator.

    Quantum games sample the measured outcome from the exact table and score
    Alice's hit. The classical game is adjudicated round by round, with Bob
    guessing the lowest total his coin and the restriction rule allow.
    """
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    rng = np.random.default_rng(seed)
    table = probability_table(game)
    wA = as_mixture(game, dict(zip(strat_A.choices, strat_A.weights)))
    wB = _mixture_of(game, strat_B)
    avg = averaged_probs(game, wB, table)
    pi = guess_distribution(game, strat_A, avg)
    n_c, n_g = len(game.choice_set), len(game.guess_set)
    a = rng.choice(n_c, size=rounds, p=wA)
    b = rng.choice(n_c, size=rounds, p=wB)
    cdf_guess = np.cumsum(pi, axis=1)
    ga = np.minimum((rng.random(rounds)[:, None] > cdf_guess[a]).sum(axis=1), n_g - 1)
    ties = 0
    if game.kind.mode is Mode.CLASSICAL:
        wins = 0
        for ia, ib, ig in zip(a, b, ga):
            cA, cB = game.choice_set[ia], game.choice_set[ib]
            gA = game.guess_set[ig]
            gB = _classical_bob_guess(game, cB, gA)
            w = classical_round(cA, cB, gA, gB, game)
            wins += w == "A"
            ties += w == "none"
        p_hat = wins / rounds
    else:
        cdf_out = np.cumsum(table.probs, axis=2)
        n = np.minimum((rng.random(rounds)[:, None] > cdf_out[a, b]).sum(axis=1), n_g - 1)
        p_hat = float(np.mean(n == ga))
    stderr = float(np.sqrt(p_hat * (1.0 - p_hat) / rounds))
    return MonteCarloResult(float(p_hat), 1.0 - float(p_hat), stderr, rounds, int(ties))


__all__ = [
    "EquilibriumReport",
    "IterationRecord",
    "MixedStrategy",
    "MonteCarloResult",
    "TieBreak",
    "best_guess",
    "best_response",
    "crossing_angles",
    "equilibrium_scan",
    "first_crossing",
    "monte_carlo_rounds",
    "subset_strategies",
    "winning_probability",
]
