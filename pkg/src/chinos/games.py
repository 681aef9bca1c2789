"""Game definitions, adjudication rules and exact outcome-probability tables.

Every game shares the same skeleton: each player picks a choice, the device
turns the two choices into a joint object, and each player names a guess in a
metric space. Classical coins are embedded in the same machinery by treating
"no coin" and "one coin" as the identity and creation operator on a truncated
boson mode, so every table below is produced by one code path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from . import modes
from .errors import IntelligenceViolation, RestrictionViolation
from .modes import Mode, ModeKind, OperatorFamily
from .qstate import ATOL, StateVector, apply, normalize

CLASSICAL_CHOICES = (0, 1)
CLASSICAL_GUESSES = (0, 1, 2)


def _abs_distance(g, h) -> float:
    return float(abs(g - h))


def _basis_distance(g, h) -> float:
    # Guesses are orthonormal basis states, so the trace distance is 0 or 1.
    return 0.0 if g == h else 1.0


@dataclass(frozen=True)
class GameDefinition:
    """Choice set, guess set, device and the two rationality rules of one game.

    Attributes:
        name: Short identifier used by the CLI and reports.
        choice_set: Choices available to each player.
        guess_set: Possible guesses (also the measured outcomes).
        kind: Mode of the shared object and its angle.
        d0: Minimal distance between the two players' guesses.
        intelligence: Map from a player's own choice to the guesses that
            can still be right.
        enforce_intelligence: Whether adjudication rejects guesses outside
            the intelligence map.
        distance: Metric on the guess set.
        family: Operators behind the choices; the classical game uses the
            identity and creation operators of a boson mode.
        order: Which player's operator acts first on the vacuum. Only the
            two-qubit game distinguishes the two orders.
    """

    name: str
    choice_set: tuple
    guess_set: tuple
    kind: ModeKind
    d0: float
    intelligence: Mapping
    family: OperatorFamily
    enforce_intelligence: bool = True
    distance: Callable = field(default=_basis_distance, compare=False)
    order: str = "bob_first"
    operator_map: Mapping | None = None

    def __post_init__(self):
        if not self.d0 > 0:
            raise ValueError(f"d0 must be positive, got {self.d0}")
        for c in self.choice_set:
            allowed = self.intelligence.get(c)
            if not allowed:
                raise ValueError(f"intelligence map is empty for choice {c!r}")
            if not set(allowed) <= set(self.guess_set):
                raise ValueError(f"intelligence({c!r}) is not a subset of the guess set")
        if self.order not in ("bob_first", "alice_first"):
            raise ValueError(f"order must be 'bob_first' or 'alice_first', got {self.order!r}")

    @property
    def is_classical(self) -> bool:
        return self.kind.mode is Mode.CLASSICAL

    def operator(self, choice):
        key = self.operator_map[choice] if self.operator_map else choice
        return self.family[key]

    def choice_index(self, choice) -> int:
        return self.choice_set.index(choice)

    def guess_index(self, guess) -> int:
        return self.guess_set.index(guess)


def _vacuum(dim: int) -> StateVector:
    basis = {2: "qubit1", 3: "fock3", 4: "qubit2"}[dim]
    return StateVector.basis_state(basis, 0)


def _raw_joint(family: OperatorFamily, op_first, op_second) -> StateVector:
    psi = _vacuum(family.dim)
    return apply(op_second, apply(op_first, psi))


def _support_map(choice_set, guess_set, probs: np.ndarray) -> dict:
    """Guesses with nonzero probability for some opponent choice, per own choice."""
    out = {}
    for a, c in enumerate(choice_set):
        reach = probs[a].max(axis=0) > ATOL
        out[c] = frozenset(g for g, ok in zip(guess_set, reach) if ok)
    return out


def _build(name, choice_set, guess_set, kind, family, d0=1.0, distance=_basis_distance,
           enforce_intelligence=True, order="bob_first", operator_map=None) -> GameDefinition:
    # The intelligence map is derived from the exact table, so build a provisional
    # definition with a permissive map first.
    permissive = {c: frozenset(guess_set) for c in choice_set}
    draft = GameDefinition(name, tuple(choice_set), tuple(guess_set), kind, d0, permissive, family,
                           enforce_intelligence, distance, order, operator_map)
    table = probability_table(draft)
    intel = _support_map(draft.choice_set, draft.guess_set, table.probs)
    return GameDefinition(name, draft.choice_set, draft.guess_set, kind, d0, intel, family,
                          enforce_intelligence, distance, order, operator_map)


def classical_game(enforce_intelligence: bool = True) -> GameDefinition:
    """Two players with one coin each; choices are coin counts, guesses are totals."""
    fam = modes.boson_family()
    return _build("classical", CLASSICAL_CHOICES, CLASSICAL_GUESSES, ModeKind(Mode.CLASSICAL), fam,
                  distance=_abs_distance, enforce_intelligence=enforce_intelligence,
                  operator_map={0: 1, 1: 4})


def boson_game(enforce_intelligence: bool = True) -> GameDefinition:
    return _build("boson", (1, 2, 3, 4), (0, 1, 2), ModeKind(Mode.BOSON), modes.boson_family(),
                  enforce_intelligence=enforce_intelligence)


def hardcore_game(theta: float, enforce_intelligence: bool = True) -> GameDefinition:
    fam = modes.hardcore_family(theta)
    return _build("hardcore", (1, 2, 3), (0, 1), fam.kind, fam, enforce_intelligence=enforce_intelligence)


def qubit_game(theta: float, enforce_intelligence: bool = True) -> GameDefinition:
    fam = modes.qubit_family(theta)
    return _build("qubit", (1, 2, 3), (0, 1), fam.kind, fam, enforce_intelligence=enforce_intelligence)


def two_qubit_game(theta: float = 0.0, order: str = "bob_first") -> GameDefinition:
    """Rotated-Bell game; outcomes are the computational basis states |i1 i0>.

    The guess-state machinery (metric matrices, payoffs) lives in
    :mod:`chinos.metric`; this definition covers the shared tables.
    """
    fam = modes.bell_family(theta)
    guesses = ((0, 0), (0, 1), (1, 0), (1, 1))
    return _build("two_qubit", (0, 1, 2, 3), guesses, fam.kind, fam, order=order)


GAME_FACTORIES = {
    "classical": lambda theta=None: classical_game(),
    "boson": lambda theta=None: boson_game(),
    "hardcore": lambda theta=np.pi / 4: hardcore_game(theta),
    "qubit": lambda theta=np.pi / 2: qubit_game(theta),
    "two_qubit": lambda theta=0.0: two_qubit_game(theta),
}


def make_game(name: str, theta: float | None = None) -> GameDefinition:
    try:
        factory = GAME_FACTORIES[name]
    except KeyError:
        raise ValueError(f"unknown game {name!r}; choose from {sorted(GAME_FACTORIES)}") from None
    return factory() if theta is None else factory(theta)


def classical_round(cA: int, cB: int, gA: int, gB: int, game: GameDefinition | None = None) -> str:
    """Adjudicate one classical round and return ``"A"``, ``"B"`` or ``"none"``.

    The guess closer to the true total wins; equal distances are a push.

    Raises:
        RestrictionViolation: if the guesses are closer than ``d0``.
        IntelligenceViolation: if enforcement is on and a guess cannot be right.
    """
    game = game or classical_game()
    for c in (cA, cB):
        if c not in game.choice_set:
            raise ValueError(f"coin count must be one of {game.choice_set}, got {c!r}")
    for g in (gA, gB):
        if g not in game.guess_set:
            raise ValueError(f"guess must be one of {game.guess_set}, got {g!r}")
    if not restriction_check(game, gA, gB):
        raise RestrictionViolation(f"guesses {gA} and {gB} are closer than d0={game.d0}")
    if game.enforce_intelligence:
        for who, c, g in (("Alice", cA, gA), ("Bob", cB, gB)):
            if g not in game.intelligence[c]:
                raise IntelligenceViolation(f"{who} holds {c} coin(s) and cannot guess a total of {g}")
    total = cA + cB
    dA, dB = game.distance(gA, total), game.distance(gB, total)
    if dA < dB:
        return "A"
    if dB < dA:
        return "B"
    return "none"


def joint_state(game: GameDefinition, i, j) -> StateVector:
    """Normalized joint state for Alice's choice ``i`` and Bob's choice ``j``.

    Bob's operator acts on the vacuum first unless the game is Alice-first.

    Raises:
        NullMove: if the two operators annihilate the vacuum.
    """
    op_a, op_b = game.operator(i), game.operator(j)
    if game.order == "bob_first":
        raw = _raw_joint(game.family, op_b, op_a)
    else:
        raw = _raw_joint(game.family, op_a, op_b)
    return normalize(raw)[0]


def outcome_probs(game: GameDefinition, i, j) -> np.ndarray:
    """Probabilities of each guess-set outcome, ordered like ``game.guess_set``."""
    p = joint_state(game, i, j).probabilities()
    if game.kind.mode is Mode.CLASSICAL or game.kind.mode is Mode.BOSON:
        return p[: len(game.guess_set)]
    return p


@dataclass(frozen=True)
class ProbabilityTable:
    """Exact outcome probabilities; ``probs[a, b, n]`` for Alice choice a, Bob choice b."""

    game: str
    choices: tuple
    outcomes: tuple
    probs: np.ndarray

    def cell(self, i, j) -> np.ndarray:
        return self.probs[self.choices.index(i), self.choices.index(j)]


@dataclass(frozen=True)
class AveragedTable:
    """Alice's outcome probabilities averaged over Bob's mixture, ``avg[a, n]``."""

    game: str
    choices: tuple
    outcomes: tuple
    mixture: np.ndarray
    avg: np.ndarray

    def row(self, choice) -> np.ndarray:
        return self.avg[self.choices.index(choice)]


def probability_table(game: GameDefinition) -> ProbabilityTable:
    n_c, n_g = len(game.choice_set), len(game.guess_set)
    probs = np.empty((n_c, n_c, n_g))
    for a, i in enumerate(game.choice_set):
        for b, j in enumerate(game.choice_set):
            probs[a, b] = outcome_probs(game, i, j)
    probs.setflags(write=False)
    return ProbabilityTable(game.name, game.choice_set, game.guess_set, probs)


def as_mixture(game: GameDefinition, mixture=None) -> np.ndarray:
    """Normalize a mixture given as None (uniform), a mapping choice->weight, or a vector."""
    n = len(game.choice_set)
    if mixture is None:
        return np.full(n, 1.0 / n)
    if isinstance(mixture, Mapping):
        w = np.zeros(n)
        for c, v in mixture.items():
            w[game.choice_index(c)] = v
    else:
        w = np.asarray(mixture, dtype=float)
        if w.shape != (n,):
            raise ValueError(f"mixture needs {n} weights, got shape {w.shape}")
    if np.any(w < -ATOL) or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError(f"mixture must be a probability vector, got {w}")
    return np.clip(w, 0.0, None)


def averaged_probs(game: GameDefinition, mixture=None, table: ProbabilityTable | None = None) -> AveragedTable:
    """Average Alice's outcome probabilities over Bob's choice mixture (default uniform)."""
    w = as_mixture(game, mixture)
    table = table or probability_table(game)
    avg = np.einsum("abn,b->an", table.probs, w)
    avg.setflags(write=False)
    return AveragedTable(game.name, game.choice_set, game.guess_set, w, avg)


def restriction_check(game: GameDefinition, gA, gB) -> bool:
    """True when the two guesses are at least ``d0`` apart."""
    return game.distance(gA, gB) >= game.d0 - ATOL


__all__ = [
    "AveragedTable",
    "GameDefinition",
    "ProbabilityTable",
    "as_mixture",
    "averaged_probs",
    "boson_game",
    "classical_game",
    "classical_round",
    "hardcore_game",
    "joint_state",
    "make_game",
    "outcome_probs",
    "probability_table",
    "qubit_game",
    "restriction_check",
    "two_qubit_game",
]
