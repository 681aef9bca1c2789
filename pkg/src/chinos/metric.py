"""Two-qubit game engine: metric matrices, block structure, payoffs and winning probabilities.

Guess states are labelled by ordered pairs ``(i1, i2)`` of rotated-Bell
indices and stand for ``O_i1 O_i2 |00>``. Matrices are stored in lexicographic
pair order; the Set-grouped order used for display is a permutation applied
on output.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DecompositionMismatch, ParseError, ShapeError
from .modes import bell_family
from .qstate import ATOL, StateVector, apply, purity, reduced_state

LEX_LABELS = tuple(f"{i}{j}" for i in range(4) for j in range(4))
TABLE_ORDER = ("00", "22", "12", "30", "13", "31", "01", "23", "02", "20", "10", "32", "11", "33", "03", "21")
TABLE_PERM = np.array([LEX_LABELS.index(p) for p in TABLE_ORDER])

EXPECTED_SETS = (
    ("00", "22", "12", "30"),
    ("13", "31", "01", "23"),
    ("02", "20", "10", "32"),
    ("11", "33", "03", "21"),
)
EXPECTED_PAIRS = tuple(s[k:k + 2] for s in EXPECTED_SETS for k in (0, 2))

THEORY_THRESHOLD = 1e-12
EXPERIMENT_THRESHOLD = 0.25
PAIR_PROBE_THETA = np.pi / 4


class Order(enum.Enum):
    BOB_FIRST = "bob_first"
    ALICE_FIRST = "alice_first"

    @classmethod
    def parse(cls, value) -> "Order":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("-", "_")
        aliases = {"bobfirst": "bob_first", "alicefirst": "alice_first"}
        return cls(aliases.get(key, key))


def pair_label(p) -> str:
    """Normalize ``(i1, i2)``, ``"i1i2"`` or a lexicographic index to a two-digit label."""
    if isinstance(p, str):
        label = p.replace(",", "").replace(" ", "")
    elif isinstance(p, (int, np.integer)):
        if not 0 <= p < 16:
            raise ValueError(f"pair index out of range: {p}")
        label = LEX_LABELS[p]
    else:
        i1, i2 = p
        label = f"{int(i1)}{int(i2)}"
    if label not in LEX_LABELS:
        raise ValueError(f"invalid pair label {p!r}")
    return label


def pair_index(p) -> int:
    return LEX_LABELS.index(pair_label(p))


def guess_states(theta: float, convention: str = "xr") -> dict[str, StateVector]:
    """All sixteen states ``O_i1 O_i2 |00>``, keyed by label."""
    fam = bell_family(theta, convention)
    vac = StateVector.basis_state("qubit2", 0)
    return {f"{i}{j}": apply(fam[i], apply(fam[j], vac)) for i in range(4) for j in range(4)}


@dataclass(frozen=True)
class MetricMatrix:
    """Overlaps between guess states (rows) and joint states (columns).

    ``entries[p, (a0, b0)]`` pairs the guess state of row ``p`` with the joint
    state built from Alice's ``a0`` and Bob's ``b0``. Bob-first joint states
    are ``O_a0 O_b0 |00>``; Alice-first ones are ``O_b0 O_a0 |00>``.
    """

    theta: float
    order: Order
    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex)
        if e.shape != (16, 16):
            raise ShapeError(f"metric matrix must be 16x16, got {e.shape}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)
        object.__setattr__(self, "order", Order.parse(self.order))

    def __getitem__(self, key) -> complex:
        p, q = key
        return complex(self.entries[pair_index(p), pair_index(q)])

    def in_table_order(self) -> np.ndarray:
        return self.entries[np.ix_(TABLE_PERM, TABLE_PERM)]

    def moduli(self) -> np.ndarray:
        return np.abs(self.entries)

    def guess_overlaps(self) -> np.ndarray:
        """Gram matrix of the guess states, ``<g_p|g_q>``, whatever the order."""
        if self.order is Order.BOB_FIRST:
            return self.entries
        return self.entries[:, _SWAP_PERM]

    def to_csv(self, table_order: bool = True) -> str:
        labels = TABLE_ORDER if table_order else LEX_LABELS
        mat = self.in_table_order() if table_order else self.entries
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["G"] + [f"{lab}.{part}" for lab in labels for part in ("re", "im")])
        for lab, row in zip(labels, mat):
            cells = []
            for z in row:
                cells += [_fmt(z.real), _fmt(z.imag)]
            w.writerow([lab] + cells)
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "theta": self.theta,
                "order": self.order.value,
                "labels": list(TABLE_ORDER),
                "entries": [[[_num(z.real), _num(z.imag)] for z in row] for row in self.in_table_order()],
            }
        )

    @classmethod
    def from_csv(cls, text: str, theta: float = float("nan"), order=Order.BOB_FIRST) -> "MetricMatrix":
        return cls(theta, order, parse_metric_csv(text))


def _num(x: float) -> float:
    # Drop signed zeros and rounding dust so serialized output is stable.
    x = float(x)
    return 0.0 if abs(x) < 1e-15 else float(f"{x:.12g}")


def _fmt(x: float) -> str:
    return f"{_num(x):.12g}"


_SWAP_PERM = np.array([LEX_LABELS.index(lab[::-1]) for lab in LEX_LABELS])


def parse_metric_csv(text: str) -> np.ndarray:
    """Read the two-columns-per-entry CSV written by :meth:`MetricMatrix.to_csv`."""
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]
    if len(rows) != 17:
        raise ShapeError(f"expected a header and 16 rows, got {len(rows)} lines")
    header = rows[0]
    if len(header) != 33:
        raise ShapeError(f"expected 33 header cells, got {len(header)}")
    col_labels = [header[1 + 2 * k].split(".")[0] for k in range(16)]
    out = np.zeros((16, 16), dtype=complex)
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != 33:
            raise ShapeError(f"row {r} has {len(row)} cells, expected 33")
        try:
            pi = pair_index(row[0])
        except ValueError as exc:
            raise ParseError(f"bad row label {row[0]!r}", row=r, col=1) from exc
        for k in range(16):
            try:
                re_, im_ = float(row[1 + 2 * k]), float(row[2 + 2 * k])
            except ValueError as exc:
                raise ParseError("non-numeric cell", row=r, col=2 + 2 * k) from exc
            out[pi, pair_index(col_labels[k])] = complex(re_, im_)
    return out


def metric_matrix(theta: float, order=Order.BOB_FIRST, convention: str = "xr") -> MetricMatrix:
    """Overlaps ``<00| O_j1^dag O_i1^dag O_i2 O_j2 |00>`` for every guess row and joint column."""
    order = Order.parse(order)
    states = guess_states(theta, convention)
    amps = np.array([states[lab].amps for lab in LEX_LABELS])
    gram = amps.conj() @ amps.T
    entries = gram if order is Order.BOB_FIRST else gram[:, _SWAP_PERM]
    return MetricMatrix(float(theta), order, entries)


@dataclass(frozen=True)
class BlockDecomposition:
    sets: tuple
    pairs: tuple

    def set_of(self, p) -> int:
        lab = pair_label(p)
        return next(k for k, s in enumerate(self.sets) if lab in s)

    def pair_of(self, p) -> int:
        lab = pair_label(p)
        return next(k for k, s in enumerate(self.pairs) if lab in s)


def _components(adj: np.ndarray) -> list[frozenset]:
    seen, comps = set(), []
    for start in range(16):
        if start in seen:
            continue
        stack, comp = [start], set()
        while stack:
            v = stack.pop()
            if v in comp:
                continue
            comp.add(v)
            stack.extend(np.flatnonzero(adj[v]).tolist())
        seen |= comp
        comps.append(frozenset(LEX_LABELS[v] for v in comp))
    return comps


def _match(found: list[frozenset], expected: tuple, what: str) -> tuple:
    want = [frozenset(g) for g in expected]
    if sorted(map(sorted, found)) != sorted(map(sorted, want)):
        raise DecompositionMismatch(f"{what} differ from the expected partition: {sorted(map(sorted, found))}")
    return expected


def block_decomposition(G: MetricMatrix, atol: float = 1e-9) -> BlockDecomposition:
    """Sets and pairs of guess states.

    Sets are the connected components of the nonzero-overlap graph at
    theta = 0. Pairs are the classes of unit-modulus overlap; they only
    separate from the sets away from theta = 0, so when ``G`` sits at
    theta = 0 a generic probe angle is used for the pairs.

    Raises:
        DecompositionMismatch: if either partition differs from the expected one.
    """
    g0 = G if abs(G.theta) < 1e-15 else metric_matrix(0.0)
    mod0 = np.abs(g0.guess_overlaps())
    sets = _match(_components(mod0 > atol), EXPECTED_SETS, "sets")
    gp = metric_matrix(PAIR_PROBE_THETA) if abs(G.theta) < 1e-6 or abs(G.theta - np.pi) < 1e-6 else G
    modp = np.abs(gp.guess_overlaps())
    pairs = _match(_components(np.abs(modp - 1.0) < atol), EXPECTED_PAIRS, "pairs")
    return BlockDecomposition(sets, pairs)


def orthogonal_guesses(G: MetricMatrix, alice_guess, threshold: float = THEORY_THRESHOLD) -> list[str]:
    """Guesses Bob may make after Alice's, listed in display order."""
    row = np.abs(G.guess_overlaps()[pair_index(alice_guess)])
    return [lab for lab in TABLE_ORDER if row[pair_index(lab)] <= threshold]


def payoffs(G: MetricMatrix, guess, a0: int, b0: int) -> float:
    """Squared modulus of the overlap between ``guess`` and the joint state of ``(a0, b0)``."""
    return float(abs(G.entries[pair_index(guess), 4 * a0 + b0]) ** 2)


@dataclass(frozen=True)
class PayoffReport:
    """Averaged payoffs and normalized winning probabilities of a two-qubit game.

    ``f_table[p, 4*a0 + b0]`` is the payoff of guess ``p`` for the joint
    choice ``(a0, b0)``; both players are scored from the same table.
    """

    theta: float
    order: Order
    f_table: np.ndarray
    mean_f_a: float
    mean_f_b: float
    P_A: float
    P_B: float

    def to_dict(self) -> dict:
        return {"theta": self.theta, "order": self.order.value, "mean_f_A": self.mean_f_a,
                "mean_f_B": self.mean_f_b, "P_A": self.P_A, "P_B": self.P_B}


def _admissible(gram_mod: np.ndarray, g: int, threshold: float) -> np.ndarray:
    return np.flatnonzero(gram_mod[g] <= threshold)


def _bob_first_means(G: MetricMatrix, b0s: Sequence[int], alice_guesses, threshold: float) -> tuple[float, float]:
    f = np.abs(G.entries) ** 2
    gram_mod = np.abs(G.guess_overlaps())
    guesses = [pair_index(p) for p in alice_guesses] if alice_guesses is not None else range(16)
    fa_tot, fb_tot = 0.0, 0.0
    for b0 in b0s:
        cols = [4 * a0 + b0 for a0 in range(4)]
        value = f[:, cols].mean(axis=1)
        fa = [value[g] for g in guesses]
        # Bob knows b0 and sees Alice's guess; he picks the admissible guess with the best mean over a0.
        fb = [value[_admissible(gram_mod, g, threshold)].max() for g in guesses]
        fa_tot += np.mean(fa)
        fb_tot += np.mean(fb)
    return fa_tot / len(b0s), fb_tot / len(b0s)


def _alice_first_means(G: MetricMatrix, threshold: float, tol: float = 1e-12) -> tuple[float, float]:
    f = np.abs(G.entries) ** 2  # columns (a0, b0) already in Alice-first form
    gram_mod = np.abs(G.guess_overlaps())
    # Alice knows a0 and plays uniformly over the guesses best against a uniform b0.
    policy = np.zeros((4, 16))
    for a0 in range(4):
        value = f[:, [4 * a0 + b0 for b0 in range(4)]].mean(axis=1)
        best = np.flatnonzero(value >= value.max() - tol)
        policy[a0, best] = 1.0 / len(best)
    fa = float(np.mean([policy[a0] @ f[:, [4 * a0 + b0 for b0 in range(4)]].mean(axis=1) for a0 in range(4)]))
    fb = 0.0
    for b0 in range(4):
        for g in range(16):
            post = policy[:, g]  # prior on a0 is uniform
            if post.sum() <= 0:
                continue
            weights = post / post.sum()
            adm = _admissible(gram_mod, g, threshold)
            expected = np.array([weights @ f[q, [4 * a0 + b0 for a0 in range(4)]] for q in adm])
            q = adm[int(np.argmax(expected >= expected.max() - tol))]
            # Realized payoff, weighted by how often this (a0, g) occurs.
            fb += sum(0.25 * policy[a0, g] * f[q, 4 * a0 + b0] for a0 in range(4)) / 4
    return fa, fb


def two_qubit_probabilities(theta: float, order=Order.BOB_FIRST, b0: int | None = 0, alice_guesses=None,
                            threshold: float = THEORY_THRESHOLD, convention: str = "xr") -> PayoffReport:
    """Normalized winning probabilities P_A = <f_A> / (<f_A> + <f_B>).

    Bob-first: Alice guesses uniformly over ``alice_guesses`` (default all 16)
    without knowing either operator, while Bob fixes ``b0`` (``None`` averages
    over a private uniform b0) and answers with the admissible guess that
    maximizes his payoff averaged over a0.

    Alice-first: Alice knows a0 and picks uniformly among her best guesses;
    Bob infers a0 from her guess, knows b0, and answers optimally.
    """
    order = Order.parse(order)
    G = metric_matrix(theta, order, convention)
    if order is Order.BOB_FIRST:
        b0s = range(4) if b0 is None else [b0]
        fa, fb = _bob_first_means(G, b0s, alice_guesses, threshold)
    else:
        fa, fb = _alice_first_means(G, threshold)
    total = fa + fb
    p_a = fa / total
    return PayoffReport(float(theta), order, np.abs(G.entries) ** 2, fa, fb, p_a, 1.0 - p_a)


def rotated_bell_reduced_state(theta: float, index: int = 0, convention: str = "xr") -> np.ndarray:
    """Reduced density matrix of qubit 1 for the rotated Bell state ``O_index |00>``."""
    fam = bell_family(theta, convention)
    return reduced_state(apply(fam[index], StateVector.basis_state("qubit2", 0)))


def purity_relation(theta: float, convention: str = "xr") -> tuple[float, float]:
    """(P_B / P_A, 3 - 2 tr(rho^2)) with rho the reduced state of a rotated Bell state."""
    rep = two_qubit_probabilities(theta, convention=convention)
    rhs = 3.0 - 2.0 * purity(rotated_bell_reduced_state(theta, 0, convention))
    return rep.P_B / rep.P_A, rhs


def two_qubit_equilibrium(theta: float, order="bob_first"):
    """Alice's best response over unions of Sets against a best-responding Bob.

    Bob's b0 is private and uniform; Bob always answers Alice's revealed guess
    optimally, so only Alice has a move to make. Candidate guess strategies
    are uniform over every nonempty union of the four Sets.
    """
    import itertools

    from .strategy import EquilibriumReport, IterationRecord, MixedStrategy

    order = Order.parse(order)
    bob = MixedStrategy.uniform(range(4), guess_policy=None)
    bob = MixedStrategy(bob.choices, bob.weights, None, "uniform b0, best response to g_A")

    def run(guesses):
        if order is Order.ALICE_FIRST:
            return two_qubit_probabilities(theta, order).P_A
        return two_qubit_probabilities(theta, order, b0=None, alice_guesses=guesses).P_A

    start = MixedStrategy.uniform(LEX_LABELS)
    p_a = run(None)
    iters = [IterationRecord(start, bob, p_a, 1.0 - p_a, "start")]
    if abs(p_a - 0.5) <= 1e-12:
        return EquilibriumReport("two_qubit", float(theta), iters, True, "symmetric")
    if order is Order.ALICE_FIRST:
        return EquilibriumReport("two_qubit", float(theta), iters, True, "A" if p_a > 0.5 else "B")
    best, best_val = None, p_a
    for k in range(1, 5):
        for combo in itertools.combinations(EXPECTED_SETS, k):
            guesses = [lab for s in combo for lab in s]
            val = run(guesses)
            if val > best_val + 1e-12:
                best, best_val = MixedStrategy.uniform(LEX_LABELS, guesses), val
    if best is None:
        # Bob already best-responds, so a losing Alice with no improving union is stuck.
        return EquilibriumReport("two_qubit", float(theta), iters, True, "A" if p_a > 0.5 else "B")
    iters.append(IterationRecord(best, bob, best_val, 1.0 - best_val, "A"))
    winner = "symmetric" if abs(best_val - 0.5) <= 1e-12 else ("A" if best_val > 0.5 else "B")
    return EquilibriumReport("two_qubit", float(theta), iters, True, winner)


__all__ = [
    "BlockDecomposition",
    "EXPECTED_PAIRS",
    "EXPECTED_SETS",
    "LEX_LABELS",
    "MetricMatrix",
    "Order",
    "TABLE_ORDER",
    "PayoffReport",
    "block_decomposition",
    "guess_states",
    "metric_matrix",
    "orthogonal_guesses",
    "pair_index",
    "pair_label",
    "parse_metric_csv",
    "payoffs",
    "purity_relation",
    "rotated_bell_reduced_state",
    "two_qubit_equilibrium",
    "two_qubit_probabilities",
]
