"""Finite-shot estimation of metric entries, experimental tables and error reports.

Each entry |G|^2 is the population of |00> after the four operator layers
O_j2, O_i2, O_i1^dag, O_j1^dag act on |00>. The circuit is simulated as a
density matrix so a depolarizing channel can follow every layer, then the
number of |00> outcomes is drawn from a binomial distribution.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from .errors import ParseError, ShapeError
from .metric import EXPECTED_SETS, LEX_LABELS, TABLE_ORDER, MetricMatrix, metric_matrix, pair_index, pair_label
from .modes import bell_family

DEFAULT_SHOTS = 8192
HEADLINE_ENTRY = ("22", "30")
HEADLINE_VALUE = 0.964
EXPERIMENT_SLACK = 0.05
_SET_OF = {lab: k for k, s in enumerate(EXPECTED_SETS) for lab in s}


@dataclass(frozen=True)
class NoiseModel:
    """``kind`` is ``"none"`` or ``"depolarizing"`` with strength ``p`` per layer."""

    kind: str = "none"
    p: float = 0.0

    def __post_init__(self):
        if self.kind not in ("none", "depolarizing"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"noise strength must lie in [0, 1], got {self.p}")
        if self.kind == "none" and self.p != 0.0:
            raise ValueError("noise kind 'none' takes no strength")

    @classmethod
    def depolarizing(cls, p: float) -> "NoiseModel":
        return cls("depolarizing", float(p))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        if self.kind == "none" or self.p == 0.0:
            return rho
        d = rho.shape[0]
        return (1.0 - self.p) * rho + self.p * np.trace(rho) * np.eye(d) / d


@dataclass(frozen=True)
class ShotConfig:
    shots: int = DEFAULT_SHOTS
    seed: int = 0
    noise: NoiseModel = field(default_factory=NoiseModel)

    def __post_init__(self):
        if int(self.shots) != self.shots or self.shots < 1:
            raise ValueError(f"shots must be a positive integer, got {self.shots!r}")


def circuit_layers(row, col, theta: float) -> list[np.ndarray]:
    """Unitaries for the overlap between guess state ``row`` and joint state ``col``, in application order."""
    i1, j1 = (int(c) for c in pair_label(row))
    i2, j2 = (int(c) for c in pair_label(col))
    fam = bell_family(theta)
    return [fam[j2].matrix, fam[i2].matrix, fam[i1].matrix.conj().T, fam[j1].matrix.conj().T]


def simulate_density(row, col, theta: float, noise: NoiseModel | None = None) -> np.ndarray:
    noise = noise or NoiseModel()
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1.0
    for u in circuit_layers(row, col, theta):
        rho = noise.apply(u @ rho @ u.conj().T)
    return rho


def exact_population(row, col, theta: float, noise: NoiseModel | None = None) -> float:
    """Probability of measuring |00>, i.e. the shot-free limit of the estimator."""
    p = float(simulate_density(row, col, theta, noise)[0, 0].real)
    return min(1.0, max(0.0, p))


def entry_seed(seed: int, row, col) -> list[int]:
    """Seed material for one entry, so serial and parallel runs draw identical streams."""
    return [int(seed), 16 * pair_index(row) + pair_index(col)]


def estimate_overlap(row, col, theta: float, config: ShotConfig | None = None) -> tuple[float, float]:
    """Shot estimate of |G_row,col|^2 and its binomial standard error."""
    config = config or ShotConfig()
    p = exact_population(row, col, theta, config.noise)
    rng = np.random.default_rng(entry_seed(config.seed, row, col))
    k = rng.binomial(config.shots, p)
    est = k / config.shots
    return float(est), float(np.sqrt(est * (1.0 - est) / config.shots))


def estimate_matrix(theta: float, config: ShotConfig | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Estimates and standard errors for all 256 entries, lexicographic order."""
    est = np.zeros((16, 16))
    err = np.zeros((16, 16))
    for r, row in enumerate(LEX_LABELS):
        for c, col in enumerate(LEX_LABELS):
            est[r, c], err[r, c] = estimate_overlap(row, col, theta, config)
    return est, err


def calibrate_depolarizing(target: float = HEADLINE_VALUE, entry=HEADLINE_ENTRY, theta: float = 0.0) -> float:
    """Depolarizing strength whose noiseless-shot limit hits ``target`` on ``entry``."""
    row, col = entry
    ideal = exact_population(row, col, theta)
    floor = exact_population(row, col, theta, NoiseModel.depolarizing(1.0))
    if not min(ideal, floor) <= target <= max(ideal, floor):
        raise ValueError(f"target {target} is not reachable on entry {row},{col}")
    return float(brentq(lambda p: exact_population(row, col, theta, NoiseModel.depolarizing(p)) - target,
                        0.0, 1.0, xtol=1e-14))


@dataclass(frozen=True)
class ExperimentalMatrix:
    """Signed real table of measured overlaps, lexicographic order."""

    entries: np.ndarray
    source_label: str = ""

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        if e.shape != (16, 16):
            raise ShapeError(f"experimental matrix must be 16x16, got {e.shape}")
        if np.any(np.abs(e) > 1.0 + EXPERIMENT_SLACK):
            raise ValueError("experimental entries must satisfy |x| <= 1.05")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    def __getitem__(self, key) -> float:
        p, q = key
        return float(self.entries[pair_index(p), pair_index(q)])


def _parse_number(text: str, decimal_comma: bool) -> float:
    t = text.strip().replace("−", "-")
    if decimal_comma:
        t = t.replace(",", ".")
    return float(t)


def parse_experimental(text: str, source_label: str = "") -> ExperimentalMatrix:
    """Parse a labelled 16x16 table.

    The delimiter is ``;`` when the header contains one (decimal commas are
    then accepted) and ``,`` otherwise. Row and column labels may come in any
    order; the result is stored lexicographically.

    Raises:
        ShapeError: on a wrong number of rows or cells.
        ParseError: on a malformed label or number, with 1-based row/column.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ShapeError("empty table")
    delim = ";" if ";" in lines[0] else ","
    decimal_comma = delim == ";"
    header = [h.strip() for h in lines[0].split(delim)]
    if len(header) != 17:
        raise ShapeError(f"header needs 17 cells, got {len(header)}")
    if len(lines) != 17:
        raise ShapeError(f"expected 16 data rows, got {len(lines) - 1}")
    try:
        cols = [pair_index(h) for h in header[1:]]
    except ValueError as exc:
        raise ParseError(f"bad column label: {exc}", row=1) from exc
    if len(set(cols)) != 16:
        raise ParseError("duplicate column labels", row=1)
    out = np.full((16, 16), np.nan)
    seen_rows = set()
    for r, line in enumerate(lines[1:], start=2):
        cells = line.split(delim)
        if len(cells) != 17:
            raise ShapeError(f"row {r} has {len(cells)} cells, expected 17")
        try:
            ri = pair_index(cells[0].strip())
        except ValueError as exc:
            raise ParseError(f"bad row label {cells[0]!r}", row=r, col=1) from exc
        if ri in seen_rows:
            raise ParseError(f"duplicate row label {cells[0]!r}", row=r, col=1)
        seen_rows.add(ri)
        for k, cell in enumerate(cells[1:]):
            try:
                out[ri, cols[k]] = _parse_number(cell, decimal_comma)
            except ValueError as exc:
                raise ParseError(f"cannot parse {cell.strip()!r}", row=r, col=k + 2) from exc
    try:
        return ExperimentalMatrix(out, source_label)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def ingest_experimental(path) -> ExperimentalMatrix:
    path = Path(path)
    return parse_experimental(path.read_text(encoding="utf-8"), source_label=str(path))


def bundled_path(name: str = "ibmq_manila_g.csv"):
    return resources.files("chinos") / "data" / name


def bundled_experimental() -> ExperimentalMatrix:
    """The hardware table shipped with the package."""
    ref = bundled_path()
    return parse_experimental(ref.read_text(encoding="utf-8"), source_label="ibmq_manila_g.csv")


def bundled_theory() -> ExperimentalMatrix:
    """The theta = 0 table transcribed in the same format, for cross-checking."""
    ref = bundled_path("g_theory_theta0.csv")
    return parse_experimental(ref.read_text(encoding="utf-8"), source_label="g_theory_theta0.csv")


@dataclass(frozen=True)
class ErrorReport:
    avg_err_on_units: float
    avg_err_on_zeros: float
    max_err: float
    deltas: np.ndarray
    n_units: int
    n_zeros: int

    def to_dict(self) -> dict:
        ordered = self.deltas[np.ix_(_PERM, _PERM)]
        return {
            "avg_err_on_units": self.avg_err_on_units,
            "avg_err_on_zeros": self.avg_err_on_zeros,
            "max_err": self.max_err,
            "n_units": self.n_units,
            "n_zeros": self.n_zeros,
            "labels": list(TABLE_ORDER),
            "deltas": [[float(f"{x:.12g}") for x in row] for row in ordered],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


_PERM = np.array([LEX_LABELS.index(p) for p in TABLE_ORDER])


def _moduli(m) -> np.ndarray:
    if isinstance(m, MetricMatrix):
        return np.abs(m.entries)
    if isinstance(m, ExperimentalMatrix):
        return np.abs(m.entries)
    return np.abs(np.asarray(m))


def error_report(theory, exp) -> ErrorReport:
    """Mean absolute modulus error over entries whose theoretical modulus is 1, and over those that are 0.

    Entries are classed by whether the theoretical modulus exceeds 1/2.
    """
    th, ex = _moduli(theory), _moduli(exp)
    if th.shape != (16, 16) or ex.shape != (16, 16):
        raise ShapeError("both tables must be 16x16")
    deltas = np.abs(ex - th)
    units = th > 0.5
    return ErrorReport(
        avg_err_on_units=float(deltas[units].mean()) if units.any() else 0.0,
        avg_err_on_zeros=float(deltas[~units].mean()) if (~units).any() else 0.0,
        max_err=float(deltas.max()),
        deltas=deltas,
        n_units=int(units.sum()),
        n_zeros=int((~units).sum()),
    )


def admissible_pairs(exp: ExperimentalMatrix, threshold: float = 0.25) -> list[tuple[str, str]]:
    """Off-diagonal (Alice guess, Bob guess) pairs whose measured modulus is at most ``threshold``."""
    mod = np.abs(exp.entries)
    return [(LEX_LABELS[p], LEX_LABELS[q]) for p in range(16) for q in range(16)
            if p != q and mod[p, q] <= threshold]


def excluded_cross_set_pairs(exp: ExperimentalMatrix, threshold: float = 0.25) -> list[tuple[str, str, float]]:
    """Pairs from different Sets whose measured modulus exceeds ``threshold``."""
    mod = np.abs(exp.entries)
    out = []
    for p in TABLE_ORDER:
        for q in TABLE_ORDER:
            if _SET_OF[p] != _SET_OF[q] and mod[pair_index(p), pair_index(q)] > threshold:
                out.append((p, q, float(mod[pair_index(p), pair_index(q)])))
    return out


__all__ = [
    "DEFAULT_SHOTS",
    "ErrorReport",
    "ExperimentalMatrix",
    "NoiseModel",
    "ShotConfig",
    "admissible_pairs",
    "bundled_experimental",
    "bundled_theory",
    "calibrate_depolarizing",
    "circuit_layers",
    "error_report",
    "estimate_matrix",
    "estimate_overlap",
    "exact_population",
    "excluded_cross_set_pairs",
    "ingest_experimental",
    "parse_experimental",
    "simulate_density",
]
