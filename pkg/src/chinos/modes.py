"""Operator families the players draw from in each quantum game variant."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateAngle
from .qstate import Operator, identity

SQRT2 = np.sqrt(2.0)

#: Single-qubit gates used by the Bell circuits.
X = np.array([[0, 1], [1, 0]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2
I2 = np.eye(2, dtype=complex)

#: CNOT with qubit 0 (rightmost) as control: |i1, i0> -> |i1 xor i0, i0>.
CNOT = np.array(
    [
        [1, 0, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
    ],
    dtype=complex,
)

CU_CONVENTIONS = ("xr", "literal")


class Mode(enum.Enum):
    CLASSICAL = "classical"
    BOSON = "boson"
    HARDCORE = "hardcore"
    QUBIT = "qubit"
    TWO_QUBIT = "two_qubit"


@dataclass(frozen=True)
class ModeKind:
    """Mode of the shared quantum object plus its angle (None when unused)."""

    mode: Mode
    theta: float | None = None

    def __str__(self) -> str:
        if self.theta is None:
            return self.mode.value
        return f"{self.mode.value}(theta={self.theta:.12g})"


@dataclass(frozen=True)
class OperatorFamily:
    """Indexed operators with their display labels.

    Index keys follow the naming of the game: 1..4 (or 1..3) for the
    single-mode games, 0..3 for the two-qubit Bell family.
    """

    kind: ModeKind
    ops: dict[int, Operator]
    labels: dict[int, str] = field(default_factory=dict)

    def __getitem__(self, index: int) -> Operator:
        try:
            return self.ops[index]
        except KeyError:
            raise IndexError(f"{self.kind.mode.value} family has no operator {index}; valid: {self.indices}") from None

    def __len__(self) -> int:
        return len(self.ops)

    @property
    def indices(self) -> list[int]:
        return sorted(self.ops)

    @property
    def dim(self) -> int:
        return next(iter(self.ops.values())).dim


def creation_fock3() -> np.ndarray:
    """b^dag on occupations 0..2; the truncation b^dag|2> = 0 is never reached in play."""
    bd = np.zeros((3, 3), dtype=complex)
    bd[1, 0] = 1.0
    bd[2, 1] = SQRT2
    return bd


def creation_hardcore() -> np.ndarray:
    """Hard-core creation operator, nilpotent of order two."""
    return np.array([[0, 0], [1, 0]], dtype=complex)


def boson_family() -> OperatorFamily:
    bd = creation_fock3()
    eye = np.eye(3, dtype=complex)
    mats = {
        1: (eye, "I"),
        2: ((eye + bd) / SQRT2, "(I+b^dag)/sqrt2"),
        3: ((eye - bd) / SQRT2, "(I-b^dag)/sqrt2"),
        4: (bd, "b^dag"),
    }
    ops = {k: Operator(m, f"O{k}") for k, (m, _) in mats.items()}
    labels = {k: f"O{k}={name}" for k, (_, name) in mats.items()}
    return OperatorFamily(ModeKind(Mode.BOSON), ops, labels)


def check_hardcore_angle(theta: float) -> float:
    theta = float(theta)
    if not (0.0 < theta < np.pi / 2):
        raise DegenerateAngle(f"hard-core angle must lie in (0, pi/2), got {theta!r}")
    return theta


def hardcore_family(theta: float) -> OperatorFamily:
    """O1 = I, O2 = cI + s b^dag, O3 = cI - s b^dag with c = cos(theta), s = sin(theta).

    Raises:
        DegenerateAngle: at or outside the endpoints, where O2 = +-O3.
    """
    theta = check_hardcore_angle(theta)
    c, s = np.cos(theta), np.sin(theta)
    bd = creation_hardcore()
    ops = {
        1: Operator(I2, "O1"),
        2: Operator(c * I2 + s * bd, "O2"),
        3: Operator(c * I2 - s * bd, "O3"),
    }
    labels = {1: "O1=I", 2: "O2=cI+s b^dag", 3: "O3=cI-s b^dag"}
    return OperatorFamily(ModeKind(Mode.HARDCORE, theta), ops, labels)


def ry(theta: float) -> np.ndarray:
    """Rotation exp(-i theta sigma_y / 2)."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def qubit_family(theta: float) -> OperatorFamily:
    """Identity and the two opposite y-rotations R(theta), R(-theta)."""
    theta = float(theta)
    ops = {
        1: Operator(I2, "O1", unitary_hint=True),
        2: Operator(ry(theta), "O2", unitary_hint=True),
        3: Operator(ry(-theta), "O3", unitary_hint=True),
    }
    labels = {1: "O1=I", 2: "O2=R(theta)", 3: "O3=R(-theta)"}
    return OperatorFamily(ModeKind(Mode.QUBIT, theta), ops, labels)


def cu_target(theta: float, convention: str = "xr") -> np.ndarray:
    """Single-qubit gate applied to qubit 1 when the control qubit 0 is set.

    ``"literal"`` is the bare x-rotation exp(-i theta X / 2), which reduces to
    the identity at theta = 0. ``"xr"`` (the default) is X exp(-i theta X / 2):
    it equals X at theta = 0, so the controlled gate is the CNOT of the Bell
    circuit there, and it is proportional to the identity at theta = pi, where
    the states become product states.
    """
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    rot = c * I2 - 1j * s * X
    if convention == "literal":
        return rot
    if convention == "xr":
        return X @ rot
    raise ValueError(f"unknown CU convention {convention!r}; choose from {CU_CONVENTIONS}")


def controlled(u: np.ndarray) -> np.ndarray:
    """Controlled gate with qubit 0 as control: |i1, i0> -> (u^i0 |i1>) |i0>."""
    out = np.zeros((4, 4), dtype=complex)
    # i0 = 0 block: identity on qubit 1
    out[0, 0] = out[2, 2] = 1.0
    # i0 = 1 block: basis indices 1 (i1=0) and 3 (i1=1)
    idx = [1, 3]
    for a in range(2):
        for b in range(2):
            out[idx[a], idx[b]] = u[a, b]
    return out


def gate_cu(theta: float, convention: str = "xr") -> Operator:
    return Operator(controlled(cu_target(theta, convention)), f"CU({theta:.6g})", unitary_hint=True)


def _bell_layer(i1: int, i0: int) -> np.ndarray:
    flips = np.kron(np.linalg.matrix_power(X, i1), np.linalg.matrix_power(X, i0))
    return np.kron(I2, H) @ flips


def bell_family(theta: float = 0.0, convention: str = "xr") -> OperatorFamily:
    """Rotated Bell operators RBell(i1, i0) = CU (I x H)(X^i1 x X^i0), indexed 2*i1 + i0.

    With the default convention the family at theta = 0 is the plain Bell family.
    """
    theta = float(theta)
    cu = controlled(cu_target(theta, convention))
    ops, labels = {}, {}
    for i1 in (0, 1):
        for i0 in (0, 1):
            k = 2 * i1 + i0
            ops[k] = Operator(cu @ _bell_layer(i1, i0), f"O{k}", unitary_hint=True)
            labels[k] = f"O{k}=RBell({i1},{i0})"
    return OperatorFamily(ModeKind(Mode.TWO_QUBIT, theta), ops, labels)


def cnot_bell_family() -> OperatorFamily:
    """Bell operators built with an explicit CNOT, for cross-checking ``bell_family(0)``."""
    ops, labels = {}, {}
    for i1 in (0, 1):
        for i0 in (0, 1):
            k = 2 * i1 + i0
            ops[k] = Operator(CNOT @ _bell_layer(i1, i0), f"B{k}", unitary_hint=True)
            labels[k] = f"O{k}=Bell({i1},{i0})"
    return OperatorFamily(ModeKind(Mode.TWO_QUBIT, 0.0), ops, labels)


def family_for(kind: ModeKind) -> OperatorFamily:
    if kind.mode is Mode.BOSON:
        return boson_family()
    if kind.mode is Mode.HARDCORE:
        return hardcore_family(kind.theta)
    if kind.mode is Mode.QUBIT:
        return qubit_family(kind.theta)
    if kind.mode is Mode.TWO_QUBIT:
        return bell_family(kind.theta)
    raise ValueError(f"no operator family for mode {kind.mode.value}")


__all__ = [
    "CNOT",
    "H",
    "X",
    "Mode",
    "ModeKind",
    "OperatorFamily",
    "bell_family",
    "boson_family",
    "cnot_bell_family",
    "controlled",
    "cu_target",
    "family_for",
    "gate_cu",
    "hardcore_family",
    "identity",
    "qubit_family",
    "ry",
]
