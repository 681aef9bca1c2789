"""Independent reference computations used by the tests.

Nothing here imports the package. Gates are written out entry by entry and
probabilities are expanded symbolically, so agreement with the library is a
real cross-check rather than a re-run of the same code.
"""

from __future__ import annotations

import numpy as np
import sympy as sp

LABELS_DISPLAY = "00 22 12 30 13 31 01 23 02 20 10 32 11 33 03 21".split()
LABELS_LEX = [f"{i}{j}" for i in range(4) for j in range(4)]

# Overlap table at theta = 0 in display order, entries in {0, 1, -1}.
G0_TABLE = """
 1  1  1  1  0  0  0  0  0  0  0  0  0  0  0  0
 1  1  1  1  0  0  0  0  0  0  0  0  0  0  0  0
 1  1  1  1  0  0  0  0  0  0  0  0  0  0  0  0
 1  1  1  1  0  0  0  0  0  0  0  0  0  0  0  0
 0  0  0  0  1  1 -1 -1  0  0  0  0  0  0  0  0
 0  0  0  0  1  1 -1 -1  0  0  0  0  0  0  0  0
 0  0  0  0 -1 -1  1  1  0  0  0  0  0  0  0  0
 0  0  0  0 -1 -1  1  1  0  0  0  0  0  0  0  0
 0  0  0  0  0  0  0  0  1  1  1  1  0  0  0  0
 0  0  0  0  0  0  0  0  1  1  1  1  0  0  0  0
 0  0  0  0  0  0  0  0  1  1  1  1  0  0  0  0
 0  0  0  0  0  0  0  0  1  1  1  1  0  0  0  0
 0  0  0  0  0  0  0  0  0  0  0  0  1  1 -1 -1
 0  0  0  0  0  0  0  0  0  0  0  0  1  1 -1 -1
 0  0  0  0  0  0  0  0  0  0  0  0 -1 -1  1  1
 0  0  0  0  0  0  0  0  0  0  0  0 -1 -1  1  1
"""

# Symbolic overlap table for general theta in display order; c = cos(theta/2), s = i sin(theta/2).
G_SYMBOLIC = """
 1  1  c  c  s  s  0  0  0  0  0  0  0  0  0  0
 1  1  c  c  s  s  0  0  0  0  0  0  0  0  0  0
 c  c  1  1  0  0  s  s  0  0  0  0  0  0  0  0
 c  c  1  1  0  0  s  s  0  0  0  0  0  0  0  0
-s -s  0  0  1  1 -c -c  0  0  0  0  0  0  0  0
-s -s  0  0  1  1 -c -c  0  0  0  0  0  0  0  0
 0  0 -s -s -c -c  1  1  0  0  0  0  0  0  0  0
 0  0 -s -s -c -c  1  1  0  0  0  0  0  0  0  0
 0  0  0  0  0  0  0  0  1  1  c  c  s  s  0  0
 0  0  0  0  0  0  0  0  1  1  c  c  s  s  0  0
 0  0  0  0  0  0  0  0  c  c  1  1  0  0  s  s
 0  0  0  0  0  0  0  0  c  c  1  1  0  0  s  s
 0  0  0  0  0  0  0  0 -s -s  0  0  1  1 -c -c
 0  0  0  0  0  0  0  0 -s -s  0  0  1  1 -c -c
 0  0  0  0  0  0  0  0  0  0 -s -s -c -c  1  1
 0  0  0  0  0  0  0  0  0  0 -s -s -c -c  1  1
"""


def g0_display() -> np.ndarray:
    return np.array([[float(x) for x in line.split()] for line in G0_TABLE.strip().splitlines()])


def g_symbolic_display(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), 1j * np.sin(theta / 2)
    value = {"0": 0, "1": 1, "c": c, "-c": -c, "s": s, "-s": -s}
    return np.array([[value[t] for t in line.split()] for line in G_SYMBOLIC.strip().splitlines()], dtype=complex)


def display_to_lex(m: np.ndarray) -> np.ndarray:
    """Reorder a display-order matrix into lexicographic label order."""
    idx = [LABELS_DISPLAY.index(lab) for lab in LABELS_LEX]
    return m[np.ix_(idx, idx)]


# --- two-qubit brute force -------------------------------------------------

_ID = np.array([[1, 0], [0, 1]], dtype=complex)
_NOT = np.array([[0, 1], [1, 0]], dtype=complex)
_HAD = np.array([[1, 1], [1, -1]], dtype=complex) * (1 / np.sqrt(2))
_P0 = np.array([[1, 0], [0, 0]], dtype=complex)
_P1 = np.array([[0, 0], [0, 1]], dtype=complex)


def oracle_target(theta: float) -> np.ndarray:
    """X exp(-i theta X/2) written out: [[-i s, c], [c, -i s]]."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[-1j * s, c], [c, -1j * s]], dtype=complex)


def oracle_controlled(u: np.ndarray) -> np.ndarray:
    # qubit 1 is the left tensor factor (target), qubit 0 the right one (control)
    return np.kron(_ID, _P0) + np.kron(u, _P1)


def oracle_bell_ops(theta: float) -> list[np.ndarray]:
    cu = oracle_controlled(oracle_target(theta))
    ops = []
    for i1 in (0, 1):
        for i0 in (0, 1):
            flip = np.kron(_NOT if i1 else _ID, _NOT if i0 else _ID)
            ops.append(cu @ np.kron(_ID, _HAD) @ flip)
    return ops


def oracle_metric(theta: float) -> np.ndarray:
    """Brute-force 16x16 overlaps in lexicographic order, one explicit 4-vector per label."""
    ops = oracle_bell_ops(theta)
    vac = np.array([1, 0, 0, 0], dtype=complex)
    vecs = {}
    for i in range(4):
        for j in range(4):
            v = vac
            v = ops[j] @ v
            v = ops[i] @ v
            vecs[f"{i}{j}"] = v
    out = np.zeros((16, 16), dtype=complex)
    for r, p in enumerate(LABELS_LEX):
        for k, q in enumerate(LABELS_LEX):
            out[r, k] = sum(np.conj(a) * b for a, b in zip(vecs[p], vecs[q]))
    return out


def oracle_reduced_purity(theta: float) -> float:
    """Purity of qubit 1 of the first rotated Bell state, via its 2x2 coefficient matrix."""
    v = oracle_bell_ops(theta)[0] @ np.array([1, 0, 0, 0], dtype=complex)
    m = v.reshape(2, 2)  # rows: i1, columns: i0
    rho = m @ m.conj().T
    return float(np.real(np.trace(rho @ rho)))


# --- single-mode games, exact ---------------------------------------------

_t = sp.Symbol("theta", real=True)


def _boson_ops():
    bd = sp.zeros(3, 3)
    bd[1, 0] = 1
    bd[2, 1] = sp.sqrt(2)
    eye = sp.eye(3)
    return {1: eye, 2: (eye + bd) / sp.sqrt(2), 3: (eye - bd) / sp.sqrt(2), 4: bd}


def _hardcore_ops(theta):
    bd = sp.Matrix([[0, 0], [1, 0]])
    c, s = sp.cos(theta), sp.sin(theta)
    eye = sp.eye(2)
    return {1: eye, 2: c * eye + s * bd, 3: c * eye - s * bd}


def _qubit_ops(theta):
    c, s = sp.cos(theta / 2), sp.sin(theta / 2)
    r = sp.Matrix([[c, -s], [s, c]])
    rm = sp.Matrix([[c, s], [-s, c]])
    return {1: sp.eye(2), 2: r, 3: rm}


def _probs(ops, i, j):
    dim = ops[1].shape[0]
    vac = sp.zeros(dim, 1)
    vac[0] = 1
    v = ops[i] * (ops[j] * vac)
    sq = [sp.nsimplify(sp.simplify(abs(x) ** 2)) if x.is_number else sp.simplify(x * sp.conjugate(x)) for x in v]
    total = sp.simplify(sum(sq))
    return [sp.simplify(x / total) for x in sq]


def boson_table_exact() -> dict:
    ops = _boson_ops()
    return {(i, j): _probs(ops, i, j) for i in ops for j in ops}


def hardcore_table_exact(theta=sp.pi / 4) -> dict:
    ops = _hardcore_ops(theta)
    return {(i, j): _probs(ops, i, j) for i in ops for j in ops}


def qubit_table_exact(theta) -> dict:
    ops = _qubit_ops(theta)
    return {(i, j): _probs(ops, i, j) for i in ops for j in ops}


def averaged_exact(table: dict, bob=None) -> dict:
    alice = sorted({i for i, _ in table})
    bob = bob or alice
    out = {}
    for i in alice:
        cols = [table[(i, j)] for j in bob]
        out[i] = [sp.simplify(sum(c[n] for c in cols) / len(bob)) for n in range(len(cols[0]))]
    return out


def to_float(values) -> np.ndarray:
    return np.array([float(sp.N(v, 30)) for v in values])
