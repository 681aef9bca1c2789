"""Dense pure states, operators and density matrices on tiny Hilbert spaces.

Basis conventions:
    fock3   occupation states |0>, |1>, |2> of a single bosonic mode
    qubit1  |0>, |1>
    qubit2  |i1 i0> with index 2*i1 + i0 (i0 is the rightmost qubit)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NullMove

ATOL = 1e-12

BASIS_DIMS = {"fock3": 3, "qubit1": 2, "qubit2": 4}
_DIM_TO_BASIS = {2: "qubit1", 3: "fock3", 4: "qubit2"}


def _frozen(a, dtype=complex) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StateVector:
    """Amplitudes over one of the supported bases.

    ``normalized=False`` marks an intermediate (e.g. a bare ``O_i O_j |0>``)
    whose norm has not been fixed yet.
    """

    amps: np.ndarray
    basis: str
    normalized: bool = True

    def __post_init__(self):
        amps = _frozen(self.amps)
        if self.basis not in BASIS_DIMS:
            raise ValueError(f"unknown basis {self.basis!r}")
        if amps.shape != (BASIS_DIMS[self.basis],):
            raise ValueError(f"basis {self.basis} needs {BASIS_DIMS[self.basis]} amplitudes, got shape {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        if self.normalized and abs(np.vdot(amps, amps).real - 1.0) > 1e-12:
            raise ValueError("state flagged normalized but has norm^2 %.16g" % np.vdot(amps, amps).real)
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    @classmethod
    def basis_state(cls, basis: str, index: int) -> "StateVector":
        amps = np.zeros(BASIS_DIMS[basis], dtype=complex)
        amps[index] = 1.0
        return cls(amps, basis)

    @classmethod
    def from_bits(cls, i1: int, i0: int) -> "StateVector":
        return cls.basis_state("qubit2", 2 * i1 + i0)


@dataclass(frozen=True)
class Operator:
    """A square matrix acting on one of the bases, optionally flagged unitary."""

    matrix: np.ndarray
    name: str = ""
    unitary_hint: bool = False

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator entries must be finite")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def dagger(self) -> "Operator":
        name = f"{self.name}^dag" if self.name else ""
        return Operator(self.matrix.conj().T, name, self.unitary_hint)

    def __matmul__(self, other: "Operator") -> "Operator":
        if not isinstance(other, Operator):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        name = f"{self.name}*{other.name}" if self.name and other.name else ""
        return Operator(self.matrix @ other.matrix, name, self.unitary_hint and other.unitary_hint)

    def is_unitary(self, atol: float = ATOL) -> bool:
        eye = np.eye(self.dim)
        return bool(np.max(np.abs(self.matrix.conj().T @ self.matrix - eye)) <= atol)


def identity(dim: int) -> Operator:
    return Operator(np.eye(dim), "I", unitary_hint=True)


def tensor(a, b):
    """Kronecker product ``a (x) b``; ``a`` acts on the leftmost (most significant) factor."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        amps = np.kron(a.amps, b.amps)
        basis = _DIM_TO_BASIS.get(amps.shape[0])
        if basis is None:
            raise ValueError(f"no basis of dimension {amps.shape[0]}")
        return StateVector(amps, basis, normalized=a.normalized and b.normalized)
    if isinstance(a, Operator) and isinstance(b, Operator):
        name = f"({a.name} x {b.name})" if a.name and b.name else ""
        return Operator(np.kron(a.matrix, b.matrix), name, a.unitary_hint and b.unitary_hint)
    raise TypeError("tensor needs two StateVectors or two Operators")


def apply(op: Operator, psi: StateVector) -> StateVector:
    """Exact matrix-vector product. The result is flagged unnormalized unless ``op`` is unitary."""
    if op.dim != psi.dim:
        raise ValueError(f"dimension mismatch: operator {op.dim}, state {psi.dim}")
    out = op.matrix @ psi.amps
    keep = psi.normalized and op.unitary_hint
    return StateVector(out, psi.basis, normalized=keep)


def normalize(psi: StateVector) -> tuple[StateVector, float]:
    norm = psi.norm()
    if norm <= ATOL:
        raise NullMove("state has vanishing norm")
    return StateVector(psi.amps / norm, psi.basis), norm


def overlap(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.basis != b.basis:
        raise ValueError(f"basis mismatch: {a.basis} vs {b.basis}")
    return complex(np.vdot(a.amps, b.amps))


def trace_distance_pure(a: StateVector, b: StateVector) -> float:
    """Trace distance of two pure states, sqrt(1 - |<a|b>|^2)."""
    return float(trace_distance_rows(a.amps[None, :], b.amps[None, :])[0])


def trace_distance_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise trace distance between two stacks of unit vectors.

    Uses the norm of the part of ``b`` orthogonal to ``a``, which equals
    sqrt(1 - |<a|b>|^2) for unit vectors but stays accurate near zero where
    the square root would amplify rounding in the overlap.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.ndim != 2:
        raise ValueError(f"expected two equal (n, d) stacks, got {a.shape} and {b.shape}")
    ov = np.einsum("ij,ij->i", a.conj(), b)
    resid = b - ov[:, None] * a
    return np.minimum(np.linalg.norm(resid, axis=1), 1.0)


def density(psi: StateVector) -> np.ndarray:
    return np.outer(psi.amps, psi.amps.conj())


def check_density(rho: np.ndarray, atol: float = ATOL) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity; return ``rho`` as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > atol:
        raise ValueError(f"density matrix has trace {np.trace(rho).real!r}")
    if np.min(np.linalg.eigvalsh(rho)) < -atol:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def partial_trace_qubit0(rho: np.ndarray) -> np.ndarray:
    """Trace out the rightmost qubit i0 of a two-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got {rho.shape}")
    return np.einsum("ikjk->ij", rho.reshape(2, 2, 2, 2))


def reduced_state(psi: StateVector) -> np.ndarray:
    """Density matrix of qubit 1 for a two-qubit pure state."""
    if psi.basis != "qubit2":
        raise ValueError("reduced_state needs a two-qubit state")
    return partial_trace_qubit0(density(psi))


def purity(rho: np.ndarray) -> float:
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.trace(rho @ rho)))


def eig2_hermitian(rho: np.ndarray) -> tuple[float, float]:
    """Closed-form eigenvalues of a 2x2 Hermitian matrix, ascending."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"expected 2x2, got {rho.shape}")
    a, d = rho[0, 0].real, rho[1, 1].real
    b = rho[0, 1]
    mean = 0.5 * (a + d)
    radius = float(np.hypot(0.5 * (a - d), abs(b)))
    return mean - radius, mean + radius
