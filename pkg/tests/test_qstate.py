import numpy as np
import pytest

from chinos.errors import NullMove
from chinos.modes import H, X, bell_family, creation_fock3, creation_hardcore
from chinos.qstate import (
    Operator,
    StateVector,
    apply,
    check_density,
    density,
    eig2_hermitian,
    identity,
    normalize,
    overlap,
    partial_trace_qubit0,
    purity,
    reduced_state,
    tensor,
    trace_distance_pure,
)

ket0 = StateVector.basis_state("qubit1", 0)
ket1 = StateVector.basis_state("qubit1", 1)


class TestStateVector:
    def test_dim_must_match_basis(self):
        with pytest.raises(ValueError):
            StateVector(np.ones(3), "qubit1", normalized=False)

    def test_normalized_flag_is_checked(self):
        with pytest.raises(ValueError):
            StateVector(np.array([1.0, 1.0]), "qubit1")
        StateVector(np.array([1.0, 1.0]), "qubit1", normalized=False)

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            StateVector(np.array([np.nan, 0]), "qubit1", normalized=False)

    def test_immutable(self):
        with pytest.raises(ValueError):
            ket0.amps[0] = 2


class TestTensor:
    def test_product_of_zeros(self):
        psi = tensor(ket0, ket0)
        assert psi.basis == "qubit2"
        assert psi.amps[0] == 1

    def test_flip_on_left_factor(self):
        op = tensor(Operator(X, unitary_hint=True), identity(2))
        out = apply(op, StateVector.from_bits(0, 0))
        np.testing.assert_allclose(out.amps, StateVector.from_bits(1, 0).amps)

    def test_hadamard_on_right_factor(self):
        op = tensor(identity(2), Operator(H, unitary_hint=True))
        out = apply(op, StateVector.from_bits(1, 0))
        np.testing.assert_allclose(out.amps, np.array([0, 0, 1, 1]) / np.sqrt(2), atol=1e-15)

    def test_mixed_kinds_rejected(self):
        with pytest.raises(TypeError):
            tensor(ket0, identity(2))


class TestApply:
    def test_identity(self):
        assert np.array_equal(apply(identity(2), ket0).amps, ket0.amps)

    def test_boson_creation(self):
        one = StateVector.basis_state("fock3", 1)
        out = apply(Operator(creation_fock3()), one)
        np.testing.assert_allclose(out.amps, [0, 0, np.sqrt(2)])
        assert not out.normalized

    def test_hardcore_double_creation_vanishes(self):
        one = StateVector.basis_state("qubit1", 1)
        out = apply(Operator(creation_hardcore()), one)
        assert np.all(out.amps == 0)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply(identity(3), ket0)


class TestNormalize:
    def test_plus_state(self):
        psi, norm = normalize(StateVector(np.array([1.0, 1.0]), "qubit1", normalized=False))
        assert norm == pytest.approx(np.sqrt(2), abs=1e-15)
        np.testing.assert_allclose(psi.amps, [2**-0.5, 2**-0.5])

    def test_boson_superposition(self):
        bd = creation_fock3()
        op = (np.eye(3) + bd) @ (np.eye(3) + bd) / 2
        raw = apply(Operator(op), StateVector.basis_state("fock3", 0))
        psi, norm = normalize(raw)
        assert norm**2 == pytest.approx(7 / 4, abs=1e-14)
        np.testing.assert_allclose(psi.probabilities(), [1 / 7, 4 / 7, 2 / 7], atol=1e-15)

    def test_zero_vector(self):
        with pytest.raises(NullMove):
            normalize(StateVector(np.zeros(2), "qubit1", normalized=False))


class TestOverlapAndDistance:
    def test_orthogonal_basis(self):
        assert overlap(ket0, ket1) == 0

    def test_conjugate_linear_in_first(self):
        a = StateVector(np.array([1j, 0]), "qubit1")
        assert overlap(a, ket0) == -1j

    def test_bell_states_orthonormal(self):
        fam = bell_family(0.0)
        vac = StateVector.from_bits(0, 0)
        states = [apply(fam[k], vac) for k in range(4)]
        gram = np.array([[overlap(a, b) for b in states] for a in states])
        np.testing.assert_allclose(gram, np.eye(4), atol=1e-15)
        assert abs(overlap(states[3], states[2])) < 1e-15

    @pytest.mark.parametrize("a,b,expected", [(ket0, ket0, 0.0), (ket0, ket1, 1.0)])
    def test_trace_distance_extremes(self, a, b, expected):
        assert trace_distance_pure(a, b) == pytest.approx(expected, abs=1e-15)

    def test_trace_distance_partial(self):
        # p(1) = 4/5 against the occupied state
        psi = StateVector(np.array([np.sqrt(1 / 5), np.sqrt(4 / 5)]), "qubit1")
        assert trace_distance_pure(ket1, psi) == pytest.approx(np.sqrt(1 / 5), abs=1e-15)


class TestDensity:
    def test_partial_trace_product(self):
        rho = partial_trace_qubit0(density(StateVector.from_bits(0, 0)))
        np.testing.assert_allclose(rho, np.diag([1, 0]))

    def test_partial_trace_keeps_left_qubit(self):
        rho = partial_trace_qubit0(density(StateVector.from_bits(1, 0)))
        np.testing.assert_allclose(rho, np.diag([0, 1]))

    def test_phi_plus_is_maximally_mixed(self):
        phi = StateVector(np.array([1, 0, 0, 1]) / np.sqrt(2), "qubit2")
        np.testing.assert_allclose(reduced_state(phi), np.eye(2) / 2, atol=1e-15)

    def test_separable_at_pi(self):
        psi = apply(bell_family(np.pi)[0], StateVector.from_bits(0, 0))
        lo, hi = eig2_hermitian(reduced_state(psi))
        assert lo == pytest.approx(0, abs=1e-12)
        assert hi == pytest.approx(1, abs=1e-12)

    @pytest.mark.parametrize(
        "rho,expected",
        [
            (np.eye(2) / 2, 0.5),
            (np.diag([1.0, 0.0]), 1.0),
        ],
    )
    def test_purity(self, rho, expected):
        assert purity(rho) == pytest.approx(expected, abs=1e-15)

    def test_purity_of_rotated_bell(self):
        # eigenvalues (1 +- sin(pi/4))/2 give purity (1 + sin^2(pi/4))/2
        psi = apply(bell_family(np.pi / 2)[0], StateVector.from_bits(0, 0))
        assert purity(reduced_state(psi)) == pytest.approx(0.75, abs=1e-12)

    def test_eig2_identity(self):
        assert eig2_hermitian(np.eye(2) / 2) == (0.5, 0.5)

    def test_eig2_at_pi_over_3(self):
        psi = apply(bell_family(np.pi / 3)[0], StateVector.from_bits(0, 0))
        lo, hi = eig2_hermitian(reduced_state(psi))
        assert (lo, hi) == pytest.approx((0.25, 0.75), abs=1e-12)

    def test_eig2_matches_numpy(self, rng):
        for _ in range(50):
            a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            h = a + a.conj().T
            np.testing.assert_allclose(eig2_hermitian(h), np.linalg.eigvalsh(h), atol=1e-12)

    def test_check_density_rejects_bad_trace(self):
        with pytest.raises(ValueError):
            check_density(np.eye(2))
        check_density(np.eye(2) / 2)


class TestOperator:
    def test_unitary_check(self):
        assert Operator(H).is_unitary()
        assert not Operator(creation_hardcore()).is_unitary()

    def test_dagger_and_product(self):
        op = Operator(np.array([[1, 2j], [0, 1]]))
        np.testing.assert_allclose(op.dagger.matrix, [[1, 0], [-2j, 1]])
        np.testing.assert_allclose((op @ op.dagger).matrix, op.matrix @ op.matrix.conj().T)
