import numpy as np
import pytest

from chinos.errors import DegenerateAngle
from chinos.modes import (
    CNOT,
    Mode,
    bell_family,
    boson_family,
    cnot_bell_family,
    family_for,
    gate_cu,
    hardcore_family,
    qubit_family,
)
from chinos.qstate import StateVector, apply, normalize, reduced_state

VAC2 = StateVector.from_bits(0, 0)
ANGLES = np.linspace(0.05, np.pi - 0.05, 20)


class TestBoson:
    def test_members(self):
        fam = boson_family()
        assert fam.indices == [1, 2, 3, 4]
        np.testing.assert_array_equal(fam[1].matrix, np.eye(3))

    def test_creation_on_vacuum(self):
        out = apply(boson_family()[4], StateVector.basis_state("fock3", 0))
        np.testing.assert_allclose(out.amps, [0, 1, 0])

    def test_double_superposition(self):
        fam = boson_family()
        psi, _ = normalize(apply(fam[2], apply(fam[2], StateVector.basis_state("fock3", 0))))
        np.testing.assert_allclose(psi.probabilities(), [1 / 7, 4 / 7, 2 / 7], atol=1e-15)

    def test_bad_index(self):
        with pytest.raises(IndexError):
            boson_family()[0]


class TestHardcore:
    @pytest.mark.parametrize("theta", [0.0, np.pi / 2, -0.1, 2.0])
    def test_degenerate_angles(self, theta):
        with pytest.raises(DegenerateAngle):
            hardcore_family(theta)

    def test_three_members(self):
        assert len(hardcore_family(0.3)) == 3

    def test_same_move_at_pi_over_4(self):
        fam = hardcore_family(np.pi / 4)
        psi, _ = normalize(apply(fam[2], apply(fam[2], StateVector.basis_state("qubit1", 0))))
        np.testing.assert_allclose(psi.probabilities(), [1 / 5, 4 / 5], atol=1e-15)

    @pytest.mark.parametrize("theta", np.linspace(0.05, np.pi / 2 - 0.05, 9))
    def test_opposite_moves_cancel(self, theta):
        fam = hardcore_family(theta)
        psi, _ = normalize(apply(fam[2], apply(fam[3], StateVector.basis_state("qubit1", 0))))
        np.testing.assert_allclose(psi.probabilities(), [1, 0], atol=1e-14)


class TestQubit:
    @pytest.mark.parametrize("theta", ANGLES)
    def test_inverse_rotations(self, theta):
        fam = qubit_family(theta)
        np.testing.assert_allclose(fam[2].matrix @ fam[3].matrix, np.eye(2), atol=1e-15)

    @pytest.mark.parametrize("theta", ANGLES)
    def test_single_rotation_probability(self, theta):
        out = apply(qubit_family(theta)[2], StateVector.basis_state("qubit1", 0))
        assert out.probabilities()[1] == pytest.approx(np.sin(theta / 2) ** 2, abs=1e-15)

    def test_double_rotation_at_right_angle(self):
        fam = qubit_family(np.pi / 2)
        out = apply(fam[2], apply(fam[2], StateVector.basis_state("qubit1", 0)))
        np.testing.assert_allclose(out.probabilities(), [0, 1], atol=1e-15)

    @pytest.mark.parametrize("theta", ANGLES)
    def test_unitary(self, theta):
        assert all(op.is_unitary() for op in qubit_family(theta).ops.values())


class TestControlledRotation:
    def test_cnot_at_zero(self):
        np.testing.assert_allclose(gate_cu(0.0).matrix, CNOT, atol=1e-15)

    def test_literal_convention_is_identity_at_zero(self):
        np.testing.assert_allclose(gate_cu(0.0, "literal").matrix, np.eye(4), atol=1e-15)

    @pytest.mark.xfail(strict=True, reason="default convention gives CNOT at theta=0; see decisions ledger")
    def test_identity_at_zero_default_convention(self):
        np.testing.assert_allclose(gate_cu(0.0).matrix, np.eye(4), atol=1e-12)

    def test_literal_convention_at_pi(self):
        out = gate_cu(np.pi, "literal").matrix @ StateVector.from_bits(0, 1).amps
        np.testing.assert_allclose(out, [0, 0, 0, -1j], atol=1e-15)

    def test_default_convention_at_pi_is_phase(self):
        out = gate_cu(np.pi).matrix @ StateVector.from_bits(0, 1).amps
        np.testing.assert_allclose(out, [0, -1j, 0, 0], atol=1e-15)

    @pytest.mark.parametrize("theta", ANGLES)
    @pytest.mark.parametrize("convention", ["xr", "literal"])
    def test_control_off_is_identity(self, theta, convention):
        out = gate_cu(theta, convention).matrix @ StateVector.from_bits(1, 0).amps
        np.testing.assert_allclose(out, StateVector.from_bits(1, 0).amps, atol=1e-15)

    def test_unknown_convention(self):
        with pytest.raises(ValueError):
            gate_cu(0.1, "nope")


class TestBell:
    def test_phi_plus(self):
        out = apply(bell_family(0.0)[0], VAC2)
        np.testing.assert_allclose(out.amps, np.array([1, 0, 0, 1]) / np.sqrt(2), atol=1e-15)

    def test_index_two(self):
        # The circuit yields (|01> + |10>)/sqrt2 for RBell(1, 0)
        out = apply(bell_family(0.0)[2], VAC2)
        np.testing.assert_allclose(out.amps, np.array([0, 1, 1, 0]) / np.sqrt(2), atol=1e-15)

    def test_matches_cnot_family(self):
        a, b = bell_family(0.0), cnot_bell_family()
        for k in range(4):
            np.testing.assert_allclose(a[k].matrix, b[k].matrix, atol=1e-12)

    @pytest.mark.parametrize("theta", np.linspace(0, np.pi, 20))
    def test_unitary(self, theta):
        assert all(op.is_unitary() for op in bell_family(theta).ops.values())

    @pytest.mark.parametrize("k", range(4))
    def test_maximally_entangled_at_zero(self, k):
        rho = reduced_state(apply(bell_family(0.0)[k], VAC2))
        np.testing.assert_allclose(rho, np.eye(2) / 2, atol=1e-12)

    def test_labels(self):
        assert bell_family(0.3).labels[2] == "O2=RBell(1,0)"


@pytest.mark.parametrize("kind", [Mode.BOSON, Mode.HARDCORE, Mode.QUBIT, Mode.TWO_QUBIT])
def test_family_for(kind):
    from chinos.modes import ModeKind

    theta = None if kind is Mode.BOSON else 0.4
    assert family_for(ModeKind(kind, theta)).kind.mode is kind
