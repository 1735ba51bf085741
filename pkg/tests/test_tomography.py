import itertools

import numpy as np
import pytest

from photonbench.errors import DimensionError, NotTracePreservingError
from photonbench.tomography import (
    DualRailChannel,
    average_gate_fidelity,
    bloch_vector,
    choi_fidelity,
    choi_from_ptm,
    depolarizing_kraus,
    pauli_transfer_matrix,
    ptm_fidelity,
    ptm_from_states,
    reconstruct_state,
    reconstruct_two_qubit_state,
    state_fidelity,
    z_rotation,
)

PLUS = np.array([1.0, 1.0]) / np.sqrt(2.0)
PHI_PLUS = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)


def rotation_ptm(alpha):
    c, s = np.cos(alpha), np.sin(alpha)
    return np.array([[1, 0, 0, 0], [0, c, -s, 0], [0, s, c, 0], [0, 0, 0, 1]], dtype=float)


@pytest.mark.unit
class TestPauliTransferMatrix(object):
    def test_identity(self):
        assert np.allclose(pauli_transfer_matrix([np.eye(2)]), np.eye(4), atol=1e-12)

    def test_z_rotation(self):
        ptm = pauli_transfer_matrix([z_rotation(0.4)])

        assert np.allclose(ptm, rotation_ptm(0.4), atol=1e-12)

    def test_depolarizing(self):
        ptm = pauli_transfer_matrix(depolarizing_kraus(0.1))

        assert np.allclose(ptm, np.diag([1.0, 0.9, 0.9, 0.9]), atol=1e-12)

    def test_uniform_loss_is_renormalized(self):
        ptm = pauli_transfer_matrix(DualRailChannel(0.8 * np.eye(2)))

        assert np.allclose(ptm, np.eye(4), atol=1e-12)

    def test_unbalanced_loss(self):
        with pytest.raises(NotTracePreservingError):
            pauli_transfer_matrix([np.diag([1.0, 0.5])])

    def test_dual_rail_shape(self):
        with pytest.raises(DimensionError):
            DualRailChannel(np.eye(3))

    def test_from_output_states(self):
        kraus = depolarizing_kraus(0.2)
        inputs = {
            "0": np.array([1.0, 0.0]),
            "1": np.array([0.0, 1.0]),
            "+": PLUS,
            "+i": np.array([1.0, 1.0j]) / np.sqrt(2.0),
        }
        outputs = {}
        for label, vector in inputs.items():
            rho = np.outer(vector, vector.conj())
            outputs[label] = sum(k.dot(rho).dot(k.conj().T) for k in kraus)

        assert np.allclose(ptm_from_states(outputs), pauli_transfer_matrix(kraus), atol=1e-12)


@pytest.mark.unit
class TestFidelities(object):
    def test_depolarizing_process_fidelity(self):
        ptm = pauli_transfer_matrix(depolarizing_kraus(0.08))

        assert abs(ptm_fidelity(ptm, np.eye(4)) - (1.0 - 0.75 * 0.08)) < 1e-12

    def test_rotation_process_fidelity(self):
        ptm = rotation_ptm(0.3)

        assert abs(ptm_fidelity(ptm, np.eye(4)) - (2.0 + 2.0 * np.cos(0.3)) / 4.0) < 1e-12
        assert abs(choi_fidelity(ptm, z_rotation(0.3)) - 1.0) < 1e-12

    def test_choi_overlap_equals_trace_formula(self):
        kraus = [k.dot(z_rotation(0.2)) for k in depolarizing_kraus(0.05)]
        ptm = pauli_transfer_matrix(kraus)

        assert abs(choi_fidelity(ptm, np.eye(2)) - ptm_fidelity(ptm, np.eye(4))) < 1e-12

    def test_choi_matrix_is_a_state(self):
        choi = choi_from_ptm(pauli_transfer_matrix(depolarizing_kraus(0.1)))

        assert abs(np.trace(choi) - 1.0) < 1e-12
        assert np.allclose(choi, choi.conj().T)
        assert np.linalg.eigvalsh(choi).min() > -1e-12

    def test_identity_channel_choi_fidelity(self):
        choi = choi_from_ptm(np.eye(4))

        assert np.allclose(choi, np.outer(PHI_PLUS, PHI_PLUS))
        assert abs(choi_fidelity(np.eye(4), np.eye(2)) - 1.0) < 1e-12

    def test_average_gate_fidelity(self):
        assert average_gate_fidelity(1.0) == 1.0
        assert abs(average_gate_fidelity(0.97) - 0.98) < 1e-12

    def test_state_fidelity(self):
        mixed = np.eye(2) / 2.0

        assert abs(state_fidelity(mixed, np.array([1.0, 0.0])) - 0.5) < 1e-12
        assert abs(state_fidelity(np.array([1.0, 0.0]), mixed) - 0.5) < 1e-12
        assert abs(state_fidelity(mixed, mixed) - 1.0) < 1e-9


@pytest.mark.unit
class TestStateTomography(object):
    def test_plus_state(self):
        rho = reconstruct_state({"X": (100, 0), "Y": (50, 50), "Z": (50, 50)})

        assert abs(state_fidelity(rho, PLUS) - 1.0) < 1e-12

    def test_unphysical_counts_are_projected(self):
        rho = reconstruct_state({"X": (100, 0), "Y": (100, 0), "Z": (100, 0)})
        values = np.linalg.eigvalsh(rho)

        assert abs(np.trace(rho).real - 1.0) < 1e-12
        assert values.min() > -1e-12

    def test_missing_axis(self):
        with pytest.raises(DimensionError):
            bloch_vector({"X": (1, 0), "Z": (1, 0)})

    def test_bell_state(self):
        correlations = {("X", "X"): 1.0, ("Y", "Y"): -1.0, ("Z", "Z"): 1.0}
        counts = {}
        for setting in itertools.product("XYZ", repeat=2):
            c = correlations.get(setting, 0.0)
            counts[setting] = 1000.0 * np.array([[1 + c, 1 - c], [1 - c, 1 + c]]) / 4.0

        rho = reconstruct_two_qubit_state(counts)

        assert abs(state_fidelity(rho, PHI_PLUS) - 1.0) < 1e-9

    def test_missing_two_qubit_setting(self):
        with pytest.raises(DimensionError):
            reconstruct_two_qubit_state({("X", "X"): np.ones((2, 2))})
