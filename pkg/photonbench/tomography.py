# Copyright 2024 The photonbench authors
#
# Licensed under the Apache License, Version 2.0 (the 'License');
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an 'AS IS' BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Qubit state and process tomography: linear inversion, Pauli transfer matrices, fidelities."""

import collections
import itertools

import numpy as np
from scipy import linalg

from photonbench.errors import DimensionError, NotTracePreservingError

__all__ = [
    "DualRailChannel",
    "PAULI_LABELS",
    "PAULIS",
    "average_gate_fidelity",
    "bloch_vector",
    "choi_fidelity",
    "choi_from_ptm",
    "depolarizing_kraus",
    "pauli_transfer_matrix",
    "project_to_state",
    "ptm_fidelity",
    "ptm_from_states",
    "reconstruct_state",
    "reconstruct_two_qubit_state",
    "state_fidelity",
    "z_rotation",
]

PAULI_LABELS = ("I", "X", "Y", "Z")
PAULIS = collections.OrderedDict(
    [
        ("I", np.eye(2, dtype=complex)),
        ("X", np.array([[0, 1], [1, 0]], dtype=complex)),
        ("Y", np.array([[0, -1j], [1j, 0]], dtype=complex)),
        ("Z", np.array([[1, 0], [0, -1]], dtype=complex)),
    ]
)
MEASURED_AXES = ("X", "Y", "Z")
TP_TOLERANCE = 1e-9


def z_rotation(alpha):
    return np.diag([np.exp(-0.5j * alpha), np.exp(0.5j * alpha)])


def depolarizing_kraus(p):
    """Kraus set of rho -> (1 - p) rho + p I / 2."""

    return [np.sqrt(1.0 - 0.75 * p) * PAULIS["I"]] + [
        np.sqrt(p / 4.0) * PAULIS[label] for label in ("X", "Y", "Z")
    ]


def _simplex_projection(values):
    """Euclidean projection of ``values`` onto the probability simplex."""

    ordered = np.sort(values)[::-1]
    cumulative = np.cumsum(ordered) - 1.0
    index = np.arange(1, values.size + 1)
    rho = index[ordered - cumulative / index > 0][-1]
    shift = cumulative[rho - 1] / rho
    return np.maximum(values - shift, 0.0)


def project_to_state(matrix):
    """Nearest (Frobenius) positive semidefinite unit-trace matrix."""

    matrix = np.asarray(matrix, dtype=complex)
    hermitian = (matrix + matrix.conj().T) / 2.0
    values, vectors = np.linalg.eigh(hermitian)
    projected = _simplex_projection(values)
    return (vectors * projected).dot(vectors.conj().T)


def _expectation(counts):
    plus, minus = counts
    total = float(plus + minus)
    if total <= 0:
        return 0.0
    return (plus - minus) / total


def bloch_vector(counts):
    missing = [axis for axis in MEASURED_AXES if axis not in counts]
    if missing:
        raise DimensionError(
            "Tomography needs settings X, Y and Z; missing %s" % ", ".join(missing)
        )
    return np.array([_expectation(counts[axis]) for axis in MEASURED_AXES])


def reconstruct_state(counts):
    """
    Single-qubit state from ``{"X": (n_plus, n_minus), "Y": ..., "Z": ...}`` by
    linear inversion and projection onto physical states.
    """

    vector = bloch_vector(counts)
    matrix = PAULIS["I"] / 2.0
    for value, axis in zip(vector, MEASURED_AXES):
        matrix = matrix + value * PAULIS[axis] / 2.0
    return project_to_state(matrix)


def reconstruct_two_qubit_state(counts):
    """
    Two-qubit state from the nine local Pauli settings.

    ``counts[(a, b)]`` is a 2x2 array of counts indexed by the outcomes of
    qubit 1 and qubit 2, index 0 being the +1 eigenvalue.
    """

    missing = [setting for setting in itertools.product(MEASURED_AXES, repeat=2) if setting not in counts]
    if missing:
        raise DimensionError("Two-qubit tomography is missing settings %s" % missing)

    signs = np.array([1.0, -1.0])
    correlations = {}
    singles = collections.defaultdict(list)

    for (first, second), table in counts.items():
        table = np.asarray(table, dtype=float)
        total = table.sum()
        if total <= 0:
            raise DimensionError("Setting %s%s has no counts" % (first, second))
        probabilities = table / total
        correlations[(first, second)] = float(signs.dot(probabilities).dot(signs))
        singles[(first, "I")].append(float(signs.dot(probabilities.sum(axis=1))))
        singles[("I", second)].append(float(signs.dot(probabilities.sum(axis=0))))

    matrix = np.kron(PAULIS["I"], PAULIS["I"]) / 4.0
    for (first, second), value in correlations.items():
        matrix = matrix + value * np.kron(PAULIS[first], PAULIS[second]) / 4.0
    for (first, second), values in singles.items():
        matrix = matrix + np.mean(values) * np.kron(PAULIS[first], PAULIS[second]) / 4.0

    return project_to_state(matrix)


def state_fidelity(rho, sigma):
    """Uhlmann fidelity; either argument may be a pure state vector."""

    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)

    if rho.ndim == 1:
        rho, sigma = sigma, rho
    if sigma.ndim == 1:
        value = np.real(sigma.conj().dot(rho).dot(sigma))
    else:
        root = linalg.sqrtm(rho)
        value = np.real(np.trace(linalg.sqrtm(root.dot(sigma).dot(root)))) ** 2

    return float(min(max(value, 0.0), 1.0))


class DualRailChannel(object):
    """
    Single photon on two rails passing a linear network ``transfer``. Arrival is
    post-selected, so only the shape of the transfer matters.
    """

    def __init__(self, transfer):
        self.transfer = np.asarray(transfer, dtype=complex)
        if self.transfer.shape != (2, 2):
            raise DimensionError("Dual-rail transfer must be 2x2, got %s" % (self.transfer.shape,))

    def kraus(self):
        return [self.transfer]


def _normalized_kraus(channel):
    kraus = channel.kraus() if isinstance(channel, DualRailChannel) else list(channel)
    kraus = [np.asarray(k, dtype=complex) for k in kraus]

    completeness = sum(k.conj().T.dot(k) for k in kraus)
    scale = np.real(np.trace(completeness)) / 2.0
    if scale <= 0 or np.abs(completeness - scale * np.eye(2)).max() > TP_TOLERANCE * max(scale, 1.0):
        raise NotTracePreservingError(
            "Channel is not trace preserving after post-selection: sum K^dagger K = %s"
            % np.round(completeness, 12).tolist()
        )

    return [k / np.sqrt(scale) for k in kraus]


def _apply(kraus, rho):
    return sum(k.dot(rho).dot(k.conj().T) for k in kraus)


def pauli_transfer_matrix(channel):
    """
    R[i][j] = Tr(P_i L(P_j)) / 2 for a Kraus list or a DualRailChannel, with loss
    renormalized away.
    """

    kraus = _normalized_kraus(channel)
    matrix = np.empty((4, 4))
    for j, label_j in enumerate(PAULI_LABELS):
        image = _apply(kraus, PAULIS[label_j])
        for i, label_i in enumerate(PAULI_LABELS):
            matrix[i, j] = np.real(np.trace(PAULIS[label_i].dot(image))) / 2.0
    return matrix


def ptm_from_states(outputs):
    """
    PTM from the output states for inputs |0>, |1>, |+> and |+i>, given as a
    dict keyed "0", "1", "+", "+i".
    """

    zero, one = outputs["0"], outputs["1"]
    images = [
        zero + one,
        2.0 * outputs["+"] - zero - one,
        2.0 * outputs["+i"] - zero - one,
        zero - one,
    ]
    matrix = np.empty((4, 4))
    for j, image in enumerate(images):
        for i, label in enumerate(PAULI_LABELS):
            matrix[i, j] = np.real(np.trace(PAULIS[label].dot(image))) / 2.0
    return matrix


def ptm_fidelity(ptm, ideal):
    """Process fidelity Tr(R_ideal^T R) / 4."""
    value = np.trace(np.asarray(ideal).T.dot(ptm)) / 4.0
    return float(min(max(value, 0.0), 1.0))


def average_gate_fidelity(process_fidelity, dimension=2):
    return (dimension * process_fidelity + 1.0) / (dimension + 1.0)


def choi_from_ptm(ptm):
    """Normalized Choi matrix sum_ab L(|a><b|) (x) |a><b| / 2."""

    ptm = np.asarray(ptm)
    images = [sum(ptm[i, j] * PAULIS[label] for i, label in enumerate(PAULI_LABELS)) / 2.0 for j in range(4)]

    choi = np.zeros((4, 4), dtype=complex)
    for a in range(2):
        for b in range(2):
            unit = np.zeros((2, 2), dtype=complex)
            unit[a, b] = 1.0
            image = sum(
                np.trace(PAULIS[label].dot(unit)) * images[j] for j, label in enumerate(PAULI_LABELS)
            )
            choi += np.kron(image, unit)
    return choi / 2.0


def choi_fidelity(ptm, unitary):
    """Overlap of the Choi state with that of ``unitary``; equals the process fidelity."""

    entangled = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
    target = np.kron(np.asarray(unitary, dtype=complex), np.eye(2)).dot(entangled)
    return float(np.real(target.conj().dot(choi_from_ptm(ptm)).dot(target)))
