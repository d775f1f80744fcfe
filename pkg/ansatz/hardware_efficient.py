from quantum_sim.statevector import (
    StateVector,
    all_pairs_cz_signs,
    apply_cz_all_pairs,
    apply_ry,
    new_zero_state,
)

from .ansatz_base import AnsatzMixin, ParameterVector


class HardwareEfficientAnsatz(AnsatzMixin):
    """
    R_y on every wire, then p layers of (CZ on all pairs i < j, R_y on every wire).

    Parameters are layer-major: params[l * n + q] is the angle of qubit q in
    rotation layer l, giving n (1 + p) angles.
    """

    kind = "hea"

    def __init__(self, n_qubits: int, layers: int = 1):
        if layers < 1:
            raise ValueError(f"layers must be >= 1, got {layers}")

        self.n_qubits = n_qubits
        self.layers = layers
        self._cz_signs = all_pairs_cz_signs(n_qubits)

    @property
    def param_count(self) -> int:
        return self.n_qubits * (1 + self.layers)

    def _rotation_layer(self, state: StateVector, angles: ParameterVector):
        for qubit, theta in enumerate(angles):
            apply_ry(state, qubit, theta)

    def prepare(self, params) -> StateVector:
        params = self.checked_params(params)
        rotations = params.reshape(1 + self.layers, self.n_qubits)

        state = new_zero_state(self.n_qubits)
        self._rotation_layer(state, rotations[0])

        for layer in range(1, self.layers + 1):
            apply_cz_all_pairs(state, self._cz_signs)
            self._rotation_layer(state, rotations[layer])

        return state


def hea_prepare(ansatz: HardwareEfficientAnsatz, params) -> StateVector:
    return ansatz.prepare(params)
