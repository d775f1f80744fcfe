import numpy as np
from numpy.typing import NDArray

from quantum_sim.statevector import StateVector

ParameterVector = NDArray[np.float64]


class ParameterCountError(ValueError):
    pass


class AnsatzMixin:
    """
    Shared contract of the circuit families: a fixed parameter count and a pure
    ``prepare(params) -> StateVector``.
    """

    kind = "ansatz"
    n_qubits: int
    layers: int

    @property
    def param_count(self) -> int:
        raise NotImplementedError

    def prepare(self, params: ParameterVector) -> StateVector:
        raise NotImplementedError

    def checked_params(self, params) -> ParameterVector:
        params = np.asarray(params, dtype=np.float64)
        if params.shape != (self.param_count,):
            raise ParameterCountError(
                f"{self.__class__.__name__} takes {self.param_count} parameters, "
                f"got shape {params.shape}"
            )
        return params

    def __repr__(self):
        return f"{self.__class__.__name__}(n_qubits={self.n_qubits}, layers={self.layers})"
