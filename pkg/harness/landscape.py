import os
from dataclasses import dataclass

import numpy as np
import pandas as pd
from numpy.typing import NDArray
from scipy.ndimage import minimum_filter

from ansatz.qaoa import QaoaAnsatz, qaoa_gamma_bound
from metrics.oracle import brute_force_ground, overlap
from objective.cvar import exact_cvar
from problems.hamiltonians import build_hamiltonian
from problems.instances import Instance, NumberPartitionInstance

from .output import write_frame, write_json

LANDSCAPE_COLUMNS = ("gamma", "beta", "value")
MINIMUM_TOLERANCE = 1e-6


@dataclass(frozen=True, eq=False)
class LandscapeGrid:
    """Exact CVaR_alpha of the p=1 QAOA state; values[i, j] sits at (gammas[i], betas[j])"""

    alpha: float
    gammas: NDArray[np.float64]
    betas: NDArray[np.float64]
    values: NDArray[np.float64]

    def __post_init__(self):
        expected = (self.gammas.shape[0], self.betas.shape[0])
        if self.values.shape != expected:
            raise ValueError(f"grid values have shape {self.values.shape}, expected {expected}")

    @property
    def global_minimum(self) -> float:
        return float(self.values.min())

    def argmin(self) -> tuple[float, float]:
        i, j = np.unravel_index(np.argmin(self.values), self.values.shape)
        return float(self.gammas[i]), float(self.betas[j])

    def local_minima(self) -> int:
        """Grid points no larger than any of their 8 neighbours"""

        neighbourhood = minimum_filter(self.values, size=3, mode="nearest")
        return int(np.count_nonzero(self.values <= neighbourhood))

    def to_frame(self) -> pd.DataFrame:
        gamma_grid, beta_grid = np.meshgrid(self.gammas, self.betas, indexing="ij")
        return pd.DataFrame(
            {
                "gamma": gamma_grid.ravel(),
                "beta": beta_grid.ravel(),
                "value": self.values.ravel(),
            },
            columns=list(LANDSCAPE_COLUMNS),
        )


def gamma_range(instance: Instance) -> tuple[float, float]:
    if isinstance(instance, NumberPartitionInstance):
        return 0.0, qaoa_gamma_bound(instance)
    return 0.0, 2 * np.pi


def compute_landscape(
    instance: Instance, alphas: list[float], resolution: int, layers: int = 1
) -> tuple[list[LandscapeGrid], float]:
    """
    One grid per alpha over gamma in [0, gamma_max) and beta in [0, pi), plus
    the largest ground-state mass any grid point reaches.
    """
    if layers != 1:
        raise ValueError(f"landscapes are defined for QAOA depth 1 only, got {layers}")
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    if not alphas:
        raise ValueError("need at least one alpha")

    hamiltonian = build_hamiltonian(instance)
    truth = brute_force_ground(hamiltonian)
    ansatz = QaoaAnsatz(1, hamiltonian)

    gamma_low, gamma_high = gamma_range(instance)
    gammas = np.linspace(gamma_low, gamma_high, resolution, endpoint=False)
    betas = np.linspace(0.0, np.pi, resolution, endpoint=False)

    values = np.empty((len(alphas), resolution, resolution))
    reachable = 0.0

    for i, gamma in enumerate(gammas):
        for j, beta in enumerate(betas):
            state = ansatz.prepare([gamma, beta])
            reachable = max(reachable, overlap(state, truth))
            for k, alpha in enumerate(alphas):
                values[k, i, j] = exact_cvar(state, hamiltonian, alpha)

    grids = [
        LandscapeGrid(alpha=alpha, gammas=gammas, betas=betas, values=values[k])
        for k, alpha in enumerate(alphas)
    ]
    return grids, reachable


def emit_landscape(
    instance: Instance,
    alphas: list[float],
    resolution: int,
    out_dir: str,
    logger,
    layers: int = 1,
) -> list[LandscapeGrid]:
    """
    Writes landscape_alpha=<a>.csv (gamma,beta,value; resolution^2 rows) per
    alpha and a landscape_report.json with the minima of every grid.
    """
    grids, reachable = compute_landscape(instance, alphas, resolution, layers)
    ground = brute_force_ground(build_hamiltonian(instance)).ground_energy

    report = []
    for grid in grids:
        file_path = os.path.join(out_dir, f"landscape_alpha={grid.alpha:g}.csv")
        write_frame(grid.to_frame(), file_path)

        gamma, beta = grid.argmin()
        report.append(
            {
                "alpha": grid.alpha,
                "file": os.path.basename(file_path),
                "global_minimum": grid.global_minimum,
                "argmin": {"gamma": gamma, "beta": beta},
                "local_minima": grid.local_minima(),
            }
        )
        logger.info(
            f"alpha={grid.alpha:g}: minimum {grid.global_minimum:.6g}, "
            f"{report[-1]['local_minima']} local minima"
        )

    minima = [grid.global_minimum for grid in grids]
    consistent = max(minima) - min(minima) <= MINIMUM_TOLERANCE
    reaches_all = reachable >= max(alphas)

    write_json(
        {
            "resolution": resolution,
            "ground_energy": ground,
            "max_ground_mass": reachable,
            "reaches_every_alpha": reaches_all,
            "minima_consistent": consistent,
            "grids": report,
        },
        os.path.join(out_dir, "landscape_report.json"),
    )

    if reaches_all and not consistent:
        logger.warning(
            f"ground mass {reachable:.4f} covers every alpha but grid minima differ: {minima}"
        )
    elif not reaches_all:
        logger.info(
            f"the depth-1 circuit reaches ground mass {reachable:.4f} at most on this grid"
        )

    return grids
