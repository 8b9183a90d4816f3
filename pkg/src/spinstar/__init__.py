"""Exact reduced dynamics of central spin models.

One or two central qubits couple to spin baths through Heisenberg XY
exchange. Because each bath Hamiltonian depends on its spins only through
collective operators, the unitary splits into Dicke sectors and the
reduced qubit state can be propagated exactly for baths of hundreds of
spins.

Submodules
----------
numerics
    Hermitian eigensolver, Kronecker products, partial trace, norms.
collective
    Dicke sector bookkeeping and collective spin matrices.
models
    Model configurations, sector Hamiltonians, brute-force references.
dynamics
    Thermal weights, spectral propagation, dynamical maps, generators.
measures
    Trace distance, entropy, quantum speed limit, concurrence, discord.
experiments
    Experiment files, the compute driver and CSV output.
cli
    The ``spinstar`` command.
"""

from .dynamics import (Trajectory, evolve, evolve_single, evolve_two_qubit, generator,
                       qubit_map, thermal_weights)
from .kernels import BACKEND
from .measures import (concurrence, entropies, qsl_curve, qsl_time, quantum_discord,
                       trace_distance, trace_distances, von_neumann_entropy)
from .models import CouplingAxis, ModelConfig, Scenario, TwoQubitConfig

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CouplingAxis", "ModelConfig", "Scenario", "Trajectory", "TwoQubitConfig",
    "concurrence", "entropies", "evolve", "evolve_single", "evolve_two_qubit", "generator",
    "qsl_curve", "qsl_time", "quantum_discord", "qubit_map", "thermal_weights",
    "trace_distance", "trace_distances", "von_neumann_entropy",
]
