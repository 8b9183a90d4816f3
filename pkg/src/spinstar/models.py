"""Hamiltonians of the single- and two-qubit central spin models.

Everything is in units with hbar = k_B = 1. Qubit basis: ``|0>`` is the
sigma_z = +1 state, ``|1>`` the sigma_z = -1 state. Tensor products are
always ordered system qubits first, then bath(s).

Two routes are provided. The sector builders work in one total-spin sector
of each bath using collective operators; :func:`bruteforce_full_h` writes the
Hamiltonian out spin by spin on the full product space and exists only to
validate the sector route.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from functools import reduce
from typing import Union

import numpy as np
import scipy.sparse as sp

from .collective import SectorSpec, check_sector, collective_ops
from .errors import InvalidSector, NonPositiveTemperature, ScenarioMismatch, TooLarge

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)

BRUTEFORCE_MAX_SPINS = 14


class Scenario(enum.Enum):
    LOCAL = "local"
    GLOBAL = "global"


class CouplingAxis(enum.Enum):
    ZZ = "zz"
    XX = "xx"


@dataclass(frozen=True)
class ModelConfig:
    """Single central spin coupled to one bath.

    ``bath_interacting`` selects the flip-flop interacting bath over the
    bare Zeeman bath.
    """

    omega0: float
    omega: float
    epsilon: float
    n_bath: int
    temperature: float
    bath_interacting: bool

    def __post_init__(self):
        if not self.temperature > 0:
            raise NonPositiveTemperature(f"temperature must be > 0, got {self.temperature}")
        if self.n_bath < 1:
            raise InvalidSector(f"n_bath must be >= 1, got {self.n_bath}")


@dataclass(frozen=True)
class TwoQubitConfig:
    omega1: float
    omega2: float
    omega_a: float
    omega_b: float
    eps1: float
    eps2: float
    delta: float
    m_bath: int
    n_bath: int
    temperature: float
    bath_interacting: bool
    scenario: Scenario = Scenario.GLOBAL
    coupling_axis: CouplingAxis = CouplingAxis.ZZ

    def __post_init__(self):
        if not self.temperature > 0:
            raise NonPositiveTemperature(f"temperature must be > 0, got {self.temperature}")
        if self.m_bath < 1 or self.n_bath < 1:
            raise InvalidSector(f"bath sizes must be >= 1, got M={self.m_bath}, N={self.n_bath}")

    def local_configs(self) -> tuple[ModelConfig, ModelConfig]:
        """The two single-qubit models whose maps make up the local scenario."""
        a = ModelConfig(self.omega1, self.omega_a, self.eps1, self.m_bath,
                        self.temperature, self.bath_interacting)
        b = ModelConfig(self.omega2, self.omega_b, self.eps2, self.n_bath,
                        self.temperature, self.bath_interacting)
        return a, b

    def with_scenario(self, scenario: Scenario) -> "TwoQubitConfig":
        return replace(self, scenario=scenario)


AnyConfig = Union[ModelConfig, TwoQubitConfig]


@dataclass(frozen=True)
class SectorHamiltonian:
    sector_labels: tuple[SectorSpec, ...]
    h: np.ndarray
    dims: tuple[int, ...]


def bath_sector_h(omega: float, n: int, two_j: int, interacting: bool) -> np.ndarray:
    """Bath Hamiltonian restricted to one sector (diagonal in ``|j, m>``)."""
    ops = collective_ops(two_j)
    if interacting:
        return omega * (ops.jplus @ ops.jminus / n - 0.5 * np.eye(two_j + 1))
    return (omega / n) * ops.jz


def _coupling(eps: float, n: int, two_j: int) -> tuple[np.ndarray, np.ndarray]:
    ops = collective_ops(two_j)
    g = eps / np.sqrt(n)
    return g * ops.jx, g * ops.jy


def single_qubit_sector_h(cfg: ModelConfig, sector: SectorSpec) -> SectorHamiltonian:
    check_sector(cfg.n_bath, sector.two_j)
    d = sector.dim
    h_e = bath_sector_h(cfg.omega, cfg.n_bath, sector.two_j, cfg.bath_interacting)
    jx, jy = _coupling(cfg.epsilon, cfg.n_bath, sector.two_j)
    h = (0.5 * cfg.omega0) * np.kron(SZ, np.eye(d)) + np.kron(I2, h_e)
    h = h + np.kron(SX, jx) + np.kron(SY, jy)
    return SectorHamiltonian((sector,), h, (2, d))


def two_qubit_global_sector_h(cfg: TwoQubitConfig, s1: SectorSpec, s2: SectorSpec) -> SectorHamiltonian:
    if cfg.scenario is not Scenario.GLOBAL:
        raise ScenarioMismatch("sector Hamiltonian is defined for the global scenario only")
    check_sector(cfg.m_bath, s1.two_j)
    check_sector(cfg.n_bath, s2.two_j)
    d1, d2 = s1.dim, s2.dim
    e1, e2 = np.eye(d1), np.eye(d2)

    def on(q1, q2, b1, b2):
        return reduce(np.kron, (q1, q2, b1, b2))

    c1 = SZ if cfg.coupling_axis is CouplingAxis.ZZ else SX
    h_e1 = bath_sector_h(cfg.omega_a, cfg.m_bath, s1.two_j, cfg.bath_interacting)
    h_e2 = bath_sector_h(cfg.omega_b, cfg.n_bath, s2.two_j, cfg.bath_interacting)
    jx1, jy1 = _coupling(cfg.eps1, cfg.m_bath, s1.two_j)
    jx2, jy2 = _coupling(cfg.eps2, cfg.n_bath, s2.two_j)

    h = (0.5 * cfg.omega1) * on(SZ, I2, e1, e2)
    h += (0.5 * cfg.omega2) * on(I2, SZ, e1, e2)
    h += (0.5 * cfg.delta) * on(c1, c1, e1, e2)
    h += on(I2, I2, h_e1, e2) + on(I2, I2, e1, h_e2)
    h += on(SX, I2, jx1, e2) + on(SY, I2, jy1, e2)
    h += on(I2, SX, e1, jx2) + on(I2, SY, e1, jy2)
    return SectorHamiltonian((s1, s2), h, (2, 2, d1, d2))


# --- brute force over individual spins -------------------------------------

def _site_op(op: np.ndarray, site: int, n_sites: int) -> sp.csr_matrix:
    left = sp.identity(2 ** site, dtype=complex, format="csr")
    right = sp.identity(2 ** (n_sites - site - 1), dtype=complex, format="csr")
    return sp.kron(sp.kron(left, sp.csr_matrix(op)), right, format="csr")


def _bath_terms(omega: float, sites: list[int], n_sites: int, interacting: bool):
    """Literal spin-by-spin bath Hamiltonian on the given sites."""
    n = len(sites)
    h = sp.csr_matrix((2 ** n_sites, 2 ** n_sites), dtype=complex)
    for i in sites:
        h = h + (omega / (2 * n)) * _site_op(SZ, i, n_sites)
    if interacting:
        for i in sites:
            for j in sites:
                if i == j:
                    continue
                xx = _site_op(SX, i, n_sites) @ _site_op(SX, j, n_sites)
                yy = _site_op(SY, i, n_sites) @ _site_op(SY, j, n_sites)
                h = h + (omega / (4 * n)) * (xx + yy)
    return h


def _coupling_terms(eps: float, center: int, sites: list[int], n_sites: int):
    g = eps / (2 * np.sqrt(len(sites)))
    h = sp.csr_matrix((2 ** n_sites, 2 ** n_sites), dtype=complex)
    for i in sites:
        h = h + g * (_site_op(SX, center, n_sites) @ _site_op(SX, i, n_sites)
                     + _site_op(SY, center, n_sites) @ _site_op(SY, i, n_sites))
    return h


def _check_size(n_spins: int) -> None:
    if n_spins > BRUTEFORCE_MAX_SPINS:
        raise TooLarge(f"{n_spins} spins exceed the brute-force cap of {BRUTEFORCE_MAX_SPINS}")


def bruteforce_bath_h(omega: float, n: int, interacting: bool) -> np.ndarray:
    """Bath Hamiltonian alone on the full 2**n space."""
    _check_size(n)
    return _bath_terms(omega, list(range(n)), n, interacting).toarray()


def bruteforce_full_h(cfg: AnyConfig) -> np.ndarray:
    """Full Hamiltonian on the product space of every spin.

    Site order: central qubit(s), then the spins of the first bath, then the
    spins of the second bath. The local scenario is the global Hamiltonian
    with the central-spin coupling switched off.
    """
    if isinstance(cfg, ModelConfig):
        n_sites = 1 + cfg.n_bath
        _check_size(n_sites)
        bath = list(range(1, n_sites))
        h = (0.5 * cfg.omega0) * _site_op(SZ, 0, n_sites)
        h = h + _bath_terms(cfg.omega, bath, n_sites, cfg.bath_interacting)
        h = h + _coupling_terms(cfg.epsilon, 0, bath, n_sites)
        return h.toarray()

    n_sites = 2 + cfg.m_bath + cfg.n_bath
    _check_size(n_sites)
    bath1 = list(range(2, 2 + cfg.m_bath))
    bath2 = list(range(2 + cfg.m_bath, n_sites))
    delta = cfg.delta if cfg.scenario is Scenario.GLOBAL else 0.0
    c = SZ if cfg.coupling_axis is CouplingAxis.ZZ else SX
    h = (0.5 * cfg.omega1) * _site_op(SZ, 0, n_sites) + (0.5 * cfg.omega2) * _site_op(SZ, 1, n_sites)
    h = h + (0.5 * delta) * (_site_op(c, 0, n_sites) @ _site_op(c, 1, n_sites))
    h = h + _bath_terms(cfg.omega_a, bath1, n_sites, cfg.bath_interacting)
    h = h + _bath_terms(cfg.omega_b, bath2, n_sites, cfg.bath_interacting)
    h = h + _coupling_terms(cfg.eps1, 0, bath1, n_sites)
    h = h + _coupling_terms(cfg.eps2, 1, bath2, n_sites)
    return h.toarray()
