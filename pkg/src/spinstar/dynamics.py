"""Exact reduced dynamics of central spins coupled to thermal spin baths.

Each bath is split into total-spin sectors. Every sector Hamiltonian is
diagonalised once; the reduced state is then a finite sum of exponentials

    rho_S(t)[a, b] = sum_k c_k[a, b] exp(-i w_k t),

with frequencies ``w_k`` the Bohr frequencies of the sector spectra. The
coefficients are assembled per sector (weighted by multiplicity and
Boltzmann factor) and the sum is evaluated on the whole time grid by
:func:`spinstar.kernels.expsum`. Time derivatives come for free from the
same expansion by multiplying each coefficient with ``-i w_k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import kernels
from .collective import SectorSpec, m_values, sectors
from .errors import (EmptyTimeGrid, InvalidState, NonPositiveTemperature,
                     PositivityViolation, ScenarioMismatch)
from .models import (ModelConfig, Scenario, TwoQubitConfig,
                     single_qubit_sector_h, two_qubit_global_sector_h)
from .numerics import hermitian_eig

STATE_TOL = 1e-10
POSITIVITY_TOL = 1e-9


@dataclass(frozen=True)
class ThermalWeights:
    """Boltzmann factors ``exp(-E/T)`` per sector, in ``|j, m>`` basis order.

    ``partition_function`` counts every sector with its multiplicity.
    """

    sectors: tuple[SectorSpec, ...]
    factors: tuple[np.ndarray, ...]
    partition_function: float

    def populations(self) -> list[np.ndarray]:
        """Occupation probability of each ``|j, m>`` state of one irrep copy
        times the sector multiplicity, so everything sums to one."""
        return [s.multiplicity * f / self.partition_function
                for s, f in zip(self.sectors, self.factors)]


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    generators: Optional[np.ndarray] = None

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states differ in length")
        if self.generators is not None and len(self.generators) != len(self.times):
            raise ValueError("times and generators differ in length")

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class QubitSuperoperator:
    """Linear map on single-qubit operators acting on row-stacked vectors.

    ``mat[2*a + b, 2*c + d]`` is the coefficient of ``|a><b|`` in the image of
    ``|c><d|``.
    """

    mat: np.ndarray

    def apply(self, rho) -> np.ndarray:
        return (self.mat @ np.asarray(rho, dtype=complex).reshape(4)).reshape(2, 2)


def sector_energies(omega: float, n: int, two_j: int, interacting: bool) -> np.ndarray:
    """Analytic bath energies of one sector, ``m`` descending."""
    m = m_values(two_j)
    if interacting:
        j = two_j / 2
        return omega * ((j * (j + 1) - m * (m - 1)) / n - 0.5)
    return (omega / n) * m


def thermal_weights(omega: float, n: int, temperature: float, interacting: bool) -> ThermalWeights:
    if not temperature > 0:
        raise NonPositiveTemperature(f"temperature must be > 0, got {temperature}")
    secs = tuple(sectors(n))
    factors = tuple(np.exp(-sector_energies(omega, n, s.two_j, interacting) / temperature)
                    for s in secs)
    z = float(sum(s.multiplicity * float(np.sum(f)) for s, f in zip(secs, factors)))
    return ThermalWeights(secs, factors, z)


# --- validation --------------------------------------------------------------

def validate_state(rho, dim: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dim, dim):
        raise InvalidState(f"expected a {dim}x{dim} density matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > STATE_TOL:
        raise InvalidState("initial state is not Hermitian")
    if abs(np.trace(rho) - 1) > STATE_TOL:
        raise InvalidState(f"initial state has trace {np.trace(rho).real:.12g}")
    if np.linalg.eigvalsh(rho).min() < -STATE_TOL:
        raise InvalidState("initial state is not positive semidefinite")
    return rho


def _time_grid(times) -> np.ndarray:
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if t.size == 0:
        raise EmptyTimeGrid("time grid is empty")
    if t.ndim != 1 or np.any(np.diff(t) < 0):
        raise ValueError("times must be a one-dimensional ascending sequence")
    return t


def check_physical(states: np.ndarray) -> None:
    """Raise :class:`PositivityViolation` if any state dips below -1e-9."""
    states = np.asarray(states)
    herm = 0.5 * (states + np.conj(np.swapaxes(states, -1, -2)))
    low = float(np.linalg.eigvalsh(herm).min())
    if low < -POSITIVITY_TOL:
        raise PositivityViolation(f"reduced state has eigenvalue {low:.3e}")


# --- sector spectral data ----------------------------------------------------

def block_eig(h: np.ndarray):
    """Eigendecomposition that first splits ``h`` into invariant blocks.

    The sparsity graph of ``h`` is cut into connected components and each
    component is diagonalised on its own. The returned eigenvector matrix is
    dense but exactly zero outside the blocks, which keeps the exponential
    expansions sparse.
    """
    d = h.shape[0]
    n_comp, labels = connected_components(csr_matrix(h != 0), directed=False)
    evals = np.empty(d)
    evecs = np.zeros((d, d), dtype=complex)
    col = 0
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        w, v = hermitian_eig(h[np.ix_(idx, idx)])
        evals[col:col + idx.size] = w
        evecs[idx, col:col + idx.size] = v
        col += idx.size
    return evals, evecs


@dataclass(frozen=True)
class _SectorData:
    evals: np.ndarray
    evecs: np.ndarray
    n_sys: int
    bath_pop: np.ndarray  # weighted bath populations, length d / n_sys


@lru_cache(maxsize=4)
def _single_sectors(cfg: ModelConfig) -> tuple[_SectorData, ...]:
    tw = thermal_weights(cfg.omega, cfg.n_bath, cfg.temperature, cfg.bath_interacting)
    out = []
    for sec, pop in zip(tw.sectors, tw.populations()):
        w, v = block_eig(single_qubit_sector_h(cfg, sec).h)
        out.append(_SectorData(w, v, 2, pop))
    return tuple(out)


@lru_cache(maxsize=2)
def _global_sectors(cfg: TwoQubitConfig) -> tuple[_SectorData, ...]:
    tw1 = thermal_weights(cfg.omega_a, cfg.m_bath, cfg.temperature, cfg.bath_interacting)
    tw2 = thermal_weights(cfg.omega_b, cfg.n_bath, cfg.temperature, cfg.bath_interacting)
    out = []
    for s1, p1 in zip(tw1.sectors, tw1.populations()):
        for s2, p2 in zip(tw2.sectors, tw2.populations()):
            w, v = block_eig(two_qubit_global_sector_h(cfg, s1, s2).h)
            out.append(_SectorData(w, v, 4, np.kron(p1, p2)))
    return tuple(out)


def _sector_terms(sd: _SectorData, inits: Sequence[np.ndarray], upper: bool = False):
    """Exponential expansion of one sector.

    For every initial system operator ``X`` in ``inits`` the reduced operator
    ``Tr_E[U (X (x) rho_E) U^dagger]`` restricted to this sector is written as
    ``sum_k coef[k] exp(-i freq[k] t)``. Channels are ordered
    ``(init, a, b)``. Diagonal (zero-frequency) terms are merged into one.
    With ``upper`` only eigenvalue pairs ``mu < nu`` are kept; for a
    Hermitian ``X`` the rest are their conjugate partners.
    """
    n = sd.n_sys
    d = sd.evals.size
    de = d // n
    v = sd.evecs
    w = v.reshape(n, de, d)
    amats = []
    for x in inits:
        # (X (x) diag(pop)) V, then V^dagger on the left
        xv = np.einsum("ab,e,bek->aek", x, sd.bath_pop, w).reshape(d, d)
        amats.append(v.conj().T @ xv)
    mask = np.zeros((d, d), dtype=bool)
    for a in amats:
        mask |= a != 0
    rows, cols = np.nonzero(mask)
    gvals = np.empty((n, n, rows.size), dtype=complex)
    gmask = np.zeros(rows.size, dtype=bool)
    for a in range(n):
        for b in range(n):
            # G_ab[mu, nu] = sum_e W[a, e, mu] conj(W[b, e, nu])
            g = (w[a].T @ w[b].conj())[rows, cols]
            gvals[a, b] = g
            gmask |= g != 0
    rows, cols, gvals = rows[gmask], cols[gmask], gvals[:, :, gmask]
    coefs = np.empty((rows.size, len(inits) * n * n), dtype=complex)
    for u, a in enumerate(amats):
        av = a[rows, cols]
        coefs[:, u * n * n:(u + 1) * n * n] = (av[None, None, :] * gvals).reshape(n * n, -1).T
    freqs = sd.evals[rows] - sd.evals[cols]
    diag = rows == cols
    const = coefs[diag].sum(axis=0)
    keep = (rows < cols if upper else ~diag) & np.any(coefs != 0, axis=1)
    return freqs[keep], coefs[keep], const


def _expand(sector_data: Sequence[_SectorData], inits: Sequence[np.ndarray], upper: bool = False):
    freqs, coefs = [], []
    const = None
    for sd in sector_data:
        f, c, k = _sector_terms(sd, inits, upper)
        freqs.append(f)
        coefs.append(c)
        const = k if const is None else const + k
    return np.concatenate(freqs), np.concatenate(coefs), const


def _evaluate(sector_data, inits, times, derivative: bool, hermitian: bool = False):
    """Values (and optionally time derivatives) of every channel, shape (T, C).

    ``hermitian`` declares a single Hermitian initial operator, whose
    expansion is summed over half the eigenvalue pairs and completed by
    adding the conjugate transpose.
    """
    freqs, coefs, const = _expand(sector_data, inits, hermitian)
    n_ch = coefs.shape[1]
    # terms touch only a few channels (symmetry-protected zeros), so each
    # group of terms sharing a channel pattern is summed on its own columns
    nz = coefs != 0
    keys = np.packbits(nz, axis=1)
    _, group = np.unique(keys, axis=0, return_inverse=True)
    group = group.ravel()
    out = np.zeros((times.size, 2 * n_ch if derivative else n_ch), dtype=complex)
    for g in range(group.max() + 1 if group.size else 0):
        rows = np.flatnonzero(group == g)
        cols = np.flatnonzero(nz[rows[0]])
        if cols.size == 0:
            continue
        f = freqs[rows]
        c = coefs[np.ix_(rows, cols)]
        if derivative:
            c = np.concatenate([c, -1j * f[:, None] * c], axis=1)
            cols = np.concatenate([cols, cols + n_ch])
        out[:, cols] += kernels.expsum(f, c, times)
    vals = out[:, :n_ch]
    ders = out[:, n_ch:] if derivative else None
    if hermitian:
        n = int(round(np.sqrt(n_ch)))

        def complete(x):
            x = x.reshape(-1, n, n)
            return (x + np.conj(np.swapaxes(x, 1, 2))).reshape(-1, n_ch)
        vals = complete(vals)
        ders = complete(ders) if derivative else None
    return vals + const, ders


def _trajectory(sector_data, rho0, n, times, with_generators) -> Trajectory:
    vals, ders = _evaluate(sector_data, [rho0], times, with_generators, hermitian=True)
    states = vals.reshape(-1, n, n)
    check_physical(states)
    gens = ders.reshape(-1, n, n) if ders is not None else None
    return Trajectory(times, states, gens)


# --- public evolution API ----------------------------------------------------

def evolve_single(cfg: ModelConfig, rho0, times, with_generators: bool = False) -> Trajectory:
    """Reduced state of a single central spin on the given time grid."""
    rho0 = validate_state(rho0, 2)
    return _trajectory(_single_sectors(cfg), rho0, 2, _time_grid(times), with_generators)


def evolve_two_qubit_global(cfg: TwoQubitConfig, rho0, times,
                            with_generators: bool = False) -> Trajectory:
    """Reduced two-qubit state when both spins share one joint Hamiltonian."""
    if cfg.scenario is not Scenario.GLOBAL:
        raise ScenarioMismatch("global evolution requires scenario=GLOBAL")
    rho0 = validate_state(rho0, 4)
    return _trajectory(_global_sectors(cfg), rho0, 4, _time_grid(times), with_generators)


def _matrix_units() -> list[np.ndarray]:
    units = []
    for k in range(4):
        e = np.zeros((2, 2), dtype=complex)
        e[k // 2, k % 2] = 1.0
        units.append(e)
    return units


def qubit_map_series(cfg: ModelConfig, times, derivative: bool = False):
    """Superoperator matrices (and their time derivatives) on a time grid.

    Returns arrays of shape ``(T, 4, 4)``; the derivative entry is None
    unless requested.
    """
    t = _time_grid(times)
    if t[0] < 0:
        raise ValueError("times must be nonnegative")
    vals, ders = _evaluate(_single_sectors(cfg), _matrix_units(), t, derivative)
    # channel layout (unit, out) -> mat[out, unit]
    maps = vals.reshape(-1, 4, 4).transpose(0, 2, 1)
    dmaps = ders.reshape(-1, 4, 4).transpose(0, 2, 1) if ders is not None else None
    return maps, dmaps


def qubit_map(cfg: ModelConfig, t: float) -> QubitSuperoperator:
    maps, _ = qubit_map_series(cfg, [t])
    return QubitSuperoperator(maps[0])


def apply_product_map(sa: np.ndarray, sb: np.ndarray, rho) -> np.ndarray:
    """Apply ``Lambda_A (x) Lambda_B`` to a two-qubit operator (qubit A first)."""
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    sa4 = np.asarray(sa).reshape(*np.shape(sa)[:-2], 2, 2, 2, 2)
    sb4 = np.asarray(sb).reshape(*np.shape(sb)[:-2], 2, 2, 2, 2)
    out = np.einsum("...abcd,...efgh,cgdh->...aebf", sa4, sb4, r)
    return out.reshape(*out.shape[:-4], 4, 4)


def evolve_two_qubit_local(cfg_a: ModelConfig, cfg_b: ModelConfig, rho0, times,
                           with_generators: bool = False) -> Trajectory:
    """Two central spins with independent baths: product of single-qubit maps."""
    rho0 = validate_state(rho0, 4)
    t = _time_grid(times)
    sa, dsa = qubit_map_series(cfg_a, t, with_generators)
    sb, dsb = qubit_map_series(cfg_b, t, with_generators)
    states = apply_product_map(sa, sb, rho0)
    check_physical(states)
    gens = None
    if with_generators:
        gens = apply_product_map(dsa, sb, rho0) + apply_product_map(sa, dsb, rho0)
    return Trajectory(t, states, gens)


def evolve_two_qubit(cfg: TwoQubitConfig, rho0, times, with_generators: bool = False) -> Trajectory:
    """Dispatch on ``cfg.scenario``."""
    if cfg.scenario is Scenario.LOCAL:
        a, b = cfg.local_configs()
        return evolve_two_qubit_local(a, b, rho0, times, with_generators)
    return evolve_two_qubit_global(cfg, rho0, times, with_generators)


def evolve(cfg, rho0, times, with_generators: bool = False) -> Trajectory:
    if isinstance(cfg, ModelConfig):
        return evolve_single(cfg, rho0, times, with_generators)
    return evolve_two_qubit(cfg, rho0, times, with_generators)


def generator(cfg, rho0, t: float) -> np.ndarray:
    """Time derivative of the reduced state at time ``t`` (exact commutator route)."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    return evolve(cfg, rho0, [t], with_generators=True).generators[0]
