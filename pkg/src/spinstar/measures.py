"""Scalar diagnostics of reduced states and trajectories.

Trace distance, von Neumann entropy, the quantum speed limit time built
from time-averaged generator norms, Wootters concurrence and quantum
discord with a grid-plus-refinement search over projective measurements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .dynamics import Trajectory
from .errors import (DimensionMismatch, ImpureInitialState, InvalidState,
                     MissingGenerators, NonUniformGrid)
from .models import SY
from .numerics import hermitian_norms_batch

_SYSY = np.kron(SY, SY)
_SWAP = np.eye(4)[[0, 2, 1, 3]]

DISCORD_GRID = (61, 121)
DISCORD_STARTS = 4
# fidelities this close to one are rounding noise of a stationary state
FIDELITY_SNAP = 1e-12


@dataclass(frozen=True)
class QslResult:
    tau: float
    bures_angle: float
    lambda_op: float
    lambda_hs: float
    lambda_tr: float
    tau_qsl: float


@dataclass(frozen=True)
class DiscordResult:
    discord: float
    optimal_theta: float
    optimal_phi: float
    grid_value: float
    conditional_entropy: float


def trace_distance(rho1, rho2) -> float:
    rho1 = np.asarray(rho1, dtype=complex)
    rho2 = np.asarray(rho2, dtype=complex)
    if rho1.shape != rho2.shape:
        raise DimensionMismatch(f"shapes {rho1.shape} and {rho2.shape} differ")
    if rho1.tobytes() > rho2.tobytes():
        # fixed argument order makes the result exactly symmetric
        rho1, rho2 = rho2, rho1
    diff = rho1 - rho2
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T)))))


def trace_distances(states1, states2) -> np.ndarray:
    """Trace distance between two stacks of states, elementwise."""
    diff = np.asarray(states1, dtype=complex) - np.asarray(states2, dtype=complex)
    diff = 0.5 * (diff + np.conj(np.swapaxes(diff, -1, -2)))
    return 0.5 * np.abs(np.linalg.eigvalsh(diff)).sum(axis=-1)


def _log(x, base: str):
    if base == "natural":
        return np.log(x)
    if base == "two":
        return np.log2(x)
    raise ValueError(f"unknown log base {base!r}; use 'natural' or 'two'")


def entropy_from_eigenvalues(lam, base: str = "natural") -> float:
    lam = np.asarray(lam, dtype=float)
    if lam.min() < -1e-9:
        raise InvalidState(f"negative eigenvalue {lam.min():.3e}")
    lam = lam[lam > 0]
    return float(-np.sum(lam * _log(lam, base))) + 0.0  # no signed zero for pure states


def von_neumann_entropy(rho, base: str = "natural") -> float:
    """``-Tr rho log rho``; eigenvalues in [-1e-9, 0) are treated as zero."""
    rho = np.asarray(rho, dtype=complex)
    if abs(np.trace(rho) - 1) > 1e-8:
        raise InvalidState(f"trace {np.trace(rho).real:.10g} is not 1")
    return entropy_from_eigenvalues(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)), base)


def entropies(states, base: str = "natural") -> np.ndarray:
    return np.array([von_neumann_entropy(s, base) for s in states])


# --- quantum speed limit -----------------------------------------------------

def _check_qsl_inputs(traj: Trajectory, psi0) -> np.ndarray:
    if traj.generators is None:
        raise MissingGenerators("trajectory was computed without generators")
    psi0 = np.asarray(psi0, dtype=complex).ravel()
    if abs(np.vdot(psi0, psi0).real - 1) > 1e-8:
        raise ImpureInitialState("initial vector is not normalised")
    if np.max(np.abs(traj.states[0] - np.outer(psi0, psi0.conj()))) > 1e-8:
        raise ImpureInitialState("trajectory does not start in the given pure state")
    t = np.asarray(traj.times, dtype=float)
    if abs(t[0]) > 1e-12:
        raise NonUniformGrid("quadrature grid must start at t = 0")
    if t.size > 1 and kernels.uniform_step(t) is None:
        raise NonUniformGrid("quadrature grid is not uniform")
    return psi0


def _qsl_from(tau, fidelity, lam) -> QslResult:
    f = min(1.0, max(0.0, float(fidelity)))
    if f > 1.0 - FIDELITY_SNAP:
        f = 1.0
    angle = math.acos(math.sqrt(f))
    sin2 = 1.0 - f
    lam_op, lam_hs, lam_tr = (float(x) for x in lam)
    if sin2 == 0.0:
        tq = 0.0
    else:
        inv = [1.0 / x if x > 0 else math.inf for x in (lam_op, lam_tr, lam_hs)]
        tq = max(inv) * sin2
    return QslResult(float(tau), angle, lam_op, lam_hs, lam_tr, tq)


def qsl_curve(traj: Trajectory, psi0, indices: Optional[Sequence[int]] = None) -> list[QslResult]:
    """QSL results with the driving time set to each requested grid time.

    Norm integrals are accumulated once with the composite trapezoidal rule,
    so asking for many driving times costs no more than asking for the last.
    Each interval's contribution is floored at the norm of the state change
    across it, which the exact integral can never undercut; near kinks of
    the integrand this keeps the speed-limit bound from being broken by
    quadrature error.
    """
    psi0 = _check_qsl_inputs(traj, psi0)
    t = np.asarray(traj.times, dtype=float)
    norms = hermitian_norms_batch(traj.generators)  # (T, 3): op, hs, tr
    cum = np.zeros_like(norms)
    if t.size > 1:
        trap = 0.5 * (norms[1:] + norms[:-1]) * np.diff(t)[:, None]
        chord = hermitian_norms_batch(np.diff(traj.states, axis=0))
        cum[1:] = np.cumsum(np.maximum(trap, chord), axis=0)
    fid = np.einsum("i,tij,j->t", psi0.conj(), traj.states, psi0).real
    if indices is None:
        indices = range(t.size)
    out = []
    for k in indices:
        lam = norms[k] if t[k] == 0 else cum[k] / t[k]
        out.append(_qsl_from(t[k], fid[k], lam))
    return out


def qsl_time(traj: Trajectory, psi0, tau: float) -> QslResult:
    """QSL time for driving time ``tau``, which must be a point of the grid."""
    t = np.asarray(traj.times, dtype=float)
    k = int(np.argmin(np.abs(t - tau)))
    if abs(t[k] - tau) > 1e-9 * max(1.0, abs(tau)):
        raise NonUniformGrid(f"tau={tau} is not a point of the trajectory grid")
    return qsl_curve(traj, psi0, [k])[0]


# --- two-qubit correlations --------------------------------------------------

def _check_two_qubit(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidState(f"expected a 4x4 density matrix, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-8 or abs(np.trace(rho) - 1) > 1e-8:
        raise InvalidState("not a Hermitian unit-trace matrix")
    return 0.5 * (rho + rho.conj().T)


def _psd_sqrt(a: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(a)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def concurrence(rho) -> float:
    rho = _check_two_qubit(rho)
    if np.linalg.eigvalsh(rho).min() < -1e-8:
        raise InvalidState("state is not positive semidefinite")
    tilde = _SYSY @ rho.conj() @ _SYSY
    s = _psd_sqrt(rho)
    r = s @ tilde @ s
    lam = np.sort(np.sqrt(np.clip(np.linalg.eigvalsh(0.5 * (r + r.conj().T)), 0.0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def reduced_qubits(rho) -> tuple[np.ndarray, np.ndarray]:
    """Marginals ``(rho_P, rho_Q)`` of a two-qubit state."""
    r = np.asarray(rho).reshape(2, 2, 2, 2)
    return np.einsum("aqbq->ab", r), np.einsum("paps->as", r)


def conditional_entropy(rho, theta: float, phi: float) -> float:
    """Average entropy (bits) of qubit P after measuring Q along (theta, phi)."""
    return float(kernels.conditional_entropy_grid(rho, [theta], [phi])[0, 0])


def _golden(f, lo: float, hi: float, xtol: float = 1e-10):
    g = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _grid_minima(vals: np.ndarray, count: int) -> np.ndarray:
    """Flat indices of the ``count`` lowest local minima of a (theta, phi) grid.

    phi wraps around; the theta = 0 row is one point on the sphere, so only
    its first cell is eligible. Ties keep the smaller flat index.
    """
    n_theta = vals.shape[0]
    padded = np.pad(vals, ((1, 1), (0, 0)), constant_values=np.inf)
    is_min = np.ones(vals.shape, dtype=bool)
    for dt in (-1, 0, 1):
        for dp in (-1, 0, 1):
            if dt or dp:
                is_min &= vals <= np.roll(padded, dp, axis=1)[1 + dt:n_theta + 1 + dt]
    is_min[0, 1:] = False
    idx = np.flatnonzero(is_min)
    return idx[np.argsort(vals.flat[idx], kind="stable")][:count]


def _polish(rho, th: float, ph: float, best: float, h_th: float, h_ph: float, tol: float):
    # alternating golden-section searches within one grid cell of the start
    for _ in range(100):
        prev = best
        t_new, v = _golden(lambda x: conditional_entropy(rho, x, ph),
                           max(0.0, th - h_th), min(np.pi / 2, th + h_th))
        if v < best:
            th, best = float(t_new), v
        p_new, v = _golden(lambda x: conditional_entropy(rho, th, x), ph - h_ph, ph + h_ph)
        if v < best:
            ph, best = float(p_new % (2 * np.pi)), v
        if prev - best < tol:
            break
    return th, ph, best


def quantum_discord(rho, measured: str = "Q", grid: tuple[int, int] = DISCORD_GRID,
                    tol: float = 1e-8, starts: int = DISCORD_STARTS) -> DiscordResult:
    """Quantum discord in bits with a projective measurement on one qubit.

    The conditional entropy is evaluated on a uniform (theta, phi) grid over
    [0, pi/2] x [0, 2pi). The ``starts`` lowest local minima of the grid are
    each polished by alternating golden-section searches until a sweep
    improves by less than ``tol``, and the lowest result is kept. Several
    starts matter because distinct basins can sit within 1e-4 of each other
    while the grid resolves them only to that level.
    """
    rho = _check_two_qubit(rho)
    if measured == "P":
        rho = _SWAP @ rho @ _SWAP
    elif measured != "Q":
        raise ValueError("measured must be 'P' or 'Q'")
    n_theta, n_phi = grid
    thetas = np.linspace(0.0, np.pi / 2, n_theta)
    phis = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    vals = kernels.conditional_entropy_grid(rho, thetas, phis)
    h_th, h_ph = thetas[1] - thetas[0], phis[1] - phis[0]
    grid_value = float(vals.min())
    th = ph = best = None
    for k in _grid_minima(vals, max(1, starts)):
        cand = _polish(rho, float(thetas[k // n_phi]), float(phis[k % n_phi]),
                       float(vals.flat[k]), h_th, h_ph, tol)
        if best is None or cand[2] < best:
            th, ph, best = cand
    _, rho_q = reduced_qubits(rho)
    s_q = von_neumann_entropy(rho_q, "two")
    s_pq = von_neumann_entropy(rho, "two")
    return DiscordResult(float(s_q - s_pq + best), th, ph, grid_value, float(best))
