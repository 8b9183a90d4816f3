"""Total-spin (Dicke) sectors of a bath of N spin-1/2 particles.

A spin is carried as ``two_j`` (twice the spin) so half-integer values stay
integers. Inside a sector the basis is ``|j, m>`` with ``m`` running from
``j`` down to ``-j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .errors import InvalidSector


@dataclass(frozen=True)
class SectorSpec:
    two_j: int
    multiplicity: int

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def dim(self) -> int:
        return self.two_j + 1


@dataclass(frozen=True)
class CollectiveOps:
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray
    jplus: np.ndarray
    jminus: np.ndarray


def multiplicity(n: int, two_j: int) -> int:
    """Number of spin-j irreps in the N-fold product of spin-1/2 (exact integer)."""
    check_sector(n, two_j)
    k = (n - two_j) // 2
    return comb(n, k) - (comb(n, k - 1) if k >= 1 else 0)


def check_sector(n: int, two_j: int) -> None:
    if n < 1:
        raise InvalidSector(f"bath size must be >= 1, got {n}")
    if two_j < 0 or two_j > n or (n - two_j) % 2:
        raise InvalidSector(f"two_j={two_j} is not a sector of N={n} spins")


def sectors(n: int) -> list[SectorSpec]:
    """All sectors of an N-spin bath, largest j first."""
    if n < 1:
        raise InvalidSector(f"bath size must be >= 1, got {n}")
    return [SectorSpec(tj, multiplicity(n, tj)) for tj in range(n, -1, -2)]


def m_values(two_j: int) -> np.ndarray:
    """Magnetic quantum numbers in basis order (descending)."""
    return (two_j - 2 * np.arange(two_j + 1)) / 2


@lru_cache(maxsize=512)
def _ops(two_j: int) -> CollectiveOps:
    j = two_j / 2
    m = m_values(two_j)
    # <j, m+1 | J+ | j, m>: J+ maps column k (m) to row k-1 (m+1)
    up = np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
    jplus = np.diag(up, k=1).astype(complex)
    jminus = jplus.T.copy()
    jz = np.diag(m).astype(complex)
    jx = 0.5 * (jplus + jminus)
    jy = -0.5j * (jplus - jminus)
    for a in (jx, jy, jz, jplus, jminus):
        a.setflags(write=False)
    return CollectiveOps(jx, jy, jz, jplus, jminus)


def collective_ops(two_j: int) -> CollectiveOps:
    """Spin-j matrices ``Jx, Jy, Jz, J+, J-`` in the ``|j, m>`` basis (read-only)."""
    if two_j < 0:
        raise InvalidSector(f"two_j must be nonnegative, got {two_j}")
    return _ops(int(two_j))
