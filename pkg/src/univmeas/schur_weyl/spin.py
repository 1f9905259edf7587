"""Total-spin sectors of n spin-1/2 particles by successive angular-momentum coupling."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..matkernel import DEFAULT_DIM_CAP, check_dim
from ..measurement import Pvm

_UP = np.array([1.0, 0.0])
_DOWN = np.array([0.0, 1.0])


def _couple(two_j: int, basis: np.ndarray):
    """Couple one multiplet ``|j, M>`` (columns M = j..-j) with a further spin-1/2.

    Returns the resulting ``(two_J, basis)`` multiplets via Clebsch-Gordan
    coefficients; the new spin is the last tensor factor.
    """

    def ket(two_m, spin):
        if abs(two_m) > two_j:
            return 0.0
        return np.kron(basis[:, (two_j - two_m) // 2], spin)

    out = []
    for two_J, sign in ((two_j + 1, +1), (two_j - 1, -1)):
        if two_J < 0:
            continue
        cols = []
        for two_M in range(two_J, -two_J - 1, -2):
            plus = np.sqrt((two_j + two_M + 1) / (2 * (two_j + 1)))
            minus = np.sqrt((two_j - two_M + 1) / (2 * (two_j + 1)))
            if sign > 0:
                col = plus * ket(two_M - 1, _UP) + minus * ket(two_M + 1, _DOWN)
            else:
                col = -minus * ket(two_M - 1, _UP) + plus * ket(two_M + 1, _DOWN)
            cols.append(col)
        out.append((two_J, np.stack(cols, axis=1)))
    return out


def coupled_multiplets(n: int, dim_cap: int = DEFAULT_DIM_CAP) -> list[tuple[int, np.ndarray]]:
    """All ``(2j, basis)`` multiplets of ``n`` coupled spins, in coupling-tree order."""
    check_dim(2**n, dim_cap)
    multiplets = [(1, np.eye(2))]
    for _ in range(n - 1):
        multiplets = [m for tj, b in multiplets for m in _couple(tj, b)]
    return multiplets


def _spin_label(two_j: int) -> str:
    return f"j={Fraction(two_j, 2)}"


def spin_coupling_pvm(n: int, dim_cap: int = DEFAULT_DIM_CAP) -> Pvm:
    """Projectors onto total-spin-j sectors of ``(C^2)^{(x)n}``, largest j first."""
    sectors: dict[int, np.ndarray] = {}
    for two_j, basis in coupled_multiplets(n, dim_cap):
        proj = basis @ basis.T
        sectors[two_j] = sectors.get(two_j, 0) + proj
    keys = sorted(sectors, reverse=True)
    return Pvm([sectors[t].astype(complex) for t in keys], [_spin_label(t) for t in keys])
