"""Dense complex-matrix kernel.

Every operator in the package (states, projectors, permutation actions) is
held as a dense ``complex128`` numpy array. This module provides the handful
of primitives the rest of the code builds on, plus the matrix JSON format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DimensionMismatch, DimensionOverflow, NotHermitian, UnivMeasError

DEFAULT_DIM_CAP = 4096
HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a square complex array (unwraps objects with ``.mat``)."""
    a = getattr(a, "mat", a)
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise UnivMeasError("matrix has non-finite entries")
    return a


def hermitian_defect(a: np.ndarray) -> float:
    """Relative Frobenius distance ``||A - A^dag|| / max(1, ||A||)``."""
    return float(np.linalg.norm(a - a.conj().T) / max(1.0, np.linalg.norm(a)))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    return hermitian_defect(as_matrix(a)) <= tol


@dataclass(frozen=True)
class HermEig:
    """Eigendecomposition ``A = V diag(w) V^dag`` with ``w`` ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def herm_eig(a, tol: float = HERMITIAN_TOL) -> HermEig:
    """Hermitian eigendecomposition.

    Objects carrying a precomputed ``spectrum`` (tensor-power states) return
    it unchanged.

    Raises
    ------
    NotHermitian
        If the relative Frobenius defect ``||A - A^dag||`` exceeds ``tol``.
    """
    spectrum = getattr(a, "spectrum", None)
    if spectrum is not None:
        return spectrum
    a = as_matrix(a)
    defect = hermitian_defect(a)
    if defect > tol:
        raise NotHermitian(f"matrix is not Hermitian (relative defect {defect:.3e})")
    # Symmetrize so eigh sees an exactly Hermitian input.
    w, v = np.linalg.eigh((a + a.conj().T) / 2)
    return HermEig(w, v)


def check_dim(dim: int, dim_cap: int = DEFAULT_DIM_CAP) -> None:
    if dim > dim_cap:
        raise DimensionOverflow(f"dimension {dim} exceeds cap {dim_cap}")


def kron(a, b, dim_cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """Kronecker product, index convention ``out[i*db + j, k*db + l] = a[i,k] b[j,l]``."""
    a = as_matrix(a)
    b = as_matrix(b)
    check_dim(a.shape[0] * b.shape[0], dim_cap)
    return np.kron(a, b)


def kron_power(a, n: int, dim_cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    a = as_matrix(a)
    if n < 1:
        raise ValueError("n must be a positive integer")
    check_dim(a.shape[0] ** n, dim_cap)
    return reduce(np.kron, [a] * n)


def mat_func_on_support(a, func, support_tol: float = 1e-12):
    """Apply ``func`` to the eigenvalues of a Hermitian matrix above ``support_tol``.

    Returns the transformed matrix and a boolean mask of the retained
    eigen-directions (in the ascending eigenbasis).
    """
    eig = herm_eig(a)
    support = eig.eigenvalues > support_tol
    vals = np.zeros_like(eig.eigenvalues)
    vals[support] = func(eig.eigenvalues[support])
    v = eig.eigenvectors
    out = (v * vals) @ v.conj().T
    return (out + out.conj().T) / 2, support


def mat_log_on_support(a, support_tol: float = 1e-12) -> np.ndarray:
    """Natural matrix logarithm restricted to the support of a PSD matrix.

    Eigenvalues at or below ``support_tol`` contribute zero, so the zero
    matrix maps to the zero matrix.
    """
    out, _ = mat_func_on_support(a, np.log, support_tol)
    return out


def support_mask(a, support_tol: float = 1e-12) -> np.ndarray:
    """Boolean mask over the ascending eigenbasis marking eigenvalues > ``support_tol``."""
    return herm_eig(a).eigenvalues > support_tol


def comm_norm(a, b) -> float:
    """Frobenius norm of the commutator ``AB - BA``."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return float(np.linalg.norm(a @ b - b @ a))


def matrix_to_dict(a) -> dict:
    a = as_matrix(a)
    return {"dim": int(a.shape[0]), "re": a.real.tolist(), "im": a.imag.tolist()}


def matrix_from_dict(obj: dict) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros((dim, dim))), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise UnivMeasError(f"malformed matrix object: {exc}") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise UnivMeasError(f"matrix parts must be {dim}x{dim}, got {re.shape} and {im.shape}")
    return re + 1j * im


def load_matrix(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UnivMeasError(f"{path}: invalid JSON ({exc})") from exc
    return matrix_from_dict(obj)


def dump_matrix(a, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_dict(a), fh)
