"""Classical and quantum relative entropies, in nats.

Divergences are returned as plain floats; ``math.inf`` is a legitimate
result when the first argument's support leaves the second's.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatch, LengthMismatch
from .matkernel import DEFAULT_DIM_CAP, as_matrix, herm_eig
from .measurement import Povm, measure, pinch
from .quantum_state import KERNEL_TOL, spectral_pvm_of_power, tensor_power

SUPPORT_TOL = 1e-10


def kl_divergence(p, q) -> float:
    """``sum_i p_i ln(p_i / q_i)`` with ``0 ln(0/q) = 0`` and ``p > 0 = q`` giving inf."""
    p = np.asarray(getattr(p, "probs", p), dtype=float)
    q = np.asarray(getattr(q, "probs", q), dtype=float)
    if p.shape != q.shape:
        raise LengthMismatch(f"distributions have lengths {p.size} and {q.size}")
    live = p > 0
    if np.any(q[live] <= 0):
        return math.inf
    value = float(np.sum(p[live] * (np.log(p[live]) - np.log(q[live]))))
    return max(value, 0.0) if value > -1e-12 else value


def _spectrum(state, mat):
    """Eigendecomposition plus the eigenvalue floor below which a direction is kernel.

    Precomputed product spectra have exact zeros, so their floor is zero.
    """
    if getattr(state, "spectrum", None) is not None:
        return state.spectrum, 0.0
    return herm_eig(mat), KERNEL_TOL


def quantum_relative_entropy(sigma, rho, support_tol: float = SUPPORT_TOL) -> float:
    """Umegaki relative entropy ``Tr[sigma (ln sigma - ln rho)]``.

    Each logarithm is taken in its own eigenbasis and only on the support.
    Returns inf when ``Tr[sigma K] > support_tol`` for the projector ``K``
    onto the kernel of ``rho``. Kernel eigenvalues are those at or below
    ``KERNEL_TOL`` (exact zeros for tensor-power states); an absolute cut at
    ``support_tol`` would swallow the genuine small eigenvalues of powers.
    """
    s = as_matrix(sigma)
    r = as_matrix(rho)
    if s.shape != r.shape:
        raise DimensionMismatch(f"shapes {s.shape} and {r.shape} differ")
    es, s_floor = _spectrum(sigma, s)
    er, r_floor = _spectrum(rho, r)

    # Diagonal of sigma in rho's eigenbasis: <v_i| sigma |v_i>.
    weights = np.einsum("ji,jk,ki->i", er.eigenvectors.conj(), s, er.eigenvectors).real
    kernel = er.eigenvalues <= r_floor
    if weights[kernel].sum() > support_tol:
        return math.inf

    sv = es.eigenvalues[es.eigenvalues > s_floor]
    s_log_s = float(np.sum(sv * np.log(sv)))
    s_log_r = float(np.sum(weights[~kernel] * np.log(er.eigenvalues[~kernel])))
    value = s_log_s - s_log_r
    return max(value, 0.0) if value > -1e-9 else value


def measured_divergence(m: Povm, sigma, rho) -> float:
    """KL divergence between the outcome distributions of ``m`` on ``sigma`` and ``rho``."""
    return kl_divergence(measure(m, sigma), measure(m, rho))


def pinched_divergence(
    rho, sigma, n: int, cluster_tol: float = 1e-9, dim_cap: int = DEFAULT_DIM_CAP
) -> float:
    """``D(E_{rho^n}(sigma^n) || rho^n)``, the pinched divergence of n copies."""
    pvm = spectral_pvm_of_power(rho, n, cluster_tol, dim_cap)
    sn = tensor_power(sigma, n, dim_cap)
    rn = tensor_power(rho, n, dim_cap)
    return quantum_relative_entropy(pinch(pvm, sn.mat), rn.mat)
