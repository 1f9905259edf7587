"""Density matrices, spectral PVMs, tensor powers and seeded random states."""

from __future__ import annotations

import itertools
import os
from functools import reduce
from dataclasses import dataclass, field

import numpy as np

from .errors import NotPSD, StateSpecError, TraceNotOne
from .matkernel import (
    DEFAULT_DIM_CAP,
    PSD_TOL,
    as_matrix,
    HermEig,
    check_dim,
    herm_eig,
    kron_power,
    load_matrix,
)
from .measurement import Pvm

TRACE_TOL = 1e-10
KERNEL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated quantum state. Build through :func:`validate_state`.

    ``spectrum`` optionally carries an eigendecomposition known to higher
    relative accuracy than one recomputed from ``mat`` (tensor powers).
    """

    mat: np.ndarray
    spectrum: HermEig | None = field(default=None, repr=False)

    def __post_init__(self):
        self.mat.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return herm_eig(self.mat).eigenvalues


def validate_state(mat) -> DensityMatrix:
    """Check Hermiticity, positivity and unit trace.

    Raises ``NotHermitian``, ``NotPSD`` or ``TraceNotOne``, in that order.
    """
    a = as_matrix(mat)
    eig = herm_eig(a)
    if eig.eigenvalues[0] < -PSD_TOL:
        raise NotPSD(f"minimum eigenvalue {eig.eigenvalues[0]:.3e} is negative")
    tr = np.trace(a).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceNotOne(f"trace is {tr:.12g}, expected 1")
    return DensityMatrix(np.array((a + a.conj().T) / 2))


class SpectralPvm(Pvm):
    """PVM of eigenprojectors with the eigenvalue attached to each element."""

    def __init__(self, elements, eigenvalues, labels=None):
        eigenvalues = tuple(float(x) for x in eigenvalues)
        if labels is None:
            labels = [f"eig={x:.6g}" for x in eigenvalues]
        super().__init__(elements, labels)
        self.eigenvalues = eigenvalues

    def reconstruct(self) -> np.ndarray:
        return sum(x * p for x, p in zip(self.eigenvalues, self.elements))


def _cluster(sorted_vals, tol, relative):
    """Group indices of an ascending array; neighbours within ``tol`` share a group."""
    groups = [[0]]
    for i in range(1, len(sorted_vals)):
        a, b = sorted_vals[i - 1], sorted_vals[i]
        scale = max(abs(a), abs(b)) if relative else 1.0
        if abs(b - a) <= tol * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def spectral_pvm(rho, cluster_tol: float = 1e-9) -> SpectralPvm:
    """Spectral measure of a Hermitian matrix.

    Eigenvalues within relative distance ``cluster_tol`` of their neighbour
    share one projector. Eigenvalues below ``1e-12`` form a separate kernel
    projector with eigenvalue 0.
    """
    eig = herm_eig(rho)
    w, v = eig.eigenvalues, eig.eigenvectors
    kernel = [i for i in range(len(w)) if abs(w[i]) <= KERNEL_TOL]
    rest = [i for i in range(len(w)) if abs(w[i]) > KERNEL_TOL]
    groups = [kernel] if kernel else []
    if rest:
        groups += [[rest[j] for j in g] for g in _cluster(w[rest], cluster_tol, relative=True)]
    projectors, values = [], []
    for g in groups:
        vecs = v[:, g]
        projectors.append(vecs @ vecs.conj().T)
        values.append(0.0 if g is kernel else float(np.mean(w[g])))
    return SpectralPvm(projectors, values)


def tensor_power(rho, n: int, dim_cap: int = DEFAULT_DIM_CAP) -> DensityMatrix:
    """n-fold Kronecker power of a state.

    The result carries the product spectrum of ``rho``: its small eigenvalues
    are exact products, whereas eigh of the dense power only resolves them to
    about 1e-16 absolute.
    """
    if not isinstance(rho, DensityMatrix):
        rho = validate_state(rho)
    if n == 1:
        return rho
    mat = kron_power(rho.mat, n, dim_cap)
    eig = herm_eig(rho)
    # Kernel directions of rho become exact zeros of every product.
    base = np.where(eig.eigenvalues <= KERNEL_TOL, 0.0, eig.eigenvalues)
    w = reduce(np.kron, [base] * n)
    order = np.argsort(w, kind="stable")
    vecs = kron_power(eig.eigenvectors, n, dim_cap)[:, order]
    return DensityMatrix(mat, HermEig(w[order], vecs))


def spectral_pvm_of_power(
    rho, n: int, cluster_tol: float = 1e-9, dim_cap: int = DEFAULT_DIM_CAP
) -> SpectralPvm:
    """Spectral PVM of ``rho^{(x)n}`` assembled from the eigenbasis of ``rho``.

    Each computational string ``(a_1..a_n)`` of eigen-indices contributes the
    rank-one projector onto ``v_{a_1} (x) ... (x) v_{a_n}``. Strings are grouped
    by the log of their eigenvalue product, clustered with absolute tolerance
    ``cluster_tol * n``; strings touching the kernel of ``rho`` go into a single
    kernel projector.
    """
    eig = herm_eig(rho)
    k = len(eig.eigenvalues)
    check_dim(k**n, dim_cap)
    w = eig.eigenvalues
    in_kernel = np.abs(w) <= KERNEL_TOL
    logw = np.where(in_kernel, 0.0, np.log(np.where(in_kernel, 1.0, np.abs(w))))

    # Strings of the same type (occupation counts) share an eigenvalue exactly.
    strings = np.array(list(itertools.product(range(k), repeat=n)), dtype=np.int64)
    counts = np.stack([(strings == a).sum(axis=1) for a in range(k)], axis=1)
    kernel_strings = counts[:, in_kernel].sum(axis=1) > 0 if in_kernel.any() else np.zeros(len(strings), bool)
    logs = counts @ logw

    live = np.flatnonzero(~kernel_strings)
    order = live[np.argsort(logs[live], kind="stable")]
    groups = []
    if kernel_strings.any():
        groups.append((np.flatnonzero(kernel_strings), 0.0))
    if len(order):
        for g in _cluster(logs[order], cluster_tol * n, relative=False):
            idx = order[g]
            groups.append((np.sort(idx), float(np.exp(np.mean(logs[idx])))))

    vn = kron_power(eig.eigenvectors, n, dim_cap)
    projectors = []
    for idx, _ in groups:
        cols = vn[:, idx]
        projectors.append(cols @ cols.conj().T)
    return SpectralPvm(projectors, [val for _, val in groups])


def random_state(k: int, seed: int) -> DensityMatrix:
    """Full-rank state ``G G^dag / Tr(G G^dag)`` with complex Gaussian ``G``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = np.random.default_rng(seed)
    g = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) / np.sqrt(2)
    m = g @ g.conj().T
    m = m / np.trace(m).real
    return DensityMatrix((m + m.conj().T) / 2)


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def bloch_state(x: float, y: float, z: float) -> DensityMatrix:
    if x * x + y * y + z * z > 1 + 1e-12:
        raise StateSpecError(f"Bloch vector ({x}, {y}, {z}) lies outside the unit ball")
    return validate_state((np.eye(2) + x * PAULI_X + y * PAULI_Y + z * PAULI_Z) / 2)


def _floats(body: str, spec: str) -> list[float]:
    try:
        return [float(t) for t in body.split(",")]
    except ValueError as exc:
        raise StateSpecError(f"cannot parse numbers in state spec {spec!r}") from exc


def parse_state_spec(spec: str, seed: int = 0) -> DensityMatrix:
    """Parse ``diag:p1,..,pk``, ``bloch:x,y,z``, ``random:k`` or a matrix JSON path.

    ``random:k`` draws :func:`random_state` with the given ``seed``.
    """
    kind, sep, body = spec.partition(":")
    if sep and kind == "diag":
        return validate_state(np.diag(_floats(body, spec)))
    if sep and kind == "bloch":
        vals = _floats(body, spec)
        if len(vals) != 3:
            raise StateSpecError(f"bloch spec needs three components, got {spec!r}")
        return bloch_state(*vals)
    if sep and kind == "random":
        try:
            return random_state(int(body), seed)
        except ValueError as exc:
            raise StateSpecError(f"bad random spec {spec!r}") from exc
    if os.path.exists(spec):
        return validate_state(load_matrix(spec))
    raise StateSpecError(f"unrecognised state spec {spec!r} (not a preset or an existing file)")
