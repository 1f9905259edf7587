"""Permutation action on (C^k)^{(x)n} and the isotypic projectors it generates."""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import factorial

import numpy as np

from ..errors import DimensionMismatch, NTooLarge
from ..matkernel import DEFAULT_DIM_CAP, as_matrix, check_dim, comm_norm, kron_power
from ..measurement import Pvm
from .combinatorics import (
    Partition,
    conjugacy_classes,
    cycle_type,
    hook_dim,
    mn_character,
    partitions,
    weyl_dim,
)

MAX_N = 10
_BATCH = 4096


def _digits(n: int, k: int) -> np.ndarray:
    """Row x holds the base-k digits of basis index x, tensor slot 0 most significant."""
    return np.array(list(itertools.product(range(k), repeat=n)), dtype=np.int64).reshape(k**n, n)


def _slot_weights(n: int, k: int) -> np.ndarray:
    return k ** np.arange(n - 1, -1, -1, dtype=np.int64)


class PermutationOperator:
    """Sparse unitary permuting tensor factors.

    Stored as an index map: the operator sends basis vector ``e_x`` to
    ``e_{index_map[x]}``. The factor in slot ``s`` moves to slot ``perm[s]``.
    """

    def __init__(self, index_map):
        self.index_map = np.asarray(index_map, dtype=np.int64)
        self.index_map.setflags(write=False)

    @property
    def dim(self) -> int:
        return len(self.index_map)

    def __matmul__(self, other):
        if isinstance(other, PermutationOperator):
            return PermutationOperator(self.index_map[other.index_map])
        vec = np.asarray(other)
        out = np.zeros_like(vec)
        out[self.index_map] = vec
        return out

    def to_dense(self) -> np.ndarray:
        u = np.zeros((self.dim, self.dim), dtype=complex)
        u[self.index_map, np.arange(self.dim)] = 1
        return u


def permutation_operator(perm, k: int, dim_cap: int = DEFAULT_DIM_CAP) -> PermutationOperator:
    """Operator of ``perm`` (0-based one-line notation) on ``(C^k)^{(x)n}``."""
    perm = np.asarray(perm, dtype=np.int64)
    n = len(perm)
    check_dim(k**n, dim_cap)
    inv = np.argsort(perm)
    return PermutationOperator(_digits(n, k)[:, inv] @ _slot_weights(n, k))


@lru_cache(maxsize=16)
def _class_operators(n: int, k: int) -> tuple[np.ndarray, ...]:
    """Dense class sums ``C_mu = sum_{pi in mu} U(pi)``, one per conjugacy class."""
    classes = conjugacy_classes(n)
    class_index = {c.lengths: i for i, c in enumerate(classes)}
    dim = k**n
    digits = _digits(n, k)
    weights = _slot_weights(n, k)
    columns = np.arange(dim, dtype=np.int64)[:, None]
    counts = np.zeros(len(classes) * dim * dim, dtype=np.int64)

    def flush(perms, cls):
        inv = np.argsort(np.array(perms, dtype=np.int64), axis=1)
        images = digits[:, inv] @ weights  # (dim, batch)
        keys = np.asarray(cls, dtype=np.int64)[None, :] * dim * dim + images * dim + columns
        counts[:] += np.bincount(keys.ravel(), minlength=counts.size)

    perms, cls = [], []
    for perm in itertools.permutations(range(n)):
        perms.append(perm)
        cls.append(class_index[cycle_type(perm).lengths])
        if len(perms) == _BATCH:
            flush(perms, cls)
            perms, cls = [], []
    if perms:
        flush(perms, cls)
    out = tuple(c.reshape(dim, dim).astype(float) for c in counts.reshape(len(classes), -1))
    for c in out:
        c.setflags(write=False)
    return out


def class_operators(n: int, k: int, dim_cap: int = DEFAULT_DIM_CAP) -> dict:
    """Map each cycle type of S_n to its class-sum operator on ``(C^k)^{(x)n}``."""
    _guard(n, k, dim_cap)
    return dict(zip(conjugacy_classes(n), _class_operators(n, k)))


def _guard(n: int, k: int, dim_cap: int) -> None:
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    if n > MAX_N:
        raise NTooLarge(f"n={n} exceeds the exact group-sum limit {MAX_N}")
    check_dim(k**n, dim_cap)


class IsotypicPvm(Pvm):
    """PVM of isotypic projectors ``P_lambda`` of the Schur-Weyl decomposition.

    ``sn_dims[i]`` is the symmetric-group dimension ``d_lambda`` (the number of
    equivalent GL copies inside the block) and ``gl_dims[i]`` the GL(k)
    dimension ``m_lambda`` (the rank of each copy).
    """

    def __init__(self, elements, partitions_, sn_dims, gl_dims, n, k):
        super().__init__(elements, [f"lambda={lam}" for lam in partitions_])
        self.partitions = tuple(partitions_)
        self.sn_dims = tuple(sn_dims)
        self.gl_dims = tuple(gl_dims)
        self.n = n
        self.k = k

    @property
    def irrep_width(self) -> int:
        """Largest GL irreducible dimension, the width of any irreducible refinement."""
        return max(self.gl_dims)

    def summary(self) -> list[tuple[Partition, int, int, int]]:
        return [
            (lam, d, m, r)
            for lam, d, m, r in zip(self.partitions, self.sn_dims, self.gl_dims, self.ranks())
        ]

    def check(self, tol: float = 1e-9) -> list[str]:
        problems = super().check(tol)
        for lam, d, m, r in self.summary():
            if r != d * m:
                problems.append(f"rank of P_{lam} is {r}, expected d*m = {d * m}")
        if sum(d * m for d, m in zip(self.sn_dims, self.gl_dims)) != self.k**self.n:
            problems.append("sum of d*m differs from k^n")
        if self.irrep_width > (self.n + 1) ** (self.k - 1):
            problems.append(f"width {self.irrep_width} exceeds (n+1)^(k-1)")
        return problems


def isotypic_pvm(n: int, k: int, dim_cap: int = DEFAULT_DIM_CAP) -> IsotypicPvm:
    """Isotypic PVM of ``(C^k)^{(x)n}`` under the commuting GL(k) x S_n actions.

    ``P_lambda = (d_lambda / n!) sum_mu chi_lambda(mu) C_mu`` over conjugacy
    classes, one projector per partition of ``n`` with at most ``k`` rows.
    """
    _guard(n, k, dim_cap)
    classes = conjugacy_classes(n)
    ops = _class_operators(n, k)
    lams = partitions(n, k)
    elements, d_list, m_list = [], [], []
    for lam in lams:
        d = hook_dim(lam)
        p = sum(mn_character(lam, mu) * c for mu, c in zip(classes, ops)) * (d / factorial(n))
        elements.append(p.astype(complex))
        d_list.append(d)
        m_list.append(weyl_dim(lam, k))
    return IsotypicPvm(elements, lams, d_list, m_list, n, k)


def commutes_with_tensor_power(pvm: IsotypicPvm, sigma, dim_cap: int = DEFAULT_DIM_CAP) -> float:
    """Largest ``||[P_lambda, sigma^{(x)n}]||_F`` over the isotypic projectors."""
    s = as_matrix(sigma)
    if s.shape[0] != pvm.k:
        raise DimensionMismatch(f"state dim {s.shape[0]} != k={pvm.k}")
    sn = kron_power(s, pvm.n, dim_cap)
    return max(comm_norm(p, sn) for p in pvm.elements)
