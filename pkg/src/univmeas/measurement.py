"""PVM and POVM algebra: width, refinement, commuting products, pinching, readout."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NegativeProbability, NotCommuting, UnivMeasError
from .matkernel import as_matrix, matrix_from_dict, matrix_to_dict

PVM_TOL = 1e-9
COMMUTE_TOL = 1e-8
PROB_TOL = 1e-10


class Povm:
    """Finite list of PSD operators summing to the identity."""

    def __init__(self, elements):
        elements = [as_matrix(e) for e in elements]
        if not elements:
            raise UnivMeasError("a measurement needs at least one element")
        dims = {e.shape[0] for e in elements}
        if len(dims) != 1:
            raise DimensionMismatch(f"elements have mixed dimensions {sorted(dims)}")
        for e in elements:
            e.setflags(write=False)
        self.elements = tuple(elements)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self):
        return len(self.elements)

    def check(self, tol: float = PVM_TOL) -> list[str]:
        """Return a list of violated invariants (empty when the POVM is valid)."""
        problems = []
        for i, e in enumerate(self.elements):
            if np.linalg.eigvalsh((e + e.conj().T) / 2)[0] < -1e-10:
                problems.append(f"element {i} is not PSD")
        defect = np.linalg.norm(sum(self.elements) - np.eye(self.dim))
        if defect > tol:
            problems.append(f"elements sum to identity only within {defect:.3e}")
        return problems


class Pvm(Povm):
    """Ordered list of orthogonal projectors summing to the identity.

    Each element carries an opaque label so that composite measurements
    report readable outcomes.
    """

    def __init__(self, elements, labels=None):
        super().__init__(elements)
        if labels is None:
            labels = [str(i) for i in range(len(self.elements))]
        labels = tuple(str(x) for x in labels)
        if len(labels) != len(self.elements):
            raise UnivMeasError("one label per element is required")
        self.labels = labels

    def ranks(self) -> list[int]:
        return [int(round(np.trace(e).real)) for e in self.elements]

    def check(self, tol: float = PVM_TOL) -> list[str]:
        problems = []
        for i, e in enumerate(self.elements):
            if np.linalg.norm(e - e.conj().T) > tol:
                problems.append(f"element {i} ({self.labels[i]}) is not Hermitian")
            if np.linalg.norm(e @ e - e) > tol:
                problems.append(f"element {i} ({self.labels[i]}) is not idempotent")
        for i in range(len(self.elements)):
            for j in range(i + 1, len(self.elements)):
                overlap = np.linalg.norm(self.elements[i] @ self.elements[j])
                if overlap > tol:
                    problems.append(f"elements {i} and {j} overlap ({overlap:.3e})")
        defect = np.linalg.norm(sum(self.elements) - np.eye(self.dim))
        if defect > tol:
            problems.append(f"elements sum to identity only within {defect:.3e}")
        return problems

    def to_list(self) -> list[dict]:
        return [dict(label=lab, **matrix_to_dict(e)) for lab, e in zip(self.labels, self.elements)]

    @classmethod
    def from_list(cls, items) -> "Pvm":
        try:
            return cls([matrix_from_dict(x) for x in items], [x["label"] for x in items])
        except (KeyError, TypeError) as exc:
            raise UnivMeasError(f"malformed PVM list: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_list())


def basis_pvm(vectors, labels=None) -> Pvm:
    """Rank-one PVM from the columns of a unitary matrix."""
    v = np.asarray(vectors, dtype=complex)
    return Pvm([np.outer(v[:, i], v[:, i].conj()) for i in range(v.shape[1])], labels)


def standard_pvm(dim: int) -> Pvm:
    return basis_pvm(np.eye(dim))


def trivial_pvm(dim: int) -> Pvm:
    return Pvm([np.eye(dim)], ["I"])


@dataclass(frozen=True)
class ClassicalDist:
    probs: np.ndarray

    def __post_init__(self):
        if abs(float(np.sum(self.probs)) - 1.0) > PVM_TOL:
            raise UnivMeasError(f"probabilities sum to {np.sum(self.probs)!r}")
        self.probs.setflags(write=False)

    def __len__(self):
        return len(self.probs)


def width(pvm: Pvm) -> int:
    """Largest projector rank in the PVM."""
    if hasattr(pvm, "irrep_width"):
        # Isotypic PVMs report max_lambda m_lambda, the width of any
        # irreducible refinement of the decomposition.
        return pvm.irrep_width
    return max(pvm.ranks())


def refines(fine: Pvm, coarse: Pvm, tol: float = PVM_TOL):
    """Decide whether ``coarse <= fine``.

    Each element ``F_j`` of ``fine`` is assigned to the element ``E_i`` of
    ``coarse`` with ``E_i F_j ~= F_j``; the relation holds when every ``F_j``
    is assigned and the assigned groups sum back to each ``E_i``.

    Returns
    -------
    (bool, dict or None)
        The verdict and, when true, the assignment ``j -> i``.
    """
    if fine.dim != coarse.dim:
        raise DimensionMismatch(f"dimensions {fine.dim} and {coarse.dim} differ")
    assignment = {}
    for j, f in enumerate(fine.elements):
        scale = max(1.0, np.linalg.norm(f))
        hits = [i for i, e in enumerate(coarse.elements) if np.linalg.norm(e @ f - f) <= tol * scale]
        if len(hits) != 1:
            return False, None
        assignment[j] = hits[0]
    for i, e in enumerate(coarse.elements):
        total = sum((fine.elements[j] for j, a in assignment.items() if a == i), np.zeros_like(e))
        if np.linalg.norm(total - e) > tol * max(1.0, np.linalg.norm(e)):
            return False, None
    return True, assignment


def product_pvm(e: Pvm, f: Pvm, tol: float = COMMUTE_TOL) -> Pvm:
    """The PVM ``{E_i F_j}`` of two commuting PVMs, empty products dropped.

    Raises
    ------
    NotCommuting
        If some pair has commutator norm above ``tol``; the worst pair is reported.
    """
    if e.dim != f.dim:
        raise DimensionMismatch(f"dimensions {e.dim} and {f.dim} differ")
    worst, worst_pair = 0.0, None
    elements, labels = [], []
    for i, ei in enumerate(e.elements):
        for j, fj in enumerate(f.elements):
            prod = ei @ fj
            c = float(np.linalg.norm(prod - fj @ ei))
            if c > worst:
                worst, worst_pair = c, (i, j)
            if np.trace(prod).real < 0.5:
                continue
            elements.append((prod + prod.conj().T) / 2)
            labels.append(f"{e.labels[i]}|{f.labels[j]}")
    if worst > tol:
        raise NotCommuting(worst_pair, worst)
    return Pvm(elements, labels)


def pinch(pvm: Pvm, a) -> np.ndarray:
    """Conditional expectation ``A -> sum_i E_i A E_i``."""
    a = as_matrix(a)
    if a.shape[0] != pvm.dim:
        raise DimensionMismatch(f"operator dim {a.shape[0]} != PVM dim {pvm.dim}")
    return sum(e @ a @ e for e in pvm.elements)


def measure(m: Povm, rho) -> ClassicalDist:
    """Outcome distribution ``p_i = Tr[M_i rho]``."""
    r = as_matrix(rho)
    if r.shape[0] != m.dim:
        raise DimensionMismatch(f"state dim {r.shape[0]} != measurement dim {m.dim}")
    # Tr[M r] = sum(M^T * r) elementwise, avoids forming the product.
    p = np.array([np.sum(e.T * r).real for e in m.elements])
    if p.min() < -PROB_TOL:
        i = int(np.argmin(p))
        raise NegativeProbability(f"outcome {i} has probability {p[i]:.3e}")
    p = np.clip(p, 0.0, None)
    return ClassicalDist(p)
