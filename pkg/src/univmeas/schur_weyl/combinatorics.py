"""Partitions, cycle types and the integer invariants attached to them."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod

from ..errors import SizeMismatch, TooManyRows


@dataclass(frozen=True, order=True)
class Partition:
    """Young diagram: weakly decreasing positive row lengths."""

    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if any(r <= 0 for r in rows) or any(a < b for a, b in zip(rows, rows[1:])):
            raise ValueError(f"{rows} is not a partition")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return sum(self.rows)

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def padded(self, k: int) -> tuple[int, ...]:
        return self.rows + (0,) * (k - len(self.rows))

    def conjugate(self) -> "Partition":
        return Partition(tuple(sum(1 for r in self.rows if r > c) for c in range(self.rows[0] if self.rows else 0)))

    def __str__(self):
        return "(" + ",".join(map(str, self.rows)) + ")"


@dataclass(frozen=True)
class CycleType:
    """Conjugacy class of the symmetric group, as sorted cycle lengths."""

    lengths: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(sorted((int(x) for x in self.lengths), reverse=True)))

    @property
    def n(self) -> int:
        return sum(self.lengths)

    @property
    def class_size(self) -> int:
        mult = Counter(self.lengths)
        return factorial(self.n) // prod(length**m * factorial(m) for length, m in mult.items())

    def __str__(self):
        return "(" + ",".join(map(str, self.lengths)) + ")"


def _partitions_desc(n: int, max_part: int):
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions_desc(n - first, first):
            yield (first,) + rest


def partitions(n: int, max_rows: int | None = None) -> list[Partition]:
    """Partitions of ``n`` with at most ``max_rows`` rows, descending lexicographic."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [Partition(p) for p in _partitions_desc(n, n) if max_rows is None or len(p) <= max_rows]


def cycle_type(perm) -> CycleType:
    """Cycle type of a permutation in 0-based one-line notation."""
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        length, i = 0, start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        lengths.append(length)
    return CycleType(tuple(lengths))


def hook_lengths(lam: Partition) -> list[int]:
    conj = lam.conjugate().rows
    return [lam.rows[i] - j - 1 + conj[j] - i for i in range(lam.num_rows) for j in range(lam.rows[i])]


def hook_dim(lam: Partition) -> int:
    """Dimension of the symmetric-group irreducible labelled by ``lam``."""
    return factorial(lam.n) // prod(hook_lengths(lam))


def weyl_dim(lam: Partition, k: int) -> int:
    """Dimension of the GL(k) irreducible with highest weight ``lam``."""
    if lam.num_rows > k:
        raise TooManyRows(f"{lam} has {lam.num_rows} rows, more than k={k}")
    w = lam.padded(k)
    val = prod(
        (Fraction(w[i] - w[j] + j - i, j - i) for i in range(k) for j in range(i + 1, k)),
        start=Fraction(1),
    )
    assert val.denominator == 1
    return int(val)


@lru_cache(maxsize=None)
def _mn(rows: tuple[int, ...], parts: tuple[int, ...]) -> int:
    if not parts:
        return 1 if not rows else 0
    r, rest = parts[0], parts[1:]
    length = len(rows)
    # First-column hook lengths (beta numbers) of the diagram.
    beta = [rows[i] + length - 1 - i for i in range(length)]
    beads = set(beta)
    total = 0
    for b in beta:
        target = b - r
        if target < 0 or target in beads:
            continue
        height = sum(1 for c in beta if target < c < b)
        new_beta = sorted((beads - {b}) | {target}, reverse=True)
        new_rows = tuple(x for x in (new_beta[i] - (length - 1 - i) for i in range(length)) if x > 0)
        total += (-1) ** height * _mn(new_rows, rest)
    return total


def mn_character(lam: Partition, mu) -> int:
    """Character of the irreducible ``lam`` on the class ``mu`` (Murnaghan-Nakayama)."""
    mu = mu if isinstance(mu, CycleType) else CycleType(tuple(mu))
    if lam.n != mu.n:
        raise SizeMismatch(f"{lam} has size {lam.n} but class {mu} has size {mu.n}")
    return _mn(lam.rows, mu.lengths)


def conjugacy_classes(n: int) -> list[CycleType]:
    return [CycleType(p.rows) for p in partitions(n)]
