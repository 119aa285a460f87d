"""Symmetric-group machinery on N qudits.

Permutation operators on the N-fold tensor space, irreducible characters via
the Murnaghan-Nakayama border-strip recursion, projectors onto the isotypic
(Young-diagram) subspaces that are invariant under both permutations and
collective unitaries, and exact subspace dimension counts.

Conventions: computational basis kets are labelled |d_0 ... d_{N-1}> with the
leftmost digit varying slowest, matching the Kronecker product order used
throughout the package. A permutation sigma moves the content of slot i to
slot sigma(i).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .hilbert import Operator, ensure_within_cap

PartitionLike = Union["Partition", Sequence[int]]


class Partition:
    """Young diagram: weakly decreasing positive row lengths summing to n."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(int(r) for r in rows)
        if not rows:
            raise ValueError("a partition needs at least one row")
        if any(r < 1 for r in rows):
            raise ValueError(f"row lengths must be positive: {rows}")
        if any(rows[i] < rows[i + 1] for i in range(len(rows) - 1)):
            raise ValueError(f"row lengths must be weakly decreasing: {rows}")
        self.rows = rows

    @property
    def n(self) -> int:
        return sum(self.rows)

    def conjugate(self) -> "Partition":
        return Partition(tuple(sum(1 for r in self.rows if r > j) for j in range(self.rows[0])))

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"Partition({self.rows})"

    def __str__(self) -> str:
        return "(" + ",".join(str(r) for r in self.rows) + ")"


def _as_partition(value: PartitionLike) -> Partition:
    return value if isinstance(value, Partition) else Partition(value)


class Permutation:
    """Bijection on {0, ..., n-1}, stored as the list of images."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection on 0..{len(images) - 1}: {images}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def transposition(cls, i: int, j: int, n: int) -> "Permutation":
        images = list(range(n))
        images[i], images[j] = images[j], images[i]
        return cls(images)

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for i, im in enumerate(self.images):
            inv[im] = i
        return Permutation(inv)

    def cycle_type(self) -> Partition:
        seen = [False] * self.size
        lengths = []
        for start in range(self.size):
            if seen[start]:
                continue
            length, pos = 0, start
            while not seen[pos]:
                seen[pos] = True
                pos = self.images[pos]
                length += 1
            lengths.append(length)
        return Partition(sorted(lengths, reverse=True))

    def sign(self) -> int:
        return (-1) ** (self.size - len(self.cycle_type()))

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({self.images})"


# ---------------------------------------------------------------------------
# characters and dimensions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _border_strip_char(shape: tuple, cycles: tuple) -> int:
    # Murnaghan-Nakayama on the beta-set (first-column hook) encoding:
    # removing a border strip of length t is subtracting t from one beta
    # number without colliding with another, with sign (-1)^height.
    if not cycles:
        return 1
    t, rest = cycles[0], cycles[1:]
    k = len(shape)
    beta = tuple(shape[i] + (k - 1 - i) for i in range(k))
    total = 0
    for b in beta:
        nb = b - t
        if nb < 0 or nb in beta:
            continue
        height = sum(1 for c in beta if nb < c < b)
        new_beta = sorted((c for c in beta if c != b), reverse=True)
        new_beta.append(nb)
        new_beta.sort(reverse=True)
        new_shape = tuple(
            c - (len(new_beta) - 1 - pos) for pos, c in enumerate(new_beta)
        )
        new_shape = tuple(r for r in new_shape if r > 0)
        total += (-1) ** height * _border_strip_char(new_shape, rest)
    return total


def irrep_character(shape: PartitionLike, cycle_type: PartitionLike) -> int:
    """Character of the symmetric-group irrep ``shape`` on class ``cycle_type``."""
    shape = _as_partition(shape)
    cycle_type = _as_partition(cycle_type)
    if shape.n != cycle_type.n:
        raise ValueError(
            f"partition sizes differ: {shape} of {shape.n} vs {cycle_type} of {cycle_type.n}"
        )
    return _border_strip_char(shape.rows, cycle_type.rows)


def irrep_dimension(shape: PartitionLike) -> int:
    """Dimension of the symmetric-group irrep, by the hook length formula."""
    shape = _as_partition(shape)
    conj = shape.conjugate().rows
    value = math.factorial(shape.n)
    for i, row in enumerate(shape.rows):
        for j in range(row):
            value //= (row - j) + (conj[j] - i) - 1
    return value


def subspace_dimension(shape: PartitionLike, d: int) -> int:
    """Dimension of the isotypic subspace of ``shape`` for qudits of dimension d.

    Equals the irrep dimension times the number of semistandard tableaux with
    entries below d (hook content formula); zero when the diagram has more
    rows than d.
    """
    shape = _as_partition(shape)
    if d < 1:
        raise ValueError("qudit dimension must be at least 1")
    if len(shape) > d:
        return 0
    conj = shape.conjugate().rows
    count = Fraction(1)
    for i, row in enumerate(shape.rows):
        for j in range(row):
            hook = (row - j) + (conj[j] - i) - 1
            count *= Fraction(d + j - i, hook)
    assert count.denominator == 1
    return irrep_dimension(shape) * int(count)


def partitions_of(n: int, max_rows: int) -> list:
    """All partitions of n with at most ``max_rows`` rows, lex-decreasing."""
    if n < 1 or max_rows < 1:
        raise ValueError("n and max_rows must be at least 1")

    def gen(remaining, largest, rows_left):
        if remaining == 0:
            yield ()
            return
        if rows_left == 0:
            return
        for first in range(min(remaining, largest), 0, -1):
            for rest in gen(remaining - first, first, rows_left - 1):
                yield (first,) + rest

    return [Partition(rows) for rows in gen(n, n, max_rows)]


def max_identical(shape: PartitionLike) -> int:
    """Largest number of subsystems that can share one pure state in this subspace."""
    return _as_partition(shape).rows[0]


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _basis_digits(n: int, d: int) -> np.ndarray:
    digits = np.indices((d,) * n).reshape(n, -1).T
    digits.flags.writeable = False
    return digits


def _permuted_indices(perm: Permutation, n: int, d: int) -> np.ndarray:
    """Index array ix with U(sigma)[ix[b], b] = 1 over the computational basis."""
    inv = perm.inverse().images
    digits = _basis_digits(n, d)
    powers = d ** np.arange(n - 1, -1, -1)
    return digits[:, list(inv)] @ powers


def permutation_operator(perm: Permutation, n: int, d: int) -> Operator:
    """Unitary permuting the tensor factors: |d_0...> -> |d_{sigma^-1(0)}...>."""
    if perm.size != n:
        raise ValueError(f"permutation acts on {perm.size} slots, expected {n}")
    if d < 1:
        raise ValueError("qudit dimension must be at least 1")
    dim = d ** n
    ensure_within_cap(dim)
    mat = np.zeros((dim, dim), dtype=complex)
    mat[_permuted_indices(perm, n, d), np.arange(dim)] = 1.0
    return Operator(mat)


def isotypic_projector(shape: PartitionLike, d: int) -> Operator:
    """Projector onto the full isotypic subspace labelled by a Young diagram.

    Built from the central idempotent of the group algebra,
    (dim_shape / n!) * sum_sigma chi_shape(sigma) U(sigma), which projects onto
    all multiplicity copies of the irrep at once. Idempotent, Hermitian, and
    commutes with every permutation operator and every collective unitary
    V tensored n times. Diagrams with more rows than d label an empty
    subspace and yield the zero operator.
    """
    shape = _as_partition(shape)
    n = shape.n
    if d < 1:
        raise ValueError("qudit dimension must be at least 1")
    dim = d ** n
    ensure_within_cap(dim)
    if len(shape) > d:
        return Operator(np.zeros((dim, dim), dtype=complex))
    mat = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim)
    for images in itertools.permutations(range(n)):
        perm = Permutation(images)
        chi = irrep_character(shape, perm.cycle_type())
        if chi == 0:
            continue
        mat[_permuted_indices(perm, n, d), cols] += chi
    mat *= irrep_dimension(shape) / math.factorial(n)
    return Operator(mat)


def symmetric_projector(n: int, d: int) -> Operator:
    """Projector onto the totally symmetric subspace of n qudits.

    Identical to the isotypic projector of the one-row diagram, and hence to
    the plain average of all permutation operators.
    """
    if n < 1:
        raise ValueError("need at least one system")
    return isotypic_projector(Partition((n,)), d)


def pairwise_antisym_projector(i: int, j: int, n: int, d: int) -> Operator:
    """Projector onto the antisymmetric subspace of slots i, j (identity elsewhere)."""
    if i == j:
        raise ValueError("slots must differ")
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"slots ({i}, {j}) out of range for {n} systems")
    swap = permutation_operator(Permutation.transposition(i, j, n), n, d)
    return Operator((np.eye(d ** n) - swap.entries) / 2)
