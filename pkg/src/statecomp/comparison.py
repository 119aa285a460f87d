"""Error-free comparison strategies.

A comparison strategy is a labelled POVM over the joint space of N qudits.
The universal strategy splits the space into the totally symmetric subspace
(inconclusive) and its complement (a certified "not all the same"); the
detailed strategy refines the complement into one outcome per Young-diagram
subspace, each bounding how many subsystems can have shared a state.
Inconclusive is a first-class outcome and is never silently remapped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import symmetry
from .errors import NumericalCheckError
from .hilbert import Operator, PureState, expectation, haar_random_state
from .sampling import MonteCarloEstimate, RandomStream, summarize

COMPLETENESS_TOL = 1e-9
POSITIVITY_TOL = 1e-9
PROBABILITY_SUM_TOL = 1e-8

# Positive semidefiniteness is verified by eigendecomposition up to this
# dimension; larger elements (projector-built by construction) are only
# checked for hermiticity and completeness.
_PSD_CHECK_MAX_DIM = 1024

_KINDS = frozenset(
    {"not_all_same", "inconclusive", "at_most_m_identical", "all_different", "same", "different"}
)


@dataclass(frozen=True)
class OutcomeLabel:
    """Verdict attached to a POVM element."""

    kind: str
    m: Optional[int] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown outcome kind {self.kind!r}")
        if self.kind == "at_most_m_identical":
            if self.m is None or self.m < 1:
                raise ValueError("at_most_m_identical needs m >= 1")
        elif self.m is not None:
            raise ValueError(f"outcome kind {self.kind!r} takes no m")

    @staticmethod
    def at_most(m: int) -> "OutcomeLabel":
        return OutcomeLabel("at_most_m_identical", m)

    def __str__(self) -> str:
        if self.kind == "at_most_m_identical":
            return f"at_most_{self.m}_identical"
        return self.kind


NOT_ALL_SAME = OutcomeLabel("not_all_same")
INCONCLUSIVE = OutcomeLabel("inconclusive")
ALL_DIFFERENT = OutcomeLabel("all_different")
SAME = OutcomeLabel("same")
DIFFERENT = OutcomeLabel("different")


class ComparisonStrategy:
    """Labelled POVM: (outcome, positive operator) pairs summing to identity."""

    __slots__ = ("elements",)

    def __init__(self, elements: Sequence[tuple]):
        elements = [(label, op) for label, op in elements]
        if not elements:
            raise ValueError("a strategy needs at least one element")
        dims = {op.dim for _, op in elements}
        if len(dims) != 1:
            raise ValueError(f"strategy elements act on different spaces: dims {sorted(dims)}")
        self.elements = tuple(elements)
        self.validate()

    @property
    def dim(self) -> int:
        return self.elements[0][1].dim

    @property
    def labels(self) -> tuple:
        return tuple(label for label, _ in self.elements)

    def operator_for(self, label: OutcomeLabel) -> Operator:
        for lab, op in self.elements:
            if lab == label:
                return op
        raise KeyError(f"no element labelled {label}")

    def validate(self, check_positivity: Optional[bool] = None) -> None:
        """Re-assert completeness, hermiticity and positive semidefiniteness."""
        if check_positivity is None:
            check_positivity = self.dim <= _PSD_CHECK_MAX_DIM
        total = np.zeros((self.dim, self.dim), dtype=complex)
        for _, op in self.elements:
            op.require_hermitian()
            total += op.entries
        diagonal = np.einsum("ii->i", total)
        diagonal -= 1.0
        dev = np.abs(total).max()
        if dev > COMPLETENESS_TOL:
            raise ValueError(f"strategy elements do not sum to identity (deviation {dev:.3e})")
        if check_positivity:
            for label, op in self.elements:
                low = np.linalg.eigvalsh(op.entries)[0]
                if low < -POSITIVITY_TOL:
                    raise ValueError(
                        f"element {label} has negative eigenvalue {low:.3e}"
                    )


def universal_strategy(n: int, d: int) -> ComparisonStrategy:
    """Two-outcome strategy for completely unknown pure states.

    Projecting outside the symmetric subspace certifies that the n states
    were not all identical; the symmetric outcome is inconclusive. No
    operator can certify "all the same", so no such element exists.
    """
    sym = symmetry.symmetric_projector(n, d)
    complement = Operator(np.eye(d ** n) - sym.entries)
    return ComparisonStrategy([(NOT_ALL_SAME, complement), (INCONCLUSIVE, sym)])


def detailed_strategy(n: int, d: int) -> ComparisonStrategy:
    """One outcome per Young-diagram subspace of n qudits.

    The one-row diagram is the inconclusive outcome, the one-column diagram
    certifies that all states differed, and every other diagram certifies
    that at most its first-row length of the subsystems were identical.
    """
    elements = []
    for shape in symmetry.partitions_of(n, min(n, d)):
        if shape.rows == (n,):
            label = INCONCLUSIVE
        elif shape.rows == (1,) * n:
            label = ALL_DIFFERENT
        else:
            label = OutcomeLabel.at_most(symmetry.max_identical(shape))
        elements.append((label, symmetry.isotypic_projector(shape, d)))
    return ComparisonStrategy(elements)


def success_probability_analytic(n: int, d: int) -> float:
    """Average probability that unknown states are certified as not all same.

    For a flat distribution over inputs the average equals the fraction of
    the total space lying outside the symmetric subspace:
    1 - C(d+n-1, n) / d**n.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be at least 1")
    return float(1 - Fraction(math.comb(d + n - 1, n), d ** n))


def success_probability_mc(
    n: int,
    d: int,
    trials: int,
    stream: RandomStream,
    entangled: bool = True,
) -> MonteCarloEstimate:
    """Monte Carlo version of the average success probability.

    Samples either Haar states on the full joint space (``entangled``) or
    products of independent single-system Haar states, and averages the
    weight outside the symmetric subspace. Both ensembles share the same
    mean.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    nonsym = np.eye(d ** n) - symmetry.symmetric_projector(n, d).entries
    values = np.empty(trials)
    for t in range(trials):
        if entangled:
            psi = haar_random_state(d ** n, stream.substream(t)).amplitudes
        else:
            factors = [haar_random_state(d, stream.substream(t, k)) for k in range(n)]
            psi = factors[0].amplitudes
            for state in factors[1:]:
                psi = np.kron(psi, state.amplitudes)
        values[t] = np.vdot(psi, nonsym @ psi).real
    return summarize(values)


def apply_strategy(
    strategy: ComparisonStrategy,
    state: Union[PureState, Operator],
    stream: RandomStream,
) -> OutcomeLabel:
    """Sample one outcome of a strategy on a state via the Born rule."""
    probs = np.array([expectation(op, state) for _, op in strategy.elements])
    if probs.min() < -POSITIVITY_TOL:
        raise NumericalCheckError(f"outcome probability {probs.min():.3e} below zero")
    probs = np.clip(probs, 0.0, None)
    total = probs.sum()
    if abs(total - 1.0) > PROBABILITY_SUM_TOL:
        raise NumericalCheckError(f"outcome probabilities sum to {total!r}")
    draw = stream.generator().random() * total
    cumulative = 0.0
    for (label, _), p in zip(strategy.elements, probs):
        cumulative += p
        if draw <= cumulative:
            return label
    return strategy.elements[-1][0]
