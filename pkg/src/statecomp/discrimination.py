"""Minimum-error and minimum-cost comparison via two-hypothesis discrimination.

Comparing N systems drawn from a known state set reduces to discriminating
two density matrices: one conditioned on all draws coinciding, one on the
opposite. The optimal two-outcome measurement is spectral: diagonalize the
prior-weighted difference operator, answer "same" on its positive eigenspace
and "different" on the negative one, splitting any zero eigenspace evenly
between the two (a built-in coin flip). Cost-weighted variants reuse the same
recipe on a reweighted operator.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import symmetry
from .comparison import (
    DIFFERENT,
    INCONCLUSIVE,
    SAME,
    ComparisonStrategy,
    apply_strategy,
)
from .errors import DegenerateScenarioError, DimensionCapError
from .hilbert import Operator, PureState, ensure_within_cap, tensor_product
from .sampling import MonteCarloEstimate, RandomStream, summarize

ZERO_EIGENVALUE_TOL = 1e-9
DENSITY_TOL = 1e-10
PRIOR_SUM_TOL = 1e-12

# itertools.product over state assignments; keeps threshold partitioning exact
# without letting set_size**n explode.
_MAX_ASSIGNMENTS = 250_000


class ComparisonScenario:
    """N systems, each drawn independently from a known finite state set."""

    __slots__ = ("state_set", "state_priors", "n_systems")

    def __init__(self, state_set: Sequence[PureState], state_priors, n_systems: int):
        state_set = tuple(state_set)
        priors = np.asarray(state_priors, dtype=float)
        if not state_set:
            raise ValueError("state set must be non-empty")
        if priors.shape != (len(state_set),):
            raise ValueError("need exactly one prior per state")
        if priors.min() < 0.0:
            raise ValueError("priors must be nonnegative")
        if abs(priors.sum() - 1.0) > PRIOR_SUM_TOL:
            raise ValueError(f"priors must sum to 1, got {priors.sum()!r}")
        dims = {s.dim for s in state_set}
        if len(dims) != 1:
            raise ValueError(f"states have mixed dimensions {sorted(dims)}")
        if n_systems < 2:
            raise ValueError("comparison needs at least two systems")
        priors.flags.writeable = False
        self.state_set = state_set
        self.state_priors = priors
        self.n_systems = int(n_systems)

    @property
    def dim(self) -> int:
        return self.state_set[0].dim

    @property
    def joint_dim(self) -> int:
        return self.dim ** self.n_systems


class HypothesisPair:
    """Two density matrices with priors: "same" versus "different"."""

    __slots__ = ("rho_same", "p_same", "rho_diff", "p_diff")

    def __init__(self, rho_same: Operator, p_same: float, rho_diff: Operator, p_diff: float):
        if abs(p_same + p_diff - 1.0) > PRIOR_SUM_TOL:
            raise ValueError(f"priors must sum to 1, got {p_same + p_diff!r}")
        for name, rho in (("rho_same", rho_same), ("rho_diff", rho_diff)):
            rho.require_hermitian()
            if abs(rho.trace().real - 1.0) > DENSITY_TOL:
                raise ValueError(f"{name} must have unit trace, got {rho.trace()!r}")
            low = np.linalg.eigvalsh(rho.entries)[0]
            if low < -DENSITY_TOL:
                raise ValueError(f"{name} has negative eigenvalue {low:.3e}")
        if rho_same.dim != rho_diff.dim:
            raise ValueError("hypothesis densities act on different spaces")
        self.rho_same = rho_same
        self.p_same = float(p_same)
        self.rho_diff = rho_diff
        self.p_diff = float(p_diff)

    @property
    def dim(self) -> int:
        return self.rho_same.dim


@dataclass(frozen=True)
class CostMatrix:
    """Costs of the four (verdict, truth) pairs; wrong may not be cheaper than right."""

    c_ss: float
    c_dd: float
    c_sd: float
    c_ds: float

    def __post_init__(self):
        if self.c_ds < self.c_ss or self.c_sd < self.c_dd:
            raise ValueError("a wrong verdict must cost at least as much as the right one")


MINIMUM_ERROR_COSTS = CostMatrix(c_ss=0.0, c_dd=0.0, c_sd=1.0, c_ds=1.0)


def build_hypotheses(scenario: ComparisonScenario) -> HypothesisPair:
    """Condition the N-fold independent mixture on the draws coinciding or not.

    All N systems are drawn i.i.d. from the state set; "same" means every
    draw picked the same member, which happens with probability
    sum_i prior_i**N.
    """
    n = scenario.n_systems
    ensure_within_cap(scenario.joint_dim)
    weights = scenario.state_priors ** n
    p_same = float(weights.sum())
    p_diff = 1.0 - p_same
    if p_diff < PRIOR_SUM_TOL:
        raise DegenerateScenarioError("the states can never differ in this scenario")

    dim = scenario.joint_dim
    same_part = np.zeros((dim, dim), dtype=complex)
    for w, state in zip(weights, scenario.state_set):
        amps = tensor_product([state] * n).amplitudes
        same_part += w * np.outer(amps, amps.conj())

    single = np.zeros((scenario.dim, scenario.dim), dtype=complex)
    for p, state in zip(scenario.state_priors, scenario.state_set):
        single += p * np.outer(state.amplitudes, state.amplitudes.conj())
    full = single
    for _ in range(n - 1):
        full = np.kron(full, single)

    return HypothesisPair(
        rho_same=Operator(same_part / p_same),
        p_same=p_same,
        rho_diff=Operator((full - same_part) / p_diff),
        p_diff=p_diff,
    )


def _sign_split_strategy(weighted_difference: np.ndarray):
    """POVM from the sign decomposition of a Hermitian operator.

    Positive eigenspace answers "same", negative answers "different", and the
    zero eigenspace (|eigenvalue| below ZERO_EIGENVALUE_TOL) is shared half
    and half, encoding a random guess in the operators themselves. Projectors
    are summed over whole sign classes, so degenerate eigenbases do not
    matter.
    """
    vals, vecs = np.linalg.eigh(weighted_difference)
    dim = weighted_difference.shape[0]
    pi_same = np.zeros((dim, dim), dtype=complex)
    pi_diff = np.zeros((dim, dim), dtype=complex)
    for val, vec in zip(vals, vecs.T):
        block = np.outer(vec, vec.conj())
        if val > ZERO_EIGENVALUE_TOL:
            pi_same += block
        elif val < -ZERO_EIGENVALUE_TOL:
            pi_diff += block
        else:
            pi_same += block / 2
            pi_diff += block / 2
    strategy = ComparisonStrategy([(SAME, Operator(pi_same)), (DIFFERENT, Operator(pi_diff))])
    return strategy, float(np.abs(vals).sum()), vals


def helstrom(pair: HypothesisPair):
    """Minimum-error discrimination of a hypothesis pair.

    Returns the optimal two-outcome strategy and its error probability
    (1 - sum of eigenvalue magnitudes of the weighted difference) / 2.
    """
    difference = pair.p_same * pair.rho_same.entries - pair.p_diff * pair.rho_diff.entries
    strategy, abs_sum, _ = _sign_split_strategy(difference)
    return strategy, 0.5 * (1.0 - abs_sum)


def bayes(pair: HypothesisPair, costs: CostMatrix):
    """Minimum average cost discrimination of a hypothesis pair.

    Same spectral recipe as the minimum-error measurement, applied to the
    cost-weighted difference operator. With unit error costs and free correct
    verdicts this reduces exactly to the minimum-error strategy.
    """
    weighted = (
        pair.p_same * (costs.c_ds - costs.c_ss) * pair.rho_same.entries
        - pair.p_diff * (costs.c_sd - costs.c_dd) * pair.rho_diff.entries
    )
    strategy, abs_sum, _ = _sign_split_strategy(weighted)
    cost = 0.5 * (
        (costs.c_ss + costs.c_ds) * pair.p_same
        + (costs.c_dd + costs.c_sd) * pair.p_diff
        - abs_sum
    )
    return strategy, cost


def inconclusive_guess_errors(scenario: ComparisonScenario) -> dict:
    """Exact error of the universal strategy under each fixed guess.

    Certified "not all the same" verdicts pass through; the inconclusive
    outcome is replaced by the guess. Guessing "different" errs exactly on
    the same-hypothesis weight; guessing "same" errs on the
    different-hypothesis weight that looks symmetric.
    """
    pair = build_hypotheses(scenario)
    sym = symmetry.symmetric_projector(scenario.n_systems, scenario.dim).entries
    sym_given_same = float(np.trace(pair.rho_same.entries @ sym).real)
    sym_given_diff = float(np.trace(pair.rho_diff.entries @ sym).real)
    return {
        "different": pair.p_same,
        "same": pair.p_same * (1.0 - sym_given_same) + pair.p_diff * sym_given_diff,
    }


def errorfree_plus_guess(scenario: ComparisonScenario) -> float:
    """Least error achievable by the universal strategy plus guessing."""
    return min(inconclusive_guess_errors(scenario).values())


def trine_scenario() -> ComparisonScenario:
    """Two systems, each in one of the three symmetric qubit trine states."""
    half_sqrt3 = math.sqrt(3) / 2
    states = [
        PureState([1.0, 0.0]),
        PureState([-0.5, -half_sqrt3]),
        PureState([-0.5, half_sqrt3]),
    ]
    return ComparisonScenario(states, [1 / 3, 1 / 3, 1 / 3], n_systems=2)


def simulate_strategy(
    strategy: ComparisonStrategy,
    scenario: ComparisonScenario,
    trials: int,
    stream: RandomStream,
    inconclusive_guess: str = "different",
) -> MonteCarloEstimate:
    """Empirical error rate of a strategy under a scenario.

    Each trial draws N states i.i.d. from the set, applies the strategy by
    Born sampling, and scores the verdict against whether the draws actually
    coincided. Inconclusive outcomes are resolved by the fixed guess;
    any certified-difference outcome counts as the verdict "different".
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if inconclusive_guess not in ("same", "different"):
        raise ValueError(f"inconclusive_guess must be 'same' or 'different', got {inconclusive_guess!r}")
    if strategy.dim != scenario.joint_dim:
        raise ValueError(
            f"strategy acts on dim {strategy.dim}, scenario joint dim is {scenario.joint_dim}"
        )
    guess_same = inconclusive_guess == "same"
    errors = np.empty(trials)
    for t in range(trials):
        sub = stream.substream(t)
        picks = sub.generator().choice(len(scenario.state_set), size=scenario.n_systems,
                                       p=scenario.state_priors)
        truly_same = bool(np.all(picks == picks[0]))
        joint = tensor_product([scenario.state_set[i] for i in picks])
        outcome = apply_strategy(strategy, joint, sub.substream(1))
        if outcome == SAME:
            verdict_same = True
        elif outcome == INCONCLUSIVE:
            verdict_same = guess_same
        else:
            verdict_same = False
        errors[t] = float(verdict_same != truly_same)
    return summarize(errors)


def threshold_hypotheses(scenario: ComparisonScenario, m_identical: int) -> HypothesisPair:
    """Split draws by whether at least m of the N states coincide.

    Partitions the N-fold independent mixture by the maximum multiplicity of
    the drawn states: "same" collects draws where some state appears at least
    ``m_identical`` times, "different" the rest. With ``m_identical == N``
    this is exactly the all-identical split. The pair feeds the spectral
    strategies unchanged.
    """
    n = scenario.n_systems
    if not 2 <= m_identical <= n:
        raise ValueError(f"threshold must lie in [2, {n}], got {m_identical}")
    ensure_within_cap(scenario.joint_dim)
    set_size = len(scenario.state_set)
    if set_size ** n > _MAX_ASSIGNMENTS:
        raise DimensionCapError(
            f"{set_size ** n} assignments exceed the enumeration cap of {_MAX_ASSIGNMENTS}"
        )

    dim = scenario.joint_dim
    above = np.zeros((dim, dim), dtype=complex)
    below = np.zeros((dim, dim), dtype=complex)
    p_above = 0.0
    p_below = 0.0
    for assignment in itertools.product(range(set_size), repeat=n):
        weight = float(np.prod(scenario.state_priors[list(assignment)]))
        if weight == 0.0:
            continue
        amps = tensor_product([scenario.state_set[i] for i in assignment]).amplitudes
        block = weight * np.outer(amps, amps.conj())
        if max(assignment.count(i) for i in set(assignment)) >= m_identical:
            above += block
            p_above += weight
        else:
            below += block
            p_below += weight
    if p_above < PRIOR_SUM_TOL or p_below < PRIOR_SUM_TOL:
        raise DegenerateScenarioError(
            f"threshold {m_identical} leaves an empty hypothesis "
            f"(priors {p_above:.3e} / {p_below:.3e})"
        )
    # renormalize away accumulated rounding before the density check
    total = p_above + p_below
    return HypothesisPair(
        rho_same=Operator(above / p_above),
        p_same=p_above / total,
        rho_diff=Operator(below / p_below),
        p_diff=p_below / total,
    )
