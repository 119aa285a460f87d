"""Linear-optics multiport simulation with exact Fock statistics.

N particles enter an N-port balanced (discrete-Fourier) interferometer, one
per input port, each carrying an internal state of dimension D. The
interferometer only mixes the spatial part, so output click patterns reflect
the exchange symmetry of the internal states: patterns impossible for
identical inputs certify a difference without error. Amplitudes are exact,
via permanents (bosons) or determinants (fermions) over fine-grained
(port, internal level) modes.
"""

from __future__ import annotations

import enum
import itertools
import math
from functools import lru_cache
from typing import Dict, Sequence, Set, Tuple

import numpy as np

from .errors import DimensionCapError, NumericalCheckError, PauliViolationError
from .hilbert import PureState
from .sampling import MonteCarloEstimate, RandomStream, summarize

FockPattern = Tuple[int, ...]

UNITARY_TOL = 1e-12
DISTRIBUTION_TOL = 1e-9
ZERO_PATTERN_TOL = 1e-10

MAX_PARTICLES = 6
MAX_INTERNAL_DIM = 4


class Statistics(enum.Enum):
    BOSON = "boson"
    FERMION = "fermion"


class MultiportUnitary:
    """Spatial transfer matrix of an N-port interferometer."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        mat = np.array(entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"transfer matrix must be square, got shape {mat.shape}")
        dev = np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])).max()
        if dev > UNITARY_TOL:
            raise ValueError(f"transfer matrix is not unitary (deviation {dev:.3e})")
        mat.flags.writeable = False
        self.entries = mat

    @property
    def n_ports(self) -> int:
        return self.entries.shape[0]


class MultiportInput:
    """One particle per input port, each with its own internal state."""

    __slots__ = ("internal_states", "statistics")

    def __init__(self, internal_states: Sequence[PureState], statistics: Statistics):
        internal_states = tuple(internal_states)
        if not internal_states:
            raise ValueError("need at least one particle")
        dims = {s.dim for s in internal_states}
        if len(dims) != 1:
            raise ValueError(f"internal states have mixed dimensions {sorted(dims)}")
        self.internal_states = internal_states
        self.statistics = Statistics(statistics)

    @property
    def n_particles(self) -> int:
        return len(self.internal_states)

    @property
    def internal_dim(self) -> int:
        return self.internal_states[0].dim


def dft_multiport(n: int) -> MultiportUnitary:
    """Balanced N-port: entry (j, k) is exp(2*pi*i*j*k/N) / sqrt(N)."""
    if n < 1:
        raise ValueError("need at least one port")
    j, k = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return MultiportUnitary(np.exp(2j * np.pi * j * k / n) / math.sqrt(n))


# ---------------------------------------------------------------------------
# permanents
# ---------------------------------------------------------------------------

def _ryser_permanents(stack: np.ndarray) -> np.ndarray:
    """Permanents of a (batch, n, n) stack: Ryser's formula, Gray-code order.

    Each Gray step toggles a single column in the running row sums, so the
    whole batch costs 2**n vectorized updates instead of 2**n * n.
    """
    batch, n, _ = stack.shape
    row_sums = np.zeros((batch, n), dtype=complex)
    totals = np.zeros(batch, dtype=complex)
    gray = 0
    for g in range(1, 1 << n):
        new_gray = g ^ (g >> 1)
        toggled = new_gray ^ gray
        column = toggled.bit_length() - 1
        if new_gray & toggled:
            row_sums += stack[:, :, column]
        else:
            row_sums -= stack[:, :, column]
        gray = new_gray
        sign = -1 if (n - gray.bit_count()) % 2 else 1
        totals += sign * np.prod(row_sums, axis=1)
    return totals


def permanent(matrix) -> complex:
    """Permanent of a square matrix (Ryser's formula)."""
    mat = np.asarray(matrix, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {mat.shape}")
    if mat.shape[0] == 0:
        return complex(1.0)
    return complex(_ryser_permanents(mat[None])[0])


# ---------------------------------------------------------------------------
# mode bookkeeping
# ---------------------------------------------------------------------------

def _spatial_patterns(n: int) -> list:
    """All occupation patterns of n particles over n ports, lexicographic."""
    patterns = []
    for cuts in itertools.combinations(range(2 * n - 1), n - 1):
        pattern = []
        prev = -1
        for c in cuts:
            pattern.append(c - prev - 1)
            prev = c
        pattern.append(2 * n - 2 - prev)
        patterns.append(tuple(pattern))
    return sorted(patterns)


class _ModeEnumeration:
    """Fine-grained (port, level) configurations for n particles, d levels."""

    def __init__(self, n: int, d: int):
        configs = list(itertools.combinations_with_replacement(range(n * d), n))
        self.rows = np.array(configs, dtype=np.intp)
        self.norms = np.array(
            [math.prod(math.factorial(int(c)) for c in np.bincount(cfg)) for cfg in configs],
            dtype=float,
        )
        self.spatial = sorted(_spatial_patterns(n))
        index = {p: i for i, p in enumerate(self.spatial)}
        self.spatial_of_config = np.array(
            [index[tuple(np.bincount([m // d for m in cfg], minlength=n).tolist())]
             for cfg in configs],
            dtype=np.intp,
        )
        self.n_spatial = len(self.spatial)


@lru_cache(maxsize=64)
def _mode_enumeration(n: int, d: int) -> _ModeEnumeration:
    return _ModeEnumeration(n, d)


def _transfer_matrix(inp: MultiportInput, unitary: MultiportUnitary) -> np.ndarray:
    """Amplitude of particle k reaching fine mode (port j, level d): U[j,k] c_k[d]."""
    coeffs = np.stack([s.amplitudes for s in inp.internal_states])
    return np.einsum("jk,kd->jdk", unitary.entries, coeffs).reshape(-1, inp.n_particles)


def _config_probabilities(transfer: np.ndarray, enum: _ModeEnumeration,
                          statistics: Statistics) -> np.ndarray:
    """Probability of each fine-grained output configuration."""
    stack = transfer[enum.rows, :]
    if statistics is Statistics.FERMION:
        # repeated rows make the determinant vanish, enforcing exclusion
        return np.abs(np.linalg.det(stack)) ** 2
    n = stack.shape[-1]
    chunk = max(1, 4_000_000 // (n * n))
    amps = np.empty(stack.shape[0], dtype=complex)
    for start in range(0, stack.shape[0], chunk):
        amps[start:start + chunk] = _ryser_permanents(stack[start:start + chunk])
    return np.abs(amps) ** 2 / enum.norms


def _check_caps(n: int, d: int) -> None:
    if n > MAX_PARTICLES:
        raise DimensionCapError(f"{n} particles exceed the cap of {MAX_PARTICLES}")
    if d > MAX_INTERNAL_DIM:
        raise DimensionCapError(f"internal dimension {d} exceeds the cap of {MAX_INTERNAL_DIM}")


def output_distribution(inp: MultiportInput, unitary: MultiportUnitary
                        ) -> Dict[FockPattern, float]:
    """Exact distribution of output port occupations.

    Parameters
    ----------
    inp : MultiportInput
        One particle per input port with its internal state; the number of
        particles must match the number of ports.
    unitary : MultiportUnitary
        Spatial transfer matrix.

    Returns
    -------
    dict
        Every spatial occupation pattern (tuple over output ports, summing to
        the particle number) mapped to its probability, in lexicographic
        order. Probabilities come from permanents (bosons) or determinants
        (fermions) of the fine-grained transfer matrix with rows repeated per
        occupation, and sum to one.
    """
    n, d = inp.n_particles, inp.internal_dim
    if unitary.n_ports != n:
        raise ValueError(f"{n} particles need {n} ports, transfer matrix has {unitary.n_ports}")
    _check_caps(n, d)
    enum = _mode_enumeration(n, d)
    probs = _config_probabilities(_transfer_matrix(inp, unitary), enum, inp.statistics)
    total = probs.sum()
    if abs(total - 1.0) > DISTRIBUTION_TOL:
        if inp.statistics is Statistics.FERMION and total < DISTRIBUTION_TOL:
            overlaps = [
                abs(a.overlap(b))
                for a, b in itertools.combinations(inp.internal_states, 2)
            ]
            if overlaps and max(overlaps) > 1 - 1e-12:
                raise PauliViolationError(
                    "identical fermions declared; no output has nonzero amplitude"
                )
        raise NumericalCheckError(f"output distribution sums to {total!r}")
    spatial_probs = np.bincount(enum.spatial_of_config, weights=probs,
                                minlength=enum.n_spatial)
    return {pattern: float(p) for pattern, p in zip(enum.spatial, spatial_probs)}


def _identical_input_distribution(n: int, statistics: Statistics) -> Dict[FockPattern, float]:
    # the spatial distribution for identical internal states does not depend
    # on the state, so a one-level internal space suffices
    inp = MultiportInput([PureState([1.0])] * n, statistics)
    return output_distribution(inp, dft_multiport(n))


def unambiguous_patterns(n: int, statistics: Statistics) -> Set[FockPattern]:
    """Patterns with zero probability for identical inputs.

    Observing any of these certifies, without error, that the internal states
    were not all identical.
    """
    _check_caps(n, 1)
    dist = _identical_input_distribution(n, Statistics(statistics))
    return {pattern for pattern, p in dist.items() if p < ZERO_PATTERN_TOL}


def fermion_identical_bound(pattern: FockPattern) -> int:
    """Most fermions that may have been identical given this click pattern.

    Equals the number of firing ports: identical fermions must exit through
    distinct ports.
    """
    if any(int(x) != x or x < 0 for x in pattern):
        raise ValueError(f"occupations must be nonnegative integers: {pattern}")
    return sum(1 for x in pattern if x > 0)


def coarsen_threshold(pattern: FockPattern) -> Tuple[int, ...]:
    """Collapse counts to a binary fired / silent vector per detector."""
    if any(int(x) != x or x < 0 for x in pattern):
        raise ValueError(f"occupations must be nonnegative integers: {pattern}")
    return tuple(1 if x > 0 else 0 for x in pattern)


def unambiguous_threshold_signatures(n: int, statistics: Statistics) -> Set[Tuple[int, ...]]:
    """Binary firing vectors that certify a difference under threshold detectors.

    A firing vector qualifies only if every counting pattern coarsening to it
    is itself unambiguous; otherwise an identical-input event could produce
    the same clicks.
    """
    certain = unambiguous_patterns(n, statistics)
    verdict: Dict[Tuple[int, ...], bool] = {}
    for pattern in _spatial_patterns(n):
        signature = coarsen_threshold(pattern)
        verdict[signature] = verdict.get(signature, True) and pattern in certain
    return {sig for sig, ok in verdict.items() if ok}


def realization_efficiency_mc(
    n: int,
    d: int,
    statistics: Statistics,
    trials: int,
    stream: RandomStream,
    threshold: bool = False,
) -> MonteCarloEstimate:
    """Average probability that the multiport certifies a difference.

    Each trial draws n independent Haar internal states of dimension d,
    propagates them through the balanced multiport, and sums the probability
    of all certifying patterns, either at full counting resolution or after
    threshold coarse-graining.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    statistics = Statistics(statistics)
    _check_caps(n, d)
    enum = _mode_enumeration(n, d)
    if threshold:
        good_signatures = unambiguous_threshold_signatures(n, statistics)
        detected = np.array(
            [coarsen_threshold(p) in good_signatures for p in enum.spatial]
        )
    else:
        certain = unambiguous_patterns(n, statistics)
        detected = np.array([p in certain for p in enum.spatial])
    config_detected = detected[enum.spatial_of_config]

    unitary = dft_multiport(n)
    values = np.empty(trials)
    for t in range(trials):
        gen = stream.substream(t).generator()
        raw = gen.normal(size=(n, d)) + 1j * gen.normal(size=(n, d))
        states = [PureState.normalized(row) for row in raw]
        transfer = _transfer_matrix(MultiportInput(states, statistics), unitary)
        probs = _config_probabilities(transfer, enum, statistics)
        values[t] = probs[config_detected].sum()
    return summarize(values)


def pairwise_efficiency_mc(
    n: int,
    d: int,
    statistics: Statistics,
    trials: int,
    stream: RandomStream,
) -> MonteCarloEstimate:
    """Difference detection by comparing disjoint pairs on two-port splitters.

    Fallback for many particles: particles (0, 1), (2, 3), ... meet pairwise
    on balanced two-ports and a difference is certified as soon as any pair
    produces a pattern impossible for identical inputs. An odd last particle
    goes uncompared. Lower efficiency than the full multiport is an observed
    outcome, not a guarantee.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if n < 2:
        raise ValueError("pairwise comparison needs at least two particles")
    statistics = Statistics(statistics)
    _check_caps(2, d)
    two_port = dft_multiport(2)
    certain = unambiguous_patterns(2, statistics)
    values = np.empty(trials)
    for t in range(trials):
        gen = stream.substream(t).generator()
        raw = gen.normal(size=(n, d)) + 1j * gen.normal(size=(n, d))
        states = [PureState.normalized(row) for row in raw]
        all_missed = 1.0
        for a in range(0, n - 1, 2):
            pair = MultiportInput(states[a:a + 2], statistics)
            dist = output_distribution(pair, two_port)
            caught = sum(p for pattern, p in dist.items() if pattern in certain)
            all_missed *= 1.0 - caught
        values[t] = 1.0 - all_missed
    return summarize(values)
