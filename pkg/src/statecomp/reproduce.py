"""End-to-end verification checks.

Each check recomputes one published quantity or structural guarantee from
scratch and compares it against the frozen expected value at a fixed
tolerance. The registry drives both the ``reproduce`` command and the
acceptance test suite; given the same seed the outcome is bit-for-bit
reproducible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np

from . import comparison, discrimination, multiport, symmetry
from .hilbert import Operator, PureState, haar_random_state
from .sampling import RandomStream

DEFAULT_SEED = 20101


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    passed: bool
    expected: str
    got: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.check_id}: expected {self.expected}, got {self.got}"


_REGISTRY: List[Tuple[str, Callable]] = []


def _check(check_id: str):
    def wrap(fn):
        _REGISTRY.append((check_id, fn))
        return fn
    return wrap


def check_ids() -> List[str]:
    return [check_id for check_id, _ in _REGISTRY]


def run_all(seed: int = DEFAULT_SEED, only: str = "") -> List[CheckResult]:
    """Run every registered check (or those whose id contains ``only``)."""
    results = []
    for check_id, fn in _REGISTRY:
        if only and only not in check_id:
            continue
        stream = RandomStream(seed).substream(_stable_index(check_id))
        try:
            passed, expected, got = fn(stream)
        except Exception as exc:  # a crashed check is a failed check
            passed, expected, got = False, "no exception", f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(check_id, passed, expected, got))
    return results


def _stable_index(check_id: str) -> int:
    # stable across processes, unlike hash()
    return sum((i + 1) * b for i, b in enumerate(check_id.encode())) % 100_000


# ---------------------------------------------------------------------------
# subspace dimensions
# ---------------------------------------------------------------------------

@_check("subspace-dims-three-qubits")
def _dims_three_qubits(stream):
    dims = [symmetry.subspace_dimension(p, 2) for p in symmetry.partitions_of(3, 2)]
    return dims == [4, 4], "[4, 4]", str(dims)


@_check("subspace-dims-four-qubits")
def _dims_four_qubits(stream):
    dims = [symmetry.subspace_dimension(p, 2) for p in symmetry.partitions_of(4, 2)]
    return dims == [5, 9, 2], "[5, 9, 2]", str(dims)


@_check("subspace-dims-five-levels")
def _dims_five_levels(stream):
    parts = symmetry.partitions_of(5, 5)
    total = sum(symmetry.subspace_dimension(p, 5) for p in parts)
    got = f"{len(parts)} subspaces summing to {total}"
    return (len(parts), total) == (7, 3125), "7 subspaces summing to 3125", got


# ---------------------------------------------------------------------------
# average success probability
# ---------------------------------------------------------------------------

@_check("success-analytic-values")
def _success_analytic(stream):
    got = (comparison.success_probability_analytic(2, 2),
           comparison.success_probability_analytic(3, 2))
    return got == (0.25, 0.5), "(0.25, 0.5)", str(got)


def _mc_success_check(n, d, entangled, stream):
    analytic = comparison.success_probability_analytic(n, d)
    est, se = comparison.success_probability_mc(n, d, 100_000, stream, entangled=entangled)
    passed = abs(est - analytic) <= 5 * se
    return passed, f"{analytic} within 5 std errors", f"{est:.6f} +- {se:.6f}"


@_check("success-mc-2-2-entangled")
def _mc_22_ent(stream):
    return _mc_success_check(2, 2, True, stream)


@_check("success-mc-2-2-product")
def _mc_22_prod(stream):
    return _mc_success_check(2, 2, False, stream)


@_check("success-mc-3-2-entangled")
def _mc_32_ent(stream):
    return _mc_success_check(3, 2, True, stream)


@_check("success-mc-3-2-product")
def _mc_32_prod(stream):
    return _mc_success_check(3, 2, False, stream)


# ---------------------------------------------------------------------------
# projector algebra over all n <= 4, d <= 3
# ---------------------------------------------------------------------------

_ALGEBRA_CASES = [(n, d) for n in range(2, 5) for d in range(2, 4)]


def _projector_family(n, d):
    return [(p, symmetry.isotypic_projector(p, d).entries)
            for p in symmetry.partitions_of(n, min(n, d))]


@_check("projector-completeness")
def _completeness(stream):
    worst = 0.0
    for n, d in _ALGEBRA_CASES:
        total = sum(mat for _, mat in _projector_family(n, d))
        diag = np.einsum("ii->i", total)
        diag -= 1.0
        worst = max(worst, float(np.abs(total).max()))
    return worst <= 1e-9, "identity deviation <= 1e-9", f"max deviation {worst:.3e}"


@_check("projector-orthogonality")
def _orthogonality(stream):
    worst = 0.0
    for n, d in _ALGEBRA_CASES:
        family = _projector_family(n, d)
        for (_, a), (_, b) in itertools.combinations(family, 2):
            worst = max(worst, float(np.abs(a @ b).max()))
    return worst <= 1e-9, "cross products <= 1e-9", f"max entry {worst:.3e}"


@_check("projector-idempotence")
def _idempotence(stream):
    worst = 0.0
    for n, d in _ALGEBRA_CASES:
        for _, mat in _projector_family(n, d):
            worst = max(worst, float(np.abs(mat @ mat - mat).max()))
    return worst <= 1e-9, "P@P - P <= 1e-9", f"max deviation {worst:.3e}"


@_check("projector-permutation-commutation")
def _perm_commutation(stream):
    worst = 0.0
    for n, d in _ALGEBRA_CASES:
        family = _projector_family(n, d)
        for images in itertools.permutations(range(n)):
            u = symmetry.permutation_operator(symmetry.Permutation(images), n, d).entries
            for _, mat in family:
                comm = mat @ u - u @ mat
                worst = max(worst, float(np.linalg.norm(comm)))
    return worst <= 1e-8, "commutator norms <= 1e-8", f"max norm {worst:.3e}"


def _haar_unitary(gen, d):
    z = gen.normal(size=(d, d)) + 1j * gen.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@_check("projector-collective-commutation")
def _collective_commutation(stream):
    worst = 0.0
    for case, (n, d) in enumerate(_ALGEBRA_CASES):
        family = _projector_family(n, d)
        for rep in range(10):
            gen = stream.substream(case, rep).generator()
            v = _haar_unitary(gen, d)
            collective = v
            for _ in range(n - 1):
                collective = np.kron(collective, v)
            for _, mat in family:
                comm = mat @ collective - collective @ mat
                worst = max(worst, float(np.linalg.norm(comm)))
    return worst <= 1e-8, "commutator norms <= 1e-8", f"max norm {worst:.3e}"


@_check("projector-symmetrizer-average")
def _symmetrizer_average(stream):
    worst = 0.0
    for n, d in _ALGEBRA_CASES:
        average = np.zeros((d ** n, d ** n), dtype=complex)
        for images in itertools.permutations(range(n)):
            average += symmetry.permutation_operator(symmetry.Permutation(images), n, d).entries
        average /= math.factorial(n)
        sym = symmetry.symmetric_projector(n, d).entries
        worst = max(worst, float(np.abs(average - sym).max()))
    return worst <= 1e-10, "deviation <= 1e-10", f"max deviation {worst:.3e}"


# ---------------------------------------------------------------------------
# pairwise decompositions of the non-symmetric projector
# ---------------------------------------------------------------------------

@_check("pairwise-decomposition-three-qubits")
def _pairwise_three(stream):
    nonsym = np.eye(8) - symmetry.symmetric_projector(3, 2).entries
    combo = (2.0 / 3.0) * sum(
        symmetry.pairwise_antisym_projector(i, j, 3, 2).entries
        for i, j in [(0, 1), (1, 2), (2, 0)]
    )
    dev = float(np.abs(nonsym - combo).max())
    return dev <= 1e-10, "deviation <= 1e-10", f"max deviation {dev:.3e}"


@_check("pairwise-decomposition-four-qubits")
def _pairwise_four(stream):
    nonsym = np.eye(16) - symmetry.symmetric_projector(4, 2).entries
    eye = np.eye(16)
    single = np.zeros((16, 16), dtype=complex)
    double = np.zeros((16, 16), dtype=complex)
    # the six ordered choices of a pair and its complementary pair
    for i, j in itertools.combinations(range(4), 2):
        k, l = sorted(set(range(4)) - {i, j})
        p_ij = symmetry.pairwise_antisym_projector(i, j, 4, 2).entries
        p_kl = symmetry.pairwise_antisym_projector(k, l, 4, 2).entries
        single += p_ij @ (eye - p_kl)
        double += p_ij @ p_kl
    combo = single / 2.0 + double / 3.0
    dev = float(np.abs(nonsym - combo).max())
    return dev <= 1e-10, "deviation <= 1e-10", f"max deviation {dev:.3e}"


# ---------------------------------------------------------------------------
# trine comparison
# ---------------------------------------------------------------------------

def _trine_difference_operator():
    pair = discrimination.build_hypotheses(discrimination.trine_scenario())
    return pair, pair.p_same * pair.rho_same.entries - pair.p_diff * pair.rho_diff.entries


@_check("trine-eigenvalues")
def _trine_eigenvalues(stream):
    _, diff = _trine_difference_operator()
    vals = np.sort(np.linalg.eigvalsh(diff))
    expected = np.array([-1 / 4, -1 / 12, -1 / 12, 1 / 12])
    dev = float(np.abs(vals - expected).max())
    return dev <= 1e-10, "(-1/4, -1/12, -1/12, 1/12)", f"{vals} (deviation {dev:.3e})"


@_check("trine-error-probability")
def _trine_error(stream):
    pair = discrimination.build_hypotheses(discrimination.trine_scenario())
    _, p_error = discrimination.helstrom(pair)
    return abs(p_error - 0.25) <= 1e-10, "0.25", f"{p_error!r}"


@_check("trine-positive-eigenvector")
def _trine_eigenvector(stream):
    _, diff = _trine_difference_operator()
    vals, vecs = np.linalg.eigh(diff)
    top = vecs[:, np.argmax(vals)]
    target = np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2)
    fidelity = abs(np.vdot(target, top)) ** 2
    return fidelity > 1 - 1e-9, "fidelity > 1 - 1e-9", f"fidelity {fidelity!r}"


@_check("trine-guess-error")
def _trine_guess(stream):
    err = discrimination.errorfree_plus_guess(discrimination.trine_scenario())
    return abs(err - 1 / 3) <= 1e-10, "1/3", f"{err!r}"


@_check("trine-simulated-error")
def _trine_simulated(stream):
    scenario = discrimination.trine_scenario()
    strategy, _ = discrimination.helstrom(discrimination.build_hypotheses(scenario))
    est, se = discrimination.simulate_strategy(strategy, scenario, 100_000, stream)
    return abs(est - 0.25) <= 5 * se, "0.25 within 5 std errors", f"{est:.6f} +- {se:.6f}"


# ---------------------------------------------------------------------------
# cost-weighted discrimination
# ---------------------------------------------------------------------------

def _random_pair(gen, dim):
    def density():
        g = gen.normal(size=(dim, dim)) + 1j * gen.normal(size=(dim, dim))
        rho = g @ g.conj().T
        return Operator(rho / np.trace(rho).real)
    p_same = float(gen.uniform(0.1, 0.9))
    return discrimination.HypothesisPair(density(), p_same, density(), 1.0 - p_same)


@_check("bayes-equal-cost-reduction")
def _bayes_equal_cost(stream):
    worst_op, worst_val = 0.0, 0.0
    for i in range(20):
        gen = stream.substream(i).generator()
        pair = _random_pair(gen, int(gen.integers(2, 9)))
        hel_strategy, p_error = discrimination.helstrom(pair)
        bay_strategy, cost = discrimination.bayes(pair, discrimination.MINIMUM_ERROR_COSTS)
        for (_, a), (_, b) in zip(hel_strategy.elements, bay_strategy.elements):
            worst_op = max(worst_op, float(np.abs(a.entries - b.entries).max()))
        worst_val = max(worst_val, abs(cost - p_error))
    passed = worst_op <= 1e-9 and worst_val <= 1e-10
    return passed, "operators within 1e-9, costs within 1e-10", \
        f"op deviation {worst_op:.3e}, cost deviation {worst_val:.3e}"


@_check("correct-error-gap-identity")
def _gap_identity(stream):
    worst = 0.0
    for i in range(20):
        gen = stream.substream(i).generator()
        pair = _random_pair(gen, int(gen.integers(2, 9)))
        strategy, p_error = discrimination.helstrom(pair)
        pi_same = strategy.operator_for(comparison.SAME).entries
        pi_diff = strategy.operator_for(comparison.DIFFERENT).entries
        p_correct = (
            pair.p_same * np.trace(pair.rho_same.entries @ pi_same).real
            + pair.p_diff * np.trace(pair.rho_diff.entries @ pi_diff).real
        )
        diff = pair.p_same * pair.rho_same.entries - pair.p_diff * pair.rho_diff.entries
        abs_sum = float(np.abs(np.linalg.eigvalsh(diff)).sum())
        worst = max(worst, abs((p_correct - (1 - p_correct)) - abs_sum))
        worst = max(worst, abs(p_error - (1 - p_correct)))
    return worst <= 1e-9, "gap identity within 1e-9", f"max deviation {worst:.3e}"


# ---------------------------------------------------------------------------
# multiport distributions
# ---------------------------------------------------------------------------

def _identical_boson_distribution(n):
    inp = multiport.MultiportInput([PureState([1.0, 0.0])] * n,
                                   multiport.Statistics.BOSON)
    return multiport.output_distribution(inp, multiport.dft_multiport(n))


@_check("three-boson-identical-distribution")
def _three_boson(stream):
    dist = _identical_boson_distribution(3)
    expected = {(1, 1, 1): 1 / 3, (3, 0, 0): 2 / 9, (0, 3, 0): 2 / 9, (0, 0, 3): 2 / 9}
    dev = max(abs(dist.get(k, 0.0) - v) for k, v in expected.items())
    stray = max((p for k, p in dist.items() if k not in expected), default=0.0)
    passed = dev <= 1e-10 and stray <= 1e-10
    return passed, "{(1,1,1): 1/3, (3,0,0)-type: 2/9}", \
        f"deviation {dev:.3e}, stray mass {stray:.3e}"


@_check("four-boson-identical-distribution")
def _four_boson(stream):
    dist = _identical_boson_distribution(4)
    expected = {}
    for pattern in [(4, 0, 0, 0), (0, 4, 0, 0), (0, 0, 4, 0), (0, 0, 0, 4)]:
        expected[pattern] = 24 / 256
    for pattern in [(2, 0, 2, 0), (0, 2, 0, 2)]:
        expected[pattern] = 16 / 256
    for pattern in [(2, 1, 0, 1), (1, 2, 1, 0), (0, 1, 2, 1), (1, 0, 1, 2)]:
        expected[pattern] = 32 / 256
    support = {k for k, p in dist.items() if p > 1e-10}
    dev = max(abs(dist.get(k, 0.0) - v) for k, v in expected.items())
    total = sum(expected.values())
    passed = support == set(expected) and dev <= 1e-10 and abs(total - 1.0) <= 1e-10
    return passed, "the ten expected monomials, probabilities summing to 1", \
        f"support of {len(support)}, deviation {dev:.3e}, sum {total!r}"


@_check("unambiguous-pattern-sets")
def _unambiguous_sets(stream):
    ok = True
    notes = []
    sets = {n: multiport.unambiguous_patterns(n, multiport.Statistics.BOSON)
            for n in (2, 3, 4)}
    ok &= (1, 1) in sets[2]
    ok &= all(p in sets[3] for p in itertools.permutations((2, 1, 0)))
    ok &= (1, 1, 1, 1) in sets[4]
    ok &= all(p in sets[4] for p in set(itertools.permutations((3, 1, 0, 0))))
    for n in (2, 3, 4):
        dist = _identical_boson_distribution(n)
        leak = max((dist[p] for p in sets[n]), default=0.0)
        notes.append(f"n={n} identical leak {leak:.3e}")
        ok &= leak < 1e-10
    return bool(ok), "named patterns present, zero identical-input mass", "; ".join(notes)


@_check("fermion-identical-distribution")
def _fermion_identical(stream):
    worst = 1.0
    for n in (2, 3, 4):
        inp = multiport.MultiportInput([PureState([1.0, 0.0])] * n,
                                       multiport.Statistics.FERMION)
        dist = multiport.output_distribution(inp, multiport.dft_multiport(n))
        worst = min(worst, dist[(1,) * n])
    return abs(worst - 1.0) <= 1e-10, "all-singles probability 1", f"minimum {worst!r}"


@_check("fermion-firing-bound")
def _fermion_bound(stream):
    worst = 0.0
    for i in range(20):
        gen = stream.substream(i).generator()
        n = int(gen.integers(2, 5))
        m = int(gen.integers(2, n + 1))
        shared = PureState.normalized(gen.normal(size=2) + 1j * gen.normal(size=2))
        states = [shared] * m + [
            PureState.normalized(gen.normal(size=2) + 1j * gen.normal(size=2))
            for _ in range(n - m)
        ]
        inp = multiport.MultiportInput(states, multiport.Statistics.FERMION)
        dist = multiport.output_distribution(inp, multiport.dft_multiport(n))
        for pattern, p in dist.items():
            if multiport.fermion_identical_bound(pattern) < m:
                worst = max(worst, p)
    return worst <= 1e-9, "mass below the firing bound <= 1e-9", f"max {worst:.3e}"


# ---------------------------------------------------------------------------
# realization efficiency
# ---------------------------------------------------------------------------

_EFFICIENCY_CACHE: Dict[tuple, tuple] = {}


def _efficiency(n, d, threshold, stream, trials=100_000):
    key = (n, d, threshold, stream.seed, stream.path, trials)
    if key not in _EFFICIENCY_CACHE:
        _EFFICIENCY_CACHE[key] = multiport.realization_efficiency_mc(
            n, d, multiport.Statistics.BOSON, trials, stream, threshold=threshold
        )
    return _EFFICIENCY_CACHE[key]


@_check("efficiency-2-2-boson")
def _efficiency_22(stream):
    est, se = _efficiency(2, 2, False, stream)
    return abs(est - 0.25) <= 5 * se, "0.25 within 5 std errors", f"{est:.6f} +- {se:.6f}"


def _shared_efficiency_stream(stream):
    # both three-port checks reuse one sampling run, keyed off the root seed
    return RandomStream(stream.seed, (777,))


@_check("efficiency-3-2-strictly-below")
def _efficiency_32_strict(stream):
    # Known to fail: the exact average detection probability for three
    # qubit-carrying bosons equals the subspace bound 1/2 (the average is
    # linear in each particle's density matrix, hence equals the uniform
    # average over basis-state inputs: 6 of 8 assignments detect with
    # probability 2/3). No sample size can certify a strict gap.
    est, se = _efficiency(3, 2, False, _shared_efficiency_stream(stream))
    passed = est + 5 * se < 0.5
    return passed, "estimate + 5 std errors < 0.5", f"{est:.6f} +- {se:.6f}"


@_check("efficiency-threshold-vs-counting")
def _efficiency_threshold(stream):
    counting = _efficiency(3, 2, False, _shared_efficiency_stream(stream))
    coarse = _efficiency(3, 2, True, _shared_efficiency_stream(stream))
    margin = 5 * math.hypot(counting.std_error, coarse.std_error)
    passed = coarse.estimate <= counting.estimate + margin
    return passed, "threshold <= counting within 5 std errors", \
        f"threshold {coarse.estimate:.6f}, counting {counting.estimate:.6f}"


# ---------------------------------------------------------------------------
# structural guarantees
# ---------------------------------------------------------------------------

@_check("error-free-guarantee")
def _error_free(stream):
    worst = 0.0
    for case, (n, d) in enumerate((n, d) for n in range(2, 6) for d in range(2, 4)):
        nonsym = np.eye(d ** n) - symmetry.symmetric_projector(n, d).entries
        for rep in range(100):
            psi = haar_random_state(d, stream.substream(case, rep)).amplitudes
            joint = psi
            for _ in range(n - 1):
                joint = np.kron(joint, psi)
            worst = max(worst, float(np.vdot(joint, nonsym @ joint).real))
    return worst < 1e-9, "identical products never certified different (< 1e-9)", \
        f"max weight {worst:.3e}"


@_check("haar-second-moment")
def _haar_moment(stream):
    dim, trials = 4, 100_000
    total = np.zeros((dim, dim), dtype=complex)
    sq_re = np.zeros((dim, dim))
    sq_im = np.zeros((dim, dim))
    for t in range(trials):
        psi = haar_random_state(dim, stream.substream(t)).amplitudes
        block = np.outer(psi, psi.conj())
        total += block
        sq_re += block.real ** 2
        sq_im += block.imag ** 2
    mean = total / trials
    se_re = np.sqrt(np.clip(sq_re / trials - mean.real ** 2, 0.0, None) / trials)
    se_im = np.sqrt(np.clip(sq_im / trials - mean.imag ** 2, 0.0, None) / trials)
    dev_re = np.abs(mean.real - np.eye(dim) / dim)
    dev_im = np.abs(mean.imag)
    passed = bool(np.all(dev_re <= 5 * se_re + 1e-12) and np.all(dev_im <= 5 * se_im + 1e-12))
    worst = float(max(dev_re.max(), dev_im.max()))
    return passed, "mean projector = identity/4 entrywise within 5 std errors", \
        f"max entry deviation {worst:.3e}"
