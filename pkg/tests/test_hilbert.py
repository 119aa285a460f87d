import math

import numpy as np
import pytest

from statecomp import (
    NumericalCheckError,
    Operator,
    PureState,
    RandomStream,
    WeightedEnsemble,
    density_of,
    expectation,
    haar_random_state,
    hermitian_eig,
    tensor_product,
    trine_scenario,
)
from statecomp.symmetry import symmetric_projector


def test_pure_state_requires_unit_norm():
    with pytest.raises(ValueError):
        PureState([1.0, 1.0])
    state = PureState.normalized([1.0, 1.0])
    assert abs(np.linalg.norm(state.amplitudes) - 1.0) < 1e-15


def test_pure_state_is_immutable():
    state = PureState([1.0, 0.0])
    with pytest.raises(ValueError):
        state.amplitudes[0] = 0.0


def test_operator_must_be_square():
    with pytest.raises(ValueError):
        Operator(np.zeros((2, 3)))


def test_ensemble_probabilities_must_sum_to_one():
    with pytest.raises(ValueError):
        WeightedEnsemble([(0.5, PureState([1, 0])), (0.6, PureState([0, 1]))])
    with pytest.raises(ValueError):
        WeightedEnsemble([(0.5, PureState([1, 0])), (0.5, PureState([0, 1, 0]))])


# --- tensor products ---------------------------------------------------------

def test_tensor_product_basis_states():
    out = tensor_product([PureState([1, 0]), PureState([1, 0])])
    assert np.array_equal(out.amplitudes, [1, 0, 0, 0])
    out = tensor_product([PureState([1, 0]), PureState([0, 1])])
    assert np.array_equal(out.amplitudes, [0, 1, 0, 0])


def test_tensor_product_three_plus_states():
    plus = PureState([1 / math.sqrt(2), 1 / math.sqrt(2)])
    out = tensor_product([plus, plus, plus])
    # expanding the Kronecker product by hand gives a uniform vector
    expected = np.full(8, 1 / (2 * math.sqrt(2)))
    assert np.abs(out.amplitudes - expected).max() < 1e-15


def test_tensor_product_associativity():
    gen = np.random.default_rng(3)
    a, b, c = (PureState.normalized(gen.normal(size=d) + 1j * gen.normal(size=d))
               for d in (2, 3, 2))
    flat = tensor_product([a, b, c])
    left_nested = tensor_product([tensor_product([a, b]), c])
    right_nested = tensor_product([a, tensor_product([b, c])])
    assert np.array_equal(flat.amplitudes, left_nested.amplitudes)
    assert np.abs(flat.amplitudes - right_nested.amplitudes).max() < 1e-15


def test_tensor_product_rejects_empty():
    with pytest.raises(ValueError):
        tensor_product([])


# --- Haar sampling -----------------------------------------------------------

def test_haar_dim_one_is_a_phase():
    state = haar_random_state(1, RandomStream(5))
    assert abs(abs(state.amplitudes[0]) - 1.0) < 1e-15


def test_haar_rejects_dim_zero():
    with pytest.raises(ValueError):
        haar_random_state(0, RandomStream(5))


def test_haar_same_stream_same_state():
    a = haar_random_state(6, RandomStream(99).substream(3))
    b = haar_random_state(6, RandomStream(99).substream(3))
    assert np.array_equal(a.amplitudes, b.amplitudes)
    c = haar_random_state(6, RandomStream(99).substream(4))
    assert not np.array_equal(a.amplitudes, c.amplitudes)


def test_haar_second_moment_matches_flat_average():
    dim, trials = 4, 20_000
    stream = RandomStream(17)
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
    se_re = np.sqrt((sq_re / trials - mean.real ** 2) / trials)
    se_im = np.sqrt(np.clip(sq_im / trials - mean.imag ** 2, 0, None) / trials)
    assert np.all(np.abs(mean.real - np.eye(dim) / dim) <= 5 * se_re + 1e-12)
    assert np.all(np.abs(mean.imag) <= 5 * se_im + 1e-12)


# --- densities ---------------------------------------------------------------

def test_density_of_single_member():
    rho = density_of(WeightedEnsemble([(1.0, PureState([1, 0]))]))
    assert np.array_equal(rho.entries, [[1, 0], [0, 0]])


def test_density_of_trine_same_hypothesis():
    scenario = trine_scenario()
    members = [(1 / 3, tensor_product([s, s])) for s in scenario.state_set]
    rho = density_of(WeightedEnsemble(members))
    assert abs(rho.trace().real - 1.0) < 1e-10
    eigenvalues = np.linalg.eigvalsh(rho.entries)
    assert (eigenvalues > 1e-10).sum() <= 3
    assert eigenvalues.min() > -1e-10


def test_density_of_orthogonal_pair_is_maximally_mixed_on_span():
    rho = density_of(WeightedEnsemble([(0.5, PureState([1, 0])), (0.5, PureState([0, 1]))]))
    assert np.abs(rho.entries - np.eye(2) / 2).max() < 1e-15


# --- eigendecomposition ------------------------------------------------------

def test_hermitian_eig_simple():
    vals, vecs = hermitian_eig(Operator(np.diag([1.0, -1.0])))
    assert np.allclose(vals, [1.0, -1.0])
    assert np.allclose(vecs.conj().T @ vecs, np.eye(2), atol=1e-12)


def test_hermitian_eig_reconstructs():
    gen = np.random.default_rng(11)
    g = gen.normal(size=(6, 6)) + 1j * gen.normal(size=(6, 6))
    op = Operator(g + g.conj().T)
    vals, vecs = hermitian_eig(op)
    assert np.all(np.diff(vals) <= 1e-12)
    rebuilt = (vecs * vals) @ vecs.conj().T
    assert np.linalg.norm(rebuilt - op.entries) < 1e-9
    assert abs(vals.sum() - op.trace().real) < 1e-9


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eig(Operator([[0, 1], [0, 0]]))


def test_hermitian_eig_trine_difference_operator():
    from statecomp import build_hypotheses
    pair = build_hypotheses(trine_scenario())
    weighted = Operator(pair.p_same * pair.rho_same.entries
                        - pair.p_diff * pair.rho_diff.entries)
    vals, _ = hermitian_eig(weighted)
    expected = np.array([1 / 12, -1 / 12, -1 / 12, -1 / 4])
    assert np.abs(vals - expected).max() < 1e-10


# --- expectation values ------------------------------------------------------

def test_expectation_identity_is_one():
    psi = haar_random_state(5, RandomStream(2))
    assert abs(expectation(Operator.identity(5), psi) - 1.0) < 1e-12


def test_expectation_singlet_has_no_symmetric_part():
    singlet = PureState(np.array([0, 1, -1, 0]) / math.sqrt(2))
    sym = symmetric_projector(2, 2)
    assert abs(expectation(sym, singlet)) < 1e-14


def test_expectation_haar_product_average():
    # flat average of the nonsymmetric weight over product pairs is 1/4
    nonsym = Operator(np.eye(4) - symmetric_projector(2, 2).entries)
    stream = RandomStream(23)
    values = np.empty(20_000)
    for t in range(values.size):
        pair = tensor_product([
            haar_random_state(2, stream.substream(t, 0)),
            haar_random_state(2, stream.substream(t, 1)),
        ])
        values[t] = expectation(nonsym, pair)
    std_error = values.std(ddof=1) / math.sqrt(values.size)
    assert abs(values.mean() - 0.25) < 5 * std_error


def test_expectation_stays_within_spectrum():
    gen = np.random.default_rng(7)
    g = gen.normal(size=(4, 4)) + 1j * gen.normal(size=(4, 4))
    op = Operator(g + g.conj().T)
    vals = np.linalg.eigvalsh(op.entries)
    for k in range(10):
        value = expectation(op, haar_random_state(4, RandomStream(40).substream(k)))
        assert vals[0] - 1e-10 <= value <= vals[-1] + 1e-10


def test_expectation_accepts_density_and_checks_dims():
    rho = density_of(WeightedEnsemble([(1.0, PureState([0, 1]))]))
    assert abs(expectation(Operator(np.diag([0.0, 3.0])), rho) - 3.0) < 1e-12
    with pytest.raises(ValueError):
        expectation(Operator.identity(3), PureState([1, 0]))


def test_expectation_rejects_non_hermitian_observable():
    with pytest.raises(ValueError):
        expectation(Operator([[0, 1j], [0, 0]]), PureState([1, 0]))


def test_expectation_flags_large_imaginary_residue():
    observable = Operator([[1.0, 1.0], [1.0, 1.0]])
    skewed = Operator([[0.5, 0.0], [1j, 0.5]])  # not a density matrix
    with pytest.raises(NumericalCheckError):
        expectation(observable, skewed)
