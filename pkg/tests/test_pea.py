import math

import numpy as np
import pytest

from qisorank import linalg
from qisorank.errors import SizeError, ValidationError
from qisorank.operators import (attach_scores, column_normalize, hermitian_decompose,
                                phase_map, stochastic_operator)
from qisorank.pea import (QuantumState, RegisterLayout, equal_superposition, inverse_qft, qft,
                          recovered_eigenvector, run_pea, success_probability)

from graphs import complete, path, random_pairs, random_tuples
from oracles import brute_force_pea, dft_matrix

SQRT2 = np.sqrt(2.0)


def test_equal_superposition():
    st = equal_superposition(RegisterLayout(0, (2, 2)))
    assert np.allclose(st.amplitudes, 0.5)
    st = equal_superposition(RegisterLayout(0, (3,)))
    assert np.allclose(st.amplitudes[:3], 1 / np.sqrt(3)) and st.amplitudes[3] == 0
    layout = RegisterLayout(2, (3, 4))
    st = equal_superposition(layout)
    assert layout.total_dim == 4 * 4 * 4
    assert np.allclose(st.valid_tensor()[0], 1 / np.sqrt(12))
    assert not st.valid_tensor()[1:].any()
    assert np.linalg.norm(st.amplitudes) == pytest.approx(1.0)


def test_layout_cap(monkeypatch):
    monkeypatch.setenv("QISORANK_MAX_STATE", "64")
    with pytest.raises(SizeError):
        RegisterLayout(4, (3, 3))
    RegisterLayout(2, (3, 3))


def test_state_norm_checked():
    with pytest.raises(ValidationError):
        QuantumState(RegisterLayout(0, (2,)), np.array([1.0, 1.0]))
    QuantumState(RegisterLayout(0, (2,)), np.array([1.0, 1.0]), normalized=False)


@pytest.mark.parametrize("t", [1, 2, 3, 5])
def test_qft_matches_dft(t):
    M = 2**t
    rng = np.random.default_rng(t)
    x = rng.normal(size=(M, 3)) + 1j * rng.normal(size=(M, 3))
    assert np.allclose(qft(x), dft_matrix(M, +1) @ x, atol=1e-12)
    assert np.allclose(inverse_qft(x), dft_matrix(M, -1) @ x, atol=1e-12)
    assert np.allclose(inverse_qft(qft(x)), x, atol=1e-12)


def test_success_probability_examples():
    A = stochastic_operator([path(3), complete(2)]).matrix
    p = success_probability(A)
    assert p[0] == pytest.approx(1.0, abs=1e-10) and np.all(p[1:] <= 1e-10)
    H = hermitian_decompose(column_normalize(path(3))).H
    p = success_probability(H)
    assert p[0] == pytest.approx(((2 + SQRT2) / 2) ** 2 / 3, abs=1e-12)
    assert p.sum() == pytest.approx(1.0, abs=1e-9)
    p = success_probability(np.eye(4))
    assert p[0] == pytest.approx(1.0) and not p[1:].any()


def test_success_probability_sums_to_one_for_hermitian():
    for nets in random_pairs(31, 10):
        H = hermitian_decompose(stochastic_operator(nets)).H
        assert success_probability(H).sum() == pytest.approx(1.0, abs=1e-9)


def test_pea_k2k2_dyadic():
    out = run_pea(stochastic_operator([complete(2), complete(2)]), t=4)
    assert out.peak_bin == 8
    assert out.phase_distribution[8] >= 1 - 1e-9
    assert out.recovered_eigenvalue == pytest.approx(1.0)
    assert np.allclose(recovered_eigenvector(out), 0.5)


def test_pea_h_model_p3k2():
    A = stochastic_operator([path(3), complete(2)])
    hm = hermitian_decompose(A)
    out = run_pea(hm, t=8)
    rho, v = linalg.principal_eigenvector(hm.H)
    assert abs(out.recovered_eigenvalue - rho) <= hm.scale_s / 2**7
    assert abs(np.dot(recovered_eigenvector(out), v.real)) >= 0.99
    assert out.phase_distribution.sum() == pytest.approx(1.0, abs=1e-10)
    assert np.linalg.norm(out.post_state.amplitudes) == pytest.approx(1.0, abs=1e-10)


def test_pea_matches_full_matrix_oracle():
    for nets, t in [((path(3),), 3), ((path(3), complete(2)), 4), ((path(4), complete(3)), 3)]:
        hm = hermitian_decompose(stochastic_operator(list(nets)))
        G = (hm.H / hm.scale_s + np.eye(hm.dim)) / 4
        ref = brute_force_pea(G, t)
        out = run_pea(hm, t=t)
        got = out.final_state.valid_tensor().reshape(2**t, -1)
        assert np.max(np.abs(ref - got)) <= 1e-12


def test_pea_sampled_peak_matches_exact():
    model = column_normalize(complete(2))
    exact = run_pea(model, t=4)
    sampled = run_pea(model, t=4, mode="sampled", shots=4096, seed=7)
    assert sampled.peak_bin == exact.peak_bin
    assert sampled.counts.sum() == 4096
    again = run_pea(model, t=4, mode="sampled", shots=4096, seed=7)
    assert np.array_equal(again.counts, sampled.counts)


def test_pea_rejects():
    model = column_normalize(complete(2))
    with pytest.raises(ValidationError):
        run_pea(model, t=1)
    with pytest.raises(ValidationError):
        run_pea(model, t=4, mode="sampled", shots=0)
    with pytest.raises(ValidationError):
        run_pea(model, t=4, mode="noisy")


def test_pea_resolution_warning():
    hm = hermitian_decompose(stochastic_operator([path(3), complete(3)]))
    assert any("resolves the principal phase" in w for w in run_pea(hm, t=2).warnings)
    assert not any("resolves" in w for w in run_pea(hm, t=10).warnings)


def test_recovered_eigenvector_examples():
    out = run_pea(column_normalize(path(3)), t=4)
    assert np.allclose(recovered_eigenvector(out, l1=True), [0.25, 0.5, 0.25], atol=1e-12)
    out = run_pea(hermitian_decompose(column_normalize(path(3))), t=8)
    v = recovered_eigenvector(out)
    assert abs(np.dot(v, np.array([1, SQRT2, 1]) / 2)) >= 0.99
    assert np.all(v >= -1e-8)


def test_probability_one_on_stochastic_operators():
    for nets in random_pairs(32, 10):
        out = run_pea(stochastic_operator(nets), t=3)
        assert out.phase_distribution[4] >= 1 - 1e-9
        assert out.success_probability >= 1 - 1e-9


def test_exact_eigenvector_matches_oracle():
    for nets in random_pairs(33, 10):
        A = stochastic_operator(nets)
        v = recovered_eigenvector(run_pea(A, t=4))
        _, ref = linalg.principal_eigenvector(A.matrix)
        assert abs(np.dot(v, ref.real)) >= 1 - 1e-6


def test_norm_preserved_through_circuit():
    for nets in random_pairs(34, 5):
        hm = hermitian_decompose(stochastic_operator(nets))
        out = run_pea(hm, t=6)
        assert not any("norm drift" in w for w in out.warnings)
        assert np.linalg.norm(out.final_state.amplitudes) == pytest.approx(1.0, abs=1e-9)


def test_separable_product_of_factor_runs():
    for nets in random_tuples(35, 5, 3, connected_support=True):
        joint = recovered_eigenvector(run_pea(stochastic_operator(nets), t=4))
        parts = [recovered_eigenvector(run_pea(column_normalize(n), t=4)) for n in nets]
        prod = parts[0]
        for p in parts[1:]:
            prod = np.kron(prod, p)
        assert np.max(np.abs(joint - prod)) <= 1e-8


def test_commuting_scores_shift_phase_only():
    hm = hermitian_decompose(stochastic_operator([path(3), complete(3)]))
    sim = attach_scores(hm, 0.1 * hm.H @ hm.H)
    out = run_pea(sim, t=8)
    v0 = recovered_eigenvector(run_pea(hm, t=8))
    assert abs(np.dot(recovered_eigenvector(out), v0)) >= 0.99
    rng = np.random.default_rng(1)
    noisy = run_pea(attach_scores(hm, np.diag(rng.random(hm.dim))), t=6)
    assert any("approximate evolution" in w for w in noisy.warnings)
