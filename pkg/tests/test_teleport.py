import itertools
import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_spec
from teleport_channels import teleport
from teleport_channels.channels import (
    apply, choi_distance, correlated_channel, correlated_channel_coherent,
    generalized_depolarizing, single_outcome_channel, uncorrelated_channel,
)
from teleport_channels.qmath import (
    DensityMatrix, PureState, bloch_coefficients, kron, kron_all, max_abs_diff,
    random_density_matrix,
)
from teleport_channels.states import (
    PAULIS, ResourceSpec, bell_diagonal, bell_state, input_state,
)
from teleport_channels.teleport import (
    OUTCOMES, bell_projectors, extract_kraus, extract_kraus_single, outcome_family,
    permutation_unitary, pi_factor, probability_closed_form, simulate_double, simulate_single,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def basis(*bits):
    v = np.zeros(2 ** len(bits))
    v[int("".join(map(str, bits)), 2)] = 1
    return v


# --- permutation unitaries --------------------------------------------------

def test_permutation_identity():
    assert max_abs_diff(permutation_unitary([0, 1, 2], [2, 2, 2]), np.eye(8)) == 0


def test_permutation_swap_two_qubits():
    u = permutation_unitary([1, 0], [2, 2])
    assert max_abs_diff(u @ basis(0, 1), basis(1, 0)) == 0


def test_outer_swap_fixes_middle(rng):
    u = permutation_unitary([2, 1, 0], [2, 2, 2])
    assert max_abs_diff(u @ u, np.eye(8)) == 0
    assert max_abs_diff(u, u.conj().T) == 0
    a, b, c = (rng.standard_normal(2) for _ in range(3))
    assert max_abs_diff(u @ kron_all(a, b, c), kron_all(c, b, a)) < 1e-15


@settings(max_examples=25, deadline=None)
@given(st.permutations(range(4)), seeds)
def test_permutation_relabels_factors(perm, seed):
    rng = np.random.default_rng(seed)
    dims = [2, 3, 2, 2]
    u = permutation_unitary(perm, dims)
    assert max_abs_diff(u.conj().T @ u, np.eye(u.shape[0])) < 1e-12
    vecs = [rng.standard_normal(d) for d in dims]
    assert max_abs_diff(u @ kron_all(*vecs), kron_all(*[vecs[p] for p in perm])) < 1e-12


def test_measurement_order_moves_pairs():
    u = permutation_unitary(teleport.MEASUREMENT_ORDER, [2] * 6)
    # |a b c d e f> on (1..6) -> |a c b e d f> on (1,3,2,5,4,6)
    assert max_abs_diff(u @ basis(1, 0, 0, 1, 1, 0), basis(1, 0, 0, 1, 1, 0)[...] * 0 + basis(1, 0, 0, 1, 1, 0)) == 0
    assert max_abs_diff(u @ basis(0, 1, 0, 0, 0, 0), basis(0, 0, 1, 0, 0, 0)) == 0
    assert max_abs_diff(u @ basis(0, 0, 0, 1, 0, 0), basis(0, 0, 0, 0, 1, 0)) == 0


@pytest.mark.parametrize("perm", [[0, 0, 1], [0, 1], [1, 2, 3]])
def test_permutation_rejects_non_bijection(perm):
    with pytest.raises(ValueError):
        permutation_unitary(perm, [2, 2, 2])


# --- Bell projectors --------------------------------------------------------

def test_bell_projectors():
    proj = bell_projectors()
    assert max_abs_diff(sum(proj.values()), np.eye(4)) < 1e-15
    phi, psi_m = bell_state(1).amplitudes, bell_state(4).amplitudes
    assert max_abs_diff(proj[1] @ phi, phi) < 1e-15
    assert max_abs_diff(proj[1] @ psi_m, np.zeros(4)) < 1e-15
    mixed = np.eye(4) / 4
    for p in proj.values():
        assert abs(np.trace(p @ mixed) - 0.25) < 1e-15
        assert max_abs_diff(p @ p, p) < 1e-15


# --- single pair ------------------------------------------------------------

def test_single_perfect_teleportation(rng):
    rho = random_density_matrix([2], rng)
    for rec in simulate_single(rho, bell_state(1).projector()):
        s = PAULIS[rec.outcome]
        assert abs(rec.probability - 0.25) < 1e-12
        assert max_abs_diff(rec.conditional_state.matrix, s @ rho.matrix @ s) < 1e-12


def test_single_noiseless_outcome_one(rng):
    rho = random_density_matrix([2], rng)
    chi = DensityMatrix(bell_diagonal((1, 0, 0, 0)), (2, 2))
    rec = simulate_single(rho, chi)[0]
    assert rec.outcome == 1
    assert max_abs_diff(rec.conditional_state.matrix, rho.matrix) < 1e-12


def test_single_outcome_one_is_generalized_depolarizing(rng):
    q = rng.dirichlet(np.ones(4))
    plus = PureState([1, 1], (2,)) if False else PureState(np.array([1, 1]) / np.sqrt(2), (2,))
    chi = DensityMatrix(bell_diagonal(q), (2, 2))
    rec = simulate_single(plus.projector(), chi)[0]
    expected = sum(q[k - 1] * PAULIS[k] @ plus.projector().matrix @ PAULIS[k] for k in range(1, 5))
    assert max_abs_diff(rec.conditional_state.matrix, expected) < 1e-10
    assert choi_distance(rec.extracted_channel, generalized_depolarizing(q)) < 1e-10


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_single_closure_any_resource(seed):
    rng = np.random.default_rng(seed)
    rho = random_density_matrix([2], rng)
    chi = random_density_matrix([2, 2], rng)
    recs = simulate_single(rho, chi)
    assert abs(sum(r.probability for r in recs) - 1) < 1e-10
    for rec in recs:
        out, w = apply(rec.extracted_channel, rho)
        assert abs(w / 4 - rec.probability) < 1e-10
        assert max_abs_diff(out.matrix, rec.conditional_state.matrix) < 1e-10


def test_single_outcome_channels_closed_form(rng):
    q = rng.dirichlet(np.ones(4))
    chi = DensityMatrix(bell_diagonal(q), (2, 2))
    for i in range(1, 5):
        assert choi_distance(extract_kraus_single(chi, i), single_outcome_channel(q, i)) < 1e-10


def test_single_rejects_dims(rng):
    with pytest.raises(ValueError):
        simulate_single(input_state(0.1), bell_state(1).projector())


# --- two pairs --------------------------------------------------------------

def test_uncorrelated_probabilities_flat(rng):
    for _ in range(3):
        spec = random_spec(rng, "uncorrelated")
        recs = simulate_double(random_density_matrix([2, 2], rng), spec)
        assert [r.outcome for r in recs] == list(OUTCOMES)
        assert max(abs(r.probability - 1 / 16) for r in recs) < 1e-12


@pytest.mark.parametrize("theta", [0.0, 0.3, np.pi / 6, np.pi / 4])
def test_correlated_p11_matches_pi11(theta, rng):
    spec = random_spec(rng, "correlated")
    rec = simulate_double(input_state(theta), spec)[0]
    r = np.sqrt(spec.q)
    s2 = np.sin(2 * theta)
    pi11 = (1 + 2 * (r[0] * r[2] + r[1] * r[3]) * s2
            + 2 * (r[0] * r[3] + r[1] * r[2]) * s2
            + 2 * (r[0] * r[1] + r[2] * r[3]))
    assert abs(rec.probability - pi11 / 16) < 1e-12


def test_correlated_noiseless_phi_plus():
    phi = bell_state(1).projector()
    rec = simulate_double(phi, ResourceSpec("correlated", (1, 0, 0, 0)))[0]
    assert max_abs_diff(rec.conditional_state.matrix, phi.matrix) < 1e-12


@pytest.mark.parametrize("kind", ["uncorrelated", "correlated"])
def test_oracle_closure(kind, rng):
    for _ in range(3):
        spec = random_spec(rng, kind)
        rho = random_density_matrix([2, 2], rng)
        recs = simulate_double(rho, spec)
        assert abs(sum(r.probability for r in recs) - 1) < 1e-10
        for rec in recs:
            out, w = apply(rec.extracted_channel, rho)
            assert abs(w / 16 - rec.probability) < 1e-10
            assert max_abs_diff(out.matrix, rec.conditional_state.matrix) < 1e-10


def test_extract_uncorrelated_matches_closed_form(rng):
    spec = random_spec(rng, "uncorrelated")
    for outcome in OUTCOMES:
        ch = extract_kraus(spec, outcome)
        assert ch.completeness == "trace_preserving"
        assert choi_distance(ch, uncorrelated_channel(spec.q, outcome)) < 1e-10


def test_extract_correlated_is_single_coherent_operator(rng):
    spec = random_spec(rng, "correlated")
    for outcome in OUTCOMES:
        ch = extract_kraus(spec, outcome)
        assert ch.completeness == "conditional_unnormalized"
        assert choi_distance(ch, correlated_channel_coherent(spec.q, outcome)) < 1e-10


def test_bell_terms_extraction_reproduces_four_term_channel(rng):
    spec = random_spec(rng, "correlated")
    for outcome in OUTCOMES:
        ch = extract_kraus(spec, outcome, "bell-terms")
        assert choi_distance(ch, correlated_channel(spec.q, outcome)) < 1e-10


def test_bell_terms_extraction_breaks_closure_for_correlated(rng):
    spec = ResourceSpec("correlated", (0.4, 0.2, 0.3, 0.1))
    rho = input_state(0.3)
    rec = simulate_double(rho, spec)[0]
    out, w = apply(extract_kraus(spec, rec.outcome, "bell-terms"), rho)
    assert abs(w - 1) < 1e-12  # four unitary terms: no input dependence
    assert abs(16 * rec.probability - 1) > 0.5
    assert max_abs_diff(out.matrix, rec.conditional_state.matrix) > 1e-2


def test_decompositions_agree_for_uncorrelated(rng):
    spec = random_spec(rng, "uncorrelated")
    for outcome in [(1, 1), (3, 2)]:
        a = extract_kraus(spec, outcome)
        b = extract_kraus(spec, outcome, "bell-terms")
        assert choi_distance(a, b) < 1e-12


def test_extract_rejects_bad_arguments(rng):
    spec = random_spec(rng, "uncorrelated")
    with pytest.raises(ValueError):
        extract_kraus(spec, (0, 1))
    with pytest.raises(ValueError):
        extract_kraus(spec, (1, 1), "eigen")


def test_simulate_double_rejects_dims():
    with pytest.raises(ValueError):
        simulate_double(DensityMatrix(np.eye(2) / 2, (2,)), ResourceSpec("correlated", (1, 0, 0, 0)))


def test_simulate_double_deterministic(rng):
    spec = random_spec(rng, "correlated")
    rho = random_density_matrix([2, 2], rng)
    a, b = simulate_double(rho, spec), simulate_double(rho, spec)
    for ra, rb in zip(a, b):
        assert ra.probability == rb.probability
        assert np.array_equal(ra.conditional_state.matrix, rb.conditional_state.matrix)


# --- closed-form probabilities ----------------------------------------------

def test_outcome_families():
    fam = {o: outcome_family(o) for o in OUTCOMES}
    assert {o for o, f in fam.items() if f == 1} == {(1, 1), (2, 2), (3, 3), (4, 4)}
    assert {o for o, f in fam.items() if f == 2} == {(1, 2), (2, 1), (3, 4), (4, 3)}
    assert {o for o, f in fam.items() if f == 3} == {(1, 3), (2, 4), (3, 1), (4, 2)}
    assert {o for o, f in fam.items() if f == 4} == {(1, 4), (2, 3), (3, 2), (4, 1)}


def test_probability_closed_form_trivial_cases(rng):
    c = bloch_coefficients(random_density_matrix([2, 2], rng))
    unc = random_spec(rng, "uncorrelated")
    assert all(probability_closed_form(unc, o, c) == 1 / 16 for o in OUTCOMES)
    noiseless = ResourceSpec("correlated", (1, 0, 0, 0))
    assert all(abs(probability_closed_form(noiseless, o, c) - 1 / 16) < 1e-15 for o in OUTCOMES)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_probability_closed_form_matches_simulation(seed):
    rng = np.random.default_rng(seed)
    spec = random_spec(rng, "correlated")
    rho = random_density_matrix([2, 2], rng)
    c = bloch_coefficients(rho)
    closed = [probability_closed_form(spec, o, c) for o in OUTCOMES]
    assert abs(sum(closed) - 1) < 1e-10
    for rec, p in zip(simulate_double(rho, spec), closed):
        assert abs(rec.probability - p) < 1e-10


def test_pi12_pattern_fails_on_other_families():
    spec = ResourceSpec("correlated", (0.4, 0.2, 0.3, 0.1))
    rho = input_state(0.3)
    c = bloch_coefficients(rho)
    recs = {r.outcome: r.probability for r in simulate_double(rho, spec)}
    swapped = pi_factor(spec.q, 2, c) / 16
    assert abs(recs[(1, 3)] - swapped) > 1e-3
    assert abs(recs[(1, 4)] - swapped) > 1e-3
    assert abs(recs[(1, 3)] - pi_factor(spec.q, 3, c) / 16) < 1e-12
    assert abs(recs[(1, 4)] - pi_factor(spec.q, 4, c) / 16) < 1e-12


def test_probabilities_depend_only_on_diagonal_correlations(rng):
    spec = random_spec(rng, "correlated")
    rho = random_density_matrix([2, 2], rng)
    # averaging over s_k x s_k conjugations keeps c11, c22, c33 and removes the rest
    twirled = sum(kron(PAULIS[k], PAULIS[k]) @ rho.matrix @ kron(PAULIS[k], PAULIS[k])
                  for k in range(1, 5)) / 4
    other = DensityMatrix(twirled, (2, 2))
    ca, cb = bloch_coefficients(rho), bloch_coefficients(other)
    assert max_abs_diff(np.diag(ca.c_matrix), np.diag(cb.c_matrix)) < 1e-12
    assert max_abs_diff(ca.c_matrix, cb.c_matrix) > 1e-3 or max(map(abs, ca.a)) > 1e-3
    pa = [r.probability for r in simulate_double(rho, spec)]
    pb = [r.probability for r in simulate_double(other, spec)]
    assert max_abs_diff(np.array(pa), np.array(pb)) < 1e-10


def test_simulate_double_under_one_second(rng):
    spec = random_spec(rng, "correlated")
    rho = random_density_matrix([2, 2], rng)
    start = time.perf_counter()
    simulate_double(rho, spec)
    assert time.perf_counter() - start < 1.0
