import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxwell_demon.dilation import (
    DilationSpec,
    apply_dilation,
    brute_force_min_entropy,
    build_standard_dilation,
    conditional_entropy,
    entropy_balance,
    optimal_unitaries,
    partial_isometry,
    verify_dilation,
)
from maxwell_demon.errors import DimensionTooLarge, DimMismatch, NotUnitary, UnknownOutcome
from maxwell_demon.instruments import maxwell_instrument
from maxwell_demon.sampling import (
    haar_unitary,
    make_rng,
    random_density,
    random_maxwell_instrument,
    random_projection_family,
)
from maxwell_demon.scenarios import (
    SIMPLE_P1,
    SIMPLE_U1,
    erasure_unitaries,
    simple_qmd_fixture,
    simple_qmd_instrument,
    simple_qmd_state,
)
from maxwell_demon.states import DensityOperator, shannon_entropy, vn_entropy

P1, P2 = SIMPLE_P1, np.eye(4) - SIMPLE_P1
LOG2 = math.log(2)


def basis_proj(i, d):
    p = np.zeros((d, d))
    p[i, i] = 1
    return p


def test_trivial_dilation():
    spec = build_standard_dilation([np.eye(3)], [np.eye(3)])
    assert spec.ancilla_dim == 1
    np.testing.assert_allclose(spec.v, np.eye(3), atol=1e-12)
    rho = random_density(3, make_rng(1))
    np.testing.assert_allclose(apply_dilation(spec, rho, 0), rho.mat, atol=1e-12)


def test_simple_model_standard_dilation():
    spec = build_standard_dilation([P1, P2], [SIMPLE_U1, np.eye(4)])
    assert spec.ancilla_dim == 2
    assert verify_dilation(spec, simple_qmd_instrument(), 100, 3).passed
    p = 0.3
    total = sum(apply_dilation(spec, simple_qmd_state(p), n) for n in range(2))
    np.testing.assert_allclose(total, np.diag([0, (1 - p) / 2, p, (1 - p) / 2]), atol=1e-12)


def test_fixture_is_dilation():
    rep = verify_dilation(simple_qmd_fixture(), simple_qmd_instrument(), 100, 11)
    assert rep.passed
    assert rep.max_residual <= 1e-9


def test_wrong_dilation_fails():
    spec = DilationSpec(4, 2, 0, np.eye(8), [np.diag([1.0, 0]), np.diag([0, 1.0])])
    rep = verify_dilation(spec, simple_qmd_instrument(), 20, 0)
    assert not rep.passed
    assert rep.max_residual > 0.01


def test_erasure_single_qubit_dilation(rng):
    ps = [basis_proj(0, 2), basis_proj(1, 2)]
    us = erasure_unitaries(2)
    instr = maxwell_instrument(ps, us)
    spec = build_standard_dilation(ps, us)
    for _ in range(10):
        rho = random_density(2, rng)
        for n in range(2):
            np.testing.assert_allclose(apply_dilation(spec, rho, n), instr(n, rho), atol=1e-12)


def test_apply_dilation_kraus_oracle():
    rng = make_rng(5)
    for _ in range(30):
        d = int(rng.integers(1, 6))
        instr, ps, us = random_maxwell_instrument(d, int(rng.integers(1, 5)), rng)
        spec = build_standard_dilation(ps, us)
        rho = random_density(d, rng)
        for n, (p, u) in enumerate(zip(ps, us)):
            direct = u @ p @ rho.mat @ p @ u.conj().T
            assert np.linalg.norm(apply_dilation(spec, rho, n) - direct) <= 1e-9


def test_apply_dilation_errors():
    spec = simple_qmd_fixture()
    with pytest.raises(UnknownOutcome):
        apply_dilation(spec, np.eye(4) / 4, 2)
    with pytest.raises(DimMismatch):
        apply_dilation(spec, np.eye(3) / 3, 0)


def test_dilation_spec_validation():
    with pytest.raises(NotUnitary):
        DilationSpec(2, 2, 0, 2 * np.eye(4), [np.diag([1.0, 0]), np.diag([0, 1.0])])
    with pytest.raises(DimMismatch):
        DilationSpec(2, 2, 0, np.eye(6), [np.diag([1.0, 0]), np.diag([0, 1.0])])


def test_standard_dilation_many_seeds():
    for seed in range(100):
        rng = make_rng(seed)
        d = int(rng.integers(1, 6))
        instr, ps, us = random_maxwell_instrument(d, int(rng.integers(1, 4)), rng)
        assert verify_dilation(build_standard_dilation(ps, us), instr, 3, seed).passed


def test_partial_isometry_lemma(rng):
    _, ps, us = random_maxwell_instrument(5, 3, rng)
    v1, domain, images = partial_isometry(ps, us)
    np.testing.assert_allclose(domain.conj().T @ v1.conj().T @ v1 @ domain, np.eye(5), atol=1e-10)
    # zero off the domain H (x) |phi>
    other = np.kron(np.eye(5)[:, 0], np.eye(3)[:, 1])
    assert np.linalg.norm(v1 @ other) <= 1e-12


def test_dilation_with_state_aligned_basis(rng):
    instr, ps, us = random_maxwell_instrument(4, 2, rng)
    rho = random_density(4, rng)
    spec = build_standard_dilation(ps, us, rho=rho)
    assert verify_dilation(spec, instr, 10, 0).passed


def test_entropy_balance_simple_model():
    p = 0.3
    bal = entropy_balance(simple_qmd_fixture(), simple_qmd_instrument(), simple_qmd_state(p))
    assert bal.s1 - bal.s0 == pytest.approx(-0.2079442, abs=1e-7)
    assert bal.s1 - bal.s0 == pytest.approx(-p * LOG2, abs=1e-12)
    s2_oracle = -(0.15 * math.log(0.15) + 0.85 * math.log(0.85))
    assert bal.s2 == pytest.approx(s2_oracle, abs=1e-12)
    assert bal.s2 == pytest.approx(0.4227090, abs=1e-7)
    np.testing.assert_allclose(bal.outcome_probs, [p / 2, 1 - p / 2], atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_entropy_balance_erasure(n):
    d = 2 ** n
    ps = [basis_proj(k, d) for k in range(d)]
    us = erasure_unitaries(d)
    instr = maxwell_instrument(ps, us)
    bal = entropy_balance(build_standard_dilation(ps, us), instr, DensityOperator.maximally_mixed(d))
    assert bal.s2 == pytest.approx(n * LOG2, abs=1e-10)
    assert bal.s1 == pytest.approx(0.0, abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(1, 6), outcomes=st.integers(1, 4))
def test_entropy_balance_inequalities(seed, dim, outcomes):
    rng = make_rng(seed)
    instr, ps, us = random_maxwell_instrument(dim, outcomes, rng)
    rho = random_density(dim, rng, rank=int(rng.integers(1, dim + 1)))
    bal = entropy_balance(build_standard_dilation(ps, us), instr, rho)
    assert abs(bal.s_joint - bal.s0) <= 1e-10
    assert bal.s12 >= bal.s0 - 1e-10
    assert bal.s12 <= bal.s1 + bal.s2 + 1e-10
    assert bal.s2 >= bal.s0 - bal.s1 - 1e-10
    assert bal.s_tilde1 <= bal.s1 + bal.s2 + 1e-10
    assert bal.demon_state_residual <= 1e-9
    assert abs(bal.s2 - shannon_entropy(bal.outcome_probs)) <= 1e-9


def test_optimal_unitaries_rank_one_gives_pure(rng):
    d = 4
    ps = [basis_proj(k, d) for k in range(d)]
    for _ in range(5):
        rho = random_density(d, rng)
        us = optimal_unitaries(rho, ps)
        assert conditional_entropy(rho, ps, us) == pytest.approx(0.0, abs=1e-12)


def test_optimal_unitaries_single_outcome(rng):
    rho = random_density(3, rng)
    us = optimal_unitaries(rho, [np.eye(3)])
    assert conditional_entropy(rho, [np.eye(3)], us) == pytest.approx(vn_entropy(rho), abs=1e-12)


def test_optimal_unitaries_custom_target(rng):
    rho = random_density(4, rng)
    ps = random_projection_family(4, 2, rng, allow_empty=False)
    target = haar_unitary(4, rng)
    s_default = conditional_entropy(rho, ps, optimal_unitaries(rho, ps))
    s_target = conditional_entropy(rho, ps, optimal_unitaries(rho, ps, target))
    assert s_target == pytest.approx(s_default, abs=1e-10)
    with pytest.raises(NotUnitary):
        optimal_unitaries(rho, ps, 2 * np.eye(4))


def test_optimal_beats_random_search():
    rng = make_rng(3)
    rho = random_density(4, rng)
    a = haar_unitary(4, rng)
    ps = [a[:, :2] @ a[:, :2].conj().T, a[:, 2:] @ a[:, 2:].conj().T]
    s_opt = conditional_entropy(rho, ps, optimal_unitaries(rho, ps))
    us = haar_unitary(4, rng, size=4000).reshape(2000, 2, 4, 4)
    for fam in us:
        assert s_opt <= conditional_entropy(rho, ps, fam) + 1e-9


def test_brute_force_single_projector(rng):
    rho = random_density(3, rng)
    best, _ = brute_force_min_entropy(rho, [np.eye(3)], samples=50, seed=1)
    assert best == pytest.approx(vn_entropy(rho), abs=1e-10)


def test_brute_force_simple_model_not_worse_than_model_choice():
    p = 0.3
    rho = simple_qmd_state(p)
    best, fam = brute_force_min_entropy(rho, [P1, P2], samples=300, seed=4)
    s1 = conditional_entropy(rho, [P1, P2], [SIMPLE_U1, np.eye(4)])
    assert best <= s1 + 1e-12
    assert conditional_entropy(rho, [P1, P2], fam) == pytest.approx(best, abs=1e-12)


def test_brute_force_deterministic():
    rng = make_rng(8)
    rho = random_density(4, rng)
    ps = random_projection_family(4, 2, rng)
    a = brute_force_min_entropy(rho, ps, samples=100, seed=5)
    b = brute_force_min_entropy(rho, ps, samples=100, seed=5)
    assert a[0] == b[0]
    for x, y in zip(a[1], b[1]):
        np.testing.assert_array_equal(x, y)


def test_brute_force_dimension_guard():
    with pytest.raises(DimensionTooLarge):
        brute_force_min_entropy(np.eye(9) / 9, [np.eye(9)], samples=1)
