import math

import numpy as np
import pytest

from maxwell_demon.errors import DimensionTooLarge, ParamOutOfRange
from maxwell_demon.sampling import make_rng, random_density
from maxwell_demon.scenarios import (
    SweepTable,
    erasure_unitaries,
    parse_grid,
    run_classical,
    run_die,
    run_erasure,
    run_figure2_sweep,
    run_property_suite,
    run_simple_qmd,
    simple_qmd_closed_form,
    swap_operator,
)
from maxwell_demon.classical import ConditionalMap, Partition

LOG2 = math.log(2)


def test_erasure_unitaries_send_n_to_zero():
    us = erasure_unitaries(4)
    for n, u in enumerate(us):
        np.testing.assert_array_equal(u @ np.eye(4)[:, n], np.eye(4)[:, 0])
        np.testing.assert_array_equal(u @ u.T, np.eye(4))


def test_swap_operator():
    a, b = np.array([1.0, 2, 3]), np.array([0.0, 5, 7])
    np.testing.assert_array_equal(swap_operator(3, 3) @ np.kron(a, b), np.kron(b, a))
    with pytest.raises(ValueError):
        swap_operator(2, 3)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_erasure_uniform(n):
    rep = run_erasure(n)
    assert rep.passed, rep.failures()
    assert rep.entropies["S2"] == pytest.approx(n * LOG2, abs=1e-10)
    assert rep.entropies["S1"] == pytest.approx(0.0, abs=1e-10)


def test_erasure_custom_state():
    rho = random_density(4, make_rng(2))
    rep = run_erasure(2, rho)
    assert rep.passed, rep.failures()
    assert rep.params["state"] == "custom"
    assert "demon_entropy_N_log2" not in [c.name for c in rep.checks]


def test_erasure_pure_input_leaves_no_trace():
    rho = np.zeros((2, 2))
    rho[1, 1] = 1
    rep = run_erasure(1, rho)
    assert rep.passed
    assert rep.entropies["S2"] == pytest.approx(0.0, abs=1e-12)


def test_erasure_bounds():
    with pytest.raises(DimensionTooLarge):
        run_erasure(6)
    with pytest.raises(DimensionTooLarge):
        run_erasure(0)
    with pytest.raises(ValueError):
        run_erasure(2, np.eye(2) / 2)


def test_simple_qmd_reference_point():
    rep = run_simple_qmd(0.3)
    assert rep.passed, rep.failures()
    e = rep.entropies
    assert e["S1"] - e["S0"] == pytest.approx(-0.2079442, abs=1e-7)
    assert e["S2"] == pytest.approx(0.4227090, abs=1e-7)


@pytest.mark.parametrize("p", [1e-9, 0.01, 0.5, 0.99, 1 - 1e-9])
def test_simple_qmd_edges(p):
    rep = run_simple_qmd(p, verify_trials=5)
    assert rep.residual("S1_minus_S0") <= 1e-10
    assert rep.residual("S2_closed_form") <= 1e-10


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
def test_simple_qmd_rejects_boundary(p):
    with pytest.raises(ParamOutOfRange):
        run_simple_qmd(p)


def test_closed_form_oracle():
    # S0 = H(p) + log 2, S1 = H(p) + (1 - p) log 2
    for p in np.linspace(0.05, 0.95, 19):
        h = -(p * math.log(p) + (1 - p) * math.log(1 - p))
        cf = simple_qmd_closed_form(p)
        assert cf["S0"] == pytest.approx(h + LOG2, abs=1e-14)
        assert cf["S1"] == pytest.approx(h + (1 - p) * LOG2, abs=1e-14)


def test_parse_grid():
    assert parse_grid("0.1:0.9:0.1") == pytest.approx([0.1 * k for k in range(1, 10)])
    assert len(parse_grid("0.05:0.95:0.05")) == 19
    assert parse_grid("0.2, 0.4") == [0.2, 0.4]


def test_sweep_and_csv_round_trip():
    table, rep = run_figure2_sweep(parse_grid("0.1:0.9:0.2"))
    assert rep.passed
    assert len(table) == 5
    np.testing.assert_allclose(table.column("S1plusS2"),
                               table.column("S1") + table.column("S2"), atol=1e-15)
    back = SweepTable.from_csv(table.to_csv())
    np.testing.assert_allclose(np.array(back.rows), np.array(table.rows), rtol=1e-14)
    bits = SweepTable.from_csv(table.to_csv(bits=True))
    np.testing.assert_allclose(bits.column("S0"), table.column("S0") / LOG2, rtol=1e-14)


def test_sweep_validation():
    with pytest.raises(ParamOutOfRange):
        run_figure2_sweep([0.0, 0.5])
    with pytest.raises(ValueError):
        SweepTable([(0.5, 1, 1, 1, 2), (0.4, 1, 1, 1, 2)])
    with pytest.raises(ValueError):
        SweepTable.from_csv("a,b\n1,2\n")


def test_die():
    rep = run_die()
    assert rep.passed, rep.failures()
    assert rep.entropies["H_Q2"] == pytest.approx(LOG2, abs=1e-12)


def test_classical_identity_map_needs_no_memory():
    cm = ConditionalMap((0, 1, 2), Partition(((0, 1, 2),)))
    rep = run_classical([0.2, 0.3, 0.5], cm)
    assert rep.passed
    assert rep.entropies["H_Q2"] == 0.0


def test_property_suite_small():
    rep = run_property_suite(dim_max=4, outcomes_max=3, trials=40, seed=1)
    assert rep.passed, rep.failures()
    for name in ("trace_preservation", "luders_monotonicity", "recovery_unitaries",
                 "subadditivity", "demon_compensation"):
        assert rep.residual(name) <= 1e-9


def test_property_suite_zero_trials():
    rep = run_property_suite(trials=0, seed=0)
    assert rep.checks == []
    assert rep.passed


def test_property_suite_corrupt():
    rep = run_property_suite(dim_max=3, outcomes_max=2, trials=5, seed=0, corrupt=True)
    assert not rep.passed
    assert [c.name for c in rep.failures()] == ["generator_validation"]


def test_property_suite_reproducible():
    a = run_property_suite(dim_max=3, outcomes_max=3, trials=10, seed=9).to_dict()
    b = run_property_suite(dim_max=3, outcomes_max=3, trials=10, seed=9).to_dict()
    assert a == b


def test_property_suite_dim_guard():
    with pytest.raises(DimensionTooLarge):
        run_property_suite(dim_max=9, trials=1)
