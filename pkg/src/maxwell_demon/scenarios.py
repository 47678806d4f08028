"""Worked scenarios and the randomized inequality suite.

Each ``run_*`` function returns a :class:`ScenarioReport` listing every
checked identity with its measured residual.  A residual is the amount by
which an identity or inequality is violated; a check passes when the
residual does not exceed its threshold.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .classical import (
    ConditionalMap,
    FiniteDistribution,
    Partition,
    build_classical_dilation,
    pushforward,
)
from .dilation import (
    DilationSpec,
    apply_dilation,
    build_standard_dilation,
    entropy_balance,
    joint_state,
    partial_isometry,
    verify_dilation,
)
from .errors import DimensionTooLarge, NotMaxwell, ParamOutOfRange, NotTracePreserving
from .instruments import (
    Instrument,
    QuantumOperation,
    apply_operation,
    dual_apply,
    is_pure,
    is_sharp,
    maxwell_instrument,
    recover_maxwell_form,
    sqrt_instrument,
)
from .linalg import ANCILLA_OUTER, basis_projector, dagger, reorder_layout
from .sampling import (
    make_rng,
    random_density,
    random_hermitian,
    random_instrument,
    random_maxwell_instrument,
)
from .states import DensityOperator, as_state, shannon_entropy, vn_entropy

LOG2 = math.log(2.0)
CSV_HEADER = ["p", "S0", "S1", "S2", "S1plusS2"]


@dataclass
class Check:
    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.threshold)

    def to_dict(self) -> dict:
        return {"name": self.name, "residual": self.residual,
                "threshold": self.threshold, "passed": self.passed}


@dataclass
class ScenarioReport:
    name: str
    params: dict
    entropies: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    def check(self, name: str, residual: float, threshold: float) -> Check:
        c = Check(name, float(residual), float(threshold))
        self.checks.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def residual(self, name: str) -> float:
        for c in self.checks:
            if c.name == name:
                return c.residual
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"scenario": self.name, "params": self.params, "entropies": self.entropies,
                "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


# --- erasure -----------------------------------------------------------------

def erasure_unitaries(dim: int) -> list:
    """Transposition of ``|0>`` and ``|n>`` for each ``n`` (identity for ``n = 0``)."""
    us = []
    for n in range(dim):
        perm = np.arange(dim)
        perm[[0, n]] = perm[[n, 0]]
        us.append(np.eye(dim)[perm])
    return us


def swap_operator(dim_a: int, dim_b: int) -> np.ndarray:
    """``|a> (x) |b>  ->  |b> (x) |a>`` for equal-sized factors."""
    if dim_a != dim_b:
        raise ValueError("swap needs equal factor dimensions")
    d = dim_a
    v = np.zeros((d * d, d * d))
    for a in range(d):
        for b in range(d):
            v[b * d + a, a * d + b] = 1.0
    return v


def erasure_dilation(n_qubits: int) -> DilationSpec:
    d = 2 ** n_qubits
    return DilationSpec(object_dim=d, ancilla_dim=d, phi_index=0, v=swap_operator(d, d),
                        q=[basis_projector(n, d) for n in range(d)])


def run_erasure(n_qubits: int, rho="uniform", tol: float = 1e-10,
                verify_trials: int = 5, seed: int = 0) -> ScenarioReport:
    """Erase ``n_qubits`` qubits by measuring the computational basis and rotating to ``|0>``."""
    if not 1 <= n_qubits <= 5:
        raise DimensionTooLarge(f"n_qubits={n_qubits} outside 1..5")
    d = 2 ** n_qubits
    uniform = isinstance(rho, str) and rho == "uniform"
    rho = DensityOperator.maximally_mixed(d) if uniform else as_state(rho)
    if rho.dim != d:
        raise ValueError(f"state has dimension {rho.dim}, expected {d}")
    ps = [basis_projector(n, d) for n in range(d)]
    instr = maxwell_instrument(ps, erasure_unitaries(d))
    rep = ScenarioReport("erasure", {"n_qubits": n_qubits, "state": "uniform" if uniform else "custom"})

    out = instr.total(rho)
    p0 = basis_projector(0, d)
    rep.check("output_is_P0", np.linalg.norm(out - p0), tol)
    s_out = vn_entropy(out)
    rep.check("output_entropy_zero", abs(s_out), tol)

    spec = erasure_dilation(n_qubits)
    rep.check("swap_dilation", verify_dilation(spec, instr, verify_trials, seed).max_residual, 1e-9)
    bal = entropy_balance(spec, instr, rho)
    luders = sum(p @ rho.mat @ p for p in ps)
    rep.check("rho1_is_P0", np.linalg.norm(bal.rho1 - p0), tol)
    rep.check("demon_holds_measured_state", np.linalg.norm(bal.rho2 - luders), tol)
    rep.check("demon_entropy_ge_initial", bal.s0 - bal.s2, tol)
    rep.check("demon_entropy_is_shannon",
              abs(bal.s2 - shannon_entropy(bal.outcome_probs)), tol)
    if uniform:
        rep.check("demon_entropy_N_log2", abs(bal.s2 - n_qubits * LOG2), tol)
    rep.entropies = {"S0": bal.s0, "S1": s_out, "S2": bal.s2, "S12": bal.s12}
    return rep


# --- simple model -------------------------------------------------------------

# basis order |rh>, |rc>, |lh>, |lc>
SIMPLE_P1 = np.diag([1.0, 0.0, 0.0, 0.0])
SIMPLE_U1 = np.array([
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [1, 0, 0, 0],
    [0, 0, 0, 1],
], dtype=float)
# coupling unitary on C^4 (x) C^2 written as 2x2 blocks of 4x4 (ancilla outer)
SIMPLE_V_ANCILLA_OUTER = np.array([
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 1, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0],
], dtype=float)


def simple_qmd_instrument() -> Instrument:
    return maxwell_instrument([SIMPLE_P1, np.eye(4) - SIMPLE_P1], [SIMPLE_U1, np.eye(4)])


def simple_qmd_state(p: float) -> DensityOperator:
    """Hot with probability ``p``, position uniformly random."""
    return DensityOperator.diagonal([p / 2, (1 - p) / 2, p / 2, (1 - p) / 2])


def simple_qmd_fixture() -> DilationSpec:
    v = reorder_layout(SIMPLE_V_ANCILLA_OUTER, (4, 2), source=ANCILLA_OUTER)
    return DilationSpec(object_dim=4, ancilla_dim=2, phi_index=0, v=v,
                        q=[np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])


def _xlogx(x: float) -> float:
    return x * math.log(x) if x > 0 else 0.0


def simple_qmd_closed_form(p: float) -> dict:
    s0 = -(_xlogx(p) - p * LOG2 + _xlogx(1 - p) - (1 - p) * LOG2)
    s1 = -(_xlogx(p) + _xlogx(1 - p) - (1 - p) * LOG2)
    s2 = -(_xlogx(p / 2) + _xlogx(1 - p / 2))
    return {"S0": s0, "S1": s1, "S2": s2}


def run_simple_qmd(p: float, tol: float = 1e-10, verify_trials: int = 100,
                   seed: int = 0) -> ScenarioReport:
    """One particle, position r/l and speed h/c; a hot particle on the right is moved left."""
    if not 0 < p < 1:
        raise ParamOutOfRange(f"p={p} must lie in (0, 1)")
    instr = simple_qmd_instrument()
    rho = simple_qmd_state(p)
    closed = simple_qmd_closed_form(p)
    rep = ScenarioReport("simple-qmd", {"p": p})

    rho1_expected = np.diag([0, (1 - p) / 2, p, (1 - p) / 2])
    rep.check("rho1_final_state", np.linalg.norm(instr.total(rho) - rho1_expected), tol)

    fixture = simple_qmd_fixture()
    rep.check("fixture_is_dilation",
              verify_dilation(fixture, instr, verify_trials, seed).max_residual, 1e-9)
    bal = entropy_balance(fixture, instr, rho)
    rep.check("S0_closed_form", abs(bal.s0 - closed["S0"]), tol)
    rep.check("S1_closed_form", abs(bal.s1 - closed["S1"]), tol)
    rep.check("S1_minus_S0", abs((bal.s1 - bal.s0) + p * LOG2), tol)
    rep.check("S1_below_S0", bal.s1 - bal.s0, -1e-12)

    rho12_expected = reorder_layout(
        np.diag([0, 0, p / 2, 0, 0, (1 - p) / 2, p / 2, (1 - p) / 2]), (4, 2), ANCILLA_OUTER)
    rep.check("rho12_diagonal", np.linalg.norm(bal.rho12 - rho12_expected), tol)
    rep.check("rho1_partial_trace", np.linalg.norm(bal.rho1 - rho1_expected), tol)
    rep.check("rho2_demon_state", np.linalg.norm(bal.rho2 - np.diag([p / 2, 1 - p / 2])), tol)
    rep.check("S2_closed_form", abs(bal.s2 - closed["S2"]), tol)
    rep.check("S1_plus_S2_above_S0", bal.s0 - (bal.s1 + bal.s2), -1e-12)
    rep.check("ancilla_measurement_trivial",
              np.linalg.norm(joint_state(fixture, rho) - bal.rho12), tol)

    std = build_standard_dilation([SIMPLE_P1, np.eye(4) - SIMPLE_P1], [SIMPLE_U1, np.eye(4)])
    rep.check("standard_is_dilation",
              verify_dilation(std, instr, verify_trials, seed).max_residual, 1e-9)
    sbal = entropy_balance(std, instr, rho)
    gap = max(abs(a - b) for a, b in zip(
        (bal.s0, bal.s_tilde1, bal.s12, bal.s1, bal.s2),
        (sbal.s0, sbal.s_tilde1, sbal.s12, sbal.s1, sbal.s2)))
    rep.check("standard_matches_fixture", gap, 1e-9)
    rep.entropies = {"S0": bal.s0, "S_tilde1": bal.s_tilde1, "S12": bal.s12,
                     "S1": bal.s1, "S2": bal.s2}
    return rep


@dataclass
class SweepTable:
    """Rows ``(p, S0, S1, S2, S1 + S2)`` over a strictly increasing grid."""

    rows: list

    def __post_init__(self):
        ps = [r[0] for r in self.rows]
        if any(b <= a for a, b in zip(ps, ps[1:])):
            raise ValueError("sweep grid must be strictly increasing")
        if not all(math.isfinite(x) for r in self.rows for x in r):
            raise ValueError("sweep table has non-finite entries")
        self.rows = [tuple(float(x) for x in r) for r in self.rows]

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([r[CSV_HEADER.index(name)] for r in self.rows])

    def to_csv(self, bits: bool = False) -> str:
        scale = 1 / LOG2 if bits else 1.0
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow([f"{r[0]:.15g}"] + [f"{x * scale:.15g}" for x in r[1:]])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SweepTable":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        return cls([tuple(float(x) for x in row) for row in reader if row])


def parse_grid(text: str) -> list:
    """``"start:stop:step"`` (inclusive stop) or a comma-separated list."""
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + k * step, 12) for k in range(n)]
    return [float(x) for x in text.split(",") if x.strip()]


def run_figure2_sweep(grid) -> tuple:
    """Entropies of the simple model over ``grid``.

    Returns the table and a report whose checks cover ``S1 < S0`` and
    ``S1 + S2 > S0`` on every row.
    """
    grid = list(grid)
    if any(not 0 < p < 1 for p in grid):
        raise ParamOutOfRange("every grid point must lie in (0, 1)")
    rows = []
    rep = ScenarioReport("figure2-sweep", {"grid": grid})
    for p in grid:
        r = run_simple_qmd(p, verify_trials=10)
        e = r.entropies
        rows.append((p, e["S0"], e["S1"], e["S2"], e["S1"] + e["S2"]))
        rep.check(f"S1_below_S0[p={p:g}]", e["S1"] - e["S0"], -1e-12)
        rep.check(f"S1_plus_S2_above_S0[p={p:g}]", e["S0"] - (e["S1"] + e["S2"]), -1e-12)
        rep.check(f"S2_closed_form[p={p:g}]", r.residual("S2_closed_form"), 1e-10)
    return SweepTable(rows), rep


# --- classical die ------------------------------------------------------------

# labels: block 0 = high roll (left alone), block 1 = low roll (flipped)
DIE_BLOCKS = ((3, 4, 5), (0, 1, 2))
DIE_PHI = (5, 4, 3, 3, 4, 5)


def run_classical(p, cm: ConditionalMap, j0: int = 0, name: str = "classical",
                  tol: float = 1e-12) -> ScenarioReport:
    """Generic checks for a classical conditional action and its dilation."""
    p = p if isinstance(p, FiniteDistribution) else FiniteDistribution(p)
    q = pushforward(p, cm)
    dil = build_classical_dilation(p, cm, j0)
    h_p, h_q = shannon_entropy(p), shannon_entropy(q)
    h_joint, h_q1, h_q2 = (shannon_entropy(dil.joint), shannon_entropy(dil.q1),
                           shannon_entropy(dil.q2))
    rep = ScenarioReport(name, {"p": p.p.tolist(), "blocks": [list(b) for b in cm.partition.blocks],
                                "phi": list(cm.phi), "j0": j0})
    preimage = np.zeros(len(p))
    for k, i in enumerate(cm.phi):
        preimage[i] += p.p[k]
    rep.check("pushforward_by_enumeration", np.abs(preimage - q.p).max(), tol)
    rep.check("entropy_not_increased", h_q - h_p, tol)
    rep.check("dilation_conserves_entropy", abs(h_joint - h_p), tol)
    rep.check("first_marginal_is_q", np.abs(dil.q1.p - q.p).max(), tol)
    rep.check("memory_compensates", (h_p - h_q) - h_q2, tol)
    rep.check("subadditivity", h_joint - (h_q1 + h_q2), tol)
    rep.entropies = {"H_p": h_p, "H_q": h_q, "H_Q": h_joint, "H_Q1": h_q1, "H_Q2": h_q2}
    return rep


def run_die(tol: float = 1e-12) -> ScenarioReport:
    """Fair die; a low roll is turned upside down, a high roll is left alone."""
    cm = ConditionalMap(DIE_PHI, Partition(DIE_BLOCKS))
    rep = run_classical(FiniteDistribution.uniform(6), cm, j0=0, name="die", tol=tol)
    e = rep.entropies
    rep.check("H_p_log6", abs(e["H_p"] - math.log(6)), tol)
    rep.check("H_q_log3", abs(e["H_q"] - math.log(3)), tol)
    rep.check("H_Q_log6", abs(e["H_Q"] - math.log(6)), tol)
    rep.check("H_Q2_log2", abs(e["H_Q2"] - LOG2), tol)
    rep.check("exact_compensation", abs(e["H_Q2"] + (e["H_q"] - e["H_p"])), tol)
    return rep


# --- randomized suite ---------------------------------------------------------

SUITE_THRESHOLD = 1e-9


def run_property_suite(dim_max: int = 6, outcomes_max: int = 4, trials: int = 200,
                       seed: int = 42, corrupt: bool = False) -> ScenarioReport:
    """Check every inequality and identity on seeded random instances.

    Reports the worst residual per check.  With ``corrupt=True`` a
    non-trace-preserving instrument is fed to the generator validation, which
    must reject it; this shows up as a ``generator_validation`` failure.
    """
    if dim_max > 8:
        raise DimensionTooLarge("property suite is limited to dim_max <= 8")
    rng = make_rng(seed)
    worst: dict = {}

    def record(name, value):
        worst[name] = max(worst.get(name, -math.inf), float(value))

    for _ in range(trials):
        d = int(rng.integers(1, dim_max + 1))
        n_out = int(rng.integers(1, outcomes_max + 1))
        instr, ps, us = random_maxwell_instrument(d, n_out, rng)
        rho = random_density(d, rng, rank=int(rng.integers(1, d + 1)))

        record("trace_preservation",
               abs(sum(np.trace(instr(n, rho)).real for n in range(n_out)) - 1))
        s0 = vn_entropy(rho)
        s_tilde1 = vn_entropy(ps.luders(rho))
        s1 = vn_entropy(instr.total(rho))
        record("luders_monotonicity", s0 - s_tilde1)
        record("conditional_action_decreases", s1 - s_tilde1)

        x = random_hermitian(d, rng)
        for n, op in enumerate(instr.ops):
            lhs = np.trace(apply_operation(op, rho.mat) @ x)
            rhs = np.trace(rho.mat @ dual_apply(op, x))
            record("duality", abs(lhs - rhs))

        forward = all(is_pure(op) for op in instr.ops) and is_sharp(instr)
        record("characterization_forward", 0.0 if forward else 1.0)
        try:
            rp, ru = recover_maxwell_form(instr)
            record("recovery_projectors", max(np.linalg.norm(a - b) for a, b in zip(rp, ps)))
            record("recovery_unitaries",
                   max(np.linalg.norm((a - b) @ p) for a, b, p in zip(ru, us, ps)))
        except NotMaxwell:
            record("recovery_projectors", math.inf)

        impure = random_instrument(d, n_out, rng)
        converse_ok = _rejects(impure, "NotPure") or d == 1
        if d > 1:
            f = np.diag(np.linspace(0.3, 0.7, d))
            unsharp = sqrt_instrument([f, np.eye(d) - f])
            converse_ok = converse_ok and _rejects(unsharp, "NotSharp")
        record("characterization_converse", 0.0 if converse_ok else 1.0)

        v1, domain, images = partial_isometry(ps, us)
        record("partial_isometry", np.linalg.norm(dagger(images) @ images - np.eye(d)))
        spec = build_standard_dilation(ps, us)
        record("dilation_matches_instrument",
               max(np.linalg.norm(apply_dilation(spec, rho.mat, n) - instr(n, rho))
                   for n in range(n_out)))
        bal = entropy_balance(spec, instr, rho)
        for key, val in bal.slacks().items():
            record(key, val)
        record("demon_state", bal.demon_state_residual)

    rep = ScenarioReport("property-suite", {"dim_max": dim_max, "outcomes_max": outcomes_max,
                                            "trials": trials, "seed": seed, "corrupt": corrupt})
    if corrupt:
        d = max(2, min(dim_max, 3))
        try:
            Instrument((QuantumOperation((math.sqrt(0.9) * np.eye(d),)),))
            record("generator_validation", 0.0)
        except NotTracePreserving:
            record("generator_validation", 1.0)
    for name, val in worst.items():
        rep.check(name, val, SUITE_THRESHOLD)
    return rep


def _rejects(instr: Instrument, reason: str) -> bool:
    try:
        recover_maxwell_form(instr)
    except NotMaxwell as exc:
        return exc.reason == reason
    return False

