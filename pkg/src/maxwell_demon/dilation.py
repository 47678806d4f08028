"""Measurement dilations of conditional-action instruments and their entropy budget.

A dilation realizes an instrument on ``H`` as: prepare the ancilla ``K`` in
the basis state ``phi``, evolve ``H (x) K`` with a unitary ``V``, measure the
ancilla projectors ``Q_n``, and trace out ``K``.  All operators on
``H (x) K`` are stored in canonical order (object system outer).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DilationMismatch, DimMismatch, DimensionTooLarge, NotUnitary, UnknownOutcome
from .instruments import Instrument, induced_povm, maxwell_instrument
from .linalg import (
    TOL_EIG,
    as_matrix,
    basis_projector,
    complete_basis,
    dagger,
    hermitian_eig,
    partial_trace,
    range_basis,
)
from .sampling import haar_unitary, make_rng, random_density
from .states import (
    ProjectionFamily,
    UnitaryFamily,
    as_state,
    entropy_from_eigenvalues,
    shannon_entropy,
    validate_projection_family,
    vn_entropy,
)

VERIFY_THRESHOLD = 1e-9
BALANCE_TOL = 1e-9
MAX_SEARCH_DIM = 8


@dataclass(frozen=True)
class DilationSpec:
    """Ancilla dimension, initial ancilla basis index, coupling unitary and ancilla projectors."""

    object_dim: int
    ancilla_dim: int
    phi_index: int
    v: np.ndarray
    q: ProjectionFamily

    def __post_init__(self):
        v = as_matrix(self.v)
        total = self.object_dim * self.ancilla_dim
        if v.shape[0] != total:
            raise DimMismatch(f"V has dimension {v.shape[0]}, expected {total}")
        err = np.linalg.norm(dagger(v) @ v - np.eye(total))
        if err > TOL_EIG:
            raise NotUnitary(f"||V^dagger V - 1|| = {err:.3e}")
        q = validate_projection_family(self.q)
        if q.dim != self.ancilla_dim:
            raise DimMismatch(f"ancilla projectors on dim {q.dim}, expected {self.ancilla_dim}")
        if not 0 <= self.phi_index < self.ancilla_dim:
            raise ValueError(f"phi_index {self.phi_index} outside ancilla basis")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "q", q)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.object_dim, self.ancilla_dim)

    @property
    def p_phi(self) -> np.ndarray:
        return basis_projector(self.phi_index, self.ancilla_dim)

    def __len__(self):
        return len(self.q)


def range_eigenbasis(p, rho=None):
    """Orthonormal basis of ``range(p)``, diagonalizing ``p rho p`` when ``rho`` is given.

    Returns the basis columns and the matching eigenvalues of ``p rho p``
    (descending; ones when ``rho`` is omitted).
    """
    b = range_basis(p)
    if b.shape[1] == 0 or rho is None:
        return b, np.ones(b.shape[1])
    w, x = hermitian_eig(dagger(b) @ np.asarray(rho) @ b)
    return b @ x, w


def partial_isometry(ps, us, rho=None):
    """Coupling map on ``H (x) |phi>`` sending ``|n i> (x) |phi>`` to ``U_n |n i> (x) |n>``.

    Returns
    -------
    v1 : numpy.ndarray
        The map as an operator on ``H (x) K`` (zero on the complement of the domain).
    domain : numpy.ndarray
        Orthonormal columns spanning ``H (x) |phi>`` in the order used to define ``v1``.
    images : numpy.ndarray
        ``v1 @ domain``.
    """
    ps = validate_projection_family(ps)
    us = us if isinstance(us, UnitaryFamily) else UnitaryFamily(tuple(us))
    k = len(ps)
    phi = np.zeros(k)
    phi[0] = 1.0
    dom, img = [], []
    for n, (p, u) in enumerate(zip(ps, us)):
        basis, _ = range_eigenbasis(p, rho)
        ket_n = np.zeros(k)
        ket_n[n] = 1.0
        for i in range(basis.shape[1]):
            dom.append(np.kron(basis[:, i], phi))
            img.append(np.kron(u @ basis[:, i], ket_n))
    domain = np.array(dom).T
    images = np.array(img).T
    return images @ dagger(domain), domain, images


def build_standard_dilation(ps, us, rho=None) -> DilationSpec:
    """Standard dilation: ``K = C^N``, ``phi = |0>``, ``Q_n = |n><n|``.

    The partial isometry is extended to a unitary by pairing a QR completion of
    its range with the ancilla sectors ``H (x) |n>``, ``n != 0``, in index order.
    """
    ps = validate_projection_family(ps)
    d, k = ps.dim, len(ps)
    _, domain, images = partial_isometry(ps, us, rho)
    dom_rest = np.array([np.kron(np.eye(d)[:, h], np.eye(k)[:, j])
                         for h in range(d) for j in range(1, k)]).reshape(-1, d * k).T
    img_rest = complete_basis(images)
    v = images @ dagger(domain)
    if dom_rest.size:
        v = v + img_rest @ dagger(dom_rest)
    q = validate_projection_family([basis_projector(n, k) for n in range(k)])
    return DilationSpec(object_dim=d, ancilla_dim=k, phi_index=0, v=v, q=q)


def joint_state(spec: DilationSpec, rho) -> np.ndarray:
    """``V (rho (x) P_phi) V^dagger``."""
    r = np.asarray(rho, dtype=complex)
    if r.shape != (spec.object_dim, spec.object_dim):
        raise DimMismatch(f"state of shape {r.shape} for object dimension {spec.object_dim}")
    return spec.v @ np.kron(r, spec.p_phi) @ dagger(spec.v)


def _branch(spec: DilationSpec, joint: np.ndarray, n: int) -> np.ndarray:
    q = np.kron(np.eye(spec.object_dim), spec.q[n])
    return q @ joint @ q


def apply_dilation(spec: DilationSpec, rho, n: int) -> np.ndarray:
    """Unnormalized reduced state for outcome ``n``: ``Tr_K((1 (x) Q_n) V (rho (x) P_phi) V^dagger (1 (x) Q_n))``."""
    if not 0 <= n < len(spec.q):
        raise UnknownOutcome(f"outcome {n} out of range for {len(spec.q)} ancilla projectors")
    return partial_trace(_branch(spec, joint_state(spec, rho), n), spec.dims, keep=0)


@dataclass
class DilationReport:
    max_residual: float
    per_outcome: list
    trials: int
    threshold: float = VERIFY_THRESHOLD
    reason: str = ""

    @property
    def passed(self) -> bool:
        return not self.reason and self.max_residual <= self.threshold


def verify_dilation(spec: DilationSpec, instr: Instrument, trials: int = 100,
                    seed: int = 0) -> DilationReport:
    """Compare the dilated instrument with ``instr`` on seeded random states.

    The residual is the Frobenius distance of the unnormalized outcome states,
    maximized over trials and outcomes.
    """
    if len(spec.q) != len(instr) or spec.object_dim != instr.dim:
        return DilationReport(float("inf"), [], trials,
                              reason=f"shape mismatch: {len(spec.q)} vs {len(instr)} outcomes, "
                                     f"dim {spec.object_dim} vs {instr.dim}")
    rng = make_rng(seed)
    worst = [0.0] * len(instr)
    for _ in range(trials):
        rho = random_density(instr.dim, rng)
        joint = joint_state(spec, rho)
        for n in range(len(instr)):
            got = partial_trace(_branch(spec, joint, n), spec.dims, keep=0)
            worst[n] = max(worst[n], float(np.linalg.norm(got - instr(n, rho))))
    return DilationReport(max(worst) if worst else 0.0, worst, trials)


@dataclass
class EntropyBalance:
    """Entropies (nats) along the dilation pipeline plus the outcome distribution.

    ``s0`` initial state, ``s_tilde1`` after the plain Lüders measurement,
    ``s_joint`` after the coupling unitary, ``s12`` after the ancilla
    measurement, ``s1`` and ``s2`` of the object and ancilla marginals.
    """

    s0: float
    s_tilde1: float
    s_joint: float
    s12: float
    s1: float
    s2: float
    outcome_probs: np.ndarray
    rho12: np.ndarray = field(repr=False)
    rho1: np.ndarray = field(repr=False)
    rho2: np.ndarray = field(repr=False)
    demon_state_residual: float = float("nan")

    def slacks(self) -> dict:
        """Violation amount of every inequality (positive means violated)."""
        return {
            "unitary_stage": abs(self.s_joint - self.s0),
            "ancilla_measurement": self.s0 - self.s12,
            "subadditivity": self.s12 - (self.s1 + self.s2),
            "demon_compensation": (self.s0 - self.s1) - self.s2,
            "luders_vs_total": self.s_tilde1 - (self.s1 + self.s2),
        }

    def to_dict(self) -> dict:
        return {
            "S0": self.s0, "S_tilde1": self.s_tilde1, "S_joint": self.s_joint,
            "S12": self.s12, "S1": self.s1, "S2": self.s2,
            "p": [float(x) for x in self.outcome_probs],
        }


def entropy_balance(spec: DilationSpec, instr: Instrument, rho) -> EntropyBalance:
    """Track entropy through preparation, coupling, ancilla measurement and separation.

    For ancilla projectors of rank one the demon marginal must equal
    ``sum_n p_n Q_n`` and its entropy the Shannon entropy of ``p``;
    :class:`DilationMismatch` is raised otherwise.
    """
    rho = as_state(rho)
    if len(spec.q) != len(instr) or spec.object_dim != instr.dim:
        raise DimMismatch("dilation and instrument do not describe the same outcomes")
    joint = joint_state(spec, rho)
    rho12 = sum(_branch(spec, joint, n) for n in range(len(spec.q)))
    rho1 = partial_trace(rho12, spec.dims, keep=0)
    rho2 = partial_trace(rho12, spec.dims, keep=1)

    effects = [np.asarray(f) for f in induced_povm(instr)]
    probs = np.array([max(np.trace(rho.mat @ f).real, 0.0) for f in effects])
    probs = probs / probs.sum()
    try:
        ps = validate_projection_family(effects)
        s_tilde1 = vn_entropy(ps.luders(rho))
    except ValueError:
        s_tilde1 = float("nan")

    bal = EntropyBalance(
        s0=vn_entropy(rho), s_tilde1=s_tilde1, s_joint=vn_entropy(joint),
        s12=vn_entropy(rho12), s1=vn_entropy(rho1), s2=vn_entropy(rho2),
        outcome_probs=probs, rho12=rho12, rho1=rho1, rho2=rho2,
    )
    if all(round(np.trace(q).real) == 1 for q in spec.q):
        expected = sum(pn * q for pn, q in zip(probs, spec.q))
        bal.demon_state_residual = float(np.linalg.norm(rho2 - expected))
        if bal.demon_state_residual > BALANCE_TOL:
            raise DilationMismatch(
                f"demon state differs from sum p_n Q_n by {bal.demon_state_residual:.3e}")
        gap = abs(bal.s2 - shannon_entropy(probs))
        if gap > BALANCE_TOL:
            raise DilationMismatch(f"demon entropy differs from H(p) by {gap:.3e}")
    return bal


def optimal_unitaries(rho, ps, target_basis=None) -> UnitaryFamily:
    """Conditional unitaries that stack the largest eigenvalues of every branch.

    For each outcome the eigenvectors of ``P_n rho P_n`` inside ``range(P_n)``,
    sorted by descending eigenvalue, are sent to the leading columns of
    ``target_basis`` (identity by default).  The remaining target columns
    absorb ``range(1 - P_n)``.
    """
    rho = as_state(rho)
    ps = validate_projection_family(ps)
    d = ps.dim
    psi = np.eye(d, dtype=complex) if target_basis is None else as_matrix(target_basis)
    if np.linalg.norm(dagger(psi) @ psi - np.eye(d)) > TOL_EIG:
        raise NotUnitary("target basis is not orthonormal")
    us = []
    for p in ps:
        phis, _ = range_eigenbasis(p, rho.mat)
        r = phis.shape[1]
        rest = complete_basis(phis)
        u = psi[:, :r] @ dagger(phis) + psi[:, r:] @ dagger(rest)
        us.append(u)
    return UnitaryFamily(tuple(us))


def conditional_entropy(rho, ps, us) -> float:
    """``S(sum_n U_n P_n rho P_n U_n^dagger)``."""
    rho = as_state(rho)
    return vn_entropy(maxwell_instrument(ps, us).total(rho))


def brute_force_min_entropy(rho, ps, samples: int = 2000, seed: int = 0):
    """Smallest post-action entropy over Haar-random unitary families.

    The candidate from :func:`optimal_unitaries` is always included.  The
    whole sample stream is drawn from ``seed`` up front, so the result does
    not depend on evaluation order.

    Returns
    -------
    best_entropy : float
    best_family : UnitaryFamily
    """
    rho = as_state(rho)
    ps = validate_projection_family(ps)
    d, n_out = ps.dim, len(ps)
    if d > MAX_SEARCH_DIM:
        raise DimensionTooLarge(f"dimension {d} exceeds the search limit {MAX_SEARCH_DIM}")
    candidate = optimal_unitaries(rho, ps)
    best_s, best_family = conditional_entropy(rho, ps, candidate), candidate
    if samples <= 0:
        return best_s, best_family
    rng = make_rng(seed)
    us = haar_unitary(d, rng, size=samples * n_out).reshape(samples, n_out, d, d)
    branches = np.stack([p @ rho.mat @ p for p in ps])
    states = np.einsum("snij,njk,snlk->sil", us, branches, us.conj())
    spectra = np.linalg.eigvalsh(0.5 * (states + dagger(states)))
    ent = np.array([entropy_from_eigenvalues(w) for w in spectra])
    i = int(np.argmin(ent))
    if ent[i] < best_s:
        best_s, best_family = float(ent[i]), UnitaryFamily(tuple(us[i]))
    return best_s, best_family
