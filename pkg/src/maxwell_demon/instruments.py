"""Operations in Kraus form, instruments, and conditional-action instruments.

A *Maxwell instrument* is a Lüders measurement followed by a unitary that
depends on the outcome: outcome ``n`` has the single Kraus operator
``U_n P_n``.  :func:`recover_maxwell_form` goes the other way and extracts
``(P_n, U_n)`` from any pure instrument with a sharp induced POVM.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimMismatch,
    LabelMismatch,
    NotMaxwell,
    NotTracePreserving,
    TraceIncreasing,
    UnknownOutcome,
)
from .linalg import TOL_EIG, as_matrix, dagger, polar_decompose
from .states import (
    Effect,
    UnitaryFamily,
    _frozen,
    as_state,
    validate_projection_family,
    vn_entropy,
)

TOL_RANK = 1e-9
DEMONIC_MARGIN = 1e-10


@dataclass(frozen=True)
class QuantumOperation:
    """Completely positive, trace non-increasing map ``rho -> sum A rho A^dagger``."""

    kraus: tuple

    def __post_init__(self):
        ops = tuple(_frozen(as_matrix(a)) for a in self.kraus)
        if not ops:
            raise ValueError("an operation needs at least one Kraus operator")
        d = ops[0].shape[0]
        if any(a.shape[0] != d for a in ops):
            raise DimMismatch("Kraus operators have different dimensions")
        w = np.linalg.eigvalsh(self._gram_sum(ops))
        if w.max() > 1 + TOL_EIG:
            raise TraceIncreasing(f"sum A^dagger A has eigenvalue {w.max():.6g} > 1")
        object.__setattr__(self, "kraus", ops)

    @staticmethod
    def _gram_sum(ops):
        return sum(dagger(a) @ a for a in ops)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    def effect_sum(self) -> np.ndarray:
        """``sum_i A_i^dagger A_i``."""
        return self._gram_sum(self.kraus)

    def __call__(self, rho):
        return apply_operation(self, rho)


@dataclass(frozen=True)
class Instrument:
    """One operation per outcome with a trace-preserving total.

    Outcomes are indexed by position; ``labels`` carries the external names
    used in JSON files (``0..N-1`` by default).
    """

    ops: tuple
    labels: tuple = None

    def __post_init__(self):
        ops = tuple(o if isinstance(o, QuantumOperation) else QuantumOperation(tuple(o))
                    for o in self.ops)
        if not ops:
            raise ValueError("an instrument needs at least one outcome")
        d = ops[0].dim
        if any(o.dim != d for o in ops):
            raise DimMismatch("outcome operations act on different dimensions")
        total = sum(o.effect_sum() for o in ops)
        err = np.linalg.norm(total - np.eye(d))
        if err > TOL_EIG:
            raise NotTracePreserving(f"||sum A^dagger A - 1|| = {err:.3e}")
        labels = tuple(range(len(ops))) if self.labels is None else tuple(self.labels)
        if len(labels) != len(ops) or len(set(labels)) != len(labels):
            raise LabelMismatch(f"labels {labels} do not match {len(ops)} outcomes")
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.ops)

    @property
    def dim(self) -> int:
        return self.ops[0].dim

    def index(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownOutcome(f"no outcome labelled {label!r}") from None

    def __call__(self, n: int, rho) -> np.ndarray:
        """Unnormalized post-measurement state for outcome position ``n``."""
        if not 0 <= n < len(self.ops):
            raise UnknownOutcome(f"outcome {n} out of range")
        return apply_operation(self.ops[n], rho)

    def total(self, rho) -> np.ndarray:
        return apply_operation(total_operation(self), rho)


def apply_operation(op: QuantumOperation, rho) -> np.ndarray:
    r = np.asarray(rho, dtype=complex)
    if r.shape != (op.dim, op.dim):
        raise DimMismatch(f"state of shape {r.shape} for operation on dim {op.dim}")
    k = np.stack(op.kraus)
    return np.einsum("kij,jl,kml->im", k, r, k.conj())


def luders_instrument(ps) -> Instrument:
    """Outcome ``n`` applies the single Kraus operator ``P_n``."""
    ps = validate_projection_family(ps)
    return Instrument(tuple(QuantumOperation((p,)) for p in ps))


def maxwell_instrument(ps, us) -> Instrument:
    """Lüders measurement on ``ps`` followed by the outcome-conditioned unitary."""
    ps = validate_projection_family(ps)
    if not isinstance(us, UnitaryFamily):
        us = UnitaryFamily(tuple(us))
    if len(us) != len(ps):
        raise LabelMismatch(f"{len(ps)} projectors but {len(us)} unitaries")
    if us.dim != ps.dim:
        raise DimMismatch(f"projectors on dim {ps.dim}, unitaries on dim {us.dim}")
    return Instrument(tuple(QuantumOperation((u @ p,)) for p, u in zip(ps, us)))


def total_operation(instr: Instrument) -> QuantumOperation:
    return QuantumOperation(tuple(a for op in instr.ops for a in op.kraus))


def dual_apply(op: QuantumOperation, x) -> np.ndarray:
    """Heisenberg-picture action ``sum A^dagger X A``."""
    xm = np.asarray(x, dtype=complex)
    if xm.shape != (op.dim, op.dim):
        raise DimMismatch(f"effect of shape {xm.shape} for operation on dim {op.dim}")
    k = np.stack(op.kraus)
    return np.einsum("kji,jl,klm->im", k.conj(), xm, k)


def induced_povm(instr: Instrument) -> list[Effect]:
    """Effects ``F_n`` obtained by applying each dual operation to the identity."""
    one = np.eye(instr.dim)
    return [Effect(dual_apply(op, one)) for op in instr.ops]


def gram_matrix(op: QuantumOperation) -> np.ndarray:
    """``G_ij = Tr(A_i^dagger A_j)``."""
    k = np.stack(op.kraus).reshape(len(op.kraus), -1)
    return k.conj() @ k.T


def is_pure(op: QuantumOperation) -> bool:
    """True when the Kraus operators are all proportional (Gram rank <= 1).

    The zero operation counts as pure: it is the single-Kraus map ``A = 0``.
    """
    g = gram_matrix(op)
    w = np.linalg.eigvalsh(g)
    scale = np.abs(w).max()
    if scale == 0:
        return True
    return int(np.sum(w > TOL_RANK * scale)) <= 1


def is_sharp(instr: Instrument, tol: float = TOL_EIG) -> bool:
    return all(f.is_projector(tol) for f in induced_povm(instr))


def single_kraus(op: QuantumOperation) -> np.ndarray:
    """Single Kraus representative of a pure operation.

    A lone Kraus operator is returned as is.  Otherwise the dominant Gram
    eigenvector ``c`` gives ``sum c_i A_i``, with the phase fixed so the
    largest-magnitude entry is real positive.
    """
    if len(op.kraus) == 1:
        return np.array(op.kraus[0])
    _, v = np.linalg.eigh(gram_matrix(op))
    a = np.einsum("k,kij->ij", v[:, -1], np.stack(op.kraus))
    flat = a.reshape(-1)
    big = flat[np.argmax(np.abs(flat))]
    if big != 0:
        a = a * (abs(big) / big)
    return a


def recover_maxwell_form(instr: Instrument):
    """Write a pure, sharp instrument as projectors plus conditional unitaries.

    Returns
    -------
    ProjectionFamily, UnitaryFamily
        ``P_n`` is the positive polar factor of the single Kraus operator of
        outcome ``n`` and ``U_n`` its unitary polar factor.

    Raises
    ------
    NotMaxwell
        ``reason="NotPure"`` or ``"NotSharp"`` with the first failing outcome.
    """
    for n, op in enumerate(instr.ops):
        if not is_pure(op):
            raise NotMaxwell("NotPure", n)
    for n, f in enumerate(induced_povm(instr)):
        if not f.is_projector():
            raise NotMaxwell("NotSharp", n)
    ps, us = [], []
    for op in instr.ops:
        u, p = polar_decompose(single_kraus(op))
        # p^2 is a projector, so p is the same projector; snap away round-off
        w, v = np.linalg.eigh(p)
        keep = v[:, w > 0.5]
        ps.append(keep @ dagger(keep))
        us.append(u)
    return validate_projection_family(ps), UnitaryFamily(tuple(us))


def is_demonic(instr: Instrument, rho) -> bool:
    """True when the total operation strictly lowers the entropy of ``rho``."""
    rho = as_state(rho)
    return vn_entropy(instr.total(rho)) < vn_entropy(rho) - DEMONIC_MARGIN


def instrument_distance(a: Instrument, b: Instrument) -> float:
    """Max over outcomes and matrix units ``|i><j|`` of the operator-norm difference."""
    if len(a) != len(b) or a.dim != b.dim:
        return float("inf")
    d = a.dim
    worst = 0.0
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            for n in range(len(a)):
                diff = apply_operation(a.ops[n], e) - apply_operation(b.ops[n], e)
                worst = max(worst, float(np.linalg.norm(diff, 2)))
    return worst


def sqrt_instrument(effects: Sequence) -> Instrument:
    """Instrument with Kraus operators ``sqrt(F_n)`` for a POVM ``F``."""
    ops = []
    for f in effects:
        w, v = np.linalg.eigh(np.asarray(f, dtype=complex))
        ops.append(QuantumOperation(((v * np.sqrt(np.clip(w, 0, None))) @ dagger(v),)))
    return Instrument(tuple(ops))
