"""States, effects, projector/unitary families and the two entropy functionals."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimMismatch,
    InvalidEffect,
    InvalidProjectionFamily,
    InvalidState,
    NotUnitary,
)
from .linalg import EPS_S, TOL_EIG, TOL_HERM, as_matrix, dagger, hermiticity_defect

#: Eigenvalues below ``-NEG_TOL`` make a would-be state invalid.
NEG_TOL = 1e-9
TRACE_TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.flags.writeable = False
    return a


class DensityOperator:
    """Validated statistical operator.

    Eigenvalues in ``[-1e-9, 0)`` are clamped to zero and a trace within
    ``1e-9`` of one is renormalized; anything worse raises
    :class:`~maxwell_demon.errors.InvalidState`.
    """

    __slots__ = ("mat", "eigenvalues")

    def __init__(self, mat):
        try:
            m = as_matrix(mat)
        except ValueError as exc:
            raise InvalidState(str(exc)) from exc
        if hermiticity_defect(m) > TOL_HERM:
            raise InvalidState(f"not Hermitian (defect {hermiticity_defect(m):.3e})")
        m = 0.5 * (m + dagger(m))
        w, v = np.linalg.eigh(m)
        if w.min() < -NEG_TOL:
            raise InvalidState(f"negative eigenvalue {w.min():.3e}")
        tr = float(np.sum(w))
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidState(f"trace {tr!r} differs from 1")
        if w.min() < 0 or tr != 1.0:
            w = np.clip(w, 0.0, None)
            w = w / w.sum()
            m = (v * w) @ dagger(v)
        object.__setattr__(self, "mat", _frozen(m))
        ev = np.sort(w)[::-1].copy()
        ev.flags.writeable = False
        object.__setattr__(self, "eigenvalues", ev)

    def __setattr__(self, name, value):
        raise AttributeError("DensityOperator is immutable")

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __repr__(self):
        return f"DensityOperator(dim={self.dim})"

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        return cls(np.eye(dim) / dim)

    @classmethod
    def pure(cls, vector) -> "DensityOperator":
        psi = np.asarray(vector, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def diagonal(cls, probs) -> "DensityOperator":
        return cls(np.diag(np.asarray(probs, dtype=float)))


def as_state(rho) -> DensityOperator:
    return rho if isinstance(rho, DensityOperator) else DensityOperator(rho)


class Effect:
    """Hermitian operator with spectrum in ``[0, 1]`` (within ``1e-9``)."""

    __slots__ = ("mat",)

    def __init__(self, mat):
        m = as_matrix(mat)
        if hermiticity_defect(m) > TOL_HERM:
            raise InvalidEffect("effect is not Hermitian")
        m = 0.5 * (m + dagger(m))
        w = np.linalg.eigvalsh(m)
        if w.min() < -NEG_TOL or w.max() > 1 + NEG_TOL:
            raise InvalidEffect(f"spectrum [{w.min():.3e}, {w.max():.3e}] outside [0, 1]")
        object.__setattr__(self, "mat", _frozen(m))

    def __setattr__(self, name, value):
        raise AttributeError("Effect is immutable")

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)

    def is_projector(self, tol: float = TOL_EIG) -> bool:
        return bool(np.linalg.norm(self.mat @ self.mat - self.mat) <= tol)


@dataclass(frozen=True)
class ProjectionFamily:
    """Complete family of mutually orthogonal projectors, labelled ``0..N-1``.

    Construct through :func:`validate_projection_family`.
    """

    members: tuple

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, n):
        return self.members[n]

    @property
    def dim(self) -> int:
        return self.members[0].shape[0]

    def ranks(self) -> list[int]:
        return [int(round(np.trace(p).real)) for p in self.members]

    def luders(self, rho) -> np.ndarray:
        """Non-selective measurement ``sum_n P_n rho P_n``."""
        r = np.asarray(rho, dtype=complex)
        return sum(p @ r @ p for p in self.members)


@dataclass(frozen=True)
class UnitaryFamily:
    members: tuple

    def __post_init__(self):
        mats = tuple(_frozen(as_matrix(u)) for u in self.members)
        if not mats:
            raise ValueError("empty unitary family")
        d = mats[0].shape[0]
        for n, u in enumerate(mats):
            if u.shape[0] != d:
                raise DimMismatch(f"unitary {n} has dimension {u.shape[0]}, expected {d}")
            err = np.linalg.norm(dagger(u) @ u - np.eye(d))
            if err > TOL_EIG:
                raise NotUnitary(f"member {n}: ||U^dagger U - 1|| = {err:.3e}")
        object.__setattr__(self, "members", mats)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, n):
        return self.members[n]

    @property
    def dim(self) -> int:
        return self.members[0].shape[0]


def validate_projection_family(ps: Sequence, tol: float = TOL_EIG) -> ProjectionFamily:
    """Check idempotence, self-adjointness, orthogonality and completeness.

    Every violation is collected before raising, so the error lists all
    offending indices (pairs for orthogonality).
    """
    if isinstance(ps, ProjectionFamily):
        return ps
    if len(ps) == 0:
        raise InvalidProjectionFamily([("Empty", ())])
    mats = [as_matrix(p) for p in ps]
    d = mats[0].shape[0]
    for n, p in enumerate(mats):
        if p.shape[0] != d:
            raise DimMismatch(f"projector {n} has dimension {p.shape[0]}, expected {d}")
    violations = []
    for n, p in enumerate(mats):
        if hermiticity_defect(p) > tol:
            violations.append(("NotHermitian", (n,)))
        if np.linalg.norm(p @ p - p) > tol:
            violations.append(("NotIdempotent", (n,)))
    for m in range(len(mats)):
        for n in range(m + 1, len(mats)):
            if np.linalg.norm(mats[m] @ mats[n]) > tol:
                violations.append(("NotOrthogonal", (m, n)))
    if np.linalg.norm(sum(mats) - np.eye(d)) > tol:
        violations.append(("NotComplete", tuple(range(len(mats)))))
    if violations:
        raise InvalidProjectionFamily(violations)
    return ProjectionFamily(tuple(_frozen(0.5 * (p + dagger(p))) for p in mats))


def entropy_from_eigenvalues(w) -> float:
    """``-sum w log w`` over eigenvalues above ``EPS_S``.

    A spectrum with a weight of at least ``1 - EPS_S`` is pure and gives 0.
    """
    w = np.asarray(w, dtype=float)
    if w.size and w.max() >= 1.0 - EPS_S:
        return 0.0
    w = w[w > EPS_S]
    return float(-np.sum(w * np.log(w)))


def vn_entropy(rho) -> float:
    """Von Neumann entropy in nats.

    Accepts a :class:`DensityOperator` or anything that validates as one.
    """
    return entropy_from_eigenvalues(as_state(rho).eigenvalues)


def shannon_entropy(p) -> float:
    """Shannon entropy in nats of a finite distribution.

    ``p`` may be a :class:`~maxwell_demon.classical.FiniteDistribution` or a
    plain sequence of probabilities, which is validated first.
    """
    from .classical import FiniteDistribution

    if not isinstance(p, FiniteDistribution):
        p = FiniteDistribution(p)
    return entropy_from_eigenvalues(p.p)

