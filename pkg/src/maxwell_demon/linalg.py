"""Dense complex linear algebra used throughout the package.

All operators are plain ``numpy`` arrays of shape ``(d, d)``.  Tensor
products follow the ``numpy.kron`` convention: the first factor is the slow
(outer) index, so ``H (x) K`` has flat index ``h * dim(K) + k``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitian, ShapeMismatch

#: Hermiticity tolerance (Frobenius norm of ``m - m^dagger``).
TOL_HERM = 1e-9
#: Tolerance for eigen/polar decompositions, unitarity and projector checks.
TOL_EIG = 1e-9
#: Eigenvalues with absolute value below this are exact zeros for entropies.
EPS_S = 1e-12

CANONICAL = "canonical"
ANCILLA_OUTER = "ancilla-outer"


@dataclass(frozen=True)
class TensorShape:
    """Factor dimensions of a two-factor (or longer) tensor product space."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"factor dimensions must be positive, got {self.dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a square complex array, rejecting NaN/Inf."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def tensor(a, b) -> np.ndarray:
    """Kronecker product with ``a`` as the outer (slow) factor."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(m, shape, keep: int = 0) -> np.ndarray:
    """Trace out every factor of ``shape`` except ``keep``.

    Parameters
    ----------
    m : array_like
        Operator on the product space, in canonical (first factor slow) order.
    shape : TensorShape or sequence of int
        Factor dimensions; their product must equal ``m.shape[0]``.
    keep : int
        Index of the factor that survives.

    Returns
    -------
    numpy.ndarray
        Reduced operator of dimension ``shape.dims[keep]``.
    """
    m = as_matrix(m)
    if not isinstance(shape, TensorShape):
        shape = TensorShape(tuple(shape))
    if shape.total != m.shape[0]:
        raise ShapeMismatch(
            f"factor dimensions {shape.dims} do not multiply to {m.shape[0]}"
        )
    nf = len(shape.dims)
    if not 0 <= keep < nf:
        raise ValueError(f"keep={keep} out of range for {nf} factors")
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = letters[:nf]
    cols = "".join(rows[f] if f != keep else letters[nf + f] for f in range(nf))
    spec = f"{rows}{cols}->{rows[keep]}{cols[keep]}"
    return np.einsum(spec, m.reshape(shape.dims + shape.dims))


def reorder_layout(m, dims, source: str = ANCILLA_OUTER) -> np.ndarray:
    """Convert a two-factor operator between layouts.

    ``dims`` is ``(dim_H, dim_K)``.  In ``ancilla-outer`` layout the flat index
    is ``k * dim_H + h``; in canonical layout it is ``h * dim_K + k``.  Passing
    ``source="canonical"`` performs the inverse conversion.
    """
    m = as_matrix(m)
    dh, dk = (int(d) for d in dims)
    if dh * dk != m.shape[0]:
        raise ShapeMismatch(f"dims {dims} do not match matrix dimension {m.shape[0]}")
    if source == CANONICAL:
        t = m.reshape(dh, dk, dh, dk).transpose(1, 0, 3, 2)
    elif source == ANCILLA_OUTER:
        t = m.reshape(dk, dh, dk, dh).transpose(1, 0, 3, 2)
    else:
        raise ValueError(f"unknown layout {source!r}")
    return t.reshape(dh * dk, dh * dk)


def hermiticity_defect(m) -> float:
    m = np.asarray(m)
    return float(np.linalg.norm(m - dagger(m)))


def hermitian_eig(m, tol: float = TOL_HERM):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending.

    The input is symmetrized before diagonalization.  Ties keep the order
    returned by LAPACK (stable sort), so repeated calls are deterministic.

    Returns
    -------
    eigenvalues : numpy.ndarray
        Real, sorted in descending order.
    eigenvectors : numpy.ndarray
        Unitary matrix whose columns are the matching eigenvectors.
    """
    m = as_matrix(m)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NotHermitian(f"||m - m^dagger||_F = {defect:.3e} exceeds {tol:.1e}")
    w, v = np.linalg.eigh(0.5 * (m + dagger(m)))
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def polar_decompose(a):
    """Right polar decomposition ``a = u @ p`` computed from the SVD.

    With ``a = W S X^dagger`` this returns ``u = W X^dagger`` and
    ``p = X S X^dagger``.  For singular ``a`` the unitary factor is fixed on
    ``ker(a)`` by the pairing of singular vectors.
    """
    a = as_matrix(a)
    w, s, xh = np.linalg.svd(a)
    u = w @ xh
    p = dagger(xh) @ (s[:, None] * xh)
    p = 0.5 * (p + dagger(p))
    return u, p


def is_unitary(u, tol: float = TOL_EIG) -> bool:
    u = np.asarray(u)
    return bool(np.linalg.norm(dagger(u) @ u - np.eye(u.shape[0])) <= tol)


def range_basis(p) -> np.ndarray:
    """Orthonormal columns spanning the eigenvalue-1 space of a projector."""
    w, v = hermitian_eig(p)
    return v[:, w > 0.5]


def complete_basis(cols: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``span(cols)``.

    ``cols`` must have orthonormal columns.  Uses a complete QR
    factorization; the result has ``d - cols.shape[1]`` columns.
    """
    cols = np.asarray(cols, dtype=complex)
    d, r = cols.shape
    if r == 0:
        return np.eye(d, dtype=complex)
    q, _ = np.linalg.qr(cols, mode="complete")
    return q[:, r:]


def basis_projector(index: int, dim: int) -> np.ndarray:
    p = np.zeros((dim, dim), dtype=complex)
    p[index, index] = 1.0
    return p
