"""Seeded random generators for states, unitaries and instruments.

Every generator takes a ``numpy.random.Generator``; build one with
:func:`make_rng` from a 64-bit integer seed so runs are reproducible.
"""
from __future__ import annotations

import numpy as np

from .instruments import Instrument, QuantumOperation, maxwell_instrument
from .linalg import dagger
from .states import DensityOperator, UnitaryFamily, validate_projection_family


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & (2**64 - 1)))


def haar_unitary(dim: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-distributed unitary (QR of a complex Ginibre matrix, phases fixed).

    With ``size`` given, returns a stack of shape ``(size, dim, dim)``.
    """
    shape = (dim, dim) if size is None else (size, dim, dim)
    z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phases = diag / np.abs(diag)
    return q * phases[..., None, :]


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityOperator:
    """Random mixed state ``G G^dagger / Tr`` with a Ginibre ``G`` of given rank."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ dagger(g)
    return DensityOperator(m / np.trace(m).real)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (g + dagger(g))


def random_projection_family(dim: int, outcomes: int, rng: np.random.Generator,
                             allow_empty: bool = True):
    """Split the columns of a Haar-random basis into ``outcomes`` projectors.

    Each basis vector goes to a uniformly chosen outcome, so some projectors
    may be zero unless ``allow_empty`` is false (then ``outcomes <= dim``).
    """
    basis = haar_unitary(dim, rng)
    if allow_empty:
        owner = rng.integers(0, outcomes, size=dim)
    else:
        if outcomes > dim:
            raise ValueError("cannot fill more outcomes than the dimension")
        owner = np.concatenate([np.arange(outcomes), rng.integers(0, outcomes, dim - outcomes)])
        owner = rng.permutation(owner)
    ps = []
    for n in range(outcomes):
        cols = basis[:, owner == n]
        ps.append(cols @ dagger(cols))
    return validate_projection_family(ps)


def random_unitary_family(dim: int, outcomes: int, rng: np.random.Generator) -> UnitaryFamily:
    return UnitaryFamily(tuple(haar_unitary(dim, rng, size=outcomes)))


def random_maxwell_instrument(dim: int, outcomes: int, rng: np.random.Generator):
    """Return ``(instrument, projectors, unitaries)`` for a random conditional action."""
    ps = random_projection_family(dim, outcomes, rng)
    us = random_unitary_family(dim, outcomes, rng)
    return maxwell_instrument(ps, us), ps, us


def random_instrument(dim: int, outcomes: int, rng: np.random.Generator,
                      kraus_per_outcome: int = 2) -> Instrument:
    """Generic instrument from a random isometry ``C^d -> C^(d * k)``.

    Impure and unsharp with probability one; used as a negative control for
    the Maxwell-form characterization.
    """
    k = outcomes * kraus_per_outcome
    w = haar_unitary(dim * k, rng)[:, :dim]
    blocks = w.reshape(k, dim, dim)
    ops = [QuantumOperation(tuple(blocks[n * kraus_per_outcome:(n + 1) * kraus_per_outcome]))
           for n in range(outcomes)]
    return Instrument(tuple(ops))
