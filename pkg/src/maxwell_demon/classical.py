"""Classical conditional action on a finite event space.

A measurement is a partition of the events ``0..n-1`` into labelled blocks;
a conditional action is a map that is injective on every block.  Pushing a
distribution through such a map never raises its Shannon entropy, and the
block label recorded in a memory register pays for the decrease.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    InvalidDistribution,
    InvalidPartition,
    NotBlockInjective,
    SizeMismatch,
)

PROB_TOL = 1e-12


@dataclass(frozen=True)
class FiniteDistribution:
    """Probability vector on ``{0, ..., len(p) - 1}``."""

    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float, copy=True).reshape(-1)
        if p.size == 0:
            raise InvalidDistribution("empty distribution")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise InvalidDistribution(f"probabilities must be finite and >= 0: {p}")
        if abs(p.sum() - 1.0) > PROB_TOL:
            raise InvalidDistribution(f"probabilities sum to {p.sum()!r}")
        p.flags.writeable = False
        object.__setattr__(self, "p", p)

    def __len__(self):
        return self.p.size

    def __eq__(self, other):
        if not isinstance(other, FiniteDistribution):
            return NotImplemented
        return self.p.shape == other.p.shape and bool(np.all(self.p == other.p))

    def __hash__(self):
        return hash(self.p.tobytes())

    def entropy(self) -> float:
        from .states import shannon_entropy

        return shannon_entropy(self)

    @classmethod
    def uniform(cls, n: int) -> "FiniteDistribution":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def point_mass(cls, n: int, at: int) -> "FiniteDistribution":
        p = np.zeros(n)
        p[at] = 1.0
        return cls(p)


@dataclass(frozen=True)
class Partition:
    """Disjoint blocks covering ``{0, ..., size - 1}``; block ``j`` has label ``j``."""

    blocks: tuple
    size: int = field(init=False)
    block_of: tuple = field(init=False, repr=False)

    def __post_init__(self):
        blocks = tuple(tuple(int(i) for i in b) for b in self.blocks)
        if not blocks:
            raise InvalidPartition("a partition needs at least one block")
        flat = [i for b in blocks for i in b]
        size = len(flat)
        if sorted(flat) != list(range(size)):
            raise InvalidPartition(f"blocks {blocks} are not a disjoint cover of 0..{size - 1}")
        lookup = [0] * size
        for j, b in enumerate(blocks):
            for i in b:
                lookup[i] = j
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "block_of", tuple(lookup))

    def __len__(self):
        return len(self.blocks)

    @property
    def empty_blocks(self) -> list[int]:
        return [j for j, b in enumerate(self.blocks) if not b]


@dataclass(frozen=True)
class ConditionalMap:
    """Event map ``phi`` that is injective on each block of ``partition``."""

    phi: tuple
    partition: Partition

    def __post_init__(self):
        phi = tuple(int(k) for k in self.phi)
        part = self.partition
        if not isinstance(part, Partition):
            part = Partition(part)
        if len(phi) != part.size:
            raise SizeMismatch(f"phi has {len(phi)} entries for {part.size} events")
        if any(not 0 <= k < part.size for k in phi):
            raise ValueError("phi must map events into the same event set")
        for j, block in enumerate(part.blocks):
            images = [phi[i] for i in block]
            if len(set(images)) != len(images):
                raise NotBlockInjective(f"phi is not injective on block {j}: {block}")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "partition", part)

    @property
    def size(self) -> int:
        return len(self.phi)


def pushforward(p, cm: ConditionalMap) -> FiniteDistribution:
    """Image distribution ``q_i = sum_{phi(k) = i} p_k``."""
    if not isinstance(p, FiniteDistribution):
        p = FiniteDistribution(p)
    if len(p) != cm.size:
        raise SizeMismatch(f"distribution on {len(p)} events, map on {cm.size}")
    q = np.bincount(np.asarray(cm.phi), weights=p.p, minlength=cm.size)
    return FiniteDistribution(q)


@dataclass(frozen=True)
class ClassicalDilation:
    """Bijective relabeling of ``I x J`` realizing a conditional action.

    ``big_phi[(i, j)]`` gives the image pair; ``q12[k, j]`` is the joint
    distribution after the relabeling, with marginals ``q1`` (events) and
    ``q2`` (memory labels).
    """

    big_phi: dict
    j0: int
    q12: np.ndarray
    q1: FiniteDistribution
    q2: FiniteDistribution

    @property
    def joint(self) -> FiniteDistribution:
        return FiniteDistribution(self.q12.reshape(-1))


def _extend_to_bijection(assigned: dict, n_i: int, n_j: int, order: str) -> dict:
    domain = [(i, j) for i in range(n_i) for j in range(n_j)]
    free_dom = [x for x in domain if x not in assigned]
    used = set(assigned.values())
    free_rng = [x for x in domain if x not in used]
    if order == "reversed":
        free_rng = free_rng[::-1]
    elif order != "lexicographic":
        raise ValueError(f"unknown extension order {order!r}")
    full = dict(assigned)
    full.update(zip(free_dom, free_rng))
    return full


def build_classical_dilation(
    p, cm: ConditionalMap, j0: int = 0, extension: str = "lexicographic"
) -> ClassicalDilation:
    """Dilate ``cm`` on the extended event space ``I x J``.

    ``(i, j0) -> (phi(i), block_of(i))`` is injective; the remaining points are
    paired with the unused image points in lexicographic order (or reversed
    image order with ``extension="reversed"``, which leaves the marginals
    unchanged).
    """
    if not isinstance(p, FiniteDistribution):
        p = FiniteDistribution(p)
    if len(p) != cm.size:
        raise SizeMismatch(f"distribution on {len(p)} events, map on {cm.size}")
    n_i, n_j = cm.size, len(cm.partition)
    if not 0 <= j0 < n_j:
        raise ValueError(f"j0={j0} is not a block label")
    assigned = {(i, j0): (cm.phi[i], cm.partition.block_of[i]) for i in range(n_i)}
    if len(set(assigned.values())) != n_i:
        raise NotBlockInjective("restricted dilation map is not injective")
    big_phi = _extend_to_bijection(assigned, n_i, n_j, extension)

    q12 = np.zeros((n_i, n_j))
    for i in range(n_i):
        k, j = big_phi[(i, j0)]
        q12[k, j] = p.p[i]
    q12.flags.writeable = False
    q1, q2 = _marginals(q12)
    return ClassicalDilation(big_phi=big_phi, j0=j0, q12=q12, q1=q1, q2=q2)


def _marginals(q12: np.ndarray):
    return FiniteDistribution(q12.sum(axis=1)), FiniteDistribution(q12.sum(axis=0))


def marginals(d: ClassicalDilation):
    """``(Q1, Q2)``: sums of the joint distribution over labels and over events."""
    return _marginals(d.q12)


def block_conditional_map(blocks: Sequence, phi: Sequence) -> ConditionalMap:
    return ConditionalMap(tuple(phi), Partition(tuple(blocks)))
