"""Pure states of a block algebra, held as unit rays with a fixed phase gauge.

A pure state lives in exactly one block: it is the vector state of a unit
vector there. Proportional vectors give the same state, so every vector is
normalized and then rotated so its first component of modulus > 1e-12
becomes real and positive. Equality of states is equality of these
canonical representatives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraMismatch, AlgebraSpec, Element, make_algebra

PHASE_CUTOFF = 1e-12


class ZeroVector(ValueError):
    """Raised when a state vector has norm below the cutoff."""


class DimensionMismatch(ValueError):
    """Raised when a vector's length does not fit its block."""


@dataclass(frozen=True)
class PureState:
    """Canonical-phase unit vector in one block of the algebra."""

    algebra: AlgebraSpec
    block: int
    vector: np.ndarray


def make_pure_state(algebra: AlgebraSpec, block: int, vector) -> PureState:
    """Normalize, fix the phase gauge, and wrap as a state.

    :param vector: any nonzero complex vector of the block's dimension.
    :raises ZeroVector: norm below 1e-12.
    :raises DimensionMismatch: wrong length for the block.
    """
    algebra.check_block(block)
    v = np.array(vector, dtype=complex).reshape(-1)
    d = algebra.block_dims[block]
    if v.shape != (d,):
        raise DimensionMismatch(f"vector length {v.shape[0]} != block dim {d}")
    if not np.all(np.isfinite(v)):
        raise ZeroVector("state vector has non-finite entries")
    n = np.linalg.norm(v)
    if n <= PHASE_CUTOFF:
        raise ZeroVector(f"vector norm {n} below cutoff")
    v = v / n
    for c in v:
        if abs(c) > PHASE_CUTOFF:
            v = v * (c.conjugate() / abs(c))
            break
    v.flags.writeable = False
    return PureState(algebra, block, v)


def basis_state(algebra: AlgebraSpec, block: int, i: int) -> PureState:
    """State of the i-th standard basis vector of a block."""
    algebra.check_block(block)
    e = np.zeros(algebra.block_dims[block], dtype=complex)
    e[i] = 1.0
    return make_pure_state(algebra, block, e)


def random_pure_state(
    algebra: AlgebraSpec, block: int, rng: np.random.Generator
) -> PureState:
    """Haar-random ray in one block (Gaussian direction, then normalized)."""
    d = algebra.block_dims[block]
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return make_pure_state(algebra, block, v)


def evaluate(state: PureState, a: Element) -> complex:
    """Expectation <x, A x> of the element in the state."""
    if state.algebra != a.algebra:
        raise AlgebraMismatch("state and element live on different algebras")
    x = state.vector
    return complex(np.vdot(x, a.blocks[state.block] @ x))


def overlap(s0: PureState, s1: PureState) -> float:
    """|<x0, x1>|; zero when the states sit in different blocks."""
    if s0.block != s1.block:
        return 0.0
    return float(abs(np.vdot(s0.vector, s1.vector)))


def transition_probability(s0: PureState, s1: PureState) -> float:
    """Squared overlap of the two rays, 0 across blocks."""
    return overlap(s0, s1) ** 2


def is_orthogonal(s0: PureState, s1: PureState, tol: float = 1e-9) -> bool:
    return overlap(s0, s1) <= tol


def same_ray(s0: PureState, s1: PureState, tol: float = 1e-9) -> bool:
    """Whether two states are the same point of the ray space."""
    return s0.block == s1.block and overlap(s0, s1) >= 1.0 - tol


def state_distance_oracle(s0: PureState, s1: PureState) -> float:
    """Dual-norm distance between the two states, by direct eigensolve.

    The states define rank-one density matrices; the distance is the trace
    norm (sum of |eigenvalues|) of the block-diagonal difference. This is an
    independent check: it never looks at the inner product of the vectors.
    """
    alg = s0.algebra
    if alg != s1.algebra:
        raise AlgebraMismatch("states live on different algebras")
    total = 0.0
    for a, d in enumerate(alg.block_dims):
        diff = np.zeros((d, d), dtype=complex)
        if a == s0.block:
            diff += np.outer(s0.vector, s0.vector.conj())
        if a == s1.block:
            diff -= np.outer(s1.vector, s1.vector.conj())
        if np.any(diff):
            total += float(np.sum(np.abs(np.linalg.eigvalsh(diff))))
    return total


def projection_witness(
    s0: PureState, s1: PureState, tol: float = 1e-9
) -> Element | None:
    """Projection E with omega0(EAE) = omega0(A) and omega1(EAE) = 0, if any.

    Such an E exists exactly when the states are orthogonal; None otherwise.
    Across blocks the identity of the first state's block works; within one
    block the rank-one projection onto the first vector does.
    """
    if not is_orthogonal(s0, s1, tol):
        return None
    alg = s0.algebra
    if s0.block != s1.block:
        mats = [np.zeros((d, d), dtype=complex) for d in alg.block_dims]
        mats[s0.block] = np.eye(alg.block_dims[s0.block], dtype=complex)
        return Element(alg, tuple(mats))
    mats = [np.zeros((d, d), dtype=complex) for d in alg.block_dims]
    mats[s0.block] = np.outer(s0.vector, s0.vector.conj())
    return Element(alg, tuple(mats))


# === Serialization ===


def state_to_json(s: PureState) -> dict:
    return {
        "algebra": list(s.algebra.block_dims),
        "block": int(s.block),
        "vector": [[float(c.real), float(c.imag)] for c in s.vector],
    }


def state_from_json(data: dict) -> PureState:
    alg = make_algebra(data["algebra"])
    v = np.array([complex(c[0], c[1]) for c in data["vector"]], dtype=complex)
    return make_pure_state(alg, int(data["block"]), v)
