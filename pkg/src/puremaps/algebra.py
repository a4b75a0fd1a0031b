"""Finite-dimensional operator algebras as direct sums of matrix blocks.

An algebra is described by its ordered block dimensions (d_1, ..., d_m); an
element is one complex d_a x d_a matrix per block. All downstream work
(states, ray maps, reconstruction) is relative to the fixed standard basis
of each block, so elements are plain numpy arrays and nothing here is
basis-free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class EmptyDims(ValueError):
    """Raised when an algebra is built from an empty dimension list."""


class NonPositiveDim(ValueError):
    """Raised when a block dimension is zero or negative."""


class AlgebraMismatch(ValueError):
    """Raised when elements of different algebras are combined."""


class BlockOutOfRange(IndexError):
    """Raised when a block index does not exist in the algebra."""


@dataclass(frozen=True)
class AlgebraSpec:
    """Ordered block dimensions of a direct sum of full matrix algebras."""

    block_dims: tuple[int, ...]

    @property
    def num_blocks(self) -> int:
        return len(self.block_dims)

    def check_block(self, block: int) -> None:
        if not 0 <= block < len(self.block_dims):
            raise BlockOutOfRange(
                f"block {block} out of range for {len(self.block_dims)} blocks"
            )


def make_algebra(dims) -> AlgebraSpec:
    """Validate a dimension list and return the algebra it describes."""
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise EmptyDims("algebra needs at least one block")
    for d in dims:
        if d <= 0:
            raise NonPositiveDim(f"block dimension {d} must be positive")
    return AlgebraSpec(dims)


@dataclass(frozen=True)
class Element:
    """One complex matrix per block; arrays are copied and frozen on entry."""

    algebra: AlgebraSpec
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        dims = self.algebra.block_dims
        if len(self.blocks) != len(dims):
            raise AlgebraMismatch(
                f"expected {len(dims)} blocks, got {len(self.blocks)}"
            )
        mats = []
        for d, raw in zip(dims, self.blocks):
            m = np.array(raw, dtype=complex)
            if m.shape != (d, d):
                raise AlgebraMismatch(f"block shape {m.shape} != ({d}, {d})")
            if not np.all(np.isfinite(m)):
                raise ValueError("element has non-finite entries")
            m.flags.writeable = False
            mats.append(m)
        object.__setattr__(self, "blocks", tuple(mats))

    def block(self, a: int) -> np.ndarray:
        self.algebra.check_block(a)
        return self.blocks[a]


def _same_algebra(a: Element, b: Element) -> AlgebraSpec:
    if a.algebra != b.algebra:
        raise AlgebraMismatch(
            f"algebras differ: {a.algebra.block_dims} vs {b.algebra.block_dims}"
        )
    return a.algebra


# === Constructors ===


def identity(algebra: AlgebraSpec) -> Element:
    return Element(algebra, tuple(np.eye(d, dtype=complex) for d in algebra.block_dims))


def zero(algebra: AlgebraSpec) -> Element:
    return Element(
        algebra, tuple(np.zeros((d, d), dtype=complex) for d in algebra.block_dims)
    )


def matrix_unit(algebra: AlgebraSpec, block: int, i: int, j: int) -> Element:
    """The element whose only nonzero entry is a 1 at (i, j) of one block."""
    algebra.check_block(block)
    d = algebra.block_dims[block]
    if not (0 <= i < d and 0 <= j < d):
        raise BlockOutOfRange(f"entry ({i}, {j}) out of range for dim {d}")
    mats = [np.zeros((k, k), dtype=complex) for k in algebra.block_dims]
    mats[block][i, j] = 1.0
    return Element(algebra, tuple(mats))


def matrix_units(algebra: AlgebraSpec):
    """Yield (block, i, j, element) over the standard basis, in fixed order."""
    for a, d in enumerate(algebra.block_dims):
        for i in range(d):
            for j in range(d):
                yield a, i, j, matrix_unit(algebra, a, i, j)


def random_element(algebra: AlgebraSpec, rng: np.random.Generator) -> Element:
    """Element with iid standard complex Gaussian entries."""
    mats = []
    for d in algebra.block_dims:
        mats.append(
            (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
            / np.sqrt(2.0)
        )
    return Element(algebra, tuple(mats))


def random_hermitian(algebra: AlgebraSpec, rng: np.random.Generator) -> Element:
    g = random_element(algebra, rng)
    return scalar_mul(0.5, add(g, adjoint(g)))


# === Algebraic operations ===


def mul(a: Element, b: Element) -> Element:
    alg = _same_algebra(a, b)
    return Element(alg, tuple(x @ y for x, y in zip(a.blocks, b.blocks)))


def add(a: Element, b: Element) -> Element:
    alg = _same_algebra(a, b)
    return Element(alg, tuple(x + y for x, y in zip(a.blocks, b.blocks)))


def sub(a: Element, b: Element) -> Element:
    alg = _same_algebra(a, b)
    return Element(alg, tuple(x - y for x, y in zip(a.blocks, b.blocks)))


def scalar_mul(c: complex, a: Element) -> Element:
    return Element(a.algebra, tuple(c * x for x in a.blocks))


def adjoint(a: Element) -> Element:
    return Element(a.algebra, tuple(x.conj().T for x in a.blocks))


def jordan_product(a: Element, b: Element) -> Element:
    """Symmetrized product (AB + BA) / 2."""
    alg = _same_algebra(a, b)
    return Element(
        alg, tuple(0.5 * (x @ y + y @ x) for x, y in zip(a.blocks, b.blocks))
    )


def operator_norm(a: Element) -> float:
    """Largest singular value across blocks."""
    return max(float(np.linalg.norm(x, 2)) for x in a.blocks)


def trace(a: Element, block: int | None = None) -> complex:
    """Trace of one block, or of the whole element if block is None."""
    if block is None:
        return complex(sum(np.trace(x) for x in a.blocks))
    a.algebra.check_block(block)
    return complex(np.trace(a.blocks[block]))


def elements_close(a: Element, b: Element, tol: float = 1e-9) -> bool:
    return operator_norm(sub(a, b)) <= tol


# === Serialization ===
# Complex entries travel as [re, im] pairs, matrices row-major. Values pass
# through json unchanged (shortest round-trip repr), so load(dump(x)) == x
# bit for bit on finite input.


def _matrix_to_json(m: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def _matrix_from_json(rows, shape) -> np.ndarray:
    m = np.array([[complex(v[0], v[1]) for v in row] for row in rows], dtype=complex)
    if m.shape != shape:
        raise AlgebraMismatch(f"matrix shape {m.shape} != {shape}")
    return m


def algebra_to_json(algebra: AlgebraSpec) -> list[int]:
    return list(algebra.block_dims)


def algebra_from_json(dims) -> AlgebraSpec:
    return make_algebra(dims)


def element_to_json(a: Element) -> dict:
    return {
        "algebra": algebra_to_json(a.algebra),
        "blocks": [_matrix_to_json(x) for x in a.blocks],
    }


def element_from_json(data: dict) -> Element:
    alg = algebra_from_json(data["algebra"])
    blocks = data["blocks"]
    if len(blocks) != alg.num_blocks:
        raise AlgebraMismatch("block count does not match algebra")
    mats = tuple(
        _matrix_from_json(rows, (d, d)) for rows, d in zip(blocks, alg.block_dims)
    )
    return Element(alg, mats)
