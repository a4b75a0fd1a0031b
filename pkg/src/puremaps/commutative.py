"""Function algebras on finite sets: point maps and composition operators.

An algebra whose blocks are all one-dimensional is the functions on a
finite set, one point per block. Every unital *-homomorphism between two
such algebras is composition with a map of the underlying sets, and the
point map can be read back off the images of the indicator functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Element, add, identity, make_algebra, mul, operator_norm, sub, zero
from .jordan import LinearMapTable


class NotStarHomomorphism(RuntimeError):
    """The table is not a unital *-homomorphism of function algebras."""

    def __init__(self, witness: dict):
        super().__init__(str(witness))
        self.witness = witness


@dataclass(frozen=True)
class PointMap:
    """A map nu: {0..s-1} -> {0..n-1} between finite sets."""

    n: int
    s: int
    nu: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "nu", tuple(int(k) for k in self.nu))
        if self.n <= 0 or self.s <= 0:
            raise ValueError("point sets must be nonempty")
        if len(self.nu) != self.s:
            raise ValueError(f"nu must list {self.s} values, got {len(self.nu)}")
        for k in self.nu:
            if not 0 <= k < self.n:
                raise ValueError(f"nu value {k} outside 0..{self.n - 1}")

    @property
    def injective(self) -> bool:
        return len(set(self.nu)) == len(self.nu)


def composition_operator(nu: PointMap) -> LinearMapTable:
    """The operator f -> f∘nu as a table on indicator functions.

    The indicator of point k pulls back to the indicator of its preimage:
    phi(e_k) = sum of e_t over all t with nu(t) = k.
    """
    src = make_algebra([1] * nu.n)
    tgt = make_algebra([1] * nu.s)
    images = []
    for k in range(nu.n):
        mats = [
            np.array([[1.0 + 0.0j if nu.nu[t] == k else 0.0j]]) for t in range(nu.s)
        ]
        images.append(Element(tgt, tuple(mats)))
    return LinearMapTable(src, tgt, tuple(images))


def extract_point_map(t: LinearMapTable, tol: float = 1e-9) -> PointMap:
    """Read the point map off a composition operator's table.

    Verifies first that the table is a unital *-homomorphism of function
    algebras: real idempotent images behaving multiplicatively on the
    indicator basis and summing to one.

    :raises NotStarHomomorphism: with a witness naming the failed identity.
    """
    if any(d != 1 for d in t.source.block_dims) or any(
        d != 1 for d in t.target.block_dims
    ):
        raise NotStarHomomorphism(
            {"identity": "commutative", "detail": "blocks must all have dim 1"}
        )
    n = t.source.num_blocks
    s = t.target.num_blocks
    imgs = [t.image_of(k, 0, 0) for k in range(n)]

    for k, img in enumerate(imgs):
        for b, m in enumerate(img.blocks):
            v = complex(m[0, 0])
            if abs(v.imag) > tol:
                raise NotStarHomomorphism(
                    {"identity": "self_adjoint", "indicator": k, "point": b}
                )
    for k in range(n):
        for l in range(k, n):
            prod = mul(imgs[k], imgs[l])
            expected = imgs[k] if k == l else zero(t.target)
            res = operator_norm(sub(prod, expected))
            if res > tol:
                raise NotStarHomomorphism(
                    {
                        "identity": "multiplicative",
                        "indicators": [k, l],
                        "residual": float(res),
                    }
                )
    total = imgs[0]
    for img in imgs[1:]:
        total = add(total, img)
    res = operator_norm(sub(total, identity(t.target)))
    if res > tol:
        raise NotStarHomomorphism({"identity": "unital", "residual": float(res)})

    values = []
    for point in range(s):
        hits = [
            k for k in range(n) if abs(complex(imgs[k].blocks[point][0, 0]) - 1.0) <= tol
        ]
        if len(hits) != 1:
            raise NotStarHomomorphism(
                {"identity": "point_valued", "point": point, "hits": hits}
            )
        values.append(hits[0])
    return PointMap(n, s, tuple(values))


def point_map_to_json(nu: PointMap) -> dict:
    return {"n": nu.n, "s": nu.s, "nu": list(nu.nu)}


def point_map_from_json(data: dict) -> PointMap:
    return PointMap(int(data["n"]), int(data["s"]), tuple(data["nu"]))
