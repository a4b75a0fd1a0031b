"""Verification suite for linear maps between block algebras given as tables.

A map is stored extensionally: one image per matrix unit of its domain.
The checks certify Jordan *-homomorphism structure exactly on that basis
(bilinearity extends both identities to everything), split a block-permuting
Jordan isomorphism into its multiplicative and anti-multiplicative parts by
probing one off-diagonal unit per block, and spot-check isometry, order
preservation, orthogonality preservation, and trace preservation on seeded
random elements.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraMismatch,
    AlgebraSpec,
    Element,
    add,
    adjoint,
    element_from_json,
    element_to_json,
    identity,
    make_algebra,
    matrix_unit,
    matrix_units,
    mul,
    operator_norm,
    random_element,
    sub,
    trace,
)
from .raymaps import BlackBoxRayMap, Verdict, _fails, _holds
from .states import PureState, evaluate, make_pure_state

TAG_MULT = "mult"
TAG_ANTI = "anti"

_PURITY_CUTOFF = 1e-7


class NotBijective(ValueError):
    """The table is not a block-permuting bijection."""


class NeitherMultNorAnti(RuntimeError):
    """A block's probe matched neither product order."""

    def __init__(self, witness: dict):
        super().__init__(str(witness))
        self.witness = witness


class NotProjectionPreserving(RuntimeError):
    """Some projection's image failed to be a projection."""

    def __init__(self, witness: dict):
        super().__init__(str(witness))
        self.witness = witness


class PreconditionFailed(ValueError):
    """The check's standing assumptions do not hold for this table."""


@dataclass(frozen=True)
class LinearMapTable:
    """Images of every matrix unit of the source, ordered by (block, i, j).

    source is the map's domain and target its codomain; apply() extends the
    table to arbitrary elements by linearity.
    """

    source: AlgebraSpec
    target: AlgebraSpec
    images: tuple[Element, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        expected = sum(d * d for d in self.source.block_dims)
        if len(self.images) != expected:
            raise AlgebraMismatch(
                f"expected {expected} unit images, got {len(self.images)}"
            )
        offsets = []
        off = 0
        for d in self.source.block_dims:
            offsets.append(off)
            off += d * d
        object.__setattr__(self, "_offsets", tuple(offsets))
        for img in self.images:
            if img.algebra != self.target:
                raise AlgebraMismatch("unit image not in the target algebra")

    def image_of(self, block: int, i: int, j: int) -> Element:
        self.source.check_block(block)
        d = self.source.block_dims[block]
        return self.images[self._offsets[block] + i * d + j]

    def apply(self, x: Element) -> Element:
        if x.algebra != self.source:
            raise AlgebraMismatch("element not in the table's domain")
        acc = [np.zeros((d, d), dtype=complex) for d in self.target.block_dims]
        idx = 0
        for a, d in enumerate(self.source.block_dims):
            blk = x.blocks[a]
            for i in range(d):
                for j in range(d):
                    c = blk[i, j]
                    if c != 0:
                        for t_blk, m in enumerate(self.images[idx].blocks):
                            acc[t_blk] = acc[t_blk] + c * m
                    idx += 1
        return Element(self.target, tuple(acc))


def from_induced(phi) -> LinearMapTable:
    """Tabulate an induced map on the matrix units of its domain."""
    from .wigner import apply_induced

    dom = phi.target_algebra
    cod = phi.source_algebra
    images = tuple(apply_induced(phi, u) for _, _, _, u in matrix_units(dom))
    return LinearMapTable(dom, cod, images)


# === Jordan structure ===


def is_jordan_star_homomorphism(t: LinearMapTable, tol: float = 1e-9) -> Verdict:
    """Exact basis check of phi(A*) = phi(A)* and phi(AB+BA) = phi(A)phi(B)+phi(B)phi(A)."""
    units = list(matrix_units(t.source))
    for a, i, j, _ in units:
        res = operator_norm(sub(t.image_of(a, j, i), adjoint(t.image_of(a, i, j))))
        if res > tol:
            return _fails(
                {"check": "adjoint", "unit": [a, i, j], "residual": float(res)}
            )
    for p in range(len(units)):
        a0, i0, j0, u0 = units[p]
        img0 = t.images[p]
        for q in range(p, len(units)):
            a1, i1, j1, u1 = units[q]
            img1 = t.images[q]
            lhs = t.apply(add(mul(u0, u1), mul(u1, u0)))
            rhs = add(mul(img0, img1), mul(img1, img0))
            res = operator_norm(sub(lhs, rhs))
            if res > tol:
                return _fails(
                    {
                        "check": "jordan_identity",
                        "unit0": [a0, i0, j0],
                        "unit1": [a1, i1, j1],
                        "residual": float(res),
                    }
                )
    return _holds()


def block_assignment(t: LinearMapTable, tol: float = 1e-9) -> tuple[int, ...]:
    """Target block hit by each source block, demanding a clean permutation.

    :raises NotBijective: if unit images smear across blocks, blocks
        collide, dimensions disagree, or some image vanishes.
    """
    if t.source.num_blocks != t.target.num_blocks:
        raise NotBijective("block counts differ")
    assignment = []
    for a, d in enumerate(t.source.block_dims):
        hit: int | None = None
        for i in range(d):
            for j in range(d):
                img = t.image_of(a, i, j)
                live = [
                    b
                    for b, m in enumerate(img.blocks)
                    if float(np.linalg.norm(m, 2)) > tol
                ]
                if len(live) != 1:
                    raise NotBijective(
                        f"image of unit ({a},{i},{j}) lives in blocks {live}"
                    )
                if hit is None:
                    hit = live[0]
                elif hit != live[0]:
                    raise NotBijective(f"source block {a} splits across target blocks")
        assignment.append(hit)
        if t.target.block_dims[hit] != d:
            raise NotBijective(
                f"source block {a} (dim {d}) maps to target block {hit} "
                f"(dim {t.target.block_dims[hit]})"
            )
    if len(set(assignment)) != len(assignment):
        raise NotBijective("two source blocks share a target block")
    return tuple(assignment)


@dataclass(frozen=True)
class KadisonSplit:
    """Central projections splitting a Jordan isomorphism.

    F lives in the target and collects the blocks on which the map is
    multiplicative; E is its source-side mirror. tags has one entry per
    source block, "mult" or "anti"; dim-1 blocks tie-break to "mult".
    """

    F: Element
    E: Element
    tags: tuple[str, ...]
    assignment: tuple[int, ...]


def kadison_split(t: LinearMapTable, tol: float = 1e-9) -> KadisonSplit:
    """Tag each block multiplicative or anti-multiplicative and build F.

    Probes phi(E00 E01) against phi(E00)phi(E01) and phi(E01)phi(E00); for a
    genuine Jordan isomorphism exactly one matches (the candidates differ by
    phi(E01) itself).

    :raises NotBijective: table is not a block-permuting bijection.
    :raises NeitherMultNorAnti: some block matches neither order.
    """
    assignment = block_assignment(t, tol)
    tags = []
    for a, d in enumerate(t.source.block_dims):
        if d == 1:
            tags.append(TAG_MULT)
            continue
        x = matrix_unit(t.source, a, 0, 0)
        y = matrix_unit(t.source, a, 0, 1)
        fxy = t.apply(mul(x, y))
        fx = t.apply(x)
        fy = t.apply(y)
        res_mult = operator_norm(sub(fxy, mul(fx, fy)))
        res_anti = operator_norm(sub(fxy, mul(fy, fx)))
        if res_mult <= tol:
            tags.append(TAG_MULT)
        elif res_anti <= tol:
            tags.append(TAG_ANTI)
        else:
            raise NeitherMultNorAnti(
                {
                    "source_block": a,
                    "residual_mult": float(res_mult),
                    "residual_anti": float(res_anti),
                }
            )
    f_mats = [np.zeros((d, d), dtype=complex) for d in t.target.block_dims]
    e_mats = [np.zeros((d, d), dtype=complex) for d in t.source.block_dims]
    for a, tag in enumerate(tags):
        if tag == TAG_MULT:
            f_mats[assignment[a]] = np.eye(t.target.block_dims[assignment[a]], dtype=complex)
            e_mats[a] = np.eye(t.source.block_dims[a], dtype=complex)
    return KadisonSplit(
        F=Element(t.target, tuple(f_mats)),
        E=Element(t.source, tuple(e_mats)),
        tags=tuple(tags),
        assignment=assignment,
    )


# === Spot checks ===


def verify_isometry(
    t: LinearMapTable, samples: int = 50, seed: int = 0, tol: float = 1e-9
) -> Verdict:
    """Norm preservation on all matrix units and seeded random elements."""
    for a, i, j, u in matrix_units(t.source):
        res = abs(operator_norm(t.image_of(a, i, j)) - 1.0)
        if res > tol:
            return _fails({"check": "isometry", "unit": [a, i, j], "residual": res})
    rng = np.random.default_rng(seed)
    for k in range(samples):
        x = random_element(t.source, rng)
        nx = operator_norm(x)
        res = abs(operator_norm(t.apply(x)) - nx)
        if res > tol * (1.0 + nx):
            return _fails(
                {"check": "isometry", "element": element_to_json(x), "residual": res}
            )
    return _holds()


def verify_order_iso(
    t: LinearMapTable, samples: int = 50, seed: int = 0, tol: float = 1e-9
) -> Verdict:
    """Unitality plus positivity of images of random G*G elements."""
    unital_res = operator_norm(sub(t.apply(identity(t.source)), identity(t.target)))
    if unital_res > tol:
        return _fails({"check": "unital", "residual": float(unital_res)})
    rng = np.random.default_rng(seed)
    for k in range(samples):
        g = random_element(t.source, rng)
        x = mul(adjoint(g), g)
        scale = 1.0 + operator_norm(x)
        y = t.apply(x)
        herm = operator_norm(sub(y, adjoint(y)))
        if herm > tol * scale:
            return _fails(
                {"check": "hermitian_image", "element": element_to_json(x), "residual": herm}
            )
        for m in y.blocks:
            lo = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min()) if m.size else 0.0
            if lo < -tol * scale:
                return _fails(
                    {
                        "check": "positivity",
                        "element": element_to_json(x),
                        "min_eigenvalue": lo,
                    }
                )
    return _holds()


def _median_split_projections(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # split the spectrum strictly below the median eigenvalue; both halves
    # are nonempty for dim >= 2 and the two projections are exactly orthogonal
    w, v = np.linalg.eigh(h)
    med = float(np.median(w))
    lo = v[:, w < med]
    p_lo = lo @ lo.conj().T
    return p_lo, np.eye(h.shape[0], dtype=complex) - p_lo


def verify_orthoisomorphism(
    t: LinearMapTable, samples: int = 50, seed: int = 0, tol: float = 1e-9
) -> Verdict:
    """EF = 0 iff phi(E)phi(F) = 0 over diagonal units and spectral pairs.

    :raises NotProjectionPreserving: if any sampled projection's image is
        not itself a projection (checked before the equivalence).
    """
    pool: list[Element] = []
    for a, d in enumerate(t.source.block_dims):
        for i in range(d):
            pool.append(matrix_unit(t.source, a, i, i))
    pairs: list[tuple[Element, Element]] = []
    rng = np.random.default_rng(seed)
    dims = t.source.block_dims
    for k in range(samples):
        a = k % len(dims)
        d = dims[a]
        if d < 2:
            continue
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        h = 0.5 * (g + g.conj().T)
        p_lo, p_hi = _median_split_projections(h)
        mats_lo = [np.zeros((dd, dd), dtype=complex) for dd in dims]
        mats_hi = [np.zeros((dd, dd), dtype=complex) for dd in dims]
        mats_lo[a] = p_lo
        mats_hi[a] = p_hi
        e_lo = Element(t.source, tuple(mats_lo))
        e_hi = Element(t.source, tuple(mats_hi))
        pool.extend([e_lo, e_hi])
        pairs.append((e_lo, e_hi))
    for p in pool:
        q = t.apply(p)
        idem = operator_norm(sub(mul(q, q), q))
        herm = operator_norm(sub(adjoint(q), q))
        if idem > tol or herm > tol:
            raise NotProjectionPreserving(
                {
                    "projection": element_to_json(p),
                    "idempotent_residual": float(idem),
                    "adjoint_residual": float(herm),
                }
            )
    for i in range(len(pool)):
        for j in range(i + 1, len(pool)):
            pairs.append((pool[i], pool[j]))
    for e, f in pairs:
        in_orth = operator_norm(mul(e, f)) <= tol
        out_orth = operator_norm(mul(t.apply(e), t.apply(f))) <= tol
        if in_orth != out_orth:
            return _fails(
                {
                    "check": "orthoisomorphism",
                    "e": element_to_json(e),
                    "f": element_to_json(f),
                    "ef_norm": float(operator_norm(mul(e, f))),
                    "image_product_norm": float(
                        operator_norm(mul(t.apply(e), t.apply(f)))
                    ),
                }
            )
    return _holds()


def check_trace_preservation(t: LinearMapTable, tol: float = 1e-9) -> Verdict:
    """Trace equality for a single-block *-iso or *-anti-iso.

    :raises PreconditionFailed: unless both algebras are one equal-dimension
        block and the table is a verified Jordan isomorphism of it.
    """
    if t.source.num_blocks != 1 or t.target.num_blocks != 1:
        raise PreconditionFailed("trace check needs single full blocks")
    if t.source.block_dims != t.target.block_dims:
        raise PreconditionFailed("trace check needs equal dimensions")
    if not is_jordan_star_homomorphism(t, max(tol, 1e-9)):
        raise PreconditionFailed("table is not a Jordan *-homomorphism")
    try:
        kadison_split(t, max(tol, 1e-9))
    except (NotBijective, NeitherMultNorAnti) as e:
        raise PreconditionFailed(f"not a *-iso or *-anti-iso: {e}") from e
    rng = np.random.default_rng(0)
    probes = [u for _, _, _, u in matrix_units(t.source)]
    probes.extend(random_element(t.source, rng) for _ in range(20))
    for x in probes:
        res = abs(trace(x) - trace(t.apply(x)))
        if res > tol * (1.0 + operator_norm(x)):
            return _fails(
                {
                    "check": "trace",
                    "element": element_to_json(x),
                    "residual": float(res),
                }
            )
    return _holds()


# === Bridges ===


def dual_pure_state_map(t: LinearMapTable, tol: float = 1e-9) -> BlackBoxRayMap:
    """The state map w -> w∘phi as a black box, when it lands on pure states.

    Works for unital (anti)homomorphisms and their block-permuting Jordan
    combinations: the pulled-back functional is read off the unit images as
    a density matrix, which must be rank one in a single block.

    :raises ValueError: at evaluation time if the pulled-back functional is
        not a pure state (mass in several blocks, or rank > 1).
    """

    def fn(state: PureState) -> PureState:
        masses = []
        mats = []
        for a, d in enumerate(t.source.block_dims):
            m = np.empty((d, d), dtype=complex)
            for i in range(d):
                for j in range(d):
                    m[i, j] = evaluate(state, t.image_of(a, i, j))
            rho = m.conj()
            rho = 0.5 * (rho + rho.conj().T)
            mats.append(rho)
            masses.append(float(np.trace(rho).real))
        live = [a for a, mass in enumerate(masses) if mass > 0.5]
        if len(live) != 1 or abs(masses[live[0]] - 1.0) > _PURITY_CUTOFF:
            raise ValueError(f"pulled-back functional has block masses {masses}")
        a = live[0]
        w, v = np.linalg.eigh(mats[a])
        if w[:-1].size and float(np.max(np.abs(w[:-1]))) > _PURITY_CUTOFF:
            raise ValueError("pulled-back functional is not rank one")
        return make_pure_state(t.source, a, v[:, -1])

    return BlackBoxRayMap(t.target, t.source, fn)


def restrict_to_blocks(
    t: LinearMapTable, source_block: int, target_block: int
) -> LinearMapTable:
    """Single-block subtable of a block-respecting map.

    :raises PreconditionFailed: if some unit image leaks outside the chosen
        target block.
    """
    t.source.check_block(source_block)
    t.target.check_block(target_block)
    d = t.source.block_dims[source_block]
    sub_src = make_algebra([d])
    sub_tgt = make_algebra([t.target.block_dims[target_block]])
    images = []
    for i in range(d):
        for j in range(d):
            img = t.image_of(source_block, i, j)
            leak = sum(
                float(np.linalg.norm(m, 2))
                for b, m in enumerate(img.blocks)
                if b != target_block
            )
            if leak > 1e-9:
                raise PreconditionFailed(
                    f"unit ({source_block},{i},{j}) leaks outside block {target_block}"
                )
            images.append(Element(sub_tgt, (img.blocks[target_block],)))
    return LinearMapTable(sub_src, sub_tgt, tuple(images))


def random_jordan_iso(dims, tags, seed: int = 0) -> LinearMapTable:
    """Per-block Haar unitary conjugation, transposed on "anti" blocks.

    Dim-1 blocks are re-tagged "mult" (the two actions coincide there), so
    kadison_split recovers the planted tags exactly.
    """
    from .wigner import haar_isometry

    alg = make_algebra(dims)
    tags = [
        TAG_MULT if alg.block_dims[a] == 1 else str(tag) for a, tag in enumerate(tags)
    ]
    for tag in tags:
        if tag not in (TAG_MULT, TAG_ANTI):
            raise ValueError(f"unknown tag {tag!r}")
    unitaries = [
        haar_isometry(d, d, np.random.default_rng([seed, a]))
        for a, d in enumerate(alg.block_dims)
    ]
    images = []
    for a, i, j, _ in matrix_units(alg):
        u = unitaries[a]
        if tags[a] == TAG_MULT:
            m = np.outer(u[:, i], u[:, j].conj())
        else:
            m = np.outer(u[:, j], u[:, i].conj())
        mats = [np.zeros((d, d), dtype=complex) for d in alg.block_dims]
        mats[a] = m
        images.append(Element(alg, tuple(mats)))
    return LinearMapTable(alg, alg, tuple(images))


# === Serialization ===


def table_to_json(t: LinearMapTable) -> dict:
    return {
        "source": list(t.source.block_dims),
        "target": list(t.target.block_dims),
        "images": [element_to_json(img) for img in t.images],
    }


def table_from_json(data: dict) -> LinearMapTable:
    src = make_algebra(data["source"])
    tgt = make_algebra(data["target"])
    images = tuple(element_from_json(d) for d in data["images"])
    for img in images:
        if img.algebra != tgt:
            raise AlgebraMismatch("image algebra does not match table target")
    return LinearMapTable(src, tgt, images)
