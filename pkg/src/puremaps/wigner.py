"""Fiberwise reconstruction of the isometry behind a well-behaved ray map.

Given a black box that is fibre-preserving and transition-probability
preserving on a fiber, finitely many probes pin down an isometry U and a
linear/antilinear tag reproducing it there, uniquely up to one global phase
per fiber. The probes are the basis rays, the midpoints (e_0 + e_j)/sqrt(2)
to lock relative phases, and (e_0 + i e_j)/sqrt(2) to separate linear from
antilinear; a mandatory seeded validation pass rejects fits that only agree
on the probes.

Assembled fibers form an induced map on elements running opposite to the
state map: target-algebra elements are compressed into source blocks, with
a transpose on antilinear fibers. Target blocks no fiber reaches are simply
never read.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraMismatch,
    AlgebraSpec,
    Element,
    make_algebra,
    operator_norm,
    random_element,
)
from .raymaps import (
    KIND_ANTILINEAR,
    KIND_LINEAR,
    BlackBoxRayMap,
    CanonicalFiber,
    CanonicalRayMap,
    NotFibrePreserving,
    Verdict,
    _boxed,
    _fails,
    _holds,
    fibre_assignment,
)
from .states import (
    DimensionMismatch,
    PureState,
    basis_state,
    evaluate,
    make_pure_state,
    random_pure_state,
    state_to_json,
)

NON_ORTHONORMAL_IMAGES = "non_orthonormal_images"
PHASE_PROBE_MISMATCH = "phase_probe_mismatch"
KIND_INCONSISTENT = "kind_inconsistent"
VALIDATION_FAILED = "validation_failed"

_VALIDATION_RAYS = 50
_VALIDATION_SEED = 0x5EED


class ReconstructionFailure(RuntimeError):
    """A fiber did not fit any isometric linear/antilinear model."""

    def __init__(self, reason: str, witness: dict):
        super().__init__(f"{reason}: {witness}")
        self.reason = reason
        self.witness = witness


class AssemblyFailure(RuntimeError):
    """Global reconstruction stopped at the named source block."""

    def __init__(self, source_block: int, detail):
        super().__init__(f"fiber {source_block}: {detail}")
        self.source_block = source_block
        self.detail = detail


class AlphaOutOfRange(ValueError):
    """Raised when the latitude warp parameter leaves (0, 0.5) in modulus."""


def reconstruct_fiber(
    m, source_block: int, target_block: int, tol: float = 1e-8
) -> tuple[str, np.ndarray]:
    """Recover (kind, isometry) reproducing the map on one fiber.

    Steps: image the basis rays and demand pairwise orthonormal frames;
    re-phase the frame against the midpoint probes; read the kind off the
    (e_0 + i e_j)/sqrt(2) probes, which land on exactly one of two mutually
    orthogonal candidates; finally validate on 50 seeded random rays.

    :raises ReconstructionFailure: with .reason one of
        non_orthonormal_images, phase_probe_mismatch, kind_inconsistent,
        validation_failed, and .witness carrying the offending probe.
    """
    box = _boxed(m)
    src, tgt = box.source_algebra, box.target_algebra
    src.check_block(source_block)
    tgt.check_block(target_block)
    db = src.block_dims[source_block]

    def probe(vec) -> PureState:
        return box(make_pure_state(src, source_block, vec))

    def unit(j):
        v = np.zeros(db, dtype=complex)
        v[j] = 1.0
        return v

    # (i) basis images must form an orthonormal frame in one block
    frame = []
    for j in range(db):
        img = probe(unit(j))
        if img.block != target_block:
            raise ReconstructionFailure(
                NON_ORTHONORMAL_IMAGES,
                {
                    "probe": state_to_json(basis_state(src, source_block, j)),
                    "image_block": int(img.block),
                    "expected_block": int(target_block),
                },
            )
        frame.append(img.vector.copy())
    for i in range(db):
        for j in range(i + 1, db):
            ov = abs(np.vdot(frame[i], frame[j]))
            if ov > tol:
                raise ReconstructionFailure(
                    NON_ORTHONORMAL_IMAGES,
                    {"pair": [i, j], "overlap": float(ov)},
                )

    # (ii) lock relative phases on the midpoint probes
    # (iii) read the kind off the i-probes
    kinds = []
    for j in range(1, db):
        g = probe((unit(0) + unit(j)) / np.sqrt(2.0))
        c0 = np.vdot(frame[0], g.vector) if g.block == target_block else 0.0
        cj = np.vdot(frame[j], g.vector) if g.block == target_block else 0.0
        if abs(abs(c0) ** 2 - 0.5) > tol or abs(abs(cj) ** 2 - 0.5) > tol:
            raise ReconstructionFailure(
                PHASE_PROBE_MISMATCH,
                {
                    "probe_index": j,
                    "tp_to_f0": float(abs(c0) ** 2),
                    "tp_to_fj": float(abs(cj) ** 2),
                },
            )
        phase = cj / c0
        frame[j] = frame[j] * (phase / abs(phase))

        h = probe((unit(0) + 1j * unit(j)) / np.sqrt(2.0))
        lin = (frame[0] + 1j * frame[j]) / np.sqrt(2.0)
        anti = (frame[0] - 1j * frame[j]) / np.sqrt(2.0)
        tp_lin = abs(np.vdot(lin, h.vector)) ** 2 if h.block == target_block else 0.0
        tp_anti = abs(np.vdot(anti, h.vector)) ** 2 if h.block == target_block else 0.0
        lin_ok = tp_lin >= 1.0 - tol
        anti_ok = tp_anti >= 1.0 - tol
        if lin_ok == anti_ok:  # neither candidate, or an impossible tie
            raise ReconstructionFailure(
                PHASE_PROBE_MISMATCH,
                {"probe_index": j, "tp_linear": float(tp_lin), "tp_antilinear": float(tp_anti)},
            )
        kinds.append(KIND_LINEAR if lin_ok else KIND_ANTILINEAR)

    # (iv) kinds must agree; a 1-dim fiber defaults to linear
    if not kinds:
        kind = KIND_LINEAR
    elif len(set(kinds)) > 1:
        raise ReconstructionFailure(
            KIND_INCONSISTENT, {"kinds": kinds}
        )
    else:
        kind = kinds[0]

    # (v) columns of U are the re-phased frame
    u = np.column_stack(frame)

    # (vi) mandatory validation on seeded random rays
    rng = np.random.default_rng([_VALIDATION_SEED, source_block])
    for _ in range(_VALIDATION_RAYS):
        z = random_pure_state(src, source_block, rng)
        img = box(z)
        w = u @ (z.vector if kind == KIND_LINEAR else z.vector.conj())
        tp = abs(np.vdot(w, img.vector)) ** 2 if img.block == target_block else 0.0
        if tp <= 1.0 - tol:
            raise ReconstructionFailure(
                VALIDATION_FAILED,
                {"probe": state_to_json(z), "tp_to_model": float(tp)},
            )
    return kind, u


@dataclass(frozen=True)
class InducedMap:
    """Linear map on elements dual to an assembled ray map."""

    canonical: CanonicalRayMap

    @property
    def source_algebra(self) -> AlgebraSpec:
        return self.canonical.source_algebra

    @property
    def target_algebra(self) -> AlgebraSpec:
        return self.canonical.target_algebra


def assemble(m, tol: float = 1e-8) -> InducedMap:
    """Reconstruct every fiber of a black box and package the induced map.

    :raises AssemblyFailure: wrapping the fibre-assignment witness or the
        first fiber's ReconstructionFailure.
    """
    box = _boxed(m)
    fa = fibre_assignment(box)
    if isinstance(fa, NotFibrePreserving):
        raise AssemblyFailure(fa.source_block, fa)
    fibers = []
    for b, a in fa:
        try:
            kind, u = reconstruct_fiber(box, b, a, tol)
        except ReconstructionFailure as e:
            raise AssemblyFailure(b, e) from e
        fibers.append(CanonicalFiber(b, a, kind, u))
    return InducedMap(
        CanonicalRayMap(box.source_algebra, box.target_algebra, tuple(fibers))
    )


def apply_induced(phi: InducedMap, a: Element) -> Element:
    """Apply the induced map to a target-algebra element.

    Block b of the result compresses the element's block a(b) by the fiber
    isometry; antilinear fibers transpose the compression, which is exactly
    the dual of conjugating the input ray. Unassigned target blocks are
    never read.
    """
    can = phi.canonical
    if a.algebra != can.target_algebra:
        raise AlgebraMismatch("element not in the induced map's domain")
    mats = []
    for f in can.fibers:
        u = f.isometry
        comp = u.conj().T @ a.blocks[f.target_block] @ u
        mats.append(comp.T if f.kind == KIND_ANTILINEAR else comp)
    return Element(can.source_algebra, tuple(mats))


def verify_induction(
    m, phi: InducedMap, samples: int = 100, seed: int = 0, tol: float = 1e-8
) -> Verdict:
    """Check evaluate(map(w), A) == evaluate(w, phi(A)) on random probes."""
    box = _boxed(m)
    src, tgt = box.source_algebra, box.target_algebra
    rng = np.random.default_rng(seed)
    for k in range(samples):
        b = k % src.num_blocks
        w = random_pure_state(src, b, rng)
        a = random_element(tgt, rng)
        lhs = evaluate(box(w), a)
        rhs = evaluate(w, apply_induced(phi, a))
        bound = tol * (1.0 + operator_norm(a))
        if abs(lhs - rhs) > bound:
            return _fails(
                {
                    "check": "induction",
                    "state": state_to_json(w),
                    "lhs": [lhs.real, lhs.imag],
                    "rhs": [rhs.real, rhs.imag],
                    "residual": abs(lhs - rhs),
                }
            )
    return _holds()


# === Built-in example maps ===


def dim2_biorthogonal_not_tp(alpha: float) -> BlackBoxRayMap:
    """Latitude warp on the dim-2 state sphere: bi-orthogonal, not TP-preserving.

    Rays of C^2 are points (theta, phi) on a sphere; antipodes are exactly
    the orthogonal pairs. The warp theta -> theta + alpha sin(2 theta) fixes
    both poles and the equator, sends antipodes to antipodes (so orthogonal
    pairs stay orthogonal both ways and the map is a bijection), yet changes
    generic polar angles, so transition probabilities cos^2(angle/2) move.
    No linear or antilinear isometry reproduces it.
    """
    if not 0.0 < abs(alpha) < 0.5:
        raise AlphaOutOfRange(f"alpha {alpha} not in (0, 0.5) in modulus")
    alg = make_algebra([2])

    def fn(state):
        z0, z1 = state.vector
        theta = 2.0 * np.arctan2(abs(z1), abs(z0))
        rel = np.angle(z1) - np.angle(z0)
        warped = theta + alpha * np.sin(2.0 * theta)
        w = np.array(
            [np.cos(warped / 2.0), np.exp(1j * rel) * np.sin(warped / 2.0)],
            dtype=complex,
        )
        return make_pure_state(alg, 0, w)

    return BlackBoxRayMap(alg, alg, fn)


def entrywise_conjugation(algebra: AlgebraSpec) -> BlackBoxRayMap:
    """The antilinear example: each ray goes to its entrywise conjugate."""

    def fn(state):
        return make_pure_state(algebra, state.block, state.vector.conj())

    return BlackBoxRayMap(algebra, algebra, fn)


# === Random fixtures ===


def haar_isometry(d_out: int, d_in: int, rng: np.random.Generator) -> np.ndarray:
    """Column-orthonormal d_out x d_in matrix, Haar-distributed."""
    if d_out < d_in:
        raise DimensionMismatch(f"no isometry from dim {d_in} into dim {d_out}")
    g = (rng.standard_normal((d_out, d_in)) + 1j * rng.standard_normal((d_out, d_in))) / np.sqrt(2.0)
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_canonical(
    source_dims, target_dims, assignment, kinds, seed: int = 0
) -> CanonicalRayMap:
    """Seeded canonical map with Haar-random fiber isometries.

    Randomness splits per fiber (default_rng([seed, fiber])), so adding or
    reordering later fibers never disturbs earlier ones.
    """
    src = make_algebra(source_dims)
    tgt = make_algebra(target_dims)
    assignment = list(assignment)
    kinds = list(kinds)
    if len(assignment) != src.num_blocks or len(kinds) != src.num_blocks:
        raise DimensionMismatch("need one target block and kind per source block")
    fibers = []
    for b, (a, kind) in enumerate(zip(assignment, kinds)):
        tgt.check_block(a)
        rng = np.random.default_rng([seed, b])
        u = haar_isometry(tgt.block_dims[a], src.block_dims[b], rng)
        fibers.append(CanonicalFiber(b, int(a), kind, u))
    return CanonicalRayMap(src, tgt, tuple(fibers))
