"""Ray maps between pure-state spaces and their sampling-based classification.

Two representations: a canonical map carries, per source block, a target
block, a linear/antilinear tag, and an isometry; a black box is just a
deterministic evaluator on states. Classification probes a black box with
seeded random pairs plus constructed exact pairs and reports, per property,
Holds (no violation found), FailsWithWitness (a replayable counterexample),
or Undetermined (the evaluator broke mid-run).

A Holds verdict is statistical evidence, never a proof. A Fails verdict is a
proof: the witness pair can be re-evaluated and reproduces the measured
numbers exactly, the map being deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import AlgebraSpec
from .states import (
    DimensionMismatch,
    PureState,
    basis_state,
    make_pure_state,
    overlap,
    random_pure_state,
    state_from_json,
    state_to_json,
)

KIND_LINEAR = "linear"
KIND_ANTILINEAR = "antilinear"

HOLDS = "holds"
FAILS = "fails"
UNDETERMINED = "undetermined"

SOLID_STRUCTURAL = "structurally_true"
SOLID_UNVERIFIED = "unverified"


class NonIsometry(ValueError):
    """Raised when a stored fiber matrix is not an isometry."""


@dataclass(frozen=True)
class Verdict:
    """Outcome of one sampled check; witness present only on failure."""

    status: str
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.status == HOLDS


def _holds() -> Verdict:
    return Verdict(HOLDS)


def _fails(witness: dict) -> Verdict:
    return Verdict(FAILS, witness)


def _undetermined(reason: str | None = None) -> Verdict:
    return Verdict(UNDETERMINED, {"error": reason} if reason else None)


# === Map representations ===


@dataclass(frozen=True)
class CanonicalFiber:
    """One source block's action: where it goes and by which isometry."""

    source_block: int
    target_block: int
    kind: str
    isometry: np.ndarray

    def __post_init__(self):
        m = np.array(self.isometry, dtype=complex)
        if m.ndim != 2:
            raise DimensionMismatch("fiber isometry must be a matrix")
        m.flags.writeable = False
        object.__setattr__(self, "isometry", m)
        kind = self.kind
        if kind not in (KIND_LINEAR, KIND_ANTILINEAR):
            raise ValueError(f"unknown kind {kind!r}")
        # one-dimensional fibers carry no linear/antilinear distinction
        if m.shape[1] == 1:
            object.__setattr__(self, "kind", KIND_LINEAR)


@dataclass(frozen=True)
class CanonicalRayMap:
    """Fiberwise isometric ray map, one fiber per source block, in order."""

    source_algebra: AlgebraSpec
    target_algebra: AlgebraSpec
    fibers: tuple[CanonicalFiber, ...]

    def __post_init__(self):
        object.__setattr__(self, "fibers", tuple(self.fibers))
        src, tgt = self.source_algebra, self.target_algebra
        if len(self.fibers) != src.num_blocks:
            raise DimensionMismatch(
                f"need one fiber per source block, got {len(self.fibers)}"
            )
        for b, f in enumerate(self.fibers):
            if f.source_block != b:
                raise DimensionMismatch("fibers must be ordered by source block")
            tgt.check_block(f.target_block)
            db = src.block_dims[b]
            da = tgt.block_dims[f.target_block]
            if f.isometry.shape != (da, db):
                raise DimensionMismatch(
                    f"fiber {b}: isometry shape {f.isometry.shape} != ({da}, {db})"
                )
            if da < db:
                raise DimensionMismatch(
                    f"fiber {b}: target dim {da} smaller than source dim {db}"
                )


@dataclass(frozen=True)
class BlackBoxRayMap:
    """Opaque deterministic state-to-state evaluator.

    structurally_solid marks maps built by as_blackbox, whose fiberwise
    isometric form is known by construction; nothing finite certifies it
    for a genuine black box.
    """

    source_algebra: AlgebraSpec
    target_algebra: AlgebraSpec
    fn: Callable[[PureState], PureState]
    structurally_solid: bool = False

    def __call__(self, state: PureState) -> PureState:
        if state.algebra != self.source_algebra:
            raise DimensionMismatch("input state not on the source algebra")
        out = self.fn(state)
        if not isinstance(out, PureState) or out.algebra != self.target_algebra:
            raise DimensionMismatch("evaluator returned a non-state or wrong algebra")
        return out


def as_blackbox(m: CanonicalRayMap, tol: float = 1e-9) -> BlackBoxRayMap:
    """Wrap a canonical map as an evaluator, checking the isometry invariant.

    Linear fibers send the ray of z to the ray of U z; antilinear fibers to
    the ray of U conj(z).
    """
    for f in m.fibers:
        u = f.isometry
        gram = u.conj().T @ u
        if np.linalg.norm(gram - np.eye(u.shape[1]), 2) > tol:
            raise NonIsometry(f"fiber {f.source_block}: U*U != I")

    def fn(state: PureState) -> PureState:
        f = m.fibers[state.block]
        z = state.vector if f.kind == KIND_LINEAR else state.vector.conj()
        return make_pure_state(m.target_algebra, f.target_block, f.isometry @ z)

    return BlackBoxRayMap(
        m.source_algebra, m.target_algebra, fn, structurally_solid=True
    )


def _boxed(m) -> BlackBoxRayMap:
    return as_blackbox(m) if isinstance(m, CanonicalRayMap) else m


# === Fibre assignment ===


@dataclass(frozen=True)
class NotFibrePreserving:
    """Witness: two rays of one source block landing in different blocks."""

    source_block: int
    state0: PureState
    state1: PureState
    out_block0: int
    out_block1: int


def _fibre_probes(src: AlgebraSpec, b: int) -> list[PureState]:
    # basis rays plus the midpoints (e_0 + e_j)/sqrt(2); their overlap graph
    # is connected, so a block split inside the family always crosses an edge
    d = src.block_dims[b]
    probes = [basis_state(src, b, i) for i in range(d)]
    for j in range(1, d):
        v = np.zeros(d, dtype=complex)
        v[0] = 1.0
        v[j] = 1.0
        probes.append(make_pure_state(src, b, v))
    return probes


def fibre_assignment(m) -> list[tuple[int, int]] | NotFibrePreserving:
    """Target block per source block, probed on basis and midpoint rays.

    Returns the assignment as (source_block, target_block) pairs, or a
    NotFibrePreserving witness naming the first split found.
    """
    box = _boxed(m)
    out = []
    for b in range(box.source_algebra.num_blocks):
        probes = _fibre_probes(box.source_algebra, b)
        first = box(probes[0])
        for p in probes[1:]:
            img = box(p)
            if img.block != first.block:
                return NotFibrePreserving(b, probes[0], p, first.block, img.block)
        out.append((b, first.block))
    return out


# === Classification ===


@dataclass(frozen=True)
class ClassificationReport:
    orthogonal: Verdict
    co_orthogonal: Verdict
    bi_orthogonal: Verdict
    fibre_preserving: Verdict
    locally_injective: Verdict
    locally_tp_preserving: Verdict
    locally_solid: str
    sample_count: int
    seed: int
    tolerance: float


def _measure(s0, s1, out0, out1) -> dict:
    ov_in = overlap(s0, s1)
    ov_out = overlap(out0, out1)
    return {
        "overlap_in": ov_in,
        "overlap_out": ov_out,
        "tp_in": ov_in**2,
        "tp_out": ov_out**2,
        "in_block0": int(s0.block),
        "in_block1": int(s1.block),
        "out_block0": int(out0.block),
        "out_block1": int(out1.block),
    }


def _witness(check: str, s0: PureState, s1: PureState, measured: dict) -> dict:
    return {
        "check": check,
        "state0": state_to_json(s0),
        "state1": state_to_json(s1),
        "measured": measured,
    }


@dataclass
class _Pool:
    """Evaluated pair records plus the evaluator state shared by the checks."""

    box: BlackBoxRayMap
    tol: float
    cache: dict = field(default_factory=dict)
    records: list = field(default_factory=list)
    rays_by_block: dict = field(default_factory=dict)
    failure: str | None = None

    def image(self, s: PureState) -> PureState | None:
        key = (s.block, s.vector.tobytes())
        if key in self.cache:
            return self.cache[key]
        if self.failure is not None:
            return None
        try:
            out = self.box(s)
        except Exception as e:  # black box may fail arbitrarily
            self.failure = repr(e)
            return None
        self.cache[key] = out
        return out

    def add_pair(self, s0: PureState, s1: PureState, same_fiber: bool):
        out0 = self.image(s0)
        out1 = self.image(s1)
        if out0 is None or out1 is None:
            return
        self.records.append((s0, s1, out0, out1, same_fiber))

    def add_ray(self, s: PureState):
        self.rays_by_block.setdefault(s.block, []).append(s)


def classify(m, samples: int = 200, seed: int = 0, tol: float = 1e-8) -> ClassificationReport:
    """Sample a ray map and report the orthogonality-related properties.

    Parameters
    ----------
    m : CanonicalRayMap or BlackBoxRayMap
        The transformation under test. Canonical maps are wrapped first
        (raising NonIsometry if their stored frames are bad).
    samples : int
        Random same-block pairs drawn per source block; cross-block and
        constructed exact pairs come on top.
    seed, tol : reproducibility knobs recorded in the report.

    The six sampled verdicts obey the standing implications by construction:
    a fibre-preservation witness spawns the midpoint ray (x+y)/sqrt(2),
    which exhibits a co-orthogonality violation; a local-injectivity witness
    spawns a Gram-Schmidt probe orthogonal to one input but not the other,
    which violates orthogonality or co-orthogonality. Both derived pairs are
    fed back into the sample pool before verdicts are drawn.
    """
    box = _boxed(m)
    src = box.source_algebra
    rng = np.random.default_rng(seed)
    pool = _Pool(box, tol)

    # --- input pools, fixed deterministic order ---
    for b, d in enumerate(src.block_dims):
        probes = _fibre_probes(src, b)
        for s in probes:
            pool.add_ray(s)
        for i in range(len(probes)):
            for j in range(i + 1, len(probes)):
                pool.add_pair(probes[i], probes[j], True)
        if d >= 2:
            for _ in range(max(1, samples // 8)):
                x = random_pure_state(src, b, rng)
                y = random_pure_state(src, b, rng)
                w = y.vector - np.vdot(x.vector, y.vector) * x.vector
                if np.linalg.norm(w) <= 1e-6:
                    continue
                y2 = make_pure_state(src, b, w)
                pool.add_ray(x)
                pool.add_ray(y2)
                pool.add_pair(x, y2, True)
        for _ in range(samples):
            x = random_pure_state(src, b, rng)
            y = random_pure_state(src, b, rng)
            pool.add_ray(x)
            pool.add_ray(y)
            pool.add_pair(x, y, True)
    for b0 in range(src.num_blocks):
        for b1 in range(b0 + 1, src.num_blocks):
            for i in range(src.block_dims[b0]):
                for j in range(src.block_dims[b1]):
                    pool.add_pair(basis_state(src, b0, i), basis_state(src, b1, j), False)
            for _ in range(max(1, samples // 4)):
                pool.add_pair(
                    random_pure_state(src, b0, rng),
                    random_pure_state(src, b1, rng),
                    False,
                )

    # --- fibre preservation over all evaluated rays ---
    fibre_verdict = None
    for b in range(src.num_blocks):
        seen = []
        for s in pool.rays_by_block.get(b, []):
            out = pool.cache.get((s.block, s.vector.tobytes()))
            if out is not None:
                seen.append((s, out))
        if not seen:
            continue
        ref_s, ref_o = seen[0]
        for s, o in seen[1:]:
            if o.block != ref_o.block:
                fibre_verdict = _fails(
                    _witness("fibre_preserving", ref_s, s, _measure(ref_s, s, ref_o, o))
                )
                # midpoint probe: not orthogonal to either input, so a block
                # split forces a co-orthogonality violation into the pool
                if overlap(ref_s, s) > tol:
                    pool.add_pair(ref_s, s, True)
                else:
                    z = make_pure_state(src, b, (ref_s.vector + s.vector) / np.sqrt(2.0))
                    pool.add_pair(z, ref_s, True)
                    pool.add_pair(z, s, True)
                break
        if fibre_verdict is not None:
            break

    # --- local injectivity, with the Gram-Schmidt fallback probe ---
    inj_best = None  # (margin, s0, s1, measured)
    for s0, s1, out0, out1, same_fiber in list(pool.records):
        if not same_fiber:
            continue
        meas = _measure(s0, s1, out0, out1)
        distinct_in = 1.0 - meas["overlap_in"] > tol
        same_out = (
            meas["out_block0"] == meas["out_block1"]
            and 1.0 - meas["overlap_out"] <= tol
        )
        if distinct_in and same_out:
            margin = 1.0 - meas["overlap_in"]
            if inj_best is None or margin > inj_best[0]:
                inj_best = (margin, s0, s1, meas)
    if inj_best is not None:
        _, s0, s1, meas = inj_best
        if meas["overlap_in"] > tol:
            w = s1.vector - np.vdot(s0.vector, s1.vector) * s0.vector
            if np.linalg.norm(w) > 1e-9:
                z = make_pure_state(src, s0.block, w)
                pool.add_pair(z, s0, True)
                pool.add_pair(z, s1, True)

    # --- pairwise verdicts over the final pool ---
    orth_best = None
    co_best = None
    tp_best = None
    for s0, s1, out0, out1, same_fiber in pool.records:
        meas = _measure(s0, s1, out0, out1)
        if meas["overlap_in"] <= tol and meas["overlap_out"] > tol:
            if orth_best is None or meas["overlap_out"] > orth_best[0]:
                orth_best = (meas["overlap_out"], s0, s1, meas)
        if meas["overlap_out"] <= tol and meas["overlap_in"] > tol:
            if co_best is None or meas["overlap_in"] > co_best[0]:
                co_best = (meas["overlap_in"], s0, s1, meas)
        if same_fiber:
            gap = abs(meas["tp_in"] - meas["tp_out"])
            if gap > tol and (tp_best is None or gap > tp_best[0]):
                tp_best = (gap, s0, s1, {**meas, "gap": gap})

    def settle(check: str, best) -> Verdict:
        if best is not None:
            _, s0, s1, meas = best
            return _fails(_witness(check, s0, s1, meas))
        if pool.failure is not None:
            return _undetermined(pool.failure)
        return _holds()

    orthogonal = settle("orthogonal", orth_best)
    co_orthogonal = settle("co_orthogonal", co_best)
    locally_tp = settle("locally_tp_preserving", tp_best)
    locally_injective = settle("locally_injective", inj_best)
    if fibre_verdict is None:
        fibre_verdict = _undetermined(pool.failure) if pool.failure else _holds()

    if orthogonal.status == FAILS:
        bi = _fails(orthogonal.witness)
    elif co_orthogonal.status == FAILS:
        bi = _fails(co_orthogonal.witness)
    elif UNDETERMINED in (orthogonal.status, co_orthogonal.status):
        bi = _undetermined(pool.failure)
    else:
        bi = _holds()

    return ClassificationReport(
        orthogonal=orthogonal,
        co_orthogonal=co_orthogonal,
        bi_orthogonal=bi,
        fibre_preserving=fibre_verdict,
        locally_injective=locally_injective,
        locally_tp_preserving=locally_tp,
        locally_solid=SOLID_STRUCTURAL if box.structurally_solid else SOLID_UNVERIFIED,
        sample_count=len(pool.records),
        seed=seed,
        tolerance=tol,
    )


def replay_witness(m, witness: dict) -> dict:
    """Re-evaluate a witness pair and return the measured values afresh."""
    box = _boxed(m)
    s0 = state_from_json(witness["state0"])
    s1 = state_from_json(witness["state1"])
    out0 = box(s0)
    out1 = box(s1)
    meas = _measure(s0, s1, out0, out1)
    if witness["check"] == "locally_tp_preserving":
        meas["gap"] = abs(meas["tp_in"] - meas["tp_out"])
    return meas


# === Serialization ===


def verdict_to_json(v: Verdict) -> dict:
    return {"status": v.status, "witness": v.witness}


def report_to_json(r: ClassificationReport) -> dict:
    return {
        "verdicts": {
            "orthogonal": verdict_to_json(r.orthogonal),
            "co_orthogonal": verdict_to_json(r.co_orthogonal),
            "bi_orthogonal": verdict_to_json(r.bi_orthogonal),
            "fibre_preserving": verdict_to_json(r.fibre_preserving),
            "locally_injective": verdict_to_json(r.locally_injective),
            "locally_tp_preserving": verdict_to_json(r.locally_tp_preserving),
        },
        "locally_solid": r.locally_solid,
        "sample_count": r.sample_count,
        "seed": r.seed,
        "tolerance": r.tolerance,
    }


def _matrix_to_json(m: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def _matrix_from_json(rows) -> np.ndarray:
    return np.array(
        [[complex(v[0], v[1]) for v in row] for row in rows], dtype=complex
    )


def canonical_to_json(m: CanonicalRayMap) -> dict:
    return {
        "source": list(m.source_algebra.block_dims),
        "target": list(m.target_algebra.block_dims),
        "fibers": [
            {
                "source_block": f.source_block,
                "target_block": f.target_block,
                "kind": f.kind,
                "isometry": _matrix_to_json(f.isometry),
            }
            for f in m.fibers
        ],
    }


def canonical_from_json(data: dict) -> CanonicalRayMap:
    from .algebra import make_algebra

    src = make_algebra(data["source"])
    tgt = make_algebra(data["target"])
    fibers = tuple(
        CanonicalFiber(
            int(f["source_block"]),
            int(f["target_block"]),
            str(f["kind"]),
            _matrix_from_json(f["isometry"]),
        )
        for f in data["fibers"]
    )
    return CanonicalRayMap(src, tgt, fibers)
