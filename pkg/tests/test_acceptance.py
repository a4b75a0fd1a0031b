"""Acceptance battery: seven go/no-go checks, one test per criterion.

Each criterion's computation lives in a generator function returning a JSON
report string. Criterion tests parse the cached report and assert on it;
criterion 7 regenerates every report from scratch with identical seeds and
demands byte-identical text.
"""

import itertools
import json
import math

import numpy as np

from puremaps import (
    FAILS,
    HOLDS,
    AssemblyFailure,
    BlackBoxRayMap,
    PointMap,
    ReconstructionFailure,
    as_blackbox,
    assemble,
    basis_state,
    check_trace_preservation,
    classify,
    composition_operator,
    dim2_biorthogonal_not_tp,
    dual_pure_state_map,
    entrywise_conjugation,
    evaluate,
    extract_point_map,
    from_induced,
    is_jordan_star_homomorphism,
    is_orthogonal,
    kadison_split,
    make_algebra,
    make_pure_state,
    matrix_units,
    mul,
    operator_norm,
    projection_witness,
    random_canonical,
    random_jordan_iso,
    random_pure_state,
    report_to_json,
    restrict_to_blocks,
    state_distance_oracle,
    sub,
    verify_induction,
    verify_isometry,
    verify_order_iso,
    verify_orthoisomorphism,
)

_REPORTS: dict[str, str] = {}


def _cached(name, fn):
    if name not in _REPORTS:
        _REPORTS[name] = fn()
    return _REPORTS[name]


# === criterion 1: the orthogonality oracles agree ===


def _c1_report():
    rng = np.random.default_rng(31)
    agreements = 0
    orthogonal_pairs = 0
    max_witness = 0.0
    max_closed = 0.0
    for k in range(500):
        nb = int(rng.integers(1, 4))
        dims = [int(rng.integers(1, 6)) for _ in range(nb)]
        alg = make_algebra(dims)
        b0 = int(rng.integers(0, nb))
        s0 = random_pure_state(alg, b0, rng)
        mode = k % 4
        if mode == 0 and nb >= 2:
            b1 = (b0 + 1 + int(rng.integers(0, nb - 1))) % nb
            s1 = random_pure_state(alg, b1, rng)
        elif mode == 1 and dims[b0] >= 2:
            y = rng.standard_normal(dims[b0]) + 1j * rng.standard_normal(dims[b0])
            y = y - np.vdot(s0.vector, y) * s0.vector
            if np.linalg.norm(y) <= 1e-6:
                s1 = random_pure_state(alg, b0, rng)
            else:
                s1 = make_pure_state(alg, b0, y)
        elif mode == 2:
            phase = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
            s1 = make_pure_state(alg, b0, s0.vector * phase)
        else:
            s1 = random_pure_state(alg, b0, rng)

        o_inner = is_orthogonal(s0, s1)
        dist = state_distance_oracle(s0, s1)
        o_dist = abs(dist - 2.0) <= 1e-8
        witness = projection_witness(s0, s1)
        o_wit = witness is not None
        if o_wit:
            for _, _, _, u in matrix_units(alg):
                eue = mul(mul(witness, u), witness)
                r0 = abs(evaluate(s0, eue) - evaluate(s0, u))
                r1 = abs(evaluate(s1, eue))
                max_witness = max(max_witness, r0, r1)
        agreements += int(o_inner == o_dist and o_dist == o_wit)
        orthogonal_pairs += int(o_inner)
        if s0.block == s1.block:
            # 2*sqrt(1 - TP), with 1 - TP as the squared norm of the
            # component of one vector orthogonal to the other; the direct
            # subtraction loses eight digits when TP is close to 1
            resid = s1.vector - s0.vector * np.vdot(s0.vector, s1.vector)
            closed = abs(dist - 2.0 * float(np.linalg.norm(resid)))
            max_closed = max(max_closed, closed)
    return json.dumps(
        {
            "pairs": 500,
            "agreements": agreements,
            "orthogonal_pairs": orthogonal_pairs,
            "max_witness_identity_residual": max_witness,
            "max_closed_form_residual": max_closed,
        }
    )


def test_criterion_1_orthogonality_oracles_agree():
    data = json.loads(_cached("c1", _c1_report))
    assert data["agreements"] == data["pairs"] == 500
    assert 0 < data["orthogonal_pairs"] < 500
    assert data["max_witness_identity_residual"] <= 1e-8
    assert data["max_closed_form_residual"] <= 1e-8


# === criterion 2: canonical maps survive the reconstruction round trip ===


def _c2_configs():
    configs = [
        # two fibers sharing one target block
        ([2, 3], [4], [0, 0], ["linear", "antilinear"], 98),
        # target block 0 never hit
        ([2], [3, 2], [1], ["linear"], 99),
    ]
    for k in range(48):
        rng = np.random.default_rng([7, k])
        ns = int(rng.integers(1, 4))
        src = [int(rng.integers(1, 6)) for _ in range(ns)]
        nt = int(rng.integers(1, 4))
        tgt = [int(rng.integers(max(src), 6)) for _ in range(nt)]
        assignment = [int(rng.integers(0, nt)) for _ in range(ns)]
        kinds = [("linear", "antilinear")[int(rng.integers(0, 2))] for _ in range(ns)]
        configs.append((src, tgt, assignment, kinds, 100 + k))
    return configs


def _c2_corpus():
    return [
        random_canonical(src, tgt, assignment, kinds, seed=seed)
        for src, tgt, assignment, kinds, seed in _c2_configs()
    ]


def _c2_report():
    rows = []
    for m in _c2_corpus():
        box = as_blackbox(m)
        phi = assemble(box, tol=1e-8)
        worst = 0.0
        kinds_ok = True
        assign_ok = True
        for planted, found in zip(m.fibers, phi.canonical.fibers):
            assign_ok = assign_ok and planted.target_block == found.target_block
            kinds_ok = kinds_ok and planted.kind == found.kind
            inner = np.vdot(found.isometry, planted.isometry)
            aligned = found.isometry * (inner / abs(inner)) if abs(inner) > 0 else found.isometry
            worst = max(worst, float(np.max(np.abs(aligned - planted.isometry))))
        verdict = verify_induction(box, phi, samples=30, seed=11, tol=1e-8)
        rows.append(
            {
                "source": list(m.source_algebra.block_dims),
                "target": list(m.target_algebra.block_dims),
                "assignment_exact": assign_ok,
                "kinds_exact": kinds_ok,
                "isometry_error": worst,
                "induction": verdict.status,
            }
        )
    return json.dumps({"maps": rows})


def test_criterion_2_wigner_round_trip():
    rows = json.loads(_cached("c2", _c2_report))["maps"]
    assert len(rows) == 50
    for row in rows:
        assert row["assignment_exact"] and row["kinds_exact"]
        assert row["isometry_error"] <= 1e-7
        assert row["induction"] == "holds"


# === criterion 3: the dim-2 warp is caught ===


def _c3_report():
    box = dim2_biorthogonal_not_tp(0.25)
    rep = classify(box, samples=260, seed=2)
    failure = None
    try:
        assemble(dim2_biorthogonal_not_tp(0.25))
    except AssemblyFailure as e:
        failure = {
            "is_reconstruction_failure": isinstance(e.detail, ReconstructionFailure),
            "reason": getattr(e.detail, "reason", None),
        }
    return json.dumps(
        {"classification": report_to_json(rep), "reconstruction": failure}
    )


def test_criterion_3_dim2_distortion_detected():
    data = json.loads(_cached("c3", _c3_report))
    rep = data["classification"]
    assert rep["sample_count"] >= 200
    assert rep["verdicts"]["bi_orthogonal"]["status"] == "holds"
    tp = rep["verdicts"]["locally_tp_preserving"]
    assert tp["status"] == "fails"
    gap = abs(tp["witness"]["measured"]["tp_in"] - tp["witness"]["measured"]["tp_out"])
    assert gap >= 0.05
    assert data["reconstruction"] is not None
    assert data["reconstruction"]["is_reconstruction_failure"]
    assert data["reconstruction"]["reason"] in (
        "phase_probe_mismatch",
        "validation_failed",
    )


# === criterion 4: Jordan isomorphisms split and verify ===


def _c4_cases():
    cases = []
    for k in range(50):
        rng = np.random.default_rng([21, k])
        nb = int(rng.integers(1, 4))
        dims = [int(rng.integers(1, 5)) for _ in range(nb)]
        tags = [("mult", "anti")[int(rng.integers(0, 2))] for _ in range(nb)]
        cases.append((dims, tags, 300 + k))
    return cases


def _c4_report():
    rows = []
    for dims, tags, seed in _c4_cases():
        t = random_jordan_iso(dims, tags, seed=seed)
        expected = tuple("mult" if d == 1 else tag for d, tag in zip(dims, tags))
        jordan = is_jordan_star_homomorphism(t, tol=1e-10)
        split = kadison_split(t)
        max_trace = 0.0
        for a in range(len(dims)):
            sub_t = restrict_to_blocks(t, a, split.assignment[a])
            trace_v = check_trace_preservation(sub_t, tol=1e-9)
            if trace_v.status != HOLDS:
                max_trace = max(max_trace, float(trace_v.witness["residual"]))
        rows.append(
            {
                "dims": dims,
                "jordan": jordan.status,
                "tags_exact": split.tags == expected,
                "isometry": verify_isometry(t, samples=10, seed=3).status,
                "order": verify_order_iso(t, samples=10, seed=3).status,
                "ortho": verify_orthoisomorphism(t, samples=6, seed=3).status,
                "max_trace_residual": max_trace,
            }
        )
    return json.dumps({"isos": rows})


def test_criterion_4_jordan_structure():
    rows = json.loads(_cached("c4", _c4_report))["isos"]
    assert len(rows) == 50
    for row in rows:
        assert row["jordan"] == "holds"
        assert row["tags_exact"]
        assert row["isometry"] == row["order"] == row["ortho"] == "holds"
        assert row["max_trace_residual"] <= 1e-9


# === criterion 5: sampled verdicts never contradict the implications ===


def _adversarial_zoo():
    alg2 = make_algebra([2])
    alg22 = make_algebra([2, 2])
    alg3 = make_algebra([3])
    alg21 = make_algebra([2, 1])
    alg11 = make_algebra([1, 1])
    tgt11 = make_algebra([1, 1])

    def collapse(alg):
        pinned = basis_state(alg, 0, 0)
        return BlackBoxRayMap(alg, alg, lambda s: pinned)

    def split(s):
        return basis_state(tgt11, 0 if abs(s.vector[0]) >= abs(s.vector[1]) else 1, 0)

    def merge(s):
        return basis_state(make_algebra([1]), 0, 0)

    def project3(s):
        head = s.vector.copy()
        head[2] = 0.0
        if np.linalg.norm(head) <= 1e-9:
            return basis_state(alg3, 0, 2)
        return make_pure_state(alg3, 0, head)

    def modulus(s):
        return make_pure_state(alg2, 0, np.abs(s.vector))

    hada = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)

    def kind_mix(s):
        z = s.vector
        w = z if z[0].real * z[1].imag >= 0 else z.conj()
        return make_pure_state(alg2, 0, hada @ w)

    anchor = np.array([0.6, 0.8], dtype=complex)

    def roulette(s):
        block = 0 if (anchor @ s.vector).real >= 0 else 1
        return make_pure_state(alg22, block, s.vector)

    tilted = make_pure_state(alg2, 0, [1.0, 1.0])

    def squared(s):
        return make_pure_state(alg2, 0, s.vector**2)

    def swap_entries(s):
        return make_pure_state(alg2, 0, s.vector[::-1])

    def block_swap(s):
        return make_pure_state(alg22, 1 - s.block, s.vector)

    def to_small_block(s):
        return basis_state(alg21, 1, 0)

    bloch30 = dim2_biorthogonal_not_tp(0.3)
    conj2 = entrywise_conjugation(alg2)

    def conj_then_warp(s):
        return bloch30(conj2(s))

    def mixed_kinds(s):
        vec = s.vector if s.block == 0 else s.vector.conj()
        return make_pure_state(alg22, s.block, vec)

    def identity21(s):
        return s

    perm_dual = dual_pure_state_map(
        composition_operator(PointMap(3, 3, (1, 2, 0)))
    )

    return [
        collapse(alg22),
        collapse(alg3),
        BlackBoxRayMap(alg2, tgt11, split),
        BlackBoxRayMap(alg11, make_algebra([1]), merge),
        dim2_biorthogonal_not_tp(0.25),
        dim2_biorthogonal_not_tp(0.45),
        dim2_biorthogonal_not_tp(-0.3),
        BlackBoxRayMap(alg2, alg2, conj_then_warp),
        BlackBoxRayMap(alg3, alg3, project3),
        BlackBoxRayMap(alg2, alg2, modulus),
        BlackBoxRayMap(alg2, alg2, kind_mix),
        BlackBoxRayMap(alg2, alg22, roulette),
        BlackBoxRayMap(alg2, alg2, lambda s: tilted),
        BlackBoxRayMap(alg2, alg2, swap_entries),
        BlackBoxRayMap(alg22, alg22, block_swap),
        perm_dual,
        BlackBoxRayMap(alg21, alg21, to_small_block),
        BlackBoxRayMap(alg2, alg2, squared),
        BlackBoxRayMap(alg22, alg22, mixed_kinds),
        BlackBoxRayMap(alg21, alg21, identity21),
    ]


def _c5_report():
    rows = []
    for m in _c2_corpus():
        rows.append(report_to_json(classify(m, samples=30, seed=13))["verdicts"])
    for box in _adversarial_zoo():
        rows.append(report_to_json(classify(box, samples=30, seed=13))["verdicts"])
    return json.dumps({"reports": rows})


def test_criterion_5_verdict_implications():
    rows = json.loads(_cached("c5", _c5_report))["reports"]
    assert len(rows) == 70
    for verdicts in rows:
        if verdicts["co_orthogonal"]["status"] == "holds":
            assert verdicts["fibre_preserving"]["status"] != "fails"
        if verdicts["bi_orthogonal"]["status"] == "holds":
            assert verdicts["locally_injective"]["status"] != "fails"


# === criterion 6: commutative round trips ===


def _c6_report():
    entries = []
    round_trips_ok = 0
    total = 0
    for n in (1, 2, 3):
        for s in (1, 2, 3):
            for vals in itertools.product(range(n), repeat=s):
                nu = PointMap(n, s, vals)
                total += 1
                back = extract_point_map(composition_operator(nu))
                round_trips_ok += int(back == nu)
                rep = classify(
                    dual_pure_state_map(composition_operator(nu)), samples=8, seed=4
                )
                entries.append(
                    {
                        "n": n,
                        "s": s,
                        "nu": list(vals),
                        "injective": nu.injective,
                        "orthogonal": rep.orthogonal.status,
                        "co_orthogonal": rep.co_orthogonal.status,
                        "fibre_preserving": rep.fibre_preserving.status,
                    }
                )
    sampled_ok = 0
    for k in range(20):
        rng = np.random.default_rng([41, k])
        n = int(rng.integers(1, 9))
        s = int(rng.integers(1, 9))
        nu = PointMap(n, s, [int(rng.integers(0, n)) for _ in range(s)])
        sampled_ok += int(extract_point_map(composition_operator(nu)) == nu)
    worst = 0.0
    for k in range(10):
        rng = np.random.default_rng([43, k])
        n = int(rng.integers(2, 9))
        nu = PointMap(n, n, [int(x) for x in rng.permutation(n)])
        t = composition_operator(nu)
        t2 = from_induced(assemble(dual_pure_state_map(t)))
        for a, i, j, _ in matrix_units(t.source):
            res = operator_norm(sub(t2.image_of(a, i, j), t.image_of(a, i, j)))
            worst = max(worst, float(res))
    return json.dumps(
        {
            "exhaustive_cases": total,
            "round_trips_ok": round_trips_ok,
            "cases": entries,
            "sampled_ok": sampled_ok,
            "pipeline_max_residual": worst,
        }
    )


def test_criterion_6_banach_stone_round_trip():
    data = json.loads(_cached("c6", _c6_report))
    assert data["exhaustive_cases"] == 56
    assert data["round_trips_ok"] == 56
    assert data["sampled_ok"] == 20
    for case in data["cases"]:
        expected = "holds" if case["injective"] else "fails"
        assert case["orthogonal"] == expected
        assert case["co_orthogonal"] == "holds"
        assert case["fibre_preserving"] == "holds"
    assert data["pipeline_max_residual"] <= 1e-10


# === criterion 7: everything above is byte-reproducible ===


def test_criterion_7_reports_byte_identical():
    generators = {
        "c1": _c1_report,
        "c2": _c2_report,
        "c3": _c3_report,
        "c4": _c4_report,
        "c5": _c5_report,
        "c6": _c6_report,
    }
    for name, fn in generators.items():
        first = _cached(name, fn)
        assert fn() == first, f"report {name} changed between runs"
