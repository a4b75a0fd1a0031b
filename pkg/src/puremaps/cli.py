"""Command-line interface.

Five commands: classify, reconstruct, jordan-split, banach-stone, gen. All
read and write JSON; output defaults to stdout. Exit codes: 0 property
holds / object verified, 1 mathematical property violated (a witness is in
the output), 2 operational trouble (bad file, malformed JSON, broken
evaluator). Identical inputs and seeds give byte-identical outputs.
"""

from __future__ import annotations

import json
import sys

import click

from .commutative import (
    NotStarHomomorphism,
    composition_operator,
    extract_point_map,
    point_map_from_json,
    point_map_to_json,
)
from .jordan import (
    NeitherMultNorAnti,
    NotBijective,
    NotProjectionPreserving,
    is_jordan_star_homomorphism,
    kadison_split,
    random_jordan_iso,
    table_from_json,
    table_to_json,
    verify_isometry,
    verify_order_iso,
    verify_orthoisomorphism,
)
from .raymaps import (
    FAILS,
    HOLDS,
    canonical_from_json,
    canonical_to_json,
    classify,
    report_to_json,
    verdict_to_json,
)
from .states import state_to_json
from .wigner import (
    AssemblyFailure,
    ReconstructionFailure,
    assemble,
    dim2_biorthogonal_not_tp,
    entrywise_conjugation,
    random_canonical,
    verify_induction,
)

_EXIT_VIOLATION = 1
_EXIT_OPERATIONAL = 2


def _die(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(_EXIT_OPERATIONAL)


def _emit(data: dict, output: str) -> None:
    text = json.dumps(data, indent=2) + "\n"
    if output == "-":
        click.echo(text, nl=False)
    else:
        with open(output, "w") as fh:
            fh.write(text)


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        _die(f"cannot read {path}: {e}")


def _parse_builtin(spec: str):
    """Builtin selector, e.g. dim2-bloch:alpha=0.25 or conjugation:dims=2+3."""
    name, _, rest = spec.partition(":")
    params = {}
    if rest:
        for piece in rest.split(","):
            key, _, value = piece.partition("=")
            if not value:
                _die(f"malformed builtin parameter {piece!r}")
            params[key.strip()] = value.strip()
    if name == "dim2-bloch":
        alpha = float(params.pop("alpha", "0.25"))
        if params:
            _die(f"unknown parameters for dim2-bloch: {sorted(params)}")
        return dim2_biorthogonal_not_tp(alpha)
    if name == "conjugation":
        dims = [int(d) for d in params.pop("dims", "2").split("+")]
        if params:
            _die(f"unknown parameters for conjugation: {sorted(params)}")
        from .algebra import make_algebra

        return entrywise_conjugation(make_algebra(dims))
    _die(f"unknown builtin map {name!r}")


def _resolve_map(input_path: str | None, builtin: str | None):
    if (input_path is None) == (builtin is None):
        _die("give exactly one of --input or --map")
    if builtin is not None:
        return _parse_builtin(builtin)
    return canonical_from_json(_load_json(input_path))


def _describe_assembly_failure(e: AssemblyFailure) -> dict:
    detail = e.detail
    if isinstance(detail, ReconstructionFailure):
        return {
            "kind": "reconstruction",
            "source_block": e.source_block,
            "reason": detail.reason,
            "witness": detail.witness,
        }
    return {
        "kind": "not_fibre_preserving",
        "source_block": detail.source_block,
        "state0": state_to_json(detail.state0),
        "state1": state_to_json(detail.state1),
        "out_blocks": [detail.out_block0, detail.out_block1],
    }


_opt_output = click.option(
    "--output", default="-", show_default=True, help="Output path, - for stdout."
)
_opt_seed = click.option("--seed", default=0, show_default=True, type=int)
_opt_samples = click.option("--samples", default=200, show_default=True, type=int)
_opt_tol = click.option("--tol", default=1e-8, show_default=True, type=float)
_opt_input = click.option("--input", "input_path", default=None, help="JSON input file.")
_opt_map = click.option(
    "--map", "builtin", default=None, help='Builtin map, e.g. "dim2-bloch:alpha=0.25".'
)


@click.group()
def main():
    """Classify pure-state transformations and reconstruct their inducing maps."""


@main.command("classify")
@_opt_input
@_opt_map
@_opt_output
@_opt_seed
@_opt_samples
@_opt_tol
@click.option(
    "--figures",
    "figures_dir",
    default=None,
    help="Directory for pairs.csv and PNG figures next to the JSON report.",
)
def cmd_classify(input_path, builtin, output, seed, samples, tol, figures_dir):
    """Probe a ray map and report its orthogonality-related properties."""
    try:
        m = _resolve_map(input_path, builtin)
        report = classify(m, samples=samples, seed=seed, tol=tol)
    except SystemExit:
        raise
    except Exception as e:
        _die(str(e))
    _emit(report_to_json(report), output)
    if figures_dir is not None:
        from .reporting import write_report_files

        write_report_files(m, report, figures_dir, samples=samples, seed=seed)
    statuses = [
        report.orthogonal.status,
        report.co_orthogonal.status,
        report.bi_orthogonal.status,
        report.fibre_preserving.status,
        report.locally_injective.status,
        report.locally_tp_preserving.status,
    ]
    if FAILS in statuses:
        sys.exit(_EXIT_VIOLATION)
    if any(s != HOLDS for s in statuses):
        sys.exit(_EXIT_OPERATIONAL)
    sys.exit(0)


@main.command("reconstruct")
@_opt_input
@_opt_map
@_opt_output
@_opt_seed
@_opt_samples
@_opt_tol
def cmd_reconstruct(input_path, builtin, output, seed, samples, tol):
    """Rebuild the canonical form of a map and verify the induced duality."""
    try:
        m = _resolve_map(input_path, builtin)
    except SystemExit:
        raise
    except Exception as e:
        _die(str(e))
    try:
        phi = assemble(m, tol=tol)
    except AssemblyFailure as e:
        _emit({"status": "failed", "failure": _describe_assembly_failure(e)}, output)
        sys.exit(_EXIT_VIOLATION)
    except Exception as e:
        _die(str(e))
    verification = verify_induction(m, phi, samples=samples, seed=seed, tol=tol)
    _emit(
        {
            "status": "verified" if bool(verification) else "failed",
            "induced_map": canonical_to_json(phi.canonical),
            "verification": verdict_to_json(verification),
            "finite_dim": True,
        },
        output,
    )
    sys.exit(0 if bool(verification) else _EXIT_VIOLATION)


@main.command("jordan-split")
@_opt_input
@_opt_output
@_opt_seed
@_opt_samples
@_opt_tol
def cmd_jordan_split(input_path, output, seed, samples, tol):
    """Split a Jordan isomorphism into multiplicative and reversing parts."""
    if input_path is None:
        _die("--input is required")
    try:
        table = table_from_json(_load_json(input_path))
    except SystemExit:
        raise
    except Exception as e:
        _die(str(e))
    jordan_v = is_jordan_star_homomorphism(table, tol)
    if not jordan_v:
        _emit(
            {"error": "not_jordan_star_homomorphism", "witness": jordan_v.witness},
            output,
        )
        sys.exit(_EXIT_VIOLATION)
    try:
        split = kadison_split(table, tol)
    except (NotBijective, NeitherMultNorAnti) as e:
        witness = getattr(e, "witness", {"detail": str(e)})
        _emit({"error": "kadison_split_failed", "witness": witness}, output)
        sys.exit(_EXIT_VIOLATION)
    try:
        ortho_v = verify_orthoisomorphism(table, samples=samples, seed=seed, tol=tol)
    except NotProjectionPreserving as e:
        _emit({"error": "not_projection_preserving", "witness": e.witness}, output)
        sys.exit(_EXIT_VIOLATION)
    verified = {
        "jordan_star_homomorphism": verdict_to_json(jordan_v),
        "isometry": verdict_to_json(
            verify_isometry(table, samples=samples, seed=seed, tol=tol)
        ),
        "order_isomorphism": verdict_to_json(
            verify_order_iso(table, samples=samples, seed=seed, tol=tol)
        ),
        "orthoisomorphism": verdict_to_json(ortho_v),
    }
    f_blocks = sorted(
        split.assignment[a] for a, tag in enumerate(split.tags) if tag == "mult"
    )
    _emit({"F_blocks": f_blocks, "tags": list(split.tags), "verified": verified}, output)
    ok = all(v["status"] == HOLDS for v in verified.values())
    sys.exit(0 if ok else _EXIT_VIOLATION)


@main.command("banach-stone")
@_opt_input
@_opt_output
@_opt_tol
def cmd_banach_stone(input_path, output, tol):
    """Convert between point maps and composition operators on function algebras."""
    if input_path is None:
        _die("--input is required")
    data = _load_json(input_path)
    try:
        if "nu" in data:
            nu = point_map_from_json(data)
            table = composition_operator(nu)
            _emit(
                {
                    "table": table_to_json(table),
                    "point_map": point_map_to_json(nu),
                    "injective": nu.injective,
                },
                output,
            )
            sys.exit(0)
        table = table_from_json(data)
    except SystemExit:
        raise
    except Exception as e:
        _die(str(e))
    try:
        nu = extract_point_map(table, tol)
    except NotStarHomomorphism as e:
        _emit({"error": "not_star_homomorphism", "witness": e.witness}, output)
        sys.exit(_EXIT_VIOLATION)
    _emit({"point_map": point_map_to_json(nu), "injective": nu.injective}, output)
    sys.exit(0)


@main.command("gen")
@click.option(
    "--fixture",
    type=click.Choice(["canonical-map", "algebra", "jordan-iso"]),
    required=True,
)
@click.option("--source-dims", default=None, help="Comma-separated, e.g. 2,3.")
@click.option("--target-dims", default=None, help="Comma-separated, e.g. 3,4.")
@click.option("--assignment", default=None, help="Target block per source block.")
@click.option("--kinds", default=None, help="linear/antilinear per source block.")
@click.option("--dims", default=None, help="Comma-separated block dims.")
@click.option("--tags", default=None, help="mult/anti per block (jordan-iso).")
@_opt_output
@_opt_seed
def cmd_gen(fixture, source_dims, target_dims, assignment, kinds, dims, tags, output, seed):
    """Emit a seeded random fixture as JSON."""

    def ints(text):
        return [int(x) for x in text.split(",")]

    try:
        if fixture == "algebra":
            if dims is None:
                _die("--dims is required for algebra fixtures")
            from .algebra import algebra_to_json, make_algebra

            _emit({"block_dims": algebra_to_json(make_algebra(ints(dims)))}, output)
            sys.exit(0)
        if fixture == "canonical-map":
            if source_dims is None or target_dims is None:
                _die("--source-dims and --target-dims are required")
            src = ints(source_dims)
            tgt = ints(target_dims)
            assign = ints(assignment) if assignment else [b % len(tgt) for b in range(len(src))]
            kind_list = kinds.split(",") if kinds else ["linear"] * len(src)
            m = random_canonical(src, tgt, assign, kind_list, seed=seed)
            _emit(canonical_to_json(m), output)
            sys.exit(0)
        if dims is None:
            _die("--dims is required for jordan-iso fixtures")
        dim_list = ints(dims)
        tag_list = tags.split(",") if tags else ["mult"] * len(dim_list)
        table = random_jordan_iso(dim_list, tag_list, seed=seed)
        _emit(table_to_json(table), output)
        sys.exit(0)
    except SystemExit:
        raise
    except Exception as e:
        _die(str(e))


if __name__ == "__main__":
    main()
