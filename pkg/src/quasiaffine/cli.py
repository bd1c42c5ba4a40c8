"""Command-line front end.

Exit codes: 0 pass / holds, 1 fail (with witness), 2 input error,
3 inconclusive or grid-relative verdict.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from .algebra import as_rational, format_rational
from .integrands import INTEGRAND_ZOO, IntegrandError, PolyIntegrand, zoo_integrand
from .operators import (
    DEFAULT_SEED,
    OPERATOR_ZOO,
    HomOperator,
    OperatorError,
    SampleGrid,
    constant_rank_probe,
    default_grid,
    random_grid,
    spanning_probe,
    verify_potential_pair,
    zoo_operator,
)
from .quasiaffinity import (
    DEFAULT_MAX_EVALS,
    DEFAULT_TRIALS,
    CheckConfig,
    lambda_affine_check,
    quadratic_vanishing_basis,
    quasiaffine_check,
    quasiaffine_necessary_from_a,
    witness_value,
)
from .reports import CheckReport, DimensionError, Verdict, Witness, witness_from_json
from .torus import BUNDLE_ZOO, TorusBundle, TorusError, TrigField, torus_average

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3

VERDICT_EXIT = {
    Verdict.PASS: EXIT_PASS,
    Verdict.FAIL: EXIT_FAIL,
    Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
    Verdict.PROBABLE_PASS: EXIT_INCONCLUSIVE,
    Verdict.NECESSARY_CONDITIONS_HOLD: EXIT_INCONCLUSIVE,
}

INPUT_ERRORS = (OperatorError, IntegrandError, TorusError, DimensionError, ValueError, OSError, KeyError)


class InputError(Exception):
    pass


# --------------------------------------------------------------------------
# input parsing
# --------------------------------------------------------------------------


def _parse_params(text: str) -> dict[str, Any]:
    """``"N=2,m=3"`` -> ``{"N": 2, "m": 3}``; list values use ``/`` (``rows=0/1``)."""
    out: dict[str, Any] = {}
    if not text:
        return out
    for part in text.split(","):
        key, sep, value = part.partition("=")
        if not sep or not key:
            raise InputError(f"bad zoo parameter {part!r}; expected key=value")
        try:
            out[key.strip()] = [int(v) for v in value.split("/")] if "/" in value else int(value)
        except ValueError:
            raise InputError(f"zoo parameter {key!r} must be an integer or a /-separated list") from None
    return out


def _split_zoo(source: str) -> tuple[str, dict[str, Any]] | None:
    if not source.startswith("zoo:"):
        return None
    name, _, params = source[4:].partition(":")
    return name, _parse_params(params)


def _load_json(source: str) -> Any:
    path = Path(source)
    if source == "-":
        text = sys.stdin.read()
    else:
        if not path.is_file():
            raise InputError(f"no such file: {source}")
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def parse_operator_file(path: str) -> HomOperator:
    data = _load_json(path)
    try:
        return HomOperator.from_json(data)
    except OperatorError as exc:
        raise InputError(f"{path}: {exc}") from None


def load_operator(source: str) -> HomOperator:
    zoo = _split_zoo(source)
    if zoo:
        return zoo_operator(zoo[0], **zoo[1])
    return parse_operator_file(source)


def load_integrand(source: str) -> PolyIntegrand:
    zoo = _split_zoo(source)
    if zoo:
        return zoo_integrand(zoo[0], **zoo[1])
    data = _load_json(source)
    try:
        return PolyIntegrand.from_json(data)
    except IntegrandError as exc:
        raise InputError(f"{source}: {exc}") from None


def load_grid(source: str, N: int, seed: int) -> SampleGrid:
    if source == "default":
        return default_grid(N, seed=seed)
    if source.startswith("random:"):
        try:
            count = int(source[7:])
        except ValueError:
            raise InputError(f"bad grid {source!r}") from None
        return SampleGrid(tuple(random_grid(N, count, seed=seed)))
    if source.startswith("file:"):
        data = _load_json(source[5:])
        points = data.get("points") if isinstance(data, dict) else data
        if not isinstance(points, list):
            raise InputError("grid file must be a list of points or {\"points\": [...]}")
        grid = SampleGrid.from_points(points)
        if grid.base_dim != N:
            raise InputError(f"grid points have length {grid.base_dim}, operator has N = {N}")
        return grid
    raise InputError(f"grid must be default, file:<path> or random:<count>, got {source!r}")


def load_bundle(source: str) -> TorusBundle:
    zoo = _split_zoo(source)
    if zoo:
        try:
            return BUNDLE_ZOO[zoo[0]]()
        except KeyError:
            raise InputError(f"unknown bundle {zoo[0]!r}; known: {', '.join(sorted(BUNDLE_ZOO))}") from None
    return TorusBundle.from_json(_load_json(source))


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------


def _emit(args, payload: dict, text: str) -> None:
    if args.output == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _emit_report(args, report: CheckReport) -> int:
    _emit(args, report.to_json(), report.render())
    return VERDICT_EXIT[report.verdict]


def _config(args) -> CheckConfig:
    return CheckConfig(
        mode=args.mode,
        max_evals=args.max_evals,
        trials=args.trials,
        seed=args.seed,
        workers=args.threads,
    )


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_check_quasiaffine(args) -> int:
    f, B = load_integrand(args.integrand), load_operator(args.operator)
    return _emit_report(args, quasiaffine_check(f, B, _config(args)))


def cmd_check_lambda_affine(args) -> int:
    f, B = load_integrand(args.integrand), load_operator(args.operator)
    return _emit_report(args, lambda_affine_check(f, B, _config(args)))


def cmd_check_from_annihilator(args) -> int:
    f, A = load_integrand(args.integrand), load_operator(args.operator)
    grid = load_grid(args.grid, A.base_dim, args.seed)
    return _emit_report(args, quasiaffine_necessary_from_a(f, A, grid, args.r_max, _config(args)))


def cmd_verify_pair(args) -> int:
    A, B = load_operator(args.annihilator), load_operator(args.potential)
    if A.in_dim != B.out_dim or A.base_dim != B.base_dim:
        raise DimensionError(
            f"annihilator expects R^{A.in_dim} on T_{A.base_dim}; potential yields R^{B.out_dim} on T_{B.base_dim}"
        )
    return _emit_report(args, verify_potential_pair(A, B, load_grid(args.grid, A.base_dim, args.seed)))


def cmd_rank_probe(args) -> int:
    op = load_operator(args.operator)
    rep = constant_rank_probe(op, load_grid(args.grid, op.base_dim, args.seed))
    if rep.constant:
        text = f"rank-probe: {rep.verdict}: rank {rep.common_rank} at all {rep.grid_size} grid frequencies"
    else:
        (xa, ra), (xb, rb) = rep.witness
        text = f"rank-probe: {rep.verdict}: rank {ra} at xi = {xa} but rank {rb} at xi = {xb}"
    _emit(args, rep.to_json(), text)
    return EXIT_INCONCLUSIVE if rep.constant else EXIT_FAIL


def cmd_span_probe(args) -> int:
    op = load_operator(args.operator)
    rep = spanning_probe(op, load_grid(args.grid, op.base_dim, args.seed), side=args.side)
    what = "kernels" if rep.side == "kernel" else "images"
    status = "spans (definitive)" if rep.spans else "does not span on this grid (grid-relative)"
    text = f"span-probe: {what} {status}: dimension {rep.span_dim} of {rep.target_dim}"
    _emit(args, rep.to_json(), text)
    return EXIT_PASS if rep.spans else EXIT_INCONCLUSIVE


def cmd_quad_basis(args) -> int:
    B = load_operator(args.operator)
    qb = quadratic_vanishing_basis(B, load_grid(args.grid, B.base_dim, args.seed))
    lines = [f"quad-basis: {len(qb.forms)} form(s) in dimension {qb.d}"]
    lines += [f"  - {c}" for c in qb.certificate]
    for i, Q in enumerate(qb.forms, 1):
        lines.append(f"form {i}:")
        lines += ["  [" + ", ".join(format_rational(v) for v in row) + "]" for row in Q.entries]
    if qb.rejected:
        lines.append(f"{len(qb.rejected)} sampled solution(s) rejected by the exact cone identity")
    _emit(args, qb.to_json(), "\n".join(lines))
    return EXIT_PASS if qb.definitive else EXIT_INCONCLUSIVE


def cmd_torus_mean(args) -> int:
    if args.bundle:
        bundle = load_bundle(args.bundle)
    else:
        if not (args.integrand and args.operator and args.field):
            raise InputError("torus-mean needs --bundle or all of --integrand, --operator, --field")
        f, B = load_integrand(args.integrand), load_operator(args.operator)
        fld = TrigField.from_json(_load_json(args.field), N=B.base_dim, m=B.in_dim)
        shift = tuple(as_rational(s) for s in args.shift.split(",")) if args.shift else (0,) * f.d
        bundle = TorusBundle(f, B, fld, tuple(as_rational(s) for s in shift))
    mean = torus_average(bundle.integrand, bundle.shift, bundle.operator, bundle.field)
    base = bundle.integrand(bundle.shift)
    payload = {"mean": format_rational(mean), "valueAtShift": format_rational(base),
               "defect": format_rational(mean - base)}
    _emit(args, payload, format_rational(mean))
    return EXIT_PASS


def cmd_zoo(args) -> int:
    if args.action == "list":
        payload = {
            "operators": {k: list(v[1]) for k, v in OPERATOR_ZOO.items()},
            "integrands": {k: list(v[1]) for k, v in INTEGRAND_ZOO.items()},
            "bundles": sorted(BUNDLE_ZOO),
        }
        lines = ["operators:"] + [f"  {k}({', '.join(v[1])})" for k, v in OPERATOR_ZOO.items()]
        lines += ["integrands:"] + [f"  {k}({', '.join(v[1])})" for k, v in INTEGRAND_ZOO.items()]
        lines += ["bundles:"] + [f"  {k}" for k in sorted(BUNDLE_ZOO)]
        _emit(args, payload, "\n".join(lines))
        return EXIT_PASS
    if not args.source:
        raise InputError("zoo emit needs a name such as zoo:grad:N=2,m=2")
    source = args.source if args.source.startswith("zoo:") else "zoo:" + args.source
    name = source[4:].partition(":")[0]
    if name in OPERATOR_ZOO:
        obj = load_operator(source)
    elif name in INTEGRAND_ZOO:
        obj = load_integrand(source)
    else:
        obj = load_bundle(source)
    print(json.dumps(obj.to_json(), indent=2))
    return EXIT_PASS


def cmd_verify_witness(args) -> int:
    data = _load_json(args.witness)
    if isinstance(data, dict) and "verdict" in data:
        data = data.get("witness")
        if data is None:
            raise InputError("report carries no witness")
    witness = witness_from_json(data)
    if not isinstance(witness, Witness):
        raise InputError("only integrand witnesses can be re-evaluated; pair witnesses are symbolic")
    f = load_integrand(args.integrand)
    op = load_operator(args.operator) if args.operator else None
    if op is None and witness.kind != "annihilator":
        raise InputError(f"a {witness.kind} witness needs --operator")
    value = witness_value(f, op, witness)
    ok = value != 0 and value == witness.value
    payload = {"value": format_rational(value), "claimed": format_rational(witness.value), "reproduced": ok}
    text = (
        f"witness reproduced: value {format_rational(value)}"
        if ok
        else f"witness NOT reproduced: got {format_rational(value)}, claimed {format_rational(witness.value)}"
    )
    _emit(args, payload, text)
    return EXIT_PASS if ok else EXIT_FAIL


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--grid", default="default", help="default | file:<path> | random:<count>")
    common.add_argument("--mode", choices=("exact", "randomized"), default="exact")
    common.add_argument("--max-evals", type=_positive, default=DEFAULT_MAX_EVALS)
    common.add_argument("--trials", type=_positive, default=DEFAULT_TRIALS)
    common.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    common.add_argument("--threads", type=_positive, default=1)

    parser = argparse.ArgumentParser(prog="quasiaffine", description="Exact quasiaffinity checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    for name, fn, help_ in (
        ("check-quasiaffine", cmd_check_quasiaffine, "bounded-order criterion against a potential"),
        ("check-lambda-affine", cmd_check_lambda_affine, "affinity along the cone of a potential"),
    ):
        p = add(name, fn, help_)
        p.add_argument("--integrand", required=True)
        p.add_argument("--operator", required=True, help="potential B")

    p = add("check-from-annihilator", cmd_check_from_annihilator, "sampled necessary conditions from A")
    p.add_argument("--integrand", required=True)
    p.add_argument("--operator", required=True, help="annihilator A")
    p.add_argument("--r-max", type=_positive, default=3)

    p = add("verify-pair", cmd_verify_pair, "certify that B is a potential of A")
    p.add_argument("--annihilator", required=True)
    p.add_argument("--potential", required=True)

    p = add("rank-probe", cmd_rank_probe, "probe the constant rank property")
    p.add_argument("--operator", required=True)

    p = add("span-probe", cmd_span_probe, "probe the spanning property")
    p.add_argument("--operator", required=True)
    p.add_argument("--side", choices=("kernel", "image"), default="kernel")

    p = add("quad-basis", cmd_quad_basis, "quadratic forms vanishing on the cone of B")
    p.add_argument("--operator", required=True)

    p = add("torus-mean", cmd_torus_mean, "exact torus average of f(shift + B phi)")
    p.add_argument("--bundle", help="zoo:bco or a bundle JSON file")
    p.add_argument("--integrand")
    p.add_argument("--operator")
    p.add_argument("--field")
    p.add_argument("--shift", help="comma-separated rationals")

    p = add("zoo", cmd_zoo, "list or emit zoo entries")
    p.add_argument("action", choices=("list", "emit"))
    p.add_argument("source", nargs="?")

    p = add("verify-witness", cmd_verify_witness, "re-evaluate a witness exactly")
    p.add_argument("--witness", required=True, help="report or witness JSON file, or - for stdin")
    p.add_argument("--integrand", required=True)
    p.add_argument("--operator")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except (InputError, *INPUT_ERRORS) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
