"""Command-line front end.

Subcommands: tableau, region, table1, conjecture, simulate, classify,
compose.  Outputs are plain CSV/JSON/text files; every command is
deterministic.  Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .composition import CompositionScheme, compose, scheme_to_text
from .dynamics import (
    ELLIPTIC,
    HYPERBOLIC,
    LOGISTIC,
    ModelProblem,
    StepMap,
    classify_system,
    simulate,
    trajectory_to_csv,
)
from .errors import ExcludedPointError, SolverError
from .region import (
    composed_predicate,
    elliptic_predicate_sprk,
    find_region,
    hyperbolic_predicate_srk,
    hyperbolic_predicate_sprk,
    lobatto_elliptic_endpoint,
    region_to_csv,
    reports_to_json,
    spectral_report,
)
from .tableau import (
    ButcherTableau,
    PartitionedPair,
    gauss,
    lobatto_iiia,
    lobatto_iiib,
    lobatto_pair,
    midpoint,
    pair_to_text,
    srk_pair,
    symplectic_euler,
    tableau_to_text,
)

# Reference endpoints for the Lobatto IIIA-IIIB elliptic intervals.  The
# s=2..4 entries are exact closed forms; the s=5 and s=10 figures are quoted
# reference values whose trailing digits carry the noise of the original
# computation (see README).  Deviations are reported, never clamped.
TABLE1_REFERENCE = {
    2: 2.0,
    3: math.sqrt(8.0),
    4: math.sqrt(42.0 - 6.0 * math.sqrt(29.0)),
    5: 3.140328,
    10: 3.141590,
}
TABLE1_STAGES = (2, 3, 4, 5, 10)


class UsageError(Exception):
    pass


def _resolve_method(name: str, stages: int | None):
    if name == "symplectic-euler":
        return symplectic_euler()
    if name == "midpoint":
        return midpoint()
    if name == "gauss":
        s = 2 if stages is None else stages
        if not 1 <= s <= 10:
            raise UsageError(f"gauss stage count must be in 1..10, got {s}")
        return gauss(s)
    builders = {
        "lobatto": lobatto_pair,
        "lobatto-iiia": lobatto_iiia,
        "lobatto-iiib": lobatto_iiib,
    }
    if name in builders:
        s = 2 if stages is None else stages
        if not 2 <= s <= 10:
            raise UsageError(f"lobatto stage count must be in 2..10, got {s}")
        return builders[name](s)
    raise UsageError(f"unknown method {name!r}")


def _resolve_problem(kind: str, alpha: float, beta: float) -> ModelProblem:
    if kind == LOGISTIC:
        return ModelProblem.logistic(alpha)
    if kind == ELLIPTIC:
        return ModelProblem.elliptic(beta)
    if kind == HYPERBOLIC:
        return ModelProblem.hyperbolic(beta)
    raise UsageError(f"unknown problem {kind!r}")


def _maybe_compose(method, order: int | None):
    if order is None:
        return method
    if isinstance(method, PartitionedPair) and method.first.classical_order < 2:
        raise UsageError("composition requires a base method of order at least 2")
    return compose(method, order)


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _cmd_tableau(args) -> int:
    method = _resolve_method(args.method, args.stages)
    if isinstance(method, PartitionedPair):
        _write(args.out, pair_to_text(method))
    else:
        _write(args.out, tableau_to_text(method))
    return 0


def _predicate_for(method, kind: str):
    if isinstance(method, CompositionScheme):
        return lambda z: composed_predicate(method, kind, z)
    if isinstance(method, PartitionedPair):
        if kind == ELLIPTIC:
            return lambda z: elliptic_predicate_sprk(method, z)
        return lambda z: hyperbolic_predicate_sprk(method, z)
    if kind == ELLIPTIC:
        pair = srk_pair(method)
        return lambda z: elliptic_predicate_sprk(pair, z)
    return lambda z: hyperbolic_predicate_srk(method, z)


def _cmd_region(args) -> int:
    method = _maybe_compose(_resolve_method(args.method, args.stages), args.compose)
    predicate = _predicate_for(method, args.kind)
    result = find_region(predicate, args.zmax)
    _write(args.out, region_to_csv(result))
    if args.out is not None:
        samples = []
        for k in range(1, 513):
            z = args.zmax * k / 512.0
            try:
                samples.append(spectral_report(method, z))
            except ExcludedPointError:
                continue
        sidecar = args.out.rsplit(".", 1)[0] + ".samples.json"
        _write(sidecar, reports_to_json(samples))
    print(f"principal endpoint: {result.principal_endpoint:.12g}")
    if result.excluded_points:
        print(f"excluded points: {len(result.excluded_points)}")
    return 0


def _cmd_table1(args) -> int:
    print(f"{'s':>3} {'computed':>20} {'reference':>20} {'deviation':>12}")
    for s in TABLE1_STAGES:
        computed = lobatto_elliptic_endpoint(s)
        ref = TABLE1_REFERENCE[s]
        print(f"{s:>3} {computed:>20.12f} {ref:>20.12f} {abs(computed - ref):>12.3e}")
    return 0


def _cmd_conjecture(args) -> int:
    max_s = args.stages if args.stages is not None else 10
    if not 2 <= max_s <= 10:
        raise UsageError(f"conjecture stage bound must be in 2..10, got {max_s}")
    print(f"{'s':>3} {'endpoint':>22} {'gap to pi':>14}")
    endpoints = []
    for s in range(2, max_s + 1):
        e = lobatto_elliptic_endpoint(s)
        endpoints.append(e)
        print(f"{s:>3} {e:>22.15f} {math.pi - e:>14.6e}")
    if any(b <= a for a, b in zip(endpoints, endpoints[1:])):
        print("endpoints are not strictly increasing", file=sys.stderr)
        return 3
    if any(e >= math.pi for e in endpoints):
        print("an endpoint reached pi", file=sys.stderr)
        return 3
    return 0


def _cmd_simulate(args) -> int:
    problem = _resolve_problem(args.problem, args.alpha, args.beta)
    method = _resolve_method(args.method, args.stages)
    step_map = StepMap(method, problem, args.h)
    result = simulate(step_map, (args.p0, args.q0), args.steps)
    if args.format == "json":
        payload = {"states": [[p, q] for p, q in result.states]}
        _write(args.out, json.dumps(payload, indent=2) + "\n")
    else:
        _write(args.out, trajectory_to_csv(result.states))
    if not result.completed:
        print(f"simulation stopped early: {result.error}", file=sys.stderr)
        return 3
    return 0


def _cmd_classify(args) -> int:
    problem = _resolve_problem(args.problem, args.alpha, args.beta)
    method = _resolve_method(args.method, args.stages)
    try:
        reports, overall = classify_system(problem, method, args.h)
    except (ExcludedPointError, SolverError, ValueError) as exc:
        print(f"classification failed: {exc}", file=sys.stderr)
        return 3
    payload = {
        "problem": {"kind": problem.kind, "parameter": problem.parameter},
        "method": method.name,
        "h": args.h,
        "overall": overall,
        "equilibria": [r.to_dict() for r in reports],
    }
    _write(args.out, json.dumps(payload, indent=2) + "\n")
    return 0


def _cmd_compose(args) -> int:
    method = _resolve_method(args.method, args.stages)
    scheme = _maybe_compose(method, args.compose)
    _write(args.out, scheme_to_text(scheme))
    return 0


def _add_method_args(p, default: str | None = None) -> None:
    p.add_argument("--method", default=default, required=default is None,
                   help="symplectic-euler, midpoint, gauss, lobatto, "
                        "lobatto-iiia or lobatto-iiib")
    p.add_argument("--stages", type=int, default=None, help="stage count (1-10)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sympreg",
        description="Symplectic Runge-Kutta methods and their "
                    "structure-preservation step-size regions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tableau", help="print or export a catalog tableau")
    _add_method_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_tableau)

    p = sub.add_parser("region", help="structure-preservation region scan")
    _add_method_args(p)
    p.add_argument("--kind", choices=[ELLIPTIC, HYPERBOLIC], required=True)
    p.add_argument("--compose", type=int, choices=[2, 4, 6], default=None)
    p.add_argument("--zmax", type=float, default=10.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_region)

    p = sub.add_parser("table1", help="Lobatto pair endpoints vs reference values")
    p.set_defaults(func=_cmd_table1)

    p = sub.add_parser("conjecture", help="Lobatto endpoints approaching pi")
    p.add_argument("--stages", type=int, default=None, help="largest stage count")
    p.set_defaults(func=_cmd_conjecture)

    p = sub.add_parser("simulate", help="iterate a discrete trajectory")
    _add_method_args(p, default="symplectic-euler")
    p.add_argument("--problem", choices=[ELLIPTIC, HYPERBOLIC, LOGISTIC],
                   required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--p0", type=float, default=1.0)
    p.add_argument("--q0", type=float, default=1.0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("classify", help="equilibrium classification report")
    _add_method_args(p, default="symplectic-euler")
    p.add_argument("--problem", choices=[ELLIPTIC, HYPERBOLIC, LOGISTIC],
                   required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("compose", help="print a composition scheme")
    _add_method_args(p)
    p.add_argument("--compose", type=int, choices=[2, 4, 6], default=2)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_compose)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ExcludedPointError, SolverError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
