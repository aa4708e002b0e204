"""Command-line entry point: generate | analyze | boundary | uniformize | verify."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .busemann import RayError, busemann_field, validate_ray
from .generators import ALIASES, KINDS, GeneratorSpec, generate
from .hyperbolicity import boundary_gromov_product, delta_four_point, rips_kappa
from .io import SchemaError, dumps, load_space, rows_to_csv, save_report, space_to_dict
from .space import GraphError
from .uniformize import ConformalDeformation, ConstantsError, constants_ledger
from .verify import CHECK_ORDER, ConfigError, SuiteConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
DEFAULT_H = 1.0 / 14.0


def _threads() -> int | None:
    # advisory only: the numerical kernels run single-threaded in this package
    raw = os.environ.get("TOOL_THREADS")
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"TOOL_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError("TOOL_THREADS must be at least 1")
    return value


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _resolve(gen, args):
    space = gen.space
    o = gen.basepoint
    if getattr(args, "basepoint", None) is not None:
        try:
            o = space.index(args.basepoint)
        except KeyError:
            raise ConfigError(f"basepoint {args.basepoint!r} is not a vertex") from None
    ray_name = getattr(args, "ray", None) or (sorted(gen.rays)[0] if gen.rays else None)
    if ray_name is None or ray_name not in gen.rays:
        raise ConfigError(f"ray {ray_name!r} not found; available: {', '.join(sorted(gen.rays)) or 'none'}")
    return o, ray_name


def _epsilon(args) -> float | None:
    return None if args.auto_epsilon or args.epsilon is None else args.epsilon


def cmd_generate(args) -> int:
    spec = GeneratorSpec(
        kind=args.kind, n=args.n, b=args.b, depth=args.depth, p=args.p, q=args.q, layers=args.layers,
        rows=args.rows, cols=args.cols, subdivide=args.subdivide, jitter=args.jitter, seed=args.seed, base=args.base,
    )
    try:
        gen = generate(spec)
    except (ValueError, GraphError) as exc:
        raise ConfigError(str(exc)) from exc
    if args.format == "csv":
        lab = gen.space.label
        text = rows_to_csv(["u", "v", "length"], [[lab(i), lab(j), w] for i, j, w in gen.space.edges])
    else:
        text = dumps(space_to_dict(gen))
    _emit(text, args.output)
    return EXIT_OK


def cmd_analyze(args) -> int:
    gen = load_space(args.input)
    space = gen.space
    est = delta_four_point(space, args.delta_method, args.samples, args.seed)
    rays = {}
    for name, ray in sorted(gen.rays.items()):
        try:
            rays[name] = validate_ray(space, ray, gen.basepoint).to_dict()
        except RayError as exc:
            rays[name] = {"valid": False, "reason": str(exc)}
    out = {
        "vertices": space.n,
        "edges": len(space.edges),
        "diameter": space.diameter,
        "is_tree": space.is_tree(),
        **est.to_dict(space),
        "kappa": rips_kappa(est.delta, args.h),
        "h": args.h,
        "rays": rays,
    }
    if args.format == "csv":
        rows = [[k, out[k]] for k in ("vertices", "edges", "diameter", "is_tree", "kappa", "h")]
        rows += [["delta", est.delta], ["delta_method", est.method]]
        rows += [[f"ray:{k}:valid", v["valid"]] for k, v in rays.items()]
        text = rows_to_csv(["key", "value"], rows)
    else:
        text = dumps(out)
    _emit(text, args.output)
    return EXIT_OK


def cmd_boundary(args) -> int:
    gen = load_space(args.input)
    space = gen.space
    o, name = _resolve(gen, args)
    field = busemann_field(space, gen.rays[name], o)
    products = {}
    others = sorted(gen.rays)
    for i, a in enumerate(others):
        for b in others[i + 1 :]:
            try:
                products[f"{a}|{b}"] = list(boundary_gromov_product(space, gen.rays[a], gen.rays[b], o))
            except ValueError:
                products[f"{a}|{b}"] = None
    out = {
        "omega": name,
        "basepoint": space.label(o),
        "anchor_error": field.anchor_error,
        "settled_vertices": int(len(field.settled)),
        "busemann": field.to_dict(),
        "ray_products": products,
    }
    if args.format == "csv":
        text = rows_to_csv(["vertex", "b"], [[space.label(i), float(v)] for i, v in enumerate(field.values)])
    else:
        text = dumps(out)
    _emit(text, args.output)
    return EXIT_OK


def cmd_uniformize(args) -> int:
    gen = load_space(args.input)
    space = gen.space
    o, name = _resolve(gen, args)
    if args.delta is not None:
        delta = args.delta
    else:
        delta = delta_four_point(space, "auto", args.samples, args.seed).delta
    ledger = constants_ledger(delta, rips_kappa(delta, args.h), args.h, _epsilon(args))
    field = busemann_field(space, gen.rays[name], o)
    deformation = ConformalDeformation(field, ledger.epsilon)
    lab = space.label
    edges = [[lab(i), lab(j), w, dw] for (i, j, w), dw in zip(space.edges, deformation.edge_weights)]
    if args.format == "csv":
        text = rows_to_csv(["u", "v", "length", "deformed_length"], edges)
    else:
        text = dumps({"omega": name, "basepoint": lab(o), "ledger": ledger.to_dict(), "edges": edges})
    _emit(text, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    gen = load_space(args.input)
    o, name = _resolve(gen, args)
    checks = tuple(args.checks.split(",")) if args.checks else None
    config = SuiteConfig(
        omega=name, h=args.h, epsilon=_epsilon(args), seed=args.seed, pair_budget=args.pair_budget,
        arc_budget=args.arc_budget, delta=args.delta, delta_samples=args.samples, checks=checks,
    )
    report = run_suite(gen.space, gen.rays, o, config)
    text = save_report(report.to_dict(), args.output, args.format)
    if args.output is None:
        sys.stdout.write(text)
    for c in report.checks:
        verdict = "inconclusive" if c.holds is None else ("pass" if c.holds else "FAIL")
        print(f"{c.name:24s} {verdict}", file=sys.stderr)
    return EXIT_FAIL if report.failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-o", "--output", help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    src = argparse.ArgumentParser(add_help=False)
    src.add_argument("-i", "--input", required=True, help="graph JSON document")

    field = argparse.ArgumentParser(add_help=False)
    field.add_argument("--ray", help="name of the ray defining omega (default: first by name)")
    field.add_argument("--basepoint", help="basepoint label (default: the document's)")

    deform = argparse.ArgumentParser(add_help=False)
    group = deform.add_mutually_exclusive_group()
    group.add_argument("--epsilon", type=float)
    group.add_argument("--auto-epsilon", action="store_true", help="largest admissible epsilon (default)")
    deform.add_argument("--h", type=float, default=DEFAULT_H)
    deform.add_argument("--delta", type=float, help="use this delta instead of estimating it")
    deform.add_argument("--samples", type=int, default=200_000, help="quadruples for sampled delta")

    parser = argparse.ArgumentParser(prog="hyperuni", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="build a test space")
    g.add_argument("--kind", required=True, choices=sorted(set(KINDS) | set(ALIASES)))
    g.add_argument("--base", default="path", help="base kind for --kind jittered")
    g.add_argument("--n", type=int, default=10)
    g.add_argument("--b", type=int, default=2)
    g.add_argument("--depth", type=int, default=8)
    g.add_argument("--p", type=int, default=7)
    g.add_argument("--q", type=int, default=3)
    g.add_argument("--layers", type=int, default=3)
    g.add_argument("--rows", type=int, default=5)
    g.add_argument("--cols", type=int, default=5)
    g.add_argument("--subdivide", type=int, default=1)
    g.add_argument("--jitter", type=float, default=0.0)
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", parents=[common, src], help="hyperbolicity and ray diagnostics")
    a.add_argument("--delta-method", choices=("auto", "exact", "sampled"), default="auto")
    a.add_argument("--samples", type=int, default=200_000)
    a.add_argument("--h", type=float, default=DEFAULT_H)
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("boundary", parents=[common, src, field], help="Busemann field and ray products")
    b.set_defaults(func=cmd_boundary)

    u = sub.add_parser("uniformize", parents=[common, src, field, deform], help="deformed edge lengths and constants")
    u.set_defaults(func=cmd_uniformize)

    v = sub.add_parser("verify", parents=[common, src, field, deform], help="run the inequality suite")
    v.add_argument("--pair-budget", type=int, default=2000)
    v.add_argument("--arc-budget", type=int, default=200)
    v.add_argument("--checks", help=f"comma-separated subset of: {', '.join(CHECK_ORDER)}")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _threads()
        return args.func(args)
    except (ConfigError, SchemaError, RayError, ConstantsError, GraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
