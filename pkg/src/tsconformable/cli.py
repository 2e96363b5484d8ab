"""Command-line front end.

One parser, command selected by --cmd: eval | exp | integrate | solve |
special | verify | sweep.  Tables go to stdout as CSV (17 significant
digits, '.' decimal separator, newline-terminated rows) or JSON; errors go
to stderr as one machine-readable JSON object.  Exit codes: 0 success,
1 domain error, 2 spec/parse error.  With --plot PATH the run also renders
a matplotlib figure of the emitted table next to the delimited output.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass

from .conformable import (
    ConformableContext,
    conformable_derivative,
    conformable_exponential,
    conformable_integral,
    kernel_from_spec,
)
from .delta_calculus import NumericConfig, TimeScaleFunction
from .errors import BadParam, ConformableError, SpecError
from .linear2 import (
    IVPProblem,
    cos_sin,
    cosh_sinh,
    solve_ivp_constant,
)
from .timescale import sample_grid, scale_from_spec
from .verify import probe_battery, reports_to_dicts, verify_all

COMMANDS = ("eval", "exp", "integrate", "solve", "special", "verify", "sweep")


def _registry() -> dict[str, TimeScaleFunction]:
    fns = {f.label: f for f in probe_battery()}
    return fns


def resolve_probe(name: str) -> TimeScaleFunction:
    """Named probes; const:C parses its constant. Extension point."""
    if name.startswith("const:"):
        try:
            c = float(name.split(":", 1)[1])
        except ValueError as exc:
            raise SpecError(f"bad constant probe {name!r}") from exc
        return TimeScaleFunction(lambda t: c, name)
    reg = _registry()
    if name not in reg:
        raise SpecError(f"unknown probe {name!r}; known: {sorted(reg)} or const:C")
    return reg[name]


@dataclass(frozen=True)
class RunSpec:
    """Everything one run needs; serialisable and re-parseable as JSON."""

    command: str
    scale: dict | None = None
    kernel: dict | None = None
    alpha: float | None = None
    out: str = "csv"
    grid: int = 33
    tol: float | None = None
    dense_step: float | None = None
    regress_eps: float | None = None
    fn: str = "t2"
    p: float = 1.0
    t0: float | None = None
    lower: float | None = None
    problem: dict | None = None
    which: str = "hyperbolic"
    gamma: float = 1.0
    c1: float = 1.0
    c2: float = 0.0
    alphas: tuple[float, ...] = ()
    target: str = "eval"
    plot: str | None = None

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["alphas"] = list(self.alphas)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunSpec":
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(d) - known
        if extra:
            raise SpecError(f"unknown RunSpec fields {sorted(extra)}")
        if "command" not in d:
            raise SpecError("RunSpec needs a command")
        d = dict(d)
        if "alphas" in d and d["alphas"] is not None:
            d["alphas"] = tuple(float(a) for a in d["alphas"])
        return cls(**d)


def _load_json_arg(path_arg, inline_arg, what: str):
    if inline_arg is not None:
        try:
            return json.loads(inline_arg)
        except json.JSONDecodeError as exc:
            raise SpecError(f"bad inline {what} JSON: {exc}") from exc
    if path_arg is not None:
        try:
            with open(path_arg, "r", encoding="utf-8") as fh:
                return json.load(fh)
        except OSError as exc:
            raise SpecError(f"cannot read {what} file {path_arg!r}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SpecError(f"bad {what} JSON in {path_arg!r}: {exc}") from exc
    return None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tsconformable",
        description="conformable calculus on bounded time scales",
    )
    ap.add_argument("--cmd", required=True, choices=COMMANDS)
    ap.add_argument("--scale", help="scale spec JSON file")
    ap.add_argument("--scale-json", help="inline scale spec JSON")
    ap.add_argument("--kernel", help="kernel spec JSON file")
    ap.add_argument("--kernel-json", help="inline kernel spec JSON")
    ap.add_argument("--alpha", type=float, help="override the kernel order")
    ap.add_argument("--out", choices=("csv", "json"), default=None)
    ap.add_argument("--grid", type=int, default=33)
    ap.add_argument("--tol", type=float, help="quadrature tolerance override")
    ap.add_argument("--dense-step", type=float, help="relative step of dense stencils")
    ap.add_argument("--regress-eps", type=float, help="regressivity zero threshold")
    ap.add_argument("--fn", default="t2", help="probe name (t2, t3m2t, recip_t_plus_3, const:C)")
    ap.add_argument("--p", type=float, default=1.0, help="constant p of E_p")
    ap.add_argument("--t0", type=float, help="anchor point (default: scale min)")
    ap.add_argument("--lower", type=float, help="integration lower bound (default: scale min)")
    ap.add_argument("--problem", help="IVP problem spec JSON file")
    ap.add_argument("--problem-json", help="inline IVP problem spec JSON")
    ap.add_argument("--which", choices=("hyperbolic", "trigonometric"), default="hyperbolic")
    ap.add_argument("--gamma", type=float, default=1.0)
    ap.add_argument("--c1", type=float, default=1.0)
    ap.add_argument("--c2", type=float, default=0.0)
    ap.add_argument("--alphas", default="", help="comma-separated sweep orders")
    ap.add_argument("--target", choices=("eval", "exp"), default="eval")
    ap.add_argument("--plot", help="also render a PNG figure of the output table")
    return ap


def spec_from_args(argv) -> RunSpec:
    args = build_parser().parse_args(argv)
    alphas = tuple(float(s) for s in args.alphas.split(",") if s.strip() != "")
    out = args.out if args.out is not None else ("json" if args.cmd == "verify" else "csv")
    return RunSpec(
        command=args.cmd,
        scale=_load_json_arg(args.scale, args.scale_json, "scale"),
        kernel=_load_json_arg(args.kernel, args.kernel_json, "kernel"),
        alpha=args.alpha,
        out=out,
        grid=args.grid,
        tol=args.tol,
        dense_step=args.dense_step,
        regress_eps=args.regress_eps,
        fn=args.fn,
        p=args.p,
        t0=args.t0,
        lower=args.lower,
        problem=_load_json_arg(args.problem, args.problem_json, "problem"),
        which=args.which,
        gamma=args.gamma,
        c1=args.c1,
        c2=args.c2,
        alphas=alphas,
        target=args.target,
        plot=args.plot,
    )


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _emit_table(spec: RunSpec, columns, rows, out) -> None:
    if spec.out == "csv":
        out.write(",".join(columns) + "\n")
        for row in rows:
            out.write(",".join(_fmt(v) for v in row) + "\n")
    else:
        out.write(json.dumps({"columns": list(columns), "rows": [list(r) for r in rows]}))
        out.write("\n")
    if spec.plot:
        from . import report

        report.save_table_figure(columns, rows, spec.plot, title=spec.command)


def _numeric_config(spec: RunSpec) -> NumericConfig:
    defaults = NumericConfig()
    return NumericConfig(
        dense_step_rel=spec.dense_step or defaults.dense_step_rel,
        quad_tol=spec.tol or defaults.quad_tol,
        regress_eps=spec.regress_eps or defaults.regress_eps,
    )


def _context(spec: RunSpec) -> ConformableContext:
    if spec.scale is None:
        raise SpecError(f"--cmd {spec.command} needs a scale spec")
    if spec.kernel is None:
        raise SpecError(f"--cmd {spec.command} needs a kernel spec")
    scale = scale_from_spec(spec.scale)
    kernel = kernel_from_spec(spec.kernel, alpha_override=spec.alpha)
    return ConformableContext(scale, kernel, _numeric_config(spec))


def _anchor(spec: RunSpec, ctx: ConformableContext, value) -> float:
    return ctx.scale.min if value is None else ctx.scale.require(value)


def sweep_alpha(spec: RunSpec, alphas) -> tuple[list[str], list[list[float]]]:
    """One value column per order; endpoint orders reproduce the reductions.

    The eval target restricts the grid to T^kappa so every column is defined
    at every row.
    """
    for a in alphas:
        if not 0.0 <= a <= 1.0:
            raise BadParam(f"sweep orders must lie in [0, 1], got {a}")
    if not alphas:
        return [], []
    base = _context(spec)
    grid = sample_grid(base.scale, spec.grid)
    if spec.target == "eval":
        grid = [t for t in grid if _in_kappa(base, t)]
    columns = ["t"] + [f"alpha={a!r}" for a in alphas]
    probe = resolve_probe(spec.fn)
    cols: list[list[float]] = []
    for a in alphas:
        ctx = ConformableContext(base.scale, base.kernel.with_alpha(a), base.cfg)
        if spec.target == "exp":
            t0 = _anchor(spec, ctx, spec.t0)
            cols.append([conformable_exponential(ctx, spec.p, t, t0) for t in grid])
        else:
            cols.append([conformable_derivative(ctx, probe, t) for t in grid])
    rows = [[t] + [col[i] for col in cols] for i, t in enumerate(grid)]
    return columns, rows


def _in_kappa(ctx: ConformableContext, t: float) -> bool:
    from .timescale import kappa_restrict

    return kappa_restrict(ctx.scale, 1).contains(t)


def run(spec: RunSpec, out=None, err=None) -> int:
    """Execute one run spec; returns the process exit code."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        return _dispatch(spec, out)
    except ConformableError as exc:
        err.write(json.dumps({"error": type(exc).__name__, "detail": str(exc)}))
        err.write("\n")
        return 1
    except SpecError as exc:
        err.write(json.dumps({"error": "SpecError", "detail": str(exc)}))
        err.write("\n")
        return 2


def _dispatch(spec: RunSpec, out) -> int:
    if spec.command == "verify":
        return _run_verify(spec, out)
    if spec.command == "sweep":
        columns, rows = sweep_alpha(spec, spec.alphas)
        if columns:
            _emit_table(spec, columns, rows, out)
        return 0

    ctx = _context(spec)
    grid = sample_grid(ctx.scale, spec.grid)

    if spec.command == "eval":
        probe = resolve_probe(spec.fn)
        rows = [
            [t, conformable_derivative(ctx, probe, t)]
            for t in grid
            if ctx.kernel.alpha == 0.0 or _in_kappa(ctx, t)
        ]
        _emit_table(spec, ["t", "derivative"], rows, out)
        return 0
    if spec.command == "exp":
        t0 = _anchor(spec, ctx, spec.t0)
        rows = [[t, conformable_exponential(ctx, spec.p, t, t0)] for t in grid]
        _emit_table(spec, ["t", "value"], rows, out)
        return 0
    if spec.command == "integrate":
        a = _anchor(spec, ctx, spec.lower)
        probe = resolve_probe(spec.fn)
        rows = [[t, conformable_integral(ctx, probe, a, t)] for t in grid if t >= a]
        _emit_table(spec, ["t", "integral"], rows, out)
        return 0
    if spec.command == "solve":
        if spec.problem is None:
            raise SpecError("--cmd solve needs --problem/--problem-json")
        prob = _parse_problem(spec.problem, ctx)
        sol = solve_ivp_constant(prob)
        rows = [[t, sol(t)] for t in grid]
        _emit_table(spec, ["t", "y"], rows, out)
        return 0
    if spec.command == "special":
        t0 = _anchor(spec, ctx, spec.t0)
        if spec.which == "hyperbolic":
            rows = [[t, *cosh_sinh(ctx, spec.gamma, t, t0)] for t in grid]
            _emit_table(spec, ["t", "cosh", "sinh"], rows, out)
        else:
            rows = [[t, *cos_sin(ctx, spec.gamma, t, t0)] for t in grid]
            _emit_table(spec, ["t", "cos", "sin"], rows, out)
        return 0
    raise SpecError(f"unknown command {spec.command!r}")


def _parse_problem(problem: dict, ctx: ConformableContext) -> IVPProblem:
    if not isinstance(problem, dict):
        raise SpecError("problem spec must be a JSON object")
    try:
        return IVPProblem(
            a=float(problem["a"]),
            b=float(problem["b"]),
            t0=float(problem["t0"]),
            y0=float(problem["y0"]),
            y0_alpha=float(problem["y0_alpha"]),
            ctx=ctx,
        )
    except KeyError as exc:
        raise SpecError(f"problem spec is missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise SpecError(f"bad problem spec value: {exc}") from exc


def _run_verify(spec: RunSpec, out) -> int:
    scales = kernels = None
    if spec.scale is not None:
        scales = (scale_from_spec(spec.scale),)
    if spec.kernel is not None:
        base = kernel_from_spec(spec.kernel, alpha_override=spec.alpha)
        kernels = (base,)
    reports = verify_all(scales=scales, kernels=kernels, cfg=_numeric_config(spec))
    if spec.out == "json":
        out.write(json.dumps(reports_to_dicts(reports), indent=1))
        out.write("\n")
    else:
        cols = ["id", "scale", "kernel", "alpha", "max_abs_dev", "max_rel_dev",
                "tolerance_used", "passed", "skipped"]
        out.write(",".join(cols) + "\n")
        for r in reports:
            out.write(
                f"{r.id},{r.scale},{r.kernel},{_fmt(r.alpha)},{_fmt(r.max_abs_dev)},"
                f"{_fmt(r.max_rel_dev)},{_fmt(r.tolerance_used)},{int(r.passed)},{int(r.skipped)}\n"
            )
    if spec.plot:
        from . import report

        report.save_verify_figure(reports, spec.plot)
    failures = [r for r in reports if not r.skipped and not r.passed]
    return 1 if failures else 0


def main(argv=None) -> int:
    try:
        spec = spec_from_args(argv if argv is not None else sys.argv[1:])
    except SpecError as exc:
        sys.stderr.write(json.dumps({"error": "SpecError", "detail": str(exc)}) + "\n")
        return 2
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
