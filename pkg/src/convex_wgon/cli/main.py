"""
Console entrypoint for `wgon`.

Subcommands: gen, solve, oracle, conformance, bench, render.

Machine output (instance/solution JSON, CSV tables, SVG) goes to the --out
file or stdout; human status lines go to stderr. Every WgonError maps to its
own exit code and a one-line JSON error object on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from convex_wgon.core.geom import PointSet
from convex_wgon.core.weights import OBJECTIVES, Direction, WeightId, make_weight, weight_for_objective
from convex_wgon.errors import GuardrailError, ParameterError, WgonError
from convex_wgon.io import solution_file as sf
from convex_wgon.io.instances import (
    InstanceFile,
    SHAPES,
    gen,
    perturb_instance,
    read_instance,
    to_json_text,
    write_instance,
)
from convex_wgon.io.svg import render_solution
from convex_wgon.observability.run_logger import SolverRunRecord, log_solver_run
from convex_wgon.orchestration.bench import RUNNERS, run_bench, write_bench_csv
from convex_wgon.solvers.conformance import run_conformance, run_minch_conformance
from convex_wgon.solvers.dp_baseline import solve_exact_wgon
from convex_wgon.solvers.dp_doubling import solve_doubling
from convex_wgon.solvers.minch import solve_budget, solve_minch
from convex_wgon.solvers.oracle import EnumerationBudget, oracle_budget, oracle_minch, oracle_wgon
from convex_wgon.solvers.parallel import resolve_jobs
from convex_wgon.utils.settings import Settings, load_settings
from convex_wgon.utils.setup_logging import setup_logging

logger = logging.getLogger(__name__)

POLYGON_OBJECTIVES = tuple(OBJECTIVES)
ALL_OBJECTIVES = POLYGON_OBJECTIVES + ("minch", "budget")


# ======================================================
# Helpers
# ======================================================

def _status(message: str) -> None:
    print(message, file=sys.stderr)


def _emit_text(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    _status(f"✅ Wrote {out}")


def _n_jobs(args: argparse.Namespace) -> int:
    if getattr(args, "threads", None) is not None:
        return max(1, args.threads)
    if getattr(args, "parallel", False):
        return resolve_jobs(None)
    return 1


def _check_guardrail(n: int, limit: int, what: str, force: bool) -> None:
    if n > limit and not force:
        raise GuardrailError(f"n={n} exceeds the {what} guardrail of {limit}; pass --force to override")


def _budget_weight(name: str):
    wid = WeightId.AREA2 if name == "area" else WeightId.PERIMETER
    return make_weight(wid, Direction.MIN)


def _check_objective_params(args: argparse.Namespace) -> None:
    algorithm = getattr(args, "algorithm", "oracle")
    if args.objective == "budget":
        if args.budget is None:
            raise ParameterError("--budget is required for the budget objective")
        if algorithm == "doubling":
            raise ParameterError("The budget objective runs on the baseline DP or the oracle, not doubling")
    else:
        if args.w is None:
            raise ParameterError(f"--w is required for the {args.objective} objective")
        if args.budget is not None:
            raise ParameterError(f"--budget only applies to the budget objective, not {args.objective}")
    if args.strict_seam and (algorithm != "doubling" or args.objective not in POLYGON_OBJECTIVES):
        raise ParameterError("--strict-seam needs --algorithm doubling and a polygon objective")


def _load_points(args: argparse.Namespace, settings: Settings) -> Tuple[InstanceFile, PointSet]:
    inst = read_instance(args.instance)
    if getattr(args, "perturb", False):
        inst = perturb_instance(
            inst,
            seed=args.perturb_seed,
            scale=settings.perturb_scale,
            max_rounds=settings.perturb_max_rounds,
        )
        _status(f"⚠️ Perturbed instance (scale={settings.perturb_scale}, rounds={inst.perturbation['rounds']})")
    return inst, inst.to_point_set(validate=True)


def _record_run(
    settings: Settings,
    args: argparse.Namespace,
    record: SolverRunRecord,
) -> None:
    if not settings.run_log_enabled or getattr(args, "no_run_log", False):
        return
    try:
        log_solver_run(record)
    except Exception as exc:  # noqa: BLE001
        _status(f"⚠️ Failed to write run log: {exc}")


def _write_svg(path: Path, P: PointSet, doc: Dict[str, Any]) -> None:
    title = f"{doc['objective']} {doc['algorithm']} value={doc['value']}"
    render_solution(P, doc["polygon"], doc.get("outliers") or (), title=title).save(path)
    _status(f"✅ Wrote {path}")


# ======================================================
# Subcommands
# ======================================================

def cmd_gen(args: argparse.Namespace, settings: Settings) -> int:
    inst = gen(
        args.n,
        args.seed,
        coord_range=args.range if args.range is not None else settings.coord_range,
        shape=args.shape or settings.shape,
        max_rejections=settings.max_rejections,
    )
    if args.out is None:
        sys.stdout.write(to_json_text(inst))
    else:
        write_instance(inst, args.out)
        _status(f"✅ Wrote {args.out} (n={inst.n}, rejections={inst.generator['rejections']})")
    return 0


def _solve(
    args: argparse.Namespace,
    settings: Settings,
    P: PointSet,
    algorithm: str,
    n_jobs: int,
) -> Tuple[Any, Dict[str, Any]]:
    """Dispatch one solve; returns the raw result plus the solution-file kwargs."""
    guard = settings.guardrails
    if algorithm == "oracle":
        _check_guardrail(P.n, guard.max_n_oracle, "oracle", args.force)
        budget = EnumerationBudget(
            max_subsets=guard.max_subsets,
            timeout=guard.oracle_timeout_s,
            max_points=guard.max_n_oracle if not args.force else P.n,
        )
    else:
        _check_guardrail(P.n, guard.max_n_dp, "dynamic-program", args.force)

    objective = args.objective
    if objective == "budget":
        wf = _budget_weight(args.budget_weight)
        if algorithm == "oracle":
            result = oracle_budget(P, args.budget, wf, budget)
        else:
            result = solve_budget(P, args.budget, wf, n_jobs=n_jobs)
        return result, {"weight": wf.name, "budget": args.budget}

    if objective == "minch":
        if algorithm == "oracle":
            result = oracle_minch(P, args.w, budget)
        elif algorithm == "doubling":
            if not args.experimental_doubling:
                raise ParameterError("MinCH with the doubling DP needs --experimental-doubling")
            result = solve_minch(P, args.w, algorithm="doubling", n_jobs=n_jobs)
        else:
            result = solve_minch(P, args.w, algorithm="baseline", n_jobs=n_jobs)
        return result, {"weight": "VERTEX_COUNT/MIN", "w": args.w}

    wf = weight_for_objective(objective)
    if algorithm == "oracle":
        result = oracle_wgon(P, args.w, wf, budget, n_jobs=n_jobs)
    elif algorithm == "doubling":
        result = solve_doubling(P, args.w, wf, strict_seam=args.strict_seam, n_jobs=n_jobs)
    else:
        result = solve_exact_wgon(P, args.w, wf, n_jobs=n_jobs)
    return result, {"weight": wf.name, "w": args.w}


def cmd_solve(args: argparse.Namespace, settings: Settings) -> int:
    _check_objective_params(args)
    inst, P = _load_points(args, settings)
    n_jobs = _n_jobs(args)
    algorithm = getattr(args, "algorithm", "oracle")

    started_at = datetime.now(timezone.utc)
    status = "success"
    doc: Optional[Dict[str, Any]] = None
    try:
        result, kwargs = _solve(args, settings, P, algorithm, n_jobs)
        doc = sf.build_solution_file(
            args.objective,
            result,
            P,
            instance_checksum=inst.checksum(),
            perturbation=inst.perturbation,
            **kwargs,
        )
    except WgonError as exc:
        status = exc.code
        raise
    except BaseException:
        status = "unexpected"
        raise
    finally:
        _record_run(
            settings,
            args,
            SolverRunRecord(
                command=args.command,
                objective=args.objective,
                algorithm=doc["algorithm"] if doc else algorithm,
                status=status,
                started_at=started_at,
                finished_at=datetime.now(timezone.utc),
                n=P.n,
                w=args.w,
                value=float(doc["value"]) if doc and doc.get("value") is not None else None,
                valid=doc["valid"] if doc else None,
                n_jobs=n_jobs,
                instance_checksum=inst.checksum(),
            ),
        )

    _emit_text(sf.to_json_text(doc), args.out)
    if args.svg_out is not None:
        _write_svg(args.svg_out, P, doc)
    if doc.get("feasible") is False:
        _status("⚠️ No polygon meets the budget")
    elif not doc["valid"]:
        _status("⚠️ No candidate passed validation; the reported polygon is flagged invalid")
    return 0


def _corpus(n: int, count: int, seed: int, coord_range: int, shape: str) -> List[Tuple[str, PointSet]]:
    out = []
    for k in range(count):
        inst = gen(n, seed + k, coord_range=coord_range, shape=shape)
        out.append((inst.name, inst.to_point_set()))
    return out


def cmd_conformance(args: argparse.Namespace, settings: Settings) -> int:
    _check_guardrail(args.n, settings.guardrails.max_n_dp, "dynamic-program", args.force)
    n_jobs = _n_jobs(args)
    instances = _corpus(args.n, args.count, args.seed, args.range or settings.coord_range, settings.shape)
    w_values = args.w or [3, 4, 8]

    started_at = datetime.now(timezone.utc)
    if args.objective == "minch":
        report = run_minch_conformance(instances, w_values, n_jobs=n_jobs)
    else:
        wf = weight_for_objective(args.objective)
        report = run_conformance(instances, w_values, wf, strict_seam=args.strict_seam, n_jobs=n_jobs)
    if args.both_modes and args.objective != "minch":
        strict = run_conformance(instances, w_values, wf, strict_seam=not args.strict_seam, n_jobs=n_jobs)
        report.rows.extend(strict.rows)

    _emit_text(report.to_frame().to_csv(index=False, lineterminator="\n"), args.out)
    for row in report.summary().itertuples(index=False):
        _status(
            f"✅ w={row.w} mode={row.mode}: {row.rows} rows, "
            f"agreement={row.agreement_rate:.3f}, valid={row.valid_rate:.3f}"
        )

    _record_run(
        settings,
        args,
        SolverRunRecord(
            command="conformance",
            objective=args.objective,
            algorithm="baseline-vs-doubling",
            status="success",
            started_at=started_at,
            finished_at=datetime.now(timezone.utc),
            n=args.n,
            n_jobs=n_jobs,
            extra={"rows": len(report), "agreement_rate": report.agreement_rate(), "w": list(w_values)},
        ),
    )
    return 0


def cmd_bench(args: argparse.Namespace, settings: Settings) -> int:
    for n in args.n:
        _check_guardrail(n, settings.guardrails.max_n_dp, "dynamic-program", args.force)
    started_at = datetime.now(timezone.utc)
    df = run_bench(
        args.n,
        args.w,
        objective=args.objective,
        algorithms=args.algorithms,
        repetitions=args.repetitions or settings.bench_repetitions,
        seed=args.seed if args.seed is not None else settings.bench_seed,
        n_jobs=_n_jobs(args),
    )
    if args.out is None:
        sys.stdout.write(df.to_csv(index=False, lineterminator="\n"))
    else:
        write_bench_csv(df, args.out)
        _status(f"✅ Wrote {args.out}")
    for row in df[df["kind"] == "ratio"].itertuples(index=False):
        _status(f"📈 n={row.n} {row.algorithm}: t(w={row.w})/t(w={row.w_ref}) = {row.ratio:.2f}")

    _record_run(
        settings,
        args,
        SolverRunRecord(
            command="bench",
            objective=args.objective,
            algorithm=",".join(args.algorithms),
            status="success",
            started_at=started_at,
            finished_at=datetime.now(timezone.utc),
            extra={"n": list(args.n), "w": list(args.w)},
        ),
    )
    return 0


def cmd_render(args: argparse.Namespace, settings: Settings) -> int:
    doc = sf.read_solution_file(args.solution)
    inst = read_instance(args.instance)
    prov = doc.get("perturbation")
    if prov:
        inst = perturb_instance(
            inst,
            seed=int(prov["seed"]),
            scale=int(prov["scale"]),
            max_rounds=int(prov.get("rounds", settings.perturb_max_rounds)),
        )
    if doc.get("instance_checksum") and doc["instance_checksum"] != inst.checksum():
        raise ParameterError("Solution file does not belong to this instance (checksum mismatch)")
    P = inst.to_point_set(validate=False)
    _write_svg(args.out, P, doc)
    return 0


# ======================================================
# Parser
# ======================================================

def _add_common_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("instance", type=Path, help="Instance file (.csv or .json).")
    p.add_argument("--objective", choices=ALL_OBJECTIVES, default="min-area")
    p.add_argument("--w", type=int, default=None, help="Polygon size / points to keep.")
    p.add_argument("--budget", type=float, default=None, help="Weight bound for the budget objective.")
    p.add_argument("--budget-weight", choices=("area", "perimeter"), default="area",
                   help="Weight bounded by --budget (area is twice-area).")
    p.add_argument("--perturb", action="store_true", help="Perturb the instance into general position.")
    p.add_argument("--perturb-seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None, help="SolutionFile path (stdout when omitted).")
    p.add_argument("--svg-out", type=Path, default=None, help="Write an SVG figure here.")


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--parallel", action="store_true", help="Use WGON_THREADS workers.")
    p.add_argument("--threads", type=int, default=None, help="Worker count (implies --parallel).")
    p.add_argument("--force", action="store_true", help="Override the desk-scale guardrails.")
    p.add_argument("--no-run-log", action="store_true", help="Skip the DuckDB run log.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wgon", description="Optimal convex w-gons over planar point sets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="Generate a seeded instance in general position.")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--range", type=int, default=None, help="Coordinates lie in [0, range).")
    p_gen.add_argument("--shape", choices=SHAPES, default=None)
    p_gen.add_argument("--out", type=Path, default=None)
    p_gen.set_defaults(func=cmd_gen)

    p_solve = sub.add_parser("solve", help="Solve one instance.")
    _add_common_solver_flags(p_solve)
    p_solve.add_argument("--algorithm", choices=("baseline", "doubling", "oracle"), default="baseline")
    p_solve.add_argument("--strict-seam", action="store_true", help="Doubling: check the seam turn while merging.")
    p_solve.add_argument("--experimental-doubling", action="store_true",
                         help="Allow the doubling DP for MinCH.")
    _add_run_flags(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_oracle = sub.add_parser("oracle", help="Brute-force ground truth for one instance.")
    _add_common_solver_flags(p_oracle)
    _add_run_flags(p_oracle)
    p_oracle.set_defaults(func=cmd_solve, algorithm="oracle", strict_seam=False, experimental_doubling=False)

    p_conf = sub.add_parser("conformance", help="Doubling vs baseline agreement over a seeded corpus.")
    p_conf.add_argument("--objective", choices=POLYGON_OBJECTIVES + ("minch",), default="min-area")
    p_conf.add_argument("--n", type=int, default=10)
    p_conf.add_argument("--count", type=int, default=100)
    p_conf.add_argument("--seed", type=int, default=0)
    p_conf.add_argument("--range", type=int, default=None)
    p_conf.add_argument("--w", type=int, nargs="+", default=None)
    p_conf.add_argument("--strict-seam", action="store_true")
    p_conf.add_argument("--both-modes", action="store_true", help="Also run the other seam mode.")
    p_conf.add_argument("--out", type=Path, default=None)
    _add_run_flags(p_conf)
    p_conf.set_defaults(func=cmd_conformance)

    p_bench = sub.add_parser("bench", help="Median wall-times and w-scaling ratios.")
    p_bench.add_argument("--n", type=int, nargs="+", default=[40])
    p_bench.add_argument("--w", type=int, nargs="*", default=[4, 32])
    p_bench.add_argument("--objective", choices=POLYGON_OBJECTIVES, default="min-area")
    p_bench.add_argument("--algorithms", nargs="+", choices=sorted(RUNNERS), default=["baseline", "doubling"])
    p_bench.add_argument("--repetitions", type=int, default=None)
    p_bench.add_argument("--seed", type=int, default=None)
    p_bench.add_argument("--out", type=Path, default=None)
    _add_run_flags(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    p_render = sub.add_parser("render", help="Render a SolutionFile and its instance to SVG.")
    p_render.add_argument("solution", type=Path)
    p_render.add_argument("instance", type=Path)
    p_render.add_argument("--out", type=Path, required=True)
    p_render.set_defaults(func=cmd_render)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    settings = load_settings()
    setup_logging(settings.log_file, getattr(logging, settings.log_level, logging.INFO))

    t0 = time.perf_counter()
    try:
        code = args.func(args, settings)
    except WgonError as exc:
        print(json.dumps(exc.to_payload(), sort_keys=True), file=sys.stderr)
        _status(f"❌ {args.command} failed: {exc}")
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001
        logger.exception("Unexpected failure in %s", args.command)
        print(json.dumps({"error": "unexpected", "message": str(exc)}, sort_keys=True), file=sys.stderr)
        return 1
    logger.info("wgon %s finished in %.3fs", args.command, time.perf_counter() - t0)
    return code


if __name__ == "__main__":
    sys.exit(main())
