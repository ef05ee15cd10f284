"""Command-line entry point: solve / verify / simulate / sweep.

Configuration comes from one JSON document plus dotted-name flags
(--model.gamma 0.9 beats the file); AOI_ISAC_OUTPUT_DIR overrides the output
directory between the two. All artifacts embed the resolved config and are
byte-identical across reruns with the same config and seed.

Exit codes: 0 success, 2 invalid config or input, 3 non-convergence,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import gridio, sim, solver, structure
from .config import RunConfig, build_config, load_config_file
from .model import ModelParams

EXIT_OK = 0
EXIT_BAD_CONFIG = 2
EXIT_NOT_CONVERGED = 3
EXIT_CHECK_FAILED = 4

SWEEP_AXES = ("lambda_s", "lambda_c", "c_s", "c_c", "gamma")

_FLAG_TYPES = {
    "model.lambda_s": float, "model.lambda_c": float,
    "model.c_s": float, "model.c_c": float,
    "model.gamma": float, "model.a_max": int,
    "solver.tol": float, "solver.max_iter": int,
    "sim.n": int, "sim.horizon": int, "sim.seed": int,
}


def _parse_pair(text: str) -> list[int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}")
    return [int(p) for p in parts]


def _add_config_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", metavar="FILE", help="JSON config document")
    for dotted, typ in _FLAG_TYPES.items():
        p.add_argument(f"--{dotted}", dest=dotted, type=typ, default=None,
                       metavar="X", help=f"override {dotted}")
    p.add_argument("--sim.s0", dest="sim.s0", type=_parse_pair, default=None,
                   metavar="A,B", help="override sim.s0")
    p.add_argument("--output.directory", dest="output.directory", default=None,
                   metavar="DIR", help="override output.directory")
    p.add_argument("--output.formats", dest="output.formats", default=None,
                   metavar="F,F", help="override output.formats (subset of csv,json,ascii)")


def _resolve_config(args) -> RunConfig:
    file_values = load_config_file(args.config) if args.config else None
    overrides = {}
    if "AOI_ISAC_OUTPUT_DIR" in os.environ:
        overrides["output.directory"] = os.environ["AOI_ISAC_OUTPUT_DIR"]
    for dotted in list(_FLAG_TYPES) + ["sim.s0", "output.directory", "output.formats"]:
        val = getattr(args, dotted)
        if val is None:
            continue
        if dotted == "output.formats":
            val = [f.strip() for f in val.split(",")]
        overrides[dotted] = val
    return build_config(file_values, overrides)


def _config_comment(cfg: RunConfig, status: str) -> list[str]:
    return [
        "config = " + json.dumps(cfg.to_dict(), sort_keys=True),
        f"status = {status}",
        "layout: rows alpha_s ascending, cols alpha_b ascending",
    ]


def _outdir(cfg: RunConfig) -> Path:
    d = Path(cfg.output.directory)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _solve(cfg: RunConfig):
    V, policy, report = solver.value_iteration(cfg.model, tol=cfg.solver.tol,
                                               max_iter=cfg.solver.max_iter)
    tau, sc_ok = solver.extract_thresholds(policy)
    return V, policy, tau, sc_ok, report


def _write_solve_artifacts(cfg: RunConfig, V, policy, tau, sc_ok, report) -> None:
    out = _outdir(cfg)
    status = "converged" if report.converged else "partial"
    comments = _config_comment(cfg, status)
    formats = cfg.output.formats
    if "csv" in formats:
        gridio.write_grid_csv(out / "value.csv", V, comments)
        gridio.write_grid_csv(out / "policy.csv", policy, comments, integer=True)
        tau_lines = [f"# {c}" for c in comments] + ["alpha_b,tau"]
        tau_lines += [f"{j},{int(t)}" for j, t in enumerate(tau)]
        (out / "thresholds.csv").write_text("\n".join(tau_lines) + "\n")
    if "json" in formats:
        gridio.write_json(out / "solve_report.json", {
            "config": cfg.to_dict(),
            "status": status,
            "converged": report.converged,
            "iterations": report.iterations,
            "final_sweep_delta": report.final_sweep_delta,
            "suboptimality_bound": report.suboptimality_bound,
            "single_crossing_ok": sc_ok,
            "lambda_ordering_ok": cfg.model.lambda_ordering_ok,
            "tau": [int(t) for t in tau],
        })
    if "ascii" in formats:
        (out / "decision_map.txt").write_text(
            gridio.decision_map_text(policy, comments))
        (out / "value_surface.pgm").write_text(gridio.value_pgm_text(V))


def cmd_solve(cfg: RunConfig) -> int:
    V, policy, tau, sc_ok, report = _solve(cfg)
    _write_solve_artifacts(cfg, V, policy, tau, sc_ok, report)
    print(f"solve: iterations={report.iterations} "
          f"final_sweep_delta={report.final_sweep_delta:.3e} "
          f"suboptimality_bound={report.suboptimality_bound:.3e} "
          f"wall_time={report.wall_time:.3f}s")
    if not report.converged:
        print("solve: NOT converged (artifacts written with status=partial)",
              file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    out = _outdir(cfg)
    value_path, policy_path = out / "value.csv", out / "policy.csv"
    have_v, have_p = value_path.exists(), policy_path.exists()
    if have_v != have_p:
        missing = policy_path if have_v else value_path
        print(f"error: incomplete solve artifacts in {out} (missing {missing.name}); "
              f"run solve or remove the leftover file", file=sys.stderr)
        return EXIT_BAD_CONFIG
    if have_v:
        V, _ = gridio.read_grid_csv(value_path)
        policy, _ = gridio.read_policy_csv(policy_path)
        if V.shape != cfg.model.grid_shape or policy.shape != cfg.model.grid_shape:
            print(f"error: artifact grids {V.shape} do not match "
                  f"model.a_max={cfg.model.a_max}", file=sys.stderr)
            return EXIT_BAD_CONFIG
        source = "artifacts"
    else:
        V, policy, _, _, report = _solve(cfg)
        source = "in-process"
        if not report.converged:
            print("error: in-process solve did not converge; nothing to verify",
                  file=sys.stderr)
            return EXIT_NOT_CONVERGED

    reports = structure.run_all_checks(V, policy, cfg.model, tol=cfg.solver.tol)
    all_passed = all(r.passed for r in reports)
    bundle = {
        "config": cfg.to_dict(),
        "source": source,
        "lambda_ordering_ok": cfg.model.lambda_ordering_ok,
        "all_passed": all_passed,
        "checks": [r.to_dict() for r in reports],
    }
    gridio.write_json(out / "verify_report.json", bundle)
    if not cfg.model.lambda_ordering_ok:
        print("verify: note: lambda_c < lambda_s, threshold-structure guarantees "
              "do not apply", file=sys.stderr)
    for r in reports:
        print(f"verify: {r.check_name}: {'pass' if r.passed else 'FAIL'} "
              f"({len(r.violations)} violations, region: {r.region})")
    return EXIT_OK if all_passed else EXIT_CHECK_FAILED


def _resolve_policy(cfg: RunConfig, source: str, policy_file: str | None):
    """Returns (policy, label, v_star or None). v_star is only available for
    the optimal policy, where the solve happens anyway."""
    if policy_file is not None:
        policy, _ = gridio.read_policy_csv(policy_file)
        if policy.shape != cfg.model.grid_shape:
            raise ValueError(f"policy file grid {policy.shape} does not match "
                             f"model.a_max={cfg.model.a_max}")
        return policy, f"file:{policy_file}", None
    if source == "optimal":
        V, policy, _, _, report = _solve(cfg)
        if not report.converged:
            raise RuntimeError("solve for the optimal policy did not converge")
        return policy, "optimal", V
    if source.startswith("random_bernoulli:"):
        p = float(source.split(":", 1)[1])
        return sim.baseline_policy("random_bernoulli", cfg.model, p=p), source, None
    return sim.baseline_policy(source, cfg.model), source, None


def cmd_simulate(cfg: RunConfig, policy_source: str, policy_file: str | None) -> int:
    policy, label, v_star = _resolve_policy(cfg, policy_source, policy_file)
    est = sim.estimate_value(policy, cfg.model, cfg.sim.s0, cfg.sim.n,
                             cfg.sim.horizon, cfg.sim.seed)
    # the dumped trajectory is trajectory 0 of the estimate's seed tree
    child0 = np.random.SeedSequence(cfg.sim.seed).spawn(1)[0]
    traj = sim.rollout(policy, cfg.model, cfg.sim.s0, cfg.sim.horizon, child0)

    out = _outdir(cfg)
    summary = {
        "config": cfg.to_dict(),
        "policy_source": label,
        "mean": est.mean,
        "std_error": est.std_error,
        "n_trajectories": est.n_trajectories,
        "horizon": est.horizon,
        "truncation_bias_bound": est.truncation_bias_bound,
    }
    if v_star is not None:
        v0 = float(v_star[cfg.sim.s0])
        summary["v_star_s0"] = v0
        summary["abs_gap"] = abs(est.mean - v0)
    gridio.write_json(out / "simulate_report.json", summary)
    (out / "trajectory.csv").write_text(
        "\n".join(sim.trajectory_csv_lines(traj, cfg.model)) + "\n")
    print(f"simulate [{label}]: mean={est.mean:.6f} std_error={est.std_error:.2e} "
          f"bias_bound={est.truncation_bias_bound:.2e}")
    if "abs_gap" in summary:
        print(f"simulate: |mean - V*(s0)| = {summary['abs_gap']:.2e}")
    return EXIT_OK


def _sweep_model(cfg: RunConfig, axis: str, value: float) -> ModelParams:
    kwargs = dict(lambda_s=cfg.model.lambda_s, lambda_c=cfg.model.lambda_c,
                  c_s=cfg.model.c_s, c_c=cfg.model.c_c, gamma=cfg.model.gamma,
                  a_max=cfg.model.a_max)
    kwargs[axis] = value
    return ModelParams(**kwargs)


def cmd_sweep(cfg: RunConfig, axis: str, values: list[float]) -> int:
    if axis not in SWEEP_AXES:
        print(f"error: sweep axis must be one of {SWEEP_AXES}, got {axis!r}",
              file=sys.stderr)
        return EXIT_BAD_CONFIG

    check_names = ["monotone", "submodular", "delta_monotone", "q_submodular",
                   "single_crossing", "threshold_monotone"]
    rows = []
    any_failed = any_nonconverged = False
    for value in values:
        row = {"value": value}
        try:
            params = _sweep_model(cfg, axis, value)
        except ValueError as exc:
            print(f"sweep: {axis}={value} rejected: {exc}", file=sys.stderr)
            row["status"] = "rejected"
            rows.append(row)
            continue
        V, policy, report = solver.value_iteration(params, tol=cfg.solver.tol,
                                                   max_iter=cfg.solver.max_iter)
        if not report.converged:
            any_nonconverged = True
            row["status"] = "not_converged"
            rows.append(row)
            continue
        reports = structure.run_all_checks(V, policy, params, tol=cfg.solver.tol)
        tau, _ = solver.extract_thresholds(policy)
        passed = all(r.passed for r in reports)
        any_failed |= not passed
        row["status"] = "ok" if passed else "check_failed"
        row["checks"] = {r.check_name: r.passed for r in reports}
        row["lambda_ordering_ok"] = params.lambda_ordering_ok
        row["tau"] = [int(t) for t in tau]
        rows.append(row)
        print(f"sweep: {axis}={value}: {row['status']}")

    out = _outdir(cfg)
    lines = [f"# {c}" for c in _config_comment(cfg, f"sweep axis={axis}")]
    lines.append(",".join([axis, "status"] + check_names + ["tau"]))
    for row in rows:
        cells = [gridio.fmt_real(row["value"]), row["status"]]
        if "checks" in row:
            cells += ["1" if row["checks"][c] else "0" for c in check_names]
            cells.append(";".join(str(t) for t in row["tau"]))
        else:
            cells += [""] * (len(check_names) + 1)
        lines.append(",".join(cells))
    (out / "sweep.csv").write_text("\n".join(lines) + "\n")
    gridio.write_json(out / "sweep_report.json", {
        "config": cfg.to_dict(), "axis": axis, "rows": rows,
    })

    if any_nonconverged:
        return EXIT_NOT_CONVERGED
    if any_failed:
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aoi-isac",
        description="Solve, verify, and simulate the two-age sensing/communication "
                    "scheduling problem.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="value iteration; writes grids and report")
    p_verify = sub.add_parser("verify", help="structural checks on solve artifacts")
    p_sim = sub.add_parser("simulate", help="Monte Carlo estimate of a policy")
    p_sim.add_argument("--policy", default="optimal",
                       help="optimal | always_sense | always_comm | alternate "
                            "| random_bernoulli:<p>")
    p_sim.add_argument("--policy-file", default=None, metavar="CSV",
                       help="policy grid CSV (overrides --policy)")
    p_sweep = sub.add_parser("sweep", help="re-solve along one parameter axis")
    p_sweep.add_argument("--axis", required=True, help="|".join(SWEEP_AXES))
    p_sweep.add_argument("--values", required=True, metavar="V,V,...",
                         help="comma-separated parameter values")
    for p in (p_solve, p_verify, p_sim, p_sweep):
        _add_config_flags(p)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args)
    except ValueError as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG

    try:
        if args.command == "solve":
            return cmd_solve(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "simulate":
            return cmd_simulate(cfg, args.policy, args.policy_file)
        if args.command == "sweep":
            values = [float(v) for v in args.values.split(",")]
            return cmd_sweep(cfg, args.axis, values)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
