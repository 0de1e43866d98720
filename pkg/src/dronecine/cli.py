"""Headless entry points: plan shots and transitions, run the tracking-noise
experiment, validate trajectory files, and serve the live session API.

Exit codes: 0 success, 2 input error, 3 planner infeasible, 4 internal error.
Errors are reported as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import PlannerConfig
from .dynamics import QuadrotorLimits, check
from .errors import InfeasibleError, PlanningError, SceneFormatError, UnstretchableError
from .scene import CameraPose, load_scene, vec3
from .shotgen import FramedShot, ShotSpec, place_shot
from .simkit import TRACKER_PRESETS, experiment_summary, run_tracking_error_study
from .transition import (
    BlendProblem,
    EasingProfile,
    Trajectory,
    blend_debug,
    build_basis_paths,
    plan_transition,
    solve_blend,
    trajectory_to_csv,
    trajectory_to_dict,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_INTERNAL = 4


def _fail(code: int, error: str, message: str) -> int:
    json.dump({"error": error, "message": message}, sys.stderr)
    sys.stderr.write("\n")
    return code


def _load_json_file(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SceneFormatError(f"{path}: {exc}") from exc


def _planner_config(args) -> PlannerConfig:
    if getattr(args, "config", None):
        data = _load_json_file(args.config)
        try:
            return PlannerConfig.from_dict(data.get("planner", data))
        except ValueError as exc:
            raise SceneFormatError(str(exc)) from exc
    return PlannerConfig()


def _limits(args) -> QuadrotorLimits:
    if getattr(args, "config", None):
        data = _load_json_file(args.config)
        if "limits" in data:
            try:
                return QuadrotorLimits.from_dict(data["limits"])
            except ValueError as exc:
                raise SceneFormatError(str(exc)) from exc
    return QuadrotorLimits()


def _seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    return int(os.environ.get("SIM_SEED", "0"))


def _out_dir(args) -> Path | None:
    if getattr(args, "out_dir", None):
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        return out
    return None


def _write_manifest(out: Path, args, config: PlannerConfig, seed: int | None) -> None:
    inputs = {}
    for name in ("scene", "shot", "from_spec", "to_spec", "config", "trajectory"):
        value = getattr(args, name.replace("-", "_"), None)
        if value:
            inputs[name] = str(value)
    manifest = {
        "command": args.command,
        "inputs": inputs,
        "config_hash": config.digest(),
        "seed": seed,
        "tool_version": __version__,
        "created_utc": datetime.now(timezone.utc).isoformat(),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def _pose_from_json(path: str) -> CameraPose:
    data = _load_json_file(path)
    for key in ("look_from", "look_at", "fov_deg"):
        if key not in data:
            raise SceneFormatError(f"pose file missing {key}")
    return CameraPose(vec3(data["look_from"]), vec3(data["look_at"]), float(data["fov_deg"]))


def _as_framed_shot(pose: CameraPose, fov_max: float) -> FramedShot:
    return FramedShot(
        pose=pose, uncropped_fov=fov_max, crop_warning=False, target_screen_points=()
    )


def cmd_plan_shot(args) -> int:
    scene = load_scene(args.scene)
    config = _planner_config(args)
    spec = ShotSpec.from_dict(_load_json_file(args.shot))
    shot = place_shot(scene, spec, config)
    report = shot.to_dict()
    report["line_of_action_side"] = scene.line_of_action_side.value
    print(json.dumps(report, indent=2))
    out = _out_dir(args)
    if out:
        (out / "shot.json").write_text(json.dumps(report, indent=2) + "\n")
        _write_manifest(out, args, config, None)
    return EXIT_OK


def cmd_plan_transition(args) -> int:
    scene = load_scene(args.scene)
    config = _planner_config(args)
    limits = _limits(args)

    if args.from_pose:
        from_shot = _as_framed_shot(_pose_from_json(args.from_pose), scene.fov_max)
    else:
        from_shot = place_shot(scene, ShotSpec.from_dict(_load_json_file(args.from_spec)), config)
    if args.to_pose:
        to_shot = _as_framed_shot(_pose_from_json(args.to_pose), scene.fov_max)
    else:
        to_shot = place_shot(scene, ShotSpec.from_dict(_load_json_file(args.to_spec)), config)

    start = time.perf_counter()
    trajectory = plan_transition(from_shot, to_shot, scene, config, limits)
    plan_ms = (time.perf_counter() - start) * 1e3

    basis_a, basis_b = build_basis_paths(from_shot.pose, to_shot.pose, scene)
    v_lo, v_hi = config.v_bounds(config.blend_samples)
    problem = BlendProblem(
        basis_a=basis_a,
        basis_b=basis_b,
        d_min_a=scene.subject_a.safety_radius,
        d_min_b=scene.subject_b.safety_radius,
        n=config.blend_samples,
        smoothness_weight=config.smoothness_weight,
        v_min=v_lo,
        v_max=v_hi,
    )
    solution = solve_blend(problem)
    report = check(trajectory, limits)

    summary = {
        "duration_s": trajectory.duration,
        "samples": len(trajectory.times),
        "plan_time_ms": plan_ms,
        "solve_time_ms": solution.solve_time_ms,
        "feasible": report.feasible,
        "crop_warning": to_shot.crop_warning,
    }
    print(json.dumps(summary, indent=2))

    out = _out_dir(args)
    if out:
        (out / "trajectory.csv").write_text(trajectory_to_csv(trajectory))
        (out / "trajectory.json").write_text(
            json.dumps(trajectory_to_dict(trajectory), indent=2) + "\n"
        )
        (out / "blend_debug.json").write_text(
            json.dumps(blend_debug(problem, solution), indent=2) + "\n"
        )
        (out / "feasibility.json").write_text(json.dumps(report.to_dict(), indent=2) + "\n")
        (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
        _write_manifest(out, args, config, None)
    return EXIT_OK


def cmd_tracking_error(args) -> int:
    scene = load_scene(args.scene)
    config = _planner_config(args)
    seed = _seed(args)
    tracker = TRACKER_PRESETS[args.tracker]
    records = run_tracking_error_study(
        scene,
        tracker,
        duration=args.duration,
        shot_period=args.period,
        seed=seed,
        config=config,
    )
    summary = experiment_summary(records)
    summary["tracker"] = args.tracker
    summary["seed"] = seed
    print(json.dumps(summary, indent=2))
    out = _out_dir(args)
    if out:
        lines = ["shot_index,t,world_err_m,screen_err"]
        for r in records:
            lines.append(
                f"{r.shot_index},{format(r.t, '.12g')},"
                f"{format(r.world_error_m, '.12g')},{format(r.screen_error, '.12g')}"
            )
        (out / "experiment.csv").write_text("\n".join(lines) + "\n")
        (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
        _write_manifest(out, args, config, seed)
    return EXIT_OK


def cmd_validate(args) -> int:
    limits = _limits(args)
    with open(args.trajectory, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"t", "fx", "fy", "fz", "ax", "ay", "az", "fov_deg"}
        if reader.fieldnames is None or required - set(reader.fieldnames):
            raise SceneFormatError(
                f"trajectory CSV must have columns {sorted(required)}"
            )
        rows = [[float(row[k]) for k in ("t", "fx", "fy", "fz", "ax", "ay", "az", "fov_deg")] for row in reader]
    if len(rows) < 5:
        raise SceneFormatError("trajectory CSV needs at least 5 samples")
    data = np.array(rows)
    trajectory = Trajectory(
        duration=float(data[-1, 0]),
        times=data[:, 0],
        look_from=data[:, 1:4],
        look_at=data[:, 4:7],
        fov=data[:, 7],
        easing=EasingProfile(float(data[-1, 0])),
    )
    report = check(trajectory, limits)
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig.load(args.config)
    if args.host:
        config = dataclasses.replace(config, bind_host=args.host)
    if args.port:
        config = dataclasses.replace(config, bind_port=args.port)
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    uvicorn.run(create_app(config), host=config.bind_host, port=config.bind_port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dronecine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan-shot", help="plan one static shot")
    p.add_argument("--scene", required=True)
    p.add_argument("--shot", required=True, help="ShotSpec JSON file")
    p.add_argument("--config")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_plan_shot)

    p = sub.add_parser("plan-transition", help="plan a transition between two shots")
    p.add_argument("--scene", required=True)
    p.add_argument("--from", dest="from_spec", help="ShotSpec JSON file")
    p.add_argument("--to", dest="to_spec", help="ShotSpec JSON file")
    p.add_argument("--from-pose", help="explicit CameraPose JSON (overrides --from)")
    p.add_argument("--to-pose", help="explicit CameraPose JSON (overrides --to)")
    p.add_argument("--config")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_plan_transition)

    p = sub.add_parser("tracking-error", help="screen-space tracking-noise experiment")
    p.add_argument("--scene", required=True)
    p.add_argument("--tracker", choices=sorted(TRACKER_PRESETS), required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--duration", type=float, default=480.0)
    p.add_argument("--period", type=float, default=4.0)
    p.add_argument("--config")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_tracking_error)

    p = sub.add_parser("validate", help="feasibility-check a trajectory CSV")
    p.add_argument("--trajectory", required=True)
    p.add_argument("--config")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("serve", help="run the live session service")
    p.add_argument("--config")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "plan-transition":
        if not (args.from_spec or args.from_pose) or not (args.to_spec or args.to_pose):
            return _fail(EXIT_INPUT, "SceneFormatError", "need --from/--from-pose and --to/--to-pose")
    try:
        return args.func(args)
    except (SceneFormatError,) as exc:
        return _fail(EXIT_INPUT, type(exc).__name__, str(exc))
    except (InfeasibleError, UnstretchableError) as exc:
        return _fail(EXIT_INFEASIBLE, type(exc).__name__, str(exc))
    except PlanningError as exc:
        return _fail(EXIT_INPUT, type(exc).__name__, str(exc))
    except Exception as exc:  # pragma: no cover - defensive
        return _fail(EXIT_INTERNAL, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
