import json
from pathlib import Path

import pytest

from dronecine.cli import main
from dronecine.scene import scene_to_dict

from conftest import make_scene


@pytest.fixture()
def scene_file(tmp_path) -> Path:
    path = tmp_path / "scene.json"
    path.write_text(json.dumps(scene_to_dict(make_scene())))
    return path


def write_json(tmp_path, name, data) -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


class TestPlanShot:
    def test_apex_report(self, scene_file, tmp_path, capsys):
        shot = write_json(tmp_path, "shot.json", {"shot_type": "apex"})
        out = tmp_path / "out"
        code = main(
            ["plan-shot", "--scene", str(scene_file), "--shot", str(shot), "--out-dir", str(out)]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["target_screen_points"][0]["target"] == "AB"
        assert report["target_screen_points"][0]["x"] == pytest.approx(0.5)
        assert report["target_screen_points"][0]["y"] == pytest.approx(2 / 3)
        assert (out / "shot.json").exists()
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["command"] == "plan-shot"
        assert manifest["tool_version"]

    def test_malformed_scene_exit_2(self, tmp_path, capsys):
        bad = write_json(tmp_path, "scene.json", {"subjects": []})
        shot = write_json(tmp_path, "shot.json", {"shot_type": "apex"})
        code = main(["plan-shot", "--scene", str(bad), "--shot", str(shot)])
        assert code == 2

    def test_push_out_carries_crop_warning(self, tmp_path, capsys):
        scene = make_scene(radius_a=5.0, radius_b=5.0, fov_max=50.0)
        scene_path = write_json(tmp_path, "scene.json", scene_to_dict(scene))
        shot = write_json(
            tmp_path, "shot.json", {"shot_type": "internal", "primary_subject": "A"}
        )
        code = main(["plan-shot", "--scene", str(scene_path), "--shot", str(shot)])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["crop_warning"] is True
        assert report["pose"]["fov_deg"] < 50.0


class TestConfigFile:
    def test_planner_overrides_apply(self, scene_file, tmp_path, capsys):
        # A crop-warning threshold of 0.95 flags even the mild push-out crop.
        config = write_json(
            tmp_path, "config.json", {"planner": {"crop_warning_ratio": 0.95}}
        )
        shot = write_json(
            tmp_path, "shot.json", {"shot_type": "external", "primary_subject": "A"}
        )
        code = main(
            ["plan-shot", "--scene", str(scene_file), "--shot", str(shot), "--config", str(config)]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["pose"]["fov_deg"] < 70.0  # the default scene forces a crop
        assert report["crop_warning"] is True

    def test_unknown_planner_key_exit_2(self, scene_file, tmp_path):
        config = write_json(tmp_path, "config.json", {"planner": {"warp": 1}})
        shot = write_json(tmp_path, "shot.json", {"shot_type": "apex"})
        code = main(
            ["plan-shot", "--scene", str(scene_file), "--shot", str(shot), "--config", str(config)]
        )
        assert code == 2


class TestPlanTransition:
    def test_outputs_and_manifest(self, scene_file, tmp_path, capsys):
        from_spec = write_json(tmp_path, "from.json", {"shot_type": "external", "primary_subject": "A"})
        to_spec = write_json(tmp_path, "to.json", {"shot_type": "apex"})
        out = tmp_path / "out"
        code = main(
            [
                "plan-transition",
                "--scene", str(scene_file),
                "--from", str(from_spec),
                "--to", str(to_spec),
                "--out-dir", str(out),
            ]
        )
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["feasible"] is True
        assert summary["solve_time_ms"] >= 0
        debug = json.loads((out / "blend_debug.json").read_text())
        assert len(debug["w"]) == 51  # n + 1 rows of the weight profile
        feas = json.loads((out / "feasibility.json").read_text())
        assert feas["feasible"] is True
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["config_hash"]
        csv_lines = (out / "trajectory.csv").read_text().strip().splitlines()
        assert csv_lines[0] == "t,fx,fy,fz,ax,ay,az,fov_deg"

    def test_unsafe_endpoint_exit_3(self, scene_file, tmp_path):
        # An explicit pose inside subject A's safety sphere.
        pose = write_json(
            tmp_path,
            "pose.json",
            {"look_from": [0.3, 0.2, 1.8], "look_at": [4.0, 0.0, 1.65], "fov_deg": 60.0},
        )
        to_spec = write_json(tmp_path, "to.json", {"shot_type": "apex"})
        code = main(
            [
                "plan-transition",
                "--scene", str(scene_file),
                "--from-pose", str(pose),
                "--to", str(to_spec),
            ]
        )
        assert code == 3

    def test_missing_endpoints_exit_2(self, scene_file):
        assert main(["plan-transition", "--scene", str(scene_file)]) == 2


class TestTrackingErrorCli:
    def test_outputs(self, scene_file, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(
            [
                "tracking-error",
                "--scene", str(scene_file),
                "--tracker", "rtk",
                "--seed", "3",
                "--duration", "40",
                "--out-dir", str(out),
            ]
        )
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["shots"] == 10
        assert summary["tracker"] == "rtk"
        lines = (out / "experiment.csv").read_text().strip().splitlines()
        assert lines[0] == "shot_index,t,world_err_m,screen_err"
        assert len(lines) == 11

    def test_reproducible_byte_identical(self, scene_file, tmp_path):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            code = main(
                [
                    "tracking-error",
                    "--scene", str(scene_file),
                    "--tracker", "conventional",
                    "--seed", "42",
                    "--duration", "60",
                    "--out-dir", str(out),
                ]
            )
            assert code == 0
            outs.append((out / "experiment.csv").read_bytes())
        assert outs[0] == outs[1]


class TestValidate:
    def test_feasible_roundtrip(self, scene_file, tmp_path, capsys):
        from_spec = write_json(tmp_path, "from.json", {"shot_type": "apex"})
        to_spec = write_json(tmp_path, "to.json", {"shot_type": "close_apex"})
        out = tmp_path / "out"
        main(
            [
                "plan-transition",
                "--scene", str(scene_file),
                "--from", str(from_spec),
                "--to", str(to_spec),
                "--out-dir", str(out),
            ]
        )
        capsys.readouterr()
        code = main(["validate", "--trajectory", str(out / "trajectory.csv")])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["feasible"] is True

    def test_infeasible_exit_3(self, tmp_path, capsys):
        rows = ["t,fx,fy,fz,ax,ay,az,fov_deg"]
        for i in range(20):
            t = i * 0.1
            rows.append(f"{t},{40*t},0,2,5,5,1.7,0,60")
        bad = tmp_path / "fast.csv"
        bad.write_text("\n".join(rows) + "\n")
        code = main(["validate", "--trajectory", str(bad)])
        assert code == 3

    def test_bad_csv_exit_2(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        assert main(["validate", "--trajectory", str(bad)]) == 2
