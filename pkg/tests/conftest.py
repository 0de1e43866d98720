import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dronecine.scene import CameraPose, Scene, SubjectState, unit
from dronecine.shotgen import ShotSpec, ShotType
from dronecine.transition import BlendProblem, build_basis_paths


def make_scene(
    pa=(0.0, 0.0, 1.7),
    pb=(4.0, 0.0, 1.65),
    gaze_a=(1.0, 0.3, 0.0),
    gaze_b=(-1.0, 0.3, 0.0),
    height_a=1.75,
    height_b=1.7,
    radius_a=2.0,
    radius_b=2.0,
    fov_max=70.0,
) -> Scene:
    return Scene(
        subject_a=SubjectState(np.array(pa), unit(gaze_a), height_a, radius_a),
        subject_b=SubjectState(np.array(pb), unit(gaze_b), height_b, radius_b),
        fov_max=fov_max,
    )


@pytest.fixture
def scene() -> Scene:
    return make_scene()


def swing_blend_problem(
    n: int = 50,
    angle0: float = 150.0,
    angle1: float = 250.0,
    d0: float = 4.0,
    d1: float = 2.6,
    d_min: float = 1.0,
    gap: float = 3.0,
    v_bounds: tuple[float, float] | None = None,
    smoothness_weight: float = 1e-4,
) -> BlendProblem:
    """Blend instance whose around-B basis sweeps across subject A.

    With the default parameters the plain half-average path dips inside
    subject A's safety sphere, reproducing the failure the blend
    optimization exists to fix.
    """
    z = 1.7
    a = SubjectState(np.array([0.0, 0.0, z]), unit([0, -1, 0]), 1.75, d_min)
    b = SubjectState(np.array([gap, 0.0, z]), unit([0, -1, 0]), 1.7, d_min)
    scene = Scene(a, b, fov_max=70.0)
    mid = 0.5 * (a.position + b.position)
    p0 = b.position + d0 * np.array(
        [math.cos(math.radians(angle0)), math.sin(math.radians(angle0)), 0.0]
    )
    p1 = b.position + d1 * np.array(
        [math.cos(math.radians(angle1)), math.sin(math.radians(angle1)), 0.0]
    )
    c0 = CameraPose(p0, mid, 60.0)
    c1 = CameraPose(p1, mid, 60.0)
    basis_a, basis_b = build_basis_paths(c0, c1, scene)
    kwargs = {}
    if v_bounds is not None:
        kwargs = {"v_min": v_bounds[0], "v_max": v_bounds[1]}
    return BlendProblem(
        basis_a=basis_a,
        basis_b=basis_b,
        d_min_a=d_min,
        d_min_b=d_min,
        n=n,
        smoothness_weight=smoothness_weight,
        **kwargs,
    )


def oracle_blend_instance(seed: int, n: int = 10, v_bound: float = 150.0) -> BlendProblem | None:
    """Random small instance whose half-profile is mildly infeasible.

    The discrete fifth-order integrator cannot move the weight during the
    first five samples of a rest start, so instances are kept only when the
    half-path's closest approach happens later along the path; otherwise
    rest-start control sampling has no feasible members.
    """
    rng = np.random.default_rng(10_000 + seed)
    angle0 = rng.uniform(115, 130)
    angle1 = angle0 + rng.uniform(85, 105)
    d0 = rng.uniform(3.4, 4.4)
    d1 = rng.uniform(2.4, 3.2)
    base = swing_blend_problem(
        n=n, angle0=angle0, angle1=angle1, d0=d0, d1=d1,
        d_min=1e-3, v_bounds=(-v_bound, v_bound),
    )
    u = base.sample_parameters()
    half = 0.5 * (base.basis_a.positions(u) + base.basis_b.positions(u))
    dists = np.linalg.norm(half - base.basis_a.subject_position, axis=1)
    if int(np.argmin(dists)) < 6:
        return None
    endpoint_cap = min(base.basis_a.d0, base.basis_a.d1, base.basis_b.d0, base.basis_b.d1)
    d_min = float(dists.min()) + rng.uniform(0.01, 0.05)
    if d_min > endpoint_cap - 0.05:
        return None
    return BlendProblem(
        basis_a=base.basis_a, basis_b=base.basis_b,
        d_min_a=d_min, d_min_b=d_min, n=n,
        smoothness_weight=base.smoothness_weight,
        v_min=-v_bound, v_max=v_bound,
    )


def shot_pair_fixtures() -> list[tuple[Scene, ShotSpec, ShotSpec]]:
    """Standard two-subject transition fixtures covering varied geometry."""
    fixtures = []
    scenes = [
        make_scene(),
        make_scene(pb=(2.5, 1.0, 1.7), radius_a=1.5, radius_b=1.5),
        make_scene(pa=(-3.0, 2.0, 1.6), pb=(3.0, -2.0, 1.8), radius_a=3.0, radius_b=2.5),
        make_scene(pb=(6.0, 0.5, 1.7), radius_a=1.0, radius_b=4.0, fov_max=60.0),
        make_scene(pa=(1.0, 1.0, 1.75), pb=(1.0, 4.5, 1.62), radius_a=2.5, radius_b=2.5),
    ]
    pairs = [
        (ShotSpec(ShotType.EXTERNAL, "A"), ShotSpec(ShotType.EXTERNAL, "B")),
        (ShotSpec(ShotType.APEX), ShotSpec(ShotType.INTERNAL, "A")),
        (ShotSpec(ShotType.INTERNAL, "B"), ShotSpec(ShotType.APEX_FROM_ABOVE)),
        (ShotSpec(ShotType.CLOSE_APEX), ShotSpec(ShotType.EXTERNAL_FROM_ABOVE, "B")),
    ]
    for i, sc in enumerate(scenes):
        for j, (s_from, s_to) in enumerate(pairs):
            if (i + j) % 2 == 0:
                fixtures.append((sc, s_from, s_to))
    return fixtures
