"""Deterministic stand-in for the tracking and flight hardware.

A clamped point-mass follower tracks look-from setpoints while a rate-
limited gimbal tracks the look-at direction. Tracker noise is a first-order
Gauss-Markov process calibrated to the configured CEP95 / altitude-sigma
values, so position errors drift the way real GPS does instead of
flickering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .config import DEFAULT_CONFIG, PlannerConfig
from .errors import PlanningError
from .scene import Scene, SubjectState, project
from .shotgen import ShotSpec, ShotType, framing_target, place_shot

# 95% radius of an isotropic 2D Gaussian in units of the per-axis sigma.
CEP95_SIGMA_FACTOR = math.sqrt(-2.0 * math.log(0.05))


@dataclass(frozen=True)
class TrackerModel:
    kind: str  # "rtk" | "conventional"
    horizontal_cep95: float  # meters
    altitude_sigma: float    # meters
    update_rate: float = 5.0  # Hz
    latency: float = 0.0      # seconds

    def __post_init__(self):
        if self.horizontal_cep95 <= 0 or self.altitude_sigma <= 0:
            raise ValueError("tracker noise magnitudes must be positive")

    @property
    def horizontal_sigma(self) -> float:
        return self.horizontal_cep95 / CEP95_SIGMA_FACTOR


RTK_TRACKER = TrackerModel(kind="rtk", horizontal_cep95=0.017, altitude_sigma=0.020)
CONVENTIONAL_TRACKER = TrackerModel(
    kind="conventional", horizontal_cep95=1.68, altitude_sigma=0.108
)

TRACKER_PRESETS = {"rtk": RTK_TRACKER, "conventional": CONVENTIONAL_TRACKER}


class TrackerSim:
    """Stateful tracker-noise source for one tracked object.

    The measurement error follows an exponentially correlated Gauss-Markov
    process per axis, initialized from its stationary distribution, so any
    sampling cadence reproduces the configured CEP95 / sigma statistics.
    """

    def __init__(
        self,
        model: TrackerModel,
        rng: np.random.Generator,
        time_constant: float = DEFAULT_CONFIG.gm_time_constant,
    ):
        self.model = model
        self.time_constant = time_constant
        self.rng = rng
        sh = model.horizontal_sigma
        self.sigma = np.array([sh, sh, model.altitude_sigma])
        self.error = self.rng.normal(0.0, self.sigma)
        self._pending: list[tuple[float, np.ndarray]] = []
        self._clock = 0.0

    def sample(self, true_position, dt: float) -> np.ndarray:
        """Advance the error process by dt and measure the given position."""
        if dt < 0:
            raise ValueError("dt must be >= 0")
        if dt > 0:
            phi = math.exp(-dt / self.time_constant)
            innovation = self.rng.normal(0.0, self.sigma * math.sqrt(1.0 - phi * phi))
            self.error = phi * self.error + innovation
        measurement = np.asarray(true_position, dtype=float) + self.error
        if self.model.latency <= 0:
            return measurement
        self._clock += dt
        self._pending.append((self._clock, measurement))
        while len(self._pending) > 1 and self._pending[1][0] <= self._clock - self.model.latency:
            self._pending.pop(0)
        return self._pending[0][1]


def sample_tracker(tracker: TrackerSim, true_position, dt: float) -> np.ndarray:
    return tracker.sample(true_position, dt)


# ---------------------------------------------------------------------------
# Virtual quadrotor follower
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FollowerGains:
    position_gain: float = 2.0   # 1/s, position error -> velocity command
    brake_fraction: float = 0.6  # fraction of a_max used when planning deceleration


@dataclass(frozen=True)
class SimState:
    time: float
    quad_position: np.ndarray
    quad_velocity: np.ndarray
    gimbal_pan: float   # degrees
    gimbal_tilt: float  # degrees
    true_subjects: tuple[SubjectState, SubjectState]
    rng_seed: int

    @classmethod
    def initial(
        cls, position, look_at, subjects: tuple[SubjectState, SubjectState], seed: int
    ) -> "SimState":
        position = np.asarray(position, dtype=float)
        pan, tilt = _pan_tilt_toward(position, np.asarray(look_at, dtype=float))
        return cls(
            time=0.0,
            quad_position=position,
            quad_velocity=np.zeros(3),
            gimbal_pan=pan,
            gimbal_tilt=tilt,
            true_subjects=subjects,
            rng_seed=seed,
        )


def _pan_tilt_toward(position: np.ndarray, look_at: np.ndarray) -> tuple[float, float]:
    view = look_at - position
    horiz = math.hypot(view[0], view[1])
    pan = math.degrees(math.atan2(view[1], view[0]))
    tilt = math.degrees(math.atan2(view[2], horiz))
    return pan, tilt


def _wrap_angle(angle: float) -> float:
    return (angle + 180.0) % 360.0 - 180.0


def step(
    state: SimState,
    setpoint: tuple[np.ndarray, np.ndarray],
    dt: float,
    limits=None,
    gains: FollowerGains = FollowerGains(),
) -> SimState:
    """Advance the follower one tick toward a (look_from, look_at) setpoint.

    Cascade control: position error maps to a braking-aware velocity
    command, clamped to v_max; the acceleration toward that command is
    clamped to a_max. Deterministic: same state and setpoint stream give a
    bit-identical state series.
    """
    from .dynamics import QuadrotorLimits

    if limits is None:
        limits = QuadrotorLimits()
    if not 0.0 < dt <= 0.1:
        raise ValueError("dt must be in (0, 0.1] seconds")

    target, look_at = (np.asarray(p, dtype=float) for p in setpoint)
    error = target - state.quad_position
    dist = float(np.linalg.norm(error))
    if dist > 1e-12:
        direction = error / dist
        speed_cmd = min(
            limits.v_max,
            gains.position_gain * dist,
            math.sqrt(2.0 * gains.brake_fraction * limits.a_max * dist),
        )
        vel_cmd = direction * speed_cmd
    else:
        vel_cmd = np.zeros(3)

    accel = (vel_cmd - state.quad_velocity) / dt
    accel_norm = float(np.linalg.norm(accel))
    if accel_norm > limits.a_max:
        accel = accel * (limits.a_max / accel_norm)
    velocity = state.quad_velocity + accel * dt
    speed = float(np.linalg.norm(velocity))
    if speed > limits.v_max:
        velocity = velocity * (limits.v_max / speed)
    position = state.quad_position + velocity * dt

    pan_goal, tilt_goal = _pan_tilt_toward(position, look_at)
    max_step = limits.gimbal_rate_max * dt
    pan = state.gimbal_pan + float(
        np.clip(_wrap_angle(pan_goal - state.gimbal_pan), -max_step, max_step)
    )
    tilt = state.gimbal_tilt + float(
        np.clip(tilt_goal - state.gimbal_tilt, -max_step, max_step)
    )

    return replace(
        state,
        time=state.time + dt,
        quad_position=position,
        quad_velocity=velocity,
        gimbal_pan=_wrap_angle(pan),
        gimbal_tilt=tilt,
    )


# ---------------------------------------------------------------------------
# Tracking-noise screen-space experiment
# ---------------------------------------------------------------------------

_EXPERIMENT_SHOT_CYCLE = [
    ShotSpec(ShotType.APEX),
    ShotSpec(ShotType.CLOSE_APEX),
    ShotSpec(ShotType.INTERNAL, primary_subject="A"),
    ShotSpec(ShotType.EXTERNAL, primary_subject="A"),
    ShotSpec(ShotType.INTERNAL, primary_subject="B"),
    ShotSpec(ShotType.EXTERNAL, primary_subject="B"),
    ShotSpec(ShotType.APEX_FROM_ABOVE),
    ShotSpec(ShotType.EXTERNAL_FROM_ABOVE, primary_subject="A"),
]


@dataclass(frozen=True)
class ShotErrorRecord:
    shot_index: int
    t: float
    world_error_m: float
    screen_error: float


def run_tracking_error_study(
    scene: Scene,
    tracker: TrackerModel,
    duration: float = 480.0,
    shot_period: float = 4.0,
    seed: int = 0,
    config: PlannerConfig = DEFAULT_CONFIG,
) -> list[ShotErrorRecord]:
    """Plan shots from noisy subject estimates and measure the framing error.

    Every shot_period seconds a canonical shot is planned from Gauss-Markov
    noisy estimates of the (static) true subjects. The true framing target
    is then projected through the planned pose; the screen error is its
    normalized distance from the declared rule-of-thirds goal (saturated at
    1.0 when the target falls behind the camera), and the world error is the
    mean position-estimate error over both subjects.
    """
    rng = np.random.default_rng(seed)
    trackers = [
        TrackerSim(tracker, np.random.default_rng(rng.integers(2**63)), config.gm_time_constant)
        for _ in range(2)
    ]
    true_subjects = scene.subjects
    side = scene.line_of_action_side
    records: list[ShotErrorRecord] = []
    count = int(duration / shot_period)
    for i in range(count):
        t = i * shot_period
        measured = [
            trk.sample(subj.position, shot_period)
            for trk, subj in zip(trackers, true_subjects)
        ]
        world_error = float(
            np.mean(
                [np.linalg.norm(m - s.position) for m, s in zip(measured, true_subjects)]
            )
        )
        noisy_scene = Scene(
            subject_a=replace(true_subjects[0], position=measured[0]),
            subject_b=replace(true_subjects[1], position=measured[1]),
            fov_max=scene.fov_max,
            aspect_ratio=scene.aspect_ratio,
            line_of_action_side=side,
        )
        spec = _EXPERIMENT_SHOT_CYCLE[i % len(_EXPERIMENT_SHOT_CYCLE)]
        try:
            shot = place_shot(noisy_scene, spec, config)
        except PlanningError:
            records.append(ShotErrorRecord(i, t, world_error, 1.0))
            continue
        side = noisy_scene.line_of_action_side

        _, true_target = framing_target(scene, spec)
        goal = shot.target_screen_points[0][1]
        projected = project(shot.pose, true_target, scene.aspect_ratio)
        if projected is None:
            screen_error = 1.0
        else:
            screen_error = float(
                math.hypot(projected.x - goal.x, projected.y - goal.y)
            )
        records.append(ShotErrorRecord(i, t, world_error, screen_error))
    return records


def run_hover_accuracy_study(
    tracker: TrackerModel,
    duration: float = 300.0,
    tick_rate: float = 50.0,
    seed: int = 0,
    config: PlannerConfig = DEFAULT_CONFIG,
) -> dict:
    """Hold a hover setpoint while the follower's position feedback is noisy.

    The controller sees the tracker's measured position instead of the true
    one, so measurement drift pushes the vehicle off the setpoint. Reported,
    not asserted: the figures depend on the follower gains; only the
    qualitative gap between tracker grades is meaningful.
    """
    rng = np.random.default_rng(seed)
    noise = TrackerSim(tracker, rng, config.gm_time_constant)
    subjects = (
        SubjectState(np.array([0.0, 0.0, 1.7]), np.array([1.0, 0.0, 0.0]), 1.75, 2.0),
        SubjectState(np.array([3.0, 0.0, 1.7]), np.array([-1.0, 0.0, 0.0]), 1.7, 2.0),
    )
    target = np.array([1.5, 6.0, 3.0])
    state = SimState.initial(target, np.array([1.5, 0.0, 1.7]), subjects, seed)
    dt = 1.0 / tick_rate
    radial = []
    steps = int(duration * tick_rate)
    for _ in range(steps):
        measured = noise.sample(state.quad_position, dt)
        offset = measured - state.quad_position
        # Controlling toward the target using the estimated position is the
        # same as steering the true position toward (target - offset).
        state = step(state, (target - offset, state.quad_position + [0.0, -5.0, -1.0]), dt)
        radial.append(float(np.linalg.norm(state.quad_position - target)))
    radial_arr = np.array(radial[int(0.1 * steps):])  # drop the settle-in
    return {
        "tracker": tracker.kind,
        "p95_radius_m": float(np.percentile(radial_arr, 95)),
        "median_radius_m": float(np.median(radial_arr)),
        "max_radius_m": float(np.max(radial_arr)),
    }


def experiment_summary(records: list[ShotErrorRecord]) -> dict:
    world = np.array([r.world_error_m for r in records])
    screen = np.array([r.screen_error for r in records])
    return {
        "shots": len(records),
        "world_error_m": {
            "median": float(np.median(world)),
            "p95": float(np.percentile(world, 95)),
            "max": float(np.max(world)),
        },
        "screen_error": {
            "median": float(np.median(screen)),
            "p95": float(np.percentile(screen, 95)),
            "max": float(np.max(screen)),
        },
    }
