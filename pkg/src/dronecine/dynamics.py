"""Quadrotor-camera feasibility checks and path-preserving time stretching.

Limits default to a small consumer quadrotor with a 3-axis gimbal; all are
configurable via the session config's ``limits`` object. Feasibility is
evaluated by finite differences over the trajectory samples, which are the
setpoints the follower actually flies.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import UnstretchableError
from .transition import EasingProfile, Trajectory

GRAVITY = 9.80665  # m/s^2


@dataclass(frozen=True)
class QuadrotorLimits:
    v_max: float = 15.0          # m/s
    a_max: float = 8.0           # m/s^2
    thrust_min: float = 0.0      # N, total
    thrust_max: float = 30.0     # N, total
    mass: float = 1.5            # kg
    # Gimbal pitch range includes a small up-tilt margin: transitions between
    # level shots transiently look up by a degree or two.
    gimbal_pitch_min: float = -90.0  # degrees
    gimbal_pitch_max: float = 15.0   # degrees
    gimbal_rate_max: float = 90.0    # deg/s

    def __post_init__(self):
        if min(self.v_max, self.a_max, self.mass, self.gimbal_rate_max) <= 0:
            raise ValueError("limits must be positive")
        if not self.thrust_min < self.mass * GRAVITY < self.thrust_max:
            raise ValueError("hover must be feasible: thrust_min < m*g < thrust_max")
        if self.gimbal_pitch_min >= self.gimbal_pitch_max:
            raise ValueError("gimbal pitch range is empty")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "QuadrotorLimits":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown limit keys: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class Violation:
    t: float
    quantity: str  # speed | accel | thrust | gimbal_pitch | gimbal_rate
    value: float
    limit: float


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    violations: tuple[Violation, ...]

    def worst(self, quantity: str | None = None) -> Violation | None:
        pool = [
            v for v in self.violations if quantity is None or v.quantity == quantity
        ]
        if not pool:
            return None
        return max(pool, key=lambda v: abs(v.value - v.limit))

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "violations": [dataclasses.asdict(v) for v in self.violations],
        }


def gimbal_pitch_deg(look_from: np.ndarray, look_at: np.ndarray) -> np.ndarray:
    """Pitch of the view direction per sample, degrees (negative looks down)."""
    view = look_at - look_from
    horiz = np.hypot(view[:, 0], view[:, 1])
    return np.degrees(np.arctan2(view[:, 2], horiz))


def check(traj: Trajectory, limits: QuadrotorLimits) -> FeasibilityReport:
    """Evaluate speed, acceleration, thrust, and gimbal limits along a trajectory."""
    if len(traj.times) < 5:
        raise ValueError("too few samples: need at least 5 for finite differences")
    t = traj.times
    vel = np.gradient(traj.look_from, t, axis=0)
    acc = np.gradient(vel, t, axis=0)
    speed = np.linalg.norm(vel, axis=1)
    accel = np.linalg.norm(acc, axis=1)
    thrust_vec = limits.mass * (acc + np.array([0.0, 0.0, GRAVITY]))
    thrust = np.linalg.norm(thrust_vec, axis=1)
    pitch = gimbal_pitch_deg(traj.look_from, traj.look_at)
    pitch_rate = np.abs(np.gradient(pitch, t))

    violations: list[Violation] = []

    def collect(values: np.ndarray, quantity: str, low: float | None, high: float | None):
        for i, value in enumerate(values):
            if high is not None and value > high + 1e-9:
                violations.append(Violation(float(t[i]), quantity, float(value), high))
            elif low is not None and value < low - 1e-9:
                violations.append(Violation(float(t[i]), quantity, float(value), low))

    collect(speed, "speed", None, limits.v_max)
    collect(accel, "accel", None, limits.a_max)
    collect(thrust, "thrust", limits.thrust_min, limits.thrust_max)
    collect(pitch, "gimbal_pitch", limits.gimbal_pitch_min, limits.gimbal_pitch_max)
    collect(pitch_rate, "gimbal_rate", None, limits.gimbal_rate_max)

    violations.sort(key=lambda v: v.t)
    return FeasibilityReport(feasible=not violations, violations=tuple(violations))


def retime(traj: Trajectory, factor: float) -> Trajectory:
    """Uniformly slow a trajectory; sampled positions are untouched."""
    return Trajectory(
        duration=traj.duration * factor,
        times=traj.times * factor,
        look_from=traj.look_from,
        look_at=traj.look_at,
        fov=traj.fov,
        easing=EasingProfile(traj.easing.duration * factor),
        geometry=traj.geometry,
    )


def time_stretch(traj: Trajectory, limits: QuadrotorLimits) -> Trajectory:
    """Slow the trajectory geometrically (1.1 steps) until it is feasible.

    Returns the input unchanged when already feasible. Raises
    UnstretchableError past a total factor of 10, which only happens for
    duration-independent violations such as gimbal pitch range.
    """
    report = check(traj, limits)
    if report.feasible:
        return traj
    factor = 1.0
    while True:
        factor *= 1.1
        if factor > 10.0:
            worst = report.worst()
            quantity = worst.quantity if worst else "unknown"
            raise UnstretchableError(
                f"unstretchable: {quantity} still violated at stretch factor 10",
                quantity=quantity,
            )
        candidate = retime(traj, factor)
        report = check(candidate, limits)
        if report.feasible:
            return candidate


def report_to_json(report: FeasibilityReport) -> dict:
    return report.to_dict()
