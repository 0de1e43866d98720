"""Static shot generation for the canonical two-subject shot types.

Shots place subjects on rule-of-thirds lines, hold the camera on the
session's side of the line of action, and respect each subject's safety
sphere: when the ideal camera sits inside a sphere it is pushed back along
its view ray and the field of view is cropped so the framed subject keeps
its on-screen size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import DEFAULT_CONFIG, PlannerConfig
from .errors import SceneFormatError, UnreachableFramingError
from .scene import (
    WORLD_UP,
    CameraPose,
    Scene,
    ScreenPoint,
    SubjectState,
    half_tangents,
    line_of_action,
    project,
    unit,
)

THIRD = 1.0 / 3.0
UPPER_LINE = 2.0 / 3.0


class ShotType(Enum):
    APEX = "apex"
    CLOSE_APEX = "close_apex"
    INTERNAL = "internal"
    EXTERNAL = "external"
    APEX_FROM_ABOVE = "apex_from_above"
    EXTERNAL_FROM_ABOVE = "external_from_above"


class DistanceClass(Enum):
    CLOSE = "close"
    MEDIUM = "medium"
    LONG = "long"


# Head-heights visible below the eye line per distance class.
HEADS_BELOW_EYELINE = {
    DistanceClass.CLOSE: 2.5,
    DistanceClass.MEDIUM: 4.0,
    DistanceClass.LONG: 7.5,
}

DEFAULT_DISTANCE_CLASS = {
    ShotType.APEX: DistanceClass.LONG,
    ShotType.CLOSE_APEX: DistanceClass.MEDIUM,
    ShotType.INTERNAL: DistanceClass.CLOSE,
    ShotType.EXTERNAL: DistanceClass.MEDIUM,
    ShotType.APEX_FROM_ABOVE: DistanceClass.LONG,
    ShotType.EXTERNAL_FROM_ABOVE: DistanceClass.MEDIUM,
}

_APEX_TYPES = {ShotType.APEX, ShotType.CLOSE_APEX, ShotType.APEX_FROM_ABOVE}
_FROM_ABOVE_TYPES = {ShotType.APEX_FROM_ABOVE, ShotType.EXTERNAL_FROM_ABOVE}


@dataclass(frozen=True)
class ShotSpec:
    """Canonical shot request; unset fields fall back to per-type defaults."""

    shot_type: ShotType
    primary_subject: str = "A"
    distance_class: DistanceClass | None = None
    theta_deg: float | None = None
    phi_deg: float | None = None

    def __post_init__(self):
        if self.primary_subject not in ("A", "B"):
            raise ValueError("primary_subject must be 'A' or 'B'")

    def resolved_distance_class(self) -> DistanceClass:
        return self.distance_class or DEFAULT_DISTANCE_CLASS[self.shot_type]

    @classmethod
    def from_dict(cls, data: dict) -> "ShotSpec":
        if not isinstance(data, dict):
            raise SceneFormatError("shot spec must be a JSON object")
        if "shot_type" not in data:
            raise SceneFormatError("shot spec missing shot_type")
        try:
            shot_type = ShotType(data["shot_type"])
        except ValueError as exc:
            raise SceneFormatError(f"unknown shot_type {data['shot_type']!r}") from exc
        distance = data.get("distance_class")
        try:
            return cls(
                shot_type=shot_type,
                primary_subject=data.get("primary_subject", "A"),
                distance_class=DistanceClass(distance) if distance else None,
                theta_deg=data.get("theta_deg"),
                phi_deg=data.get("phi_deg"),
            )
        except ValueError as exc:
            raise SceneFormatError(str(exc)) from exc

    def to_dict(self) -> dict:
        out: dict = {"shot_type": self.shot_type.value, "primary_subject": self.primary_subject}
        if self.distance_class is not None:
            out["distance_class"] = self.distance_class.value
        if self.theta_deg is not None:
            out["theta_deg"] = self.theta_deg
        if self.phi_deg is not None:
            out["phi_deg"] = self.phi_deg
        return out


@dataclass(frozen=True)
class FramedShot:
    """A fully specified static shot, safe with respect to both subjects."""

    pose: CameraPose
    uncropped_fov: float
    crop_warning: bool
    target_screen_points: tuple[tuple[str, ScreenPoint], ...]

    def to_dict(self) -> dict:
        return {
            "pose": {
                "look_from": self.pose.look_from.tolist(),
                "look_at": self.pose.look_at.tolist(),
                "fov_deg": self.pose.fov,
            },
            "uncropped_fov_deg": self.uncropped_fov,
            "crop_warning": self.crop_warning,
            "target_screen_points": [
                {"target": label, "x": sp.x, "y": sp.y}
                for label, sp in self.target_screen_points
            ],
        }


def distance_for_class(
    distance_class: DistanceClass,
    subjects: tuple[SubjectState, ...],
    fov: float,
    aspect_ratio: float,
) -> float:
    """Camera-to-target distance that fits the class's head count in frame.

    With the eye line on the upper two-thirds line, the lower 2/3 of the
    frame must span the class's number of head-heights, so
    d = N * h_head / (2 * tan(fov_v / 2) * (2/3)).
    """
    heads = HEADS_BELOW_EYELINE[distance_class]
    head_height = float(np.mean([s.head_height for s in subjects]))
    _, tan_v = half_tangents(fov, aspect_ratio)
    return heads * head_height / (2.0 * tan_v * UPPER_LINE)


def framing_target(scene: Scene, spec: ShotSpec) -> tuple[str, np.ndarray]:
    """Label and world point the shot composes around (eyes of the target)."""
    if spec.shot_type in _APEX_TYPES:
        return "AB", 0.5 * (scene.subject_a.position + scene.subject_b.position)
    return spec.primary_subject, scene.subject(spec.primary_subject).position.copy()


def _horizontal_unit(v: np.ndarray) -> np.ndarray | None:
    h = np.array([v[0], v[1], 0.0])
    n = np.linalg.norm(h)
    if n < 1e-9:
        return None
    return h / n


def _rotate_toward(base: np.ndarray, toward: np.ndarray, angle_deg: float) -> np.ndarray:
    """Rotate a horizontal unit vector by angle_deg in the plane toward ``toward``."""
    perp = toward - (toward @ base) * base
    n = np.linalg.norm(perp)
    if n < 1e-9:
        return base if (base @ toward) >= 0 else toward
    perp = perp / n
    a = math.radians(angle_deg)
    return math.cos(a) * base + math.sin(a) * perp


def _ensure_side(direction: np.ndarray, side_normal: np.ndarray, min_angle_deg: float) -> np.ndarray:
    """Clamp a horizontal unit direction to lie on the chosen side of the line.

    Keeps the camera at least min_angle_deg onto the side, mirroring across
    the line of action when the requested direction falls on the wrong side
    (possible for internal shots when the subject gazes away from the side).
    """
    min_sin = math.sin(math.radians(min_angle_deg))
    c = float(direction @ side_normal)
    if c >= min_sin:
        return direction
    along = direction - c * side_normal
    n = np.linalg.norm(along)
    if n < 1e-9:
        return side_normal.copy()
    return unit(along / n * math.cos(math.radians(min_angle_deg)) + min_sin * side_normal)


def _offset_direction(
    scene: Scene,
    spec: ShotSpec,
    line_dir: np.ndarray,
    side_normal: np.ndarray,
    config: PlannerConfig,
) -> np.ndarray:
    """Horizontal unit direction from the look-at point toward the camera."""
    if spec.shot_type in _APEX_TYPES:
        theta = spec.theta_deg if spec.theta_deg is not None else config.apex_yaw_deg
        a = math.radians(theta)
        direction = math.cos(a) * line_dir_h(line_dir) + math.sin(a) * side_normal
    elif spec.shot_type is ShotType.INTERNAL:
        primary = scene.subject(spec.primary_subject)
        other = scene.subject("B" if spec.primary_subject == "A" else "A")
        gaze_h = _horizontal_unit(primary.gaze)
        if gaze_h is None:
            gaze_h = _horizontal_unit(other.position - primary.position)
        if gaze_h is None:
            gaze_h = side_normal
        theta = spec.theta_deg if spec.theta_deg is not None else config.internal_gaze_offset_deg
        direction = _rotate_toward(gaze_h, side_normal, theta)
    else:  # external variants: over the other subject's shoulder
        primary = scene.subject(spec.primary_subject)
        other = scene.subject("B" if spec.primary_subject == "A" else "A")
        toward_other = _horizontal_unit(other.position - primary.position)
        if toward_other is None:
            toward_other = side_normal
        theta = spec.theta_deg if spec.theta_deg is not None else config.external_yaw_deg
        a = math.radians(theta)
        direction = math.cos(a) * toward_other + math.sin(a) * side_normal
    direction = unit(np.array([direction[0], direction[1], 0.0]))
    return _ensure_side(direction, side_normal, config.min_side_angle_deg)


def line_dir_h(line_dir: np.ndarray) -> np.ndarray:
    h = _horizontal_unit(line_dir)
    if h is None:
        raise UnreachableFramingError("line of action has no horizontal extent")
    return h


def _screen_target(
    scene: Scene, spec: ShotSpec, pose: CameraPose
) -> tuple[float, float]:
    """Rule-of-thirds goal for the framing target under the given pose."""
    if spec.shot_type in _APEX_TYPES:
        return 0.5, UPPER_LINE
    primary = scene.subject(spec.primary_subject)
    other = scene.subject("B" if spec.primary_subject == "A" else "A")
    _, right, _ = pose.basis()
    # Internal shots frame around the gaze; externals around the partner,
    # whose shoulder must fill the opposite third (the two agree whenever
    # the primary is looking at the partner, but the partner offset is the
    # robust signal when the camera sits nearly on the gaze axis).
    if spec.shot_type is ShotType.INTERNAL:
        facing = float(primary.gaze @ right)
        if abs(facing) < 1e-6:
            facing = float((other.position - primary.position) @ right)
    else:
        facing = float((other.position - primary.position) @ right)
        if abs(facing) < 1e-6:
            facing = float(primary.gaze @ right)
    # Facing screen right -> left third, leaving empty space ahead.
    x = THIRD if facing > 0 else 1.0 - THIRD
    return x, UPPER_LINE


def _shift_to_target(
    pose: CameraPose,
    target: np.ndarray,
    goal: tuple[float, float],
    aspect_ratio: float,
    config: PlannerConfig,
) -> CameraPose:
    """Translate the pose until the target projects onto its thirds goal.

    The correction from the screen error at the target's depth is exact for
    a translation perpendicular to the view axis, so this converges in a
    couple of iterations; the loop guards pathological geometry.
    """
    tan_h, tan_v = half_tangents(pose.fov, aspect_ratio)
    for _ in range(config.shift_max_iterations):
        sp = project(pose, target, aspect_ratio)
        if sp is None:
            raise UnreachableFramingError("framing target fell behind the camera")
        ex = goal[0] - sp.x
        ey = goal[1] - sp.y
        if max(abs(ex), abs(ey)) < config.shift_tolerance:
            return pose
        forward, right, up = pose.basis()
        depth = float((target - pose.look_from) @ forward)
        delta = (-2.0 * ex * depth * tan_h) * right + (-2.0 * ey * depth * tan_v) * up
        pose = CameraPose(pose.look_from + delta, pose.look_at + delta, pose.fov)
    raise UnreachableFramingError(
        f"screen placement did not converge in {config.shift_max_iterations} iterations"
    )


def _push_out_distance(look_from: np.ndarray, forward: np.ndarray, scene: Scene) -> float:
    """Smallest backward move along -forward placing the camera outside both spheres."""
    candidates = [0.0]
    for s in scene.subjects:
        q = look_from - s.position
        qf = float(q @ forward)
        disc = qf * qf - float(q @ q) + s.safety_radius**2
        if disc > 0.0:
            candidates.append(qf + math.sqrt(disc))

    def clear_at(t: float) -> bool:
        p = look_from - t * forward
        return all(
            np.linalg.norm(p - s.position) >= s.safety_radius - 1e-9 for s in scene.subjects
        )

    for t in sorted(candidates):
        if t >= -1e-12 and clear_at(max(t, 0.0)):
            return max(t, 0.0)
    raise UnreachableFramingError("no safe camera position along the view ray")


def place_shot(scene: Scene, spec: ShotSpec, config: PlannerConfig = DEFAULT_CONFIG) -> FramedShot:
    """Plan one static shot: compose, then push out of safety spheres and crop."""
    line_dir, side_normal = line_of_action(scene)
    label, target = framing_target(scene, spec)
    involved = (
        scene.subjects
        if spec.shot_type in _APEX_TYPES
        else (scene.subject(spec.primary_subject),)
    )
    fov = scene.fov_max
    d = distance_for_class(spec.resolved_distance_class(), involved, fov, scene.aspect_ratio)

    if spec.phi_deg is not None:
        phi = spec.phi_deg
    elif spec.shot_type in _FROM_ABOVE_TYPES:
        phi = config.from_above_pitch_deg
    else:
        phi = 0.0
    if not -90.0 < phi < 90.0:
        raise UnreachableFramingError("pitch must be in (-90, 90) degrees")

    offset_h = _offset_direction(scene, spec, line_dir, side_normal, config)
    phi_r = math.radians(phi)
    offset = math.cos(phi_r) * offset_h - math.sin(phi_r) * WORLD_UP

    pose = CameraPose(target + d * offset, target.copy(), fov)
    goal = _screen_target(scene, spec, pose)
    shifted = _shift_to_target(pose, target, goal, scene.aspect_ratio, config)

    def side_margin(p: CameraPose) -> float:
        return float((p.look_from - scene.subject_a.position) @ side_normal)

    # The thirds shift may drag the camera across the line of action; keeping
    # the session's camera side outranks the empty-space heuristic, so fall
    # back to the mirrored third when the preferred one crosses the line.
    if goal[0] != 0.5 and side_margin(shifted) <= 1e-9:
        mirrored_goal = (1.0 - goal[0], goal[1])
        mirrored = _shift_to_target(pose, target, mirrored_goal, scene.aspect_ratio, config)
        if side_margin(mirrored) > side_margin(shifted):
            goal = mirrored_goal
            shifted = mirrored
    pose = shifted

    forward, _, up = pose.basis()
    t_back = _push_out_distance(pose.look_from, forward, scene)
    crop_warning = False
    if t_back > 1e-12:
        # Crop so the framing target's projected head height is unchanged.
        # For a level camera this reduces to scaling the fov tangent by the
        # ratio of view depths d_ideal / d_safe; for pitched cameras the head
        # segment spans different view depths, so preserve the projected
        # segment itself.
        if label == "AB":
            head = 0.5 * (scene.subject_a.head_height + scene.subject_b.head_height)
        else:
            head = scene.subject(label).head_height
        top = target + np.array([0.0, 0.0, head / 2.0])
        bottom = target - np.array([0.0, 0.0, head / 2.0])
        sp_top = project(pose, top, scene.aspect_ratio)
        sp_bottom = project(pose, bottom, scene.aspect_ratio)
        if sp_top is None or sp_bottom is None:
            raise UnreachableFramingError("framing target head segment behind camera")
        dy_ideal = abs(sp_top.y - sp_bottom.y)
        pushed_from = pose.look_from - t_back * forward

        def half_tangent_ratio(p: np.ndarray) -> float:
            v = p - pushed_from
            return 0.5 * float(v @ up) / float(v @ forward)

        tan_v = abs(half_tangent_ratio(top) - half_tangent_ratio(bottom)) / dy_ideal
        cropped_fov = math.degrees(2.0 * math.atan(tan_v * scene.aspect_ratio))
        pose = CameraPose(pushed_from, pose.look_at, cropped_fov)
        crop_warning = cropped_fov / scene.fov_max < config.crop_warning_ratio

    return FramedShot(
        pose=pose,
        uncropped_fov=scene.fov_max,
        crop_warning=crop_warning,
        target_screen_points=((label, ScreenPoint(goal[0], goal[1])),),
    )
