"""Geometric domain types shared by the shot and transition planners.

World frame is right-handed ENU (x east, y north, z up), meters. A camera
is a look-from/look-at pair with a world-vertical up vector and a
horizontal field of view in degrees. Screen coordinates are normalized to
[0, 1]^2 with the origin at the bottom-left of the frame.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import DegeneratePoseError, DegenerateSceneError, SceneFormatError

WORLD_UP = np.array([0.0, 0.0, 1.0])
DEFAULT_ASPECT_RATIO = 16.0 / 9.0
HEADS_PER_BODY = 7.5  # a standing body spans 7.5 head-heights


def vec3(value) -> np.ndarray:
    v = np.asarray(value, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    return v


def unit(value) -> np.ndarray:
    v = vec3(value)
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / n


def _frozen_vec(obj, name: str, value) -> None:
    v = vec3(value).copy()
    v.setflags(write=False)
    object.__setattr__(obj, name, v)


@dataclass(frozen=True)
class SubjectState:
    """A tracked person: eye-level head position, gaze, height, safety sphere."""

    position: np.ndarray
    gaze: np.ndarray
    height: float
    safety_radius: float

    def __post_init__(self):
        _frozen_vec(self, "position", self.position)
        g = vec3(self.gaze)
        if abs(np.linalg.norm(g) - 1.0) > 1e-9:
            raise ValueError("gaze must be a unit vector (within 1e-9)")
        _frozen_vec(self, "gaze", g)
        if not self.height > 0:
            raise ValueError("height must be > 0")
        if not self.safety_radius > 0:
            raise ValueError("safety_radius must be > 0")

    @property
    def head_height(self) -> float:
        return self.height / HEADS_PER_BODY


@dataclass(frozen=True)
class CameraPose:
    """Camera as look-from/look-at points (meters) and horizontal fov (degrees).

    The up vector is fixed to world vertical, so the pose has no roll; a
    vertical view direction leaves roll undefined and is rejected.
    """

    look_from: np.ndarray
    look_at: np.ndarray
    fov: float

    def __post_init__(self):
        _frozen_vec(self, "look_from", self.look_from)
        _frozen_vec(self, "look_at", self.look_at)
        view = self.look_at - self.look_from
        n = float(np.linalg.norm(view))
        if n < 1e-12:
            raise DegeneratePoseError("look_from and look_at coincide")
        if float(np.hypot(view[0], view[1])) / n < 1e-9:
            raise DegeneratePoseError("view direction is vertical; camera roll undefined")
        if not 0.0 < self.fov < 180.0:
            raise ValueError("fov must be in (0, 180) degrees")

    def basis(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return the (forward, right, up) orthonormal camera basis."""
        forward = unit(self.look_at - self.look_from)
        horiz = np.array([forward[0], forward[1], 0.0])
        if np.linalg.norm(horiz) < 1e-12:
            raise DegeneratePoseError("view direction is vertical; camera roll undefined")
        right = unit(np.cross(forward, WORLD_UP))
        up = np.cross(right, forward)
        return forward, right, up


class LineSide(Enum):
    UNSET = "unset"
    LEFT = "left"
    RIGHT = "right"


@dataclass
class Scene:
    """Two tracked subjects plus the camera's fixed maximum field of view.

    ``line_of_action_side`` is the only mutable state: it is unset until the
    first shot is planned and then pins the camera to one side of the line
    through the subjects for the rest of the session.
    """

    subject_a: SubjectState
    subject_b: SubjectState
    fov_max: float
    aspect_ratio: float = DEFAULT_ASPECT_RATIO
    line_of_action_side: LineSide = LineSide.UNSET

    def __post_init__(self):
        gap = np.linalg.norm(self.subject_a.position - self.subject_b.position)
        if gap <= 1e-6:
            raise DegenerateSceneError("subjects must be distinct (separation > 1e-6 m)")
        if not 0.0 < self.fov_max < 180.0:
            raise ValueError("fov_max must be in (0, 180) degrees")
        if not self.aspect_ratio > 0:
            raise ValueError("aspect_ratio must be > 0")

    def subject(self, which: str) -> SubjectState:
        if which == "A":
            return self.subject_a
        if which == "B":
            return self.subject_b
        raise KeyError(f"unknown subject {which!r}")

    @property
    def subjects(self) -> tuple[SubjectState, SubjectState]:
        return (self.subject_a, self.subject_b)


@dataclass(frozen=True)
class ScreenPoint:
    """Normalized screen position: x in [0,1] left-to-right, y bottom-to-top."""

    x: float
    y: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


def half_tangents(fov_deg: float, aspect_ratio: float) -> tuple[float, float]:
    """Half-extent tangents (horizontal, vertical) of the view frustum."""
    tan_h = math.tan(math.radians(fov_deg) / 2.0)
    return tan_h, tan_h / aspect_ratio


def project(
    pose: CameraPose,
    world_point,
    aspect_ratio: float = DEFAULT_ASPECT_RATIO,
) -> ScreenPoint | None:
    """Pinhole-project a world point; returns None when it is behind the camera.

    A point on the optical axis maps to (0.5, 0.5); the returned coordinates
    lie inside the unit square exactly when the point is in frame.
    """
    forward, right, up = pose.basis()
    v = vec3(world_point) - pose.look_from
    depth = float(v @ forward)
    if depth <= 0.0:
        return None
    tan_h, tan_v = half_tangents(pose.fov, aspect_ratio)
    x = 0.5 + 0.5 * float(v @ right) / (depth * tan_h)
    y = 0.5 + 0.5 * float(v @ up) / (depth * tan_v)
    return ScreenPoint(x, y)


def unproject(
    pose: CameraPose,
    screen_point: ScreenPoint,
    depth: float,
    aspect_ratio: float = DEFAULT_ASPECT_RATIO,
) -> np.ndarray:
    """World point that projects to ``screen_point`` at the given view depth."""
    if depth <= 0:
        raise ValueError("depth must be > 0")
    forward, right, up = pose.basis()
    tan_h, tan_v = half_tangents(pose.fov, aspect_ratio)
    lateral = (screen_point.x - 0.5) * 2.0 * depth * tan_h
    vertical = (screen_point.y - 0.5) * 2.0 * depth * tan_v
    return pose.look_from + depth * forward + lateral * right + vertical * up


def line_of_action(scene: Scene) -> tuple[np.ndarray, np.ndarray]:
    """Line-of-action direction (A toward B) and the session's side normal.

    The side normal is horizontal, unit length, and perpendicular to the
    line. On first call the side that sees more of the subjects' faces is
    chosen (maximizing the summed gaze projection); afterwards the persisted
    choice is returned regardless of gaze.
    """
    a, b = scene.subject_a, scene.subject_b
    line = b.position - a.position
    if np.linalg.norm(line) <= 1e-6:
        raise DegenerateSceneError("subjects coincide; line of action undefined")
    line_dir = unit(line)
    lateral = np.cross(WORLD_UP, line_dir)
    if np.linalg.norm(lateral) < 1e-9:
        raise DegenerateSceneError("subjects are vertically aligned; line of action undefined")
    left_normal = unit(lateral)

    if scene.line_of_action_side is LineSide.UNSET:
        score = float((a.gaze + b.gaze) @ left_normal)
        # Tie-break (gazes along the line): keep vertical x line direction.
        scene.line_of_action_side = LineSide.LEFT if score >= 0.0 else LineSide.RIGHT

    if scene.line_of_action_side is LineSide.LEFT:
        return line_dir, left_normal
    return line_dir, -left_normal


def distance_to_subjects(p, scene: Scene) -> tuple[float, float]:
    """Euclidean distances from a point to subject A and subject B."""
    q = vec3(p)
    return (
        float(np.linalg.norm(q - scene.subject_a.position)),
        float(np.linalg.norm(q - scene.subject_b.position)),
    )


# ---------------------------------------------------------------------------
# Scene file format
#
# JSON object:
#   {
#     "subjects": [
#       {"position": [x, y, z], "gaze": [x, y, z], "height": h, "safety_radius": r},
#       {...}                      # exactly two entries
#     ],
#     "fov_max_deg": 70.0,
#     "aspect_ratio": 1.7778      # optional, defaults to 16/9
#   }
# Gaze vectors are normalized on load.
# ---------------------------------------------------------------------------


def _subject_from_dict(entry: dict, index: int) -> SubjectState:
    if not isinstance(entry, dict):
        raise SceneFormatError(f"subjects[{index}] must be an object")
    missing = {"position", "gaze", "height", "safety_radius"} - set(entry)
    if missing:
        raise SceneFormatError(f"subjects[{index}] missing fields: {sorted(missing)}")
    try:
        gaze = unit(entry["gaze"])
        return SubjectState(
            position=vec3(entry["position"]),
            gaze=gaze,
            height=float(entry["height"]),
            safety_radius=float(entry["safety_radius"]),
        )
    except (ValueError, TypeError) as exc:
        raise SceneFormatError(f"subjects[{index}]: {exc}") from exc


def scene_from_dict(data: dict) -> Scene:
    if not isinstance(data, dict):
        raise SceneFormatError("scene must be a JSON object")
    subjects = data.get("subjects")
    if not isinstance(subjects, list) or len(subjects) != 2:
        raise SceneFormatError("scene requires exactly two subjects")
    if "fov_max_deg" not in data:
        raise SceneFormatError("scene missing fov_max_deg")
    a = _subject_from_dict(subjects[0], 0)
    b = _subject_from_dict(subjects[1], 1)
    try:
        return Scene(
            subject_a=a,
            subject_b=b,
            fov_max=float(data["fov_max_deg"]),
            aspect_ratio=float(data.get("aspect_ratio", DEFAULT_ASPECT_RATIO)),
        )
    except (ValueError, TypeError) as exc:
        raise SceneFormatError(str(exc)) from exc


def load_scene(path: str | Path) -> Scene:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SceneFormatError(f"invalid JSON in scene file: {exc}") from exc
    return scene_from_dict(data)


def scene_to_dict(scene: Scene) -> dict:
    return {
        "subjects": [
            {
                "position": s.position.tolist(),
                "gaze": s.gaze.tolist(),
                "height": s.height,
                "safety_radius": s.safety_radius,
            }
            for s in scene.subjects
        ],
        "fov_max_deg": scene.fov_max,
        "aspect_ratio": scene.aspect_ratio,
    }
