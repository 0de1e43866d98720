"""Planner configuration with documented defaults.

Everything the shot generator and transition planner treat as a tunable
lives here, loadable from the session config JSON (``planner`` object).
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class PlannerConfig:
    # Blend optimization
    blend_samples: int = 50           # n: path parameter samples
    smoothness_weight: float = 1e-4   # lambda in the blend objective
    # Bound on the 5th derivative of the blend weight: +-swing_constant / n.
    # Sized so the weight profile can swing 0 -> 1 -> 0 within one transition.
    swing_constant: float = 2.5e7
    max_densify: int = 2              # doublings of n when dense safety check fails
    dense_check_factor: int = 10
    dense_margin: float = 0.005       # required clearance slack at dense samples, meters

    # Shot framing
    crop_warning_ratio: float = 0.33  # warn when cropped fov / fov_max drops below this
    shift_tolerance: float = 1e-4     # screen-space placement tolerance, normalized units
    shift_max_iterations: int = 100
    apex_yaw_deg: float = 90.0        # yaw from the line of action, toward the chosen side
    external_yaw_deg: float = 10.0    # yaw off the primary->other axis
    internal_gaze_offset_deg: float = 30.0  # yaw off the primary's gaze, toward the side
    from_above_pitch_deg: float = -55.0
    min_side_angle_deg: float = 15.0  # camera stays at least this far onto the chosen side

    # Trajectory timing
    sample_rate: float = 50.0         # trajectory samples per second
    min_duration: float = 1.0         # seconds
    duration_speed_fraction: float = 0.5  # initial duration targets this fraction of v_max
    stretch_step: float = 1.1
    max_stretch: float = 10.0

    # Tracking-noise simulation
    gm_time_constant: float = 20.0    # Gauss-Markov correlation time, seconds

    def v_bounds(self, n: int) -> tuple[float, float]:
        """Fifth-derivative bounds for an n-sample blend (inversely proportional to n)."""
        v = self.swing_constant / n
        return -v, v

    def replace(self, **changes) -> "PlannerConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "PlannerConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown planner config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path: str | Path) -> "PlannerConfig":
        data = json.loads(Path(path).read_text())
        return cls.from_dict(data.get("planner", data))

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


DEFAULT_CONFIG = PlannerConfig()
