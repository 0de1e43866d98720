"""Virtual cinematographer for a (simulated) quadrotor camera."""

from .config import DEFAULT_CONFIG, PlannerConfig
from .dynamics import FeasibilityReport, QuadrotorLimits, check, time_stretch
from .errors import (
    BusyError,
    DegeneratePoseError,
    DegenerateSceneError,
    InfeasibleError,
    PlanningError,
    SceneFormatError,
    UnreachableFramingError,
    UnstretchableError,
)
from .scene import (
    CameraPose,
    Scene,
    ScreenPoint,
    SubjectState,
    distance_to_subjects,
    line_of_action,
    load_scene,
    project,
    unproject,
)
from .shotgen import (
    DistanceClass,
    FramedShot,
    ShotSpec,
    ShotType,
    distance_for_class,
    place_shot,
)
from .simkit import (
    CONVENTIONAL_TRACKER,
    RTK_TRACKER,
    SimState,
    TrackerModel,
    TrackerSim,
    run_hover_accuracy_study,
    run_tracking_error_study,
    step,
)
from .transition import (
    BasisPath,
    BlendProblem,
    BlendSolution,
    Trajectory,
    blend_path,
    build_basis_paths,
    ease,
    easing_profile,
    plan_transition,
    solve_blend,
)

__version__ = "0.1.0"
