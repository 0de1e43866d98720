"""Transition planning between static shots.

A transition blends two subject-relative basis paths (linear distance,
spherically interpolated vantage direction) with a scalar weight profile
w(u). The profile is optimized under a discretized fifth-order integrator
so the blended path stays outside both safety spheres while remaining C4
continuous; an easing curve with vanishing endpoint derivatives turns the
path into a timed trajectory.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .config import DEFAULT_CONFIG, PlannerConfig
from .errors import InfeasibleError
from .scene import WORLD_UP, CameraPose, Scene, unit
from .shotgen import FramedShot

log = logging.getLogger(__name__)

STATE_DIM = 5  # blend weight and its first four derivatives


def continuity_matrices() -> tuple[np.ndarray, np.ndarray]:
    """Chain-of-integrators system matrices for the weight profile."""
    m = np.zeros((STATE_DIM, STATE_DIM))
    for i in range(STATE_DIM - 1):
        m[i, i + 1] = 1.0
    n = np.zeros((STATE_DIM, 1))
    n[STATE_DIM - 1, 0] = 1.0
    return m, n


# ---------------------------------------------------------------------------
# Basis paths
# ---------------------------------------------------------------------------


def _perpendicular_axis(v: np.ndarray, preferred: np.ndarray | None) -> np.ndarray:
    """Unit axis perpendicular to v, preferring the given direction."""
    candidates = []
    if preferred is not None:
        candidates.append(preferred)
    horizontal = np.cross(WORLD_UP, v)
    if np.linalg.norm(horizontal) > 1e-9:
        candidates.append(horizontal)
    candidates.append(np.array([1.0, 0.0, 0.0]))
    candidates.append(np.array([0.0, 1.0, 0.0]))
    for cand in candidates:
        perp = cand - (cand @ v) * v
        if np.linalg.norm(perp) > 1e-9:
            return unit(perp)
    raise ValueError("could not build a perpendicular axis")


@dataclass(frozen=True)
class BasisPath:
    """Camera path around one subject: lerp of distance, slerp of vantage."""

    subject_index: str
    subject_position: np.ndarray
    d0: float
    d1: float
    v0: np.ndarray
    v1: np.ndarray
    antipodal_axis: np.ndarray | None = None

    def vantage(self, u) -> np.ndarray:
        """Spherically interpolated unit vantage vectors, shape (len(u), 3)."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        dot = float(np.clip(self.v0 @ self.v1, -1.0, 1.0))
        if self.antipodal_axis is not None:
            axis = self.antipodal_axis
            ang = np.pi * u
            return (
                np.outer(np.cos(ang), self.v0)
                + np.outer(np.sin(ang), np.cross(axis, self.v0))
            )
        if dot > 1.0 - 1e-12:
            raw = self.v0 + np.outer(u, self.v1 - self.v0)
            return raw / np.linalg.norm(raw, axis=1, keepdims=True)
        omega = math.acos(dot)
        s = math.sin(omega)
        return (
            np.outer(np.sin((1.0 - u) * omega), self.v0)
            + np.outer(np.sin(u * omega), self.v1)
        ) / s

    def distance(self, u) -> np.ndarray:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return self.d0 + (self.d1 - self.d0) * u

    def positions(self, u) -> np.ndarray:
        """Path points, shape (len(u), 3)."""
        return self.subject_position + self.distance(u)[:, None] * self.vantage(u)

    def position(self, u: float) -> np.ndarray:
        return self.positions([u])[0]


def build_basis_paths(
    c0: CameraPose, c1: CameraPose, scene: Scene
) -> tuple[BasisPath, BasisPath]:
    """One basis path per subject between the two endpoint cameras.

    Each path reconstructs both endpoints exactly and never gets closer to
    its own subject than the closer of the two endpoints. Antipodal vantage
    pairs (slerp axis undefined) rotate about an axis aligned with the line
    of action; the resolution is logged, never silent.
    """
    line = scene.subject_b.position - scene.subject_a.position
    preferred_axis = np.cross(WORLD_UP, line)
    paths = []
    for index, subject in (("A", scene.subject_a), ("B", scene.subject_b)):
        q0 = c0.look_from - subject.position
        q1 = c1.look_from - subject.position
        d0 = float(np.linalg.norm(q0))
        d1 = float(np.linalg.norm(q1))
        if d0 < 1e-9 or d1 < 1e-9:
            raise InfeasibleError(f"endpoint camera coincides with subject {index}")
        v0 = q0 / d0
        v1 = q1 / d1
        axis = None
        if float(v0 @ v1) <= -1.0 + 1e-9:
            axis = _perpendicular_axis(v0, preferred_axis)
            log.warning(
                "antipodal vantage vectors for subject %s; rotating about axis %s",
                index,
                np.round(axis, 6),
            )
        paths.append(
            BasisPath(
                subject_index=index,
                subject_position=subject.position.copy(),
                d0=d0,
                d1=d1,
                v0=v0,
                v1=v1,
                antipodal_axis=axis,
            )
        )
    return paths[0], paths[1]


# ---------------------------------------------------------------------------
# Blend optimization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlendProblem:
    """Discretized blend-weight optimization instance."""

    basis_a: BasisPath
    basis_b: BasisPath
    d_min_a: float
    d_min_b: float
    n: int = 50
    smoothness_weight: float = 1e-4
    v_min: float | None = None
    v_max: float | None = None
    m_matrix: np.ndarray = field(default_factory=lambda: continuity_matrices()[0])
    n_matrix: np.ndarray = field(default_factory=lambda: continuity_matrices()[1])

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.v_min is None or self.v_max is None:
            lo, hi = DEFAULT_CONFIG.v_bounds(self.n)
            object.__setattr__(self, "v_min", self.v_min if self.v_min is not None else lo)
            object.__setattr__(self, "v_max", self.v_max if self.v_max is not None else hi)
        if not self.v_min < 0.0 < self.v_max:
            raise ValueError("v bounds must straddle zero")

    @property
    def du(self) -> float:
        return 1.0 / self.n

    def sample_parameters(self) -> np.ndarray:
        return np.arange(self.n + 1) / self.n


@dataclass
class BlendSolution:
    """Solved weight profile: states, controls, and solve metadata."""

    w: np.ndarray  # (n+1, 5) weight value and derivatives at each sample
    v: np.ndarray  # (n,) fifth-derivative controls
    objective_value: float
    converged: bool
    solve_time_ms: float

    @property
    def weights(self) -> np.ndarray:
        return self.w[:, 0]


def integrate_states(problem: BlendProblem, w0: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Propagate the weight state through the discrete integrator."""
    du = problem.du
    m = problem.m_matrix
    n_col = problem.n_matrix[:, 0]
    states = np.empty((problem.n + 1, STATE_DIM))
    states[0] = w0
    for k in range(problem.n):
        states[k + 1] = states[k] + (m @ states[k] + n_col * v[k]) * du
    return states


def blend_objective(problem: BlendProblem, states: np.ndarray) -> float:
    du = problem.du
    return float(
        np.sum((states[:, 0] - 0.5) ** 2) * du
        + problem.smoothness_weight * np.sum(states[:, 4] ** 2) * du
    )


def _propagation_rows(problem: BlendProblem) -> tuple[np.ndarray, np.ndarray]:
    """Linear maps from decision vars x = [w0(5); v(n)] to w values and 4th derivs.

    Returns (W0, W4), each (n+1, 5+n), with w_k[0] = W0[k] @ x and
    w_k[4] = W4[k] @ x.
    """
    n = problem.n
    du = problem.du
    m = problem.m_matrix
    dim = STATE_DIM + n
    s = np.zeros((STATE_DIM, dim))
    s[:, :STATE_DIM] = np.eye(STATE_DIM)
    w0_rows = np.zeros((n + 1, dim))
    w4_rows = np.zeros((n + 1, dim))
    w0_rows[0] = s[0]
    w4_rows[0] = s[4]
    n_col = problem.n_matrix[:, 0]
    for k in range(n):
        s = s + du * (m @ s)
        s[:, STATE_DIM + k] += du * n_col
        w0_rows[k + 1] = s[0]
        w4_rows[k + 1] = s[4]
    return w0_rows, w4_rows


def _distance_terms(problem: BlendProblem):
    """Per-sample quadratic coefficients of the squared subject distances."""
    u = problem.sample_parameters()
    pa = problem.basis_a.positions(u)
    pb = problem.basis_b.positions(u)
    delta = pa - pb
    terms = []
    for center, d_min in (
        (problem.basis_a.subject_position, problem.d_min_a),
        (problem.basis_b.subject_position, problem.d_min_b),
    ):
        b = pb - center
        terms.append(
            {
                "bb": np.einsum("ij,ij->i", b, b),
                "bd": np.einsum("ij,ij->i", b, delta),
                "dd": np.einsum("ij,ij->i", delta, delta),
                "d2": d_min**2,
            }
        )
    return terms, delta


def _half_profile_feasible(problem: BlendProblem, tol: float = 1e-9) -> bool:
    terms, _ = _distance_terms(problem)
    for t in terms:
        dist2 = t["bb"] + t["bd"] + 0.25 * t["dd"]  # w = 1/2
        if np.any(dist2 < t["d2"] - tol * (1.0 + t["d2"])):
            return False
    return True


def solve_blend(problem: BlendProblem) -> BlendSolution:
    """Optimize the blend profile of Eq-style objective and constraints.

    Minimizes sum_k ((w_k - 1/2)^2 + lambda * (d4w/du4)_k^2) du subject to
    the integrator dynamics, 0 <= w <= 1, bounded fifth derivative, and the
    blended path staying outside both safety spheres at every sample.
    Initialized at the constant one-half blend; raises InfeasibleError when
    no constraint-satisfying profile is found.
    """
    start = time.perf_counter()
    n = problem.n

    # The constant 1/2 profile is the unconstrained global optimum (both
    # objective terms vanish), so return it whenever it is feasible.
    if _half_profile_feasible(problem):
        states = np.zeros((n + 1, STATE_DIM))
        states[:, 0] = 0.5
        return BlendSolution(
            w=states,
            v=np.zeros(n),
            objective_value=0.0,
            converged=True,
            solve_time_ms=(time.perf_counter() - start) * 1e3,
        )

    w0_rows, w4_rows = _propagation_rows(problem)
    terms, _ = _distance_terms(problem)
    du = problem.du
    lam = problem.smoothness_weight
    dim = STATE_DIM + n
    half = np.full(n + 1, 0.5)

    # Samples where the basis paths coincide (the shared endpoints) have a
    # weight-independent position; check those directly and drop them from
    # the constraint set so the solver never sees a constant constraint.
    active = [
        np.where(t["dd"] > 1e-16)[0] for t in terms
    ]
    for t, act in zip(terms, active):
        fixed = np.setdiff1d(np.arange(n + 1), act)
        dist2 = t["bb"][fixed] + t["bd"][fixed] + 0.25 * t["dd"][fixed]
        if np.any(dist2 < t["d2"] - 1e-9 * (1.0 + t["d2"])):
            raise InfeasibleError(
                "infeasible: a weight-independent path sample violates a safety sphere"
            )

    def objective(x):
        w = w0_rows @ x
        w4 = w4_rows @ x
        return float(np.sum((w - 0.5) ** 2) * du + lam * np.sum(w4**2) * du)

    def objective_grad(x):
        w = w0_rows @ x
        w4 = w4_rows @ x
        return 2.0 * du * (w0_rows.T @ (w - half) + lam * (w4_rows.T @ w4))

    def bounds_fun(x):
        w = w0_rows @ x
        return np.concatenate([w, 1.0 - w])

    bounds_jac_mat = np.vstack([w0_rows, -w0_rows])

    def bounds_jac(_x):
        return bounds_jac_mat

    def distance_fun(x):
        w = w0_rows @ x
        out = []
        for t, act in zip(terms, active):
            wk = w[act]
            out.append(t["bb"][act] + 2.0 * wk * t["bd"][act] + wk**2 * t["dd"][act] - t["d2"])
        return np.concatenate(out)

    def distance_jac(x):
        w = w0_rows @ x
        rows = []
        for t, act in zip(terms, active):
            wk = w[act]
            scale = 2.0 * t["bd"][act] + 2.0 * wk * t["dd"][act]
            rows.append(scale[:, None] * w0_rows[act])
        return np.vstack(rows)

    variable_bounds = (
        [(0.0, 1.0)] + [(None, None)] * (STATE_DIM - 1) + [(problem.v_min, problem.v_max)] * n
    )
    constraints = [
        {"type": "ineq", "fun": bounds_fun, "jac": bounds_jac},
        {"type": "ineq", "fun": distance_fun, "jac": distance_jac},
    ]

    def make_x0(w_value: float) -> np.ndarray:
        x0 = np.zeros(dim)
        x0[0] = w_value
        return x0

    # The 1/2 start follows the reference initialization; the biased starts
    # are fallbacks toward whichever basis path is safe for the violated
    # sphere.
    starts = [0.5]
    half_path_clearance = []
    for t in terms:
        dist2 = t["bb"] + t["bd"] + 0.25 * t["dd"]
        half_path_clearance.append(float(np.min(dist2 - t["d2"])))
    if half_path_clearance[0] <= half_path_clearance[1]:
        starts += [0.85, 0.15]
    else:
        starts += [0.15, 0.85]

    best: BlendSolution | None = None
    for i, w_start in enumerate(starts):
        res = minimize(
            objective,
            make_x0(w_start),
            jac=objective_grad,
            bounds=variable_bounds,
            constraints=constraints,
            method="SLSQP",
            options={"maxiter": 300, "ftol": 1e-12},
        )
        x = np.asarray(res.x, dtype=float)
        v = np.clip(x[STATE_DIM:], problem.v_min, problem.v_max)
        states = integrate_states(problem, x[:STATE_DIM], v)
        w = states[:, 0]
        w_violation = max(float(np.max(-w, initial=0.0)), float(np.max(w - 1.0, initial=0.0)))
        dist_violation = 0.0
        for t, act in zip(terms, active):
            wk = w[act]
            dist2 = t["bb"][act] + 2.0 * wk * t["bd"][act] + wk**2 * t["dd"][act]
            margin = np.sqrt(np.maximum(dist2, 0.0)) - math.sqrt(t["d2"])
            dist_violation = max(dist_violation, float(np.max(-margin, initial=0.0)))
        feasible = w_violation <= 1e-7 and dist_violation <= 1e-7
        if feasible:
            candidate = BlendSolution(
                w=states,
                v=v,
                objective_value=blend_objective(problem, states),
                converged=bool(res.success),
                solve_time_ms=(time.perf_counter() - start) * 1e3,
            )
            if best is None or candidate.objective_value < best.objective_value:
                best = candidate
            if res.success and i == 0:
                break  # the reference init converged; keep its solution

    if best is None:
        raise InfeasibleError("infeasible: no constraint-satisfying blend profile found")
    best.solve_time_ms = (time.perf_counter() - start) * 1e3
    return best


def blend_path(solution: BlendSolution, basis_a: BasisPath, basis_b: BasisPath) -> np.ndarray:
    """Blend the basis paths with the solved weights: w*sigma_A + (1-w)*sigma_B."""
    n = len(solution.v)
    u = np.arange(n + 1) / n
    pa = basis_a.positions(u)
    pb = basis_b.positions(u)
    w = solution.weights[:, None]
    return pb + w * (pa - pb)


def blend_debug(problem: BlendProblem, solution: BlendSolution) -> dict:
    """Plot-ready dump: weight profile, controls, per-sample subject distances."""
    path = blend_path(solution, problem.basis_a, problem.basis_b)
    dist_a = np.linalg.norm(path - problem.basis_a.subject_position, axis=1)
    dist_b = np.linalg.norm(path - problem.basis_b.subject_position, axis=1)
    return {
        "n": problem.n,
        "u": problem.sample_parameters().tolist(),
        "w": solution.weights.tolist(),
        "v": solution.v.tolist(),
        "distance_to_a": dist_a.tolist(),
        "distance_to_b": dist_b.tolist(),
        "d_min_a": problem.d_min_a,
        "d_min_b": problem.d_min_b,
        "objective_value": solution.objective_value,
        "converged": solution.converged,
        "solve_time_ms": solution.solve_time_ms,
    }


# ---------------------------------------------------------------------------
# Continuous weight interpolation
# ---------------------------------------------------------------------------


class C4Interpolant:
    """Quintic-spline extension of the solved weight profile.

    Interpolates every solved weight value with a C4 quintic spline whose
    first and second endpoint derivatives come from the solved states.
    (Matching all four Euler-state derivatives at every knot instead forces
    large high-degree terms, since forward-Euler states are mutually
    inconsistent at O(du^2), and the resulting curve wiggles between knots.)
    """

    def __init__(self, states: np.ndarray, du: float):
        from scipy.interpolate import make_interp_spline

        states = np.asarray(states, dtype=float)
        if states.ndim != 2 or states.shape[1] != STATE_DIM:
            raise ValueError("states must have shape (n+1, 5)")
        self.n = states.shape[0] - 1
        self.du = du
        u = np.arange(self.n + 1) * du
        values = states[:, 0]
        if np.ptp(values) < 1e-15:
            self._constant = float(values[0])
            self._spline = None
            return
        self._constant = None
        bc = (
            [(1, states[0, 1]), (2, states[0, 2])],
            [(1, states[-1, 1]), (2, states[-1, 2])],
        )
        self._spline = make_interp_spline(u, values, k=5, bc_type=bc)

    def __call__(self, u) -> np.ndarray:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        clipped = np.clip(u, 0.0, 1.0)
        if self._spline is None:
            return np.full_like(clipped, self._constant)
        return np.asarray(self._spline(clipped))

    def derivative(self, u, order: int = 1) -> np.ndarray:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        if self._spline is None:
            return np.zeros_like(u)
        return np.asarray(self._spline.derivative(order)(np.clip(u, 0.0, 1.0)))


# ---------------------------------------------------------------------------
# Easing and trajectories
# ---------------------------------------------------------------------------


# 9th-order polynomial with zero derivatives 1-4 at both endpoints:
# s(x) = 70x^9 - 315x^8 + 540x^7 - 420x^6 + 126x^5, s'(x) = 630 x^4 (1-x)^4.
_EASE_COEFFS = np.array([0, 0, 0, 0, 0, 126, -420, 540, -315, 70], dtype=float)


def _ease_horner(x: np.ndarray) -> np.ndarray:
    out = np.full_like(x, _EASE_COEFFS[-1])
    for p in range(len(_EASE_COEFFS) - 2, -1, -1):
        out = out * x + _EASE_COEFFS[p]
    return out


def ease(x) -> np.ndarray:
    """C4 easing map: s(0)=0, s(1)=1, monotone, derivs 1-4 vanish at the ends.

    Evaluated through the symmetry s(x) = 1 - s(1-x) for x > 1/2, which
    avoids the cancellation of the large alternating coefficients near 1.
    """
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    upper = x > 0.5
    out = np.where(upper, 1.0 - _ease_horner(1.0 - x), _ease_horner(x))
    return out


@dataclass(frozen=True)
class EasingProfile:
    """Reference to the easing curve applied over a given duration."""

    duration: float

    def value(self, x) -> np.ndarray:
        return ease(x)

    def at_time(self, t) -> np.ndarray:
        return ease(np.asarray(t, dtype=float) / self.duration)


def easing_profile(duration: float) -> EasingProfile:
    if not duration > 0:
        raise ValueError("duration must be > 0")
    return EasingProfile(duration=duration)


@dataclass(frozen=True)
class PathGeometry:
    """Continuous look-from/look-at/fov geometry of one planned transition."""

    basis_a: BasisPath
    basis_b: BasisPath
    weights: C4Interpolant
    look_at_start: np.ndarray
    look_at_end: np.ndarray
    fov_start: float
    fov_end: float

    def look_from(self, u) -> np.ndarray:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        w = self.weights(u)[:, None]
        pa = self.basis_a.positions(u)
        pb = self.basis_b.positions(u)
        return pb + w * (pa - pb)

    def look_at(self, u) -> np.ndarray:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return self.look_at_start + np.outer(u, self.look_at_end - self.look_at_start)

    def fov(self, u) -> np.ndarray:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return self.fov_start + u * (self.fov_end - self.fov_start)


@dataclass
class Trajectory:
    """Time-parameterized look-from/look-at/fov samples for the follower."""

    duration: float
    times: np.ndarray
    look_from: np.ndarray  # (m, 3)
    look_at: np.ndarray    # (m, 3)
    fov: np.ndarray        # (m,)
    easing: EasingProfile
    geometry: PathGeometry | None = None

    def __post_init__(self):
        if len(self.times) < 2:
            raise ValueError("trajectory needs at least two samples")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory timestamps must strictly increase")

    @property
    def samples(self) -> list[tuple[float, np.ndarray, np.ndarray, float]]:
        return [
            (float(t), self.look_from[i], self.look_at[i], float(self.fov[i]))
            for i, t in enumerate(self.times)
        ]

    def pose_at_time(self, t: float) -> tuple[np.ndarray, np.ndarray, float]:
        """Linearly interpolated setpoint at a time (clamped to the span)."""
        t = float(np.clip(t, self.times[0], self.times[-1]))
        lf = np.array([np.interp(t, self.times, self.look_from[:, i]) for i in range(3)])
        la = np.array([np.interp(t, self.times, self.look_at[:, i]) for i in range(3)])
        f = float(np.interp(t, self.times, self.fov))
        return lf, la, f

    def resample(self, factor: int) -> "Trajectory":
        """Denser re-evaluation of the same plan (requires geometry)."""
        if self.geometry is None:
            raise ValueError("trajectory has no geometry to resample from")
        m = (len(self.times) - 1) * factor + 1
        times = np.linspace(0.0, self.duration, m)
        s = self.easing.value(times / self.duration)
        return Trajectory(
            duration=self.duration,
            times=times,
            look_from=self.geometry.look_from(s),
            look_at=self.geometry.look_at(s),
            fov=self.geometry.fov(s),
            easing=self.easing,
            geometry=self.geometry,
        )


TRAJECTORY_CSV_HEADER = "t,fx,fy,fz,ax,ay,az,fov_deg"


def trajectory_to_csv(traj: Trajectory) -> str:
    """CSV export: seconds, look-from meters, look-at meters, fov degrees."""
    lines = [TRAJECTORY_CSV_HEADER]
    for i, t in enumerate(traj.times):
        fields = [t, *traj.look_from[i], *traj.look_at[i], traj.fov[i]]
        lines.append(",".join(format(float(x), ".12g") for x in fields))
    return "\n".join(lines) + "\n"


def trajectory_to_dict(traj: Trajectory) -> dict:
    return {
        "duration_s": traj.duration,
        "easing_duration_s": traj.easing.duration,
        "samples": [
            {
                "t": float(t),
                "look_from": traj.look_from[i].tolist(),
                "look_at": traj.look_at[i].tolist(),
                "fov_deg": float(traj.fov[i]),
            }
            for i, t in enumerate(traj.times)
        ],
    }


def _endpoint_clearances(pose: CameraPose, scene: Scene) -> list[tuple[str, float, float]]:
    out = []
    for name, s in (("A", scene.subject_a), ("B", scene.subject_b)):
        out.append((name, float(np.linalg.norm(pose.look_from - s.position)), s.safety_radius))
    return out


def plan_transition(
    from_shot: FramedShot,
    to_shot: FramedShot,
    scene: Scene,
    config: PlannerConfig = DEFAULT_CONFIG,
    limits=None,
) -> Trajectory:
    """Plan the full timed transition between two framed shots.

    The look-from path is the optimally blended basis-path pair; look-at and
    fov are linear interpolations; all three are eased in time and the
    result is time-stretched until the quadrotor limits are satisfied.
    """
    from .dynamics import QuadrotorLimits, time_stretch

    if limits is None:
        limits = QuadrotorLimits()

    for pose, tag in ((from_shot.pose, "start"), (to_shot.pose, "end")):
        for name, dist, radius in _endpoint_clearances(pose, scene):
            if dist < radius - 1e-6:
                raise InfeasibleError(
                    f"unsafe endpoint: {tag} camera is {dist:.3f} m from subject "
                    f"{name} (safety radius {radius:.3f} m)"
                )

    basis_a, basis_b = build_basis_paths(from_shot.pose, to_shot.pose, scene)

    n = config.blend_samples
    best_geometry = None
    best_solution = None
    best_dip = math.inf
    for attempt in range(config.max_densify + 1):
        v_lo, v_hi = config.v_bounds(n)
        problem = BlendProblem(
            basis_a=basis_a,
            basis_b=basis_b,
            d_min_a=scene.subject_a.safety_radius,
            d_min_b=scene.subject_b.safety_radius,
            n=n,
            smoothness_weight=config.smoothness_weight,
            v_min=v_lo,
            v_max=v_hi,
        )
        solution = solve_blend(problem)
        weights = C4Interpolant(solution.w, problem.du)
        geometry = PathGeometry(
            basis_a=basis_a,
            basis_b=basis_b,
            weights=weights,
            look_at_start=from_shot.pose.look_at.copy(),
            look_at_end=to_shot.pose.look_at.copy(),
            fov_start=from_shot.pose.fov,
            fov_end=to_shot.pose.fov,
        )
        dense_u = np.linspace(0.0, 1.0, config.dense_check_factor * n + 1)
        dense = geometry.look_from(dense_u)
        dip = 0.0
        for subject in scene.subjects:
            dist = np.linalg.norm(dense - subject.position, axis=1)
            dip = max(dip, float(np.max(subject.safety_radius - dist, initial=0.0)))
        if dip < best_dip:
            best_dip = dip
            best_geometry = geometry
            best_solution = solution
        if dip <= config.dense_margin:
            break
        n *= 2
        log.info("dense safety dip %.4f m; re-solving blend at n=%d", dip, n)
    assert best_geometry is not None and best_solution is not None
    if best_dip > config.dense_margin:
        log.warning("dense safety dip %.4f m remains after refinement", best_dip)
    geometry = best_geometry

    dense_u = np.linspace(0.0, 1.0, config.dense_check_factor * config.blend_samples + 1)
    dense = geometry.look_from(dense_u)
    arc_length = float(np.sum(np.linalg.norm(np.diff(dense, axis=0), axis=1)))
    duration = max(
        arc_length / (config.duration_speed_fraction * limits.v_max),
        config.min_duration,
    )

    m = max(int(math.ceil(duration * config.sample_rate)), 8)
    times = np.linspace(0.0, duration, m + 1)
    s = ease(times / duration)
    trajectory = Trajectory(
        duration=duration,
        times=times,
        look_from=geometry.look_from(s),
        look_at=geometry.look_at(s),
        fov=geometry.fov(s),
        easing=EasingProfile(duration),
        geometry=geometry,
    )
    return time_stretch(trajectory, limits)
