// Wire types for the session service (see the repository README).

export interface CameraPoseJson {
  look_from: number[];
  look_at: number[];
  fov_deg: number;
}

export interface SubjectFrame {
  id: string;
  position: number[];
  gaze: number[];
  height: number;
  safety_radius: number;
  distance: number;
  screen: { x: number; y: number } | null;
}

export interface TransitionInfo {
  id: number;
  progress: number;
  duration: number;
}

export interface TelemetryFrame {
  type: string; // state | transition_start | transition_end | snapshot | session_closed
  seq: number;
  t: number;
  quad: {
    position: number[];
    velocity: number[];
    gimbal_pan: number;
    gimbal_tilt: number;
  };
  setpoint: CameraPoseJson;
  camera: CameraPoseJson | null;
  subjects: SubjectFrame[];
  transitioning: boolean;
  transition: TransitionInfo | null;
  tracking_error: number;
  planned_path?: number[][];
}

export interface SessionInfo {
  id: string;
  state: string;
  line_of_action_side: string;
  fov_max_deg: number;
  aspect_ratio: number;
  tick_rate: number;
}

export interface Snapshot extends TelemetryFrame {
  session: SessionInfo;
}

export interface ShotSummary {
  transition_id: number;
  duration_s: number;
  crop_warning: boolean;
  fov_deg: number;
  uncropped_fov_deg: number;
  target_screen_points: { target: string; x: number; y: number }[];
}
