/** Wire types mirroring the voxelskin service JSON schemas. */

export type Address = [number, number];

export interface DesignParams {
  R: number;
  m: number;
  N_theta: number;
  N_z: number;
  S_0: number;
  S_L: number;
  h_0: number;
  t_f: number;
  t_sheet: number;
  phi_f: number;
  alpha: number;
}

export interface CellState {
  address: Address;
  phase: "solid" | "melting" | "melted" | "cooling";
  health: "healthy" | "fractured" | "trimmed";
  phase_fraction: number;
}

export interface GridResponse {
  version: number;
  params: DesignParams;
  cells: CellState[];
}

export interface StiffnessValues {
  axial: number;
  shear: number;
  bending: number;
  torsion: number;
  [key: string]: number;
}

export interface JointReport {
  pattern: string;
  axis_deg: number;
  before: StiffnessValues;
  after: StiffnessValues;
  drops: Record<string, number>;
  dominant_mode: string;
  rotational_before: number | null;
  rotational_after: number | null;
}

export interface EvaluateResponse {
  version: number;
  report: JointReport;
  localization: number | null;
}

export interface PatternResponse {
  version: number;
  label: string;
  addresses: Address[];
}

export interface PresetSpec {
  kind: string;
  location: Address;
  band_width: number | null;
  magnitude: string | null;
  rows_activated: number;
  stagger: number | null;
}

export interface PresetPattern {
  label: string;
  spec: PresetSpec | null;
  addresses: Address[];
}

export interface ScheduleEntry {
  address: Address;
  start_s: number;
  end_s: number;
  duty: number;
  power_w: number;
}

export interface Schedule {
  entries: ScheduleEntry[];
  makespan_s: number;
  deadline_violations: Address[];
  cooldown_s: number;
}

export interface TimelinePoint {
  t: number;
  voxel: Address;
  duty: number;
  cumulative_power: number;
}

export interface ScheduleResponse {
  version: number;
  schedule: Schedule;
  power_timeline: TimelinePoint[];
}
