/** Schedule timeline geometry: per-voxel heat bars and the cumulative power
 * step curve, with budget-crossing detection. */
import type { Schedule, ScheduleEntry } from "./types.js";

export interface HeatBar {
  label: string;
  row: number;
  start: number;
  end: number;
  duty: number;
}

export function heatBars(schedule: Schedule): HeatBar[] {
  return schedule.entries.map((e, i) => ({
    label: `${e.address[0]},${e.address[1]}`,
    row: i,
    start: e.start_s,
    end: e.end_s,
    duty: e.duty,
  }));
}

function powerAt(entries: ScheduleEntry[], t: number): number {
  let p = 0;
  for (const e of entries) if (e.start_s <= t && t < e.end_s) p += e.power_w;
  return p;
}

/** Right-continuous step curve of total power vs time (starts at t=0). */
export function powerCurve(schedule: Schedule): [number, number][] {
  const times = new Set<number>([0]);
  for (const e of schedule.entries) {
    times.add(e.start_s);
    times.add(e.end_s);
  }
  const sorted = [...times].sort((a, b) => a - b);
  const pts: [number, number][] = [];
  for (const t of sorted) {
    const p = powerAt(schedule.entries, t);
    if (pts.length) pts.push([t, pts[pts.length - 1][1]]);
    pts.push([t, p]);
  }
  return pts;
}

export function maxPower(schedule: Schedule): number {
  return Math.max(0, ...powerCurve(schedule).map(([, p]) => p));
}

/** True when the cumulative power curve never crosses the budget line. */
export function withinBudget(schedule: Schedule, budgetW: number): boolean {
  return maxPower(schedule) <= budgetW + 1e-9;
}

export function makespan(schedule: Schedule): number {
  return schedule.entries.reduce((m, e) => Math.max(m, e.end_s), 0);
}

/** SVG polyline points for the power curve scaled into a w x h viewport. */
export function powerPolyline(
  schedule: Schedule,
  budgetW: number,
  w: number,
  h: number,
): string {
  const span = Math.max(makespan(schedule), 1e-9);
  const peak = Math.max(budgetW, maxPower(schedule), 1e-9);
  return powerCurve(schedule)
    .map(([t, p]) => `${((t / span) * w).toFixed(2)},${(h - (p / peak) * h).toFixed(2)}`)
    .join(" ");
}
