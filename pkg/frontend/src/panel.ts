/** Stiffness panel: before/after bar data on a log scale. */
import type { JointReport } from "./types.js";

export interface ModeBar {
  mode: string;
  unit: string;
  before: number;
  after: number;
  /** bar lengths in [0, 1], log-scaled against the before value */
  beforeFrac: number;
  afterFrac: number;
  dropPct: number;
}

const UNITS: Record<string, string> = {
  axial: "N/mm",
  shear: "N/mm",
  bending: "N/deg",
  torsion: "N·mm/deg",
};

export function modeBars(report: JointReport, decadesSpan = 4): ModeBar[] {
  return ["axial", "shear", "bending", "torsion"].map((mode) => {
    const before = report.before[mode];
    const after = report.after[mode];
    const frac = (v: number) =>
      Math.max(0, Math.min(1, 1 + Math.log10(Math.max(v, 1e-12) / before) / decadesSpan));
    return {
      mode,
      unit: UNITS[mode],
      before,
      after,
      beforeFrac: frac(before),
      afterFrac: frac(after),
      dropPct: 100 * (report.drops[mode] ?? 0),
    };
  });
}

export function formatValue(v: number): string {
  if (v >= 1000) return v.toExponential(2);
  if (v >= 1) return v.toFixed(1);
  return v.toPrecision(3);
}
