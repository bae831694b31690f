/** Unwrapped-sheet triangle placement, matching the server's conventions:
 * row r occupies the strip between r*(tri_h + h_0) and +tri_h, odd rows are
 * shifted half an edge, and even columns point up. */
import type { Address, DesignParams } from "./types.js";

const SQRT3_2 = Math.sqrt(3) / 2;

export function triangleHeight(p: DesignParams): number {
  return SQRT3_2 * p.S_0;
}

export function rowPitch(p: DesignParams): number {
  return triangleHeight(p) + p.h_0;
}

export function pointsUp(addr: Address): boolean {
  return addr[1] % 2 === 0;
}

export function triVertices(p: DesignParams, addr: Address): [number, number][] {
  const [r, c] = addr;
  const s = p.S_0;
  const x0 = r % 2 ? 0.5 * s : 0.0;
  const y0 = r * rowPitch(p);
  const y1 = y0 + triangleHeight(p);
  if (pointsUp(addr)) {
    const j = Math.floor(c / 2);
    return [
      [x0 + j * s, y0],
      [x0 + (j + 1) * s, y0],
      [x0 + (j + 0.5) * s, y1],
    ];
  }
  const j = Math.floor((c + 1) / 2);
  return [
    [x0 + j * s, y0],
    [x0 + (j - 0.5) * s, y1],
    [x0 + (j + 0.5) * s, y1],
  ];
}

export function sheetExtent(p: DesignParams): { width: number; height: number } {
  const cols = p.N_theta * p.m;
  const width = (cols / 2 + 1) * p.S_0;
  const height = (p.N_z - 1) * rowPitch(p) + triangleHeight(p);
  return { width, height };
}

/** SVG polygon points attribute with y flipped so row 0 sits at the bottom. */
export function polygonPoints(p: DesignParams, addr: Address): string {
  const { height } = sheetExtent(p);
  return triVertices(p, addr)
    .map(([x, y]) => `${x.toFixed(3)},${(height - y).toFixed(3)}`)
    .join(" ");
}
