import { describe, expect, it } from "vitest";
import {
  pointsUp,
  polygonPoints,
  rowPitch,
  sheetExtent,
  triangleHeight,
  triVertices,
} from "../src/gridGeometry.js";
import type { Address, DesignParams } from "../src/types.js";

// the reference 4 x 20 design served by GET /grid
const P: DesignParams = {
  R: 28.64788975654116,
  m: 2,
  N_theta: 10,
  N_z: 4,
  S_0: 18.0,
  S_L: 6.3,
  h_0: 2.0,
  t_f: 1.0,
  t_sheet: 2.0,
  phi_f: 0.5,
  alpha: 1 / 6,
};

// vertex coordinates recorded from the server's placement of the same cells
const SERVER_VERTICES: Array<[Address, [number, number][]]> = [
  [[0, 0], [[0, 0], [18, 0], [9, 15.588457268]]],
  [[0, 1], [[18, 0], [9, 15.588457268], [27, 15.588457268]]],
  [[1, 5], [[63, 17.588457268], [54, 33.176914536], [72, 33.176914536]]],
  [[2, 4], [[36, 35.176914536], [54, 35.176914536], [45, 50.765371804]]],
  [[3, 19], [[189, 52.765371804], [180, 68.353829072], [198, 68.353829072]]],
];

describe("gridGeometry", () => {
  it("matches the server's triangle placement", () => {
    for (const [addr, verts] of SERVER_VERTICES) {
      const got = triVertices(P, addr);
      for (let i = 0; i < 3; i++) {
        expect(got[i][0]).toBeCloseTo(verts[i][0], 6);
        expect(got[i][1]).toBeCloseTo(verts[i][1], 6);
      }
    }
  });

  it("uses the even-columns-point-up convention", () => {
    expect(pointsUp([0, 0])).toBe(true);
    expect(pointsUp([0, 1])).toBe(false);
    expect(pointsUp([3, 18])).toBe(true);
  });

  it("derives row pitch from the stand-off", () => {
    expect(triangleHeight(P)).toBeCloseTo(15.588457268, 6);
    expect(rowPitch(P)).toBeCloseTo(17.588457268, 6);
  });

  it("flips y so row zero renders at the bottom", () => {
    const pts = polygonPoints(P, [0, 0]).split(" ");
    const ys = pts.map((p) => Number(p.split(",")[1]));
    const { height } = sheetExtent(P);
    expect(Math.max(...ys)).toBeCloseTo(height, 3);
    const topRow = polygonPoints(P, [3, 19])
      .split(" ")
      .map((p) => Number(p.split(",")[1]));
    expect(Math.min(...topRow)).toBeCloseTo(0, 3);
  });

  it("sizes the viewport to the sheet (band height H)", () => {
    const { width, height } = sheetExtent(P);
    expect(height).toBeCloseTo(68.353829072, 6);
    expect(width).toBeGreaterThanOrEqual(198);
  });
});
