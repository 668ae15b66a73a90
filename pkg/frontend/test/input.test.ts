import { describe, expect, it } from "vitest";

import { dispatchClick, HIT_RADIUS_PX } from "../src/input.js";
import type { Scene } from "../src/interpolate.js";

function scene(targets: Array<{ id: number; x: number; y: number; value?: number }>): Scene {
  return {
    t: 0,
    targets: targets.map((t) => ({ value: 5, ...t })),
    human: { x: -100, y: 0, mark: null },
    ai: { x: 100, y: 0, mark: null },
    scores: { human: 0, ai: 0, team: 0 },
  };
}

describe("dispatchClick", () => {
  it("clicking a target center yields that id", () => {
    const msg = dispatchClick(scene([{ id: 4, x: 50, y: 50 }]), 50, 50);
    expect(msg).toEqual({ kind: "click", target_id: 4 });
  });

  it("hits within 16 px, misses beyond", () => {
    const s = scene([{ id: 1, x: 100, y: 100 }]);
    expect(dispatchClick(s, 100 + HIT_RADIUS_PX, 100)).toEqual({ kind: "click", target_id: 1 });
    expect(dispatchClick(s, 100 + HIT_RADIUS_PX + 0.1, 100)).toBeNull();
  });

  it("equidistant targets tie to the lower id", () => {
    const s = scene([
      { id: 9, x: -10, y: 200 },
      { id: 2, x: 10, y: 200 },
    ]);
    expect(dispatchClick(s, 0, 200)).toEqual({ kind: "click", target_id: 2 });
  });

  it("nearest target wins when both are in range", () => {
    const s = scene([
      { id: 1, x: 0, y: 0 },
      { id: 2, x: 12, y: 0 },
    ]);
    expect(dispatchClick(s, 10, 0)).toEqual({ kind: "click", target_id: 2 });
  });

  it("the center disc maps to click_center", () => {
    expect(dispatchClick(scene([]), 0, 0)).toEqual({ kind: "click_center" });
    expect(dispatchClick(scene([]), 29, 0)).toEqual({ kind: "click_center" });
  });

  it("a target overlapping the center disc takes priority", () => {
    expect(dispatchClick(scene([{ id: 5, x: 8, y: 0 }]), 2, 0)).toEqual({
      kind: "click",
      target_id: 5,
    });
  });

  it("empty space is silent", () => {
    expect(dispatchClick(scene([{ id: 1, x: 300, y: 0 }]), -300, 0)).toBeNull();
  });
});
