/**
 * Click capture: map an arena-space point to a protocol message, or nothing.
 * Targets win within a 16 px hit radius (slightly larger than the drawn
 * target) with ties to the lowest id; the shaded center disc maps to
 * click_center; empty space is silent.
 */
import type { ClientMessage } from "./protocol.js";
import type { Scene } from "./interpolate.js";

export const HIT_RADIUS_PX = 16;
export const CENTER_DISC_RADIUS_PX = 30;

export function dispatchClick(scene: Scene, x: number, y: number): ClientMessage | null {
  let bestId: number | null = null;
  let bestDist = Infinity;
  for (const t of scene.targets) {
    const d = Math.hypot(t.x - x, t.y - y);
    if (d > HIT_RADIUS_PX) continue;
    if (d < bestDist || (d === bestDist && (bestId === null || t.id < bestId))) {
      bestDist = d;
      bestId = t.id;
    }
  }
  if (bestId !== null) return { kind: "click", target_id: bestId };
  if (Math.hypot(x, y) <= CENTER_DISC_RADIUS_PX) return { kind: "click_center" };
  return null;
}
