/**
 * Canvas renderer: a pure function of (scene, layout). Targets are discs
 * with a value-proportional orange fill and the numeric value; each avatar's
 * pursued target carries a cross-hair — axis-aligned for the human, rotated
 * 45 degrees for the AI so simultaneous marks stay distinguishable.
 */
import type { Scene } from "./interpolate.js";

export const TARGET_RADIUS_PX = 12;
export const AVATAR_RADIUS_PX = 10;
export const MAX_TARGET_VALUE = 15;

export interface Layout {
  width: number;
  height: number;
  arenaRadius: number;
}

/** Arena coordinates (origin at center, y up) -> canvas pixels. */
export function toScreen(layout: Layout, x: number, y: number): [number, number] {
  const scale = Math.min(layout.width, layout.height) / (2 * layout.arenaRadius + 40);
  return [layout.width / 2 + x * scale, layout.height / 2 - y * scale];
}

function crossHair(
  ctx: CanvasRenderingContext2D,
  cx: number,
  cy: number,
  rotated: boolean,
  color: string,
): void {
  const r = TARGET_RADIUS_PX + 6;
  ctx.save();
  ctx.translate(cx, cy);
  if (rotated) ctx.rotate(Math.PI / 4);
  ctx.strokeStyle = color;
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(-r, 0);
  ctx.lineTo(r, 0);
  ctx.moveTo(0, -r);
  ctx.lineTo(0, r);
  ctx.stroke();
  ctx.restore();
}

export function renderFrame(
  ctx: CanvasRenderingContext2D,
  scene: Scene,
  layout: Layout,
  identity: { name: string; color: string },
): void {
  ctx.clearRect(0, 0, layout.width, layout.height);
  const scale = Math.min(layout.width, layout.height) / (2 * layout.arenaRadius + 40);

  // arena rim and center disc
  const [cx, cy] = toScreen(layout, 0, 0);
  ctx.strokeStyle = "#444";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.arc(cx, cy, layout.arenaRadius * scale, 0, 2 * Math.PI);
  ctx.stroke();
  ctx.fillStyle = "#e8e8e8";
  ctx.beginPath();
  ctx.arc(cx, cy, 30 * scale, 0, 2 * Math.PI);
  ctx.fill();

  for (const t of scene.targets) {
    const [x, y] = toScreen(layout, t.x, t.y);
    ctx.fillStyle = "#fff";
    ctx.strokeStyle = "#333";
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    ctx.arc(x, y, TARGET_RADIUS_PX, 0, 2 * Math.PI);
    ctx.fill();
    ctx.stroke();
    // orange fill rises with value: a clipped disc filled from the bottom
    const frac = t.value / MAX_TARGET_VALUE;
    if (frac > 0) {
      ctx.save();
      ctx.beginPath();
      ctx.arc(x, y, TARGET_RADIUS_PX - 1, 0, 2 * Math.PI);
      ctx.clip();
      ctx.fillStyle = "#f90";
      const h = 2 * (TARGET_RADIUS_PX - 1) * frac;
      ctx.fillRect(x - TARGET_RADIUS_PX, y + TARGET_RADIUS_PX - 1 - h, 2 * TARGET_RADIUS_PX, h);
      ctx.restore();
    }
    ctx.fillStyle = "#000";
    ctx.font = "10px sans-serif";
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(String(t.value), x, y);
  }

  const byId = new Map(scene.targets.map((t) => [t.id, t]));
  for (const [avatar, rotated, color] of [
    [scene.human, false, "#06c"],
    [scene.ai, true, identity.color],
  ] as const) {
    const [x, y] = toScreen(layout, avatar.x, avatar.y);
    ctx.fillStyle = color;
    ctx.beginPath();
    ctx.arc(x, y, AVATAR_RADIUS_PX, 0, 2 * Math.PI);
    ctx.fill();
    if (avatar.mark !== null) {
      const marked = byId.get(avatar.mark);
      if (marked) {
        const [mx, my] = toScreen(layout, marked.x, marked.y);
        crossHair(ctx, mx, my, rotated, color);
      }
    }
  }

  ctx.fillStyle = "#000";
  ctx.font = "14px sans-serif";
  ctx.textAlign = "left";
  ctx.textBaseline = "top";
  ctx.fillText(
    `team ${scene.scores.team}   you ${scene.scores.human}   ${identity.name} ${scene.scores.ai}`,
    8,
    8,
  );
}
