/**
 * Linear interpolation between the two buffered 15 Hz server frames so the
 * canvas can redraw at display rate. No prediction: positions are never
 * extrapolated past the newest frame (the server is authoritative and a
 * mispredicted interception would mislead the player).
 */
import type { StateFrame, Target } from "./protocol.js";
import type { ViewModel } from "./viewmodel.js";

export interface Scene {
  t: number;
  targets: Target[];
  human: { x: number; y: number; mark: number | null };
  ai: { x: number; y: number; mark: number | null };
  scores: { human: number; ai: number; team: number };
}

function lerp(a: number, b: number, u: number): number {
  return a + (b - a) * u;
}

function sceneOf(frame: StateFrame): Scene {
  return {
    t: frame.t,
    targets: frame.targets,
    human: { ...frame.human },
    ai: { ...frame.ai },
    scores: frame.scores,
  };
}

/**
 * Scene at `displayMs` wall-clock time. `u` is the fraction of the
 * inter-frame interval elapsed since the newer frame's arrival, clamped to
 * [0, 1]; targets present in only one frame (spawned/removed mid-interval)
 * take the newer frame's position.
 */
export function interpolate(vm: ViewModel, displayMs: number): Scene | null {
  const n = vm.buffer.length;
  if (n === 0) return null;
  if (n === 1) return sceneOf(vm.buffer[0]);
  const [prev, next] = vm.buffer;
  const intervalMs = (next.t - prev.t) * 1000;
  if (intervalMs <= 0) return sceneOf(next);
  // render behind by one interval: walk prev -> next as wall time advances
  const u = Math.min(Math.max((displayMs - vm.lastFrameAt) / intervalMs, 0), 1);
  const prevById = new Map(prev.targets.map((t) => [t.id, t]));
  const targets = next.targets.map((t) => {
    const p = prevById.get(t.id);
    if (!p) return t;
    return { ...t, x: lerp(p.x, t.x, u), y: lerp(p.y, t.y, u) };
  });
  return {
    t: lerp(prev.t, next.t, u),
    targets,
    human: {
      x: lerp(prev.human.x, next.human.x, u),
      y: lerp(prev.human.y, next.human.y, u),
      mark: next.human.mark,
    },
    ai: {
      x: lerp(prev.ai.x, next.ai.x, u),
      y: lerp(prev.ai.y, next.ai.y, u),
      mark: next.ai.mark,
    },
    scores: next.scores,
  };
}
