/**
 * Client-side state: a small frame buffer for interpolation plus the phase
 * machine driven entirely by server frames. Holds only protocol-delivered
 * data — in particular it has no notion of which agent kind is playing.
 */
import type { Hello, ServerFrame, StateFrame } from "./protocol.js";

export type Phase = "waiting" | "playing" | "survey" | "choice" | "done";

export interface ViewModel {
  phase: Phase;
  hello: Hello | null;
  /** last two state frames, oldest first */
  buffer: StateFrame[];
  /** wall-clock ms at which buffer[buffer.length-1] arrived */
  lastFrameAt: number;
  surveyItems: string[];
  identities: [string, string] | null;
  lastError: string | null;
  finalScores: { human: number; ai: number; team: number } | null;
}

export function newViewModel(): ViewModel {
  return {
    phase: "waiting",
    hello: null,
    buffer: [],
    lastFrameAt: 0,
    surveyItems: [],
    identities: null,
    lastError: null,
    finalScores: null,
  };
}

export function applyFrame(vm: ViewModel, frame: ServerFrame, nowMs: number): void {
  switch (frame.kind) {
    case "hello":
      vm.hello = frame;
      vm.phase = "playing";
      vm.buffer = [];
      vm.finalScores = null;
      break;
    case "state":
      vm.buffer.push(frame);
      if (vm.buffer.length > 2) vm.buffer.shift();
      vm.lastFrameAt = nowMs;
      break;
    case "round_end":
      vm.finalScores = frame.scores;
      vm.phase = "waiting";
      break;
    case "survey_request":
      vm.surveyItems = frame.items;
      vm.identities = [frame.identities[0], frame.identities[1]];
      vm.phase = "survey";
      break;
    case "choice_request":
      vm.identities = [frame.identities[0], frame.identities[1]];
      vm.phase = "choice";
      break;
    case "error":
      vm.lastError = frame.message;
      break;
    case "done":
      vm.phase = "done";
      break;
  }
}

export function latestState(vm: ViewModel): StateFrame | null {
  return vm.buffer.length ? vm.buffer[vm.buffer.length - 1] : null;
}
