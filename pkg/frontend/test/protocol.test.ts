import { describe, expect, it } from "vitest";

import {
  encodeClientMessage,
  isValidClientMessage,
  parseServerFrame,
  serverFrameSchema,
} from "../src/protocol.js";

const helloFrame = {
  kind: "hello",
  protocol_version: 1,
  session_id: "green",
  display_identity: "green",
  arena_radius: 400,
  density: 5,
  round_length_s: 180,
};

const stateFrame = {
  kind: "state",
  t: 1.2,
  targets: [{ id: 3, x: 10.5, y: -20, value: 7 }],
  human: { x: -100, y: 0, mark: null },
  ai: { x: 100, y: 0, mark: 3 },
  scores: { human: 0, ai: 5, team: 5 },
};

describe("server frame parsing", () => {
  it("accepts hello and state frames", () => {
    expect(parseServerFrame(JSON.stringify(helloFrame)).kind).toBe("hello");
    const parsed = parseServerFrame(JSON.stringify(stateFrame));
    expect(parsed.kind).toBe("state");
    if (parsed.kind === "state") {
      expect(parsed.targets[0].value).toBe(7);
    }
  });

  it("accepts the block-procedure frames", () => {
    const survey = {
      kind: "survey_request",
      items: Array.from({ length: 8 }, (_, i) => `statement ${i}`),
      identities: ["green", "purple"],
    };
    expect(parseServerFrame(JSON.stringify(survey)).kind).toBe("survey_request");
    expect(
      parseServerFrame(JSON.stringify({ kind: "choice_request", identities: ["a", "b"] })).kind,
    ).toBe("choice_request");
    expect(parseServerFrame(JSON.stringify({ kind: "done" })).kind).toBe("done");
  });

  it("rejects unknown kinds and malformed frames", () => {
    expect(() => parseServerFrame(JSON.stringify({ kind: "telemetry" }))).toThrow();
    expect(() => parseServerFrame("not json")).toThrow();
    expect(() =>
      parseServerFrame(JSON.stringify({ ...stateFrame, targets: [{ id: 1, x: 0, y: 0, value: 16 }] })),
    ).toThrow();
    expect(serverFrameSchema.safeParse({}).success).toBe(false);
  });

  it("never exposes a true agent kind field", () => {
    const parsed = parseServerFrame(JSON.stringify(helloFrame));
    expect(JSON.stringify(parsed)).not.toContain("agent");
  });
});

describe("client message encoding", () => {
  it("round-trips the four allowed kinds", () => {
    const responses = {
      green: Object.fromEntries(Array.from({ length: 8 }, (_, i) => [`q${i + 1}`, 4])),
      purple: Object.fromEntries(Array.from({ length: 8 }, (_, i) => [`q${i + 1}`, 7])),
    };
    for (const msg of [
      { kind: "click", target_id: 12 },
      { kind: "click_center" },
      { kind: "survey_submit", responses },
      { kind: "choice_submit", identity: "green", free_text: "a good teammate" },
    ] as const) {
      expect(JSON.parse(encodeClientMessage(msg as never))).toEqual(msg);
      expect(isValidClientMessage(msg)).toBe(true);
    }
  });

  it("rejects off-protocol messages", () => {
    expect(isValidClientMessage({ kind: "cheat", score: 999 })).toBe(false);
    expect(isValidClientMessage({ kind: "click", target_id: -1 })).toBe(false);
    expect(isValidClientMessage({ kind: "click", target_id: 1.5 })).toBe(false);
    expect(() => encodeClientMessage({ kind: "click", target_id: NaN } as never)).toThrow();
  });

  it("rejects likert values outside 1..7", () => {
    const answers = Object.fromEntries(Array.from({ length: 8 }, (_, i) => [`q${i + 1}`, 4]));
    const bad = { ...answers, q3: 8 };
    expect(isValidClientMessage({ kind: "survey_submit", responses: { g: answers, p: bad } })).toBe(
      false,
    );
  });
});
