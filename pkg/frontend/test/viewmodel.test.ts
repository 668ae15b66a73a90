import { describe, expect, it } from "vitest";

import { GameClient, type SocketLike } from "../src/client.js";
import { applyFrame, latestState, newViewModel } from "../src/viewmodel.js";

const hello = {
  kind: "hello",
  protocol_version: 1,
  session_id: "green",
  display_identity: "green",
  arena_radius: 400,
  density: 5,
  round_length_s: 180,
};

function state(t: number) {
  return {
    kind: "state" as const,
    t,
    targets: [],
    human: { x: 0, y: 0, mark: null },
    ai: { x: 0, y: 0, mark: null },
    scores: { human: 1, ai: 2, team: 3 },
  };
}

describe("phase machine", () => {
  it("walks waiting -> playing -> survey -> choice -> done", () => {
    const vm = newViewModel();
    expect(vm.phase).toBe("waiting");
    applyFrame(vm, hello as never, 0);
    expect(vm.phase).toBe("playing");
    applyFrame(vm, { kind: "round_end", scores: { human: 1, ai: 2, team: 3 } }, 0);
    expect(vm.phase).toBe("waiting");
    expect(vm.finalScores?.team).toBe(3);
    applyFrame(
      vm,
      {
        kind: "survey_request",
        items: Array.from({ length: 8 }, () => "s"),
        identities: ["green", "purple"],
      },
      0,
    );
    expect(vm.phase).toBe("survey");
    applyFrame(vm, { kind: "choice_request", identities: ["green", "purple"] }, 0);
    expect(vm.phase).toBe("choice");
    applyFrame(vm, { kind: "done" }, 0);
    expect(vm.phase).toBe("done");
  });

  it("a new hello clears the previous round's buffer", () => {
    const vm = newViewModel();
    applyFrame(vm, hello as never, 0);
    applyFrame(vm, state(1), 10);
    expect(latestState(vm)?.t).toBe(1);
    applyFrame(vm, { ...hello, display_identity: "purple" } as never, 20);
    expect(vm.buffer).toHaveLength(0);
  });

  it("errors are surfaced without changing phase", () => {
    const vm = newViewModel();
    applyFrame(vm, hello as never, 0);
    applyFrame(vm, { kind: "error", message: "invalid target" }, 0);
    expect(vm.phase).toBe("playing");
    expect(vm.lastError).toBe("invalid target");
  });
});

describe("GameClient", () => {
  function fakeSocket(): SocketLike & { sent: string[]; emit(text: string): void } {
    const listeners: Array<(ev: { data: unknown }) => void> = [];
    return {
      sent: [],
      send(data: string) {
        this.sent.push(data);
      },
      addEventListener(_type, listener) {
        listeners.push(listener);
      },
      emit(text: string) {
        for (const l of listeners) l({ data: text });
      },
    };
  }

  it("applies inbound frames and encodes outbound messages", () => {
    const socket = fakeSocket();
    const client = new GameClient(socket, () => 42);
    socket.emit(JSON.stringify(hello));
    expect(client.vm.phase).toBe("playing");
    client.send({ kind: "click", target_id: 5 });
    expect(JSON.parse(socket.sent[0])).toEqual({ kind: "click", target_id: 5 });
  });

  it("refuses to send off-protocol payloads", () => {
    const socket = fakeSocket();
    const client = new GameClient(socket);
    expect(() => client.send({ kind: "debug_dump" } as never)).toThrow();
    expect(socket.sent).toHaveLength(0);
  });

  it("throws on malformed inbound frames", () => {
    const socket = fakeSocket();
    new GameClient(socket);
    expect(() => socket.emit(JSON.stringify({ kind: "mystery" }))).toThrow();
  });
});
