/**
 * Socket glue: one connection, inbound frames applied atomically to the
 * ViewModel, outbound messages funneled through the protocol encoder so
 * nothing off-schema can leave the client.
 */
import { encodeClientMessage, parseServerFrame, type ClientMessage } from "./protocol.js";
import { applyFrame, newViewModel, type ViewModel } from "./viewmodel.js";

export interface SocketLike {
  send(data: string): void;
  addEventListener(type: "message", listener: (ev: { data: unknown }) => void): void;
}

export class GameClient {
  readonly vm: ViewModel = newViewModel();

  constructor(
    private readonly socket: SocketLike,
    private readonly now: () => number = () => Date.now(),
  ) {
    socket.addEventListener("message", (ev) => {
      this.receive(String(ev.data));
    });
  }

  receive(text: string): void {
    applyFrame(this.vm, parseServerFrame(text), this.now());
  }

  send(msg: ClientMessage): void {
    this.socket.send(encodeClientMessage(msg));
  }
}
