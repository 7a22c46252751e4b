import type { AssistConfigWire, CatalogMsg, ClientMsg, DoneMsg, ErrorMsg, ServerMsg } from "./protocol";
import { PROTOCOL_VERSION } from "./protocol";
import { StateBuffer } from "./stateBuffer";

export type Phase =
  | "greeting" // hello sent, waiting for the catalog
  | "ready" // catalog in hand, nothing started
  | "starting" // start sent, waiting for the first state
  | "running"
  | "done"
  | "invalid" // protocol desync (e.g. bad-seq); only a restart gets out
  | "failed"; // handshake rejected

// Protocol state machine for one connection, transport-agnostic: messages
// go out through the injected send function and come back via receive().
// Sends hello on construction; one session per connection, like the server.
export class TrialSession {
  phase: Phase = "greeting";
  catalog: CatalogMsg | null = null;
  result: DoneMsg | null = null;
  lastError: ErrorMsg | null = null;
  readonly buffer = new StateBuffer();
  private seq = 0;

  constructor(private sendRaw: (msg: ClientMsg) => void) {
    this.sendRaw({ type: "hello", protocolVersion: PROTOCOL_VERSION });
  }

  start(taskSpecId: string, assistConfig?: AssistConfigWire): boolean {
    if (this.phase !== "ready") return false;
    this.phase = "starting";
    this.seq = 0;
    this.buffer.clear();
    if (assistConfig === undefined) {
      this.sendRaw({ type: "start", taskSpecId });
    } else {
      this.sendRaw({ type: "start", taskSpecId, assistConfig });
    }
    return true;
  }

  // dt in seconds; omitted means "advance exactly one tick" on the server.
  sendInput(dx: number, dy: number, dt?: number): boolean {
    if (this.phase !== "running") return false;
    const msg: ClientMsg =
      dt === undefined
        ? { type: "input", seq: this.seq, dx, dy }
        : { type: "input", seq: this.seq, dx, dy, dt };
    this.seq += 1;
    this.sendRaw(msg);
    return true;
  }

  receive(msg: ServerMsg): void {
    switch (msg.type) {
      case "catalog":
        if (this.phase === "greeting") {
          this.catalog = msg;
          this.phase = "ready";
        }
        break;
      case "state":
        this.buffer.put(msg);
        if (this.phase === "starting") this.phase = "running";
        break;
      case "done":
        this.result = msg;
        this.phase = "done";
        break;
      case "error":
        this.lastError = msg;
        if (this.phase === "greeting") this.phase = "failed";
        else if (this.phase === "starting" || this.phase === "running") this.phase = "invalid";
        break;
    }
  }
}
