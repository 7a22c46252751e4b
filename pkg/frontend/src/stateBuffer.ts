import type { StateMsg, TickEvent } from "./protocol";

// Sits between the network callback and the render loop. The loop only
// draws the newest state (older ones are fine to skip), but events carried
// by skipped states must still reach the feed, so they accumulate here
// until taken.
export class StateBuffer {
  private latest: StateMsg | null = null;
  private events: TickEvent[] = [];

  put(state: StateMsg): void {
    this.latest = state;
    if (state.eventsSinceLast.length > 0) this.events.push(...state.eventsSinceLast);
  }

  peek(): StateMsg | null {
    return this.latest;
  }

  takeEvents(): TickEvent[] {
    if (this.events.length === 0) return [];
    const taken = this.events;
    this.events = [];
    return taken;
  }

  clear(): void {
    this.latest = null;
    this.events = [];
  }
}
