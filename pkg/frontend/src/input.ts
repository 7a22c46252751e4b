// Relative-motion capture: pointer lock on the canvas, movement deltas
// accumulated until the send loop takes them. The browser drops the lock
// on Escape by itself, so "Escape aborts" arrives as a lock-change.

export class DeltaAccumulator {
  private dx = 0;
  private dy = 0;

  add(dx: number, dy: number): void {
    this.dx += dx;
    this.dy += dy;
  }

  take(): { dx: number; dy: number } {
    const out = { dx: this.dx, dy: this.dy };
    this.dx = 0;
    this.dy = 0;
    return out;
  }
}

export class RelativeCapture {
  readonly deltas = new DeltaAccumulator();
  onLockChange: (locked: boolean) => void = () => {};

  constructor(private canvas: HTMLCanvasElement) {
    canvas.addEventListener("mousemove", (e) => {
      if (this.locked) this.deltas.add(e.movementX, e.movementY);
    });
    document.addEventListener("pointerlockchange", () => {
      this.onLockChange(this.locked);
    });
  }

  get locked(): boolean {
    return document.pointerLockElement === this.canvas;
  }

  engage(): void {
    this.canvas.requestPointerLock();
  }

  release(): void {
    if (this.locked) document.exitPointerLock();
  }
}
