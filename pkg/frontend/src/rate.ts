/** Outbound pose throttle: at most one send per interval, latest value wins. */

export const MIN_SEND_INTERVAL_MS = 16;

export type Clock = () => number;
export type Scheduler = (fn: () => void, delayMs: number) => void;

export class RateLimiter<T> {
  private lastSent: number | null = null;
  private pending: T | null = null;
  private armed = false;

  constructor(
    private readonly deliver: (value: T) => void,
    private readonly now: Clock,
    private readonly schedule: Scheduler,
    readonly intervalMs: number = MIN_SEND_INTERVAL_MS,
  ) {}

  /** Send now if the interval has elapsed, else coalesce for the next slot. */
  push(value: T): void {
    const t = this.now();
    if (this.lastSent === null || t - this.lastSent >= this.intervalMs) {
      this.lastSent = t;
      this.deliver(value);
      return;
    }
    this.pending = value;
    if (!this.armed) {
      this.armed = true;
      this.schedule(() => this.fire(), this.lastSent + this.intervalMs - t);
    }
  }

  private fire(): void {
    this.armed = false;
    if (this.pending === null) return;
    const t = this.now();
    // re-arm rather than send early if the timer undershot the slot
    const wait = this.lastSent === null ? 0 : this.lastSent + this.intervalMs - t;
    if (wait > 0) {
      this.armed = true;
      this.schedule(() => this.fire(), wait);
      return;
    }
    const value = this.pending;
    this.pending = null;
    this.lastSent = t;
    this.deliver(value);
  }
}
