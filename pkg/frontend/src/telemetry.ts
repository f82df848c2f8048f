/** Latest-value store for incoming reports, with staleness tracking. */

import { PARAM_PREFIX, PARAMS_ADDRESS } from "./protocol.js";
import { Clock } from "./rate.js";

export const STALE_AFTER_MS = 1000;

interface Sample {
  value: number;
  at: number;
}

export class TelemetryStore {
  private samples = new Map<string, Sample>();
  private vector: { values: number[]; at: number } | null = null;

  constructor(private readonly now: Clock) {}

  ingest(address: string, args: number[]): void {
    if (address === PARAMS_ADDRESS) {
      this.vector = { values: args.slice(), at: this.now() };
      return;
    }
    if (address.startsWith(PARAM_PREFIX) && args.length >= 1) {
      this.samples.set(address.slice(PARAM_PREFIX.length), {
        value: args[0],
        at: this.now(),
      });
    }
  }

  /** Latest value for a short parameter name, or null before the first report. */
  value(name: string): number | null {
    return this.samples.get(name)?.value ?? null;
  }

  /** True until a report arrives, and again once one outlives the horizon. */
  stale(name: string, horizonMs: number = STALE_AFTER_MS): boolean {
    const sample = this.samples.get(name);
    if (!sample) return true;
    return this.now() - sample.at > horizonMs;
  }

  params(): number[] | null {
    return this.vector ? this.vector.values.slice() : null;
  }

  paramsStale(horizonMs: number = STALE_AFTER_MS): boolean {
    if (!this.vector) return true;
    return this.now() - this.vector.at > horizonMs;
  }
}

/** Pitch readout text; the wire sends 0.0 while no pitch is detected. */
export function formatPitch(value: number | null): string {
  if (value === null || value === 0) return "—";
  return `${value.toFixed(1)} Hz`;
}

export function formatValue(value: number | null, digits: number = 3): string {
  if (value === null) return "—";
  return value.toFixed(digits);
}
