import { describe, expect, it } from "vitest";

import { PARAM_PREFIX, PARAMS_ADDRESS } from "../src/protocol.js";
import { formatPitch, formatValue, TelemetryStore } from "../src/telemetry.js";

describe("TelemetryStore", () => {
  it("stores the latest value per parameter", () => {
    let t = 0;
    const store = new TelemetryStore(() => t);
    store.ingest(PARAM_PREFIX + "Pitch", [220.0]);
    t = 50;
    store.ingest(PARAM_PREFIX + "Pitch", [222.5]);
    expect(store.value("Pitch")).toBe(222.5);
    expect(store.value("Amplitude")).toBeNull();
  });

  it("goes stale after the horizon and only then", () => {
    let t = 0;
    const store = new TelemetryStore(() => t);
    expect(store.stale("Pitch")).toBe(true); // nothing received yet
    store.ingest(PARAM_PREFIX + "Pitch", [220.0]);
    t = 1000;
    expect(store.stale("Pitch")).toBe(false);
    t = 1001;
    expect(store.stale("Pitch")).toBe(true);
  });

  it("tracks the parameter vector separately", () => {
    let t = 0;
    const store = new TelemetryStore(() => t);
    expect(store.params()).toBeNull();
    store.ingest(PARAMS_ADDRESS, [1, 2, 3]);
    expect(store.params()).toEqual([1, 2, 3]);
    expect(store.paramsStale()).toBe(false);
    t = 2000;
    expect(store.paramsStale()).toBe(true);
  });

  it("hands out copies of the vector", () => {
    const store = new TelemetryStore(() => 0);
    store.ingest(PARAMS_ADDRESS, [1, 2]);
    store.params()![0] = 99;
    expect(store.params()).toEqual([1, 2]);
  });

  it("ignores addresses outside the parameter namespace", () => {
    const store = new TelemetryStore(() => 0);
    store.ingest("/Other/Thing", [5]);
    expect(store.value("Thing")).toBeNull();
  });
});

describe("formatting", () => {
  it("renders the absent-pitch sentinel as a dash", () => {
    expect(formatPitch(0)).toBe("—");
    expect(formatPitch(null)).toBe("—");
    expect(formatPitch(440)).toBe("440.0 Hz");
  });

  it("renders plain values with fixed digits", () => {
    expect(formatValue(null)).toBe("—");
    expect(formatValue(0.12345, 3)).toBe("0.123");
  });
});
