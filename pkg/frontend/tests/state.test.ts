import { describe, expect, it } from "vitest";

import { formatMetric, formatThreshold, UNDEFINED_LABEL } from "../src/format.js";
import { decodeSession, defaultSession, encodeSession } from "../src/state.js";

describe("metric formatting", () => {
  it("renders undefined as a dash, never zero", () => {
    expect(formatMetric(null)).toBe(UNDEFINED_LABEL);
    expect(formatMetric(undefined)).toBe(UNDEFINED_LABEL);
    expect(formatMetric(0)).toBe("0.0");
    expect(formatMetric(1)).toBe("1.0");
    expect(formatMetric(1 / 3)).toBe("0.333");
  });

  it("formats the infinite threshold distinctly", () => {
    expect(formatThreshold(null)).toBe("∞");
    expect(formatThreshold(0.75)).toBe("0.75");
  });
});

describe("session state", () => {
  it("round-trips through the URL hash", () => {
    const session = defaultSession();
    session.datasetId = "ds1";
    session.goldId = "g1";
    session.experimentIds = ["e1", "e2"];
    session.view = "pairs";
    session.expression = {
      include: ["gold:g1"],
      exclude: ["experiment:e1"],
      pairMode: "closure",
    };
    const restored = decodeSession(`#${encodeSession(session)}`);
    expect(restored).toEqual(session);
  });

  it("falls back to defaults on garbage", () => {
    expect(decodeSession("#not-json")).toEqual(defaultSession());
    expect(decodeSession("")).toEqual(defaultSession());
  });
});
