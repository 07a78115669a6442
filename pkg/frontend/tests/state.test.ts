import { describe, expect, it, vi } from "vitest";

import { DEFAULT_STATE, ViewState, debounce, decodeState, encodeState } from "../src/state.js";

describe("view state fragment", () => {
  it("round-trips every field", () => {
    const state: ViewState = {
      sessionId: "abc123",
      colorMode: "group",
      showMedoidTree: true,
      showPath: false,
      showMstEdges: true,
      showContours: false,
      pcaDims: 25,
      degree: 4,
      bandwidth: 1.5,
      seed: 987654321,
      endpoints: ["r12", "r400"],
    };
    expect(decodeState(encodeState(state))).toEqual(state);
  });

  it("round-trips defaults and null bandwidth", () => {
    const state: ViewState = { sessionId: "s", ...DEFAULT_STATE };
    expect(decodeState(encodeState(state))).toEqual(state);
  });

  it("rejects fragments without a session", () => {
    expect(decodeState("#c=group")).toBeNull();
    expect(decodeState("")).toBeNull();
  });

  it("ignores malformed numbers", () => {
    const state = decodeState("#s=x&d=oops&g=-3&r=1.5");
    expect(state).not.toBeNull();
    expect(state!.pcaDims).toBe(DEFAULT_STATE.pcaDims);
    expect(state!.degree).toBe(DEFAULT_STATE.degree);
    expect(state!.seed).toBe(DEFAULT_STATE.seed);
  });
});

describe("debounce", () => {
  it("a burst of slider events produces a single call", () => {
    vi.useFakeTimers();
    const calls: number[] = [];
    const fire = debounce((v: number) => calls.push(v), 250);
    for (let i = 0; i < 10; i++) fire(i);
    vi.advanceTimersByTime(249);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(2);
    expect(calls).toEqual([9]);
    vi.useRealTimers();
  });

  it("separated events each fire", () => {
    vi.useFakeTimers();
    const calls: number[] = [];
    const fire = debounce((v: number) => calls.push(v), 250);
    fire(1);
    vi.advanceTimersByTime(300);
    fire(2);
    vi.advanceTimersByTime(300);
    expect(calls).toEqual([1, 2]);
    vi.useRealTimers();
  });
});
